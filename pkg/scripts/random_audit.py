#!/usr/bin/env python3
"""Cross-validate the decision procedures on random domains.

Three independent agreements are audited:
  blocked   strong connectivity of the pair graph vs the binary oracle
  ternary   the three-way witness disjunction vs the ternary oracle
            (boolean domains only)
  uniform   the direct uniform search vs the folded per-pair route

Exits non-zero on the first disagreement, printing the offending domain.
"""

import argparse
import random
import sys
import time
import warnings
from itertools import product
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from agorad.blockedness import EmptyBoxWarning  # noqa: E402

warnings.simplefilter("ignore", EmptyBoxWarning)

from agorad.blockedness import is_totally_blocked
from agorad.domain import build_domain, serialize_domain, validate
from agorad.search import (
    EXHAUSTED,
    FOUND,
    bruteforce_binary,
    bruteforce_ternary_nontrivial,
    find_binary_nondictatorial,
    find_majority,
    find_minority,
    find_uniform,
    fold_diamond_cover,
)

TOKENS = ("a", "b", "c", "d", "e")


def sample_domain(rng, max_issues, max_alphabet, max_rows, boolean):
    while True:
        m = rng.randint(1, max_issues)
        sizes = [2 if boolean else rng.randint(2, max_alphabet) for _ in range(m)]
        alphabets = [TOKENS[:s] for s in sizes]
        universe = list(product(*alphabets))
        k = rng.randint(2, min(max_rows, len(universe)))
        rows = rng.sample(universe, k)
        d = build_domain(alphabets, rows)
        if validate(d).ok:
            return d


def audit_blocked(d) -> bool:
    blocked, _ = is_totally_blocked(d)
    return blocked == (bruteforce_binary(d).status == EXHAUSTED)


def audit_ternary(d) -> bool:
    disjunction = (
        find_binary_nondictatorial(d).status == FOUND
        or find_majority(d).status == FOUND
        or find_minority(d).status == FOUND
    )
    return disjunction == (bruteforce_ternary_nontrivial(d).status == FOUND)


def audit_uniform(d) -> bool:
    return find_uniform(d).status == fold_diamond_cover(d).status


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-issues", type=int, default=3)
    parser.add_argument("--max-alphabet", type=int, default=3)
    parser.add_argument("--max-rows", type=int, default=10)
    parser.add_argument(
        "--check",
        choices=("blocked", "ternary", "uniform", "all"),
        default="all",
    )
    args = parser.parse_args()

    rng = random.Random(args.seed)
    checks = []
    if args.check in ("blocked", "all"):
        checks.append(("blocked", audit_blocked, False))
    if args.check in ("ternary", "all"):
        checks.append(("ternary", audit_ternary, True))
    if args.check in ("uniform", "all"):
        checks.append(("uniform", audit_uniform, False))

    start = time.monotonic()
    for i in range(args.count):
        for label, audit, boolean_only in checks:
            d = sample_domain(
                rng, args.max_issues, args.max_alphabet, args.max_rows, boolean_only
            )
            if not audit(d):
                print(f"DISAGREEMENT in {label} on domain #{i}:")
                print(serialize_domain(d))
                return 1
    elapsed = time.monotonic() - start
    print(f"{args.count} domains per check, all agree ({elapsed:.1f}s)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
