"""Shared test utilities: naive oracles and random domain samplers.

The naive functions here deliberately re-derive results from definitions
with the dumbest possible loops so the package's optimized routines have
something independent to agree with.
"""

from itertools import combinations, product

from agorad.domain import Domain, build_domain, validate

TOKENS = ("a", "b", "c", "d", "e")


def random_domain(rng, *, max_issues=3, max_alphabet=3, max_rows=10):
    """Non-degenerate random domain, sizes bounded for desk-scale suites."""
    while True:
        m = rng.randint(1, max_issues)
        sizes = [rng.randint(2, max_alphabet) for _ in range(m)]
        alphabets = [TOKENS[:s] for s in sizes]
        universe = list(product(*alphabets))
        k = rng.randint(2, min(max_rows, len(universe)))
        rows = rng.sample(universe, k)
        d = build_domain(alphabets, rows)
        if validate(d).ok:
            return d


def random_boolean_domain(rng, *, max_issues=3):
    while True:
        m = rng.randint(1, max_issues)
        alphabets = [("0", "1")] * m
        universe = list(product(*alphabets))
        k = rng.randint(2, len(universe))
        rows = rng.sample(universe, k)
        d = build_domain(alphabets, rows)
        if validate(d).ok:
            return d


def naive_is_closed(d: Domain, agg) -> bool:
    """Definition-level closure check: independent double loop, no indexing
    tricks shared with the package implementation."""
    for selection in product(d.feasible, repeat=agg.arity):
        image = []
        for j in range(1, d.issue_count + 1):
            column = tuple(row[j - 1] for row in selection)
            image.append(agg.component(j).apply(column))
        if tuple(image) not in d.feasible_set:
            return False
    return True


def naive_multiply_constrained(d: Domain) -> bool:
    """Definition-level scan over every sub-box for a length->=3 minimal
    infeasible partial evaluation."""
    m = d.issue_count
    if m < 3:
        return False
    per_issue_subsets = []
    for jj in range(m):
        proj = d.projections[jj]
        subsets = []
        for size in range(1, len(proj) + 1):
            subsets.extend(combinations(proj, size))
        per_issue_subsets.append(subsets)
    for cells in product(*per_issue_subsets):
        in_box = [
            row
            for row in d.feasible
            if all(row[jj] in cells[jj] for jj in range(m))
        ]

        def extends(support, assignment):
            return any(
                all(row[jj] == v for jj, v in zip(support, assignment))
                for row in in_box
            )

        for size in range(3, m + 1):
            for support in combinations(range(m), size):
                for assignment in product(*(cells[jj] for jj in support)):
                    if extends(support, assignment):
                        continue
                    minimal = True
                    for i, jj in enumerate(support):
                        fixed = [
                            (jj2, v)
                            for k2, (jj2, v) in enumerate(zip(support, assignment))
                            if k2 != i
                        ]
                        if not any(
                            alt != assignment[i]
                            and any(
                                row[jj] == alt
                                and all(row[jj2] == v for jj2, v in fixed)
                                for row in in_box
                            )
                            for alt in cells[jj]
                        ):
                            minimal = False
                            break
                    if minimal:
                        return True
    return False


def boolean_table(tag: str):
    """Reference truth tables of the four named ops on {0, 1}."""

    def maj(x, y, z):
        return x if x == y or x == z else y

    def xor3(x, y, z):
        return x ^ y ^ z

    def and3(x, y, z):
        return x & y & z

    def or3(x, y, z):
        return x | y | z

    return {"MAJ": maj, "XOR3": xor3, "AND3": and3, "OR3": or3}[tag]
