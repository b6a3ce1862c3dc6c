#!/usr/bin/env python3
"""Analyze every built-in fixture and print the reports back to back."""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from agorad.classify import AnalysisOptions, analyze, serialize_report
from agorad.fixtures import fixture_domain

FIXTURES = ("w", "example2", "example3", "wxw", "y-horn", "z-affine", "yz-product")


def main() -> int:
    for name in FIXTURES:
        domain = fixture_domain(name)
        start = time.monotonic()
        report = analyze(domain, AnalysisOptions(diagnostics=True))
        elapsed = time.monotonic() - start
        print(f"# {name} ({elapsed:.2f}s)")
        print(serialize_report(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
