"""Built-in example domains, emitted as canonical domain file text."""

from __future__ import annotations

import re
from itertools import product

from .domain import Domain, build_domain, product_domain, serialize_domain

_BOOL = ("0", "1")


def _w() -> Domain:
    # exactly one approval across three issues
    rows = [("1", "0", "0"), ("0", "1", "0"), ("0", "0", "1")]
    return build_domain([_BOOL, _BOOL, _BOOL], rows)


def _example2() -> Domain:
    abc = ("a", "b", "c")
    rows = [
        ("a", "a", "a"),
        ("b", "b", "b"),
        ("c", "c", "c"),
        ("a", "b", "b"),
        ("b", "a", "a"),
        ("a", "a", "c"),
        ("c", "c", "a"),
    ]
    return build_domain([abc, abc, abc], rows)


def _example3() -> Domain:
    abc = ("a", "b", "c")
    rows = [("a", "b", "c"), ("b", "a", "a"), ("c", "a", "a")]
    return build_domain([abc, abc, abc], rows)


def _y_horn() -> Domain:
    rows = [r for r in product(_BOOL, repeat=3) if r != ("1", "1", "0")]
    return build_domain([_BOOL, _BOOL, _BOOL], rows)


def _z_affine() -> Domain:
    rows = [("1", "1", "0"), ("0", "1", "1"), ("1", "0", "1"), ("0", "0", "0")]
    return build_domain([_BOOL, _BOOL, _BOOL], rows)


def _wxw() -> Domain:
    return product_domain(_w(), _w())


def _yz_product() -> Domain:
    return product_domain(_y_horn(), _z_affine())


def _full_boolean(m: int) -> Domain:
    rows = list(product(_BOOL, repeat=m))
    return build_domain([_BOOL] * m, rows)


_BUILDERS = {
    "w": _w,
    "example2": _example2,
    "example3": _example3,
    "wxw": _wxw,
    "y-horn": _y_horn,
    "z-affine": _z_affine,
    "yz-product": _yz_product,
}

_FULL_BOOLEAN = re.compile(r"^full-boolean-([1-9]\d*)$")


def fixture_names() -> list[str]:
    """Known fixture names; full-boolean-<m> accepts m up to 6."""
    return sorted(_BUILDERS) + ["full-boolean-<m>"]


def fixture_domain(name: str) -> Domain:
    builder = _BUILDERS.get(name)
    if builder is not None:
        return builder()
    match = _FULL_BOOLEAN.match(name)
    if match:
        m = int(match.group(1))
        if not 1 <= m <= 6:
            raise ValueError(f"full-boolean-{m} exceeds the feasible-set guard")
        return _full_boolean(m)
    raise ValueError(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}")


def fixture_text(name: str) -> str:
    return serialize_domain(fixture_domain(name))
