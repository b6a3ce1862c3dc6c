"""Aggregator candidates as per-issue operation tables, plus their checks.

An n-ary aggregator candidate is one table per issue mapping every n-tuple
over that issue's projection values to one of its arguments (the tables
are supportive by construction; nothing else is assumed). Closure under
the feasible set is what turns a candidate into an aggregator, and that is
checked explicitly, never presumed.

Tables are stored densely over the projection values using mixed-radix
indexing in ascending code order, which keeps lookups O(1) inside the
closure loops. Arguments outside the projection fall back to the first
argument; all decision procedures quantify over projection values only,
so this convention never affects an outcome.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import permutations, product
from weakref import WeakSet

from .domain import Domain, two_element_subsets
from .errors import ParseError, VerificationError

FOUR_OPS = frozenset({"AND3", "OR3", "MAJ", "XOR3"})

# Aggregator tuples that already passed is_closed; lets superpose/diamond
# skip re-verification of their own outputs during folds.
_VERIFIED: "WeakSet[AggregatorTuple]" = WeakSet()


def eval_named(op: str, labeling, x, y, z):
    """Evaluate one of the four named ternary operations.

    ``labeling`` is the ordered pair (zero, one) fixing which element acts
    as 0; it is required for and3/or3/xor3 and ignored by maj, which is
    defined whenever two of the three arguments agree.
    """
    if op == "maj":
        if x == y or x == z:
            return x
        if y == z:
            return y
        raise ValueError("maj needs two equal arguments")
    if labeling is None:
        raise ValueError(f"{op} needs a (zero, one) labeling")
    zero, one = labeling
    if any(v not in (zero, one) for v in (x, y, z)):
        raise ValueError(f"argument outside labeling {labeling!r}")
    if op == "and3":
        return zero if zero in (x, y, z) else one
    if op == "or3":
        return one if one in (x, y, z) else zero
    if op == "xor3":
        if x == y:
            return z
        if y == z:
            return x
        return y
    raise ValueError(f"unknown operation {op!r}")


@dataclass(frozen=True)
class OperationTable:
    """Total supportive function on projection values of one issue.

    ``table[i]`` is the output for the i-th argument tuple in mixed-radix
    order over ``values``. Supportiveness (output is one of the arguments)
    is asserted on construction.
    """

    issue: int  # 1-based
    arity: int
    values: tuple[int, ...]
    table: tuple[int, ...]

    def __post_init__(self):
        if not 2 <= self.arity <= 4:
            raise ValueError(f"arity {self.arity} outside the supported range 2..4")
        k = len(self.values)
        if k < 1 or tuple(sorted(set(self.values))) != self.values:
            raise ValueError("values must be distinct and ascending")
        if len(self.table) != k**self.arity:
            raise ValueError(
                f"table length {len(self.table)} != {k}^{self.arity}"
            )
        for idx, out in enumerate(self.table):
            if out not in self.cell_args(idx):
                raise ValueError(
                    f"entry {idx} of issue {self.issue} is not supportive"
                )

    @cached_property
    def _pos(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.values)}

    def cell_args(self, idx: int) -> tuple[int, ...]:
        k = len(self.values)
        args = [0] * self.arity
        for i in range(self.arity - 1, -1, -1):
            args[i] = self.values[idx % k]
            idx //= k
        return tuple(args)

    def cell_index(self, args) -> int:
        k = len(self.values)
        pos = self._pos
        idx = 0
        for a in args:
            idx = idx * k + pos[a]
        return idx

    def apply(self, args) -> int:
        """Table lookup; outside the projection, first-argument fallback."""
        pos = self._pos
        if all(a in pos for a in args):
            return self.table[self.cell_index(args)]
        return args[0]


@dataclass(frozen=True)
class AggregatorTuple:
    """One operation table per issue, all of the same arity."""

    arity: int
    components: tuple[OperationTable, ...]

    def __post_init__(self):
        for jj, comp in enumerate(self.components, start=1):
            if comp.arity != self.arity:
                raise ValueError(f"component {jj} has arity {comp.arity}")
            if comp.issue != jj:
                raise ValueError(f"component {jj} labeled issue {comp.issue}")

    @property
    def issue_count(self) -> int:
        return len(self.components)

    def component(self, j: int) -> OperationTable:
        return self.components[j - 1]


@dataclass(frozen=True)
class RestrictionClass:
    tag: str  # PROJECTION | AND3 | OR3 | MAJ | XOR3 | OTHER
    dictator: int | None = None


@dataclass(frozen=True)
class ClosureResult:
    ok: bool
    counterexample: tuple[tuple[int, ...], ...] | None = None

    def __bool__(self) -> bool:
        return self.ok


def check_alignment(d: Domain, agg: AggregatorTuple) -> None:
    if agg.issue_count != d.issue_count:
        raise ValueError(
            f"aggregator covers {agg.issue_count} issues, domain has {d.issue_count}"
        )
    for j in range(1, d.issue_count + 1):
        if agg.component(j).values != d.projections[j - 1]:
            raise ValueError(f"component {j} values differ from the projection")


def projection_table(d: Domain, j: int, arity: int, dictator: int) -> OperationTable:
    values = d.projection(j)
    k = len(values)
    table = []
    for idx in range(k**arity):
        digits = []
        rem = idx
        for _ in range(arity):
            digits.append(rem % k)
            rem //= k
        digits.reverse()
        table.append(values[digits[dictator - 1]])
    return OperationTable(issue=j, arity=arity, values=values, table=tuple(table))


def projection_aggregator(d: Domain, arity: int, dictator: int) -> AggregatorTuple:
    if not 1 <= dictator <= arity:
        raise ValueError(f"dictator index {dictator} outside 1..{arity}")
    comps = tuple(
        projection_table(d, j, arity, dictator) for j in range(1, d.issue_count + 1)
    )
    return AggregatorTuple(arity=arity, components=comps)


def operation_from_callable(d: Domain, j: int, arity: int, fn) -> OperationTable:
    """Build a table by evaluating ``fn`` on every argument tuple of codes."""
    values = d.projection(j)
    table = tuple(fn(*args) for args in product(values, repeat=arity))
    return OperationTable(issue=j, arity=arity, values=values, table=table)


def is_closed(d: Domain, agg: AggregatorTuple) -> ClosureResult:
    """Does every componentwise image of feasible rows stay feasible?

    Scans all |X|^n row selections in lexicographic order over the
    canonical row indexing and reports the first counterexample matrix.
    """
    check_alignment(d, agg)
    rows = d.feasible
    n = agg.arity
    m = d.issue_count
    # per issue: value position of each row's coordinate, for fast indexing
    pcols = []
    ks = []
    for jj in range(m):
        pos = agg.components[jj]._pos
        pcols.append([pos[row[jj]] for row in rows])
        ks.append(len(d.projections[jj]))
    tables = [comp.table for comp in agg.components]
    values = [comp.values for comp in agg.components]
    feasible_set = d.feasible_set
    for selection in product(range(len(rows)), repeat=n):
        image = []
        for jj in range(m):
            k = ks[jj]
            pcol = pcols[jj]
            idx = 0
            for r in selection:
                idx = idx * k + pcol[r]
            image.append(tables[jj][idx])
        if tuple(image) not in feasible_set:
            matrix = tuple(rows[r] for r in selection)
            return ClosureResult(False, matrix)
    return ClosureResult(True, None)


def require_aggregator(d: Domain, agg: AggregatorTuple) -> None:
    """Refuse tuples that are not verified aggregators for ``d``."""
    if agg in _VERIFIED:
        return
    result = is_closed(d, agg)
    if not result.ok:
        raise ValueError(
            f"tuple is not an aggregator: image of {result.counterexample} escapes"
        )
    _VERIFIED.add(agg)


def is_dictatorial(d: Domain, agg: AggregatorTuple) -> int | None:
    """Voter index d when every component equals the d-th projection.

    Because rows are selected independently, column j ranges over all of
    X_j^n, so table equality with the projection is exactly agreement on
    the feasible set.
    """
    check_alignment(d, agg)
    for dictator in range(1, agg.arity + 1):
        if all(
            agg.component(j).table == projection_table(d, j, agg.arity, dictator).table
            for j in range(1, d.issue_count + 1)
        ):
            return dictator
    return None


def restriction_class(table: OperationTable, pair) -> RestrictionClass:
    """Classify a table restricted to a two-element subset of its values.

    The labeling is canonical (smaller code plays 0), so a conjunction
    under one labeling reports AND3 and OR3 under the other; membership in
    the four-op set is what stays labeling-invariant.
    """
    u, v = pair
    if u == v or u not in table._pos or v not in table._pos:
        raise ValueError(f"{pair!r} is not a two-element subset of the values")
    zero, one = (u, v) if u < v else (v, u)
    n = table.arity
    cells = list(product((zero, one), repeat=n))
    outs = {cell: table.apply(cell) for cell in cells}
    for dictator in range(1, n + 1):
        if all(outs[cell] == cell[dictator - 1] for cell in cells):
            return RestrictionClass("PROJECTION", dictator)
    if n == 3:
        commutative = all(
            outs[cell] == outs[perm]
            for cell in cells
            for perm in set(permutations(cell))
        )
        if commutative:
            a = outs[(one, zero, zero)]
            b = outs[(zero, one, one)]
            if a == zero and b == zero:
                return RestrictionClass("AND3")
            if a == one and b == one:
                return RestrictionClass("OR3")
            if a == zero and b == one:
                return RestrictionClass("MAJ")
            return RestrictionClass("XOR3")
    return RestrictionClass("OTHER")


@dataclass(frozen=True)
class UniformityResult:
    ok: bool
    failures: tuple[tuple[int, tuple[int, int], int], ...]  # (issue, pair, dictator)

    def __bool__(self) -> bool:
        return self.ok


def is_uniformly_nondictatorial(d: Domain, agg: AggregatorTuple) -> UniformityResult:
    """No component restricted to any two-element subset is a projection."""
    check_alignment(d, agg)
    failures = []
    for j in range(1, d.issue_count + 1):
        comp = agg.component(j)
        for pair in two_element_subsets(d, j):
            cls = restriction_class(comp, pair)
            if cls.tag == "PROJECTION":
                failures.append((j, pair, cls.dictator))
    return UniformityResult(not failures, tuple(failures))


def is_locally_monomorphic(d: Domain, agg: AggregatorTuple) -> bool:
    """Do all two-element restrictions agree under every identification?

    For every pair of issues, every pair of two-element subsets of their
    projections and both bijections between them, the restrictions must
    commute with the bijection on all argument tuples.
    """
    check_alignment(d, agg)
    n = agg.arity
    m = d.issue_count
    pair_lists = [two_element_subsets(d, j) for j in range(1, m + 1)]
    for ji in range(1, m + 1):
        fi = agg.component(ji)
        for pi in pair_lists[ji - 1]:
            for jj in range(1, m + 1):
                fj = agg.component(jj)
                for pj in pair_lists[jj - 1]:
                    for g in ({pi[0]: pj[0], pi[1]: pj[1]},
                              {pi[0]: pj[1], pi[1]: pj[0]}):
                        for col in product(pi, repeat=n):
                            mapped = tuple(g[c] for c in col)
                            if fj.apply(mapped) != g[fi.apply(col)]:
                                return False
    return True


def _mark_verified(agg: AggregatorTuple) -> AggregatorTuple:
    _VERIFIED.add(agg)
    return agg


def superpose(d: Domain, outer: AggregatorTuple, inners) -> AggregatorTuple:
    """Compose an n-ary aggregator with n k-ary aggregators componentwise.

    The result is supportive by construction and closed because closure
    survives superposition; is_closed re-verifies before returning.
    """
    inners = list(inners)
    if len(inners) != outer.arity:
        raise ValueError(
            f"need {outer.arity} inner aggregators, got {len(inners)}"
        )
    require_aggregator(d, outer)
    for h in inners:
        require_aggregator(d, h)
    k = inners[0].arity
    if any(h.arity != k for h in inners):
        raise ValueError("inner aggregators must share one arity")
    comps = []
    for j in range(1, d.issue_count + 1):
        fo = outer.component(j)
        his = [h.component(j) for h in inners]
        values = d.projection(j)
        table = []
        for args in product(values, repeat=k):
            idx = his[0].cell_index(args)
            inner_values = tuple(h.table[idx] for h in his)
            table.append(fo.table[fo.cell_index(inner_values)])
        comps.append(
            OperationTable(issue=j, arity=k, values=values, table=tuple(table))
        )
    result = AggregatorTuple(arity=k, components=tuple(comps))
    check = is_closed(d, result)
    if not check.ok:
        raise VerificationError("superposition escaped the feasible set")
    return _mark_verified(result)


def diamond(d: Domain, f: AggregatorTuple, g: AggregatorTuple) -> AggregatorTuple:
    """Cyclic composition of two ternary aggregators.

    Component j of the result maps (x, y, z) to
    f_j(g_j(x,y,z), g_j(y,z,x), g_j(z,x,y)). Whenever either input is
    commutative on a two-element subset, the result is too, so folding
    with this operation accumulates commutative restrictions; that
    preservation is re-verified before returning.
    """
    if f.arity != 3 or g.arity != 3:
        raise ValueError("both arguments must be ternary")
    require_aggregator(d, f)
    require_aggregator(d, g)
    comps = []
    for j in range(1, d.issue_count + 1):
        fj = f.component(j)
        gj = g.component(j)
        values = d.projection(j)
        table = []
        for x, y, z in product(values, repeat=3):
            a = gj.table[gj.cell_index((x, y, z))]
            b = gj.table[gj.cell_index((y, z, x))]
            c = gj.table[gj.cell_index((z, x, y))]
            table.append(fj.table[fj.cell_index((a, b, c))])
        comps.append(
            OperationTable(issue=j, arity=3, values=values, table=tuple(table))
        )
    result = AggregatorTuple(arity=3, components=tuple(comps))
    check = is_closed(d, result)
    if not check.ok:
        raise VerificationError("cyclic composition escaped the feasible set")
    for j in range(1, d.issue_count + 1):
        for pair in two_element_subsets(d, j):
            f_cls = restriction_class(f.component(j), pair).tag
            g_cls = restriction_class(g.component(j), pair).tag
            if f_cls in FOUR_OPS or g_cls in FOUR_OPS:
                if restriction_class(result.component(j), pair).tag not in FOUR_OPS:
                    raise VerificationError(
                        f"commutativity lost at issue {j}, pair {pair}"
                    )
    return _mark_verified(result)


def serialize_aggregator(d: Domain, agg: AggregatorTuple) -> str:
    """Witness text: header plus one block of cell lines per issue."""
    check_alignment(d, agg)
    out = [f"aggregator arity {agg.arity}"]
    for j in range(1, d.issue_count + 1):
        comp = agg.component(j)
        out.append(f"component {j}:")
        for idx, value in enumerate(comp.table):
            args = comp.cell_args(idx)
            arg_toks = " ".join(d.token(j, a) for a in args)
            out.append(f"{arg_toks} -> {d.token(j, value)}")
    return "\n".join(out) + "\n"


def parse_aggregator(text: str, d: Domain) -> AggregatorTuple:
    """Inverse of serialize_aggregator; requires complete tables."""
    arity: int | None = None
    current: int | None = None
    cells: dict[int, dict[int, int]] = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "aggregator":
            if len(fields) != 3 or fields[1] != "arity" or not fields[2].isdigit():
                raise ParseError("expected 'aggregator arity <n>'", line_no)
            arity = int(fields[2])
        elif fields[0] == "component":
            if arity is None:
                raise ParseError("'component' before the arity header", line_no)
            head = fields[1].rstrip(":")
            if not head.isdigit():
                raise ParseError("expected 'component <j>:'", line_no)
            current = int(head)
            if not 1 <= current <= d.issue_count:
                raise ParseError(f"component index {current} out of range", line_no)
            if current in cells:
                raise ParseError(f"duplicate component {current}", line_no)
            cells[current] = {}
        else:
            if arity is None or current is None:
                raise ParseError("cell line outside a component block", line_no)
            if "->" not in fields:
                raise ParseError("expected '<args> -> <value>'", line_no)
            sep = fields.index("->")
            arg_toks = fields[:sep]
            val_toks = fields[sep + 1 :]
            if len(arg_toks) != arity or len(val_toks) != 1:
                raise ParseError("malformed cell line", line_no)
            try:
                args = tuple(d.code(current, t) for t in arg_toks)
                value = d.code(current, val_toks[0])
            except ValueError as exc:
                raise ParseError(str(exc), line_no) from None
            values = d.projection(current)
            if any(a not in values for a in args) or value not in values:
                raise ParseError("cell uses values outside the projection", line_no)
            k = len(values)
            pos = {v: i for i, v in enumerate(values)}
            idx = 0
            for a in args:
                idx = idx * k + pos[a]
            if idx in cells[current]:
                raise ParseError("duplicate cell", line_no)
            cells[current][idx] = value
    if arity is None:
        raise ParseError("missing 'aggregator arity' header")
    comps = []
    for j in range(1, d.issue_count + 1):
        values = d.projection(j)
        expected = len(values) ** arity
        got = cells.get(j, {})
        if len(got) != expected:
            raise ParseError(
                f"component {j} has {len(got)} cells, expected {expected}"
            )
        table = tuple(got[idx] for idx in range(expected))
        comps.append(OperationTable(issue=j, arity=arity, values=values, table=table))
    return AggregatorTuple(arity=arity, components=tuple(comps))
