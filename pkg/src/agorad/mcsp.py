"""Multi-sorted CSP instances over a domain's conservative language.

The language consists of the feasible set itself, with signature
(1, ..., m), plus every non-empty subset of every issue's alphabet as a
unary relation on that sort. Instances assign each variable a sort and
constrain tuples of variables by those relations; the solver is a plain
backtracker with unary filtering and checks on fully assigned scopes. The
tractability label computed elsewhere classifies the problem; it makes no
promise about this solver's running time.

Instance file format (``#`` starts a comment)::

    domain <path>
    var <name> sort <j>
    constraint X: <v1> ... <vm>
    constraint subset <j> {tok,tok}: <v>
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

from .domain import Domain, parse_domain, require_valid
from .errors import CapacityError, ParseError, SignatureError, VerificationError
from .search import SearchBudget

SAT = "SAT"
UNSAT = "UNSAT"
UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class XConstraint:
    """Scope constrained by the feasible set; sorts must read 1..m."""

    scope: tuple[str, ...]


@dataclass(frozen=True)
class SubsetConstraint:
    """Unary constraint: the variable's value lies in ``allowed`` (codes)."""

    var: str
    issue: int
    allowed: frozenset[int]


@dataclass(frozen=True)
class RelationDescriptor:
    kind: str  # "X" | "subset"
    signature: tuple[int, ...]
    members: tuple


@dataclass
class McspInstance:
    domain: Domain
    variables: tuple[str, ...]
    sorts: dict[str, int]  # 1-based issue per variable
    constraints: tuple[XConstraint | SubsetConstraint, ...]


@dataclass(frozen=True)
class SolveResult:
    status: str  # SAT | UNSAT | UNKNOWN
    assignment: dict[str, str] | None = None


def make_instance(domain, variables, sorts, constraints) -> McspInstance:
    """Validate and assemble an instance; signature mismatches raise."""
    require_valid(domain)
    variables = tuple(variables)
    sorts = dict(sorts)
    m = domain.issue_count
    if len(set(variables)) != len(variables):
        raise ValueError("duplicate variable name")
    for v in variables:
        if v not in sorts:
            raise ValueError(f"variable {v!r} has no sort")
        if not 1 <= sorts[v] <= m:
            raise ValueError(f"sort {sorts[v]} of {v!r} out of range 1..{m}")
    known = set(variables)
    for con in constraints:
        if isinstance(con, XConstraint):
            if any(v not in known for v in con.scope):
                raise ValueError(f"constraint scope uses unknown variable")
            actual = tuple(sorts[v] for v in con.scope)
            if actual != tuple(range(1, m + 1)):
                raise SignatureError(
                    f"scope sorts {actual} do not match the signature {tuple(range(1, m + 1))}"
                )
        elif isinstance(con, SubsetConstraint):
            if con.var not in known:
                raise ValueError(f"constraint on unknown variable {con.var!r}")
            if not 1 <= con.issue <= m:
                raise ValueError(f"sort {con.issue} out of range")
            if sorts[con.var] != con.issue:
                raise SignatureError(
                    f"variable {con.var!r} has sort {sorts[con.var]}, relation is on sort {con.issue}"
                )
            alphabet_codes = set(range(len(domain.alphabets[con.issue - 1])))
            if not con.allowed or not set(con.allowed) <= alphabet_codes:
                raise ValueError("subset relation must be a non-empty alphabet subset")
        else:
            raise ValueError(f"unknown constraint type {type(con).__name__}")
    return McspInstance(
        domain=domain,
        variables=variables,
        sorts=sorts,
        constraints=tuple(constraints),
    )


def materialize_language(domain: Domain) -> tuple[RelationDescriptor, ...]:
    """The conservative language: X plus every alphabet subset, once each."""
    require_valid(domain)
    for j in range(1, domain.issue_count + 1):
        if len(domain.alphabets[j - 1]) > 5:
            raise CapacityError(f"alphabet {j} too large to materialize subsets")
    relations = [
        RelationDescriptor(
            kind="X",
            signature=tuple(range(1, domain.issue_count + 1)),
            members=domain.feasible,
        )
    ]
    for j in range(1, domain.issue_count + 1):
        codes = tuple(range(len(domain.alphabets[j - 1])))
        for size in range(1, len(codes) + 1):
            for combo in combinations(codes, size):
                relations.append(
                    RelationDescriptor(kind="subset", signature=(j,), members=combo)
                )
    return tuple(relations)


def parse_instance(
    text: str, *, domain: Domain | None = None, base_dir: str | Path = "."
) -> McspInstance:
    """Parse instance text; an explicit ``domain`` overrides the file's."""
    variables: list[str] = []
    sorts: dict[str, int] = {}
    constraints: list[XConstraint | SubsetConstraint] = []
    file_domain: Domain | None = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "domain":
            if len(fields) != 2:
                raise ParseError("expected 'domain <path>'", line_no)
            if domain is None and file_domain is None:
                path = Path(base_dir) / fields[1]
                try:
                    file_domain = parse_domain(path.read_text())
                except OSError as exc:
                    raise ParseError(f"cannot read domain file: {exc}", line_no)
        elif fields[0] == "var":
            if len(fields) != 4 or fields[2] != "sort" or not fields[3].isdigit():
                raise ParseError("expected 'var <name> sort <j>'", line_no)
            name = fields[1]
            if name in sorts:
                raise ParseError(f"duplicate variable {name!r}", line_no)
            variables.append(name)
            sorts[name] = int(fields[3])
        elif fields[0] == "constraint":
            rest = line[len("constraint") :].strip()
            if rest.startswith("X:"):
                scope = tuple(rest[2:].split())
                constraints.append(XConstraint(scope=scope))
            elif rest.startswith("subset"):
                body = rest[len("subset") :].strip()
                head, sep, var_part = body.rpartition(":")
                if not sep:
                    raise ParseError("expected 'constraint subset <j> {..}: <v>'", line_no)
                head_fields = head.split(None, 1)
                if len(head_fields) != 2 or not head_fields[0].isdigit():
                    raise ParseError("expected 'constraint subset <j> {..}: <v>'", line_no)
                j = int(head_fields[0])
                brace = head_fields[1].strip()
                if not (brace.startswith("{") and brace.endswith("}")):
                    raise ParseError("subset tokens must sit inside braces", line_no)
                tokens = [t.strip() for t in brace[1:-1].split(",") if t.strip()]
                if not tokens:
                    raise ParseError("empty subset relation", line_no)
                var_names = var_part.split()
                if len(var_names) != 1:
                    raise ParseError("subset constraints take one variable", line_no)
                constraints.append(
                    SubsetConstraint(var=var_names[0], issue=j, allowed=tokens)  # type: ignore[arg-type]
                )
            else:
                raise ParseError(f"unknown constraint form {rest!r}", line_no)
        else:
            raise ParseError(f"unknown directive {fields[0]!r}", line_no)

    chosen = domain if domain is not None else file_domain
    if chosen is None:
        raise ParseError("no domain given: add a 'domain <path>' line")
    # token -> code translation for subset constraints, now that sorts exist
    resolved: list[XConstraint | SubsetConstraint] = []
    for con in constraints:
        if isinstance(con, SubsetConstraint):
            try:
                codes = frozenset(chosen.code(con.issue, tok) for tok in con.allowed)
            except ValueError as exc:
                raise ParseError(str(exc)) from None
            resolved.append(
                SubsetConstraint(var=con.var, issue=con.issue, allowed=codes)
            )
        else:
            resolved.append(con)
    return make_instance(chosen, variables, sorts, resolved)


def verify_assignment(inst: McspInstance, assignment) -> bool:
    """Literal acceptance check: sorts respected and every constraint met.

    ``assignment`` maps variable names to tokens.
    """
    domain = inst.domain
    codes: dict[str, int] = {}
    for v in inst.variables:
        if v not in assignment:
            return False
        try:
            codes[v] = domain.code(inst.sorts[v], assignment[v])
        except ValueError:
            return False
    for con in inst.constraints:
        if isinstance(con, XConstraint):
            row = tuple(codes[v] for v in con.scope)
            if row not in domain.feasible_set:
                return False
        else:
            if codes[con.var] not in con.allowed:
                return False
    return True


def solve(inst: McspInstance, budget: SearchBudget | None = None) -> SolveResult:
    """Backtracking solver; SAT certificates are re-verified before return.

    Variables are ordered by candidate count (most constrained first,
    declaration order breaking ties), values by code. UNSAT comes only
    from a complete search; running out of budget yields UNKNOWN.
    """
    budget = budget or SearchBudget()
    domain = inst.domain
    candidates: dict[str, list[int]] = {}
    for v in inst.variables:
        cands = set(range(len(domain.alphabets[inst.sorts[v] - 1])))
        for con in inst.constraints:
            if isinstance(con, SubsetConstraint) and con.var == v:
                cands &= con.allowed
        candidates[v] = sorted(cands)

    order = sorted(
        inst.variables, key=lambda v: (len(candidates[v]), inst.variables.index(v))
    )
    position = {v: i for i, v in enumerate(order)}
    # an X-constraint is checked as soon as its last scope variable lands
    checks_at: list[list[XConstraint]] = [[] for _ in order]
    for con in inst.constraints:
        if isinstance(con, XConstraint):
            if con.scope:
                last = max(position[v] for v in con.scope)
                checks_at[last].append(con)

    values: dict[str, int] = {}
    nodes = 0
    vi = 0
    pointers = [0] * (len(order) + 1)
    while True:
        if vi == len(order):
            assignment = {
                v: domain.token(inst.sorts[v], values[v]) for v in inst.variables
            }
            if not verify_assignment(inst, assignment):
                raise VerificationError("solver produced a non-verifying assignment")
            return SolveResult(SAT, assignment)
        var = order[vi]
        ci = pointers[vi]
        if ci >= len(candidates[var]):
            if vi == 0:
                return SolveResult(UNSAT, None)
            values.pop(var, None)
            vi -= 1
            pointers[vi] += 1
            continue
        nodes += 1
        if nodes > budget.max_nodes:
            return SolveResult(UNKNOWN, None)
        values[var] = candidates[var][ci]
        ok = True
        for con in checks_at[vi]:
            row = tuple(values[v] for v in con.scope)
            if row not in domain.feasible_set:
                ok = False
                break
        if ok:
            vi += 1
            pointers[vi] = 0
        else:
            pointers[vi] += 1


def serialize_result(inst: McspInstance, result: SolveResult) -> str:
    """SAT plus one assignment line per variable in declaration order."""
    if result.status != SAT:
        return result.status + "\n"
    lines = [SAT]
    for v in inst.variables:
        lines.append(f"{v} = {result.assignment[v]}")
    return "\n".join(lines) + "\n"
