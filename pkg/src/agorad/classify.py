"""Top-level decisions assembled from the searches, plus the text report.

Every decision here is three-valued: yes, no, or unknown. Unknown appears
only when a budget ran out mid-search; a negative is asserted only after
a search exhausted its space (or the graph settled the question), so the
report never claims more than was actually proved.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .aggregators import (
    AggregatorTuple,
    is_locally_monomorphic,
    is_uniformly_nondictatorial,
    serialize_aggregator,
)
from .blockedness import (
    BlockednessGraph,
    is_multiply_constrained,
    is_totally_blocked,
)
from .domain import Domain, require_valid
from .errors import CapacityError, VerificationError
from .search import (
    BUDGET_EXCEEDED,
    EXHAUSTED,
    FOUND,
    SearchBudget,
    SearchOutcome,
    find_binary_nondictatorial,
    find_majority,
    find_minority,
    find_uniform,
    fold_diamond_cover,
)

YES = "yes"
NO = "no"
UNKNOWN = "unknown"

TRACTABLE = "TRACTABLE"
NP_COMPLETE = "NP_COMPLETE"
MCSP_UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class AnalysisOptions:
    budget: SearchBudget = field(default_factory=SearchBudget)
    diagnostics: bool = False
    validate_uniform: bool = False


@dataclass(frozen=True)
class PossibilityDecision:
    status: str  # yes | no | unknown
    witness_kind: str | None  # binary | majority | minority
    witness: AggregatorTuple | None
    outcomes: tuple[tuple[str, str], ...]  # (kind, search status) in run order


@dataclass(frozen=True)
class UpdDecision:
    status: str
    witness: AggregatorTuple | None


@dataclass(frozen=True)
class BooleanClassification:
    affine: bool
    bijunctive: bool
    possibility: str  # yes | no | unknown, decided as affine or binary witness


@dataclass(frozen=True)
class AnalysisReport:
    issue_count: int
    alphabet_sizes: tuple[int, ...]
    projection_sizes: tuple[int, ...]
    feasible_count: int
    possibility: str
    witness_kind: str | None
    witness: AggregatorTuple | None
    totally_blocked: str
    affine: str | None  # Boolean domains only
    bijunctive: str | None
    upd: str
    upd_witness: AggregatorTuple | None
    mcsp: str
    multiply_constrained: str | None  # diagnostics only
    witness_locally_monomorphic: str | None  # diagnostics only


def _status_of(outcome: SearchOutcome) -> str:
    if outcome.status == FOUND:
        return YES
    if outcome.status == EXHAUSTED:
        return NO
    return UNKNOWN


def is_possibility_domain(
    d: Domain,
    budget: SearchBudget | None = None,
    *,
    _graph: BlockednessGraph | None = None,
) -> PossibilityDecision:
    """Non-dictatorial aggregation of some arity: binary, majority, minority.

    The three searches run cheapest first and stop at the first witness;
    a no is returned only when all three exhausted their spaces.
    """
    require_valid(d)
    budget = budget or SearchBudget()
    searches = (
        ("binary", lambda: find_binary_nondictatorial(d, budget)),
        ("majority", lambda: find_majority(d, budget)),
        ("minority", lambda: find_minority(d, budget)),
    )
    outcomes: list[tuple[str, str]] = []
    saw_budget = False
    for kind, run in searches:
        outcome = run()
        outcomes.append((kind, outcome.status))
        if outcome.status == FOUND:
            return PossibilityDecision(YES, kind, outcome.witness, tuple(outcomes))
        if outcome.status == BUDGET_EXCEEDED:
            saw_budget = True
    status = UNKNOWN if saw_budget else NO
    return PossibilityDecision(status, None, None, tuple(outcomes))


def boolean_classification(
    d: Domain, budget: SearchBudget | None = None
) -> BooleanClassification:
    """Closure flags for two-valued domains plus the dichotomy decision.

    Affine means closed under the componentwise odd-one-out of any three
    rows, bijunctive closed under componentwise majority. The possibility
    decision is affine-or-binary-witness and must (and does, as verified
    by the report invariants) agree with the general three-search route.
    """
    require_valid(d)
    if any(len(p) != 2 for p in d.projections):
        raise ValueError("boolean classification needs two-valued projections")
    rows = d.feasible
    feasible_set = d.feasible_set
    m = d.issue_count
    affine = True
    bijunctive = True
    n_rows = len(rows)
    for a in range(n_rows):
        for b in range(a + 1, n_rows):
            for c in range(b + 1, n_rows):
                x, y, z = rows[a], rows[b], rows[c]
                if affine:
                    image = tuple(_odd_one_out(x[j], y[j], z[j]) for j in range(m))
                    if image not in feasible_set:
                        affine = False
                if bijunctive:
                    image = tuple(_majority_of(x[j], y[j], z[j]) for j in range(m))
                    if image not in feasible_set:
                        bijunctive = False
                if not affine and not bijunctive:
                    break
            else:
                continue
            break
        else:
            continue
        break
    binary = find_binary_nondictatorial(d, budget)
    if affine or binary.status == FOUND:
        possibility = YES
    elif binary.status == EXHAUSTED:
        possibility = NO
    else:
        possibility = UNKNOWN
    return BooleanClassification(
        affine=affine, bijunctive=bijunctive, possibility=possibility
    )


def _odd_one_out(x, y, z):
    if x == y:
        return z
    if y == z:
        return x
    return y


def _majority_of(x, y, z):
    if x == y or x == z:
        return x
    return y


def is_upd(
    d: Domain,
    budget: SearchBudget | None = None,
    *,
    validate: bool = False,
) -> UpdDecision:
    """Uniform possibility: a witness avoiding projections on every pair.

    With ``validate`` set, the per-pair targeted searches folded by the
    cyclic composition must reach the same verdict as the direct search.
    """
    require_valid(d)
    outcome = find_uniform(d, budget)
    if validate:
        folded = fold_diamond_cover(d, budget)
        if folded.status != outcome.status:
            raise VerificationError(
                f"uniform search says {outcome.status}, fold says {folded.status}"
            )
        if folded.status == FOUND:
            check = is_uniformly_nondictatorial(d, folded.witness)
            if not check.ok:
                raise VerificationError("folded witness failed uniformity")
    if outcome.status == FOUND:
        check = is_uniformly_nondictatorial(d, outcome.witness)
        if not check.ok:
            raise VerificationError("uniform witness failed uniformity")
        return UpdDecision(YES, outcome.witness)
    if outcome.status == EXHAUSTED:
        return UpdDecision(NO, None)
    return UpdDecision(UNKNOWN, None)


def classify_mcsp(d: Domain, budget: SearchBudget | None = None) -> str:
    """Tractability label of the conservative multi-sorted CSP over X."""
    decision = is_upd(d, budget)
    if decision.status == YES:
        return TRACTABLE
    if decision.status == NO:
        return NP_COMPLETE
    return MCSP_UNKNOWN


def analyze(d: Domain, options: AnalysisOptions | None = None) -> AnalysisReport:
    """Run every decision, assert their mutual consistency, return the report."""
    options = options or AnalysisOptions()
    require_valid(d)
    budget = options.budget

    blocked, graph = is_totally_blocked(d)
    possibility = is_possibility_domain(d, budget)
    upd = is_upd(d, budget, validate=options.validate_uniform)

    is_boolean = all(len(p) == 2 for p in d.projections)
    boolean = boolean_classification(d, budget) if is_boolean else None

    if upd.status == YES:
        mcsp = TRACTABLE
    elif upd.status == NO:
        mcsp = NP_COMPLETE
    else:
        mcsp = MCSP_UNKNOWN

    multiply_constrained = None
    witness_monomorphic = None
    if options.diagnostics:
        try:
            multiply_constrained = YES if is_multiply_constrained(d) else NO
        except CapacityError:
            multiply_constrained = UNKNOWN
        if possibility.witness is not None:
            witness_monomorphic = (
                YES if is_locally_monomorphic(d, possibility.witness) else NO
            )

    _assert_report_invariants(possibility, blocked, upd, mcsp, boolean)

    return AnalysisReport(
        issue_count=d.issue_count,
        alphabet_sizes=tuple(len(a) for a in d.alphabets),
        projection_sizes=tuple(len(p) for p in d.projections),
        feasible_count=len(d.feasible),
        possibility=possibility.status,
        witness_kind=possibility.witness_kind,
        witness=possibility.witness,
        totally_blocked=YES if blocked else NO,
        affine=(YES if boolean.affine else NO) if boolean else None,
        bijunctive=(YES if boolean.bijunctive else NO) if boolean else None,
        upd=upd.status,
        upd_witness=upd.witness,
        mcsp=mcsp,
        multiply_constrained=multiply_constrained,
        witness_locally_monomorphic=witness_monomorphic,
    )


def _assert_report_invariants(possibility, blocked, upd, mcsp, boolean) -> None:
    binary_status = dict(possibility.outcomes).get("binary")
    if binary_status == FOUND and blocked:
        raise VerificationError("binary witness found on a totally blocked domain")
    if binary_status == EXHAUSTED and not blocked:
        raise VerificationError("no binary witness although not totally blocked")
    if upd.status == YES and possibility.status == NO:
        raise VerificationError("uniform witness on an impossibility domain")
    if (mcsp == TRACTABLE) != (upd.status == YES):
        raise VerificationError("tractability label contradicts the uniform decision")
    if boolean is not None:
        if possibility.status != UNKNOWN and boolean.possibility != UNKNOWN:
            if possibility.status != boolean.possibility:
                raise VerificationError(
                    "dichotomy decision disagrees with the three-search route"
                )


_REPORT_KEYS = (
    "issues",
    "alphabet_sizes",
    "projection_sizes",
    "feasible",
    "possibility",
    "witness_kind",
    "totally_blocked",
    "affine",
    "bijunctive",
    "upd",
    "mcsp",
    "multiply_constrained",
    "witness_locally_monomorphic",
)


def serialize_report(report: AnalysisReport) -> str:
    """Canonical key = value lines, fixed key order, optional keys dropped."""
    values = {
        "issues": str(report.issue_count),
        "alphabet_sizes": " ".join(str(s) for s in report.alphabet_sizes),
        "projection_sizes": " ".join(str(s) for s in report.projection_sizes),
        "feasible": str(report.feasible_count),
        "possibility": report.possibility,
        "witness_kind": report.witness_kind or "none",
        "totally_blocked": report.totally_blocked,
        "affine": report.affine,
        "bijunctive": report.bijunctive,
        "upd": report.upd,
        "mcsp": report.mcsp,
        "multiply_constrained": report.multiply_constrained,
        "witness_locally_monomorphic": report.witness_locally_monomorphic,
    }
    lines = [
        f"{key} = {values[key]}" for key in _REPORT_KEYS if values[key] is not None
    ]
    return "\n".join(lines) + "\n"


def report_witness_blocks(d: Domain, report: AnalysisReport) -> str:
    """Witness attachments for the report, deterministic order."""
    blocks = []
    if report.witness is not None:
        blocks.append(
            f"witness possibility {report.witness_kind}:\n"
            + serialize_aggregator(d, report.witness)
        )
    if report.upd_witness is not None:
        blocks.append(
            "witness upd:\n" + serialize_aggregator(d, report.upd_witness)
        )
    return "".join(blocks)
