"""Brute-force verification of the gadget lemmas, gap bounds, and the
counterexample to the original 1997 argument.

Every check enumerates its full universe (subsets, multisets, or item
pairs) under exact arithmetic and reports counterexamples instead of
trusting any closed-form claim.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement

from .gadgets import (
    GadgetIntegers,
    SkewedGadgetIntegers,
    build_packing_instance,
    build_covering_instance,
    build_skewed_instance,
    gadget_from_instance,
)
from .matching import HardnessConstants, Max3dmInstance, solve_3dm_exact
from .model import (
    InvariantError,
    ItemLabel,
    VectorInstance,
    covers,
    fits,
)
from .solvers import SolverLimits, solve_vbc_exact, solve_vbp_exact

DEFAULT_BUDGET = 10**8
MAX_LISTED_COUNTEREXAMPLES = 100


class BudgetExceededError(ValueError):
    """The enumeration universe exceeds the configured budget."""


@dataclass(frozen=True)
class LemmaReport:
    claim_id: str
    verdict: str  # verified | falsified | partial
    universe: str
    universe_size: int
    counterexamples: tuple[str, ...]
    counterexample_total: int
    wall_time_ms: int
    hits: int | None = None


@dataclass(frozen=True)
class GapReport:
    flavor: str
    q: int
    t_count: int
    alpha: int
    beta: int
    constructive_bound: int | None
    counting_bound: Fraction
    counting_bound_rounded: int
    solver_opt: int
    n_g: int
    n_d: int
    n_r: int
    bounds_hold: bool

    def __post_init__(self) -> None:
        if self.n_g + self.n_d + self.n_r != self.solver_opt:
            raise InvariantError("bin category counts do not sum to the solution size")


@dataclass(frozen=True)
class BoundResult:
    name: str
    exact: Fraction
    decimal: str
    reference: Fraction
    strict: bool
    satisfied: bool


def report_to_json(report: LemmaReport) -> dict:
    return {
        "claim_id": report.claim_id,
        "verdict": report.verdict,
        "universe": report.universe,
        "counterexamples": list(report.counterexamples),
        "counterexample_total": report.counterexample_total,
        "wall_time_ms": report.wall_time_ms,
    }


def _finish_report(
    claim_id: str,
    universe: str,
    universe_size: int,
    counterexamples: list[str],
    start: float,
    fully_enumerated: bool = True,
    hits: int | None = None,
) -> LemmaReport:
    counterexamples = sorted(counterexamples)
    if counterexamples:
        verdict = "falsified"
    elif fully_enumerated:
        verdict = "verified"
    else:
        verdict = "partial"
    return LemmaReport(
        claim_id=claim_id,
        verdict=verdict,
        universe=universe,
        universe_size=universe_size,
        counterexamples=tuple(counterexamples[:MAX_LISTED_COUNTEREXAMPLES]),
        counterexample_total=len(counterexamples),
        wall_time_ms=int((time.monotonic() - start) * 1000),
        hits=hits,
    )


def _subset_str(labels: list[ItemLabel]) -> str:
    return "{" + ", ".join(str(lbl) for lbl in sorted(labels, key=ItemLabel.sort_key)) + "}"


def _tuple_pattern(labels: list[ItemLabel], filler_levels: tuple[int, ...] = ()) -> bool:
    """True iff labels spell out one X, Y, Z, their matching Tuple, and
    exactly one filler per required level."""
    by_kind: dict[str, list[ItemLabel]] = {}
    for lbl in labels:
        by_kind.setdefault(lbl.kind, []).append(lbl)
    for kind in ("X", "Y", "Z", "Tuple"):
        if len(by_kind.get(kind, ())) != 1:
            return False
    fillers = by_kind.get("Filler", [])
    if sorted(f.index for f in fillers) != sorted(filler_levels):
        return False
    if "Dummy" in by_kind:
        return False
    i = by_kind["X"][0].index
    j = by_kind["Y"][0].index
    k = by_kind["Z"][0].index
    return by_kind["Tuple"][0].index == (i, j, k)


def _check_budget(universe_size: int, budget: int, what: str) -> None:
    if universe_size > budget:
        raise BudgetExceededError(
            f"{what}: universe of {universe_size} exceeds budget {budget}")


# ---------------------------------------------------------------------------
# Integer-level correspondence checks.

def check_integer_correspondence(
    g: GadgetIntegers, budget: int = DEFAULT_BUDGET
) -> LemmaReport:
    """4-subsets of the encoded integers sum to b exactly for tuple patterns."""
    start = time.monotonic()
    entries = g.entries()
    n = len(entries)
    universe_size = math.comb(n, 4)
    _check_budget(universe_size, budget, "integer correspondence")
    bad: list[str] = []
    hits = 0
    for combo in combinations(range(n), 4):
        total = sum(entries[i][1] for i in combo)
        labels = [entries[i][0] for i in combo]
        pattern = _tuple_pattern(labels)
        if total == g.b:
            hits += 1
        if (total == g.b) != pattern:
            bad.append(_subset_str(labels))
    universe = f"all C({n},4)={universe_size} 4-subsets of the encoded integers"
    return _finish_report("intcor", universe, universe_size, bad, start, hits=hits)


# ---------------------------------------------------------------------------
# Packing-side vector checks.

def check_bin_size(
    instance: VectorInstance, budget: int = DEFAULT_BUDGET
) -> LemmaReport:
    """No 5-subset fits; all pairs but dummy pairs fit; a dummy admits at
    most one companion."""
    start = time.monotonic()
    items = instance.items
    n = len(items)
    bad: list[str] = []
    parts: list[str] = []
    vecs = [it.vec for it in items]
    dummies = [i for i in range(n) if items[i].label.kind == "Dummy"]
    others = [i for i in range(n) if items[i].label.kind != "Dummy"]

    five = math.comb(n, 5)
    if five <= budget:
        for combo in combinations(range(n), 5):
            if fits(vecs[i] for i in combo):
                bad.append("5-subset fits: " + _subset_str([items[i].label for i in combo]))
        parts.append(f"all C({n},5)={five} 5-subsets")
    else:
        # First-coordinate argument: if every item's first coordinate
        # exceeds 1/5, no five items can fit.
        for i in range(n):
            if vecs[i].c1 <= Fraction(1, 5):
                bad.append(f"first coordinate not above 1/5: {items[i].label}")
        parts.append(f"first-coordinate check over all {n} items (5-subsets over budget)")

    pairs = math.comb(n, 2)
    _check_budget(pairs, budget, "bin size pairs")
    for a, b_ in combinations(range(n), 2):
        both_dummy = items[a].label.kind == "Dummy" and items[b_].label.kind == "Dummy"
        it_fits = fits([vecs[a], vecs[b_]])
        if both_dummy and it_fits:
            bad.append("dummy pair fits: " + _subset_str([items[a].label, items[b_].label]))
        if not both_dummy and not it_fits:
            bad.append("pair does not fit: " + _subset_str([items[a].label, items[b_].label]))
    parts.append(f"all {pairs} pairs")

    triple_count = len(dummies) * math.comb(max(len(others) + len(dummies) - 1, 0), 2)
    _check_budget(triple_count, budget, "dummy triples")
    checked_triples = 0
    for d in dummies:
        rest = [i for i in range(n) if i != d]
        for a, b_ in combinations(rest, 2):
            checked_triples += 1
            if fits([vecs[d], vecs[a], vecs[b_]]):
                bad.append("dummy plus two fits: "
                           + _subset_str([items[d].label, items[a].label, items[b_].label]))
    parts.append(f"{checked_triples} dummy-plus-two triples")

    universe = "; ".join(parts)
    size = five if five <= budget else n
    return _finish_report("binsize", universe, size + pairs + checked_triples, bad, start)


def check_vector_correspondence(
    instance: VectorInstance, budget: int = DEFAULT_BUDGET
) -> LemmaReport:
    """4-subsets of items fit exactly when they spell out a tuple."""
    start = time.monotonic()
    items = instance.items
    n = len(items)
    universe_size = math.comb(n, 4)
    _check_budget(universe_size, budget, "vector correspondence")
    bad: list[str] = []
    hits = 0
    for combo in combinations(range(n), 4):
        labels = [items[i].label for i in combo]
        it_fits = fits(items[i].vec for i in combo)
        if it_fits:
            hits += 1
        if it_fits != _tuple_pattern(labels):
            bad.append(_subset_str(labels))
    universe = f"all C({n},4)={universe_size} 4-subsets of the items"
    return _finish_report("vectorcor", universe, universe_size, bad, start, hits=hits)


# ---------------------------------------------------------------------------
# Skewed checks.

def check_skewed_lemmas(
    instance: VectorInstance,
    gadget: SkewedGadgetIntegers | None = None,
    budget: int = DEFAULT_BUDGET,
) -> list[LemmaReport]:
    """m-subset analogues of the three packing checks, plus the unique
    constant-decomposition check behind the modulo-r argument."""
    if gadget is None:
        gadget = gadget_from_instance(instance)
    m = gadget.m
    filler_levels = tuple(sorted(gadget.fillers))
    reports = []

    # (1) m-subsets of integers sum to b iff tuple-plus-fillers pattern.
    start = time.monotonic()
    entries = gadget.entries()
    n = len(entries)
    universe_size = math.comb(n, m)
    _check_budget(universe_size, budget, "skewed integer correspondence")
    bad: list[str] = []
    hits = 0
    for combo in combinations(range(n), m):
        total = sum(entries[i][1] for i in combo)
        labels = [entries[i][0] for i in combo]
        pattern = _tuple_pattern(labels, filler_levels)
        if total == gadget.b:
            hits += 1
        if (total == gadget.b) != pattern:
            bad.append(_subset_str(labels))
    universe = f"all C({n},{m})={universe_size} {m}-subsets of the encoded integers"
    reports.append(_finish_report("skew_intcor", universe, universe_size, bad, start, hits=hits))

    # (2) bin size: no (m+1)-subset of items fits; pair claims.
    start = time.monotonic()
    items = instance.items
    ni = len(items)
    vecs = [it.vec for it in items]
    bad = []
    parts = []
    big = math.comb(ni, m + 1)
    if big <= budget:
        for combo in combinations(range(ni), m + 1):
            if fits(vecs[i] for i in combo):
                bad.append(f"{m+1}-subset fits: "
                           + _subset_str([items[i].label for i in combo]))
        parts.append(f"all C({ni},{m+1})={big} {m+1}-subsets")
    else:
        for i in range(ni):
            if vecs[i].c1 <= Fraction(1, m + 1):
                bad.append(f"first coordinate not above 1/{m+1}: {items[i].label}")
        parts.append(f"first-coordinate check over all {ni} items ({m+1}-subsets over budget)")
    for a, b_ in combinations(range(ni), 2):
        both_dummy = items[a].label.kind == "Dummy" and items[b_].label.kind == "Dummy"
        it_fits = fits([vecs[a], vecs[b_]])
        if both_dummy and it_fits:
            bad.append("dummy pair fits: " + _subset_str([items[a].label, items[b_].label]))
        if not both_dummy and not it_fits:
            bad.append("pair does not fit: " + _subset_str([items[a].label, items[b_].label]))
    parts.append(f"all {math.comb(ni, 2)} pairs")
    dummies = [i for i in range(ni) if items[i].label.kind == "Dummy"]
    for d in dummies:
        rest = [i for i in range(ni) if i != d]
        for a, b_ in combinations(rest, 2):
            if fits([vecs[d], vecs[a], vecs[b_]]):
                bad.append("dummy plus two fits: "
                           + _subset_str([items[d].label, items[a].label, items[b_].label]))
    parts.append("all dummy-plus-two triples")
    reports.append(_finish_report(
        "skew_binsize", "; ".join(parts),
        min(big, budget) + math.comb(ni, 2), bad, start))

    # (3) m-subsets of items fit iff tuple-plus-fillers pattern.
    start = time.monotonic()
    universe_size = math.comb(ni, m)
    _check_budget(universe_size, budget, "skewed vector correspondence")
    bad = []
    hits = 0
    for combo in combinations(range(ni), m):
        labels = [items[i].label for i in combo]
        it_fits = fits(items[i].vec for i in combo)
        if it_fits:
            hits += 1
        if it_fits != _tuple_pattern(labels, filler_levels):
            bad.append(_subset_str(labels))
    universe = f"all C({ni},{m})={universe_size} {m}-subsets of the items"
    reports.append(_finish_report("skew_vectorcor", universe, universe_size, bad, start, hits=hits))

    # (4) unique decomposition of b's constant as m pool constants.
    reports.append(check_constant_decomposition(gadget, budget))
    return reports


def check_constant_decomposition(
    gadget: SkewedGadgetIntegers, budget: int = DEFAULT_BUDGET
) -> LemmaReport:
    """2^(m+1)-1 must decompose as m pool constants (repetition allowed)
    in exactly one way: one of each."""
    start = time.monotonic()
    m = gadget.m
    pool = gadget.constant_pool()
    target = 2 ** (m + 1) - 1
    universe_size = math.comb(len(pool) + m - 1, m)
    _check_budget(universe_size, budget, "constant decomposition")
    decompositions = [
        multiset
        for multiset in combinations_with_replacement(sorted(pool), m)
        if sum(multiset) == target
    ]
    expected = tuple(sorted(pool))
    bad = []
    for d in decompositions:
        if d != expected:
            bad.append(f"unexpected decomposition {d}")
    if decompositions != [expected] and not bad:
        bad.append(f"expected decomposition {expected} not found")
    universe = (
        f"all {universe_size} multisets of {m} constants from pool {sorted(pool)} "
        f"(target {target}, {len(decompositions)} decompositions found)")
    return _finish_report("skew_constants", universe, universe_size, bad, start,
                          hits=len(decompositions))


# ---------------------------------------------------------------------------
# Covering checks.

def check_cover_claims(
    instance: VectorInstance, budget: int = DEFAULT_BUDGET
) -> list[LemmaReport]:
    """The three covering-size claims plus the tuple correspondence.

    The first claim ("any 5 vectors cover") is enumerated and reported
    honestly; it is falsified whenever the instance contains 5 tuple items
    whose second coordinates sum below 1.
    """
    items = instance.items
    n = len(items)
    vecs = [it.vec for it in items]
    dummies = [i for i in range(n) if items[i].label.kind == "Dummy"]
    nondummies = [i for i in range(n) if items[i].label.kind != "Dummy"]
    reports = []

    start = time.monotonic()
    bad: list[str] = []
    universe_size = math.comb(n, 5)
    _check_budget(universe_size, budget, "five-subset covers")
    for combo in combinations(range(n), 5):
        if not covers(vecs[i] for i in combo):
            bad.append(_subset_str([items[i].label for i in combo]))
    reports.append(_finish_report(
        "cover_claim1_five_subsets",
        f"all C({n},5)={universe_size} 5-subsets of the items",
        universe_size, bad, start))

    start = time.monotonic()
    bad = []
    pair_count = 0
    for d in dummies:
        for i in range(n):
            if i == d:
                continue
            pair_count += 1
            if not covers([vecs[d], vecs[i]]):
                bad.append("dummy pair fails to cover: "
                           + _subset_str([items[d].label, items[i].label]))
    reports.append(_finish_report(
        "cover_claim2_dummy_pair",
        f"all {pair_count} (dummy, other) pairs",
        pair_count, bad, start))

    start = time.monotonic()
    bad = []
    for i in range(n):
        if covers([vecs[i]]):
            bad.append(f"single item covers: {items[i].label}")
    reports.append(_finish_report(
        "cover_claim3_single", f"all {n} single items", n, bad, start))

    start = time.monotonic()
    bad = []
    universe_size = math.comb(len(nondummies), 4)
    _check_budget(universe_size, budget, "cover correspondence")
    hits = 0
    for combo in combinations(nondummies, 4):
        labels = [items[i].label for i in combo]
        covered = covers(vecs[i] for i in combo)
        if covered:
            hits += 1
        if covered != _tuple_pattern(labels):
            bad.append(_subset_str(labels))
    reports.append(_finish_report(
        "cover_tuple_correspondence",
        f"all C({len(nondummies)},4)={universe_size} non-dummy 4-subsets",
        universe_size, bad, start, hits=hits))
    return reports


# ---------------------------------------------------------------------------
# Gap checks (pincer-capable, alpha certified by the exact 3DM solver).

def _classify_bins(
    instance: VectorInstance,
    groups: tuple[tuple[int, ...], ...],
    full_size: int,
) -> tuple[int, int, int]:
    n_g = n_d = n_r = 0
    for group in groups:
        has_dummy = any(instance.items[i].label.kind == "Dummy" for i in group)
        if has_dummy:
            n_d += 1
        elif len(group) == full_size:
            n_g += 1
        else:
            n_r += 1
    return n_g, n_d, n_r


def gap_check_packing(
    instance3dm: Max3dmInstance, beta: int, limits: SolverLimits | None = None
) -> GapReport:
    alpha, _ = solve_3dm_exact(instance3dm)
    vinst = build_packing_instance(instance3dm, beta)
    opt, solution = solve_vbp_exact(vinst, limits)
    q = instance3dm.q
    t_count = len(instance3dm.tuples)
    upper = t_count + 3 * q - 3 * beta if alpha >= beta else None
    lower = Fraction(t_count + 3 * q) - Fraction(alpha, 3) - Fraction(8 * beta, 3)
    rounded = math.ceil(lower)
    holds = opt >= rounded and (upper is None or opt <= upper)
    n_g, n_d, n_r = _classify_bins(vinst, solution.bins, 4)
    return GapReport(
        flavor="pack", q=q, t_count=t_count, alpha=alpha, beta=beta,
        constructive_bound=upper, counting_bound=lower, counting_bound_rounded=rounded,
        solver_opt=opt, n_g=n_g, n_d=n_d, n_r=n_r, bounds_hold=holds)


def gap_check_skewed(
    instance3dm: Max3dmInstance,
    beta: int,
    delta: Fraction,
    limits: SolverLimits | None = None,
) -> GapReport:
    alpha, _ = solve_3dm_exact(instance3dm)
    vinst = build_skewed_instance(instance3dm, beta, delta)
    m = vinst.params["m"]
    opt, solution = solve_vbp_exact(vinst, limits)
    q = instance3dm.q
    t_count = len(instance3dm.tuples)
    base = (m - 3) * t_count + 3 * q
    upper = base - (m - 1) * beta if alpha >= beta else None
    lower = (Fraction(base) - Fraction(alpha, m - 1)
             - Fraction(m * (m - 2) * beta, m - 1))
    rounded = math.ceil(lower)
    holds = opt >= rounded and (upper is None or opt <= upper)
    n_g, n_d, n_r = _classify_bins(vinst, solution.bins, m)
    return GapReport(
        flavor="skew", q=q, t_count=t_count, alpha=alpha, beta=beta,
        constructive_bound=upper, counting_bound=lower, counting_bound_rounded=rounded,
        solver_opt=opt, n_g=n_g, n_d=n_d, n_r=n_r, bounds_hold=holds)


def gap_check_covering(
    instance3dm: Max3dmInstance, beta: int, limits: SolverLimits | None = None
) -> GapReport:
    alpha, _ = solve_3dm_exact(instance3dm)
    vinst = build_covering_instance(instance3dm, beta)
    opt, solution = solve_vbc_exact(vinst, limits)
    q = instance3dm.q
    t_count = len(instance3dm.tuples)
    lower = t_count + 3 * q - 3 * beta if alpha >= beta else None
    upper = (Fraction(t_count + 3 * q) - Fraction(16 * beta, 5)
             + Fraction(alpha, 5))
    rounded = math.floor(upper)
    holds = opt <= rounded and (lower is None or opt >= lower)
    n_g, n_d, n_r = _classify_bins(vinst, solution.covers, 4)
    return GapReport(
        flavor="cover", q=q, t_count=t_count, alpha=alpha, beta=beta,
        constructive_bound=lower, counting_bound=upper, counting_bound_rounded=rounded,
        solver_opt=opt, n_g=n_g, n_d=n_d, n_r=n_r, bounds_hold=holds)


# ---------------------------------------------------------------------------
# The 1997 construction's failing claim.

def counterexample_woeginger(q: int) -> LemmaReport:
    """Reproduce the failure of the original 'any 3 vectors fit' claim.

    Uses the original construction with r = 32q and the three tuples
    (1,1,1), (2,1,1), (3,1,1): their tuple vectors' first coordinates sum
    above 1, and r^4 > 3r^3 + 3r^2 + 6r + 6 for every admissible r.
    """
    if q < 3:
        raise ValueError("counterexample needs q >= 3 (elements x_1, x_2, x_3)")
    start = time.monotonic()
    r = 32 * q
    b = r**4 + 15
    t_values = [r**4 - r**3 - r**2 - i * r + 8 for i in (1, 2, 3)]
    first_sum = Fraction(3, 5) + Fraction(sum(t_values), 5 * b)
    rhs = 3 * r**3 + 3 * r**2 + 6 * r + 6
    bad: list[str] = []
    if first_sum <= 1:
        bad.append(f"three tuple vectors fit after all: first coordinates sum to {first_sum}")
    if r**4 <= rhs:
        bad.append(f"r^4={r**4} <= 3r^3+3r^2+6r+6={rhs}")
    universe = (
        f"original construction with r={r}: first coordinates of the three tuple "
        f"vectors sum to {first_sum} (> 1), and r^4={r**4} > 3r^3+3r^2+6r+6={rhs}")
    return _finish_report("woeginger_counterexample", universe, 2, bad, start)


# ---------------------------------------------------------------------------
# Theorem-level bound arithmetic.

def _decimal(x: Fraction) -> str:
    return f"{x.numerator / x.denominator:.12g}"


def hardness_bounds(
    constants: HardnessConstants | None = None,
    m_range: range = range(4, 65),
) -> list[BoundResult]:
    """Exact-rational evaluation of the three inapproximability bounds."""
    constants = constants or HardnessConstants()
    a0, b0 = constants.alpha0, constants.beta0
    results = []

    packing = 1 + (b0 - a0) / (15 - 9 * b0)
    results.append(BoundResult(
        name="packing", exact=packing, decimal=_decimal(packing),
        reference=Fraction(600, 599), strict=False,
        satisfied=packing >= Fraction(600, 599)))

    covering = 1 + (b0 - a0) / (25 - 16 * b0 + a0)
    results.append(BoundResult(
        name="covering", exact=covering, decimal=_decimal(covering),
        reference=Fraction(998, 997), strict=False,
        satisfied=covering >= Fraction(998, 997)))

    for m in m_range:
        delta = Fraction(2, m + 1)  # the largest delta mapping to this m
        skew = 1 + (b0 - a0) / (m * (2 * m - 3) - (m - 1) ** 2 * b0)
        reference = 1 + delta**2 / 400
        results.append(BoundResult(
            name=f"skew_m_{m}", exact=skew, decimal=_decimal(skew),
            reference=reference, strict=True, satisfied=skew > reference))
    return results
