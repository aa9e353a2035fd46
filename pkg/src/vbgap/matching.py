"""MAX-3-DM and MAX-3-DM-E2 instances: generation, validation, exact solving."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .model import FORMAT_VERSION, InvariantError, ParseError, _canonical_dumps

DEFAULT_TUPLE_LIMIT = 24


class SizeLimitError(ValueError):
    """The instance exceeds the configured exhaustive-search limit."""


class InfeasibleParametersError(ValueError):
    """Requested generator parameters cannot be satisfied."""


@dataclass(frozen=True)
class HardnessConstants:
    """Inapproximability thresholds for MAX-3-DM-E2 promise instances."""

    alpha0: Fraction = Fraction(9690082645, 10**10)
    beta0: Fraction = Fraction(979338843, 10**9)

    def __post_init__(self) -> None:
        if not (0 < self.alpha0 < self.beta0 < 1):
            raise InvariantError("need 0 < alpha0 < beta0 < 1")


@dataclass(frozen=True)
class Max3dmInstance:
    """Ground sets of size q and an ordered tuple list (1-based indices)."""

    q: int
    tuples: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if not (isinstance(self.q, int) and self.q >= 0):
            raise InvariantError(f"q must be a non-negative integer, got {self.q!r}")
        object.__setattr__(self, "tuples", tuple(tuple(t) for t in self.tuples))
        for t in self.tuples:
            if len(t) != 3 or not all(isinstance(v, int) and 1 <= v <= self.q for v in t):
                raise InvariantError(f"tuple {t!r} out of range for q={self.q}")


@dataclass(frozen=True)
class MatchingSolution:
    selected: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "selected", tuple(sorted(self.selected)))


def is_valid_matching(instance: Max3dmInstance, solution: MatchingSolution) -> bool:
    used_x: set[int] = set()
    used_y: set[int] = set()
    used_z: set[int] = set()
    for idx in solution.selected:
        if not (0 <= idx < len(instance.tuples)):
            return False
        i, j, k = instance.tuples[idx]
        if i in used_x or j in used_y or k in used_z:
            return False
        used_x.add(i)
        used_y.add(j)
        used_z.add(k)
    return True


@dataclass(frozen=True)
class ValidationReport:
    tuple_count: int
    distinct: bool
    duplicates: tuple[tuple[int, int, int], ...]
    occurrences: dict[tuple[str, int], int]
    bound: int | None
    within_bound: bool | None
    exactly_regular: bool | None
    e2_valid: bool


def validate(instance: Max3dmInstance, bound: int | None = None) -> ValidationReport:
    """Report-style structural validation; violations are listed, never thrown."""
    seen: set[tuple[int, int, int]] = set()
    duplicates = []
    for t in instance.tuples:
        if t in seen:
            duplicates.append(t)
        seen.add(t)
    occurrences: dict[tuple[str, int], int] = {}
    for axis in "xyz":
        for e in range(1, instance.q + 1):
            occurrences[(axis, e)] = 0
    for i, j, k in instance.tuples:
        occurrences[("x", i)] += 1
        occurrences[("y", j)] += 1
        occurrences[("z", k)] += 1
    distinct = not duplicates
    within_bound = exactly_regular = None
    if bound is not None:
        counts = occurrences.values()
        within_bound = all(c <= bound for c in counts)
        exactly_regular = all(c == bound for c in counts)
    e2_valid = (
        distinct
        and instance.q >= 1
        and len(instance.tuples) == 2 * instance.q
        and all(c == 2 for c in occurrences.values())
    )
    return ValidationReport(
        tuple_count=len(instance.tuples),
        distinct=distinct,
        duplicates=tuple(duplicates),
        occurrences=occurrences,
        bound=bound,
        within_bound=within_bound,
        exactly_regular=exactly_regular,
        e2_valid=e2_valid,
    )


def solve_3dm_exact(
    instance: Max3dmInstance, max_tuples: int = DEFAULT_TUPLE_LIMIT
) -> tuple[int, MatchingSolution]:
    """Exact maximum matching by depth-first search with conflict pruning.

    Deterministic: the witness is the first optimum found in depth-first
    order over the input tuple order.
    """
    tuples = instance.tuples
    n = len(tuples)
    if n > max_tuples:
        raise SizeLimitError(f"|T|={n} exceeds the exhaustive-search limit {max_tuples}")

    best = 0
    best_sel: tuple[int, ...] = ()
    cap = min(instance.q, n)
    sel: list[int] = []
    used_x: set[int] = set()
    used_y: set[int] = set()
    used_z: set[int] = set()

    def dfs(start: int) -> None:
        nonlocal best, best_sel
        if len(sel) > best:
            best = len(sel)
            best_sel = tuple(sel)
        if best == cap or len(sel) + (n - start) <= best:
            return
        for idx in range(start, n):
            if len(sel) + (n - idx) <= best:
                break
            i, j, k = tuples[idx]
            if i in used_x or j in used_y or k in used_z:
                continue
            sel.append(idx)
            used_x.add(i)
            used_y.add(j)
            used_z.add(k)
            dfs(idx + 1)
            sel.pop()
            used_x.discard(i)
            used_y.discard(j)
            used_z.discard(k)
            if best == cap:
                return

    dfs(0)
    return best, MatchingSolution(selected=best_sel)


def generate_e2(q: int, seed: int) -> Max3dmInstance:
    """Union of two disjoint permutation-induced perfect matchings.

    Every element occurs exactly twice and |T| = 2q. The optimum is q by
    construction (yes-case only); no-case-like instances come from
    :func:`planted_instance`.
    """
    if q < 2:
        raise InfeasibleParametersError("generate_e2 requires q >= 2")
    rng = random.Random(seed)
    elements = list(range(1, q + 1))
    while True:
        pi1, sig1 = rng.sample(elements, q), rng.sample(elements, q)
        pi2, sig2 = rng.sample(elements, q), rng.sample(elements, q)
        t1 = [(i, pi1[i - 1], sig1[i - 1]) for i in elements]
        t2 = [(i, pi2[i - 1], sig2[i - 1]) for i in elements]
        if not set(t1) & set(t2):
            return Max3dmInstance(q=q, tuples=tuple(t1 + t2))


def planted_instance(
    q: int, planted_size: int, extra_tuples: int, seed: int
) -> Max3dmInstance:
    """A planted partial matching plus mutually conflicting extra tuples.

    The extras all share the x-element 1, so they conflict pairwise and
    with the planted tuple on x_1 (if any). The true optimum is certified
    downstream by :func:`solve_3dm_exact`, never assumed.
    """
    if not (0 <= planted_size <= q):
        raise InfeasibleParametersError("planted_size must lie in [0, q]")
    rng = random.Random(seed)
    elements = list(range(1, q + 1))
    pi, sig = rng.sample(elements, q), rng.sample(elements, q)
    planted = [(i, pi[i - 1], sig[i - 1]) for i in range(1, planted_size + 1)]
    pool = [
        (1, j, k)
        for j in elements
        for k in elements
        if (1, j, k) not in set(planted)
    ]
    if extra_tuples > len(pool):
        raise InfeasibleParametersError(
            f"cannot place {extra_tuples} distinct extra tuples (only {len(pool)} available)")
    extras = rng.sample(pool, extra_tuples)
    return Max3dmInstance(q=q, tuples=tuple(planted + extras))


def serialize_3dm(instance: Max3dmInstance) -> str:
    doc = {
        "format_version": FORMAT_VERSION,
        "q": instance.q,
        "tuples": [list(t) for t in instance.tuples],
    }
    return _canonical_dumps(doc)


def deserialize_3dm(text: str) -> Max3dmInstance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(doc, dict) or doc.get("format_version") != FORMAT_VERSION:
        raise ParseError("not a format_version-1 3DM document")
    for name in ("q", "tuples"):
        if name not in doc:
            raise ParseError(f"3DM document is missing field {name!r}")
    return Max3dmInstance(q=doc["q"], tuples=tuple(tuple(t) for t in doc["tuples"]))
