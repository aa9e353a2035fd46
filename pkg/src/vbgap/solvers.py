"""Exact and heuristic solvers for 2-dimensional bin packing and covering.

The exact solvers are subset dynamic programs over item bitmasks with a
lowest-index pivot rule, so they stay independent oracles for the gap
checks: feasibility is decided purely by the fits/covers predicates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import (
    CoveringSolution,
    PackingSolution,
    Vec2,
    VectorInstance,
    fits,
)

DEFAULT_MAX_ITEMS = 24


class SizeLimitError(ValueError):
    """The instance exceeds the configured exact-solver limit."""


class InfeasibleItemError(ValueError):
    """Some single item does not fit in a bin on its own."""


@dataclass(frozen=True)
class SolverLimits:
    """max_config_size=None derives the per-bin size cap from the instance:
    4 for gadget pack instances, m for gadget skew instances, unlimited
    otherwise. Covers are never capped (minimal covers of gadget covering
    instances can exceed 4 items)."""

    max_items: int = DEFAULT_MAX_ITEMS
    max_config_size: int | None = None


def _bin_size_cap(instance: VectorInstance, limits: SolverLimits) -> int | None:
    if limits.max_config_size is not None:
        return limits.max_config_size
    # The structural size lemmas apply only to instances that carry their
    # generating gadget parameters; foreign input gets the general solver.
    if "b" not in instance.params:
        return None
    if instance.flavor == "skew":
        return instance.params["m"]
    return 4


def _check_limits(instance: VectorInstance, limits: SolverLimits) -> None:
    if instance.item_count > limits.max_items:
        raise SizeLimitError(
            f"{instance.item_count} items exceed the exact-solver limit "
            f"{limits.max_items}")


def _fitting_configs_by_pivot(
    vecs: list[Vec2], cap: int | None
) -> list[list[int]]:
    """All bitmasks of fitting subsets, grouped by lowest item index.

    Uses monotonicity of fits: supersets of a non-fitting set never fit,
    so the depth-first extension stops at the first violation.
    """
    n = len(vecs)
    ones = Fraction(1)
    by_pivot: list[list[int]] = [[] for _ in range(n)]

    def extend(pivot: int, start: int, mask: int, size: int,
               s1: Fraction, s2: Fraction) -> None:
        by_pivot[pivot].append(mask)
        if cap is not None and size >= cap:
            return
        for j in range(start, n):
            t1 = s1 + vecs[j].c1
            t2 = s2 + vecs[j].c2
            if t1 <= ones and t2 <= ones:
                extend(pivot, j + 1, mask | (1 << j), size + 1, t1, t2)

    for p in range(n):
        if vecs[p].c1 <= 1 and vecs[p].c2 <= 1:
            extend(p, p + 1, 1 << p, 1, vecs[p].c1, vecs[p].c2)
    for configs in by_pivot:
        configs.sort()
    return by_pivot


def solve_vbp_exact(
    instance: VectorInstance, limits: SolverLimits | None = None
) -> tuple[int, PackingSolution]:
    """Exact minimum bin count with one optimal packing as witness."""
    limits = limits or SolverLimits()
    _check_limits(instance, limits)
    vecs = instance.vectors()
    n = len(vecs)
    if n == 0:
        return 0, PackingSolution(bins=())
    for i, v in enumerate(vecs):
        if not fits([v]):
            raise InfeasibleItemError(f"item {instance.items[i].label} does not fit alone")
    cap = _bin_size_cap(instance, limits)
    by_pivot = _fitting_configs_by_pivot(vecs, cap)

    size = 1 << n
    infinity = n + 1
    dp = [infinity] * size
    choice = [0] * size
    dp[0] = 0
    for mask in range(1, size):
        pivot = (mask & -mask).bit_length() - 1
        best = infinity
        best_cfg = 0
        for cfg in by_pivot[pivot]:
            if cfg & mask == cfg:
                cand = dp[mask ^ cfg] + 1
                if cand < best:
                    best = cand
                    best_cfg = cfg
        dp[mask] = best
        choice[mask] = best_cfg

    bins = []
    mask = size - 1
    while mask:
        cfg = choice[mask]
        bins.append(tuple(i for i in range(n) if cfg >> i & 1))
        mask ^= cfg
    return dp[size - 1], PackingSolution(bins=tuple(bins))


def _minimal_covers_by_pivot(vecs: list[Vec2]) -> list[list[int]]:
    """All bitmasks of minimal unit covers, grouped by lowest item index.

    Depth-first in index order: only non-covering sets are extended, and a
    set that first covers is recorded after an explicit minimality check
    (dropping any single member must uncover it).
    """
    n = len(vecs)
    ones = Fraction(1)
    by_pivot: list[list[int]] = [[] for _ in range(n)]

    def minimal(members: list[int], s1: Fraction, s2: Fraction) -> bool:
        for i in members:
            if s1 - vecs[i].c1 >= ones and s2 - vecs[i].c2 >= ones:
                return False
        return True

    def extend(pivot: int, start: int, members: list[int],
               s1: Fraction, s2: Fraction) -> None:
        for j in range(start, n):
            t1 = s1 + vecs[j].c1
            t2 = s2 + vecs[j].c2
            members.append(j)
            if t1 >= ones and t2 >= ones:
                if minimal(members, t1, t2):
                    mask = 0
                    for i in members:
                        mask |= 1 << i
                    by_pivot[pivot].append(mask)
            else:
                extend(pivot, j + 1, members, t1, t2)
            members.pop()

    for p in range(n):
        if vecs[p].c1 >= 1 and vecs[p].c2 >= 1:
            by_pivot[p].append(1 << p)
        else:
            extend(p, p + 1, [p], vecs[p].c1, vecs[p].c2)
    for configs in by_pivot:
        configs.sort()
    return by_pivot


def solve_vbc_exact(
    instance: VectorInstance, limits: SolverLimits | None = None
) -> tuple[int, CoveringSolution]:
    """Exact maximum number of disjoint unit covers with a witness.

    Only minimal covers are considered (no subset of a unit cover is a
    unit cover), which never changes the optimum.
    """
    limits = limits or SolverLimits()
    _check_limits(instance, limits)
    vecs = instance.vectors()
    n = len(vecs)
    if n == 0:
        return 0, CoveringSolution(covers=())
    by_pivot = _minimal_covers_by_pivot(vecs)

    memo: dict[int, int] = {0: 0}

    def value(mask: int) -> int:
        cached = memo.get(mask)
        if cached is not None:
            return cached
        pivot = (mask & -mask).bit_length() - 1
        best = value(mask & (mask - 1))  # discard the pivot item
        for cfg in by_pivot[pivot]:
            if cfg & mask == cfg:
                cand = 1 + value(mask ^ cfg)
                if cand > best:
                    best = cand
        memo[mask] = best
        return best

    full = (1 << n) - 1
    opt = value(full)

    covers = []
    leftovers = []
    mask = full
    while mask:
        pivot = (mask & -mask).bit_length() - 1
        target = memo[mask]
        chosen = 0
        for cfg in by_pivot[pivot]:
            if cfg & mask == cfg and 1 + memo.get(mask ^ cfg, -1) == target:
                chosen = cfg
                break
        if chosen:
            covers.append(tuple(i for i in range(n) if chosen >> i & 1))
            mask ^= chosen
        else:
            leftovers.append(pivot)
            mask &= mask - 1
    return opt, CoveringSolution(covers=tuple(covers), leftovers=tuple(leftovers))


def first_fit(
    instance: VectorInstance, order: list[int] | None = None
) -> PackingSolution:
    """Place each item, in order, into the first bin where it still fits."""
    vecs = instance.vectors()
    if order is None:
        order = list(range(len(vecs)))
    bins: list[tuple[list[int], Fraction, Fraction]] = []
    for i in order:
        v = vecs[i]
        for idx, (members, s1, s2) in enumerate(bins):
            if s1 + v.c1 <= 1 and s2 + v.c2 <= 1:
                members.append(i)
                bins[idx] = (members, s1 + v.c1, s2 + v.c2)
                break
        else:
            bins.append(([i], v.c1, v.c2))
    return PackingSolution(bins=tuple(tuple(members) for members, _, _ in bins))


def first_fit_decreasing(instance: VectorInstance) -> PackingSolution:
    """First fit on items sorted by max coordinate, descending.

    Ties break by (c1 descending, label ascending) for determinism.
    """
    order = sorted(
        range(instance.item_count),
        key=lambda i: (
            -max(instance.items[i].vec.c1, instance.items[i].vec.c2),
            -instance.items[i].vec.c1,
            instance.items[i].label.sort_key(),
        ),
    )
    return first_fit(instance, order)


def greedy_cover(
    instance: VectorInstance, order: list[int] | None = None
) -> CoveringSolution:
    """Accumulate items in order until the candidate covers, then seal it."""
    vecs = instance.vectors()
    if order is None:
        order = list(range(len(vecs)))
    covers_out: list[tuple[int, ...]] = []
    current: list[int] = []
    s1 = s2 = Fraction(0)
    for i in order:
        current.append(i)
        s1 += vecs[i].c1
        s2 += vecs[i].c2
        if s1 >= 1 and s2 >= 1:
            covers_out.append(tuple(current))
            current = []
            s1 = s2 = Fraction(0)
    return CoveringSolution(covers=tuple(covers_out), leftovers=tuple(current))
