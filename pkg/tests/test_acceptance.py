"""Acceptance suite: exact bound arithmetic, enumerated lemma checks,
pincer gap checks, oracle equivalence, and mutation sensitivity.

Each test pins the tolerance (always exact) and a wall-clock budget.
"""

import random
import time
from fractions import Fraction

import pytest

from oracles import naive_max_covers, naive_min_bins
from vbgap.gadgets import (
    build_covering_instance,
    build_integers,
    build_packing_instance,
    build_skewed_integers,
    mutate_integer,
    skewed_instance_from_gadget,
)
from vbgap.matching import generate_e2, planted_instance, solve_3dm_exact
from vbgap.model import Item, ItemLabel, Vec2, VectorInstance
from vbgap.solvers import solve_vbc_exact, solve_vbp_exact
from vbgap.verify import (
    check_bin_size,
    check_cover_claims,
    check_integer_correspondence,
    check_skewed_lemmas,
    check_vector_correspondence,
    counterexample_woeginger,
    gap_check_covering,
    gap_check_packing,
    hardness_bounds,
)

F = Fraction


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds
        self.start = time.monotonic()

    def check(self):
        elapsed = time.monotonic() - self.start
        assert elapsed < self.seconds, f"exceeded {self.seconds}s budget ({elapsed:.1f}s)"


def test_criterion_1_bound_reproduction_exact():
    """Packing bound >= 1+1/599 and covering bound >= 1+1/997, exact rationals.

    The packing bound holds. The covering bound does NOT: with
    alpha0 = 0.9690082645 and beta0 = 0.979338843 the exact value
    1 + (beta0-alpha0)/(25-16*beta0+alpha0) falls short of 998/997 by
    120/(103305785*997*10^4) ~ 1.2e-12. The arithmetic below is exact, so
    this is a genuine shortfall of the stated constants, not a numerical
    artifact; the bound holds if beta0 is raised to 0.979339943. The test
    is stated faithfully and is expected to fail on the covering half.
    """
    budget = Budget(1)
    results = {r.name: r for r in hardness_bounds()}
    assert results["packing"].exact >= 1 + F(1, 599)
    budget.check()
    assert results["covering"].exact >= 1 + F(1, 997), (
        "covering bound misses 998/997 by "
        f"{float(1 + F(1, 997) - results['covering'].exact):.3e} "
        "with the stated constants (exact shortfall; see notes/decisions.md)")


def test_criterion_2_skewed_bound_property():
    budget = Budget(1)
    results = {r.name: r for r in hardness_bounds(m_range=range(4, 65))}
    for m in range(4, 65):
        r = results[f"skew_m_{m}"]
        delta = F(2, m + 1)
        assert r.exact > 1 + delta**2 / 400, f"skew bound fails at m={m}"
    budget.check()


def test_criterion_3_lemma_enumeration_suite():
    budget = Budget(60)
    instances = [generate_e2(2, seed=3), generate_e2(3, seed=1),
                 planted_instance(3, 3, 0, seed=0)]
    for inst3dm in instances:
        g = build_integers(inst3dm)
        assert check_integer_correspondence(g).verdict == "verified"
        vinst = build_packing_instance(inst3dm, beta=inst3dm.q)
        assert check_bin_size(vinst).verdict == "verified"
        assert check_vector_correspondence(vinst).verdict == "verified"
        cover = build_covering_instance(inst3dm, beta=inst3dm.q)
        reports = {r.claim_id: r for r in check_cover_claims(cover)}
        assert reports["cover_claim2_dummy_pair"].verdict == "verified"
        assert reports["cover_claim3_single"].verdict == "verified"
        assert reports["cover_tuple_correspondence"].verdict == "verified"
        for r in reports.values():
            assert r.counterexample_total == len(r.counterexamples) or \
                r.counterexample_total > 100  # enumeration ran to completion
    budget.check()


@pytest.mark.parametrize("delta,q", [(F(2, 5), 2), (F(2, 5), 3), (F(1, 3), 2)])
def test_criterion_4_skewed_lemma_suite(delta, q):
    budget = Budget(300)
    inst3dm = generate_e2(q, seed=1)
    gadget = build_skewed_integers(inst3dm, delta)
    vinst = skewed_instance_from_gadget(gadget, beta=q)
    reports = check_skewed_lemmas(vinst, gadget)
    assert all(r.verdict == "verified" for r in reports), [
        (r.claim_id, r.verdict) for r in reports]
    constants = next(r for r in reports if r.claim_id == "skew_constants")
    assert constants.hits == 1  # unique decomposition of 2^(m+1)-1
    budget.check()


@pytest.fixture(scope="module")
def q3_perfect():
    inst = planted_instance(3, 3, 3, seed=2)
    alpha, _ = solve_3dm_exact(inst)
    assert alpha == 3  # planted perfect matching certified, not assumed
    return inst


def test_criterion_5_gap_pincer_packing(q3_perfect):
    budget = Budget(300)
    report = gap_check_packing(q3_perfect, beta=3)
    assert report.solver_opt == 6
    assert report.constructive_bound == 6
    assert report.counting_bound_rounded == 6
    assert report.bounds_hold
    budget.check()


def test_criterion_6_gap_pincer_covering(q3_perfect):
    budget = Budget(300)
    report = gap_check_covering(q3_perfect, beta=3)
    assert report.solver_opt == 6
    assert report.constructive_bound == 6
    assert report.counting_bound_rounded == 6
    assert report.bounds_hold
    budget.check()


def test_criterion_7_counterexample():
    budget = Budget(1)
    for q in (3, 4, 5):
        report = counterexample_woeginger(q)
        assert report.verdict == "verified"
    budget.check()


def _random_raw_instance(rng, n):
    items = tuple(
        Item(ItemLabel("X", i + 1),
             Vec2(F(rng.randint(1, 30), 30), F(rng.randint(1, 30), 30)))
        for i in range(n))
    return VectorInstance(flavor="pack", items=items)


def _gadget_subinstance(rng, base_items, n):
    picked = rng.sample(list(base_items), n)
    return VectorInstance(flavor="pack", items=tuple(picked))


def test_criterion_8_oracle_equivalence():
    budget = Budget(600)
    rng = random.Random(2024)
    gadget_pool = build_packing_instance(generate_e2(3, seed=5), beta=3).items
    mismatches = 0
    for trial in range(200):
        n = rng.randint(1, 9)
        if trial % 2 == 0:
            inst = _random_raw_instance(rng, n)
        else:
            inst = _gadget_subinstance(rng, gadget_pool, n)
        vecs = inst.vectors()
        if solve_vbp_exact(inst)[0] != naive_min_bins(vecs):
            mismatches += 1
        if solve_vbc_exact(inst)[0] != naive_max_covers(vecs):
            mismatches += 1
    assert mismatches == 0
    budget.check()


def test_criterion_9_mutation_sensitivity():
    budget = Budget(300)
    inst3dm = generate_e2(2, seed=3)
    g = build_integers(inst3dm)
    labels = [label for label, _ in g.entries()]
    unflipped = []
    for label in labels:
        for offset in (-1, 1):
            bad = mutate_integer(g, label, offset)
            report = check_integer_correspondence(bad)
            if report.verdict != "falsified":
                unflipped.append((str(label), offset))
    assert unflipped == []
    budget.check()


def test_criterion_10_cover_claim1_falsified_with_witness():
    inst3dm = planted_instance(5, 5, 0, seed=0)
    vinst = build_covering_instance(inst3dm, beta=2)
    report = next(r for r in check_cover_claims(vinst)
                  if r.claim_id == "cover_claim1_five_subsets")
    assert report.verdict == "falsified"
    assert report.counterexample_total >= 1
    assert len(report.counterexamples) >= 1
    assert report.counterexamples[0].count(",") >= 4  # an explicit 5-subset
