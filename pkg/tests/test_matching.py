import random

import pytest

from oracles import naive_3dm_optimum
from vbgap.matching import (
    InfeasibleParametersError,
    Max3dmInstance,
    SizeLimitError,
    deserialize_3dm,
    generate_e2,
    is_valid_matching,
    planted_instance,
    serialize_3dm,
    solve_3dm_exact,
    validate,
)


class TestValidate:
    def test_q2_e2_instance(self, q2_e2):
        report = validate(q2_e2, bound=2)
        assert report.e2_valid
        assert report.tuple_count == 4
        assert report.exactly_regular

    def test_q1_cannot_be_e2(self):
        inst = Max3dmInstance(q=1, tuples=((1, 1, 1),))
        assert not validate(inst, bound=2).e2_valid

    def test_duplicate_tuple_flagged(self):
        inst = Max3dmInstance(q=2, tuples=((1, 1, 1), (1, 1, 1)))
        report = validate(inst)
        assert not report.distinct
        assert report.duplicates == ((1, 1, 1),)


class TestExactSolver:
    def test_q2_e2_optimum_is_one(self, q2_e2):
        opt, witness = solve_3dm_exact(q2_e2)
        assert opt == 1
        assert is_valid_matching(q2_e2, witness)
        assert len(witness.selected) == 1

    def test_diagonal_plus_shifted_is_perfect(self):
        tuples = tuple((i, i, i) for i in range(1, 4)) + tuple(
            (i, i % 3 + 1, (i + 1) % 3 + 1) for i in range(1, 4))
        inst = Max3dmInstance(q=3, tuples=tuples)
        opt, witness = solve_3dm_exact(inst)
        assert opt == 3
        assert is_valid_matching(inst, witness)

    def test_empty_tuple_list(self):
        opt, witness = solve_3dm_exact(Max3dmInstance(q=2, tuples=()))
        assert opt == 0
        assert witness.selected == ()

    def test_size_limit(self, q2_e2):
        with pytest.raises(SizeLimitError):
            solve_3dm_exact(q2_e2, max_tuples=3)

    def test_agrees_with_naive_enumeration(self):
        rng = random.Random(7)
        for _ in range(30):
            q = rng.randint(2, 4)
            pool = [(i, j, k)
                    for i in range(1, q + 1)
                    for j in range(1, q + 1)
                    for k in range(1, q + 1)]
            tuples = tuple(rng.sample(pool, rng.randint(0, min(10, len(pool)))))
            inst = Max3dmInstance(q=q, tuples=tuples)
            opt, witness = solve_3dm_exact(inst)
            assert opt == naive_3dm_optimum(inst)
            assert is_valid_matching(inst, witness)
            assert len(witness.selected) == opt


class TestGenerators:
    @pytest.mark.parametrize("q", [2, 3, 5, 8])
    def test_e2_outputs_are_e2_with_perfect_matching(self, q):
        inst = generate_e2(q, seed=11)
        report = validate(inst, bound=2)
        assert report.e2_valid
        opt, _ = solve_3dm_exact(inst)
        assert opt == q

    def test_e2_deterministic(self):
        assert generate_e2(4, seed=5) == generate_e2(4, seed=5)

    def test_e2_rejects_q1(self):
        with pytest.raises(InfeasibleParametersError):
            generate_e2(1, seed=0)

    def test_planted_perfect_matching_alone(self):
        inst = planted_instance(4, 4, 0, seed=2)
        opt, _ = solve_3dm_exact(inst)
        assert opt == 4

    def test_single_extra_tuple(self):
        inst = planted_instance(3, 0, 1, seed=2)
        opt, _ = solve_3dm_exact(inst)
        assert opt == 1

    def test_conflicting_extras_keep_optimum(self):
        inst = planted_instance(2, 1, 3, seed=4)
        assert len(inst.tuples) == 4
        opt, _ = solve_3dm_exact(inst)
        assert opt == 1

    def test_extra_budget_checked(self):
        with pytest.raises(InfeasibleParametersError):
            planted_instance(2, 1, 10, seed=0)

    def test_planted_deterministic(self):
        assert planted_instance(5, 3, 4, seed=9) == planted_instance(5, 3, 4, seed=9)


def test_3dm_round_trip(q3_e2):
    text = serialize_3dm(q3_e2)
    assert deserialize_3dm(text) == q3_e2
    assert serialize_3dm(deserialize_3dm(text)) == text
