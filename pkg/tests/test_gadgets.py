from fractions import Fraction

import pytest

from vbgap.gadgets import (
    GadgetError,
    build_covering_instance,
    build_integers,
    build_packing_instance,
    build_skewed_instance,
    build_skewed_integers,
    default_beta,
    deserialize_four_partition,
    emit_four_partition,
    gadget_from_instance,
    instance_3dm_from_vector,
    serialize_four_partition,
    skew_m,
)
from vbgap.matching import Max3dmInstance
from vbgap.model import InvariantError

F = Fraction


class TestGeneralIntegers:
    def test_q2_values(self, q2_e2):
        g = build_integers(q2_e2)
        assert (g.r, g.b) == (128, 268435471)
        assert g.x[1] == 129
        assert g.y[1] == 16386
        assert g.z[1] == 2097156
        assert g.t[(1, 1, 1)] == 266321800
        assert g.x[1] + g.y[1] + g.z[1] + g.t[(1, 1, 1)] == g.b

    def test_wrong_category_four_set_misses_target(self, q2_e2):
        g = build_integers(q2_e2)
        assert g.x[1] + g.x[2] + g.y[1] + g.z[1] == 2113928 != g.b

    def test_tuple_sum_identity_all_tuples(self, q3_e2):
        g = build_integers(q3_e2)
        for (i, j, k), t in g.t.items():
            assert g.x[i] + g.y[j] + g.z[k] + t == g.b

    def test_range_and_distinctness(self, q3_e2):
        g = build_integers(q3_e2)
        values = [a for _, a in g.entries()]
        assert all(0 < a < g.b for a in values)
        assert len(set(values)) == len(values)


class TestSkewedIntegers:
    @pytest.mark.parametrize("delta,m", [
        (F(7, 20), 5),
        (F(19, 50), 5),
        (F(2, 5), 4),
        (F(1, 3), 5),
        (F(1, 4), 7),
    ])
    def test_m_from_delta(self, delta, m):
        assert skew_m(delta) == m

    def test_delta_out_of_range(self, q2_e2):
        with pytest.raises(GadgetError):
            build_skewed_integers(q2_e2, F(1, 2))

    def test_m4_has_no_fillers(self, q2_e2):
        g = build_skewed_integers(q2_e2, F(2, 5))
        assert g.m == 4
        assert g.fillers == {}

    @pytest.mark.parametrize("delta", [F(2, 5), F(1, 3)])
    def test_tuple_sum_identity(self, q2_e2, delta):
        g = build_skewed_integers(q2_e2, delta)
        filler_total = sum(g.fillers.values())
        for (i, j, k), t in g.t.items():
            assert g.x[i] + g.y[j] + g.z[k] + t + filler_total == g.b

    def test_constant_pool(self, q2_e2):
        g = build_skewed_integers(q2_e2, F(1, 3))
        assert sorted(g.constant_pool()) == [1, 2, 4, 16, 40]
        assert sum(g.constant_pool()) == 2 ** (g.m + 1) - 1

    def test_range_holds(self, q2_e2):
        g = build_skewed_integers(q2_e2, F(1, 3))
        assert all(0 < a < g.b for _, a in g.entries())


class TestDefaultBeta:
    @pytest.mark.parametrize("q,expected", [(2, 2), (3, 3), (100, 98)])
    def test_values(self, q, expected):
        assert default_beta(Max3dmInstance(q=q, tuples=())) == expected


class TestPackingInstance:
    def test_item_counts(self, q3_e2):
        vinst = build_packing_instance(q3_e2, beta=3)
        assert vinst.item_count == 18
        dummies = [it for it in vinst.items if it.label.kind == "Dummy"]
        assert len(dummies) == 3
        assert all(it.vec == dummies[0].vec for it in dummies)

    def test_coordinates_sum_to_half(self, q3_e2):
        vinst = build_packing_instance(q3_e2, beta=3)
        for item in vinst.items:
            if item.label.kind != "Dummy":
                assert item.vec.c1 + item.vec.c2 == F(1, 2)
                assert F(1, 5) < item.vec.c1 < F(2, 5)

    def test_negative_dummy_count_rejected(self, q2_e2):
        with pytest.raises(GadgetError, match="negative dummy count"):
            build_packing_instance(q2_e2, beta=3)


class TestCoveringInstance:
    def test_non_dummies_match_packing(self, q3_e2):
        pack = build_packing_instance(q3_e2, beta=3)
        cover = build_covering_instance(q3_e2, beta=3)
        pk = {(it.label.kind, it.label.index, it.label.copy): it.vec
              for it in pack.items if it.label.kind != "Dummy"}
        ck = {(it.label.kind, it.label.index, it.label.copy): it.vec
              for it in cover.items if it.label.kind != "Dummy"}
        assert pk == ck

    def test_dummy_shape_and_count(self, q3_e2):
        cover = build_covering_instance(q3_e2, beta=3)
        dummies = [it for it in cover.items if it.label.kind == "Dummy"]
        assert len(dummies) == 3
        assert all(it.vec.c1 == F(9, 10) and it.vec.c2 == F(9, 10) for it in dummies)


class TestSkewedInstance:
    def test_m5_counts_and_skewness(self, q2_e2):
        vinst = build_skewed_instance(q2_e2, beta=2, delta=F(1, 3))
        m = vinst.params["m"]
        assert m == 5
        fillers = [it for it in vinst.items if it.label.kind == "Filler"]
        assert len(fillers) == 4  # one level, |T| copies
        dummies = [it for it in vinst.items if it.label.kind == "Dummy"]
        assert len(dummies) == 2 * 4 + 6 - 5 * 2
        for item in vinst.items:
            exceeding = sum(1 for c in (item.vec.c1, item.vec.c2) if c > F(1, 3))
            assert exceeding <= 1

    def test_non_dummy_coordinates_below_two_over_m_plus_one(self, q2_e2):
        vinst = build_skewed_instance(q2_e2, beta=2, delta=F(1, 3))
        m = vinst.params["m"]
        bound = F(2, m + 1)
        for item in vinst.items:
            if item.label.kind != "Dummy":
                assert item.vec.c1 < bound and item.vec.c2 < bound

    def test_coordinate_sum_identity(self, q2_e2):
        vinst = build_skewed_instance(q2_e2, beta=2, delta=F(2, 5))
        m = vinst.params["m"]
        # 1/(m+1) + (m+2)/(m(m+1)) = 2/m; the encoded-integer parts cancel
        for item in vinst.items:
            if item.label.kind != "Dummy":
                assert item.vec.c1 + item.vec.c2 == F(2, m)


class TestFourPartition:
    def test_q2_general(self, q2_e2):
        fp = emit_four_partition(build_integers(q2_e2))
        assert len(fp.integers) == 10
        assert fp.target == 268435471
        assert all(0 < a < fp.target for a in fp.integers)

    def test_skewed_includes_filler_copies(self, q2_e2):
        fp = emit_four_partition(build_skewed_integers(q2_e2, F(1, 3)))
        assert len(fp.integers) == 14

    def test_round_trip(self, q2_e2):
        fp = emit_four_partition(build_integers(q2_e2))
        text = serialize_four_partition(fp)
        assert deserialize_four_partition(text) == fp
        assert serialize_four_partition(deserialize_four_partition(text)) == text


class TestReconstruction:
    def test_3dm_and_gadget_recovered(self, q3_e2):
        vinst = build_packing_instance(q3_e2, beta=3)
        recovered = instance_3dm_from_vector(vinst)
        assert recovered.q == q3_e2.q
        assert sorted(recovered.tuples) == sorted(q3_e2.tuples)
        g = gadget_from_instance(vinst)
        assert g.b == build_integers(q3_e2).b

    def test_tampered_instance_detected(self, q2_e2):
        from vbgap.model import Item, Vec2, VectorInstance
        vinst = build_packing_instance(q2_e2, beta=2)
        items = list(vinst.items)
        victim = next(i for i, it in enumerate(items) if it.label.kind == "X")
        items[victim] = Item(items[victim].label, Vec2(F(1, 4), F(1, 4)))
        tampered = VectorInstance(flavor="pack", items=tuple(items), params=vinst.params)
        with pytest.raises(InvariantError, match="inconsistent"):
            gadget_from_instance(tampered)
