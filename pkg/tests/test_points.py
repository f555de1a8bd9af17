"""点范畴、部分 Mal'tsev 运算与内群胚测试"""
from dataclasses import replace

import pytest

from core.algebra import Homomorphism, diagonal, find_isomorphism, identity_hom, make_hom, zero_hom
from core.congruences import all_congruences, discrete, total
from core.lemmas import decide_locally_anticommutative, triangular_on_pullback
from core.points import (
    check_commuting_implies_diagonal,
    check_point_anticommutativity,
    composable_triples,
    equivalence_relation_groupoid,
    fibre_product,
    find_partial_maltsev,
    split_points,
    validate_point,
    verify_internal_groupoid,
    zero_point,
)
from core.sampling import sample_variety_members
from utils.errors import ErrorCode, ValidationError
from utils.file_parser import load_fixture_suite


@pytest.fixture
def suite(fixture_dir):
    """仓库夹具套件"""
    return load_fixture_suite(fixture_dir)


@pytest.fixture
def sum_point(z2xz2, z2, sum_hom):
    """(Z2×Z2, sum, x ↦ (x,0))"""
    return validate_point(sum_hom, Homomorphism(z2, z2xz2, (0, 2)), name="sum_point")


class TestSplitPoints:
    """分裂点构造测试"""

    def test_identity_point(self, sl2):
        """测试 (X, 1, 1) 是点"""
        ident = identity_hom(sl2)
        point = validate_point(ident, ident)
        assert point.algebra == point.base == sl2

    def test_projection_with_diagonal(self, sl2, sl2xsl2):
        """测试 π1 与对角映射组成点"""
        pi1 = make_hom(sl2xsl2, sl2, [0, 0, 1, 1], name="pi1")
        point = validate_point(pi1, Homomorphism(sl2, sl2xsl2, diagonal(sl2).image))
        assert point.s.image == (0, 3)

    def test_split_law_failure(self, z2):
        """测试零映射与恒等截面不满足分裂律"""
        with pytest.raises(ValidationError) as exc:
            validate_point(zero_hom(z2, z2), identity_hom(z2))
        assert exc.value.code == ErrorCode.SPLIT_LAW_FAILED
        assert exc.value.details["element"] == 1

    def test_direction_mismatch(self, sum_hom, z2):
        """测试截面方向不对"""
        with pytest.raises(ValidationError) as exc:
            validate_point(sum_hom, identity_hom(z2))
        assert exc.value.code == ErrorCode.CODOMAIN_MISMATCH

    def test_enumerate_points(self, z2xz2, z2):
        """测试枚举出的都是点，且包含 sum_point"""
        points = list(split_points(z2xz2, z2))
        assert points
        for point in points:
            assert all(point.p(point.s(x)) == x for x in z2.elements)
        assert any(pt.p.image == (0, 1, 1, 0) and pt.s.image == (0, 2) for pt in points)

    def test_fixture_points(self, suite):
        """测试夹具中的点"""
        assert set(suite.points) == {"sum_point", "pi1_point", "sl2_pi1_point"}
        assert suite.points["pi1_point"].s.image == (0, 3)


class TestFibreProduct:
    """Pt(X) 中的积测试"""

    def test_sum_point_squared(self, sum_point):
        """测试 sum_point 与自身的纤维积有 8 个元素"""
        point, q1, q2 = fibre_product(sum_point, sum_point)
        assert point.algebra.size == 8
        assert all(point.p(point.s(x)) == x for x in point.base.elements)
        assert q1.cod == q2.cod == sum_point.algebra

    def test_zero_point_is_unit(self, sum_point, z2):
        """测试与零对象的纤维积同构于原来的点"""
        point, _, _ = fibre_product(sum_point, zero_point(z2))
        assert find_isomorphism(point.algebra, sum_point.algebra) is not None

    def test_base_mismatch(self, sum_point, sl2):
        """测试基不同"""
        with pytest.raises(ValidationError) as exc:
            fibre_product(sum_point, zero_point(sl2))
        assert exc.value.code == ErrorCode.BASE_MISMATCH


class TestPointAnticommutativity:
    """局部余等化子判据测试"""

    def test_zero_point(self, z2):
        """测试零对象满足判据"""
        assert check_point_anticommutativity(zero_point(z2)).holds

    def test_sum_point_fails(self, sum_point):
        """测试群上的 sum_point 不满足判据"""
        verdict = check_point_anticommutativity(sum_point)
        assert not verdict.holds
        assert verdict.counterexample["element"] == 1

    def test_fixture_projection_point_fails(self, suite):
        """测试夹具中 Z2 上的投影点"""
        verdict = check_point_anticommutativity(suite.points["pi1_point"])
        assert not verdict.holds
        assert verdict.counterexample["element"] == 1

    def test_semilattice_projection_point_matches_pullback_lemma(self, suite):
        """测试 (SL2×SL2, π1, 对角) 的结论与 π1 拉回上的三角引理一致"""
        point = suite.points["sl2_pi1_point"]
        verdict = check_point_anticommutativity(point)
        assert not verdict.holds
        assert verdict.counterexample["element"] == 2
        assert verdict.holds == triangular_on_pullback(point.p, point.p).holds

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["l2", "maj2", "z2", "sl2"])
    def test_sampled_points_agree_with_decision(self, request, name):
        """测试样本中全部分裂点都满足判据，当且仅当簇局部反交换"""
        basis = [request.getfixturevalue(name)]
        members = [m for m in sample_variety_members(basis) if m.size <= 4]
        results = [
            check_point_anticommutativity(point).holds
            for base in members
            for algebra in members
            for point in split_points(algebra, base)
        ]
        assert results
        assert all(results) == decide_locally_anticommutative(basis).holds


class TestPartialMaltsev:
    """部分 Mal'tsev 运算与交换的等价关系测试"""

    def test_composable_triples(self, z2):
        """测试 ∇、∇ 上的可复合三元组是全部 8 个"""
        assert len(composable_triples(total(z2), total(z2))) == 8

    def test_discrete_pair_always_commutes(self, sl2):
        """测试 Δ 与 Δ 交换"""
        assert find_partial_maltsev(discrete(sl2), discrete(sl2)) is not None

    def test_group_has_maltsev_operation(self, z2):
        """测试 Z2 上得到 x - y + z"""
        operation = find_partial_maltsev(total(z2), total(z2))
        assert operation is not None
        assert operation.image == (0, 1, 1, 0, 1, 0, 0, 1)

    def test_semilattice_has_none(self, sl2):
        """测试交半格上 ∇ 与 ∇ 不交换"""
        assert find_partial_maltsev(total(sl2), total(sl2)) is None

    def test_commuting_total_relations_on_group(self, z2):
        """测试 Z2 上 ∇ 与 ∇ 交换但交不是 Δ，与簇层面的判定一致"""
        verdict = check_commuting_implies_diagonal(total(z2), total(z2), basis=[z2])
        assert not verdict.holds
        assert verdict.extra["commuting"] is True
        assert verdict.extra["locally_anticommutative"] is False
        assert verdict.extra["consistent"] is True

    def test_discrete_holds(self, z2):
        """测试 Δ 的情形"""
        assert check_commuting_implies_diagonal(discrete(z2), total(z2)).holds

    def test_lattice_all_pairs(self, l2):
        """测试格的全部同余对都满足结论"""
        congruences = all_congruences(l2)
        for r in congruences:
            for s in congruences:
                assert check_commuting_implies_diagonal(r, s).holds


class TestInternalGroupoids:
    """内群胚测试"""

    def test_equivalence_relation_groupoid(self, sl2):
        """测试同余的典范群胚合法且 (d1,d2) 单射"""
        verdict = verify_internal_groupoid(equivalence_relation_groupoid(sl2, total(sl2)))
        assert verdict.valid
        assert verdict.injective is True

    def test_fixture_equivalence_relation(self, suite):
        """测试夹具 eqrel"""
        verdict = verify_internal_groupoid(suite.groupoids["eqrel"])
        assert verdict.valid
        assert verdict.witness == {"injective": True}

    def test_fixture_one_object_group(self, suite):
        """测试单对象上的 Z/2：合法但不单射"""
        verdict = verify_internal_groupoid(suite.groupoids["z2_onecell"])
        assert verdict.valid
        assert verdict.injective is False

    def test_fixture_broken_associativity(self, suite):
        """测试改坏的 Z/3 乘法表"""
        verdict = verify_internal_groupoid(suite.groupoids["z3_broken"])
        assert not verdict.valid
        assert verdict.failed_axiom == "(iv)"
        assert verdict.counterexample["triple"] == [1, 1, 2]
        assert (verdict.counterexample["left"], verdict.counterexample["right"]) == (2, 1)

    def test_identity_law_failure(self, suite):
        """测试把单位元映到非单位元时 (ii) 不成立"""
        g = suite.groupoids["z2_onecell"]
        broken = replace(g, s=Homomorphism(g.c0, g.c1, (1,), name="s"))
        verdict = verify_internal_groupoid(broken)
        assert verdict.failed_axiom == "(ii)"
