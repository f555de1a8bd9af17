"""三角引理、移位引理、DDCC 与局部反交换性测试"""
import pytest

from core.algebra import (
    Homomorphism,
    diagonal,
    identity_hom,
    make_hom,
    pullback,
    trivial_algebra,
    validate_algebra,
)
from core.commutation import decide_anticommutative
from core.congruences import all_congruences
from core.lemmas import (
    ddcc_on_product,
    decide_locally_anticommutative,
    is_idempotent,
    shifting_lemma_holds,
    shifting_on_pullback,
    triangular_lemma_holds,
    triangular_on_pullback,
    verify_local_witness,
)
from core.terms import var
from core.witnesses import LocalWitness
from utils.errors import ErrorCode, LimitExceededError, ValidationError


def triangular_by_lattice(f, g):
    """对拉回的全部同余检查三角引理"""
    pb = pullback(f, g)
    for theta in all_congruences(pb.carrier):
        for x, y in pb.pair_of:
            for x2, y2 in pb.pair_of:
                if not pb.contains(x2, y):
                    continue
                if theta.related(pb.index(x, y), pb.index(x2, y2)) and not theta.related(
                    pb.index(x2, y), pb.index(x2, y2)
                ):
                    return False
    return True


def shifting_by_lattice(f, g):
    """对拉回的全部同余检查移位引理"""
    pb = pullback(f, g)
    for theta in all_congruences(pb.carrier):
        for x, u in pb.pair_of:
            for y, v in pb.pair_of:
                if not (pb.contains(y, u) and pb.contains(x, v)):
                    continue
                if theta.related(pb.index(x, u), pb.index(y, u)) and not theta.related(
                    pb.index(x, v), pb.index(y, v)
                ):
                    return False
    return True


@pytest.fixture
def small_hom_pairs(sum_hom, pi1_hom, sl2, sl2xsl2):
    """拉回不超过 8 个元素的同态对"""
    sl2_pi1 = make_hom(sl2xsl2, sl2, [0, 0, 1, 1], name="pi1")
    return {
        "sum": (sum_hom, sum_hom),
        "pi1": (pi1_hom, pi1_hom),
        "sum_pi1": (sum_hom, pi1_hom),
        "sl2_pi1": (sl2_pi1, sl2_pi1),
        "sl2_pi1_identity": (sl2_pi1, identity_hom(sl2)),
        "sl2_identity": (identity_hom(sl2), identity_hom(sl2)),
    }


class TestTriangularLemma:
    """单个代数上的三角引理测试"""

    def test_one_element_algebra(self, sl2):
        """测试一元素代数"""
        assert triangular_lemma_holds(trivial_algebra(sl2.signature)).holds

    @pytest.mark.parametrize("name", ["sl2", "z2", "ps2", "maj2", "l2"])
    def test_two_element_algebras(self, request, name):
        """测试二元代数：同余格只有 Δ 与 ∇"""
        assert triangular_lemma_holds(request.getfixturevalue(name)).holds

    def test_klein_group_fails(self, z2xz2):
        """测试 Klein 四元群：R、S、T 是三个真核"""
        verdict = triangular_lemma_holds(z2xz2)
        assert not verdict.holds
        example = verdict.to_dict()["counterexample"]
        assert (example["x"], example["y"], example["z"]) == (0, 1, 3)
        assert example["R"] == [[0, 1], [2, 3]]
        assert example["S"] == [[0, 2], [1, 3]]
        assert example["T"] == [[0, 3], [1, 2]]

    def test_cap(self, z2xz2):
        """测试同余格枚举上限"""
        with pytest.raises(LimitExceededError):
            triangular_lemma_holds(z2xz2, max_size=3)


class TestShiftingLemma:
    """单个代数上的移位引理测试"""

    def test_one_element_algebra(self, z2):
        """测试一元素代数"""
        assert shifting_lemma_holds(trivial_algebra(z2.signature)).holds

    def test_klein_group(self, z2xz2):
        """测试群满足移位引理"""
        verdict = shifting_lemma_holds(z2xz2)
        assert verdict.holds
        assert verdict.extra["congruences"] == 5

    def test_pointed_set(self, ps2):
        """测试点集"""
        assert shifting_lemma_holds(ps2).holds


class TestPullbackLemmas:
    """拉回上的引理测试"""

    def test_triangular_fails_on_sum(self, sum_hom):
        """测试 sum 与自身的拉回上三角引理不成立"""
        verdict = triangular_on_pullback(sum_hom, sum_hom)
        assert not verdict.holds
        example = verdict.counterexample
        assert len(example["pullback"]) == 8
        (x, y), (x2, y_again), (x2_again, y2) = example["triple"]
        assert y == y_again and x2 == x2_again and y != y2

    def test_triangular_fails_on_semilattice_projection(self, sl2, sl2xsl2):
        """测试 π1: SL2×SL2 → SL2 与自身：拉回是 SL2³，顶元在主同余中自成一类"""
        pi1 = make_hom(sl2xsl2, sl2, [0, 0, 1, 1], name="pi1")
        verdict = triangular_on_pullback(pi1, pi1)
        assert not verdict.holds
        example = verdict.counterexample
        assert len(example["pullback"]) == 8
        (x, y), (x2, y_again), (x2_again, y2) = example["triple"]
        assert y == y_again and x2 == x2_again and y != y2
        pb = pullback(pi1, pi1)
        assert not example["congruence"].related(pb.index(x2, y), pb.index(x2, y2))

    def test_small_pullback(self, sl2):
        """测试拉回不超过一个元素时平凡成立"""
        bottom = Homomorphism(trivial_algebra(sl2.signature), sl2, (0,))
        assert triangular_on_pullback(bottom, bottom).holds
        assert shifting_on_pullback(bottom, bottom).holds

    def test_shifting_holds_on_sum(self, sum_hom):
        """测试群上的移位引理"""
        verdict = shifting_on_pullback(sum_hom, sum_hom)
        assert verdict.holds
        assert verdict.extra["pullback_size"] == 8

    def test_shifting_identity(self, sl2):
        """测试恒等映射的拉回是对角线"""
        ident = identity_hom(sl2)
        assert shifting_on_pullback(ident, ident).holds

    def test_codomain_mismatch(self, sum_hom, sl2):
        """测试陪域不同"""
        with pytest.raises(ValidationError) as exc:
            triangular_on_pullback(sum_hom, diagonal(sl2))
        assert exc.value.code == ErrorCode.CODOMAIN_MISMATCH

    @pytest.mark.parametrize("name", ["sum", "pi1", "sum_pi1", "sl2_pi1", "sl2_pi1_identity", "sl2_identity"])
    def test_principal_reduction_matches_lattice(self, small_hom_pairs, name):
        """测试只看主同余的结果与遍历整个同余格一致"""
        f, g = small_hom_pairs[name]
        assert pullback(f, g).size <= 8
        assert triangular_on_pullback(f, g).holds == triangular_by_lattice(f, g)
        assert shifting_on_pullback(f, g).holds == shifting_by_lattice(f, g)


class TestDDCC:
    """积上的 DDCC 测试"""

    def test_boolean_groups(self, z2):
        """测试 Z2×Z2 上不成立"""
        verdict = ddcc_on_product(z2, z2)
        assert not verdict.holds
        assert verdict.counterexample["generator"] == [[0, 0], [1, 1]]
        assert verdict.counterexample["pair"] == [[1, 0], [1, 1]]

    def test_semilattices(self, sl2):
        """测试 SL2×SL2 上不成立：Cg((0,1),(1,0)) 的类 {(0,0),(0,1),(1,0)} 缺少 (1,1)"""
        verdict = ddcc_on_product(sl2, sl2)
        assert not verdict.holds
        assert verdict.counterexample["generator"] == [[0, 1], [1, 0]]
        assert verdict.counterexample["pair"] == [[1, 1], [1, 0]]
        assert verdict.to_dict()["counterexample"]["congruence"] == [[0, 1, 2], [3]]

    def test_one_element_factor(self, sl2):
        """测试一个因子只有一个元素"""
        assert ddcc_on_product(trivial_algebra(sl2.signature), sl2).holds


class TestIdempotence:
    """幂等性测试"""

    def test_lattice(self, l2):
        """测试格是幂等的"""
        assert is_idempotent(l2)

    def test_group(self, z2):
        """测试带常量的群不是幂等的"""
        assert not is_idempotent(z2)

    def test_majority_without_constant(self):
        """测试去掉常量的多数代数是幂等的"""
        maj = validate_algebra({
            "name": "maj", "size": 2,
            "ops": [{"name": "maj", "arity": 3, "table": [0, 0, 0, 1, 0, 1, 1, 1]}],
        })
        assert is_idempotent(maj)


class TestLocalAnticommutativity:
    """局部反交换性判定与见证校验测试"""

    def test_one_element_basis(self, l2):
        """测试一元素基：所有东西都塌缩"""
        verdict = decide_locally_anticommutative([trivial_algebra(l2.signature)])
        assert verdict.holds
        assert verdict.witness["m"] == 0

    def test_boolean_group_fails(self, z2):
        """测试群不是局部反交换的"""
        verdict = decide_locally_anticommutative([z2])
        assert not verdict.holds
        assert len(verdict.counterexample["unrelated"]) == 2

    def test_lattice_holds_and_witness_verifies(self, l2):
        """测试格局部反交换，见证在两种模式下都通过"""
        verdict = decide_locally_anticommutative([l2])
        assert verdict.holds
        assert verify_local_witness(verdict.terms, [l2], mode="local").holds
        assert verify_local_witness(verdict.terms, [l2], mode="ddcc").holds

    def test_semilattice_is_anticommutative_but_not_locally(self, sl2):
        """测试交半格反交换，但没有 DDCC，因此不是局部反交换的"""
        verdict = decide_locally_anticommutative([sl2])
        assert not verdict.holds
        assert len(verdict.counterexample["unrelated"]) == 2
        assert decide_anticommutative([sl2]).holds

    def test_projection_witness_fails_on_group(self, z2):
        """测试 p 取第 m+1 个参数、n = 1 的见证在 Z2 上失败"""
        verdict = verify_local_witness(LocalWitness(b=(), c=(), p=(var(1),)), [z2])
        assert not verdict.holds

    def test_unknown_mode(self, l2):
        """测试未知的校验模式"""
        with pytest.raises(ValidationError):
            verify_local_witness(LocalWitness(b=(), c=(), p=(var(1),)), [l2], mode="strict")

    def test_empty_witness(self, l2):
        """测试 n = 0 的见证"""
        with pytest.raises(ValidationError) as exc:
            verify_local_witness(LocalWitness(b=(), c=(), p=()), [l2])
        assert exc.value.code == ErrorCode.MALFORMED_WITNESS

    @pytest.mark.parametrize("name", ["sl2", "z2", "ps2", "maj2", "z2xz2"])
    def test_local_implies_anticommutative(self, request, name):
        """测试点化的基：局部反交换蕴含反交换"""
        basis = [request.getfixturevalue(name)]
        local = decide_locally_anticommutative(basis)
        assert not local.holds or decide_anticommutative(basis).holds

    def test_majority_algebra_is_locally_anticommutative(self, maj2):
        """测试多数代数：局部反交换，因而也反交换"""
        assert decide_locally_anticommutative([maj2]).holds
        assert decide_anticommutative([maj2]).holds
