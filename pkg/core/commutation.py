"""Huq 交换、不交性与反交换性判定

点化簇中的两个同态 f: A→C、g: B→C 交换，当且仅当存在
ρ: A×B → C 使 ρ∘ι1 = f、ρ∘ι2 = g（ρ 称为协作子）；
二者不交，当且仅当 f(a) = g(b) 时该值必为 0。
簇是反交换的，当且仅当每对交换的同态都不交。
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence

from core.algebra import (
    FiniteAlgebra,
    Homomorphism,
    PullbackAlgebra,
    identity_hom,
    image_factorization,
    injections,
    kernel_subalgebra,
    product,
    pullback,
    require_pointed,
    require_same_signature,
)
from core.congruences import Chain, Congruence, chain_between, generated_congruence
from core.free_algebras import FreeAlgebra, free_algebra
from core.hom_search import first_hom, merge_pins
from core.terms import evaluate_term, format_term
from core.verdicts import Verdict
from core.witnesses import MaltsevWitness, check_witness_shape, compile_chain
from utils.errors import AppError, ErrorCode, ValidationError
from utils.logger import get_logger

logger = get_logger("commutation")


def _require_common_codomain(f: Homomorphism, g: Homomorphism) -> None:
    if f.cod != g.cod:
        raise ValidationError(
            f"{f.name or 'f'} 与 {g.name or 'g'} 的陪域不同：{f.cod.name} 与 {g.cod.name}",
            code=ErrorCode.CODOMAIN_MISMATCH,
        )


def _require_pointed_pair(f: Homomorphism, g: Homomorphism) -> None:
    for algebra in (f.dom, g.dom, f.cod):
        require_pointed(algebra)
    _require_common_codomain(f, g)


# ==================== 协作子 ====================

@dataclass(frozen=True)
class Cooperator:
    """f 与 g 的协作子 ρ: A×B → C"""
    rho: Homomorphism
    f: Homomorphism
    g: Homomorphism
    product: PullbackAlgebra

    def to_dict(self) -> dict:
        return {
            "rho": list(self.rho.image),
            "pairs": [list(pair) for pair in self.product.pair_of],
        }


def find_cooperator(f: Homomorphism, g: Homomorphism) -> Optional[Cooperator]:
    """按字典序搜索第一个协作子

    ι 约束预先固定，其余像值回溯搜索并沿运算约束前向传播。

    Raises:
        ValidationError: 签名不是点化的，或陪域不同
    """
    _require_pointed_pair(f, g)
    prod = product(f.dom, g.dom)
    iota1, iota2 = injections(prod)
    pins = merge_pins(
        [(iota1(a), f(a)) for a in f.dom.elements]
        + [(iota2(b), g(b)) for b in g.dom.elements]
    )
    if pins is None:
        return None
    image = first_hom(prod.carrier, f.cod, pins)
    logger.debug("协作子搜索", dom=prod.carrier.name, found=image is not None)
    if image is None:
        return None
    rho = Homomorphism(prod.carrier, f.cod, image, name="rho")
    return Cooperator(rho=rho, f=f, g=g, product=prod)


def is_central(f: Homomorphism) -> bool:
    """f 与陪域上的恒等映射交换"""
    return find_cooperator(f, identity_hom(f.cod)) is not None


def is_commutative_object(algebra: FiniteAlgebra) -> bool:
    """恒等映射是中心的"""
    return is_central(identity_hom(algebra))


# ==================== 不交性 ====================

def are_disjoint(f: Homomorphism, g: Homomorphism) -> Verdict:
    """f(a) = g(b) 蕴含该值为 0；反例为字典序最小的 (a, b)"""
    _require_pointed_pair(f, g)
    zero = f.cod.zero
    for a in f.dom.elements:
        value = f(a)
        if value == zero:
            continue
        for b in g.dom.elements:
            if g(b) == value:
                return Verdict(holds=False, counterexample={"a": a, "b": b, "value": value})
    return Verdict(holds=True)


def disjoint_via_kernels(f: Homomorphism, g: Homomorphism) -> Verdict:
    """比较映射 ker f × ker g → A ×_C B 是否为双射

    比较映射总是单射，因此只需比较两侧大小；
    不成立时报告第一个不在像中的拉回元素。
    """
    _require_pointed_pair(f, g)
    pb = pullback(f, g)
    ker_f, incl_f = kernel_subalgebra(f)
    ker_g, incl_g = kernel_subalgebra(g)
    sizes = {"pullback_size": pb.size, "kernel_product_size": ker_f.size * ker_g.size}
    if pb.size == ker_f.size * ker_g.size:
        return Verdict(holds=True, extra=sizes)
    in_kernels = {(x, y) for x in incl_f.image for y in incl_g.image}
    for pair in pb.pair_of:
        if pair not in in_kernels:
            return Verdict(holds=False, counterexample={"pair": list(pair)}, extra=sizes)
    return Verdict(holds=False, extra=sizes)


def disjoint_via_images(f: Homomorphism, g: Homomorphism) -> Verdict:
    """像分解中的单射部分 m_f 与 m_g 是否不交"""
    _require_pointed_pair(f, g)
    _, m_f = image_factorization(f)
    _, m_g = image_factorization(g)
    verdict = are_disjoint(m_f, m_g)
    if not verdict.holds:
        # 换回陪域中的元素
        a, b = verdict.counterexample["a"], verdict.counterexample["b"]
        verdict.counterexample = {"a": m_f(a), "b": m_g(b), "value": verdict.counterexample["value"]}
    return verdict


# ==================== 反交换性 ====================

@dataclass
class AnticommutativityVerdict(Verdict):
    """反交换性判定结果

    holds 为真当且仅当链存在；见证由链编译而来。
    """
    chain: Optional[Chain] = None
    terms: Optional[MaltsevWitness] = None
    congruence: Optional[Congruence] = None
    pairs: Optional[PullbackAlgebra] = None
    free: Optional[FreeAlgebra] = None

    def pair_label(self, element: int) -> str:
        """F(x)×F(x) 中元素的项对形式"""
        a, b = self.pairs.pair_of[element]
        return f"({format_term(self.free.labels[a])}, {format_term(self.free.labels[b])})"


def _require_basis(basis: Sequence[FiniteAlgebra]) -> None:
    if not basis:
        raise ValidationError("生成簇的基不能为空", code=ErrorCode.MISSING_FIELD)
    for algebra in basis:
        require_pointed(algebra)
    for other in basis[1:]:
        require_same_signature(basis[0], other)


def decide_anticommutative(
    basis: Sequence[FiniteAlgebra], max_size: Optional[int] = None
) -> AnticommutativityVerdict:
    """判定 basis 生成的点化簇是否反交换

    在 F(x)×F(x) 上取 Θ = Cg((x,0),(0,x))；簇反交换当且仅当 (x,0) Θ (0,0)。

    Raises:
        ValidationError: 签名不是点化的
        LimitExceededError: 自由代数超过上限
    """
    _require_basis(basis)
    free = free_algebra(basis, 1, max_size)
    x = free.generators[0]
    zero = free.carrier.zero
    pairs = product(free.carrier, free.carrier)
    start, middle, end = pairs.index(x, zero), pairs.index(zero, x), pairs.index(zero, zero)
    theta = generated_congruence(pairs.carrier, [(start, middle)])
    common = dict(congruence=theta, pairs=pairs, free=free)

    if not theta.related(start, end):
        verdict = AnticommutativityVerdict(holds=False, **common)
        verdict.counterexample = {
            "congruence": theta,
            "elements": [verdict.pair_label(e) for e in pairs.carrier.elements],
            "unrelated": [verdict.pair_label(start), verdict.pair_label(end)],
        }
        verdict.note = "(x,0) 与 (0,0) 不在 Cg((x,0),(0,x)) 的同一类中"
        logger.info("反交换性不成立", basis=[a.name for a in basis], classes=theta.num_classes)
        return verdict

    chain = chain_between(theta, start, end)
    u, v, p = compile_chain(chain, pairs, free.labels)
    terms = MaltsevWitness(u=u, v=v, p=p)
    check = verify_anticommutativity_witness(terms, basis)
    if not check.holds:
        raise AppError(
            ErrorCode.INTERNAL_ERROR,
            "由链编译的见证未通过校验",
            details=check.counterexample,
        )
    logger.info("反交换性成立", basis=[a.name for a in basis], chain_length=chain.length, m=terms.m)
    return AnticommutativityVerdict(
        holds=True,
        witness={**terms.to_dict(), "chain": chain.to_dict()},
        chain=chain,
        terms=terms,
        **common,
    )


def verify_anticommutativity_witness(
    witness: MaltsevWitness, basis: Sequence[FiniteAlgebra]
) -> Verdict:
    """在每个基代数的每个元素上检查见证的四族方程

    反例字段：family（first / forward / backward / last）、index（p 的下标，从 1 开始）、
    algebra、element、left、right。

    Raises:
        ValidationError: 见证结构不合法（n = 0、元数或签名不符）
    """
    _require_basis(basis)
    check_witness_shape((witness.u, witness.v), witness.p, basis[0].signature, 1, ("u", "v"))
    m, n = witness.m, witness.n

    for algebra in basis:
        zero = algebra.zero

        def p_at(i: int, params: List[int], s: int, t: int) -> int:
            assignment = {f"x{j + 1}": value for j, value in enumerate(params)}
            assignment[f"x{m + 1}"] = s
            assignment[f"x{m + 2}"] = t
            return evaluate_term(witness.p[i - 1], algebra, assignment)

        for e in algebra.elements:
            at = {"x1": e}
            us = [evaluate_term(t, algebra, at) for t in witness.u]
            vs = [evaluate_term(t, algebra, at) for t in witness.v]
            checks = [("first", 1, p_at(1, us, e, zero), e), ("first", 1, p_at(1, vs, zero, e), zero)]
            for i in range(1, n):
                checks.append(("forward", i + 1, p_at(i + 1, us, e, zero), p_at(i, us, zero, e)))
                checks.append(("backward", i + 1, p_at(i + 1, vs, zero, e), p_at(i, vs, e, zero)))
            checks.append(("last", n, p_at(n, us, zero, e), zero))
            checks.append(("last", n, p_at(n, vs, e, zero), zero))
            for family, index, left, right in checks:
                if left != right:
                    return Verdict(
                        holds=False,
                        counterexample={
                            "family": family,
                            "index": index,
                            "algebra": algebra.name,
                            "element": e,
                            "left": left,
                            "right": right,
                        },
                    )
    return Verdict(holds=True, witness=witness.to_dict())


def check_product_coequalizer(algebra: FiniteAlgebra) -> Verdict:
    """单个对象上的余等化子判据

    在 X×X 上取 Θ = Cg{((x,0),(0,x)) | x ∈ X}；成立当且仅当每个 (x,0) Θ (0,0)，
    即商映射 q 满足 q∘ι1 = 0 = q∘ι2。
    """
    require_pointed(algebra)
    zero = algebra.zero
    prod = product(algebra, algebra)
    theta = generated_congruence(
        prod.carrier, [(prod.index(x, zero), prod.index(zero, x)) for x in algebra.elements]
    )
    origin = prod.index(zero, zero)
    for x in algebra.elements:
        if not theta.related(prod.index(x, zero), origin):
            return Verdict(holds=False, counterexample={"element": x, "congruence": theta})
    return Verdict(holds=True, extra={"congruence": theta})
