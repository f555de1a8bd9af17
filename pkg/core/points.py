"""点范畴 Pt(X)：分裂点、纤维积、局部余等化子判据、部分 Mal'tsev 运算与内群胚

分裂点是三元组 (A, p, s)，其中 p: A→X 满、s: X→A 且 p∘s = 1_X。
Pt(X) 中的积是 X 上的拉回。
"""
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from core.algebra import (
    FiniteAlgebra,
    Homomorphism,
    compose,
    enumerate_homs,
    hom_check,
    identity_hom,
    make_hom,
    pullback,
    tuple_algebra,
)
from core.congruences import Congruence, generated_congruence, meet
from core.hom_search import first_hom, merge_pins
from core.verdicts import Verdict
from utils.errors import ErrorCode, ValidationError
from utils.logger import get_logger

logger = get_logger("points")


# ==================== 分裂点 ====================

@dataclass(frozen=True)
class SplitPoint:
    """X 上的点 (A, p, s)"""
    algebra: FiniteAlgebra
    base: FiniteAlgebra
    p: Homomorphism
    s: Homomorphism
    name: str = field(default="", compare=False)

    def describe(self) -> str:
        return f"{self.name or 'point'}: {self.algebra.name} -> {self.base.name}"


def validate_point(p: Homomorphism, s: Homomorphism, name: str = "") -> SplitPoint:
    """检查 p∘s = 1_X 并构造点

    Raises:
        ValidationError: 方向不匹配、映射不是同态，或分裂律在某个元素处不成立
    """
    if s.dom != p.cod or s.cod != p.dom:
        raise ValidationError(
            f"分裂点方向不匹配：p: {p.dom.name} -> {p.cod.name}，s: {s.dom.name} -> {s.cod.name}",
            code=ErrorCode.CODOMAIN_MISMATCH,
        )
    p = make_hom(p.dom, p.cod, p.image, name=p.name or "p")
    s = make_hom(s.dom, s.cod, s.image, name=s.name or "s")
    for x in p.cod.elements:
        if p(s(x)) != x:
            raise ValidationError(
                f"分裂律 p∘s = 1 在元素 {x} 处不成立（p(s({x})) = {p(s(x))}）",
                code=ErrorCode.SPLIT_LAW_FAILED,
                details={"element": x, "value": p(s(x))},
            )
    return SplitPoint(algebra=p.dom, base=p.cod, p=p, s=s, name=name)


def zero_point(base: FiniteAlgebra) -> SplitPoint:
    """零对象 (X, 1, 1)"""
    ident = identity_hom(base)
    return SplitPoint(algebra=base, base=base, p=ident, s=ident, name=f"zero_{base.name}")


def split_points(algebra: FiniteAlgebra, base: FiniteAlgebra) -> Iterator[SplitPoint]:
    """枚举 algebra 在 base 上的全部分裂点（p、s 均按字典序）"""
    sections = enumerate_homs(base, algebra)
    for p in enumerate_homs(algebra, base):
        for s in sections:
            if all(p(s(x)) == x for x in base.elements):
                yield SplitPoint(algebra=algebra, base=base, p=p, s=s)


def fibre_product(
    first: SplitPoint, second: SplitPoint
) -> Tuple[SplitPoint, Homomorphism, Homomorphism]:
    """Pt(X) 中的积：载体为 p 与 q 的拉回，截面为 x ↦ (s x, t x)

    Raises:
        ValidationError: 两个点的基不同
    """
    if first.base != second.base:
        raise ValidationError(
            f"纤维积要求同一个基：{first.base.name} 与 {second.base.name}",
            code=ErrorCode.BASE_MISMATCH,
        )
    pb = pullback(first.p, second.p)
    d = compose(first.p, pb.p1)
    section = Homomorphism(
        first.base,
        pb.carrier,
        tuple(pb.index(first.s(x), second.s(x)) for x in first.base.elements),
        name="(s,t)",
    )
    point = SplitPoint(algebra=pb.carrier, base=first.base, p=d, s=section, name="fibre_product")
    return point, pb.p1, pb.p2


def check_point_anticommutativity(point: SplitPoint) -> Verdict:
    """局部余等化子判据

    E = Eq(p) 为拉回，Θ 由 ((sp a, a), (a, sp a)) 生成；
    成立当且仅当对每个 a 都有 (sp a, a) Θ (sp a, sp a)。
    """
    eq = pullback(point.p, point.p)
    retract = [point.s(point.p(a)) for a in point.algebra.elements]
    theta = generated_congruence(
        eq.carrier,
        [(eq.index(r, a), eq.index(a, r)) for a, r in zip(point.algebra.elements, retract)],
    )
    for a, r in zip(point.algebra.elements, retract):
        if not theta.related(eq.index(r, a), eq.index(r, r)):
            return Verdict(
                holds=False,
                counterexample={
                    "element": a,
                    "congruence": theta,
                    "pullback": [list(pair) for pair in eq.pair_of],
                },
            )
    return Verdict(holds=True, extra={"pullback_size": eq.size})


# ==================== 交换的等价关系 ====================

def composable_triples(r: Congruence, s: Congruence) -> List[Tuple[int, int, int]]:
    """满足 x R y、y S z 的三元组（字典序）"""
    return [
        (x, y, z)
        for x in r.algebra.elements
        for y in r.class_of(x)
        for z in s.class_of(y)
    ]


def find_partial_maltsev(r: Congruence, s: Congruence) -> Optional[Homomorphism]:
    """在 R ×_X S 上搜索 p(x,x,y) = y = p(y,x,x) 的同态

    载体是 X³ 的子代数，元素顺序同 composable_triples。
    """
    algebra = r.algebra
    triples = composable_triples(r, s)
    carrier = tuple_algebra(f"{algebra.name}_RxS", [algebra, algebra, algebra], triples)
    pins = merge_pins(
        [(i, z) for i, (x, y, z) in enumerate(triples) if x == y]
        + [(i, x) for i, (x, y, z) in enumerate(triples) if y == z]
    )
    if pins is None:
        return None
    image = first_hom(carrier, algebra, pins)
    logger.debug("部分 Mal'tsev 运算搜索", algebra=algebra.name, triples=len(triples), found=image is not None)
    if image is None:
        return None
    return Homomorphism(carrier, algebra, image, name="p")


def check_commuting_implies_diagonal(
    r: Congruence, s: Congruence, basis: Optional[List[FiniteAlgebra]] = None
) -> Verdict:
    """交换的 R、S 应满足 R∧S = Δ

    不成立说明所在簇不是局部反交换的；给出 basis 时同时报告
    与簇层面判定的一致性。
    """
    operation = find_partial_maltsev(r, s)
    intersection = meet(r, s)
    commuting = operation is not None
    holds = not commuting or intersection.is_discrete
    extra: Dict[str, object] = {
        "commuting": commuting,
        "meet_is_discrete": intersection.is_discrete,
    }
    if operation is not None:
        extra["partial_maltsev"] = list(operation.image)
    if basis:
        from core.lemmas import decide_locally_anticommutative

        local = decide_locally_anticommutative(basis).holds
        extra["locally_anticommutative"] = local
        extra["consistent"] = holds or not local
    if holds:
        return Verdict(holds=True, extra=extra)
    return Verdict(
        holds=False,
        counterexample={"R": r, "S": s, "meet": intersection},
        note="R 与 S 交换但 R∧S ≠ Δ：所在簇不是局部反交换的",
        extra=extra,
    )


# ==================== 内群胚 ====================

_MAP_NAMES = ("d1", "d2", "s", "p1", "p2", "m", "sigma")


@dataclass(frozen=True)
class GroupoidData:
    """内群胚的结构数据：C2 通过 (p1, p2) 表示为可复合对的拉回"""
    c0: FiniteAlgebra
    c1: FiniteAlgebra
    c2: FiniteAlgebra
    d1: Homomorphism
    d2: Homomorphism
    s: Homomorphism
    p1: Homomorphism
    p2: Homomorphism
    m: Homomorphism
    sigma: Homomorphism
    name: str = field(default="", compare=False)

    def expected_shape(self) -> Dict[str, Tuple[FiniteAlgebra, FiniteAlgebra]]:
        c0, c1, c2 = self.c0, self.c1, self.c2
        return {
            "d1": (c1, c0), "d2": (c1, c0), "s": (c0, c1),
            "p1": (c2, c1), "p2": (c2, c1), "m": (c2, c1), "sigma": (c1, c1),
        }


@dataclass
class GroupoidVerdict(Verdict):
    """群胚检查结果：failed_axiom 为第一个不成立的公理，injective 为 (d1,d2) 是否单射"""
    failed_axiom: Optional[str] = None
    injective: Optional[bool] = None

    @property
    def valid(self) -> bool:
        return self.holds


def _failure(axiom: str, **detail) -> GroupoidVerdict:
    return GroupoidVerdict(
        holds=False,
        counterexample={"axiom": axiom, **detail},
        note=f"公理 {axiom} 不成立",
        failed_axiom=axiom,
    )


def _check_axioms(g: GroupoidData) -> Optional[GroupoidVerdict]:
    shapes = g.expected_shape()
    for name in _MAP_NAMES:
        h: Homomorphism = getattr(g, name)
        dom, cod = shapes[name]
        if h.dom != dom or h.cod != cod:
            return _failure(f"homomorphism:{name}", reason="domain or codomain")
        verdict = hom_check(h)
        if not verdict.holds:
            return _failure(f"homomorphism:{name}", **verdict.counterexample)

    # C2 必须恰好是 {(a, b) | d2 a = d1 b}
    index: Dict[Tuple[int, int], int] = {}
    for c in g.c2.elements:
        pair = (g.p1(c), g.p2(c))
        if pair in index:
            return _failure("pullback", reason="duplicate", elements=[index[pair], c])
        if g.d2(pair[0]) != g.d1(pair[1]):
            return _failure("pullback", reason="not composable", pair=list(pair))
        index[pair] = c
    for a in g.c1.elements:
        for b in g.c1.elements:
            if g.d2(a) == g.d1(b) and (a, b) not in index:
                return _failure("pullback", reason="missing", pair=[a, b])

    def m(a: int, b: int) -> int:
        return g.m(index[(a, b)])

    for x in g.c0.elements:
        if g.d1(g.s(x)) != x or g.d2(g.s(x)) != x:
            return _failure("(i)", element=x)
    for a in g.c1.elements:
        if m(a, g.s(g.d2(a))) != a or m(g.s(g.d1(a)), a) != a:
            return _failure("(ii)", element=a)
    for c in g.c2.elements:
        if g.d1(g.p1(c)) != g.d1(g.m(c)) or g.d2(g.p2(c)) != g.d2(g.m(c)):
            return _failure("(iii)", element=c)
    for a, b in index:
        for c in g.c1.elements:
            if (b, c) not in index:
                continue
            left, right = m(m(a, b), c), m(a, m(b, c))
            if left != right:
                return _failure("(iv)", triple=[a, b, c], left=left, right=right)
    for a in g.c1.elements:
        inv = g.sigma(a)
        if g.d1(inv) != g.d2(a) or g.d2(inv) != g.d1(a):
            return _failure("inverse", element=a)
        if m(a, inv) != g.s(g.d1(a)) or m(inv, a) != g.s(g.d2(a)):
            return _failure("inverse", element=a)
    return None


def verify_internal_groupoid(g: GroupoidData) -> GroupoidVerdict:
    """按顺序检查同态性、拉回、(i)–(iv) 与逆元律，再报告 (d1,d2) 是否单射"""
    failure = _check_axioms(g)
    if failure is not None:
        logger.info("群胚公理不成立", groupoid=g.name, axiom=failure.failed_axiom)
        return failure
    pairs = [(g.d1(a), g.d2(a)) for a in g.c1.elements]
    injective = len(set(pairs)) == len(pairs)
    return GroupoidVerdict(
        holds=True,
        witness={"injective": injective},
        injective=injective,
    )


def equivalence_relation_groupoid(algebra: FiniteAlgebra, r: Congruence) -> GroupoidData:
    """同余 R 的典范群胚：C1 = R ⊆ X×X，m((x,y),(y,z)) = (x,z)，σ(x,y) = (y,x)"""
    pairs = [(x, y) for x in algebra.elements for y in r.class_of(x)]
    position = {pair: i for i, pair in enumerate(pairs)}
    c1 = tuple_algebra(f"{algebra.name}_R", [algebra, algebra], pairs)
    d1 = Homomorphism(c1, algebra, tuple(x for x, _ in pairs), name="d1")
    d2 = Homomorphism(c1, algebra, tuple(y for _, y in pairs), name="d2")
    s = Homomorphism(algebra, c1, tuple(position[(x, x)] for x in algebra.elements), name="s")
    composable = pullback(d2, d1)
    c2 = composable.carrier.renamed(f"{algebra.name}_R2")
    m = Homomorphism(
        c2,
        c1,
        tuple(position[(pairs[a][0], pairs[b][1])] for a, b in composable.pair_of),
        name="m",
    )
    sigma = Homomorphism(c1, c1, tuple(position[(y, x)] for x, y in pairs), name="sigma")
    return GroupoidData(
        c0=algebra,
        c1=c1,
        c2=c2,
        d1=d1,
        d2=d2,
        s=s,
        p1=Homomorphism(c2, c1, composable.p1.image, name="p1"),
        p2=Homomorphism(c2, c1, composable.p2.image, name="p2"),
        m=m,
        sigma=sigma,
        name=f"eqrel_{algebra.name}",
    )
