"""三角引理、移位引理、DDCC 与局部反交换性判定

对“全部同余 T ≥ R∧S”的量化归约到最小的那个：
T = (R∧S) ∨ Cg(假设中的一对)。若最小的 T 满足结论，
更大的 T 也满足（单调性）。拉回上的检查同理只用主同余。

反例总是按字典序最小的元组报告。
"""
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from core.algebra import FiniteAlgebra, Homomorphism, PullbackAlgebra, product, pullback, require_same_signature
from core.congruences import (
    Chain,
    Congruence,
    all_congruences,
    chain_between,
    generated_congruence,
    join,
    meet,
    principal,
)
from core.free_algebras import FreeAlgebra, free_algebra, free_extension
from core.terms import evaluate_term, format_term
from core.types import WitnessMode
from core.verdicts import Verdict
from core.witnesses import LocalWitness, check_witness_shape, compile_chain
from utils.errors import AppError, ErrorCode, ValidationError
from utils.logger import get_logger

logger = get_logger("lemmas")

# 引理检查沿用通用结果类型：反例存在当且仅当 holds 为假
LemmaVerdict = Verdict

LemmaCheck = Callable[[Homomorphism, Homomorphism], LemmaVerdict]

WITNESS_MODES = ("local", "ddcc")


class _PrincipalCache:
    """按无序对缓存主同余"""

    def __init__(self, algebra: FiniteAlgebra):
        self.algebra = algebra
        self._cache: Dict[Tuple[int, int], Congruence] = {}

    def __call__(self, a: int, b: int) -> Congruence:
        key = (a, b) if a <= b else (b, a)
        if key not in self._cache:
            self._cache[key] = principal(self.algebra, *key)
        return self._cache[key]


def _nontrivial_pairs(congruences: List[Congruence]) -> List[Tuple[int, int]]:
    """R 或 S 为 Δ 时两条引理都平凡成立，只保留其余的 (R, S) 下标对"""
    indices = [i for i, c in enumerate(congruences) if not c.is_discrete]
    return [(i, j) for i in indices for j in indices]


# ==================== 单个代数上的引理 ====================

def triangular_lemma_holds(algebra: FiniteAlgebra, max_size: Optional[int] = None) -> LemmaVerdict:
    """三角引理：R∧S ≤ T、x R y S z、x T z 蕴含 y T z

    反例字段：R、S、T（最小的 T）、x、y、z。

    Raises:
        LimitExceededError: 代数超过同余格枚举上限
    """
    congruences = all_congruences(algebra, max_size)
    cg = _PrincipalCache(algebra)
    for i, j in _nontrivial_pairs(congruences):
        r, s = congruences[i], congruences[j]
        base = meet(r, s)
        for x in algebra.elements:
            for y in r.class_of(x):
                for z in s.class_of(y):
                    if y == z or x == y:
                        continue
                    t = join(base, cg(x, z))
                    if not t.related(y, z):
                        logger.debug("三角引理反例", algebra=algebra.name, x=x, y=y, z=z)
                        return Verdict(
                            holds=False,
                            counterexample={"R": r, "S": s, "T": t, "x": x, "y": y, "z": z},
                        )
    return Verdict(holds=True, extra={"congruences": len(congruences)})


def shifting_lemma_holds(algebra: FiniteAlgebra, max_size: Optional[int] = None) -> LemmaVerdict:
    """移位引理：R∧S ≤ T、x R u、y R v、x S y、u S v、u T v 蕴含 x T y

    反例字段：R、S、T、x、y、u、v。
    """
    congruences = all_congruences(algebra, max_size)
    cg = _PrincipalCache(algebra)
    for i, j in _nontrivial_pairs(congruences):
        r, s = congruences[i], congruences[j]
        base = meet(r, s)
        for x in algebra.elements:
            for y in s.class_of(x):
                if x == y or base.related(x, y):
                    continue
                for u in r.class_of(x):
                    for v in r.class_of(y):
                        if not s.related(u, v):
                            continue
                        t = join(base, cg(u, v))
                        if not t.related(x, y):
                            return Verdict(
                                holds=False,
                                counterexample={
                                    "R": r, "S": s, "T": t,
                                    "x": x, "y": y, "u": u, "v": v,
                                },
                            )
    return Verdict(holds=True, extra={"congruences": len(congruences)})


# ==================== 拉回与积上的引理 ====================

def _pair_list(pb: PullbackAlgebra) -> List[List[int]]:
    return [list(pair) for pair in pb.pair_of]


def _columns(pb: PullbackAlgebra) -> Tuple[Dict[int, List[int]], Dict[int, List[int]]]:
    """每个 y 对应的 x 列表，以及每个 x 对应的 y 列表（均升序）"""
    by_y: Dict[int, List[int]] = {}
    by_x: Dict[int, List[int]] = {}
    for x, y in pb.pair_of:
        by_y.setdefault(y, []).append(x)
        by_x.setdefault(x, []).append(y)
    return by_x, by_y


def triangular_on_pullback(f: Homomorphism, g: Homomorphism) -> LemmaVerdict:
    """拉回上的三角引理：(x,y) Θ (x',y') 蕴含 (x',y) Θ (x',y')

    对拉回中所有 (x,y)、(x',y)、(x',y') 取 Θ = Cg((x,y),(x',y'))。
    反例字段：triple（三个元素对）、congruence（拉回上的 Θ）、pullback（元素对表）。

    Raises:
        ValidationError: 陪域不同
    """
    pb = pullback(f, g)
    by_x, by_y = _columns(pb)
    cg = _PrincipalCache(pb.carrier)
    for x, y in pb.pair_of:
        for x2 in by_y[y]:
            for y2 in by_x[x2]:
                if y2 == y:
                    continue
                theta = cg(pb.index(x, y), pb.index(x2, y2))
                if not theta.related(pb.index(x2, y), pb.index(x2, y2)):
                    return Verdict(
                        holds=False,
                        counterexample={
                            "triple": [[x, y], [x2, y], [x2, y2]],
                            "congruence": theta,
                            "pullback": _pair_list(pb),
                        },
                    )
    return Verdict(holds=True, extra={"pullback_size": pb.size})


def shifting_on_pullback(f: Homomorphism, g: Homomorphism) -> LemmaVerdict:
    """拉回上的移位引理：(x,u) Θ (y,u) 蕴含 (x,v) Θ (y,v)

    四个元素对都在拉回中；Θ = Cg((x,u),(y,u))。
    反例字段：square（四个元素对）、congruence、pullback。
    """
    pb = pullback(f, g)
    by_x, by_y = _columns(pb)
    cg = _PrincipalCache(pb.carrier)
    for x, u in pb.pair_of:
        for y in by_y[u]:
            if y == x:
                continue
            theta = cg(pb.index(x, u), pb.index(y, u))
            for v in by_x[x]:
                if v == u or not pb.contains(y, v):
                    continue
                if not theta.related(pb.index(x, v), pb.index(y, v)):
                    return Verdict(
                        holds=False,
                        counterexample={
                            "square": [[x, u], [y, u], [x, v], [y, v]],
                            "congruence": theta,
                            "pullback": _pair_list(pb),
                        },
                    )
    return Verdict(holds=True, extra={"pullback_size": pb.size})


def ddcc_on_product(a: FiniteAlgebra, b: FiniteAlgebra) -> LemmaVerdict:
    """积上的同余类可直接分解：Cg((x,y),(x',y')) 含 ((x',y),(x',y'))

    反例字段：generator、pair、congruence。

    Raises:
        ValidationError: 签名不一致
    """
    require_same_signature(a, b)
    prod = product(a, b)
    cg = _PrincipalCache(prod.carrier)
    for i, (x, y) in enumerate(prod.pair_of):
        for j, (x2, y2) in enumerate(prod.pair_of):
            if y == y2:
                continue
            theta = cg(i, j)
            if not theta.related(prod.index(x2, y), j):
                return Verdict(
                    holds=False,
                    counterexample={
                        "generator": [[x, y], [x2, y2]],
                        "pair": [[x2, y], [x2, y2]],
                        "congruence": theta,
                    },
                )
    return Verdict(holds=True)


def is_idempotent(algebra: FiniteAlgebra) -> bool:
    """每个基本运算满足 f(a,…,a) = a（0 元运算只在一元素代数上成立）"""
    return all(
        algebra.apply(symbol, (a,) * arity) == a
        for symbol, arity in algebra.signature.symbols
        for a in algebra.elements
    )


# ==================== 局部反交换性 ====================

@dataclass
class LocalVerdict(Verdict):
    """局部反交换性判定结果"""
    chain: Optional[Chain] = None
    terms: Optional[LocalWitness] = None
    congruence: Optional[Congruence] = None
    pairs: Optional[PullbackAlgebra] = None
    free: Optional[FreeAlgebra] = None

    def pair_label(self, element: int) -> str:
        a, b = self.pairs.pair_of[element]
        return f"({format_term(self.free.labels[a])}, {format_term(self.free.labels[b])})"


def decide_locally_anticommutative(
    basis: Sequence[FiniteAlgebra], max_size: Optional[int] = None
) -> LocalVerdict:
    """判定 basis 生成的簇是否局部反交换

    F = F(x,y)，f: F → F(z) 把 x、y 都送到 z，E = Eq(f) 为拉回；
    在 E 上取 Θ = Cg((x,y),(y,x))，成立当且仅当 (x,y) Θ (x,x)。

    Raises:
        LimitExceededError: 自由代数超过上限
    """
    if not basis:
        raise ValidationError("生成簇的基不能为空", code=ErrorCode.MISSING_FIELD)
    free = free_algebra(basis, 2, max_size)
    single = free_algebra(basis, 1, max_size)
    z = single.generators[0]
    f = free_extension(free, single.carrier, [z, z])
    eq = pullback(f, f)
    x, y = free.generators
    start, middle, end = eq.index(x, y), eq.index(y, x), eq.index(x, x)
    theta = generated_congruence(eq.carrier, [(start, middle)])
    common = dict(congruence=theta, pairs=eq, free=free)

    if not theta.related(start, end):
        verdict = LocalVerdict(holds=False, **common)
        verdict.counterexample = {
            "congruence": theta,
            "elements": [verdict.pair_label(e) for e in eq.carrier.elements],
            "unrelated": [verdict.pair_label(start), verdict.pair_label(end)],
        }
        verdict.note = "(x,y) 与 (x,x) 不在 Eq(f) 上 Cg((x,y),(y,x)) 的同一类中"
        logger.info("局部反交换性不成立", basis=[a.name for a in basis], eq_size=eq.size)
        return verdict

    chain = chain_between(theta, start, end)
    b, c, p = compile_chain(chain, eq, free.labels)
    terms = LocalWitness(b=b, c=c, p=p)
    check = verify_local_witness(terms, basis, mode="local")
    if not check.holds:
        raise AppError(
            ErrorCode.INTERNAL_ERROR,
            "由链编译的局部见证未通过校验",
            details=check.counterexample,
        )
    logger.info("局部反交换性成立", basis=[a.name for a in basis], chain_length=chain.length, m=terms.m)
    return LocalVerdict(
        holds=True,
        witness={**terms.to_dict(), "chain": chain.to_dict()},
        chain=chain,
        terms=terms,
        **common,
    )


def verify_local_witness(
    witness: LocalWitness, basis: Sequence[FiniteAlgebra], mode: WitnessMode = "local"
) -> Verdict:
    """在每个基代数的全部元素对上检查局部见证

    mode 为 "local" 时另外检查 b_i(a,a) = c_i(a,a)（family 为 diagonal）；
    "ddcc" 模式恰好省略这一族。

    Raises:
        ValidationError: 见证结构不合法，或 mode 未知
    """
    if mode not in WITNESS_MODES:
        raise ValidationError(
            f"未知的校验模式 {mode}，应为 local 或 ddcc",
            code=ErrorCode.INVALID_FORMAT,
        )
    if not basis:
        raise ValidationError("生成簇的基不能为空", code=ErrorCode.MISSING_FIELD)
    for other in basis[1:]:
        require_same_signature(basis[0], other)
    check_witness_shape((witness.b, witness.c), witness.p, basis[0].signature, 2, ("b", "c"))
    m, n = witness.m, witness.n

    for algebra in basis:
        def p_at(i: int, params: List[int], s: int, t: int) -> int:
            assignment = {f"x{j + 1}": value for j, value in enumerate(params)}
            assignment[f"x{m + 1}"] = s
            assignment[f"x{m + 2}"] = t
            return evaluate_term(witness.p[i - 1], algebra, assignment)

        for a in algebra.elements:
            for b in algebra.elements:
                at = {"x1": a, "x2": b}
                bs = [evaluate_term(t, algebra, at) for t in witness.b]
                cs = [evaluate_term(t, algebra, at) for t in witness.c]
                checks: List[Tuple[str, int, int, int]] = []
                if mode == "local" and a == b:
                    checks.extend(("diagonal", j + 1, bs[j], cs[j]) for j in range(m))
                checks.append(("first", 1, p_at(1, bs, a, b), a))
                checks.append(("first", 1, p_at(1, cs, b, a), b))
                for i in range(1, n):
                    checks.append(("forward", i + 1, p_at(i + 1, bs, a, b), p_at(i, bs, b, a)))
                    checks.append(("backward", i + 1, p_at(i + 1, cs, b, a), p_at(i, cs, a, b)))
                checks.append(("last", n, p_at(n, bs, b, a), a))
                checks.append(("last", n, p_at(n, cs, a, b), a))
                for family, index, left, right in checks:
                    if left != right:
                        return Verdict(
                            holds=False,
                            counterexample={
                                "family": family,
                                "index": index,
                                "algebra": algebra.name,
                                "elements": [a, b],
                                "left": left,
                                "right": right,
                            },
                        )
    return Verdict(holds=True, witness={**witness.to_dict(), "mode": mode})


