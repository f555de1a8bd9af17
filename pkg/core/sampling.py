"""簇成员采样与拉回引理扫描

采样：基代数、两两之积、它们对主同余的商，以及一元、二元自由代数；
按同构去重，顺序确定，数量有上限。
"""
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

from config.settings import settings
from core.algebra import FiniteAlgebra, Homomorphism, enumerate_homs, find_isomorphism, product, quotient
from core.congruences import principal
from core.free_algebras import free_algebra
from core.lemmas import LemmaCheck
from core.verdicts import Verdict
from utils.errors import LimitExceededError
from utils.logger import get_logger

logger = get_logger("sampling")


@dataclass(frozen=True)
class PullbackFailure:
    """扫描中第一个不满足引理的同态对"""
    f: Homomorphism
    g: Homomorphism
    verdict: Verdict

    def to_dict(self) -> dict:
        return {
            "f": self.f.describe(),
            "g": self.g.describe(),
            "counterexample": self.verdict.to_dict()["counterexample"],
        }


class _MemberList:
    def __init__(self, cap: int, max_size: int):
        self.cap = cap
        self.max_size = max_size
        self.members: List[FiniteAlgebra] = []

    @property
    def full(self) -> bool:
        return len(self.members) >= self.cap

    def add(self, algebra: FiniteAlgebra) -> None:
        if self.full or algebra.size > self.max_size:
            return
        for existing in self.members:
            if find_isomorphism(existing, algebra) is not None:
                return
        self.members.append(algebra)


def _principal_quotients(algebra: FiniteAlgebra) -> Iterator[FiniteAlgebra]:
    seen = set()
    for a in algebra.elements:
        for b in range(a + 1, algebra.size):
            theta = principal(algebra, a, b)
            if theta.reps in seen:
                continue
            seen.add(theta.reps)
            quo, _ = quotient(algebra, theta)
            yield quo.renamed(f"{algebra.name}/Cg({a},{b})")


def sample_variety_members(
    basis: Sequence[FiniteAlgebra],
    cap: Optional[int] = None,
    max_size: Optional[int] = None,
) -> List[FiniteAlgebra]:
    """簇中的有限成员样本

    Args:
        basis: 生成簇的代数
        cap: 成员数上限（默认取配置 sample_cap）
        max_size: 单个成员的大小上限（默认取配置 max_member_size）
    """
    members = _MemberList(
        cap if cap is not None else settings.sample_cap,
        max_size if max_size is not None else settings.max_member_size,
    )
    for algebra in basis:
        members.add(algebra)
    products = []
    for i, a in enumerate(basis):
        for b in basis[i:]:
            if a.size * b.size <= members.max_size:
                products.append(product(a, b).carrier)
    for algebra in products:
        members.add(algebra)
    for algebra in list(basis) + products:
        for quo in _principal_quotients(algebra):
            members.add(quo)
    for k in (1, 2):
        try:
            members.add(free_algebra(basis, k, members.max_size).carrier)
        except LimitExceededError:
            logger.debug("自由代数超过成员上限，跳过", k=k)
    logger.info("簇成员采样完成", basis=[a.name for a in basis], members=len(members.members))
    return members.members


def _pullback_size(f: Homomorphism, g: Homomorphism) -> int:
    counts = [0] * f.cod.size
    for b in g.dom.elements:
        counts[g(b)] += 1
    return sum(counts[f(a)] for a in f.dom.elements)


def hom_pairs(
    members: Sequence[FiniteAlgebra], max_pullback: Optional[int] = None
) -> Iterator[Tuple[Homomorphism, Homomorphism]]:
    """成员之间所有陪域相同的同态对 f: A→X、g: B→X（拉回不超过上限）"""
    limit = max_pullback if max_pullback is not None else settings.max_pullback_size
    for x in members:
        into = [enumerate_homs(a, x) for a in members]
        for homs_a in into:
            for homs_b in into:
                for f in homs_a:
                    for g in homs_b:
                        if _pullback_size(f, g) <= limit:
                            yield f, g


def scan_pullback_lemma(
    members: Sequence[FiniteAlgebra],
    check: LemmaCheck,
    max_pullback: Optional[int] = None,
) -> Optional[PullbackFailure]:
    """在全部同态对上运行拉回引理检查，返回第一个失败或 None"""
    scanned = 0
    for f, g in hom_pairs(members, max_pullback):
        scanned += 1
        verdict = check(f, g)
        if not verdict.holds:
            logger.info("拉回引理扫描发现反例", scanned=scanned, f=f.describe(), g=g.describe())
            return PullbackFailure(f, g, verdict)
    logger.info("拉回引理扫描通过", scanned=scanned)
    return None
