"""自由代数：在子幂中由投影向量生成

基 A1..Ar 生成的簇上 k 元自由代数实现为 Π A_i^(A_i^k) 中
由 k 个投影向量（以及常量）生成的子代数。向量的坐标是
(基代数下标, 赋值) 对，按基代数顺序、再按赋值字典序排列；
因此向量就是对应项在基上的完整取值表。
"""
from dataclasses import dataclass
from functools import cached_property
from itertools import product as cartesian
from typing import Dict, List, Optional, Sequence, Tuple

from config.settings import settings
from core.algebra import (
    FiniteAlgebra,
    Homomorphism,
    assignment_of,
    close_under_operations,
    require_pointed,
    require_same_signature,
)
from core.terms import Term, evaluate_term, var
from utils.errors import ErrorCode, LimitExceededError, ValidationError
from utils.logger import get_logger

logger = get_logger("free_algebras")

Coordinate = Tuple[int, Tuple[int, ...]]


@dataclass(frozen=True)
class FreeAlgebra:
    """自由代数及其项标签

    Attributes:
        carrier: 作为有限代数的载体
        generators: x1..xk 对应的元素
        labels: 每个元素的广度优先首个推导项
        basis: 生成簇的基代数
        k: 生成元个数
        vectors: 每个元素在子幂中的坐标向量
        coordinates: 坐标 (基代数下标, 赋值)
    """
    carrier: FiniteAlgebra
    generators: Tuple[int, ...]
    labels: Tuple[Term, ...]
    basis: Tuple[FiniteAlgebra, ...]
    k: int
    vectors: Tuple[Tuple[int, ...], ...]
    coordinates: Tuple[Coordinate, ...]

    @cached_property
    def _coordinate_index(self) -> Dict[Coordinate, int]:
        return {c: i for i, c in enumerate(self.coordinates)}

    def value_at(self, element: int, basis_index: int, assignment: Sequence[int]) -> int:
        """元素对应的项在基代数 basis_index 上、给定赋值处的值"""
        return self.vectors[element][self._coordinate_index[(basis_index, tuple(assignment))]]

    @property
    def size(self) -> int:
        return self.carrier.size


def _projected_bound(basis: Sequence[FiniteAlgebra], k: int) -> int:
    bound = 1
    for algebra in basis:
        bound *= algebra.size ** (algebra.size ** k)
    return bound


def free_algebra(
    basis: Sequence[FiniteAlgebra], k: int, max_size: Optional[int] = None
) -> FreeAlgebra:
    """基 basis 生成的簇上的 k 元自由代数

    Raises:
        ValidationError: 基为空、签名不一致或 k 不是正整数
        LimitExceededError: 载体超过上限（报告理论上界 Π|A_i|^(|A_i|^k)）
    """
    if not basis:
        raise ValidationError("生成簇的基不能为空", code=ErrorCode.MISSING_FIELD)
    if k < 1:
        raise ValidationError("生成元个数必须为正", code=ErrorCode.VALUE_OUT_OF_RANGE)
    for other in basis[1:]:
        require_same_signature(basis[0], other)
    signature = basis[0].signature
    cap = settings.free_cap(max_size)

    coordinates: List[Coordinate] = [
        (i, tuple(assignment))
        for i, algebra in enumerate(basis)
        for assignment in cartesian(range(algebra.size), repeat=k)
    ]
    coordinate_algebras = [basis[i] for i, _ in coordinates]

    def apply(symbol: str, args: Tuple[Tuple[int, ...], ...]) -> Tuple[int, ...]:
        return tuple(
            algebra.apply(symbol, [v[c] for v in args])
            for c, algebra in enumerate(coordinate_algebras)
        )

    def overflow(size: int) -> LimitExceededError:
        bound = _projected_bound(basis, k)
        return LimitExceededError(
            limit=cap,
            attempted=str(bound),
            message=f"{k} 元自由代数超过上限 {cap}（理论上界 {bound}）",
        )

    seeds = [
        (tuple(assignment[j] for _, assignment in coordinates), var(j + 1))
        for j in range(k)
    ]
    vectors, labels = close_under_operations(signature, seeds, apply, limit=cap, on_overflow=overflow)
    position = {v: i for i, v in enumerate(vectors)}

    tables = []
    for symbol, arity in signature.symbols:
        tables.append(tuple(
            position[apply(symbol, tuple(vectors[a] for a in args))]
            for args in cartesian(range(len(vectors)), repeat=arity)
        ))
    names = ",".join(algebra.name for algebra in basis)
    carrier = FiniteAlgebra(
        name=f"F{k}({names})",
        size=len(vectors),
        signature=signature,
        tables=tuple(tables),
    )
    logger.debug("自由代数已生成", basis=names, k=k, size=carrier.size)
    return FreeAlgebra(
        carrier=carrier,
        generators=tuple(position[seed] for seed, _ in seeds),
        labels=tuple(labels),
        basis=tuple(basis),
        k=k,
        vectors=tuple(vectors),
        coordinates=tuple(coordinates),
    )


def free_extension(
    free: FreeAlgebra, target: FiniteAlgebra, images: Sequence[int]
) -> Homomorphism:
    """把 x_j ↦ images[j] 沿标签求值延拓为 free → target 的映射"""
    if len(images) != free.k:
        raise ValidationError(
            f"需要 {free.k} 个生成元的像，实际为 {len(images)}",
            code=ErrorCode.VALUE_OUT_OF_RANGE,
        )
    assignment = assignment_of(images)
    memo: Dict[int, int] = {}
    image = tuple(evaluate_term(label, target, assignment, memo) for label in free.labels)
    return Homomorphism(free.carrier, target, image, name="ext")


# ==================== 特殊项扫描 ====================

def _scan(free: FreeAlgebra, accepts) -> Optional[Term]:
    for element, vector in enumerate(free.vectors):
        if all(accepts(i, assignment, vector[c]) for c, (i, assignment) in enumerate(free.coordinates)):
            return free.labels[element]
    return None


def has_majority_term(
    basis: Sequence[FiniteAlgebra], max_size: Optional[int] = None
) -> Optional[Term]:
    """在 F(x,y,z) 中寻找多数项 m(a,a,b) = m(a,b,a) = m(b,a,a) = a"""
    free = free_algebra(basis, 3, max_size)

    def accepts(_: int, s: Tuple[int, ...], value: int) -> bool:
        if s[0] == s[1] or s[0] == s[2]:
            return value == s[0]
        if s[1] == s[2]:
            return value == s[1]
        return True

    term = _scan(free, accepts)
    logger.debug("多数项扫描", found=term is not None, size=free.size)
    return term


def has_jonsson_tarski_term(
    basis: Sequence[FiniteAlgebra], max_size: Optional[int] = None
) -> Optional[Term]:
    """在 F(x,y) 中寻找 t(a,0) = a = t(0,a)

    Raises:
        ValidationError: 签名不是点化的
    """
    for algebra in basis:
        require_pointed(algebra)
    zeros = [algebra.zero for algebra in basis]
    free = free_algebra(basis, 2, max_size)

    def accepts(i: int, s: Tuple[int, ...], value: int) -> bool:
        if s[1] == zeros[i]:
            return value == s[0]
        if s[0] == zeros[i]:
            return value == s[1]
        return True

    return _scan(free, accepts)


def has_absorbing_idempotent_term(
    basis: Sequence[FiniteAlgebra], max_size: Optional[int] = None
) -> Optional[Term]:
    """在 F(x,y) 中寻找 b(a,a) = a 且 b(a,0) = 0 = b(0,a)

    这样的项存在时（例如有最小元的交半格中的 ∧），簇是反交换的。
    """
    for algebra in basis:
        require_pointed(algebra)
    zeros = [algebra.zero for algebra in basis]
    free = free_algebra(basis, 2, max_size)

    def accepts(i: int, s: Tuple[int, ...], value: int) -> bool:
        if s[0] == zeros[i] or s[1] == zeros[i]:
            return value == zeros[i]
        if s[0] == s[1]:
            return value == s[0]
        return True

    return _scan(free, accepts)
