"""有限代数、同态与基本构造

元素是 0..n-1 的稠密下标；k 元运算表按行优先存放，
参数元组 (a1..ak) 的下标为 Σ ai·n^(k-1-i)。
积与拉回的载体按字典序列出元素对，并保留 pair_of 解码表。
"""
from dataclasses import dataclass, field, replace
from functools import cached_property
from itertools import product as cartesian
from typing import (
    TYPE_CHECKING,
    Callable,
    Dict,
    Hashable,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

from core.terms import Op, Term, var
from core.verdicts import Verdict
from utils.errors import AppError, ErrorCode, ValidationError
from utils.logger import get_logger

if TYPE_CHECKING:
    from core.congruences import Congruence

logger = get_logger("algebra")


# ==================== 签名与代数 ====================

@dataclass(frozen=True)
class Signature:
    """签名：符号及其元数，外加可选的指定常量"""
    symbols: Tuple[Tuple[str, int], ...]
    designated_constant: Optional[str] = None

    @cached_property
    def _arities(self) -> Dict[str, int]:
        return dict(self.symbols)

    def arity_of(self, symbol: str) -> Optional[int]:
        return self._arities.get(symbol)

    @property
    def names(self) -> List[str]:
        return [name for name, _ in self.symbols]

    @property
    def constants(self) -> List[str]:
        return [name for name, arity in self.symbols if arity == 0]

    @property
    def is_pointed(self) -> bool:
        """恰好一个 0 元符号且被指定为常量"""
        constants = self.constants
        return self.designated_constant is not None and constants == [self.designated_constant]


@dataclass(frozen=True)
class Translation:
    """基本平移：固定一个运算除一个位置外的所有参数得到的一元映射"""
    symbol: str
    position: int
    fixed: Tuple[int, ...]
    mapping: Tuple[int, ...]

    def arguments(self, hole: int) -> Tuple[int, ...]:
        return self.fixed[: self.position] + (hole,) + self.fixed[self.position:]


@dataclass(frozen=True)
class FiniteAlgebra:
    """有限代数

    tables 与 signature.symbols 一一对应，每张表长度为 size^arity。
    名称不参与相等比较。
    """
    name: str = field(compare=False)
    size: int
    signature: Signature
    tables: Tuple[Tuple[int, ...], ...]

    @cached_property
    def _table_of(self) -> Dict[str, Tuple[int, ...]]:
        return {name: table for (name, _), table in zip(self.signature.symbols, self.tables)}

    def table(self, symbol: str) -> Tuple[int, ...]:
        return self._table_of[symbol]

    def apply(self, symbol: str, args: Sequence[int]) -> int:
        index = 0
        for a in args:
            index = index * self.size + a
        return self._table_of[symbol][index]

    @property
    def elements(self) -> range:
        return range(self.size)

    @property
    def is_pointed(self) -> bool:
        return self.signature.is_pointed

    @property
    def zero(self) -> int:
        """指定常量的取值"""
        require_pointed(self)
        return self.table(self.signature.designated_constant)[0]

    def renamed(self, name: str) -> "FiniteAlgebra":
        return replace(self, name=name)

    @cached_property
    def translations(self) -> Tuple[Translation, ...]:
        """全部基本平移，按（符号、位置、固定参数字典序）排列

        映射相同的平移只保留第一个；恒等映射不产生新的合并，直接略去。
        """
        seen = set()
        result = []
        identity = tuple(range(self.size))
        for symbol, arity in self.signature.symbols:
            if arity == 0:
                continue
            for position in range(arity):
                for fixed in cartesian(range(self.size), repeat=arity - 1):
                    mapping = tuple(
                        self.apply(symbol, fixed[:position] + (e,) + fixed[position:])
                        for e in range(self.size)
                    )
                    if mapping == identity or mapping in seen:
                        continue
                    seen.add(mapping)
                    result.append(Translation(symbol, position, tuple(fixed), mapping))
        logger.debug("基本平移已计算", algebra=self.name, count=len(result))
        return tuple(result)

    @cached_property
    def constraints(self) -> Tuple[Tuple[str, Tuple[int, ...], int], ...]:
        """全部运算约束 (symbol, args, result)，供同态搜索使用"""
        result = []
        for (symbol, arity), table in zip(self.signature.symbols, self.tables):
            for index, args in enumerate(cartesian(range(self.size), repeat=arity)):
                result.append((symbol, tuple(args), table[index]))
        return tuple(result)

    def describe(self) -> str:
        ops = ", ".join(f"{name}/{arity}" for name, arity in self.signature.symbols)
        return f"{self.name} (size {self.size}; {ops or 'no operations'})"


def require_pointed(algebra: FiniteAlgebra) -> None:
    if not algebra.signature.is_pointed:
        raise ValidationError(
            f"代数 {algebra.name} 的签名不是点化的",
            code=ErrorCode.NOT_POINTED,
            details={"algebra": algebra.name},
        )


def require_same_signature(a: FiniteAlgebra, b: FiniteAlgebra) -> None:
    if a.signature != b.signature:
        raise ValidationError(
            f"代数 {a.name} 与 {b.name} 的签名不一致",
            code=ErrorCode.SIGNATURE_MISMATCH,
            details={"left": a.name, "right": b.name},
        )


def validate_algebra(desc: Mapping) -> FiniteAlgebra:
    """从原始描述构造并检查代数

    Args:
        desc: {"name", "size", "ops": [{"name", "arity", "table"}], "designated"}

    Raises:
        ValidationError: 表项越界、表长不符、符号重复或指定常量不是 0 元
    """
    name = str(desc.get("name") or "A")
    size = desc.get("size")
    if not isinstance(size, int) or isinstance(size, bool) or size < 1:
        raise ValidationError(
            f"代数 {name} 的大小必须是正整数", code=ErrorCode.INVALID_FORMAT,
            details={"size": size},
        )

    symbols: List[Tuple[str, int]] = []
    tables: List[Tuple[int, ...]] = []
    for op in desc.get("ops") or []:
        symbol = str(op.get("name"))
        arity = op.get("arity")
        table = list(op.get("table") or [])
        if symbol in (s for s, _ in symbols):
            raise ValidationError(
                f"代数 {name} 中符号 {symbol} 重复", code=ErrorCode.DUPLICATE_SYMBOL,
                details={"symbol": symbol},
            )
        if not isinstance(arity, int) or arity < 0:
            raise ValidationError(
                f"符号 {symbol} 的元数无效", code=ErrorCode.INVALID_FORMAT,
                details={"symbol": symbol, "arity": arity},
            )
        expected = size ** arity
        if len(table) != expected:
            raise ValidationError(
                f"运算 {symbol}/{arity} 的表长为 {len(table)}，应为 {expected}",
                code=ErrorCode.TABLE_LENGTH_MISMATCH,
                details={"symbol": symbol, "expected": expected, "actual": len(table)},
            )
        for position, entry in enumerate(table):
            if not isinstance(entry, int) or isinstance(entry, bool) or not 0 <= entry < size:
                raise ValidationError(
                    f"运算 {symbol} 的第 {position} 项 {entry!r} 超出 0..{size - 1}",
                    code=ErrorCode.VALUE_OUT_OF_RANGE,
                    details={"symbol": symbol, "position": position, "value": entry},
                )
        symbols.append((symbol, arity))
        tables.append(tuple(table))

    designated = desc.get("designated")
    if designated is not None:
        arities = dict(symbols)
        if designated not in arities:
            raise ValidationError(
                f"指定常量 {designated} 不在签名中", code=ErrorCode.BAD_CONSTANT,
                details={"symbol": designated},
            )
        if arities[designated] != 0:
            raise ValidationError(
                f"指定常量 {designated} 的元数为 {arities[designated]}，必须为 0",
                code=ErrorCode.BAD_CONSTANT,
                details={"symbol": designated},
            )

    return FiniteAlgebra(
        name=name,
        size=size,
        signature=Signature(tuple(symbols), designated),
        tables=tuple(tables),
    )


def trivial_algebra(signature: Signature, name: str = "1") -> FiniteAlgebra:
    """给定签名的一元素代数"""
    return FiniteAlgebra(
        name=name,
        size=1,
        signature=signature,
        tables=tuple((0,) for _ in signature.symbols),
    )


# ==================== 同态 ====================

@dataclass(frozen=True)
class Homomorphism:
    """同态，以像数组表示

    构造时不做检查；需要检查时使用 make_hom 或 hom_check。
    """
    dom: FiniteAlgebra
    cod: FiniteAlgebra
    image: Tuple[int, ...]
    name: str = field(default="", compare=False)

    def __call__(self, a: int) -> int:
        return self.image[a]

    @property
    def is_injective(self) -> bool:
        return len(set(self.image)) == len(self.image)

    @property
    def is_surjective(self) -> bool:
        return len(set(self.image)) == self.cod.size

    def describe(self) -> str:
        label = self.name or "h"
        return f"{label}: {self.dom.name} -> {self.cod.name} = {list(self.image)}"


def hom_check(h: Homomorphism) -> Verdict:
    """检查同态方程

    Returns:
        成立时 holds=True；否则反例为字典序最小的 (symbol, args)

    Raises:
        ValidationError: 像数组长度不等于定义域大小，或像越界
    """
    require_same_signature(h.dom, h.cod)
    if len(h.image) != h.dom.size:
        raise ValidationError(
            f"像数组长度为 {len(h.image)}，定义域 {h.dom.name} 的大小为 {h.dom.size}",
            code=ErrorCode.TABLE_LENGTH_MISMATCH,
            details={"expected": h.dom.size, "actual": len(h.image)},
        )
    for position, value in enumerate(h.image):
        if not isinstance(value, int) or not 0 <= value < h.cod.size:
            raise ValidationError(
                f"像数组第 {position} 项 {value!r} 超出 {h.cod.name} 的载体",
                code=ErrorCode.VALUE_OUT_OF_RANGE,
                details={"position": position, "value": value},
            )
    for symbol, args, result in h.dom.constraints:
        mapped = h.cod.apply(symbol, [h.image[a] for a in args])
        if h.image[result] != mapped:
            return Verdict(
                holds=False,
                counterexample={
                    "symbol": symbol,
                    "args": list(args),
                    "image_of_result": h.image[result],
                    "result_of_images": mapped,
                },
            )
    return Verdict(holds=True)


def make_hom(
    dom: FiniteAlgebra, cod: FiniteAlgebra, image: Iterable[int], name: str = ""
) -> Homomorphism:
    """构造并检查同态

    Raises:
        ValidationError: 映射不保持运算
    """
    h = Homomorphism(dom, cod, tuple(image), name=name)
    verdict = hom_check(h)
    if not verdict.holds:
        raise ValidationError(
            f"映射 {name or 'h'} 不是 {dom.name} 到 {cod.name} 的同态",
            code=ErrorCode.NOT_HOMOMORPHISM,
            details=verdict.counterexample,
        )
    return h


def identity_hom(algebra: FiniteAlgebra) -> Homomorphism:
    return Homomorphism(algebra, algebra, tuple(algebra.elements), name=f"id_{algebra.name}")


def zero_hom(dom: FiniteAlgebra, cod: FiniteAlgebra) -> Homomorphism:
    """点化签名下的零同态"""
    require_same_signature(dom, cod)
    return Homomorphism(dom, cod, tuple(cod.zero for _ in dom.elements), name="zero")


def compose(g: Homomorphism, f: Homomorphism) -> Homomorphism:
    """g∘f"""
    if f.cod != g.dom:
        raise ValidationError(
            f"无法复合：{f.cod.name} 与 {g.dom.name} 不同",
            code=ErrorCode.CODOMAIN_MISMATCH,
        )
    return Homomorphism(f.dom, g.cod, tuple(g.image[b] for b in f.image))


def enumerate_homs(a: FiniteAlgebra, b: FiniteAlgebra) -> List[Homomorphism]:
    """枚举全部同态，按像数组字典序输出"""
    from core.hom_search import search_homs

    require_same_signature(a, b)
    homs = [Homomorphism(a, b, image) for image in search_homs(a, b)]
    logger.debug("同态枚举完成", dom=a.name, cod=b.name, count=len(homs))
    return homs


def find_isomorphism(a: FiniteAlgebra, b: FiniteAlgebra) -> Optional[Homomorphism]:
    """返回字典序第一个同构，不存在时返回 None"""
    from core.hom_search import search_homs

    if a.size != b.size or a.signature != b.signature:
        return None
    for image in search_homs(a, b, injective=True):
        return Homomorphism(a, b, image, name="iso")
    return None


# ==================== 闭包引擎 ====================

def close_under_operations(
    signature: Signature,
    seeds: Sequence[Tuple[Hashable, Term]],
    apply: Callable[[str, Tuple[Hashable, ...]], Hashable],
    limit: Optional[int] = None,
    on_overflow: Optional[Callable[[int], AppError]] = None,
) -> Tuple[List[Hashable], List[Term]]:
    """广度优先的运算闭包

    先放入种子，再放入常量，然后逐轮把每个符号作用到
    至少含一个上一轮新元素的参数元组上（字典序），新值追加到末尾。

    Returns:
        (元素列表, 对应的项标签)
    """
    values: List[Hashable] = []
    labels: List[Term] = []
    position: Dict[Hashable, int] = {}

    def add(value: Hashable, label: Term) -> None:
        if value in position:
            return
        position[value] = len(values)
        values.append(value)
        labels.append(label)
        if limit is not None and len(values) > limit:
            raise (on_overflow(len(values)) if on_overflow else AppError(ErrorCode.FREE_ALGEBRA_TOO_LARGE))

    for value, label in seeds:
        add(value, label)
    for symbol, arity in signature.symbols:
        if arity == 0:
            add(apply(symbol, ()), Op(symbol))

    operations = [(s, k) for s, k in signature.symbols if k > 0]
    frontier_start = 0
    rounds = 0
    while frontier_start < len(values):
        round_end = len(values)
        for symbol, arity in operations:
            for args in cartesian(range(round_end), repeat=arity):
                if max(args) < frontier_start:
                    continue
                value = apply(symbol, tuple(values[i] for i in args))
                if value not in position:
                    add(value, Op(symbol, tuple(labels[i] for i in args)))
        frontier_start = round_end
        rounds += 1

    logger.debug("闭包完成", size=len(values), rounds=rounds)
    return values, labels


# ==================== 子代数、积与拉回 ====================

def subalgebra(
    algebra: FiniteAlgebra, elements: Iterable[int], name: Optional[str] = None
) -> Tuple[FiniteAlgebra, Homomorphism]:
    """闭子集上的子代数（按原下标排序）及包含映射"""
    members = sorted(set(elements))
    index = {a: i for i, a in enumerate(members)}
    tables = []
    for symbol, arity in algebra.signature.symbols:
        table = []
        for args in cartesian(members, repeat=arity):
            result = algebra.apply(symbol, args)
            if result not in index:
                raise AppError(
                    ErrorCode.INTERNAL_ERROR,
                    f"子集在运算 {symbol} 下不封闭",
                    details={"args": list(args), "result": result},
                )
            table.append(index[result])
        tables.append(tuple(table))
    sub = FiniteAlgebra(
        name=name or f"{algebra.name}_sub",
        size=len(members),
        signature=algebra.signature,
        tables=tuple(tables),
    )
    return sub, Homomorphism(sub, algebra, tuple(members), name="incl")


def generated_subalgebra(
    algebra: FiniteAlgebra, gens: Iterable[int]
) -> Tuple[FiniteAlgebra, Homomorphism, Dict[int, Term]]:
    """生成子代数

    生成元按给出顺序命名为 x1..xk（集合输入先排序）；常量总是包含在内。

    Returns:
        (子代数, 包含映射, 以原代数元素为键的项标签)
    """
    gens_list = sorted(gens) if isinstance(gens, (set, frozenset)) else list(gens)
    for g in gens_list:
        if not 0 <= g < algebra.size:
            raise ValidationError(
                f"生成元 {g} 不在 {algebra.name} 的载体中",
                code=ErrorCode.VALUE_OUT_OF_RANGE,
                details={"generator": g},
            )
    values, labels = close_under_operations(
        algebra.signature,
        [(g, var(i + 1)) for i, g in enumerate(gens_list)],
        lambda symbol, args: algebra.apply(symbol, args),
    )
    label_of = {value: label for value, label in zip(values, labels)}
    sub, inclusion = subalgebra(algebra, values, name=f"Sg_{algebra.name}")
    return sub, inclusion, label_of


@dataclass(frozen=True)
class PullbackAlgebra:
    """拉回（或积）：载体元素编码元素对 (x, y)"""
    carrier: FiniteAlgebra
    pair_of: Tuple[Tuple[int, int], ...]
    p1: Homomorphism
    p2: Homomorphism

    @cached_property
    def _index(self) -> Dict[Tuple[int, int], int]:
        return {pair: i for i, pair in enumerate(self.pair_of)}

    def index(self, x: int, y: int) -> int:
        return self._index[(x, y)]

    def contains(self, x: int, y: int) -> bool:
        return (x, y) in self._index

    @property
    def size(self) -> int:
        return self.carrier.size


def tuple_algebra(
    name: str,
    factors: Sequence[FiniteAlgebra],
    tuples: Sequence[Tuple[int, ...]],
) -> FiniteAlgebra:
    """按分量运算的子直积：tuples 必须在各运算下封闭"""
    signature = factors[0].signature
    for other in factors[1:]:
        require_same_signature(factors[0], other)
    index = {t: i for i, t in enumerate(tuples)}
    tables = []
    for symbol, arity in signature.symbols:
        table = []
        for args in cartesian(range(len(tuples)), repeat=arity):
            result = tuple(
                factor.apply(symbol, [tuples[a][c] for a in args])
                for c, factor in enumerate(factors)
            )
            table.append(index[result])
        tables.append(tuple(table))
    return FiniteAlgebra(name=name, size=len(tuples), signature=signature, tables=tuple(tables))


def _pair_algebra(
    name: str, a: FiniteAlgebra, b: FiniteAlgebra, pairs: List[Tuple[int, int]]
) -> PullbackAlgebra:
    carrier = tuple_algebra(name, [a, b], pairs)
    return PullbackAlgebra(
        carrier=carrier,
        pair_of=tuple(pairs),
        p1=Homomorphism(carrier, a, tuple(x for x, _ in pairs), name="p1"),
        p2=Homomorphism(carrier, b, tuple(y for _, y in pairs), name="p2"),
    )


def product(a: FiniteAlgebra, b: FiniteAlgebra) -> PullbackAlgebra:
    """积 A×B；元素 (x, y) 的下标为 x·|B| + y，p1/p2 即投影 π1/π2"""
    require_same_signature(a, b)
    pairs = [(x, y) for x in a.elements for y in b.elements]
    return _pair_algebra(f"{a.name}x{b.name}", a, b, pairs)


def pullback(f: Homomorphism, g: Homomorphism) -> PullbackAlgebra:
    """拉回 A ×_X B = {(x, y) | f(x) = g(y)}，元素按字典序排列

    Raises:
        ValidationError: 两个同态的陪域不同
    """
    if f.cod != g.cod:
        raise ValidationError(
            f"拉回要求陪域相同：{f.cod.name} 与 {g.cod.name}",
            code=ErrorCode.CODOMAIN_MISMATCH,
        )
    require_same_signature(f.dom, g.dom)
    fibres: Dict[int, List[int]] = {}
    for y in g.dom.elements:
        fibres.setdefault(g(y), []).append(y)
    pairs = [(x, y) for x in f.dom.elements for y in fibres.get(f(x), [])]
    result = _pair_algebra(f"{f.dom.name}x_{f.cod.name}{g.dom.name}", f.dom, g.dom, pairs)
    logger.debug("拉回已构造", size=len(pairs))
    return result


def injections(prod: PullbackAlgebra) -> Tuple[Homomorphism, Homomorphism]:
    """点化积的两个嵌入 ι1(a) = (a, 0)，ι2(b) = (0, b)"""
    a, b = prod.p1.cod, prod.p2.cod
    iota1 = Homomorphism(a, prod.carrier, tuple(prod.index(x, b.zero) for x in a.elements), name="i1")
    iota2 = Homomorphism(b, prod.carrier, tuple(prod.index(a.zero, y) for y in b.elements), name="i2")
    return iota1, iota2


def diagonal(algebra: FiniteAlgebra) -> Homomorphism:
    """对角映射 A → A×A"""
    prod = product(algebra, algebra)
    return Homomorphism(
        algebra, prod.carrier, tuple(prod.index(a, a) for a in algebra.elements), name="diag"
    )


# ==================== 商、像与核 ====================

def quotient(
    algebra: FiniteAlgebra, theta: "Congruence"
) -> Tuple[FiniteAlgebra, Homomorphism]:
    """商代数：元素为同余类，以最小成员代表，按代表元排序"""
    reps = sorted(set(theta.reps))
    index = {r: i for i, r in enumerate(reps)}
    tables = []
    for symbol, arity in algebra.signature.symbols:
        table = [
            index[theta.reps[algebra.apply(symbol, args)]]
            for args in cartesian(reps, repeat=arity)
        ]
        tables.append(tuple(table))
    quo = FiniteAlgebra(
        name=f"{algebra.name}/~",
        size=len(reps),
        signature=algebra.signature,
        tables=tuple(tables),
    )
    proj = Homomorphism(algebra, quo, tuple(index[theta.reps[a]] for a in algebra.elements), name="proj")
    return quo, proj


def image_factorization(f: Homomorphism) -> Tuple[Homomorphism, Homomorphism]:
    """像分解 f = m∘e：e 满射到像子代数，m 为包含映射"""
    image_alg, m = subalgebra(f.cod, set(f.image), name=f"Im_{f.name or 'f'}")
    position = {c: i for i, c in enumerate(m.image)}
    e = Homomorphism(f.dom, image_alg, tuple(position[f(a)] for a in f.dom.elements), name="e")
    return e, m


def kernel_subalgebra(f: Homomorphism) -> Tuple[FiniteAlgebra, Homomorphism]:
    """点化意义下的核 f⁻¹(0)

    Raises:
        ValidationError: 签名没有指定常量
    """
    require_pointed(f.dom)
    require_pointed(f.cod)
    zero = f.cod.zero
    return subalgebra(
        f.dom,
        [a for a in f.dom.elements if f(a) == zero],
        name=f"ker_{f.name or 'f'}",
    )


def assignment_of(gens: Sequence[int]) -> Dict[str, int]:
    """生成元取值 -> 变量赋值 {x1: g1, ...}"""
    return {var(i + 1).name: g for i, g in enumerate(gens)}


__all__ = [
    "Signature",
    "Translation",
    "FiniteAlgebra",
    "Homomorphism",
    "PullbackAlgebra",
    "validate_algebra",
    "trivial_algebra",
    "require_pointed",
    "require_same_signature",
    "hom_check",
    "make_hom",
    "identity_hom",
    "zero_hom",
    "compose",
    "enumerate_homs",
    "find_isomorphism",
    "close_under_operations",
    "subalgebra",
    "generated_subalgebra",
    "tuple_algebra",
    "product",
    "pullback",
    "injections",
    "diagonal",
    "quotient",
    "image_factorization",
    "kernel_subalgebra",
    "assignment_of",
]
