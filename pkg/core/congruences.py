"""同余：带推导轨迹的生成、同余格与核同余

生成算法是并查集加工作表：每合并一对 (a, b)，就把所有基本平移
作用在这对元素上，再合并得到的像。并查集的根总是类中的最小元素，
因此类的代表元在各次运行之间是规范的。

每次成功的合并记为一条轨迹步骤：要么是某个生成对本身，
要么是父步骤经过一个基本平移得到的像。这些合并边构成一棵生成森林，足以重放划分。
提取链时另行计算生成对在全部一元多项式下的像（一步边），
在一步边上做广度优先搜索，因此得到的链最短。
"""
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from config.settings import settings
from core.algebra import FiniteAlgebra, Homomorphism
from core.terms import HOLE, Op, Term, Var, evaluate_term, format_term
from utils.errors import ErrorCode, LimitExceededError, ValidationError
from utils.logger import get_logger

logger = get_logger("congruences")

FORWARD = "forward"
REVERSED = "reversed"

# 提取最短链时一步边的数量上限
_EDGE_BUDGET = 200_000


class _UnionFind:
    """最小元素为根的并查集（带路径压缩）"""

    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra < rb:
            self.parent[rb] = ra
        else:
            self.parent[ra] = rb
        return True

    def reps(self) -> Tuple[int, ...]:
        return tuple(self.find(i) for i in range(len(self.parent)))


# ==================== 数据类型 ====================

@dataclass(frozen=True)
class TraceStep:
    """一次合并及其理由

    kind 为 "generator" 时 generator 给出生成对下标；
    kind 为 "polynomial" 时 pair 是 parent 步骤的元素对在平移
    symbol(fixed 参数, 第 position 位留空) 下的像。
    """
    pair: Tuple[int, int]
    kind: str
    generator: Optional[int] = None
    symbol: Optional[str] = None
    position: Optional[int] = None
    fixed: Tuple[int, ...] = ()
    parent: Optional[int] = None


@dataclass(frozen=True)
class DerivationTrace:
    generators: Tuple[Tuple[int, int], ...]
    steps: Tuple[TraceStep, ...]


@dataclass(frozen=True)
class Congruence:
    """同余：reps[i] 是 i 所在类的最小元素

    相等比较只看划分本身。
    """
    algebra: FiniteAlgebra = field(compare=False, repr=False)
    reps: Tuple[int, ...]
    trace: Optional[DerivationTrace] = field(default=None, compare=False, repr=False)

    def related(self, a: int, b: int) -> bool:
        return self.reps[a] == self.reps[b]

    def classes(self) -> List[Tuple[int, ...]]:
        """按代表元排序的类列表"""
        blocks: Dict[int, List[int]] = {}
        for element, rep in enumerate(self.reps):
            blocks.setdefault(rep, []).append(element)
        return [tuple(blocks[rep]) for rep in sorted(blocks)]

    def class_of(self, a: int) -> Tuple[int, ...]:
        rep = self.reps[a]
        return tuple(i for i, r in enumerate(self.reps) if r == rep)

    @property
    def num_classes(self) -> int:
        return len(set(self.reps))

    @property
    def is_discrete(self) -> bool:
        return self.num_classes == len(self.reps)

    @property
    def is_total(self) -> bool:
        return self.num_classes == 1

    def __str__(self) -> str:
        return "[" + " ".join("[" + " ".join(map(str, b)) + "]" for b in self.classes()) + "]"


@dataclass(frozen=True)
class Polynomial:
    """一元多项式：以 HOLE 为空位、c0..c{m-1} 为参数的项，外加参数取值"""
    term: Term
    params: Tuple[int, ...] = ()

    def assignment(self, hole: int) -> Dict[str, int]:
        values = {f"c{i}": p for i, p in enumerate(self.params)}
        values[HOLE] = hole
        return values

    def evaluate(self, algebra: FiniteAlgebra, hole: int) -> int:
        return evaluate_term(self.term, algebra, self.assignment(hole))

    def describe(self) -> str:
        return f"{format_term(self.term)} with c={list(self.params)}"


@dataclass(frozen=True)
class ChainStep:
    polynomial: Polynomial
    generator: int
    orientation: str


@dataclass(frozen=True)
class Chain:
    """z0 = a, ..., zn = b；第 i 步把生成对（按 orientation）代入多项式得到 (z_{i-1}, z_i)"""
    elements: Tuple[int, ...]
    steps: Tuple[ChainStep, ...]

    @property
    def length(self) -> int:
        return len(self.steps)

    def to_dict(self) -> Dict:
        return {
            "elements": list(self.elements),
            "steps": [
                {
                    "polynomial": format_term(step.polynomial.term),
                    "params": list(step.polynomial.params),
                    "generator": step.generator,
                    "orientation": step.orientation,
                }
                for step in self.steps
            ],
        }


# ==================== 构造 ====================

def _from_reps(algebra: FiniteAlgebra, reps: Sequence[int]) -> Congruence:
    return Congruence(algebra=algebra, reps=tuple(reps))


def discrete(algebra: FiniteAlgebra) -> Congruence:
    """Δ"""
    return _from_reps(algebra, algebra.elements)


def total(algebra: FiniteAlgebra) -> Congruence:
    """∇"""
    return _from_reps(algebra, [0] * algebra.size)


def from_blocks(algebra: FiniteAlgebra, blocks: Iterable[Iterable[int]]) -> Congruence:
    """由类列表构造（不检查相容性）"""
    uf = _UnionFind(algebra.size)
    for block in blocks:
        block = list(block)
        for element in block[1:]:
            uf.union(block[0], element)
    return _from_reps(algebra, uf.reps())


def generated_congruence(
    algebra: FiniteAlgebra, pairs: Iterable[Tuple[int, int]]
) -> Congruence:
    """包含 pairs 的最小同余（带推导轨迹）"""
    generators = tuple((int(a), int(b)) for a, b in pairs)
    for a, b in generators:
        if not (0 <= a < algebra.size and 0 <= b < algebra.size):
            raise ValidationError(
                f"元素对 ({a}, {b}) 不在 {algebra.name} 的载体中",
                code=ErrorCode.VALUE_OUT_OF_RANGE,
            )

    uf = _UnionFind(algebra.size)
    steps: List[TraceStep] = []
    worklist: deque = deque()
    for k, (a, b) in enumerate(generators):
        if uf.union(a, b):
            steps.append(TraceStep(pair=(a, b), kind="generator", generator=k))
            worklist.append(len(steps) - 1)

    translations = algebra.translations
    while worklist:
        index = worklist.popleft()
        a, b = steps[index].pair
        for tr in translations:
            c, d = tr.mapping[a], tr.mapping[b]
            if uf.union(c, d):
                steps.append(
                    TraceStep(
                        pair=(c, d),
                        kind="polynomial",
                        symbol=tr.symbol,
                        position=tr.position,
                        fixed=tr.fixed,
                        parent=index,
                    )
                )
                worklist.append(len(steps) - 1)

    logger.debug("同余生成完成", algebra=algebra.name, generators=len(generators), steps=len(steps))
    return Congruence(
        algebra=algebra,
        reps=uf.reps(),
        trace=DerivationTrace(generators=generators, steps=tuple(steps)),
    )


def principal(algebra: FiniteAlgebra, a: int, b: int) -> Congruence:
    """主同余 Cg(a, b)"""
    return generated_congruence(algebra, [(a, b)])


def eq_kernel(f: Homomorphism) -> Congruence:
    """核同余 Eq(f)：按 f 的纤维划分"""
    first: Dict[int, int] = {}
    reps = [first.setdefault(f(a), a) for a in f.dom.elements]
    return _from_reps(f.dom, reps)


# ==================== 格运算 ====================

def meet(theta: Congruence, phi: Congruence) -> Congruence:
    """公共加细"""
    first: Dict[Tuple[int, int], int] = {}
    reps = [first.setdefault((theta.reps[i], phi.reps[i]), i) for i in range(len(theta.reps))]
    return _from_reps(theta.algebra, reps)


def join(theta: Congruence, phi: Congruence) -> Congruence:
    """作为等价关系的并的传递闭包（同余格是等价关系格的子格）"""
    uf = _UnionFind(len(theta.reps))
    for i in range(len(theta.reps)):
        uf.union(i, theta.reps[i])
        uf.union(i, phi.reps[i])
    return _from_reps(theta.algebra, uf.reps())


def leq(theta: Congruence, phi: Congruence) -> bool:
    """theta ⊆ phi"""
    return all(phi.reps[i] == phi.reps[theta.reps[i]] for i in range(len(theta.reps)))


def is_compatible(algebra: FiniteAlgebra, reps: Sequence[int]) -> bool:
    """划分是否与全部基本平移相容"""
    for tr in algebra.translations:
        for a in algebra.elements:
            if reps[tr.mapping[a]] != reps[tr.mapping[reps[a]]]:
                return False
    return True


def all_congruences(
    algebra: FiniteAlgebra, max_size: Optional[int] = None
) -> List[Congruence]:
    """全部同余：Δ 与所有主同余在并运算下的闭包

    输出按类数从多到少、再按代表元数组排序（Δ 在最前，∇ 在最后）。

    Raises:
        LimitExceededError: 代数大小超过上限
    """
    cap = settings.con_cap(max_size)
    if algebra.size > cap:
        raise LimitExceededError(
            limit=cap,
            attempted=algebra.size,
            code=ErrorCode.CONGRUENCE_CAP_EXCEEDED,
        )

    principals: Dict[Tuple[int, ...], Congruence] = {}
    for a in algebra.elements:
        for b in range(a + 1, algebra.size):
            theta = principal(algebra, a, b)
            principals.setdefault(theta.reps, theta)

    found: Dict[Tuple[int, ...], Congruence] = {}
    delta = discrete(algebra)
    found[delta.reps] = delta
    for reps, theta in principals.items():
        found.setdefault(reps, _from_reps(algebra, reps))

    queue = deque(found.values())
    generators = [found[reps] for reps in principals]
    while queue:
        theta = queue.popleft()
        for p in generators:
            joined = join(theta, p)
            if joined.reps not in found:
                found[joined.reps] = joined
                queue.append(joined)

    result = sorted(found.values(), key=lambda c: (-c.num_classes, c.reps))
    logger.debug("同余格已枚举", algebra=algebra.name, count=len(result))
    return result


# ==================== 轨迹与链 ====================

def replay_trace(theta: Congruence) -> bool:
    """从离散划分出发重放轨迹，检查每一步并比对最终划分"""
    if theta.trace is None:
        return False
    algebra = theta.algebra
    trace = theta.trace
    uf = _UnionFind(algebra.size)
    for step in trace.steps:
        if step.kind == "generator":
            if step.generator is None or trace.generators[step.generator] != step.pair:
                return False
        else:
            if step.parent is None or step.symbol is None or step.position is None:
                return False
            a, b = trace.steps[step.parent].pair
            args_a = step.fixed[: step.position] + (a,) + step.fixed[step.position:]
            args_b = step.fixed[: step.position] + (b,) + step.fixed[step.position:]
            if (algebra.apply(step.symbol, args_a), algebra.apply(step.symbol, args_b)) != step.pair:
                return False
        uf.union(*step.pair)
    # 轨迹只记录新的合并，需确认生成对全部被覆盖
    if any(uf.find(a) != uf.find(b) for a, b in trace.generators):
        return False
    return uf.reps() == theta.reps


def _polynomial_of(trace: DerivationTrace, index: int) -> Tuple[Polynomial, int]:
    """展开第 index 步：返回（作用在生成对上的多项式, 生成对下标）"""
    chain_of_steps: List[TraceStep] = []
    step = trace.steps[index]
    while step.kind != "generator":
        chain_of_steps.append(step)
        step = trace.steps[step.parent]
    generator = step.generator

    term: Term = Var(HOLE)
    params: List[int] = []
    for tr in reversed(chain_of_steps):
        args: List[Term] = []
        fixed = iter(tr.fixed)
        for j in range(len(tr.fixed) + 1):
            if j == tr.position:
                args.append(term)
            else:
                args.append(Var(f"c{len(params)}"))
                params.append(next(fixed))
        term = Op(tr.symbol, tuple(args))
    return Polynomial(term, tuple(params)), generator


def _one_step_edges(theta: Congruence) -> Optional[DerivationTrace]:
    """生成对在全部一元多项式下的像，按多项式深度逐层展开

    每个无序对只记录第一次出现（即深度最小）的那一步；
    超过 _EDGE_BUDGET 时返回 None。
    """
    algebra = theta.algebra
    generators = theta.trace.generators
    steps: List[TraceStep] = []
    seen = set()
    queue: deque = deque()
    for k, (a, b) in enumerate(generators):
        key = (min(a, b), max(a, b))
        if a != b and key not in seen:
            seen.add(key)
            steps.append(TraceStep(pair=(a, b), kind="generator", generator=k))
            queue.append(len(steps) - 1)

    translations = algebra.translations
    while queue:
        index = queue.popleft()
        a, b = steps[index].pair
        for tr in translations:
            c, d = tr.mapping[a], tr.mapping[b]
            key = (min(c, d), max(c, d))
            if c == d or key in seen:
                continue
            if len(steps) >= _EDGE_BUDGET:
                return None
            seen.add(key)
            steps.append(
                TraceStep(
                    pair=(c, d),
                    kind="polynomial",
                    symbol=tr.symbol,
                    position=tr.position,
                    fixed=tr.fixed,
                    parent=index,
                )
            )
            queue.append(len(steps) - 1)
    return DerivationTrace(generators=generators, steps=tuple(steps))


def chain_between(theta: Congruence, a: int, b: int) -> Chain:
    """提取 a 到 b 的最短链

    一步边超过预算时退回生成森林中的路径（仍合法，但不保证最短）。

    Raises:
        ValidationError: a 与 b 不相关，或同余没有轨迹
    """
    if theta.trace is None:
        raise ValidationError("同余没有推导轨迹", code=ErrorCode.VALIDATION_ERROR)
    if not theta.related(a, b):
        raise ValidationError(
            f"元素 {a} 与 {b} 不在同一个同余类中",
            code=ErrorCode.NOT_RELATED,
            details={"a": a, "b": b},
        )
    if a == b:
        return Chain(elements=(a,), steps=())

    edges = _one_step_edges(theta)
    if edges is None:
        logger.warning("一步边超过预算，改用生成森林", algebra=theta.algebra.name, budget=_EDGE_BUDGET)
        edges = theta.trace

    adjacency: Dict[int, List[Tuple[int, int]]] = {}
    for index, step in enumerate(edges.steps):
        u, v = step.pair
        adjacency.setdefault(u, []).append((v, index))
        adjacency.setdefault(v, []).append((u, index))

    previous: Dict[int, Tuple[int, int]] = {}
    queue = deque([a])
    seen = {a}
    while queue and b not in seen:
        node = queue.popleft()
        for neighbour, index in adjacency.get(node, []):
            if neighbour not in seen:
                seen.add(neighbour)
                previous[neighbour] = (node, index)
                queue.append(neighbour)

    path: List[Tuple[int, int, int]] = []
    node = b
    while node != a:
        prior, index = previous[node]
        path.append((prior, node, index))
        node = prior
    path.reverse()

    elements = [a]
    steps = []
    for source, target, index in path:
        polynomial, generator = _polynomial_of(edges, index)
        orientation = FORWARD if edges.steps[index].pair[0] == source else REVERSED
        steps.append(ChainStep(polynomial, generator, orientation))
        elements.append(target)
    return Chain(elements=tuple(elements), steps=tuple(steps))


def validate_chain(
    chain: Chain, algebra: FiniteAlgebra, generators: Sequence[Tuple[int, int]]
) -> bool:
    """逐步直接求值验证链"""
    if len(chain.elements) != len(chain.steps) + 1:
        return False
    for i, step in enumerate(chain.steps):
        left, right = generators[step.generator]
        if step.orientation == REVERSED:
            left, right = right, left
        if step.polynomial.evaluate(algebra, left) != chain.elements[i]:
            return False
        if step.polynomial.evaluate(algebra, right) != chain.elements[i + 1]:
            return False
    return True
