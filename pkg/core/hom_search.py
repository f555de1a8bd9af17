"""同态回溯搜索

按定义域元素的字典序逐个赋值，像值从小到大尝试；
每次赋值后沿运算约束做前向传播：一旦某约束的参数全部确定，
其结果元素的像随之确定（或与已有赋值冲突而剪枝）。
因此输出按像数组字典序排列。
"""
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple

from core.algebra import FiniteAlgebra, require_same_signature
from utils.logger import get_logger

logger = get_logger("hom_search")

UNASSIGNED = -1


class _SearchState:
    """一次搜索的私有状态：部分像数组、撤销栈与约束索引"""

    def __init__(self, dom: FiniteAlgebra, cod: FiniteAlgebra, injective: bool):
        self.dom = dom
        self.cod = cod
        self.injective = injective
        self.image: List[int] = [UNASSIGNED] * dom.size
        self.used: List[int] = [0] * cod.size
        self.trail: List[int] = []
        self.constraints = dom.constraints
        self.occurs: List[List[int]] = [[] for _ in dom.elements]
        for ci, (_, args, result) in enumerate(self.constraints):
            for a in set(args) | {result}:
                self.occurs[a].append(ci)
        self.nodes = 0

    def assign(self, element: int, value: int) -> bool:
        """赋值并传播；冲突时返回 False（调用方负责撤销）"""
        agenda: List[Tuple[int, int]] = [(element, value)]
        while agenda:
            e, v = agenda.pop()
            current = self.image[e]
            if current != UNASSIGNED:
                if current != v:
                    return False
                continue
            if self.injective and self.used[v]:
                return False
            self.image[e] = v
            self.used[v] += 1
            self.trail.append(e)
            for ci in self.occurs[e]:
                symbol, args, result = self.constraints[ci]
                values = [self.image[a] for a in args]
                if UNASSIGNED in values:
                    continue
                agenda.append((result, self.cod.apply(symbol, values)))
        return True

    def undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            e = self.trail.pop()
            self.used[self.image[e]] -= 1
            self.image[e] = UNASSIGNED

    def seed(self, pinned: Mapping[int, int]) -> bool:
        """常量约束与预先固定的像"""
        for symbol, args, result in self.constraints:
            if not args and not self.assign(result, self.cod.apply(symbol, ())):
                return False
        for element, value in sorted(pinned.items()):
            if not self.assign(element, value):
                return False
        return True

    def solutions(self, start: int = 0) -> Iterator[Tuple[int, ...]]:
        element = start
        while element < self.dom.size and self.image[element] != UNASSIGNED:
            element += 1
        if element == self.dom.size:
            yield tuple(self.image)
            return
        for value in range(self.cod.size):
            self.nodes += 1
            mark = len(self.trail)
            if self.assign(element, value):
                yield from self.solutions(element + 1)
            self.undo(mark)


def search_homs(
    dom: FiniteAlgebra,
    cod: FiniteAlgebra,
    pinned: Optional[Mapping[int, int]] = None,
    injective: bool = False,
) -> Iterator[Tuple[int, ...]]:
    """惰性枚举满足固定约束的同态像数组

    Args:
        dom: 定义域
        cod: 陪域
        pinned: 预先固定的像 {元素: 像}
        injective: 只枚举单射

    Yields:
        像数组（字典序）
    """
    require_same_signature(dom, cod)
    state = _SearchState(dom, cod, injective)
    if not state.seed(pinned or {}):
        logger.debug("固定约束自相矛盾", dom=dom.name, cod=cod.name)
        return
    yield from state.solutions()
    logger.debug("同态搜索结束", dom=dom.name, cod=cod.name, nodes=state.nodes)


def first_hom(
    dom: FiniteAlgebra,
    cod: FiniteAlgebra,
    pinned: Optional[Mapping[int, int]] = None,
) -> Optional[Tuple[int, ...]]:
    """字典序第一个满足约束的同态，不存在时返回 None"""
    for image in search_homs(dom, cod, pinned):
        return image
    return None


def merge_pins(pairs: Iterable[Tuple[int, int]]) -> Optional[Dict[int, int]]:
    """合并固定约束；同一元素被固定为不同的像时返回 None"""
    pins: Dict[int, int] = {}
    for element, value in pairs:
        if pins.setdefault(element, value) != value:
            return None
    return pins
