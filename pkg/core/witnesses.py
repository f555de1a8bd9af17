"""Mal'tsev 式见证：从同余链编译项，以及见证的结构检查

链的每一步贡献一个 p_i。步骤多项式的参数是成对代数中的元素 (a_j, b_j)，
其左右分量在自由代数中的项标签分别进入 u/v（或 b/c）列表；
所有步骤的参数拼接成一个共同的长度为 m 的参数表，
多项式的空位按生成对的方向代入第 m+1 或第 m+2 个参数。
"""
import re
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from core.algebra import PullbackAlgebra, Signature
from core.congruences import FORWARD, Chain
from core.terms import HOLE, Term, Var, format_term, parse_term, substitute, term_variables, var
from core.types import LocalWitnessDict, MaltsevWitnessDict
from utils.errors import ErrorCode, ValidationError
from utils.logger import get_logger

logger = get_logger("witnesses")

_VARIABLE = re.compile(r"x([1-9][0-9]*)")


@dataclass(frozen=True)
class MaltsevWitness:
    """反交换性见证：一元项 u、v 与 (m+2) 元项 p"""
    u: Tuple[Term, ...]
    v: Tuple[Term, ...]
    p: Tuple[Term, ...]

    @property
    def m(self) -> int:
        return len(self.u)

    @property
    def n(self) -> int:
        return len(self.p)

    def to_dict(self) -> MaltsevWitnessDict:
        return {
            "m": self.m,
            "n": self.n,
            "u": [format_term(t) for t in self.u],
            "v": [format_term(t) for t in self.v],
            "p": [format_term(t) for t in self.p],
        }


@dataclass(frozen=True)
class LocalWitness:
    """局部反交换性见证：二元项 b、c 与 (m+2) 元项 p"""
    b: Tuple[Term, ...]
    c: Tuple[Term, ...]
    p: Tuple[Term, ...]

    @property
    def m(self) -> int:
        return len(self.b)

    @property
    def n(self) -> int:
        return len(self.p)

    def to_dict(self) -> LocalWitnessDict:
        return {
            "m": self.m,
            "n": self.n,
            "b": [format_term(t) for t in self.b],
            "c": [format_term(t) for t in self.c],
            "p": [format_term(t) for t in self.p],
        }


# ==================== 编译 ====================

def compile_chain(
    chain: Chain, pairs: PullbackAlgebra, labels: Sequence[Term]
) -> Tuple[Tuple[Term, ...], Tuple[Term, ...], Tuple[Term, ...]]:
    """把成对代数中的链编译为 (左参数项, 右参数项, p 项)

    Args:
        chain: 生成对为 (左端, 右端) 的链
        pairs: 链所在的成对代数（积或拉回），其分量是自由代数
        labels: 自由代数元素的项标签

    空链（端点重合，只出现在平凡簇中）编译为 m=0、p_1 = x1。
    """
    if not chain.steps:
        return (), (), (var(1),)

    left: List[Term] = []
    right: List[Term] = []
    bodies: List[Tuple[Term, int, bool]] = []
    for step in chain.steps:
        offset = len(left)
        for element in step.polynomial.params:
            a, b = pairs.pair_of[element]
            left.append(labels[a])
            right.append(labels[b])
        bodies.append((step.polynomial.term, offset, step.orientation == FORWARD))

    m = len(left)
    p_terms: List[Term] = []
    for term, offset, forward in bodies:
        mapping: Dict[str, Term] = {
            name: var(offset + int(name[1:]) + 1)
            for name in term_variables(term)
            if name != HOLE
        }
        mapping[HOLE] = var(m + 1) if forward else var(m + 2)
        p_terms.append(substitute(term, mapping))
    logger.debug("链已编译", steps=len(p_terms), params=m)
    return tuple(left), tuple(right), tuple(p_terms)


# ==================== 结构检查 ====================

def _malformed(message: str, **details) -> ValidationError:
    return ValidationError(message, code=ErrorCode.MALFORMED_WITNESS, details=details or None)


def _check_term(term: Term, signature: Signature, max_var: int, role: str) -> None:
    stack: List[Term] = [term]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            match = _VARIABLE.fullmatch(node.name)
            if match is None or int(match.group(1)) > max_var:
                raise _malformed(
                    f"{role} 项 {format_term(term)} 使用了变量 {node.name}，只允许 x1..x{max_var}",
                    role=role,
                    term=format_term(term),
                )
        else:
            arity = signature.arity_of(node.symbol)
            if arity is None or arity != len(node.args):
                raise _malformed(
                    f"{role} 项 {format_term(term)} 中的 {node.symbol}/{len(node.args)} 不在签名中",
                    role=role,
                    term=format_term(term),
                )
            stack.extend(node.args)


def check_witness_shape(
    params: Tuple[Sequence[Term], Sequence[Term]],
    p: Sequence[Term],
    signature: Signature,
    param_arity: int,
    names: Tuple[str, str],
) -> None:
    """检查见证的元数与签名

    Raises:
        ValidationError: n = 0、参数列表长度不一致、变量越界或符号不在签名中
    """
    left, right = params
    if not p:
        raise _malformed("见证至少需要一个 p 项")
    if len(left) != len(right):
        raise _malformed(
            f"{names[0]} 与 {names[1]} 的个数不一致：{len(left)} 与 {len(right)}",
        )
    for role, terms in ((names[0], left), (names[1], right)):
        for t in terms:
            _check_term(t, signature, param_arity, role)
    for t in p:
        _check_term(t, signature, len(left) + 2, "p")


def parse_witness_terms(texts: Sequence[str], signature: Signature) -> Tuple[Term, ...]:
    """解析见证文件中的项字符串

    Raises:
        ValidationError: 任一项无法解析（以 MALFORMED_WITNESS 报告）
    """
    parsed = []
    for text in texts:
        try:
            parsed.append(parse_term(text, signature))
        except ValidationError as e:
            raise _malformed(e.message, term=text) from e
    return tuple(parsed)
