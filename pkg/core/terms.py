"""项（Term）：变量与运算符号构成的有限树

项用于标记自由代数与生成子代数中的元素，也用于表达 Mal'tsev 式见证。
打印为前缀形式，例如 ``meet(x1, meet(x2, 0))``。
"""
import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from utils.errors import ErrorCode, ValidationError

if TYPE_CHECKING:
    from core.algebra import FiniteAlgebra, Signature


@dataclass(frozen=True)
class Var:
    """变量叶子"""
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Op:
    """运算节点；常量为无参数的节点"""
    symbol: str
    args: Tuple["Term", ...] = ()

    def __str__(self) -> str:
        return format_term(self)


Term = Union[Var, Op]

HOLE = "w"


def var(index: int) -> Var:
    """第 index 个生成元变量（从 1 开始）"""
    return Var(f"x{index}")


def format_term(t: Term) -> str:
    """前缀形式打印"""
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.symbol
    return f"{t.symbol}({', '.join(format_term(a) for a in t.args)})"


def term_variables(t: Term) -> List[str]:
    """按首次出现顺序列出项中的变量"""
    seen: Dict[str, None] = {}
    stack: List[Term] = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            seen.setdefault(node.name, None)
        else:
            stack.extend(reversed(node.args))
    return list(seen)


def substitute(t: Term, mapping: Mapping[str, Term]) -> Term:
    """把变量同时替换为项；映射中没有的变量保持不变"""
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if not t.args:
        return t
    return Op(t.symbol, tuple(substitute(a, mapping) for a in t.args))


def evaluate_term(
    t: Term,
    algebra: "FiniteAlgebra",
    assignment: Mapping[str, int],
    memo: Optional[Dict[int, int]] = None,
) -> int:
    """在代数中自底向上求值

    memo 可在同一赋值下的多次调用之间共享（以节点 id 为键）。

    Raises:
        ValidationError: 变量未赋值，或项中的符号不属于代数的签名
    """
    # 标签项共享子树，按节点 id 缓存避免重复求值
    if memo is None:
        memo = {}

    def visit(node: Term) -> int:
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Var):
            if node.name not in assignment:
                raise ValidationError(
                    f"变量 {node.name} 未赋值",
                    code=ErrorCode.UNBOUND_VARIABLE,
                    details={"variable": node.name},
                )
            value = assignment[node.name]
        else:
            arity = algebra.signature.arity_of(node.symbol)
            if arity is None or arity != len(node.args):
                raise ValidationError(
                    f"符号 {node.symbol}/{len(node.args)} 不在代数 {algebra.name} 的签名中",
                    code=ErrorCode.SIGNATURE_MISMATCH,
                    details={"symbol": node.symbol},
                )
            value = algebra.apply(node.symbol, [visit(a) for a in node.args])
        memo[key] = value
        return value

    return visit(t)


# ==================== 解析 ====================

_TOKEN = re.compile(r"\s*(?:([A-Za-z0-9_]+)|(.))")


def _tokenize(text: str) -> List[str]:
    tokens = []
    for match in _TOKEN.finditer(text):
        name, punct = match.groups()
        if name:
            tokens.append(name)
        elif punct and not punct.isspace():
            if punct not in "(),":
                raise ValidationError(
                    f"项 '{text}' 中出现非法字符 '{punct}'",
                    code=ErrorCode.MALFORMED_TERM,
                )
            tokens.append(punct)
    return tokens


def parse_term(
    text: str,
    signature: Optional["Signature"] = None,
    variables: Optional[Sequence[str]] = None,
) -> Term:
    """解析前缀形式的项

    Args:
        text: 例如 "meet(x2, x1)"、"0"
        signature: 给出时检查符号与元数，并把 0 元符号识别为常量
        variables: 允许的变量名；缺省时接受形如 x1, x2 的名字

    Raises:
        ValidationError: 语法错误、未知符号或元数不符
    """
    tokens = _tokenize(text)
    if not tokens:
        raise ValidationError("空的项", code=ErrorCode.MALFORMED_TERM)
    position = 0

    def fail(message: str) -> ValidationError:
        return ValidationError(
            f"无法解析项 '{text.strip()}'：{message}",
            code=ErrorCode.MALFORMED_TERM,
        )

    def is_variable(name: str) -> bool:
        if variables is not None:
            return name in variables
        return re.fullmatch(r"x[1-9][0-9]*", name) is not None

    def parse() -> Term:
        nonlocal position
        if position >= len(tokens) or tokens[position] in "(),":
            raise fail("缺少符号")
        name = tokens[position]
        position += 1
        if position < len(tokens) and tokens[position] == "(":
            position += 1
            args = [parse()]
            while position < len(tokens) and tokens[position] == ",":
                position += 1
                args.append(parse())
            if position >= len(tokens) or tokens[position] != ")":
                raise fail("括号不匹配")
            position += 1
            if signature is not None:
                arity = signature.arity_of(name)
                if arity is None:
                    raise fail(f"未知的运算符号 {name}")
                if arity != len(args):
                    raise fail(f"{name} 的元数应为 {arity}，实际为 {len(args)}")
            return Op(name, tuple(args))
        if signature is not None and signature.arity_of(name) == 0:
            return Op(name)
        if is_variable(name):
            return Var(name)
        if signature is None:
            return Op(name)
        raise fail(f"未知的变量或常量 {name}")

    term = parse()
    if position != len(tokens):
        raise fail("多余的内容")
    return term
