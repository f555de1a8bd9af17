"""类型定义模块"""
from typing import Any, Dict, List, Literal, Optional, TypedDict


# 报告结论
VerdictLabel = Literal["holds", "fails", "error"]

# 局部见证的校验模式
WitnessMode = Literal["local", "ddcc"]

# Mal'tsev 式见证的种类
WitnessKind = Literal["anticommutative", "local"]


class VerdictDict(TypedDict, total=False):
    """检查结果字典"""
    holds: bool
    counterexample: Optional[Dict[str, Any]]
    witness: Optional[Dict[str, Any]]
    note: str
    extra: Dict[str, Any]


class OperationDict(TypedDict):
    """运算描述"""
    name: str
    arity: int
    table: List[int]


class AlgebraDict(TypedDict, total=False):
    """代数原始描述（validate_algebra 的输入）"""
    name: str
    size: int
    ops: List[OperationDict]
    designated: Optional[str]


class MaltsevWitnessDict(TypedDict):
    """反交换性见证"""
    m: int
    n: int
    u: List[str]
    v: List[str]
    p: List[str]


class LocalWitnessDict(TypedDict):
    """局部反交换性见证"""
    m: int
    n: int
    b: List[str]
    c: List[str]
    p: List[str]


class InputRefDict(TypedDict):
    """报告中的输入文件引用"""
    file: str
    hash: str
