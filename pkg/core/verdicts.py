"""检查结果（verdict）的统一数据模型

所有检查都返回带有 ``holds`` / ``counterexample`` / ``witness`` 三个键的结果，
序列化格式在各类检查之间保持一致。
"""
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from core.types import VerdictDict


def to_jsonable(value: Any) -> Any:
    """把检查中出现的对象转换为可 JSON 序列化的值

    同余输出为类列表，项输出为前缀字符串，元组输出为列表。
    """
    # 延迟导入避免循环依赖
    from core.congruences import Congruence
    from core.terms import Op, Var, format_term

    if isinstance(value, Congruence):
        return [list(block) for block in value.classes()]
    if isinstance(value, (Var, Op)):
        return format_term(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if hasattr(value, "to_dict"):
        return value.to_dict()
    return value


@dataclass
class Verdict:
    """通用检查结果

    Attributes:
        holds: 性质是否成立
        counterexample: 不成立时的最小反例（按字典序）
        witness: 成立时的见证（项、同态像数组等）
        note: 附加诊断信息
    """
    holds: bool
    counterexample: Optional[Dict[str, Any]] = None
    witness: Optional[Dict[str, Any]] = None
    note: str = ""
    extra: Dict[str, Any] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> VerdictDict:
        """转换为字典"""
        result: VerdictDict = {
            "holds": self.holds,
            "counterexample": to_jsonable(self.counterexample),
            "witness": to_jsonable(self.witness),
        }
        if self.note:
            result["note"] = self.note
        if self.extra:
            result["extra"] = to_jsonable(self.extra)
        return result
