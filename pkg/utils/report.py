"""检查报告：数据模型、文本渲染与持久化

JSON 报告字段：command、inputs[{file, hash}]、holds、verdict、
witness、counterexample、note、extra、error、ms、version。
值为空的字段不输出；同样的输入（配合 --no-timing）得到逐字节相同的输出。
"""
import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from config.settings import TOOL_VERSION
from core.types import VerdictLabel
from core.verdicts import Verdict
from utils.errors import ERROR_EXIT_CODE, AppError, ErrorCode
from utils.logger import get_logger

logger = get_logger("report")

# ==================== 常量定义 ====================

EXIT_HOLDS = 0
EXIT_FAILS = 1

VERDICT_PREFIX = {"holds": "HOLDS", "fails": "FAILS", "error": "ERROR"}


class InputRef(BaseModel):
    """输入文件及其 SHA-256"""
    model_config = ConfigDict(frozen=True)

    file: str
    hash: str


class Report(BaseModel):
    """一次命令执行的报告"""
    model_config = ConfigDict(extra="forbid")

    command: str
    inputs: List[InputRef] = Field(default_factory=list)
    holds: Optional[bool] = None
    verdict: VerdictLabel
    witness: Optional[Dict[str, Any]] = None
    counterexample: Optional[Dict[str, Any]] = None
    note: Optional[str] = None
    extra: Optional[Dict[str, Any]] = None
    error: Optional[Dict[str, Any]] = None
    ms: int = 0
    version: str = TOOL_VERSION

    @property
    def exit_code(self) -> int:
        if self.verdict == "holds":
            return EXIT_HOLDS
        if self.verdict == "fails":
            return EXIT_FAILS
        return ERROR_EXIT_CODE

    @classmethod
    def from_verdict(
        cls, command: str, inputs: List[InputRef], verdict: Verdict, ms: int = 0
    ) -> "Report":
        data = verdict.to_dict()
        return cls(
            command=command,
            inputs=inputs,
            holds=verdict.holds,
            verdict="holds" if verdict.holds else "fails",
            witness=data.get("witness"),
            counterexample=data.get("counterexample"),
            note=data.get("note") or None,
            extra=data.get("extra") or None,
            ms=ms,
        )

    @classmethod
    def from_error(cls, command: str, inputs: List[InputRef], error: AppError, ms: int = 0) -> "Report":
        return cls(command=command, inputs=inputs, verdict="error", error=error.to_dict(), ms=ms)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, exclude_none=True)


# ==================== 输入哈希 ====================

def hash_file(file_path: Union[str, Path]) -> str:
    """文件内容的 SHA-256（十六进制）"""
    return hashlib.sha256(Path(file_path).read_bytes()).hexdigest()


def input_refs(paths: Iterable[Union[str, Path]]) -> List[InputRef]:
    """按给出顺序去重；不存在的文件不计入"""
    refs: List[InputRef] = []
    seen = set()
    for path in paths:
        key = str(path)
        if key in seen or not Path(path).is_file():
            continue
        seen.add(key)
        refs.append(InputRef(file=key, hash=hash_file(path)))
    return refs


# ==================== 渲染与输出 ====================

def _compact(value: Any) -> str:
    return json.dumps(value, ensure_ascii=False, separators=(", ", ": "))


def render_text(report: Report) -> str:
    """文本形式：首行为 HOLDS / FAILS / ERROR 加命令，随后是载荷"""
    lines = [f"{VERDICT_PREFIX[report.verdict]} {report.command}"]
    if report.error:
        lines.append(f"  {report.error.get('code')}: {report.error.get('message')}")
    if report.note:
        lines.append(f"  note: {report.note}")
    for key in ("witness", "counterexample", "extra"):
        payload = getattr(report, key)
        if not payload:
            continue
        lines.append(f"  {key}:")
        for name, value in payload.items():
            lines.append(f"    {name}: {_compact(value)}")
    if report.ms:
        lines.append(f"  ({report.ms} ms)")
    return "\n".join(lines)


def write_report(report: Report, out: Union[str, Path]) -> Path:
    """把 JSON 报告写到磁盘

    Raises:
        AppError: 路径不可写（UNWRITABLE_PATH）
    """
    path = Path(out)
    try:
        path.write_text(report.to_json() + "\n", encoding="utf-8")
    except OSError as e:
        raise AppError(
            ErrorCode.UNWRITABLE_PATH,
            f"无法写入报告文件 {path}：{e.strerror or e}",
            details={"path": str(path)},
            original_error=e,
        )
    logger.debug("报告已写入", path=str(path))
    return path


def emit_report(report: Report, as_json: bool, out: Optional[Union[str, Path]] = None) -> str:
    """渲染报告；给出 out 时另外写入 JSON 文件

    Returns:
        要打印到 stdout 的文本
    """
    if out is not None:
        write_report(report, out)
    return report.to_json() if as_json else render_text(report)
