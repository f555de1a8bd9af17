"""错误处理模块

提供统一的错误码、错误分类和用户友好的错误消息。
数学上的"性质不成立"不是错误，由各检查的 verdict 表达；
这里只覆盖输入不合法、资源缺失和上限溢出等真正的失败。
"""
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional


class ErrorCategory(str, Enum):
    """错误分类"""
    VALIDATION = "validation"       # 输入验证错误
    RESOURCE = "resource"           # 文件与引用错误
    LIMIT = "limit"                 # 计算规模超限
    INTERNAL = "internal"           # 内部错误


class ErrorCode(str, Enum):
    """标准错误码"""

    # 通用错误 (1xxx)
    UNKNOWN_ERROR = "E1000"
    INTERNAL_ERROR = "E1001"

    # 验证错误 (2xxx)
    VALIDATION_ERROR = "E2000"
    MISSING_FIELD = "E2001"
    INVALID_FORMAT = "E2002"
    VALUE_OUT_OF_RANGE = "E2005"
    TABLE_LENGTH_MISMATCH = "E2010"
    DUPLICATE_SYMBOL = "E2011"
    BAD_CONSTANT = "E2012"
    SIGNATURE_MISMATCH = "E2013"
    NOT_POINTED = "E2014"
    NOT_HOMOMORPHISM = "E2015"
    CODOMAIN_MISMATCH = "E2016"
    SPLIT_LAW_FAILED = "E2017"
    MALFORMED_WITNESS = "E2018"
    MALFORMED_TERM = "E2019"
    UNBOUND_VARIABLE = "E2020"
    NOT_RELATED = "E2021"
    BASE_MISMATCH = "E2022"

    # 资源错误 (5xxx)
    RESOURCE_NOT_FOUND = "E5000"
    FILE_NOT_FOUND = "E5001"
    DANGLING_REFERENCE = "E5004"
    DUPLICATE_NAME = "E5005"
    UNWRITABLE_PATH = "E5006"

    # 规模上限 (7xxx)
    FREE_ALGEBRA_TOO_LARGE = "E7000"
    CONGRUENCE_CAP_EXCEEDED = "E7001"


# 用户友好的错误消息
ERROR_MESSAGES = {
    ErrorCode.UNKNOWN_ERROR: "发生未知错误",
    ErrorCode.INTERNAL_ERROR: "内部错误",

    ErrorCode.VALIDATION_ERROR: "输入数据验证失败",
    ErrorCode.MISSING_FIELD: "缺少必填字段",
    ErrorCode.INVALID_FORMAT: "数据格式无效",
    ErrorCode.VALUE_OUT_OF_RANGE: "运算表中的元素超出载体范围",
    ErrorCode.TABLE_LENGTH_MISMATCH: "运算表长度与 n^arity 不符",
    ErrorCode.DUPLICATE_SYMBOL: "签名中存在重复的运算符号",
    ErrorCode.BAD_CONSTANT: "指定常量必须是 0 元运算",
    ErrorCode.SIGNATURE_MISMATCH: "两个代数的签名不一致",
    ErrorCode.NOT_POINTED: "签名不是点化的（需要恰好一个指定常量）",
    ErrorCode.NOT_HOMOMORPHISM: "映射不是同态",
    ErrorCode.CODOMAIN_MISMATCH: "两个同态的陪域不一致",
    ErrorCode.SPLIT_LAW_FAILED: "p∘s 不是恒等映射",
    ErrorCode.MALFORMED_WITNESS: "见证项格式不合法",
    ErrorCode.MALFORMED_TERM: "项格式不合法",
    ErrorCode.UNBOUND_VARIABLE: "项中存在未赋值的变量",
    ErrorCode.NOT_RELATED: "两个元素不在同一个同余类中",
    ErrorCode.BASE_MISMATCH: "两个点的底对象不一致",

    ErrorCode.RESOURCE_NOT_FOUND: "请求的资源不存在",
    ErrorCode.FILE_NOT_FOUND: "文件不存在",
    ErrorCode.DANGLING_REFERENCE: "引用了不存在的代数",
    ErrorCode.DUPLICATE_NAME: "名称重复",
    ErrorCode.UNWRITABLE_PATH: "无法写入输出路径",

    ErrorCode.FREE_ALGEBRA_TOO_LARGE: "自由代数超出大小上限",
    ErrorCode.CONGRUENCE_CAP_EXCEEDED: "代数过大，无法枚举全部同余",
}

# 所有错误在命令行中统一映射为退出码 2
ERROR_EXIT_CODE = 2


@dataclass
class AppError(Exception):
    """应用错误

    统一的错误类，包含错误码、消息和详情。

    用法:
        raise AppError(
            code=ErrorCode.VALUE_OUT_OF_RANGE,
            message="运算 meet 的第 3 项为 2，超出 0..1",
            details={"symbol": "meet", "position": 3},
        )
    """
    code: ErrorCode
    message: str = ""
    details: Optional[Dict[str, Any]] = None
    original_error: Optional[Exception] = None

    def __post_init__(self):
        if not self.message:
            self.message = ERROR_MESSAGES.get(self.code, "未知错误")
        super().__init__(self.message)

    @property
    def exit_code(self) -> int:
        """命令行退出码"""
        return ERROR_EXIT_CODE

    @property
    def category(self) -> ErrorCategory:
        """获取错误分类"""
        code_prefix = self.code.value[1]  # E2xxx -> 2
        category_map = {
            "1": ErrorCategory.INTERNAL,
            "2": ErrorCategory.VALIDATION,
            "5": ErrorCategory.RESOURCE,
            "7": ErrorCategory.LIMIT,
        }
        return category_map.get(code_prefix, ErrorCategory.INTERNAL)

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        result = {
            "error": True,
            "code": self.code.value,
            "message": self.message,
            "category": self.category.value,
        }
        if self.details:
            result["details"] = self.details
        return result


# 便捷异常类
class ValidationError(AppError):
    """验证错误"""
    def __init__(
        self,
        message: str,
        code: ErrorCode = ErrorCode.VALIDATION_ERROR,
        details: Optional[Dict[str, Any]] = None,
        **kwargs,
    ):
        super().__init__(code=code, message=message, details=details, **kwargs)


class NotFoundError(AppError):
    """资源不存在错误"""
    def __init__(
        self,
        resource: str,
        resource_id: Optional[str] = None,
        code: ErrorCode = ErrorCode.RESOURCE_NOT_FOUND,
        **kwargs,
    ):
        message = f"{resource}不存在"
        if resource_id:
            message = f"{resource} '{resource_id}' 不存在"
        super().__init__(
            code=code,
            message=message,
            details={"resource": resource, "id": resource_id},
            **kwargs,
        )


class LimitExceededError(AppError):
    """规模超限错误"""
    def __init__(
        self,
        limit: int,
        attempted: Any,
        code: ErrorCode = ErrorCode.FREE_ALGEBRA_TOO_LARGE,
        message: Optional[str] = None,
        **kwargs,
    ):
        super().__init__(
            code=code,
            message=message or f"{ERROR_MESSAGES[code]}（上限 {limit}，尝试规模 {attempted}）",
            details={"limit": limit, "attempted": attempted},
            **kwargs,
        )
