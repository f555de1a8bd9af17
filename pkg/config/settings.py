"""配置模块：管理检查上限、日志与报告设置"""
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


# ==================== 常量定义 ====================

TOOL_VERSION = "1.0.0"

# 自由代数载体的元素上限
DEFAULT_MAX_FREE_SIZE = 20000

# 枚举全部同余时允许的代数大小上限
DEFAULT_MAX_CON_SIZE = 12

# 簇采样
DEFAULT_SAMPLE_CAP = 64
DEFAULT_MAX_PULLBACK_SIZE = 64
DEFAULT_MAX_MEMBER_SIZE = 16

# 慢检查告警阈值（秒）
SLOW_CHECK_SECONDS = 30.0

ENV_PREFIX = "UAW_"


class Settings(BaseSettings):
    """全局配置

    所有字段都可以通过 ``UAW_`` 前缀的环境变量或 ``.env`` 文件覆盖，
    例如 ``UAW_MAX_FREE_SIZE=5000``。
    """

    model_config = SettingsConfigDict(
        env_prefix=ENV_PREFIX,
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    max_free_size: int = Field(default=DEFAULT_MAX_FREE_SIZE, ge=1)
    max_con_size: int = Field(default=DEFAULT_MAX_CON_SIZE, ge=1)
    sample_cap: int = Field(default=DEFAULT_SAMPLE_CAP, ge=1)
    max_pullback_size: int = Field(default=DEFAULT_MAX_PULLBACK_SIZE, ge=1)
    max_member_size: int = Field(default=DEFAULT_MAX_MEMBER_SIZE, ge=1)
    log_level: str = "WARNING"
    log_json: bool = False
    report_timing: bool = True

    def free_cap(self, override: Optional[int] = None) -> int:
        """返回自由代数上限（调用方显式传入时优先）"""
        return override if override is not None else self.max_free_size

    def con_cap(self, override: Optional[int] = None) -> int:
        """返回同余格枚举上限"""
        return override if override is not None else self.max_con_size


settings = Settings()
