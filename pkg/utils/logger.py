"""统一日志模块 - 基于 structlog 的键值结构化日志

日志一律写到 stderr，stdout 只留给检查报告。
"""
import logging
import sys
from typing import Optional, TextIO

import structlog

from config.settings import settings

_ROOT_NAME = "uaw"


def setup_logging(
    level: str = "WARNING",
    json_format: bool = False,
    stream: Optional[TextIO] = None,
) -> None:
    """配置 structlog

    Args:
        level: 日志级别名称，如 "DEBUG"、"INFO"
        json_format: 是否输出 JSON（适合日志收集）
        stream: 输出流，默认 stderr
    """
    level_no = logging.getLevelName(level.upper())
    if not isinstance(level_no, int):
        level_no = logging.WARNING

    renderer = (
        structlog.processors.JSONRenderer(sort_keys=True)
        if json_format
        else structlog.dev.ConsoleRenderer(colors=False)
    )

    structlog.configure(
        processors=[
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="%H:%M:%S"),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level_no),
        logger_factory=structlog.PrintLoggerFactory(file=stream or sys.stderr),
        cache_logger_on_first_use=False,
    )


# 根据配置初始化
setup_logging(level=settings.log_level, json_format=settings.log_json)


def get_logger(name: Optional[str] = None):
    """获取 logger 实例

    Args:
        name: 子模块名称，如 "congruences"

    Returns:
        带 module 字段的惰性 structlog logger；每次写日志时按当前配置解析，
        因此模块级 logger 也能感知之后的 setup_logging
    """
    module = f"{_ROOT_NAME}.{name}" if name else _ROOT_NAME
    return structlog.get_logger(module=module)
