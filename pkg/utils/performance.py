"""
性能计时工具：为报告提供毫秒计时，并记录慢检查。
"""
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, Optional

from config.settings import SLOW_CHECK_SECONDS
from utils.logger import get_logger

logger = get_logger("performance")


@dataclass
class Timer:
    """计时结果"""
    operation: str
    started: float = field(default_factory=time.perf_counter)
    elapsed: float = 0.0

    def stop(self) -> float:
        self.elapsed = time.perf_counter() - self.started
        return self.elapsed

    @property
    def ms(self) -> int:
        return int(round(self.elapsed * 1000))


@contextmanager
def monitor_performance(
    operation: str,
    metadata: Optional[Dict[str, Any]] = None,
    slow_threshold: float = SLOW_CHECK_SECONDS,
) -> Iterator[Timer]:
    """计时上下文管理器

    用法:
        with monitor_performance("check anticommutative") as timer:
            ...
        report.ms = timer.ms
    """
    timer = Timer(operation)
    try:
        yield timer
    finally:
        duration = timer.stop()
        logger.debug("检查耗时", operation=operation, seconds=round(duration, 4))
        if duration > slow_threshold:
            logger.warning(
                "检查较慢",
                operation=operation,
                seconds=round(duration, 2),
                metadata=metadata or {},
            )
