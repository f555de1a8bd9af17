"""配置模块"""
from config.settings import TOOL_VERSION, Settings, settings

__all__ = ["TOOL_VERSION", "Settings", "settings"]
