"""工具模块：错误、日志、计时、文件解析与报告"""
