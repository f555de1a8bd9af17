"""命令行入口：uaw

用法:
    uaw check anticommutative fixtures/sl2.alg --json
    uaw check ddcc fixtures/z2.alg fixtures/z2.alg
    uaw commute fixtures/pi1.hom fixtures/sum.hom
    uaw terms majority fixtures/maj2.alg
    uaw verify witness fixtures/sl2_hand.wit fixtures/sl2.alg
    uaw verify groupoid fixtures/eqrel.gpd
    uaw suite fixtures

退出码：0 性质成立，1 性质不成立（附反例），2 用法、解析或上限错误。
命令行只负责读文件、调用库函数与输出报告，判定逻辑全部在 core 中。
"""
import functools
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Sequence

# 添加项目根目录到 Python 路径
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import click
from rich.console import Console
from rich.text import Text

from config.settings import TOOL_VERSION, settings
from core.algebra import FiniteAlgebra, Homomorphism
from core.commutation import (
    are_disjoint,
    check_product_coequalizer,
    decide_anticommutative,
    find_cooperator,
    verify_anticommutativity_witness,
)
from core.free_algebras import (
    has_absorbing_idempotent_term,
    has_jonsson_tarski_term,
    has_majority_term,
)
from core.lemmas import (
    ddcc_on_product,
    decide_locally_anticommutative,
    shifting_lemma_holds,
    shifting_on_pullback,
    triangular_lemma_holds,
    triangular_on_pullback,
    verify_local_witness,
)
from core.points import GroupoidData, SplitPoint, check_point_anticommutativity, verify_internal_groupoid
from core.terms import format_term
from core.verdicts import Verdict
from utils.errors import AppError, ErrorCode
from utils.file_parser import (
    FixtureSuite,
    load_algebra,
    load_fixture_suite,
    parse_groupoid_text,
    parse_hom_text,
    parse_point_text,
    parse_witness_text,
    read_text,
)
from utils.logger import get_logger, setup_logging
from utils.performance import monitor_performance
from utils.report import Report, emit_report, input_refs

logger = get_logger("cli")

# ==================== 常量定义 ====================

VERDICT_STYLES = {"HOLDS": "bold green", "FAILS": "bold yellow", "ERROR": "bold red"}

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]

# 项搜索：名称 -> (搜索函数, 自由代数的生成元个数)
TERM_SEARCHES = {
    "majority": (has_majority_term, 3),
    "jt": (has_jonsson_tarski_term, 2),
    "absorbing": (has_absorbing_idempotent_term, 2),
}


# ==================== 运行上下文 ====================

@dataclass
class RunContext:
    """一次命令执行：选项、已读取的输入文件"""
    command: str
    as_json: bool = False
    max_free_size: Optional[int] = None
    max_con_size: Optional[int] = None
    out: Optional[str] = None
    no_timing: bool = False
    inputs: List[Path] = field(default_factory=list)

    def use(self, path: str) -> Path:
        resolved = Path(path)
        self.inputs.append(resolved)
        return resolved

    def load_algebras(self, paths: Sequence[str]) -> List[FiniteAlgebra]:
        return [load_algebra(self.use(path)) for path in paths]

    def _neighbours(self, path: Path) -> FixtureSuite:
        """同目录下的代数，用于解析同态、点与群胚文件中的名称引用"""
        return load_fixture_suite(path.parent, algebras_only=True)

    def _use_algebras(self, suite: FixtureSuite, names: Sequence[str]) -> None:
        for name in names:
            source = suite.source_of("algebra", name)
            if source is not None:
                self.inputs.append(source)

    def load_hom(self, path: str) -> Homomorphism:
        file_path = self.use(path)
        text = read_text(file_path)
        suite = self._neighbours(file_path)
        hom = parse_hom_text(text, suite.algebras, str(file_path))
        self._use_algebras(suite, [hom.dom.name, hom.cod.name])
        return hom

    def load_point(self, path: str) -> SplitPoint:
        file_path = self.use(path)
        text = read_text(file_path)
        suite = self._neighbours(file_path)
        point = parse_point_text(text, suite.algebras, str(file_path))
        self._use_algebras(suite, [point.algebra.name, point.base.name])
        return point

    def load_groupoid(self, path: str) -> GroupoidData:
        file_path = self.use(path)
        text = read_text(file_path)
        suite = self._neighbours(file_path)
        groupoid = parse_groupoid_text(text, suite.algebras, str(file_path))
        self._use_algebras(suite, [groupoid.c0.name, groupoid.c1.name, groupoid.c2.name])
        return groupoid


# ==================== 输出 ====================

def _print_text(text: str, stderr: bool = False) -> None:
    console = Console(highlight=False, soft_wrap=True, stderr=stderr)
    head, _, rest = text.partition("\n")
    line = Text(head)
    prefix = head.split(" ", 1)[0]
    if prefix in VERDICT_STYLES:
        line.stylize(VERDICT_STYLES[prefix], 0, len(prefix))
    console.print(line)
    if rest:
        console.print(Text(rest))


def _emit(run: RunContext, report: Report) -> None:
    try:
        text = emit_report(report, run.as_json, run.out)
    except AppError as e:
        report = Report.from_error(run.command, report.inputs, e, ms=report.ms)
        text = emit_report(report, run.as_json)

    if report.error:
        logger.warning("命令出错", command=run.command, code=report.error.get("code"))
    if run.as_json:
        click.echo(text)
    else:
        _print_text(text, stderr=report.error is not None)
    click.get_current_context().exit(report.exit_code)


def execute(run: RunContext, compute: Callable[[RunContext], Verdict]) -> None:
    """执行检查、计时、生成报告并以对应退出码结束"""
    logger.info("执行命令", command=run.command)
    verdict: Optional[Verdict] = None
    error: Optional[AppError] = None
    with monitor_performance(run.command) as timer:
        try:
            verdict = compute(run)
        except AppError as e:
            error = e
        except Exception as e:
            logger.exception("命令执行异常", command=run.command)
            error = AppError(ErrorCode.INTERNAL_ERROR, f"内部错误：{e}", original_error=e)

    ms = timer.ms if settings.report_timing and not run.no_timing else 0
    inputs = input_refs(run.inputs)
    if error is not None:
        report = Report.from_error(run.command, inputs, error, ms=ms)
    else:
        report = Report.from_verdict(run.command, inputs, verdict, ms=ms)
    _emit(run, report)


def report_options(command: str):
    """为检查命令加上公共选项（--json、上限、--out、--no-timing）并接入 execute"""

    def decorator(func: Callable[..., Verdict]):
        @click.option("--json", "as_json", is_flag=True, help="输出 JSON 报告")
        @click.option("--max-free-size", type=click.IntRange(min=1), help="自由代数元素上限")
        @click.option("--max-con-size", type=click.IntRange(min=1), help="同余格枚举的代数大小上限")
        @click.option("--out", type=click.Path(dir_okay=False), help="另外把 JSON 报告写到该文件")
        @click.option("--no-timing", is_flag=True, help="报告中的 ms 固定为 0")
        @functools.wraps(func)
        def wrapper(as_json, max_free_size, max_con_size, out, no_timing, **kwargs):
            run = RunContext(
                command=command,
                as_json=as_json,
                max_free_size=max_free_size,
                max_con_size=max_con_size,
                out=out,
                no_timing=no_timing,
            )
            execute(run, lambda r: func(r, **kwargs))

        return wrapper

    return decorator


# ==================== 命令 ====================

@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(TOOL_VERSION, prog_name="uaw")
@click.option(
    "--log-level",
    type=click.Choice(LOG_LEVELS, case_sensitive=False),
    help="日志级别（默认取 UAW_LOG_LEVEL）",
)
@click.option("--log-json", is_flag=True, help="日志输出为 JSON")
def app(log_level: Optional[str], log_json: bool):
    """有限泛代数工作台：反交换性判定、见证校验与相关检查"""
    if log_level or log_json:
        setup_logging(level=log_level or settings.log_level, json_format=log_json or settings.log_json)


@app.group()
def check():
    """判定簇或单个代数、同态、点上的性质"""


@check.command("anticommutative")
@click.argument("algebras", nargs=-1, required=True)
@report_options("check anticommutative")
def check_anticommutative(run: RunContext, algebras) -> Verdict:
    """ALGEBRAS 生成的点化簇是否反交换"""
    return decide_anticommutative(run.load_algebras(algebras), max_size=run.max_free_size)


@check.command("locally-anticommutative")
@click.argument("algebras", nargs=-1, required=True)
@report_options("check locally-anticommutative")
def check_locally_anticommutative(run: RunContext, algebras) -> Verdict:
    """ALGEBRAS 生成的簇是否局部反交换"""
    return decide_locally_anticommutative(run.load_algebras(algebras), max_size=run.max_free_size)


@check.command("triangular")
@click.argument("algebra")
@report_options("check triangular")
def check_triangular(run: RunContext, algebra) -> Verdict:
    """三角引理在 ALGEBRA 的同余格上是否成立"""
    (target,) = run.load_algebras([algebra])
    return triangular_lemma_holds(target, max_size=run.max_con_size)


@check.command("shifting")
@click.argument("algebra")
@report_options("check shifting")
def check_shifting(run: RunContext, algebra) -> Verdict:
    """平移引理在 ALGEBRA 的同余格上是否成立"""
    (target,) = run.load_algebras([algebra])
    return shifting_lemma_holds(target, max_size=run.max_con_size)


@check.command("ddcc")
@click.argument("first")
@click.argument("second")
@report_options("check ddcc")
def check_ddcc(run: RunContext, first, second) -> Verdict:
    """FIRST×SECOND 上的 DDCC 条件"""
    a, b = run.load_algebras([first, second])
    return ddcc_on_product(a, b)


@check.command("pullback-triangular")
@click.argument("first")
@click.argument("second")
@report_options("check pullback-triangular")
def check_pullback_triangular(run: RunContext, first, second) -> Verdict:
    """两个同态的拉回上三角引理是否成立"""
    return triangular_on_pullback(run.load_hom(first), run.load_hom(second))


@check.command("pullback-shifting")
@click.argument("first")
@click.argument("second")
@report_options("check pullback-shifting")
def check_pullback_shifting(run: RunContext, first, second) -> Verdict:
    """两个同态的拉回上平移引理是否成立"""
    return shifting_on_pullback(run.load_hom(first), run.load_hom(second))


@check.command("point")
@click.argument("point")
@report_options("check point")
def check_point(run: RunContext, point) -> Verdict:
    """分裂点是否满足局部余等化子判据"""
    return check_point_anticommutativity(run.load_point(point))


@check.command("coequalizer")
@click.argument("algebra")
@report_options("check coequalizer")
def check_coequalizer(run: RunContext, algebra) -> Verdict:
    """ALGEBRA×ALGEBRA 上的余等化子判据"""
    (target,) = run.load_algebras([algebra])
    return check_product_coequalizer(target)


@app.command("commute")
@click.argument("first")
@click.argument("second")
@report_options("commute")
def commute(run: RunContext, first, second) -> Verdict:
    """两个同态是否 Huq 交换；同时报告它们是否不交"""
    f, g = run.load_hom(first), run.load_hom(second)
    disjoint = are_disjoint(f, g)
    extra = {"disjoint": disjoint.holds}
    if not disjoint.holds:
        extra["overlap"] = disjoint.counterexample
    cooperator = find_cooperator(f, g)
    if cooperator is None:
        return Verdict(
            holds=False,
            counterexample={"f": f.describe(), "g": g.describe()},
            note="不存在协作子",
            extra=extra,
        )
    return Verdict(holds=True, witness=cooperator.to_dict(), extra=extra)


@app.command("terms")
@click.argument("kind", type=click.Choice(sorted(TERM_SEARCHES)))
@click.argument("algebras", nargs=-1, required=True)
@report_options("terms")
def terms(run: RunContext, kind, algebras) -> Verdict:
    """在自由代数中搜索多数项（majority）、JT 项（jt）或吸收幂等项（absorbing）"""
    run.command = f"terms {kind}"
    search, arity = TERM_SEARCHES[kind]
    basis = run.load_algebras(algebras)
    term = search(basis, max_size=run.max_free_size)
    if term is None:
        return Verdict(
            holds=False,
            counterexample={"basis": [a.name for a in basis], "generators": arity},
            note="自由代数中没有满足方程的项",
        )
    return Verdict(holds=True, witness={"term": format_term(term)})


@app.group()
def verify():
    """校验用户给出的见证或群胚数据"""


@verify.command("witness")
@click.argument("witness")
@click.argument("algebras", nargs=-1, required=True)
@click.option(
    "--mode",
    type=click.Choice(["local", "ddcc"]),
    default="local",
    show_default=True,
    help="局部见证的校验模式；ddcc 省略对角线族",
)
@report_options("verify witness")
def verify_witness(run: RunContext, witness, algebras, mode) -> Verdict:
    """在 ALGEBRAS 的每个元素上校验 WITNESS 文件中的项"""
    witness_path = run.use(witness)
    basis = run.load_algebras(algebras)
    parsed = parse_witness_text(read_text(witness_path), basis[0].signature, str(witness_path))
    if parsed.kind == "anticommutative":
        return verify_anticommutativity_witness(parsed.witness, basis)
    return verify_local_witness(parsed.witness, basis, mode=mode)


@verify.command("groupoid")
@click.argument("groupoid")
@report_options("verify groupoid")
def verify_groupoid(run: RunContext, groupoid) -> Verdict:
    """检查内部群胚公理，并报告 (d1,d2) 是否单射"""
    return verify_internal_groupoid(run.load_groupoid(groupoid))


@app.command("suite")
@click.argument("directory")
@report_options("suite")
def suite(run: RunContext, directory) -> Verdict:
    """加载目录中的夹具并列出名称"""
    fixtures = load_fixture_suite(directory)
    run.inputs.extend(fixtures.sources.values())
    return Verdict(holds=True, extra=fixtures.summary())


if __name__ == "__main__":
    app()
