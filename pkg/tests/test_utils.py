"""工具模块测试"""
import io
import json

import pytest

from core.verdicts import Verdict
from utils.errors import (
    ERROR_EXIT_CODE,
    AppError,
    ErrorCategory,
    ErrorCode,
    LimitExceededError,
    NotFoundError,
    ValidationError,
)
from utils.file_parser import (
    load_algebra,
    load_fixture_suite,
    parse_algebra_text,
    parse_hom_text,
    parse_point_text,
    parse_witness_text,
    read_text,
)
from utils.report import EXIT_FAILS, EXIT_HOLDS, Report, emit_report, input_refs, render_text, write_report


class TestAlgebraParser:
    """代数文件解析测试"""

    def test_parse_semilattice(self, sl2):
        """测试解析与 fixture 一致"""
        text = "algebra SL2\nsize 2\nconst 0 = 0\nop meet/2 = [0 0 0 1]   # 交\n"
        assert parse_algebra_text(text) == sl2

    def test_fixture_file(self, fixture_dir, z2):
        """测试仓库中的 Z2 文件"""
        algebra = load_algebra(fixture_dir / "z2.alg")
        assert algebra == z2
        assert algebra.name == "Z2"

    def test_commas_are_accepted(self, ps2):
        """测试数组也可以用逗号分隔"""
        assert parse_algebra_text("algebra PS2\nsize 2\nconst 0 = 0\n") == ps2
        algebra = parse_algebra_text("algebra A\nsize 2\nop f/1 = [1, 0]\n")
        assert algebra.apply("f", [0]) == 1

    @pytest.mark.parametrize("text, code", [
        ("size 2\n", ErrorCode.INVALID_FORMAT),
        ("algebra A\nop f/1 = [0 1]\n", ErrorCode.MISSING_FIELD),
        ("algebra A\nsize two\n", ErrorCode.INVALID_FORMAT),
        ("algebra A\nsize 2\nop f/1 = 0 1\n", ErrorCode.INVALID_FORMAT),
        ("algebra A\nsize 2\nop f/1 = [0 x]\n", ErrorCode.INVALID_FORMAT),
        ("algebra A\nsize 2\nop f/1 = [0 2]\n", ErrorCode.VALUE_OUT_OF_RANGE),
        ("algebra A\nsize 2\nconst a = 0\nconst b = 1\n", ErrorCode.INVALID_FORMAT),
        ("algebra A\nsize 2\nbogus\n", ErrorCode.INVALID_FORMAT),
    ])
    def test_malformed(self, text, code):
        """测试各类格式错误"""
        with pytest.raises(ValidationError) as exc:
            parse_algebra_text(text, source="bad.alg")
        assert exc.value.code == code
        assert exc.value.message.startswith("bad.alg")

    def test_missing_file(self, temp_dir):
        """测试文件不存在"""
        with pytest.raises(NotFoundError) as exc:
            read_text(temp_dir / "missing.alg")
        assert exc.value.code == ErrorCode.FILE_NOT_FOUND

    def test_gbk_fallback(self, temp_dir):
        """测试 GBK 编码的注释"""
        path = temp_dir / "gbk.alg"
        path.write_bytes("# 二元点集\nalgebra P\nsize 2\nconst 0 = 0\n".encode("gbk"))
        assert load_algebra(path).size == 2


class TestReferenceParsers:
    """同态、点与见证文件解析测试"""

    def test_hom(self, z2xz2, z2):
        """测试解析同态"""
        hom = parse_hom_text("hom sum : Z2xZ2 -> Z2 = [0 1 1 0]", {"Z2xZ2": z2xz2, "Z2": z2})
        assert hom.name == "sum"
        assert hom.image == (0, 1, 1, 0)

    def test_hom_dangling_reference(self, z2):
        """测试引用未知代数"""
        with pytest.raises(AppError) as exc:
            parse_hom_text("hom f : Z2 -> Q = [0 0]", {"Z2": z2})
        assert exc.value.code == ErrorCode.DANGLING_REFERENCE
        assert exc.value.details["reference"] == "Q"

    def test_hom_not_homomorphism(self, z2):
        """测试不保持运算的映射"""
        with pytest.raises(ValidationError) as exc:
            parse_hom_text("hom f : Z2 -> Z2 = [1 0]", {"Z2": z2})
        assert exc.value.code == ErrorCode.NOT_HOMOMORPHISM

    def test_point_missing_section(self, z2xz2, z2):
        """测试点文件缺少 s"""
        with pytest.raises(ValidationError) as exc:
            parse_point_text("point q : Z2xZ2 -> Z2\np = [0 1 1 0]\n", {"Z2xZ2": z2xz2, "Z2": z2})
        assert exc.value.code == ErrorCode.MISSING_FIELD
        assert exc.value.details["missing"] == ["s"]

    def test_witness(self, sl2):
        """测试解析反交换见证"""
        parsed = parse_witness_text(
            "witness w anticommutative\nu: x1\nv: 0\np: meet(x2, x1)\n", sl2.signature
        )
        assert parsed.kind == "anticommutative"
        assert parsed.witness.to_dict() == {
            "m": 1, "n": 1, "u": ["x1"], "v": ["0"], "p": ["meet(x2, x1)"],
        }

    def test_local_witness_rejects_u_lines(self, sl2):
        """测试局部见证中出现 u 行"""
        with pytest.raises(ValidationError) as exc:
            parse_witness_text("witness w local\nu: x1\np: x1\n", sl2.signature)
        assert exc.value.code == ErrorCode.MALFORMED_WITNESS

    def test_witness_unknown_symbol(self, z2):
        """测试见证中的项使用了签名外的符号"""
        with pytest.raises(ValidationError) as exc:
            parse_witness_text("witness w anticommutative\nu: x1\nv: 0\np: meet(x2, x1)\n", z2.signature)
        assert exc.value.code == ErrorCode.MALFORMED_WITNESS


class TestFixtureSuite:
    """夹具套件加载测试"""

    def test_repository_fixtures(self, fixture_dir):
        """测试仓库夹具全部可以加载并交叉链接"""
        suite = load_fixture_suite(fixture_dir)
        summary = suite.summary()
        assert "SL2" in summary["algebras"]
        assert set(summary["homs"]) >= {"sum", "pi1", "id_sl2", "id_z2", "zero_z2"}
        assert set(summary["groupoids"]) == {"eqrel", "z2_onecell", "z3_broken"}
        assert suite.homs["sum"].cod is suite.algebras["Z2"]
        assert suite.source_of("algebra", "SL2") == fixture_dir / "sl2.alg"

    def test_algebras_only(self, fixture_dir):
        """测试只加载代数"""
        suite = load_fixture_suite(fixture_dir, algebras_only=True)
        assert suite.algebras
        assert not suite.homs and not suite.points and not suite.groupoids

    def test_empty_directory(self, temp_dir):
        """测试空目录"""
        assert load_fixture_suite(temp_dir).summary() == {
            "algebras": [], "homs": [], "points": [], "groupoids": [],
        }

    def test_missing_directory(self, temp_dir):
        """测试目录不存在"""
        with pytest.raises(NotFoundError):
            load_fixture_suite(temp_dir / "nope")

    def test_duplicate_name(self, temp_dir):
        """测试两个文件声明同名代数"""
        for stem in ("a", "b"):
            (temp_dir / f"{stem}.alg").write_text("algebra SAME\nsize 1\n", encoding="utf-8")
        with pytest.raises(AppError) as exc:
            load_fixture_suite(temp_dir)
        assert exc.value.code == ErrorCode.DUPLICATE_NAME
        assert exc.value.details["file"].endswith("b.alg")

    def test_dangling_reference(self, temp_dir):
        """测试同态引用不存在的代数"""
        (temp_dir / "a.alg").write_text("algebra A\nsize 1\n", encoding="utf-8")
        (temp_dir / "f.hom").write_text("hom f : A -> B = [0]\n", encoding="utf-8")
        with pytest.raises(AppError) as exc:
            load_fixture_suite(temp_dir)
        assert exc.value.code == ErrorCode.DANGLING_REFERENCE


class TestReport:
    """报告模型与渲染测试"""

    def test_from_verdict(self):
        """测试由检查结果构造报告"""
        report = Report.from_verdict("check x", [], Verdict(holds=True, witness={"term": "x1"}))
        assert report.exit_code == EXIT_HOLDS
        data = json.loads(report.to_json())
        assert data["verdict"] == "holds"
        assert "counterexample" not in data
        assert data["witness"] == {"term": "x1"}

    def test_failure_and_error_exit_codes(self):
        """测试退出码"""
        assert Report.from_verdict("c", [], Verdict(holds=False)).exit_code == EXIT_FAILS
        error = Report.from_error("c", [], ValidationError("坏输入"))
        assert error.exit_code == ERROR_EXIT_CODE
        assert error.error["code"] == ErrorCode.VALIDATION_ERROR.value

    def test_render_text(self):
        """测试文本渲染"""
        report = Report.from_verdict(
            "check ddcc", [], Verdict(holds=False, counterexample={"pair": [[1, 0], [1, 1]]}, note="n")
        )
        text = render_text(report)
        lines = text.splitlines()
        assert lines[0] == "FAILS check ddcc"
        assert "  note: n" in lines
        assert "    pair: [[1, 0], [1, 1]]" in lines

    def test_render_error(self):
        """测试错误报告的文本渲染"""
        text = render_text(Report.from_error("suite", [], NotFoundError("目录", "x")))
        assert text.splitlines()[0] == "ERROR suite"
        assert ErrorCode.RESOURCE_NOT_FOUND.value in text

    def test_input_refs(self, fixture_dir, temp_dir):
        """测试输入去重并跳过不存在的文件"""
        path = fixture_dir / "sl2.alg"
        refs = input_refs([path, path, temp_dir / "missing.alg"])
        assert len(refs) == 1
        assert refs[0].file == str(path)
        assert len(refs[0].hash) == 64

    def test_write_report(self, temp_dir):
        """测试写入与重新读取"""
        report = Report.from_verdict("check x", [], Verdict(holds=True))
        output = emit_report(report, as_json=False, out=temp_dir / "r.json")
        assert output.startswith("HOLDS check x")
        assert json.loads((temp_dir / "r.json").read_text(encoding="utf-8"))["holds"] is True

    def test_write_report_to_directory(self, temp_dir):
        """测试目标路径是目录"""
        with pytest.raises(AppError) as exc:
            write_report(Report.from_verdict("c", [], Verdict(holds=True)), temp_dir)
        assert exc.value.code == ErrorCode.UNWRITABLE_PATH


    @pytest.mark.parametrize("name", ["sl2", "z2"])
    def test_json_round_trip(self, request, name, fixture_dir):
        """测试报告 JSON 读回后再写出逐字节相同"""
        from core.commutation import decide_anticommutative

        verdict = decide_anticommutative([request.getfixturevalue(name)])
        inputs = input_refs([fixture_dir / f"{name}.alg"])
        report = Report.from_verdict("check anticommutative", inputs, verdict)
        restored = Report.model_validate_json(report.to_json())
        assert restored.to_json() == report.to_json()
        assert restored.holds is verdict.holds
        assert restored.inputs == report.inputs


class TestErrors:
    """错误类型测试"""

    def test_default_message(self):
        """测试默认消息来自错误码"""
        error = AppError(ErrorCode.NOT_POINTED)
        assert error.message
        assert error.category == ErrorCategory.VALIDATION
        assert error.exit_code == ERROR_EXIT_CODE

    def test_limit_exceeded(self):
        """测试超限错误的详情"""
        error = LimitExceededError(limit=10, attempted=16)
        assert error.details == {"limit": 10, "attempted": 16}
        assert error.to_dict()["category"] == ErrorCategory.LIMIT.value
        assert "10" in error.message

    def test_not_found(self):
        """测试资源不存在"""
        error = NotFoundError("文件", "a.alg")
        assert error.to_dict()["details"] == {"resource": "文件", "id": "a.alg"}


class TestSettings:
    """配置测试"""

    def test_environment_override(self, monkeypatch):
        """测试环境变量覆盖默认值"""
        from config.settings import Settings

        monkeypatch.setenv("UAW_MAX_FREE_SIZE", "123")
        monkeypatch.setenv("UAW_REPORT_TIMING", "false")
        configured = Settings()
        assert configured.max_free_size == 123
        assert configured.report_timing is False
        assert configured.free_cap() == 123
        assert configured.free_cap(7) == 7

    def test_rejects_non_positive(self, monkeypatch):
        """测试上限必须为正"""
        from pydantic import ValidationError as SettingsError

        from config.settings import Settings

        monkeypatch.setenv("UAW_MAX_CON_SIZE", "0")
        with pytest.raises(SettingsError):
            Settings()


class TestLogging:
    """日志测试"""

    def test_json_logging(self):
        """测试 JSON 日志写到指定流"""
        from utils.logger import get_logger, setup_logging

        stream = io.StringIO()
        setup_logging(level="INFO", json_format=True, stream=stream)
        try:
            get_logger("test").info("同余已生成", classes=2)
            record = json.loads(stream.getvalue().strip())
            assert record["event"] == "同余已生成"
            assert record["classes"] == 2
            assert record["level"] == "info"
        finally:
            setup_logging()

    def test_level_filtering(self):
        """测试低于级别的日志被过滤"""
        from utils.logger import get_logger, setup_logging

        stream = io.StringIO()
        setup_logging(level="WARNING", stream=stream)
        try:
            get_logger("test").debug("不应出现")
            assert stream.getvalue() == ""
        finally:
            setup_logging()


    def test_module_logger_follows_reconfiguration(self, sl2xsl2):
        """测试导入时创建的模块 logger 在重新配置后写到新的流"""
        from core.congruences import principal
        from utils.logger import setup_logging

        stream = io.StringIO()
        setup_logging(level="DEBUG", json_format=True, stream=stream)
        try:
            principal(sl2xsl2, 2, 1)
            records = [json.loads(line) for line in stream.getvalue().splitlines()]
            assert any(
                r["module"] == "uaw.congruences" and r["event"] == "同余生成完成" for r in records
            )
        finally:
            setup_logging()


class TestPerformance:
    """计时测试"""

    def test_monitor_performance(self):
        """测试计时上下文"""
        from utils.performance import monitor_performance

        with monitor_performance("check x") as timer:
            sum(range(1000))
        assert timer.elapsed >= 0
        assert timer.ms >= 0
