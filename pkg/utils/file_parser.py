"""文件解析工具：代数、同态、点、见证与群胚的文本格式

所有格式都是逐行的，``#`` 之后为注释，空行忽略。

代数（.alg）::

    algebra SL2
    size 2
    const 0 = 0
    op meet/2 = [0 0 0 1]

同态（.hom）::

    hom sum : Z2xZ2 -> Z2 = [0 1 1 0]

点（.point）::

    point sum_point : Z2xZ2 -> Z2
    p = [0 1 1 0]
    s = [0 2]

见证（.wit）::

    witness sl2_hand anticommutative
    u: x1
    v: 0
    p: meet(x2, x1)

群胚（.gpd）::

    groupoid eqrel
    C0 = set2
    C1 = set4
    C2 = set8
    d1 = [0 0 1 1]
    ...
"""
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Mapping, Optional, Tuple, Union

from core.algebra import FiniteAlgebra, Homomorphism, Signature, make_hom, validate_algebra
from core.points import GroupoidData, SplitPoint, validate_point
from core.witnesses import LocalWitness, MaltsevWitness, parse_witness_terms
from utils.errors import AppError, ErrorCode, NotFoundError, ValidationError
from utils.logger import get_logger

logger = get_logger("file_parser")

# ==================== 常量定义 ====================

# 文件大小限制
MAX_FILE_SIZE = 1 * 1024 * 1024  # 1 MB

# 依次尝试的编码
ENCODINGS = ["utf-8", "gbk"]

ALGEBRA_SUFFIX = ".alg"
HOM_SUFFIX = ".hom"
POINT_SUFFIX = ".point"
GROUPOID_SUFFIX = ".gpd"
WITNESS_SUFFIX = ".wit"

GROUPOID_ALGEBRAS = ("C0", "C1", "C2")
GROUPOID_MAPS = ("d1", "d2", "s", "p1", "p2", "m", "sigma")

_NAME = r"[A-Za-z0-9_.\-]+"
_ALGEBRA_HEADER = re.compile(rf"algebra\s+({_NAME})")
_SIZE_LINE = re.compile(r"size\s+(\S+)")
_CONST_LINE = re.compile(rf"const\s+({_NAME})\s*=\s*(\S+)")
_OP_LINE = re.compile(rf"op\s+({_NAME})\s*/\s*(\d+)\s*=\s*(.+)")
_HOM_LINE = re.compile(rf"hom\s+({_NAME})\s*:\s*({_NAME})\s*->\s*({_NAME})\s*=\s*(.+)")
_POINT_HEADER = re.compile(rf"point\s+({_NAME})\s*:\s*({_NAME})\s*->\s*({_NAME})")
_ASSIGN_LINE = re.compile(rf"({_NAME})\s*=\s*(.+)")
_WITNESS_HEADER = re.compile(rf"witness\s+({_NAME})\s+(anticommutative|local)")
_WITNESS_LINE = re.compile(r"([a-z])\s*:\s*(.+)")
_GROUPOID_HEADER = re.compile(rf"groupoid\s+({_NAME})")

PathLike = Union[str, Path]


# ==================== 读取 ====================

def read_text(file_path: PathLike) -> str:
    """读取文本文件

    Raises:
        NotFoundError: 文件不存在
        ValidationError: 文件过大或编码无法识别
    """
    path = Path(file_path)
    if not path.is_file():
        raise NotFoundError("文件", str(path), code=ErrorCode.FILE_NOT_FOUND)
    if path.stat().st_size > MAX_FILE_SIZE:
        raise ValidationError(
            f"文件过大，最大支持 {MAX_FILE_SIZE // 1024} KB",
            code=ErrorCode.VALUE_OUT_OF_RANGE,
            details={"file": str(path)},
        )
    raw = path.read_bytes()
    for encoding in ENCODINGS:
        try:
            return raw.decode(encoding)
        except UnicodeDecodeError:
            continue
    raise ValidationError("无法识别文件编码", code=ErrorCode.INVALID_FORMAT, details={"file": str(path)})


def _lines(text: str) -> Iterator[Tuple[int, str]]:
    for lineno, line in enumerate(text.splitlines(), 1):
        content = line.split("#", 1)[0].strip()
        if content:
            yield lineno, content


def _format_error(source: str, lineno: int, message: str) -> ValidationError:
    return ValidationError(
        f"{source}:{lineno}: {message}",
        code=ErrorCode.INVALID_FORMAT,
        details={"file": source, "line": lineno},
    )


def _parse_array(text: str, source: str, lineno: int) -> List[int]:
    """解析 ``[0 1 1 0]``（也接受逗号分隔）"""
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise _format_error(source, lineno, f"应为方括号数组，实际为 '{text}'")
    items = text[1:-1].replace(",", " ").split()
    try:
        return [int(item) for item in items]
    except ValueError:
        raise _format_error(source, lineno, f"数组中含有非整数项：'{text}'")


def _lookup(algebras: Mapping[str, FiniteAlgebra], name: str, source: str) -> FiniteAlgebra:
    if name not in algebras:
        raise AppError(
            ErrorCode.DANGLING_REFERENCE,
            f"{source} 引用了未知的代数 '{name}'",
            details={"file": source, "reference": name},
        )
    return algebras[name]


# ==================== 代数与同态 ====================

def parse_algebra_text(text: str, source: str = "<string>") -> FiniteAlgebra:
    """解析 .alg 文本；符号顺序即文件中的出现顺序

    Raises:
        ValidationError: 格式错误或代数不合法
    """
    name: Optional[str] = None
    size = None
    ops: List[Dict] = []
    designated: Optional[str] = None
    for lineno, line in _lines(text):
        if name is None:
            match = _ALGEBRA_HEADER.fullmatch(line)
            if not match:
                raise _format_error(source, lineno, "第一行应为 'algebra <name>'")
            name = match.group(1)
            continue
        if match := _SIZE_LINE.fullmatch(line):
            try:
                size = int(match.group(1))
            except ValueError:
                raise _format_error(source, lineno, f"大小 '{match.group(1)}' 不是整数")
        elif match := _CONST_LINE.fullmatch(line):
            if designated is not None:
                raise _format_error(source, lineno, "只能用 const 指定一个常量")
            designated = match.group(1)
            try:
                value = int(match.group(2))
            except ValueError:
                raise _format_error(source, lineno, f"常量取值 '{match.group(2)}' 不是整数")
            ops.append({"name": designated, "arity": 0, "table": [value]})
        elif match := _OP_LINE.fullmatch(line):
            ops.append({
                "name": match.group(1),
                "arity": int(match.group(2)),
                "table": _parse_array(match.group(3), source, lineno),
            })
        else:
            raise _format_error(source, lineno, f"无法识别的行 '{line}'")
    if name is None:
        raise ValidationError(f"{source}: 缺少 'algebra <name>' 行", code=ErrorCode.MISSING_FIELD)
    if size is None:
        raise ValidationError(f"{source}: 缺少 'size <n>' 行", code=ErrorCode.MISSING_FIELD)
    try:
        return validate_algebra({"name": name, "size": size, "ops": ops, "designated": designated})
    except ValidationError as e:
        e.message = f"{source}: {e.message}"
        e.details = {**(e.details or {}), "file": source}
        raise


def parse_hom_text(
    text: str, algebras: Mapping[str, FiniteAlgebra], source: str = "<string>"
) -> Homomorphism:
    """解析 .hom 文本并检查同态方程

    Raises:
        AppError: 引用未知代数（DANGLING_REFERENCE）
        ValidationError: 格式错误或映射不是同态
    """
    lines = list(_lines(text))
    if len(lines) != 1:
        raise ValidationError(f"{source}: 同态文件应只有一行", code=ErrorCode.INVALID_FORMAT)
    lineno, line = lines[0]
    match = _HOM_LINE.fullmatch(line)
    if not match:
        raise _format_error(source, lineno, "应为 'hom <name> : <A> -> <B> = [...]'")
    name, dom_name, cod_name, image = match.groups()
    dom = _lookup(algebras, dom_name, source)
    cod = _lookup(algebras, cod_name, source)
    return make_hom(dom, cod, _parse_array(image, source, lineno), name=name)


# ==================== 点、见证与群胚 ====================

def _assignments(lines: List[Tuple[int, str]], source: str) -> Dict[str, Tuple[int, str]]:
    values: Dict[str, Tuple[int, str]] = {}
    for lineno, line in lines:
        match = _ASSIGN_LINE.fullmatch(line)
        if not match:
            raise _format_error(source, lineno, f"应为 '<key> = <value>'，实际为 '{line}'")
        key, value = match.groups()
        if key in values:
            raise _format_error(source, lineno, f"键 {key} 重复")
        values[key] = (lineno, value.strip())
    return values


def _require_keys(values: Mapping[str, Tuple[int, str]], keys: Tuple[str, ...], source: str) -> None:
    missing = [key for key in keys if key not in values]
    if missing:
        raise ValidationError(
            f"{source}: 缺少 {', '.join(missing)}",
            code=ErrorCode.MISSING_FIELD,
            details={"file": source, "missing": missing},
        )


def parse_point_text(
    text: str, algebras: Mapping[str, FiniteAlgebra], source: str = "<string>"
) -> SplitPoint:
    """解析 .point 文本并检查分裂律"""
    lines = list(_lines(text))
    if not lines:
        raise ValidationError(f"{source}: 空文件", code=ErrorCode.MISSING_FIELD)
    lineno, header = lines[0]
    match = _POINT_HEADER.fullmatch(header)
    if not match:
        raise _format_error(source, lineno, "第一行应为 'point <name> : <A> -> <X>'")
    name, total_name, base_name = match.groups()
    total = _lookup(algebras, total_name, source)
    base = _lookup(algebras, base_name, source)
    values = _assignments(lines[1:], source)
    _require_keys(values, ("p", "s"), source)
    p = Homomorphism(total, base, tuple(_parse_array(values["p"][1], source, values["p"][0])), name="p")
    s = Homomorphism(base, total, tuple(_parse_array(values["s"][1], source, values["s"][0])), name="s")
    return validate_point(p, s, name=name)


@dataclass(frozen=True)
class WitnessFile:
    """见证文件：种类为 anticommutative 或 local"""
    name: str
    kind: str
    witness: Union[MaltsevWitness, LocalWitness]


def parse_witness_text(text: str, signature: Signature, source: str = "<string>") -> WitnessFile:
    """解析 .wit 文本；项按签名解析

    Raises:
        ValidationError: 格式错误或项不合法（MALFORMED_WITNESS）
    """
    lines = list(_lines(text))
    if not lines:
        raise ValidationError(f"{source}: 空文件", code=ErrorCode.MALFORMED_WITNESS)
    lineno, header = lines[0]
    match = _WITNESS_HEADER.fullmatch(header)
    if not match:
        raise _format_error(source, lineno, "第一行应为 'witness <name> anticommutative|local'")
    name, kind = match.groups()
    allowed = ("u", "v", "p") if kind == "anticommutative" else ("b", "c", "p")
    terms: Dict[str, List[str]] = {key: [] for key in allowed}
    for lineno, line in lines[1:]:
        match = _WITNESS_LINE.fullmatch(line)
        if not match or match.group(1) not in allowed:
            raise ValidationError(
                f"{source}:{lineno}: {kind} 见证只允许 {'/'.join(allowed)} 行",
                code=ErrorCode.MALFORMED_WITNESS,
                details={"file": source, "line": lineno},
            )
        terms[match.group(1)].append(match.group(2))
    first, second, p = (parse_witness_terms(terms[key], signature) for key in allowed)
    if kind == "anticommutative":
        return WitnessFile(name, kind, MaltsevWitness(u=first, v=second, p=p))
    return WitnessFile(name, kind, LocalWitness(b=first, c=second, p=p))


def parse_groupoid_text(
    text: str, algebras: Mapping[str, FiniteAlgebra], source: str = "<string>"
) -> GroupoidData:
    """解析 .gpd 文本；结构映射只构造不检查，检查交给 verify_internal_groupoid"""
    lines = list(_lines(text))
    if not lines:
        raise ValidationError(f"{source}: 空文件", code=ErrorCode.MISSING_FIELD)
    lineno, header = lines[0]
    match = _GROUPOID_HEADER.fullmatch(header)
    if not match:
        raise _format_error(source, lineno, "第一行应为 'groupoid <name>'")
    values = _assignments(lines[1:], source)
    _require_keys(values, GROUPOID_ALGEBRAS + GROUPOID_MAPS, source)
    c0, c1, c2 = (_lookup(algebras, values[key][1], source) for key in GROUPOID_ALGEBRAS)
    shapes = {
        "d1": (c1, c0), "d2": (c1, c0), "s": (c0, c1),
        "p1": (c2, c1), "p2": (c2, c1), "m": (c2, c1), "sigma": (c1, c1),
    }
    maps = {}
    for key in GROUPOID_MAPS:
        lineno, raw = values[key]
        dom, cod = shapes[key]
        image = _parse_array(raw, source, lineno)
        if len(image) != dom.size or any(not 0 <= v < cod.size for v in image):
            raise ValidationError(
                f"{source}:{lineno}: 映射 {key} 应为 {dom.name} -> {cod.name} 的像数组",
                code=ErrorCode.TABLE_LENGTH_MISMATCH,
                details={"file": source, "map": key},
            )
        maps[key] = Homomorphism(dom, cod, tuple(image), name=key)
    return GroupoidData(c0=c0, c1=c1, c2=c2, name=match.group(1), **maps)


# ==================== 文件与套件 ====================

def load_algebra(file_path: PathLike) -> FiniteAlgebra:
    return parse_algebra_text(read_text(file_path), source=str(file_path))


@dataclass
class FixtureSuite:
    """按名称交叉链接的夹具套件"""
    directory: Path
    algebras: Dict[str, FiniteAlgebra] = field(default_factory=dict)
    homs: Dict[str, Homomorphism] = field(default_factory=dict)
    points: Dict[str, SplitPoint] = field(default_factory=dict)
    groupoids: Dict[str, GroupoidData] = field(default_factory=dict)
    sources: Dict[str, Path] = field(default_factory=dict)

    def summary(self) -> Dict[str, List[str]]:
        return {
            "algebras": list(self.algebras),
            "homs": list(self.homs),
            "points": list(self.points),
            "groupoids": list(self.groupoids),
        }

    def _register(self, table: Dict, name: str, value, path: Path, kind: str) -> None:
        if name in table:
            raise AppError(
                ErrorCode.DUPLICATE_NAME,
                f"{kind}名称 '{name}' 重复：{self.sources.get(f'{kind}:{name}')} 与 {path}",
                details={"name": name, "file": str(path)},
            )
        table[name] = value
        self.sources[f"{kind}:{name}"] = path

    def source_of(self, kind: str, name: str) -> Optional[Path]:
        return self.sources.get(f"{kind}:{name}")


def load_fixture_suite(directory: PathLike, algebras_only: bool = False) -> FixtureSuite:
    """加载目录中的 .alg / .hom / .point / .gpd 文件（按文件名排序）

    algebras_only 为真时只读取 .alg 文件（命令行解析单个同态、点或群胚文件时使用）。

    Raises:
        NotFoundError: 目录不存在
        AppError: 悬空引用（DANGLING_REFERENCE）或名称重复（DUPLICATE_NAME）
    """
    root = Path(directory)
    if not root.is_dir():
        raise NotFoundError("目录", str(root), code=ErrorCode.FILE_NOT_FOUND)
    suite = FixtureSuite(directory=root)

    def files(suffix: str) -> List[Path]:
        return sorted(p for p in root.iterdir() if p.suffix == suffix and p.is_file())

    for path in files(ALGEBRA_SUFFIX):
        algebra = load_algebra(path)
        suite._register(suite.algebras, algebra.name, algebra, path, "algebra")
    if algebras_only:
        return suite
    for path in files(HOM_SUFFIX):
        hom = parse_hom_text(read_text(path), suite.algebras, source=str(path))
        suite._register(suite.homs, hom.name, hom, path, "hom")
    for path in files(POINT_SUFFIX):
        point = parse_point_text(read_text(path), suite.algebras, source=str(path))
        suite._register(suite.points, point.name, point, path, "point")
    for path in files(GROUPOID_SUFFIX):
        groupoid = parse_groupoid_text(read_text(path), suite.algebras, source=str(path))
        suite._register(suite.groupoids, groupoid.name, groupoid, path, "groupoid")

    logger.debug(
        "夹具套件已加载",
        directory=str(root),
        algebras=len(suite.algebras),
        homs=len(suite.homs),
        points=len(suite.points),
        groupoids=len(suite.groupoids),
    )
    return suite
