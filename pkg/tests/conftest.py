"""测试配置和共享 fixtures"""
import sys
from pathlib import Path

import pytest

# 添加项目根目录到路径
PROJECT_ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(PROJECT_ROOT))

from core.algebra import make_hom, validate_algebra  # noqa: E402

FIXTURE_DIR = PROJECT_ROOT / "fixtures"


def pointed(name, size, **ops):
    """以常量 0 开头的点化代数；ops 为 符号 -> (元数, 表)"""
    desc_ops = [{"name": "0", "arity": 0, "table": [0]}]
    desc_ops += [{"name": s, "arity": k, "table": list(t)} for s, (k, t) in ops.items()]
    return validate_algebra({"name": name, "size": size, "ops": desc_ops, "designated": "0"})


@pytest.fixture
def fixture_dir():
    """仓库自带的夹具目录"""
    return FIXTURE_DIR


@pytest.fixture
def temp_dir(tmp_path):
    """临时目录"""
    return tmp_path


@pytest.fixture
def sl2():
    """有最小元的二元交半格"""
    return pointed("SL2", 2, meet=(2, [0, 0, 0, 1]))


@pytest.fixture
def z2():
    """二元群"""
    return pointed("Z2", 2, add=(2, [0, 1, 1, 0]))


@pytest.fixture
def ps2():
    """二元点集"""
    return pointed("PS2", 2)


@pytest.fixture
def maj2():
    """二元多数代数"""
    return pointed("MAJ2", 2, maj=(3, [0, 0, 0, 1, 0, 1, 1, 1]))


@pytest.fixture
def l2():
    """二元格（无常量）"""
    return validate_algebra({
        "name": "L2",
        "size": 2,
        "ops": [
            {"name": "meet", "arity": 2, "table": [0, 0, 0, 1]},
            {"name": "join", "arity": 2, "table": [0, 1, 1, 1]},
        ],
    })


@pytest.fixture
def z2xz2():
    """Klein 四元群，(a,b) 的下标为 2a+b"""
    return pointed("Z2xZ2", 4, add=(2, [a ^ b for a in range(4) for b in range(4)]))


@pytest.fixture
def sl2xsl2():
    """SL2×SL2，(a,b) 的下标为 2a+b"""
    return pointed("SL2xSL2", 4, meet=(2, [a & b for a in range(4) for b in range(4)]))


@pytest.fixture
def sum_hom(z2xz2, z2):
    """(a,b) -> a+b"""
    return make_hom(z2xz2, z2, [0, 1, 1, 0], name="sum")


@pytest.fixture
def pi1_hom(z2xz2, z2):
    """第一投影"""
    return make_hom(z2xz2, z2, [0, 0, 1, 1], name="pi1")
