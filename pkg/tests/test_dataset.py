# ═══════════════════════════════════════════════════════════════
# Dataset Tests
# ═══════════════════════════════════════════════════════════════
"""
数据集解析与视图操作测试

运行命令:
    pytest tests/test_dataset.py -v
    pytest tests/test_dataset.py -v -m P0
"""

import gzip

import allure
import numpy as np
import pytest

from core.assessor import Stump
from core.dataset import (
    Dataset,
    ExampleView,
    column_values,
    dump_svmlight,
    load_dataset,
    parse_svmlight,
    split_view,
)
from core.errors import ArgumentError, DatasetParseError
from core.fixtures import random_instance
from utils.logger import RunLogger

logger = RunLogger("test_dataset")


@allure.feature("Dataset")
class TestParseSvmlight:
    """svmlight 解析"""

    # ═══════════════════════════════════════════════════════════════
    # P0 TESTS - 核心功能测试
    # ═══════════════════════════════════════════════════════════════

    @pytest.mark.P0
    @pytest.mark.functional
    @allure.story("解析")
    @allure.title("TC-DS-001: 两样本文本解析")
    def test_p0_parse_basic(self, toy_dataset: Dataset):
        """
        TC-DS-001: 两样本文本解析

        预期结果:
        - n=2, K=3, 标签 [+1, -1]
        - 第 1 列只有样本 0 的 0.5
        """
        logger.start()
        logger.step("检查维度与标签", "Verification")
        assert toy_dataset.n == 2
        assert toy_dataset.K == 3
        assert toy_dataset.labels.tolist() == [1, -1]

        logger.step("检查列存储", "Verification")
        idx, val = toy_dataset.column(1)
        assert idx.tolist() == [0]
        assert val.tolist() == [0.5]
        idx, val = toy_dataset.column(3)
        assert idx.tolist() == [0]
        assert val.tolist() == [2.0]
        logger.checkpoint(f"nnz = {toy_dataset.nnz}", toy_dataset.nnz == 3)
        logger.end(success=True)

    @pytest.mark.P0
    @pytest.mark.exception
    @allure.story("解析")
    @allure.title("TC-DS-002: 空输入报错")
    def test_p0_empty_input(self):
        with pytest.raises(DatasetParseError, match="empty input"):
            parse_svmlight([])
        with pytest.raises(DatasetParseError, match="empty input"):
            parse_svmlight(["", "   ", "# only a comment"])

    @pytest.mark.P0
    @pytest.mark.exception
    @allure.story("解析")
    @allure.title("TC-DS-003: 下标未递增报错并带行号")
    def test_p0_non_increasing_indices(self):
        with pytest.raises(DatasetParseError) as exc:
            parse_svmlight(["1 3:1 2:5"])
        assert exc.value.line_no == 1

        with pytest.raises(DatasetParseError) as exc:
            parse_svmlight(["+1 1:1", "-1 2:1 2:3"])
        assert exc.value.line_no == 2

    # ═══════════════════════════════════════════════════════════════
    # P1 TESTS - 格式细节
    # ═══════════════════════════════════════════════════════════════

    @pytest.mark.P1
    @pytest.mark.exception
    @allure.story("解析")
    @allure.title("TC-DS-101: 非法特征项")
    @pytest.mark.parametrize("line", ["+1 0:1", "+1 -2:1", "+1 1=3", "+1 a:1", "+1 1:x", "+1 1:nan", "x 1:1"])
    def test_p1_malformed_tokens(self, line: str):
        with pytest.raises(DatasetParseError):
            parse_svmlight([line])

    @pytest.mark.P1
    @pytest.mark.functional
    @allure.story("解析")
    @allure.title("TC-DS-102: 注释、qid、显式 0 与标签映射")
    def test_p1_format_details(self):
        d = parse_svmlight([
            "2 qid:7 1:0 2:1.5  # trailing comment",
            "0 3:4",
            "-3",
        ])
        assert d.labels.tolist() == [1, -1, -1]
        assert d.K == 3
        # 显式写出的 0 不存储
        assert d.column(1)[0].tolist() == []
        assert d.column(2)[1].tolist() == [1.5]

    @pytest.mark.P1
    @pytest.mark.boundary
    @allure.story("解析")
    @allure.title("TC-DS-103: 声明维度取较大者")
    def test_p1_declared_dim(self):
        assert parse_svmlight(["+1 2:1"], declared_dim=10).K == 10
        assert parse_svmlight(["+1 5:1"], declared_dim=2).K == 5
        assert parse_svmlight(["+1"]).K == 0

    @pytest.mark.P1
    @pytest.mark.functional
    @allure.story("文件")
    @allure.title("TC-DS-104: 读取 gzip 文件")
    def test_p1_load_gzip(self, tmp_path, toy_text):
        plain = tmp_path / "toy.svm"
        plain.write_text(toy_text, encoding="utf-8")
        packed = tmp_path / "toy.svm.gz"
        with gzip.open(packed, "wt", encoding="utf-8") as f:
            f.write(toy_text)
        assert load_dataset(plain) == load_dataset(packed)

    @pytest.mark.P1
    @pytest.mark.exception
    @allure.story("文件")
    @allure.title("TC-DS-105: 文件不存在")
    def test_p1_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_dataset(tmp_path / "missing.svm")

    @pytest.mark.P1
    @pytest.mark.functional
    @allure.story("文件")
    @allure.title("TC-DS-106: 项目自带样例文件")
    def test_p1_toy_file(self, toy_file):
        d = load_dataset(toy_file)
        assert d.n == 8
        assert d.K == 2
        assert d.summary()["positive_fraction"] == pytest.approx(0.5)

    # ═══════════════════════════════════════════════════════════════
    # P2 TESTS - 性质测试
    # ═══════════════════════════════════════════════════════════════

    @pytest.mark.P2
    @pytest.mark.property
    @allure.story("序列化")
    @allure.title("TC-DS-201: 序列化后重新解析结果相同")
    def test_p2_dump_reparse(self, rng):
        for _ in range(50):
            d = random_instance(rng, max_n=20, max_k=6)
            again = parse_svmlight(dump_svmlight(d).splitlines())
            assert again == d

    @pytest.mark.P2
    @pytest.mark.property
    @allure.story("序列化")
    @allure.title("TC-DS-202: 非整数取值的序列化")
    def test_p2_dump_floats(self):
        d = parse_svmlight(["+1 1:0.1 4:-2.5e-07", "-1 2:3.141592653589793"])
        assert parse_svmlight(dump_svmlight(d).splitlines()) == d

    @pytest.mark.P1
    @pytest.mark.boundary
    @allure.story("序列化")
    @allure.title("TC-DS-203: 声明维度大于最大下标时序列化保留维度")
    def test_p1_dump_keeps_declared_dim(self):
        d = parse_svmlight(["+1 1:0.5", "-1 2:1.0"], declared_dim=5)
        text = dump_svmlight(d)
        assert text.splitlines()[-1] == "-1 2:1.0 5:0"

        again = parse_svmlight(text.splitlines())
        assert again.K == 5
        assert again == d

        # 没有任何非零项时同样保留
        empty = parse_svmlight(["+1", "-1"], declared_dim=3)
        assert parse_svmlight(dump_svmlight(empty).splitlines()) == empty
        # 维度恰好等于最大下标时不追加
        assert dump_svmlight(parse_svmlight(["+1 2:1.5"])) == "+1 2:1.5\n"


@allure.feature("Dataset")
class TestViews:
    """列读取与视图划分"""

    @pytest.mark.P0
    @pytest.mark.functional
    @allure.story("列读取")
    @allure.title("TC-DS-011: column_values 按视图过滤")
    def test_p0_column_values(self, toy_dataset):
        full = ExampleView.full(toy_dataset)
        assert column_values(toy_dataset, 1, full) == [(0, 0.5)]
        only_first = ExampleView(toy_dataset, np.array([0]))
        assert column_values(toy_dataset, 2, only_first) == []
        with pytest.raises(ArgumentError):
            column_values(toy_dataset, 4, full)
        with pytest.raises(ArgumentError):
            column_values(toy_dataset, 0, full)

    @pytest.mark.P0
    @pytest.mark.functional
    @allure.story("划分")
    @allure.title("TC-DS-012: split_view 按决策桩划分")
    def test_p0_split_view(self, toy_dataset):
        full = ExampleView.full(toy_dataset)

        plus, minus = split_view(full, Stump(p=1, k=1, tau=0.4))
        assert plus.members.tolist() == [0]
        assert minus.members.tolist() == [1]

        plus, minus = split_view(full, Stump(p=-1, k=1, tau=0.4))
        assert plus.members.tolist() == [1]
        assert minus.members.tolist() == [0]

        plus, minus = split_view(full, Stump(p=1, k=1, tau=-1.0))
        assert plus.members.tolist() == [0, 1]
        assert len(minus) == 0

    @pytest.mark.P1
    @pytest.mark.boundary
    @allure.story("划分")
    @allure.title("TC-DS-111: sign(0) = +1")
    def test_p1_sign_zero(self, toy_dataset):
        full = ExampleView.full(toy_dataset)
        # 样本 1 的特征 1 为隐式 0，阈值恰为 0 时判 +1
        plus, _ = split_view(full, Stump(p=1, k=1, tau=0.0))
        assert plus.members.tolist() == [0, 1]

    @pytest.mark.P1
    @pytest.mark.functional
    @allure.story("列读取")
    @allure.title("TC-DS-113: 按给定行序取子列与稠密取值")
    def test_p1_rows_of_column(self, toy_dataset):
        pos, val = toy_dataset.rows_of_column(1, np.array([1, 0]))
        assert pos.tolist() == [1]
        assert val.tolist() == [0.5]
        assert toy_dataset.feature_values(3, np.array([1, 0])).tolist() == [0.0, 2.0]
        # 非严格模式下超出维度的特征视为全 0
        assert toy_dataset.feature_values(7, np.array([0]), strict=False).tolist() == [0.0]
        with pytest.raises(ArgumentError):
            toy_dataset.feature_values(7, np.array([], dtype=np.int64))

    @pytest.mark.P1
    @pytest.mark.exception
    @allure.story("视图")
    @allure.title("TC-DS-112: 非法视图")
    def test_p1_invalid_views(self, toy_dataset):
        with pytest.raises(ArgumentError):
            ExampleView(toy_dataset, np.array([0, 0]))
        with pytest.raises(ArgumentError):
            ExampleView(toy_dataset, np.array([2]))
        with pytest.raises(ArgumentError):
            Stump(p=0, k=1, tau=0.0)

    @pytest.mark.P2
    @pytest.mark.property
    @allure.story("划分")
    @allure.title("TC-DS-211: 划分是视图的一个分拆")
    def test_p2_split_partitions(self, rng):
        for _ in range(100):
            d = random_instance(rng, max_n=25, max_k=4)
            size = int(rng.integers(1, d.n + 1))
            members = np.sort(rng.choice(d.n, size=size, replace=False))
            view = ExampleView(d, members)
            stump = Stump(p=int(rng.choice([-1, 1])), k=int(rng.integers(1, d.K + 1)),
                          tau=float(rng.uniform(-1, 5)))
            plus, minus = split_view(view, stump)
            assert len(np.intersect1d(plus.members, minus.members)) == 0
            assert sorted(np.concatenate([plus.members, minus.members]).tolist()) == members.tolist()
            # 相对顺序保持
            assert np.all(np.diff(plus.members) > 0)
            assert np.all(np.diff(minus.members) > 0)
