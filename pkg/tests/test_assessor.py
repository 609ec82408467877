# ═══════════════════════════════════════════════════════════════
# Feature Assessor Tests
# ═══════════════════════════════════════════════════════════════
"""
单特征增量评估器: 区间表、ε 计数、上下界与最优决策桩

运行命令:
    pytest tests/test_assessor.py -v
"""

import allure
import numpy as np
import pytest

from core.assessor import NodeFrame, Stump
from core.dataset import ExampleView, parse_svmlight
from core.errors import ArgumentError, ContractViolationError
from core.fixtures import random_instance, random_weights
from core.weights import WeightVector
from utils.logger import RunLogger

logger = RunLogger("test_assessor")


def brute_force_best(frame: NodeFrame, k: int, m: int) -> float:
    """前 m 个位置上，所有 (极性, 中点阈值) 决策桩的最小误分类权重"""
    values = frame.dataset.feature_values(k, frame.order[:m])
    labels = frame.labels[:m]
    w = frame.sorted_w[:m]
    distinct = np.unique(values)
    taus = [distinct[0] - 1.0, distinct[-1] + 1.0]
    taus += [(a + b) / 2.0 for a, b in zip(distinct[:-1], distinct[1:])]
    best = np.inf
    for tau in taus:
        for p in (1, -1):
            pred = Stump(p=p, k=k, tau=float(tau)).predict_values(values)
            best = min(best, float(w[pred != labels].sum()))
    return best


@allure.feature("Assessor")
class TestFeatureAssessor:

    @pytest.fixture(autouse=True)
    def setup(self, four_examples, four_weights):
        """4 样本单特征节点"""
        self.frame = NodeFrame(ExampleView.full(four_examples), four_weights)

    # ═══════════════════════════════════════════════════════════════
    # P0 TESTS - 核心功能测试
    # ═══════════════════════════════════════════════════════════════

    @pytest.mark.P0
    @pytest.mark.functional
    @allure.story("完整评估")
    @allure.title("TC-AS-001: 4 样本完整评估的最优误差为 0.2")
    def test_p0_full_assessment(self):
        """
        TC-AS-001: 取值 1..4、标签 +,-,+,-、权重 .4,.3,.2,.1

        预期结果:
        - 区间 (1, 2] 上 p=-1 的决策桩误分类权重为 0.2
        - lb = ub = E_n = 0.2
        """
        logger.start()
        logger.step("评估全部 4 个样本", "Assess")
        f = self.frame.assessor(1).assess(0, 4)
        assert f.is_complete
        assert f.assess_count == 4

        logger.step("检查界与最优决策桩", "Verification")
        assert f.best_wrong_weight() == pytest.approx(0.2)
        assert f.lb() == pytest.approx(0.2)
        assert f.ub() == pytest.approx(f.lb())
        assert f.error_so_far() == pytest.approx(0.2)
        assert f.best_stump() == Stump(p=-1, k=1, tau=1.5)
        logger.checkpoint(f"最优决策桩 {f.best_stump()}", True)
        logger.end(success=True)

    @pytest.mark.P0
    @pytest.mark.functional
    @allure.story("部分评估")
    @allure.title("TC-AS-002: 只评估前 2 个样本")
    def test_p0_partial_assessment(self):
        f = self.frame.assessor(1).assess(0, 2)
        assert f.m_seen == 2
        assert f.Zm_seen == pytest.approx(0.7)
        assert f.lb() == pytest.approx(0.0)
        assert f.ub() == pytest.approx(0.3)
        assert f.best_stump() == Stump(p=-1, k=1, tau=1.5)

    @pytest.mark.P0
    @pytest.mark.boundary
    @allure.story("部分评估")
    @allure.title("TC-AS-003: 未评估的评估器")
    def test_p0_untouched(self):
        f = self.frame.assessor(1)
        assert f.lb() == 0.0
        assert f.ub() == pytest.approx(1.0)
        with pytest.raises(ContractViolationError):
            f.best_stump()
        with pytest.raises(ContractViolationError):
            f.error_so_far()

    # ═══════════════════════════════════════════════════════════════
    # P1 TESTS
    # ═══════════════════════════════════════════════════════════════

    @pytest.mark.P1
    @pytest.mark.exception
    @allure.story("契约")
    @allure.title("TC-AS-101: 批次必须衔接已评估前缀")
    def test_p1_batch_contract(self):
        f = self.frame.assessor(1).assess(0, 2)
        with pytest.raises(ContractViolationError):
            f.assess(0, 3)
        with pytest.raises(ContractViolationError):
            f.assess(3, 4)
        with pytest.raises(ContractViolationError):
            f.assess(2, 5)
        # 空批次不改变状态
        f.assess(2, 2)
        assert f.m_seen == 2 and f.assess_count == 2

    @pytest.mark.P1
    @pytest.mark.functional
    @allure.story("区间表")
    @allure.title("TC-AS-102: 区间覆盖全体实数且守恒")
    def test_p1_intervals(self):
        f = self.frame.assessor(1).assess(0, 3)
        intervals = f.intervals
        assert intervals[0].lo == -np.inf and intervals[-1].hi == np.inf
        assert [iv.hi for iv in intervals[:-1]] == [1.0, 2.0, 3.0]
        for a, b in zip(intervals[:-1], intervals[1:]):
            assert a.hi == b.lo
        for iv in intervals:
            assert iv.wrong_weight_pos + iv.wrong_weight_neg == pytest.approx(f.Zm_seen)

    @pytest.mark.P1
    @pytest.mark.functional
    @allure.story("阈值")
    @allure.title("TC-AS-103: 两端区间与中点阈值")
    def test_p1_thresholds(self):
        f = self.frame.assessor(1).assess(0, 4)
        assert f.threshold(0) == 0.0
        assert f.threshold(2) == 2.5
        assert f.threshold(4) == 5.0

    @pytest.mark.P1
    @pytest.mark.boundary
    @allure.story("并列")
    @allure.title("TC-AS-104: 并列时取较小阈值，再取 p=+1")
    def test_p1_tie_break(self, toy_dataset, four_examples):
        frame = NodeFrame(ExampleView.full(toy_dataset), WeightVector.uniform(toy_dataset.n))
        f = frame.assessor(2).assess(0, frame.n)
        assert f.best_wrong_weight() == 0.0
        assert f.best_stump() == Stump(p=-1, k=2, tau=0.5)

        # 等权重下区间 1 与区间 3 的 p=-1 并列，取较小阈值
        frame = NodeFrame(ExampleView.full(four_examples), WeightVector.uniform(4))
        f = frame.assessor(1).assess(0, 4)
        assert f.best_wrong_weight() == pytest.approx(0.25)
        assert f.best_stump() == Stump(p=-1, k=1, tau=1.5)

        # 全零特征: 所有决策桩误差相同，取最左区间与 p=+1
        flat = parse_svmlight(["+1", "-1"], declared_dim=1)
        frame = NodeFrame(ExampleView.full(flat), WeightVector.uniform(2))
        assert frame.assessor(1).assess(0, 2).best_stump() == Stump(p=1, k=1, tau=-1.0)

    @pytest.mark.P1
    @pytest.mark.exception
    @allure.story("节点")
    @allure.title("TC-AS-105: 空节点")
    def test_p1_empty_frame(self, four_examples, four_weights):
        with pytest.raises(ArgumentError):
            NodeFrame(ExampleView(four_examples, np.array([], dtype=np.int64)), four_weights)

    @pytest.mark.P1
    @pytest.mark.functional
    @allure.story("误分类矩阵")
    @allure.title("TC-AS-106: 误分类矩阵与 ε 一致")
    def test_p1_misclassification_matrix(self):
        f = self.frame.assessor(1).assess(0, 4)
        miss = f.misclassification_matrix()
        assert miss.shape == (10, 4)
        eps = miss @ self.frame.sorted_w
        assert eps[0::2] == pytest.approx([iv.wrong_weight_pos for iv in f.intervals])
        assert eps[1::2] == pytest.approx([iv.wrong_weight_neg for iv in f.intervals])
        with pytest.raises(ContractViolationError):
            self.frame.assessor(1).assess(0, 2).misclassification_matrix()

    # ═══════════════════════════════════════════════════════════════
    # P2 TESTS - 性质测试
    # ═══════════════════════════════════════════════════════════════

    @pytest.mark.P2
    @pytest.mark.property
    @allure.story("单调性")
    @allure.title("TC-AS-201: 随机批次下 lb 不减、ub 不增且夹住 E_n")
    def test_p2_monotone_and_sandwich(self, rng):
        for _ in range(200):
            d = random_instance(rng, max_n=30, max_k=3)
            frame = NodeFrame(ExampleView.full(d), random_weights(rng, d.n))
            k = int(rng.integers(1, d.K + 1))
            E_n = frame.assessor(k).assess(0, frame.n).lb()

            f = frame.assessor(k)
            prev_lb, prev_ub = f.lb(), f.ub()
            while not f.is_complete:
                f.assess_to(f.m_seen + int(rng.integers(1, 6)))
                assert f.lb() >= prev_lb - 1e-12
                assert f.ub() <= prev_ub + 1e-12
                assert f.lb() - 1e-12 <= E_n <= f.ub() + 1e-12
                prev_lb, prev_ub = f.lb(), f.ub()
            assert f.lb() == E_n
            assert f.ub() == pytest.approx(f.lb(), abs=1e-12)

    @pytest.mark.P2
    @pytest.mark.property
    @allure.story("区间表")
    @allure.title("TC-AS-202: 区间表结果等于暴力扫描")
    def test_p2_matches_brute_force(self, rng):
        for _ in range(1000):
            d = random_instance(rng, max_n=15, max_k=2)
            frame = NodeFrame(ExampleView.full(d), random_weights(rng, d.n))
            k = int(rng.integers(1, d.K + 1))
            m = int(rng.integers(1, frame.n + 1))
            f = frame.assessor(k)
            while f.m_seen < m:
                f.assess_to(min(m, f.m_seen + int(rng.integers(1, 4))))
            assert f.best_wrong_weight() == pytest.approx(brute_force_best(frame, k, m), abs=1e-12)

    @pytest.mark.P2
    @pytest.mark.property
    @allure.story("守恒")
    @allure.title("TC-AS-203: 每个区间两种极性的 ε 之和等于已评估权重")
    def test_p2_conservation(self, rng):
        for _ in range(200):
            d = random_instance(rng, max_n=20, max_k=2)
            frame = NodeFrame(ExampleView.full(d), random_weights(rng, d.n))
            f = frame.assessor(1)
            while not f.is_complete:
                f.assess_to(f.m_seen + int(rng.integers(1, 5)))
                for iv in f.intervals:
                    assert iv.wrong_weight_pos + iv.wrong_weight_neg == pytest.approx(f.Zm_seen, abs=1e-12)
