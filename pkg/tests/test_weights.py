# ═══════════════════════════════════════════════════════════════
# Weight Vector Tests
# ═══════════════════════════════════════════════════════════════
"""
降序权重、前缀和、AdaBoost 更新与归并重排

运行命令:
    pytest tests/test_weights.py -v
"""

import math

import allure
import numpy as np
import pytest

from core.errors import ArgumentError, DegenerateWeightsError
from core.weights import WeightVector, merge_groups
from utils.logger import RunLogger

logger = RunLogger("test_weights")


def full_sort(w: np.ndarray) -> np.ndarray:
    ids = np.arange(len(w))
    return np.lexsort((ids, -w))


@allure.feature("Weights")
class TestWeightVector:

    # ═══════════════════════════════════════════════════════════════
    # P0 TESTS
    # ═══════════════════════════════════════════════════════════════

    @pytest.mark.P0
    @pytest.mark.functional
    @allure.story("归一化")
    @allure.title("TC-WV-001: 归一化")
    def test_p0_normalize(self):
        wv = WeightVector.from_weights(np.array([2.0, 1.0, 1.0])).normalize()
        assert wv.sorted_weights.tolist() == [0.5, 0.25, 0.25]
        assert wv.order.tolist() == [0, 1, 2]

        already = WeightVector.from_weights(np.array([0.4, 0.3, 0.2, 0.1]))
        assert already.normalize().sorted_weights == pytest.approx([0.4, 0.3, 0.2, 0.1])

        with pytest.raises(DegenerateWeightsError):
            WeightVector.from_weights(np.zeros(3)).normalize()

    @pytest.mark.P0
    @pytest.mark.functional
    @allure.story("前缀")
    @allure.title("TC-WV-002: prefix_index")
    def test_p0_prefix_index(self, four_weights):
        assert four_weights.prefix_index(0.5) == 2
        assert four_weights.prefix_index(0.0) == 0
        assert four_weights.prefix_index(1.5) == 4
        assert four_weights.prefix_index(0.4) == 1
        with pytest.raises(ArgumentError):
            four_weights.prefix_index(-0.1)

    @pytest.mark.P0
    @pytest.mark.functional
    @allure.story("更新")
    @allure.title("TC-WV-003: 错误样本权重翻倍、正确样本减半后的顺序")
    def test_p0_adaboost_update_example(self, four_weights):
        """
        TC-WV-003: 样本 1 与 3（0 起）分错，alpha = ln 2 时倍数为 2 与 1/2

        原始权重 [0.2, 0.6, 0.1, 0.2]，并列的样本 0 与 3 按编号升序
        """
        logger.start()
        correct = np.array([True, False, True, False])

        logger.step("精确倍数下的归并重排", "Reorder")
        scaled = WeightVector(four_weights.order, four_weights.w * np.where(correct, 0.5, 2.0))
        merged = scaled.merge_reorder(correct)
        assert merged.order.tolist() == [1, 0, 3, 2]

        logger.step("AdaBoost 更新", "Update")
        labels = np.array([1, 1, 1, 1])
        predictions = np.where(correct, 1, -1)
        updated = four_weights.adaboost_update(predictions, labels, math.log(2.0))
        assert updated.order[0] == 1 and updated.order[-1] == 2
        assert updated.order.tolist() == full_sort(updated.w).tolist()
        assert updated.total == pytest.approx(1.0, abs=1e-12)
        assert updated.sorted_weights == pytest.approx(np.array([0.6, 0.2, 0.2, 0.1]) / 1.1)
        logger.checkpoint("顺序为 [1, 0, 3, 2]", True)
        logger.end(success=True)

    # ═══════════════════════════════════════════════════════════════
    # P1 TESTS
    # ═══════════════════════════════════════════════════════════════

    @pytest.mark.P1
    @pytest.mark.boundary
    @allure.story("更新")
    @allure.title("TC-WV-101: alpha = 0 与全部正确")
    def test_p1_update_identities(self, four_weights):
        labels = np.array([1, -1, 1, -1])
        same = four_weights.adaboost_update(np.array([-1, 1, 1, 1]), labels, 0.0)
        assert same.order.tolist() == four_weights.order.tolist()
        assert same.sorted_weights == pytest.approx(four_weights.sorted_weights)

        scaled = four_weights.adaboost_update(labels.copy(), labels, 0.7)
        assert scaled.order.tolist() == four_weights.order.tolist()
        assert scaled.sorted_weights == pytest.approx(four_weights.sorted_weights)

    @pytest.mark.P1
    @pytest.mark.exception
    @allure.story("更新")
    @allure.title("TC-WV-102: 更新参数校验")
    def test_p1_update_errors(self, four_weights):
        with pytest.raises(ArgumentError):
            four_weights.adaboost_update(np.ones(3), np.ones(4), 0.1)
        with pytest.raises(ArgumentError):
            four_weights.adaboost_update(np.ones(4), np.ones(4), float("inf"))
        with pytest.raises(ArgumentError):
            WeightVector.from_weights(np.array([1.0, -0.5]))

    @pytest.mark.P1
    @pytest.mark.functional
    @allure.story("重排")
    @allure.title("TC-WV-103: 一组为空时顺序不变")
    def test_p1_merge_reorder_single_group(self, four_weights):
        for flags in (np.ones(4, dtype=bool), np.zeros(4, dtype=bool)):
            assert four_weights.merge_reorder(flags).order.tolist() == [0, 1, 2, 3]

    @pytest.mark.P1
    @pytest.mark.functional
    @allure.story("节点权重")
    @allure.title("TC-WV-104: 限制到子集并重新归一化")
    def test_p1_restrict_and_prefix(self, four_weights):
        sub = four_weights.restrict(np.array([3, 1]))
        assert sub.order.tolist() == [1, 3]
        assert sub.sorted_weights == pytest.approx([0.75, 0.25])
        assert four_weights.prefix(0.6).tolist() == [0, 1]
        assert four_weights.prefix(0.0).tolist() == [0]
        with pytest.raises(ArgumentError):
            WeightVector(np.array([0, 1]), np.array([0.5, 0.5, 0.0])).restrict(np.array([2]))

    # ═══════════════════════════════════════════════════════════════
    # P2 TESTS - 性质测试
    # ═══════════════════════════════════════════════════════════════

    @pytest.mark.P2
    @pytest.mark.property
    @allure.story("重排")
    @allure.title("TC-WV-201: 归并重排等于完整排序")
    def test_p2_merge_equals_full_sort(self, rng):
        for _ in range(10_000):
            n = int(rng.integers(1, 12))
            w = rng.choice([0.1, 0.2, 0.3, 0.5], size=n)
            wv = WeightVector.from_weights(w)
            correct = rng.random(n) < 0.6
            factor = np.where(correct, 0.5, 2.0)
            scaled = WeightVector(wv.order, wv.w * factor)
            merged = scaled.merge_reorder(correct)
            assert merged.order.tolist() == full_sort(wv.w * factor).tolist()
            assert merged.is_sorted()

    @pytest.mark.P2
    @pytest.mark.property
    @allure.story("前缀")
    @allure.title("TC-WV-202: prefix_index(Z_m) = m")
    def test_p2_prefix_index_inverse(self, rng):
        for _ in range(200):
            wv = WeightVector.from_weights(rng.random(int(rng.integers(1, 30))) + 0.01)
            for m in range(1, wv.n + 1):
                if wv.Z[m] > wv.Z[m - 1]:
                    assert wv.prefix_index(float(wv.Z[m])) == m

    @pytest.mark.P2
    @pytest.mark.property
    @allure.story("更新")
    @allure.title("TC-WV-203: 更新后总和为 1 且有序")
    def test_p2_update_normalized(self, rng):
        for _ in range(500):
            n = int(rng.integers(2, 40))
            wv = WeightVector.from_weights(rng.random(n) + 0.01).normalize()
            labels = rng.choice([-1, 1], size=n)
            predictions = rng.choice([-1, 1], size=n)
            updated = wv.adaboost_update(predictions, labels, float(rng.uniform(0, 2)))
            assert abs(updated.total - 1.0) <= 1e-12
            assert updated.is_sorted()
            assert updated.order.tolist() == full_sort(updated.w).tolist()

    @pytest.mark.P2
    @pytest.mark.property
    @pytest.mark.slow
    @allure.story("重排")
    @allure.title("TC-WV-204: 归并比较次数线性增长")
    @pytest.mark.parametrize("n", [1_000, 10_000, 100_000])
    def test_p2_merge_linear(self, rng, n):
        w = rng.random(n)
        order = full_sort(w)
        correct = rng.random(n) < 0.7
        _, comparisons = merge_groups(order[correct[order]], order[~correct[order]], w)
        assert comparisons <= n
