"""
Unit tests for the core ThroughputBenchmark
"""

import numpy as np
import pytest

from wlan_htnet.core import ComparisonResult, ThroughputBenchmark
from wlan_htnet.graph.dataset import DatasetSplits
from wlan_htnet.predictors import LabelOracle, MeanPredictor
from wlan_htnet.predictors.base import ThroughputPredictor, target_batch


class MockPredictor(ThroughputPredictor):
    """Mock predictor that counts fits and predicts a constant"""

    name = "mock"

    def __init__(self, value=1.0):
        super().__init__()
        self.value = value
        self.fit_calls = 0

    def fit(self, train, val=None):
        self.fit_calls += 1

    def predict(self, deployments):
        _, rows, _ = target_batch(deployments)
        return np.full(rows.size, self.value)

    def parameter_count(self):
        return 0

    def save(self, path):
        raise NotImplementedError

    @classmethod
    def from_checkpoint(cls, checkpoint):
        raise NotImplementedError


@pytest.fixture
def splits(make_deployment):
    return DatasetSplits(
        train=[make_deployment(0), make_deployment(1)],
        val=[make_deployment(2)],
        test=[make_deployment(3, steps=2)],
    )


class TestThroughputBenchmark:
    """Test cases for ThroughputBenchmark"""

    def test_initialization(self):
        """Test benchmark initialization"""
        benchmark = ThroughputBenchmark()
        assert len(benchmark.predictors) == 0
        assert len(benchmark.datasets) == 0

    def test_register_predictor(self):
        """Test predictor registration"""
        benchmark = ThroughputBenchmark()
        predictor = MockPredictor()

        benchmark.register_predictor("test", predictor)

        assert "test" in benchmark.predictors
        assert benchmark.predictors["test"] == predictor

    def test_register_dataset(self, splits):
        """Test dataset registration"""
        benchmark = ThroughputBenchmark()
        benchmark.register_dataset("handmade", splits)
        assert benchmark.datasets["handmade"] is splits

    def test_fit_unknown_dataset(self):
        """Test fitting on an unknown dataset"""
        benchmark = ThroughputBenchmark()
        benchmark.register_predictor("test", MockPredictor())

        with pytest.raises(ValueError, match="Dataset unknown not registered"):
            benchmark.fit("test", "unknown")

    def test_fit_unknown_predictor(self, splits):
        """Test fitting an unknown predictor"""
        benchmark = ThroughputBenchmark()
        benchmark.register_dataset("handmade", splits)

        with pytest.raises(ValueError, match="Predictor unknown not registered"):
            benchmark.fit("unknown", "handmade")

    def test_evaluate_uses_registered_name(self, splits):
        """Test that reports carry the registration name"""
        benchmark = ThroughputBenchmark()
        benchmark.register_dataset("handmade", splits)
        benchmark.register_predictor("echo", LabelOracle())

        report = benchmark.evaluate("echo", "handmade")

        assert report.predictor == "echo"
        assert report.rmse == 0.0
        assert report.targets == 8

    def test_compare_ranking(self, splits):
        """Test fitting, evaluating and ranking every predictor"""
        benchmark = ThroughputBenchmark()
        benchmark.register_dataset("handmade", splits)
        benchmark.register_predictor("mock", MockPredictor(value=0.0))
        benchmark.register_predictor("mean", MeanPredictor())
        benchmark.register_predictor("oracle", LabelOracle())

        result = benchmark.compare("handmade")

        assert isinstance(result, ComparisonResult)
        assert result.ranking == ["oracle", "mean", "mock"]
        assert result.best.predictor == "oracle"
        assert benchmark.predictors["mock"].fit_calls == 1
        # training mean over t=0..2 is 15.5
        assert benchmark.predictors["mean"].mean == pytest.approx(15.5)

    def test_compare_subset_without_fit(self, splits):
        """Test comparing selected predictors without refitting"""
        benchmark = ThroughputBenchmark()
        benchmark.register_dataset("handmade", splits)
        mock = MockPredictor()
        benchmark.register_predictor("mock", mock)
        benchmark.register_predictor("oracle", LabelOracle())

        result = benchmark.compare("handmade", ["mock"], fit=False)

        assert [r.predictor for r in result.reports] == ["mock"]
        assert mock.fit_calls == 0

    def test_compare_unknown_dataset(self):
        """Test comparing on an unknown dataset"""
        with pytest.raises(ValueError, match="Dataset unknown not registered"):
            ThroughputBenchmark().compare("unknown")


class TestComparisonResult:
    """Test cases for ComparisonResult"""

    def test_summary(self, splits):
        """Test the ranked text summary"""
        benchmark = ThroughputBenchmark()
        benchmark.register_dataset("handmade", splits)
        benchmark.register_predictor("oracle", LabelOracle())
        benchmark.register_predictor("mock", MockPredictor())

        summary = benchmark.compare("handmade").summary()

        lines = summary.splitlines()
        assert lines[0] == "Test results on handmade (8 targets):"
        assert lines[1].startswith("- oracle: RMSE 0.000 Mbps")
        assert lines[2].startswith("- mock:")

    def test_empty(self):
        """Test a result without reports"""
        result = ComparisonResult(dataset="none", reports=[])
        assert result.best is None
        assert result.ranking == []
        assert result.summary() == "No predictors were evaluated on none."
