"""
Unit tests for the depth study and the feature ablation
"""

import pytest

from wlan_htnet.exceptions import ConfigError
from wlan_htnet.training import depth_study, feature_ablation


@pytest.fixture
def one_epoch(tiny_train_config):
    return tiny_train_config.model_copy(update={"epochs": 1})


class TestDepthStudy:
    """Test cases for the layer-depth study"""

    def test_one_row_per_depth(self, small_splits, one_epoch):
        """Test rows, parameter growth and finite errors"""
        rows = depth_study(small_splits, depths=(1, 2), config=one_epoch)
        assert [r.layers for r in rows] == [1, 2]
        assert rows[1].parameter_count > rows[0].parameter_count
        assert all(r.test_rmse >= r.test_mae >= 0.0 for r in rows)
        assert set(rows[0].as_dict()) == {
            "layers", "test_rmse", "test_mae", "inference_ms", "parameter_count"
        }


class TestFeatureAblation:
    """Test cases for the feature ablation"""

    def test_reference_row_first(self, small_splits, one_epoch):
        """Test that the full-feature row comes first"""
        rows = feature_ablation(small_splits, groups=("sinr",), config=one_epoch)
        assert [r.removed for r in rows] == ["none", "sinr"]
        assert rows[0].test_rmse != rows[1].test_rmse

    def test_unknown_group(self, small_splits, one_epoch):
        """Test that an unknown group raises ConfigError"""
        with pytest.raises(ConfigError, match="unknown feature groups"):
            feature_ablation(small_splits, groups=("colour",), config=one_epoch)
