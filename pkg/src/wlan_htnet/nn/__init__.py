"""
HTNet: heterogeneous attention layers, jumping knowledge, LSTM and head
"""

from .checkpoint import (
    CHECKPOINT_FORMAT,
    CHECKPOINT_VERSION,
    Checkpoint,
    load_checkpoint,
    save_checkpoint,
)
from .config import FEATURE_GROUPS, AttentionMode, LstmActivation, ModelConfig
from .htl import (
    attention_scores,
    edge_hidden,
    encode,
    htl_forward,
    htl_stack,
    jk_combine,
    kind_blind_forward,
    relation_update,
)
from .model import HtnetModel
from .params import (
    HeadParams,
    HtlLayerParams,
    HtnetParams,
    JkCombinerParams,
    KindBlindParams,
    LstmLayerParams,
    LstmParams,
    init_params,
)
from .scaling import FeatureScaler
from .temporal import (
    HtnetOutput,
    batch_targets,
    htnet_forward,
    lstm_step,
    predict_head,
    rmse_loss,
)

__all__ = [
    "CHECKPOINT_FORMAT",
    "CHECKPOINT_VERSION",
    "FEATURE_GROUPS",
    "AttentionMode",
    "Checkpoint",
    "FeatureScaler",
    "HeadParams",
    "HtlLayerParams",
    "HtnetModel",
    "HtnetOutput",
    "HtnetParams",
    "JkCombinerParams",
    "KindBlindParams",
    "LstmActivation",
    "LstmLayerParams",
    "LstmParams",
    "ModelConfig",
    "attention_scores",
    "batch_targets",
    "edge_hidden",
    "encode",
    "htl_forward",
    "htl_stack",
    "htnet_forward",
    "init_params",
    "jk_combine",
    "kind_blind_forward",
    "load_checkpoint",
    "lstm_step",
    "predict_head",
    "relation_update",
    "rmse_loss",
    "save_checkpoint",
]
