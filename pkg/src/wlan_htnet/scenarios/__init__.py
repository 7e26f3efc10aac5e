"""
Synthetic deployment generator, channel model and throughput oracle
"""

from .channel import (
    ap_pair_interference,
    channel_overlap,
    channel_state,
    link_throughput,
    oracle_throughput,
    range_width,
)
from .config import (
    SETUP_NAMES,
    PropagationModel,
    ScenarioConfig,
    db_to_linear,
    dbm_to_mw,
    mw_to_dbm,
    scenario_config,
)
from .generator import (
    GenerationResult,
    GenerationSummary,
    generate,
    generate_deployment,
    mobile_count,
    mutate_channels,
)

__all__ = [
    "SETUP_NAMES",
    "GenerationResult",
    "GenerationSummary",
    "PropagationModel",
    "ScenarioConfig",
    "ap_pair_interference",
    "channel_overlap",
    "channel_state",
    "db_to_linear",
    "dbm_to_mw",
    "generate",
    "generate_deployment",
    "link_throughput",
    "mobile_count",
    "mutate_channels",
    "mw_to_dbm",
    "oracle_throughput",
    "range_width",
    "scenario_config",
]
