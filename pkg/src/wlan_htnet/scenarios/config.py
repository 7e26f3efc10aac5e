"""
Scenario and propagation configuration
"""

from typing import Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ..exceptions import ConfigError

ArrayOrFloat = Union[np.ndarray, float]

SETUP_NAMES = {
    1: "mobility",
    2: "mobility+handover",
    3: "interference sources",
    4: "dynamic channel bonding",
    5: "handover+bonding",
    6: "handover+bonding (long)",
}


class PropagationModel(BaseModel):
    """Log-distance path loss and the constants of the throughput oracle"""

    model_config = ConfigDict(extra="forbid", frozen=True)

    tx_power_dbm: float = 20.0
    max_tx_power_dbm: float = 30.0
    reference_loss_db: float = 40.0
    path_loss_exponent: float = Field(3.5, gt=0.0)
    noise_dbm: float = -95.0
    cca_dbm: float = -82.0
    min_distance_m: float = Field(0.01, gt=0.0)
    channel_width_mhz: float = Field(20.0, gt=0.0)
    efficiency: float = Field(0.8, gt=0.0, le=1.0)
    max_spectral_efficiency: float = Field(10.0, gt=0.0)
    interference_floor_dbm: float = -120.0

    def path_loss_db(self, distance: ArrayOrFloat) -> ArrayOrFloat:
        d = np.maximum(distance, self.min_distance_m)
        return self.reference_loss_db + 10.0 * self.path_loss_exponent * np.log10(d)

    def received_dbm(self, tx_dbm: ArrayOrFloat, distance: ArrayOrFloat) -> ArrayOrFloat:
        return tx_dbm - self.path_loss_db(distance)

    def coverage_radius(self, tx_dbm: Optional[float] = None) -> float:
        """Distance at which the received power falls to the CCA threshold"""
        tx = self.tx_power_dbm if tx_dbm is None else tx_dbm
        budget = tx - self.cca_dbm - self.reference_loss_db
        return float(10.0 ** (budget / (10.0 * self.path_loss_exponent)))

    def covers(self, distance: float, tx_dbm: Optional[float] = None) -> bool:
        tx = self.tx_power_dbm if tx_dbm is None else tx_dbm
        return bool(self.received_dbm(tx, distance) >= self.cca_dbm)


def dbm_to_mw(dbm: ArrayOrFloat) -> ArrayOrFloat:
    return 10.0 ** (np.asarray(dbm) / 10.0)


def mw_to_dbm(mw: ArrayOrFloat) -> ArrayOrFloat:
    return 10.0 * np.log10(mw)


def db_to_linear(db: ArrayOrFloat) -> ArrayOrFloat:
    return 10.0 ** (np.asarray(db) / 10.0)


class ScenarioConfig(BaseModel):
    """Generator knobs for one setup; unset values take the setup defaults"""

    model_config = ConfigDict(extra="forbid")

    setup: int = Field(1, ge=1, le=6)
    map_width_range: Tuple[float, float] = (40.0, 80.0)
    map_height_range: Tuple[float, float] = (20.0, 60.0)
    n_aps_range: Tuple[int, int] = (8, 12)
    stas_per_ap_range: Tuple[int, int] = (5, 20)
    sequence_length: Optional[int] = Field(None, ge=1)
    mobile_fraction: float = Field(0.5, ge=0.0, le=1.0)
    speed_range: Optional[Tuple[float, float]] = None
    n_interferers: int = Field(3, ge=0)
    interferer_speed_range: Tuple[float, float] = (1.0, 3.0)
    min_ap_spacing: float = Field(10.0, ge=0.0)
    t_g: float = Field(10.0, gt=0.0)
    seed: int = Field(0, ge=0)
    propagation: PropagationModel = Field(default_factory=PropagationModel)

    @property
    def length(self) -> int:
        if self.sequence_length is not None:
            return self.sequence_length
        return 100 if self.setup == 6 else 10

    @property
    def speeds(self) -> Tuple[float, float]:
        if self.speed_range is not None:
            return self.speed_range
        return (0.1, 0.5) if self.setup == 1 else (0.1, 1.0)

    @property
    def mobility(self) -> bool:
        return self.setup in (1, 2, 5, 6)

    @property
    def handover(self) -> bool:
        return self.setup in (2, 5, 6)

    @property
    def interferers(self) -> int:
        return self.n_interferers if self.setup == 3 else 0

    @property
    def channel_mutation(self) -> bool:
        return self.setup in (4, 5, 6)

    def check(self) -> None:
        """Raise :class:`ConfigError` when no deployment can be generated"""
        problems = []
        for name in ("map_width_range", "map_height_range", "n_aps_range",
                     "stas_per_ap_range", "interferer_speed_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                problems.append(f"{name}: lower bound {lo} above upper bound {hi}")
        if self.n_aps_range[0] < 1:
            problems.append("at least one AP is required")
        if self.stas_per_ap_range[0] < 0:
            problems.append("stas_per_ap_range must be non-negative")
        if self.map_width_range[0] <= 0 or self.map_height_range[0] <= 0:
            problems.append("map dimensions must be positive")
        lo, hi = self.speeds
        if lo < 0 or lo > hi:
            problems.append(f"invalid speed range {self.speeds}")
        if problems:
            raise ConfigError("; ".join(problems))


def scenario_config(setup: int, **overrides: object) -> ScenarioConfig:
    """Build a :class:`ScenarioConfig`, reporting bad values as ConfigError"""
    try:
        config = ScenarioConfig(setup=setup, **overrides)
    except ValidationError as e:
        raise ConfigError(f"invalid scenario config: {e}") from e
    config.check()
    return config
