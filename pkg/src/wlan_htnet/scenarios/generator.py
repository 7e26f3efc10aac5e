"""
Synthetic dynamic WLAN deployments for the six scenario setups.

Each deployment draws from its own seed stream (``seed``, deployment index),
split into independent layout, mobility, interferer and channel streams, so
the same seed yields the same base layout in every setup and generation is
independent of the thread count.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..graph.model import (
    NUM_CHANNELS,
    DeploymentSequence,
    EdgeKind,
    MapSize,
    NodeKind,
    Snapshot,
    WlanEdge,
    WlanNode,
)
from .channel import channel_state, oracle_throughput
from .config import PropagationModel, ScenarioConfig

logger = logging.getLogger(__name__)

BONDING_WIDTHS = (1, 2, 4, 8)
MAX_PLACEMENT_TRIES = 1000
SPACING_RELAX = 0.9


@dataclass
class _Ap:
    id: int
    position: np.ndarray
    lo: int
    hi: int
    primary: int
    interferer: bool = False
    velocity: Optional[np.ndarray] = None


@dataclass
class _Sta:
    id: int
    ap: Optional[int]
    position: np.ndarray
    interferer: bool = False
    velocity: Optional[np.ndarray] = None
    stopped: bool = False


@dataclass
class GenerationSummary:
    """Counters collected while generating"""

    deployments: int = 0
    mobile_stas: int = 0
    # movement attempts by STAs that were still moving
    movement_steps: int = 0
    coverage_stops: int = 0
    border_stops: int = 0
    handovers: int = 0
    relaxed_spacing: int = 0

    @property
    def stopped_fraction(self) -> float:
        """Share of movement steps that were stopped by loss of coverage"""
        return self.coverage_stops / self.movement_steps if self.movement_steps else 0.0

    def merge(self, other: "GenerationSummary") -> None:
        self.deployments += other.deployments
        self.mobile_stas += other.mobile_stas
        self.movement_steps += other.movement_steps
        self.coverage_stops += other.coverage_stops
        self.border_stops += other.border_stops
        self.handovers += other.handovers
        self.relaxed_spacing += other.relaxed_spacing


@dataclass
class GenerationResult:
    deployments: List[DeploymentSequence] = field(default_factory=list)
    summary: GenerationSummary = field(default_factory=GenerationSummary)


def mobile_count(n_stas: int, fraction: float) -> int:
    """Number of moving STAs of one AP, rounded half up"""
    return int(math.floor(fraction * n_stas + 0.5))


def mutate_channels(
    lo: int, hi: int, primary: int, mutation: int, sign: int
) -> Tuple[int, int, int]:
    """Apply one of the five bonding mutations.

    0/1 raise/lower the lowest channel, 2/3 raise/lower the highest one and
    4 shifts the whole range by ``sign``. A mutation that would leave
    ``0 <= lo <= hi < 8`` is skipped; the primary snaps into the new range.
    """
    new_lo, new_hi = lo, hi
    if mutation == 0:
        new_lo = lo + 1
    elif mutation == 1:
        new_lo = lo - 1
    elif mutation == 2:
        new_hi = hi + 1
    elif mutation == 3:
        new_hi = hi - 1
    else:
        new_lo, new_hi = lo + sign, hi + sign
    if not 0 <= new_lo <= new_hi < NUM_CHANNELS:
        return lo, hi, primary
    return new_lo, new_hi, min(max(primary, new_lo), new_hi)


def _inside(position: np.ndarray, width: float, height: float) -> bool:
    return bool(0.0 <= position[0] <= width and 0.0 <= position[1] <= height)


def _place_aps(
    rng: np.random.Generator, count: int, width: float, height: float, spacing: float
) -> Tuple[List[np.ndarray], int]:
    relaxed = 0
    while True:
        placed: List[np.ndarray] = []
        for _ in range(count):
            for _ in range(MAX_PLACEMENT_TRIES):
                candidate = np.array([rng.uniform(0.0, width), rng.uniform(0.0, height)])
                if all(np.hypot(*(candidate - p)) >= spacing for p in placed):
                    placed.append(candidate)
                    break
            else:
                break
        if len(placed) == count:
            return placed, relaxed
        relaxed += 1
        spacing *= SPACING_RELAX
        logger.warning(
            f"Could not place {count} APs on a {width:.1f}x{height:.1f} map, "
            f"relaxing spacing to {spacing:.2f} m"
        )


def _place_sta(
    rng: np.random.Generator,
    ap_position: np.ndarray,
    radius: float,
    width: float,
    height: float,
    propagation: PropagationModel,
) -> np.ndarray:
    for _ in range(MAX_PLACEMENT_TRIES):
        r = radius * math.sqrt(rng.uniform())
        theta = rng.uniform(0.0, 2.0 * math.pi)
        candidate = ap_position + r * np.array([math.cos(theta), math.sin(theta)])
        distance = float(np.hypot(*(candidate - ap_position)))
        if _inside(candidate, width, height) and propagation.covers(distance):
            return candidate
    return ap_position.copy()


def _initial_channels(rng: np.random.Generator) -> Tuple[int, int, int]:
    width = int(rng.choice(BONDING_WIDTHS))
    lo = width * int(rng.integers(0, NUM_CHANNELS // width))
    hi = lo + width - 1
    return lo, hi, int(rng.integers(lo, hi, endpoint=True))


def _velocity(rng: np.random.Generator, speeds: Tuple[float, float]) -> np.ndarray:
    speed = rng.uniform(*speeds)
    theta = rng.uniform(0.0, 2.0 * math.pi)
    return speed * np.array([math.cos(theta), math.sin(theta)])


def _bounce(position: np.ndarray, velocity: np.ndarray, limits: Tuple[float, float]) -> None:
    position += velocity
    for axis, limit in enumerate(limits):
        if position[axis] < 0.0:
            position[axis] = -position[axis]
            velocity[axis] = -velocity[axis]
        elif position[axis] > limit:
            position[axis] = 2.0 * limit - position[axis]
            velocity[axis] = -velocity[axis]
        position[axis] = min(max(position[axis], 0.0), limit)


class _Deployment:
    """Mutable state of one deployment while its snapshots are produced"""

    def __init__(self, config: ScenarioConfig, index: int) -> None:
        self.config = config
        self.index = index
        self.propagation = config.propagation
        self.summary = GenerationSummary(deployments=1)
        seq = np.random.SeedSequence(config.seed, spawn_key=(index,))
        layout, mobility, interferers, channels = (
            np.random.default_rng(s) for s in seq.spawn(4)
        )
        self.channel_rng = channels
        self._layout(layout)
        if config.mobility:
            self._pick_mobile(mobility)
        if config.interferers:
            self._add_interferers(interferers)

    def _layout(self, rng: np.random.Generator) -> None:
        cfg = self.config
        self.width = float(rng.uniform(*cfg.map_width_range))
        self.height = float(rng.uniform(*cfg.map_height_range))
        n_aps = int(rng.integers(cfg.n_aps_range[0], cfg.n_aps_range[1], endpoint=True))
        positions, relaxed = _place_aps(rng, n_aps, self.width, self.height, cfg.min_ap_spacing)
        self.summary.relaxed_spacing += relaxed
        self.aps: List[_Ap] = []
        for ap_id, pos in enumerate(positions):
            lo, hi, primary = _initial_channels(rng)
            self.aps.append(_Ap(ap_id, pos, lo, hi, primary))
        self.ap_by_id: Dict[int, _Ap] = {ap.id: ap for ap in self.aps}

        radius = self.propagation.coverage_radius()
        self.stas: List[_Sta] = []
        next_id = n_aps
        for ap in self.aps:
            count = int(rng.integers(cfg.stas_per_ap_range[0], cfg.stas_per_ap_range[1], endpoint=True))
            for _ in range(count):
                pos = _place_sta(rng, ap.position, radius, self.width, self.height, self.propagation)
                self.stas.append(_Sta(next_id, ap.id, pos))
                next_id += 1
        self.next_id = next_id

    def _pick_mobile(self, rng: np.random.Generator) -> None:
        for ap in self.aps:
            members = [s for s in self.stas if s.ap == ap.id]
            chosen = rng.choice(len(members), size=mobile_count(len(members), self.config.mobile_fraction), replace=False)
            for position in sorted(int(c) for c in chosen):
                members[position].velocity = _velocity(rng, self.config.speeds)
                self.summary.mobile_stas += 1

    def _add_interferers(self, rng: np.random.Generator) -> None:
        for _ in range(self.config.interferers):
            pos = np.array([rng.uniform(0.0, self.width), rng.uniform(0.0, self.height)])
            velocity = _velocity(rng, self.config.interferer_speed_range)
            primary = int(rng.integers(0, NUM_CHANNELS))
            ap = _Ap(self.next_id, pos, 0, NUM_CHANNELS - 1, primary, True, velocity)
            self.aps.append(ap)
            self.ap_by_id[ap.id] = ap
            self.stas.append(_Sta(self.next_id + 1, ap.id, pos.copy(), interferer=True))
            self.next_id += 2

    # --- dynamics ----------------------------------------------------------

    def _ap(self, ap_id: int) -> _Ap:
        return self.ap_by_id[ap_id]

    def _covering_aps(self, position: np.ndarray) -> List[Tuple[float, int]]:
        found = []
        for ap in self.aps:
            if ap.interferer:
                continue
            distance = float(np.hypot(*(position - ap.position)))
            if self.propagation.covers(distance):
                found.append((distance, ap.id))
        return sorted(found)

    def _mutate_channels(self) -> None:
        for ap in self.aps:
            if ap.interferer:
                continue
            mutation = int(self.channel_rng.integers(0, 5))
            sign = 1 if self.channel_rng.integers(0, 2) else -1
            ap.lo, ap.hi, ap.primary = mutate_channels(ap.lo, ap.hi, ap.primary, mutation, sign)

    def _move_stas(self) -> None:
        for sta in self.stas:
            if sta.velocity is None or sta.stopped or sta.interferer:
                continue
            self.summary.movement_steps += 1
            candidate = sta.position + sta.velocity
            if not _inside(candidate, self.width, self.height):
                sta.stopped = True
                self.summary.border_stops += 1
                continue
            current = self._ap(sta.ap) if sta.ap is not None else None
            if current is not None and self.propagation.covers(
                float(np.hypot(*(candidate - current.position)))
            ):
                sta.position = candidate
                continue
            if self.config.handover:
                covering = self._covering_aps(candidate)
                if covering:
                    sta.ap = covering[0][1]
                    sta.position = candidate
                    self.summary.handovers += 1
                    continue
            sta.stopped = True
            self.summary.coverage_stops += 1

    def _move_interferers(self) -> None:
        limits = (self.width, self.height)
        for ap in self.aps:
            if ap.interferer and ap.velocity is not None:
                _bounce(ap.position, ap.velocity, limits)
        for sta in self.stas:
            if sta.interferer and sta.ap is not None:
                sta.position = self._ap(sta.ap).position.copy()

    def step(self) -> None:
        if self.config.channel_mutation:
            self._mutate_channels()
        if self.config.mobility:
            self._move_stas()
        if self.config.interferers:
            self._move_interferers()

    # --- snapshots ---------------------------------------------------------

    def snapshot(self, t: int) -> Snapshot:
        nodes: List[WlanNode] = []
        for ap in self.aps:
            nodes.append(
                WlanNode(
                    id=ap.id,
                    kind=NodeKind.AP,
                    position=(float(ap.position[0]), float(ap.position[1])),
                    primary_channel=ap.primary,
                    available_channels=(ap.lo, ap.hi),
                    interferer=ap.interferer,
                )
            )
        edges: List[WlanEdge] = []
        for i, a in enumerate(self.aps):
            for b in self.aps[i + 1 :]:
                edges.append(WlanEdge(endpoints=(a.id, b.id), kind=EdgeKind.AP_AP, distance=0.0))
        for sta in self.stas:
            ap = self._ap(sta.ap) if sta.ap is not None else None
            nodes.append(
                WlanNode(
                    id=sta.id,
                    kind=NodeKind.STA,
                    position=(float(sta.position[0]), float(sta.position[1])),
                    primary_channel=ap.primary if ap else None,
                    available_channels=(ap.lo, ap.hi) if ap else None,
                    attached_ap=sta.ap,
                    interferer=sta.interferer,
                )
            )
            if ap is not None:
                edges.append(WlanEdge(endpoints=(ap.id, sta.id), kind=EdgeKind.AP_STA, distance=0.0))
        snap = channel_state(Snapshot(t=t, nodes=nodes, edges=edges), self.propagation)
        return snap.model_copy(update={"labels": oracle_throughput(snap, self.propagation)})

    def run(self) -> DeploymentSequence:
        snapshots = []
        for t in range(self.config.length):
            if t > 0:
                self.step()
            snapshots.append(self.snapshot(t))
        return DeploymentSequence(
            id=self.index,
            setup=self.config.setup,
            t_g=self.config.t_g,
            map=MapSize(w=self.width, h=self.height),
            snapshots=snapshots,
        )


def generate_deployment(config: ScenarioConfig, index: int) -> Tuple[DeploymentSequence, GenerationSummary]:
    state = _Deployment(config, index)
    return state.run(), state.summary


def generate(
    config: ScenarioConfig, count: int = 1, threads: int = 1, start: int = 0
) -> GenerationResult:
    """Generate ``count`` labelled deployments with ids ``start .. start+count-1``"""
    config.check()
    indices: Sequence[int] = range(start, start + count)
    result = GenerationResult()
    if threads > 1 and count > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outputs = list(pool.map(lambda i: generate_deployment(config, i), indices))
    else:
        outputs = [generate_deployment(config, i) for i in indices]
    for deployment, summary in outputs:
        result.deployments.append(deployment)
        result.summary.merge(summary)
    logger.info(
        f"Generated {count} setup-{config.setup} deployments "
        f"({result.summary.stopped_fraction:.1%} of {result.summary.movement_steps} movements "
        f"stopped by coverage, {result.summary.border_stops} at the map border, "
        f"{result.summary.handovers} handovers)"
    )
    return result

