"""
Unit tests for the synthetic deployment generator
"""

import numpy as np
import pytest

from wlan_htnet.exceptions import ConfigError
from wlan_htnet.graph.dataset import deployment_to_json
from wlan_htnet.graph.model import NUM_CHANNELS, EdgeKind
from wlan_htnet.scenarios import (
    generate,
    generate_deployment,
    mobile_count,
    mutate_channels,
    oracle_throughput,
    scenario_config,
)
from wlan_htnet.scenarios.generator import GenerationSummary, _Ap, _Deployment, _Sta

SMALL = dict(
    n_aps_range=(2, 3),
    stas_per_ap_range=(2, 4),
    sequence_length=4,
    map_width_range=(30.0, 40.0),
    map_height_range=(20.0, 30.0),
    min_ap_spacing=5.0,
)


class TestScenarioConfig:
    """Test cases for scenario configuration"""

    def test_setup_flags(self):
        """Test which dynamics each setup enables"""
        assert scenario_config(1).mobility and not scenario_config(1).handover
        assert scenario_config(2).handover
        assert scenario_config(3).interferers == 3
        assert scenario_config(1).interferers == 0
        assert scenario_config(4).channel_mutation and not scenario_config(4).mobility
        assert scenario_config(5).handover and scenario_config(5).channel_mutation

    def test_sequence_lengths(self):
        """Test 10 snapshots by default and 100 for the long setup"""
        assert scenario_config(1).length == 10
        assert scenario_config(6).length == 100
        assert scenario_config(6, sequence_length=5).length == 5

    def test_speeds(self):
        """Test the slower speed range of setup 1"""
        assert scenario_config(1).speeds == (0.1, 0.5)
        assert scenario_config(2).speeds == (0.1, 1.0)

    def test_unknown_setup(self):
        """Test that setup 7 raises ConfigError"""
        with pytest.raises(ConfigError):
            scenario_config(7)

    def test_inverted_range(self):
        """Test that an inverted range raises ConfigError"""
        with pytest.raises(ConfigError, match="n_aps_range"):
            scenario_config(1, n_aps_range=(5, 2))


class TestHelpers:
    """Test cases for generator helpers"""

    @pytest.mark.parametrize(
        "n_stas, expected", [(0, 0), (1, 1), (4, 2), (5, 3), (7, 4), (20, 10)]
    )
    def test_mobile_count_rounds_half_up(self, n_stas, expected):
        """Test half of the STAs, rounded half up"""
        assert mobile_count(n_stas, 0.5) == expected

    def test_mutations(self):
        """Test the five bonding mutations"""
        assert mutate_channels(2, 3, 2, 0, 1) == (3, 3, 3)
        assert mutate_channels(2, 3, 2, 1, 1) == (1, 3, 2)
        assert mutate_channels(2, 3, 3, 2, 1) == (2, 4, 3)
        assert mutate_channels(2, 3, 3, 3, 1) == (2, 2, 2)
        assert mutate_channels(2, 3, 3, 4, -1) == (1, 2, 2)

    def test_invalid_mutation_is_skipped(self):
        """Test that a mutation leaving the band changes nothing"""
        assert mutate_channels(0, 3, 1, 1, 1) == (0, 3, 1)
        assert mutate_channels(4, 7, 5, 4, 1) == (4, 7, 5)
        assert mutate_channels(3, 3, 3, 3, 1) == (3, 3, 3)


class TestGenerate:
    """Test cases for deployment generation"""

    def test_deterministic(self):
        """Test that the same seed gives byte-identical deployments"""
        config = scenario_config(5, seed=11, **SMALL)
        first = [deployment_to_json(d) for d in generate(config, count=2).deployments]
        second = [deployment_to_json(d) for d in generate(config, count=2).deployments]
        assert first == second

    def test_threads_do_not_change_output(self):
        """Test that parallel generation matches sequential generation"""
        config = scenario_config(2, seed=4, **SMALL)
        sequential = generate(config, count=3, threads=1).deployments
        parallel = generate(config, count=3, threads=3).deployments
        assert [deployment_to_json(d) for d in sequential] == [
            deployment_to_json(d) for d in parallel
        ]

    def test_seed_changes_output(self):
        """Test that another seed gives another deployment"""
        a = generate_deployment(scenario_config(1, seed=1, **SMALL), 0)[0]
        b = generate_deployment(scenario_config(1, seed=2, **SMALL), 0)[0]
        assert deployment_to_json(a) != deployment_to_json(b)

    def test_count_zero(self):
        """Test that count 0 yields nothing"""
        result = generate(scenario_config(1, **SMALL), count=0)
        assert result.deployments == []
        assert result.summary.deployments == 0

    def test_ids_and_shape(self):
        """Test ids, lengths and sizes of generated deployments"""
        result = generate(scenario_config(1, **SMALL), count=3, start=10)
        assert [d.id for d in result.deployments] == [10, 11, 12]
        for dep in result.deployments:
            assert len(dep) == 4
            aps = dep.snapshots[0].aps()
            assert 2 <= len(aps) <= 3
            stas = dep.snapshots[0].stas()
            assert 2 * len(aps) <= len(stas) <= 4 * len(aps)

    def test_labels_are_the_oracle(self):
        """Test that stored labels equal the oracle on the stored state"""
        config = scenario_config(4, seed=3, **SMALL)
        dep, _ = generate_deployment(config, 0)
        for snap in dep.snapshots:
            expected = oracle_throughput(snap, config.propagation)
            assert snap.labels.keys() == expected.keys()
            for sta, value in expected.items():
                assert snap.labels[sta] == pytest.approx(value)

    def test_ap_ap_edges_are_complete(self):
        """Test one AP-AP edge per AP pair"""
        dep, _ = generate_deployment(scenario_config(1, **SMALL), 0)
        snap = dep.snapshots[0]
        n = len(snap.aps())
        ap_ap = [e for e in snap.edges if e.kind is EdgeKind.AP_AP]
        assert len(ap_ap) == n * (n - 1) // 2

    def test_positions_stay_on_map(self):
        """Test that every node stays within the map"""
        dep, _ = generate_deployment(scenario_config(2, seed=5, **SMALL), 0)
        for snap in dep.snapshots:
            for node in snap.nodes:
                assert 0.0 <= node.position[0] <= dep.map.w
                assert 0.0 <= node.position[1] <= dep.map.h

    def test_static_setup_keeps_positions(self):
        """Test that setup 4 never moves a node"""
        dep, _ = generate_deployment(scenario_config(4, seed=6, **SMALL), 0)
        first = {n.id: n.position for n in dep.snapshots[0].nodes}
        for snap in dep.snapshots[1:]:
            assert {n.id: n.position for n in snap.nodes} == first

    def test_channels_stay_valid(self):
        """Test that mutated channel ranges stay inside the band"""
        dep, _ = generate_deployment(scenario_config(5, seed=8, **SMALL), 0)
        for snap in dep.snapshots:
            for ap in snap.aps():
                lo, hi = ap.available_channels
                assert 0 <= lo <= ap.primary_channel <= hi < NUM_CHANNELS

    def test_sta_follows_ap_channels(self):
        """Test that an attached STA copies its AP's channels"""
        dep, _ = generate_deployment(scenario_config(5, seed=9, **SMALL), 0)
        for snap in dep.snapshots:
            nodes = snap.node_by_id()
            for sta in snap.stas():
                if sta.attached_ap is not None:
                    ap = nodes[sta.attached_ap]
                    assert sta.available_channels == ap.available_channels
                    assert sta.primary_channel == ap.primary_channel

    def test_no_handover_in_setup_1(self):
        """Test that setup 1 never changes a STA's AP"""
        dep, _ = generate_deployment(scenario_config(1, seed=2, **SMALL), 0)
        first = {s.id: s.attached_ap for s in dep.snapshots[0].stas()}
        for snap in dep.snapshots[1:]:
            assert {s.id: s.attached_ap for s in snap.stas()} == first

    def test_interference_sources(self):
        """Test three moving interference pairs in setup 3"""
        dep, summary = generate_deployment(scenario_config(3, seed=1, **SMALL), 0)
        first = dep.snapshots[0]
        interferers = [n for n in first.nodes if n.interferer]
        assert len(interferers) == 6
        assert sum(1 for n in interferers if n.is_ap) == 3
        assert all(n.available_channels == (0, NUM_CHANNELS - 1) for n in interferers if n.is_ap)
        assert not set(first.target_sta_ids()) & {n.id for n in interferers}
        moved = {n.id: n.position for n in dep.snapshots[-1].nodes if n.interferer and n.is_ap}
        assert any(moved[n.id] != n.position for n in interferers if n.is_ap)
        assert summary.mobile_stas == 0

    def test_mobile_fraction(self):
        """Test that half of each AP's STAs move"""
        config = scenario_config(1, seed=3, **SMALL)
        dep, summary = generate_deployment(config, 0)
        first = dep.snapshots[0]
        expected = sum(
            mobile_count(sum(1 for s in first.stas() if s.attached_ap == ap.id), 0.5)
            for ap in first.aps()
        )
        assert summary.mobile_stas == expected

    def test_stopped_fraction(self):
        """Test the stopped fraction bookkeeping"""
        result = generate(scenario_config(1, seed=3, **SMALL), count=2)
        summary = result.summary
        assert summary.deployments == 2
        assert 0.0 <= summary.stopped_fraction <= 1.0
        assert summary.coverage_stops + summary.border_stops <= summary.mobile_stas
        assert summary.movement_steps >= summary.coverage_stops + summary.border_stops

    def test_stopped_fraction_counts_movement_steps(self):
        """Test that coverage stops are divided by attempted steps and border stops are kept apart"""
        state = _Deployment(scenario_config(1, seed=3, **SMALL), 0)
        state.width = state.height = 400.0
        ap = _Ap(0, np.array([200.0, 200.0]), 0, 0, 0)
        state.aps = [ap]
        state.ap_by_id = {0: ap}
        radius = state.propagation.coverage_radius()
        step = np.array([0.1, 0.0])
        moving = _Sta(1, 0, np.array([200.0, 200.0]), velocity=step)
        leaving = _Sta(2, 0, np.array([200.0 + radius - 0.05, 200.0]), velocity=step)
        at_border = _Sta(3, 0, np.array([399.95, 200.0]), velocity=step)
        state.stas = [moving, leaving, at_border]
        state.summary = GenerationSummary(deployments=1, mobile_stas=3)

        state._move_stas()
        state._move_stas()

        summary = state.summary
        assert summary.movement_steps == 4
        assert summary.coverage_stops == 1
        assert summary.border_stops == 1
        assert summary.stopped_fraction == pytest.approx(0.25)
        # stops per mobile STA would give 2/3 here
        assert summary.stopped_fraction != pytest.approx(2 / 3)
        assert leaving.stopped and at_border.stopped and not moving.stopped
        np.testing.assert_allclose(moving.position, [200.2, 200.0])

    def test_labels_are_finite(self):
        """Test finite non-negative labels in every setup"""
        for setup in range(1, 7):
            dep, _ = generate_deployment(scenario_config(setup, sequence_length=3, **{
                k: v for k, v in SMALL.items() if k != "sequence_length"
            }), 0)
            values = [y for snap in dep.snapshots for y in snap.labels.values()]
            assert values and np.all(np.isfinite(values)) and min(values) >= 0.0
