import numpy as np
import pytest

from allocation import (
    allocate_channels,
    build_interference_graph,
    coloring_target,
    is_proper_list_coloring,
    probe_objective,
)
from channel.gains import GainTable
from metrics.link import UNASSIGNED
from tests.builders import constant_gains, placeholder_scenario, random_gains, unit_config


def _pair_gains(n_cu: int) -> GainTable:
    """
    Two single-receiver MGs that both profit from every channel. MGTx 1 reaches group 0 at
    0.5 while MGTx 0 reaches group 1 at 0.05, so their cross gains differ by 0.45.
    """
    h_gr = [
        np.stack([np.full((1, n_cu), 1.0), np.full((1, n_cu), 0.5)]),
        np.stack([np.full((1, n_cu), 0.05), np.full((1, n_cu), 1.0)]),
    ]
    h_cr = [np.zeros((n_cu, 1)), np.zeros((n_cu, 1))]
    return GainTable.from_channel_gains(np.full(n_cu, 4.0), np.full((2, n_cu), 0.1), h_gr, h_cr)


def test_single_mg_gets_a_channel_in_one_iteration(rng):
    gains = constant_gains(2, 1, cb=4.0, gb=0.1, cu_rx=0.0)
    result = allocate_channels(placeholder_scenario(2, [1]), gains, unit_config(), rng)

    assert result.outer_iters == 1, f"Expected one outer iteration, got {result.outer_iters}"
    assert result.channels[0] in {0, 1}
    assert result.trace[0].edges == 0


def test_shared_singleton_set_lowers_threshold_until_both_fit(rng):
    """
    With one channel the MGs can only both be served when they are not adjacent, which
    happens once gamma_th drops to the 0.45 cross-gain gap.
    """
    config = unit_config(gamma_th_init=1.0, delta=0.3)
    result = allocate_channels(placeholder_scenario(1, [1, 1]), _pair_gains(1), config, rng)

    assert [record.flag for record in result.trace] == [1, 1, 0]
    assert [record.edges for record in result.trace] == [1, 1, 0]
    gammas = [record.gamma_th for record in result.trace]
    assert gammas == sorted(gammas, reverse=True), f"Threshold must fall after failures, got {gammas}"
    assert result.channels.tolist() == [0, 0]
    assert result.gamma_th == pytest.approx(0.4)


def test_too_few_colors_raises_threshold():
    """Greedy picks put both MGs on channel 0 until an edge forces them apart."""
    config = unit_config(gamma_th_init=0.1, delta=0.3, color_choice="greedy")
    result = allocate_channels(placeholder_scenario(2, [1, 1]), _pair_gains(2), config, np.random.default_rng(0))

    assert [record.colors_unique for record in result.trace] == [1, 1, 2]
    gammas = [record.gamma_th for record in result.trace]
    assert gammas == sorted(gammas), f"Threshold must rise after sparse colorings, got {gammas}"
    assert sorted(result.channels.tolist()) == [0, 1]


def test_last_iteration_falls_back_to_zero_threshold(rng):
    config = unit_config(gamma_th_init=1.0, delta=0.01, max_outer_iters=3)
    result = allocate_channels(placeholder_scenario(1, [1, 1]), _pair_gains(1), config, rng)

    assert result.outer_iters == 3
    assert result.trace[-1].gamma_th == 0.0
    assert result.trace[-1].flag == 0
    assert result.channels.tolist() == [0, 0]


def test_excluded_mg_stays_unassigned(rng):
    h_gb = np.array([[0.1, 0.1], [1e6, 1e6]])
    gains = constant_gains(2, 2, cb=4.0, h_gb=h_gb, cu_rx=0.0)
    result = allocate_channels(placeholder_scenario(2, [1, 1]), gains, unit_config(), rng)

    assert result.candidates.excluded == (1,)
    assert result.channels[1] == UNASSIGNED
    assert result.excluded.tolist() == [1]
    assert result.channels[0] != UNASSIGNED


def test_all_excluded_returns_empty_assignment(rng):
    gains = constant_gains(2, 2, cb=4.0, gb=1e6)
    result = allocate_channels(placeholder_scenario(2, [1, 1]), gains, unit_config(), rng)

    assert (result.channels == UNASSIGNED).all()
    assert coloring_target(result.candidates, 2) == 0


@pytest.mark.parametrize("seed", range(20))
def test_random_instances_yield_proper_complete_colorings(seed):
    rng = np.random.default_rng(seed)
    sizes = [2, 2, 1, 2]
    gains = random_gains(rng, 2, sizes)
    config = unit_config()
    result = allocate_channels(placeholder_scenario(2, sizes), gains, config, rng)

    assert result.outer_iters <= config.max_outer_iters
    for g in result.candidates.active:
        assert result.channels[g] in result.candidates.sets[g], f"MG {g} got {result.channels[g]} outside C_g"
    graph = build_interference_graph(result.candidates, gains, result.gamma_th)
    colors = [None if c == UNASSIGNED else int(c) for c in result.channels]
    assert is_proper_list_coloring(graph, result.candidates, colors)


def test_best_coloring_has_highest_full_power_score():
    config = unit_config(gamma_th_init=0.1, delta=0.3, color_choice="greedy")
    gains = _pair_gains(2)
    result = allocate_channels(placeholder_scenario(2, [1, 1]), gains, config, np.random.default_rng(0))

    shared = probe_objective(np.array([0, 0]), gains, config)
    split = probe_objective(result.channels, gains, config)
    assert split > shared, "Separate channels must beat sharing one"


def test_allocation_is_deterministic():
    sizes = [1, 3, 2, 2, 1]
    gains = random_gains(np.random.default_rng(3), 3, sizes)
    runs = [
        allocate_channels(placeholder_scenario(3, sizes), gains, unit_config(), np.random.default_rng(42))
        for _ in range(2)
    ]
    assert runs[0].channels.tolist() == runs[1].channels.tolist()
    assert runs[0].trace == runs[1].trace


def _uneven_single_mg() -> GainTable:
    """One MG that profits from both channels, more so from channel 1 where it barely reaches the BS."""
    return constant_gains(2, 1, cb=4.0, h_gb=np.array([[0.5, 0.1]]), cu_rx=0.0)


def test_accepted_graph_is_recolored_refine_times(rng):
    config = unit_config(refine_colorings=3)
    result = allocate_channels(placeholder_scenario(2, [1]), _uneven_single_mg(), config, rng)

    assert result.outer_iters == 4, f"Expected 1 + 3 colorings, got {result.outer_iters}"
    assert all(record.flag == 0 for record in result.trace)
    assert {record.gamma_th for record in result.trace} == {config.gamma_th_init}, "Refinements keep the threshold"


def test_recoloring_keeps_the_best_scoring_channel(rng):
    config = unit_config(refine_colorings=30)
    gains = _uneven_single_mg()
    result = allocate_channels(placeholder_scenario(2, [1]), gains, config, rng)

    assert result.candidates.sets[0] == frozenset({0, 1})
    assert probe_objective(np.array([1]), gains, config) > probe_objective(np.array([0]), gains, config)
    assert result.channels.tolist() == [1], f"Picked {result.channels.tolist()} over the stronger channel"


def test_recoloring_counts_against_the_iteration_cap(rng):
    config = unit_config(refine_colorings=10, max_outer_iters=4)
    result = allocate_channels(placeholder_scenario(2, [1]), _uneven_single_mg(), config, rng)

    assert result.outer_iters == 4
    assert result.channels[0] in {0, 1}
