import networkx as nx
import numpy as np
import pytest

from allocation import (
    CandidateChannelSets,
    InterferenceGraph,
    SynchronousNetwork,
    distributed_coloring,
    is_proper_list_coloring,
)
from tests.oracles import is_proper, proper_list_colorings


def _graph(n: int, edges) -> InterferenceGraph:
    adjacency = np.zeros((n, n), dtype=bool)
    for a, b in edges:
        adjacency[a, b] = adjacency[b, a] = True
    return InterferenceGraph(adjacency=adjacency, gamma_th=0.0)


def test_isolated_nodes_color_in_one_round(rng):
    candidates = CandidateChannelSets.from_sets([{1, 2}, {1, 2}], 3)
    state = distributed_coloring(_graph(2, []), candidates, rng, max_rounds=10)

    assert state.flag == 0, "Isolated nodes cannot conflict"
    assert state.round == 1, f"Expected one round, got {state.round}"
    assert all(color in {1, 2} for color in state.colors)


@pytest.mark.parametrize("seed", range(10))
def test_triangle_with_two_colors_fails(seed):
    edges = [(0, 1), (1, 2), (0, 2)]
    candidates = CandidateChannelSets.from_sets([{1, 2}] * 3, 3)
    state = distributed_coloring(_graph(3, edges), candidates, np.random.default_rng(seed), max_rounds=10)

    assert state.flag == 1, "Two colors cannot properly color a triangle"
    assert is_proper(edges, [{1, 2}] * 3, state.colors), "Colored nodes must still be conflict free"
    assert state.colors_unique <= 2


def test_path_with_greedy_choice_matches_enumeration(rng):
    edges = [(0, 1), (1, 2)]
    lists = [{1, 2}] * 3
    state = distributed_coloring(
        _graph(3, edges), CandidateChannelSets.from_sets(lists, 3), rng, max_rounds=10, greedy=True
    )

    assert state.flag == 0, "A path is 2-colorable"
    assert state.colors in proper_list_colorings(3, edges, lists), f"{state.colors} is not a proper coloring"
    assert state.colors[1] != state.colors[0] and state.colors[1] != state.colors[2]


@pytest.mark.parametrize("seed", range(30))
def test_path_with_random_choice_never_conflicts(seed):
    """
    Random picks may strand the middle node, but a successful run is always one of the
    enumerated proper colorings.
    """
    edges = [(0, 1), (1, 2)]
    lists = [{1, 2}] * 3
    state = distributed_coloring(
        _graph(3, edges), CandidateChannelSets.from_sets(lists, 3), np.random.default_rng(seed), max_rounds=10
    )

    if state.flag == 0:
        assert state.colors in proper_list_colorings(3, edges, lists)
    else:
        assert None in state.colors
    assert is_proper(edges, lists, state.colors)


def test_excluded_nodes_do_not_raise_the_flag(rng):
    candidates = CandidateChannelSets.from_sets([{0}, set(), {1}], 2)
    state = distributed_coloring(_graph(3, [(0, 2)]), candidates, rng, max_rounds=5)

    assert state.flag == 0
    assert state.colors == (0, None, 1)
    assert state.colors_unique == 2


def test_larger_candidate_set_yields_on_conflict():
    """
    Both nodes can only agree on channel 0 in round one under greedy choice; node 1 has the
    larger set and must give way.
    """
    candidates = CandidateChannelSets.from_sets([{0}, {0, 1}], 2)
    state = distributed_coloring(
        _graph(2, [(0, 1)]), candidates, np.random.default_rng(0), max_rounds=5, greedy=True
    )

    assert state.colors == (0, 1), f"Expected node 1 to move to channel 1, got {state.colors}"
    assert state.round == 2


@pytest.mark.parametrize("seed", range(25))
def test_random_graphs_yield_proper_list_colorings(seed):
    rng = np.random.default_rng(seed)
    n, channels = 12, 4
    graph = nx.gnp_random_graph(n, 0.3, seed=seed)
    sets = [set(rng.choice(channels, size=rng.integers(0, channels + 1), replace=False).tolist()) for _ in range(n)]
    candidates = CandidateChannelSets.from_sets(sets, channels)
    interference = _graph(n, graph.edges)

    state = distributed_coloring(interference, candidates, rng, max_rounds=100)

    assert is_proper_list_coloring(interference, candidates, state.colors)
    assert is_proper(list(graph.edges), sets, state.colors)
    for node, color in enumerate(state.colors):
        if color is None and sets[node]:
            assert state.flag == 1, "An uncolored active node must raise the flag"


def test_coloring_is_deterministic():
    graph = nx.gnp_random_graph(15, 0.4, seed=1)
    candidates = CandidateChannelSets.from_sets([{0, 1, 2, 3}] * 15, 4)
    runs = [
        distributed_coloring(_graph(15, graph.edges), candidates, np.random.default_rng(9), max_rounds=50)
        for _ in range(2)
    ]
    assert runs[0] == runs[1], "Identical seeds must reproduce the coloring"


@pytest.mark.parametrize("n", [5, 10, 20, 40])
def test_round_count_stays_within_quadratic_bound(n):
    graph = nx.gnp_random_graph(n, 0.2, seed=n)
    candidates = CandidateChannelSets.from_sets([set(range(n))] * n, n)
    state = distributed_coloring(_graph(n, graph.edges), candidates, np.random.default_rng(n), max_rounds=n * n)

    assert state.flag == 0, "n colors always suffice for n nodes"
    assert state.round <= n * n


def test_messages_reach_neighbors_only():
    network = SynchronousNetwork([[1], [0, 2], [1]])
    seen = {}

    def transition(node, state, inbox):
        seen[node] = sorted(message.sender for message in inbox)
        return state, node

    _, inboxes = network.phase([None] * 3, network.empty_inboxes(), transition)
    network.phase([None] * 3, inboxes, transition)

    assert seen == {0: [1], 1: [0, 2], 2: [1]}, f"Unexpected delivery {seen}"
    assert network.messages_sent == 8


@pytest.mark.parametrize("seed", range(5))
def test_each_round_costs_four_messages_per_edge(seed):
    """Propose and settle reach every neighbor in both directions; prune stays silent."""
    graph = nx.gnp_random_graph(12, 0.3, seed=seed)
    interference = _graph(12, graph.edges)
    candidates = CandidateChannelSets.from_sets([{0, 1, 2}] * 12, 3)
    state = distributed_coloring(interference, candidates, np.random.default_rng(seed), max_rounds=40)

    assert state.round >= 1
    assert state.messages == 4 * interference.edges * state.round, (
        f"{state.messages} messages for {interference.edges} edges over {state.round} rounds"
    )


def test_isolated_nodes_send_nothing(rng):
    candidates = CandidateChannelSets.from_sets([{0}, {1}, {0, 1}], 2)
    state = distributed_coloring(_graph(3, []), candidates, rng, max_rounds=5)
    assert state.messages == 0
