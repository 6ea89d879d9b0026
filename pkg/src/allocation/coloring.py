import logging
from dataclasses import dataclass, replace
from typing import FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from allocation.candidates import CandidateChannelSets
from allocation.graph import InterferenceGraph
from allocation.rounds import Inbox, SynchronousNetwork

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ColorAnnouncement:
    color: Optional[int]
    candidate_count: int


@dataclass(frozen=True)
class NodeState:
    index: int
    candidates: FrozenSet[int]
    palette: FrozenSet[int]
    color: Optional[int] = None
    preference: Tuple[int, ...] = ()

    @property
    def rank(self) -> Tuple[int, int]:
        return len(self.candidates), self.index

    @property
    def waiting(self) -> bool:
        return self.color is None and bool(self.palette)


@dataclass(frozen=True)
class ColoringState:
    colors: Tuple[Optional[int], ...]
    palettes: Tuple[FrozenSet[int], ...]
    round: int
    flag: int
    colors_unique: int
    messages: int = 0


class _ColoringProgram:
    """Node program of the list coloring; ``rngs[g]`` is node g's private coin."""

    def __init__(self, rngs: Sequence[np.random.Generator], greedy: bool) -> None:
        self._rngs = rngs
        self._greedy = greedy

    def _pick(self, state: NodeState) -> int:
        if self._greedy:
            return next(k for k in state.preference if k in state.palette)
        options = sorted(state.palette)
        return options[int(self._rngs[state.index].integers(len(options)))]

    def propose(self, node: int, state: NodeState, inbox: Inbox):
        if state.waiting:
            state = replace(state, color=self._pick(state))
        return state, ColorAnnouncement(state.color, len(state.candidates))

    def settle(self, node: int, state: NodeState, inbox: Inbox):
        if state.color is not None:
            loses = any(
                msg.payload.color == state.color and state.rank > (msg.payload.candidate_count, msg.sender)
                for msg in inbox
            )
            if loses:
                state = replace(state, color=None)
        return state, ColorAnnouncement(state.color, len(state.candidates))

    def prune(self, node: int, state: NodeState, inbox: Inbox):
        if state.color is None:
            taken = {msg.payload.color for msg in inbox if msg.payload.color is not None}
            state = replace(state, palette=state.palette - taken)
        return state, None


def distributed_coloring(
        graph: InterferenceGraph,
        candidates: CandidateChannelSets,
        rng: np.random.Generator,
        max_rounds: int,
        greedy: bool = False
) -> ColoringState:
    """
    Synchronous list coloring of the interference graph.

    Each round: uncolored nodes pick a color from their palette and announce it; on a
    monochromatic edge the endpoint with the larger candidate set (larger index on ties)
    drops its color; final colors are re-announced and uncolored nodes strike them from
    their palettes. Stops when no uncolored node has colors left or after ``max_rounds``.
    ``flag`` is 1 when a node with a nonempty candidate set ends uncolored.
    """
    network: SynchronousNetwork[NodeState, ColorAnnouncement] = SynchronousNetwork(graph.neighbors)
    program = _ColoringProgram(rng.spawn(graph.size), greedy)
    states: List[NodeState] = [
        NodeState(
            index=g,
            candidates=channels,
            palette=channels,
            preference=tuple(sorted(channels, key=lambda k, g=g: (-candidates.deltas[g, k], k))),
        )
        for g, channels in enumerate(candidates.sets)
    ]

    rounds = 0
    while rounds < max_rounds and any(state.waiting for state in states):
        rounds += 1
        states, inboxes = network.phase(states, network.empty_inboxes(), program.propose)
        states, inboxes = network.phase(states, inboxes, program.settle)
        states, _ = network.phase(states, inboxes, program.prune)

    colors = tuple(state.color for state in states)
    flag = int(any(state.color is None and state.candidates for state in states))
    if flag:
        logger.debug("Coloring at gamma_th=%.3e failed after %d round(s)", graph.gamma_th, rounds)
    return ColoringState(
        colors=colors,
        palettes=tuple(state.palette for state in states),
        round=rounds,
        flag=flag,
        colors_unique=len({c for c in colors if c is not None}),
        messages=network.messages_sent,
    )


def is_proper_list_coloring(
        graph: InterferenceGraph,
        candidates: CandidateChannelSets,
        colors: Sequence[Optional[int]]
) -> bool:
    """No edge joins two equal colors and every color comes from its node's candidate set."""
    for g, color in enumerate(colors):
        if color is not None and color not in candidates.sets[g]:
            return False
    return all(
        colors[g] is None or colors[g] != colors[j]
        for g, j in graph.edge_list()
    )
