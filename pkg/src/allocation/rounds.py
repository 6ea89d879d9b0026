from dataclasses import dataclass
from typing import Callable, Generic, List, Optional, Sequence, Tuple, TypeVar

S = TypeVar("S")
M = TypeVar("M")


@dataclass(frozen=True)
class Envelope(Generic[M]):
    sender: int
    payload: M


Inbox = Sequence[Envelope[M]]
Transition = Callable[[int, S, Inbox], Tuple[S, Optional[M]]]


class SynchronousNetwork(Generic[S, M]):
    """
    Lock-step message passing over fixed neighbor lists.

    A phase applies one transition ``(node, state, inbox) -> (state, broadcast)`` to every
    node; broadcasts are delivered to the sender's neighbors only and become the inboxes of
    the next phase. Transitions never see other nodes' states.
    """

    def __init__(self, neighbors: Sequence[Sequence[int]]) -> None:
        self._neighbors = [tuple(n) for n in neighbors]
        self.messages_sent = 0
        self.phases = 0

    @property
    def size(self) -> int:
        return len(self._neighbors)

    def empty_inboxes(self) -> List[List[Envelope[M]]]:
        return [[] for _ in self._neighbors]

    def phase(
            self,
            states: Sequence[S],
            inboxes: Sequence[Inbox],
            transition: Transition
    ) -> Tuple[List[S], List[List[Envelope[M]]]]:
        new_states: List[S] = []
        outbox: List[Optional[M]] = []
        for node, (state, inbox) in enumerate(zip(states, inboxes)):
            state, message = transition(node, state, inbox)
            new_states.append(state)
            outbox.append(message)

        delivered = self.empty_inboxes()
        for sender, payload in enumerate(outbox):
            if payload is None:
                continue
            for receiver in self._neighbors[sender]:
                delivered[receiver].append(Envelope(sender, payload))
                self.messages_sent += 1
        self.phases += 1
        return new_states, delivered
