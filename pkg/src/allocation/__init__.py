from allocation.rounds import Envelope, SynchronousNetwork
from allocation.candidates import CandidateChannelSets, candidate_sets
from allocation.graph import InterferenceGraph, build_interference_graph
from allocation.coloring import ColoringState, distributed_coloring, is_proper_list_coloring
from allocation.channels import ChannelAssignment, allocate_channels, coloring_target, probe_objective
from allocation.power import (
    PowerState,
    allocate_all_powers,
    allocate_power,
    interference_budget,
    resolve_conflicts,
)
