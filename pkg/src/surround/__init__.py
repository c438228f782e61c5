"""Surrounding Cops and Robbers: engine, exact solver, strategies, witnesses."""

from .engine import (
    GameState,
    Strategy,
    Trace,
    apply_move,
    initial_state,
    is_surrounded,
    legal_robber_moves,
    play_match,
    replay_trace,
)
from .graph import (
    Embedding,
    Graph,
    bfs_distances,
    bipartition,
    components_minus,
    geodesic,
    is_geodesically_closed,
    parse_graph,
    trace_faces,
)
from .solver import SolveResult, solve, surrounding_cop_number

__all__ = [
    "Embedding",
    "GameState",
    "Graph",
    "SolveResult",
    "Strategy",
    "Trace",
    "apply_move",
    "bfs_distances",
    "bipartition",
    "components_minus",
    "geodesic",
    "initial_state",
    "is_geodesically_closed",
    "is_surrounded",
    "legal_robber_moves",
    "parse_graph",
    "play_match",
    "replay_trace",
    "solve",
    "surrounding_cop_number",
    "trace_faces",
]
