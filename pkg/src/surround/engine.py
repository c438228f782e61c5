"""Rules of Surrounding Cops and Robbers and the match harness.

Cops win by occupying every neighbor of the robber's vertex; the check runs
after every half-move including both placements. The robber wins on exact
position repetition or when the move cap runs out. Cop multisets are stored
sorted (cops are interchangeable), and the robber may never end a turn on a
cop-occupied vertex — including at placement.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .errors import RuleViolation

COP_PLACEMENT = "cop-placement"
ROBBER_PLACEMENT = "robber-placement"
COP_TURN = "cop-turn"
ROBBER_TURN = "robber-turn"
COP_WIN = "cop-win"
ROBBER_WIN = "robber-win"
INCONCLUSIVE = "inconclusive"

_PLAY_PHASES = (COP_PLACEMENT, ROBBER_PLACEMENT, COP_TURN, ROBBER_TURN)


@dataclass(frozen=True)
class GameState:
    """Immutable game position. cops is a sorted tuple; robber None = unplaced."""

    k: int
    cops: tuple = ()
    robber: int | None = None
    phase: str = COP_PLACEMENT
    move_count: int = 0

    def position(self):
        """Repetition key: multiset + robber + side to move."""
        return (self.cops, self.robber, self.phase)


def initial_state(k):
    if k < 1:
        raise RuleViolation("at least one cop required")
    return GameState(k=k)


def is_surrounded(g, state):
    """True iff every neighbor of the robber is cop-occupied (vacuous for degree 0)."""
    r = state.robber
    if r is None:
        return False
    occupied = set(state.cops)
    return all(w in occupied for w in g.adj[r])


def legal_robber_moves(g, state):
    """Closed neighborhood of the robber minus cop-occupied vertices."""
    r = state.robber
    occupied = set(state.cops)
    moves = [w for w in g.adj[r] if w not in occupied]
    if r not in occupied:
        moves.append(r)
    return sorted(moves)


def apply_move(g, state, move):
    """Validate and apply one half-move, canonicalizing the successor state.

    Cop moves are vectors aligned with the sorted cop tuple. Raises
    RuleViolation naming the violated rule; never mutates `state`.
    """
    phase = state.phase
    if phase == COP_PLACEMENT:
        cops = _as_cop_vector(state.k, move)
        for v in cops:
            _check_vertex(g, v)
        nxt = replace(state, cops=tuple(sorted(cops)), phase=ROBBER_PLACEMENT,
                      move_count=state.move_count + 1)
        return _settle(g, nxt)
    if phase == ROBBER_PLACEMENT:
        v = _as_robber_vertex(move)
        _check_vertex(g, v)
        if v in state.cops:
            raise RuleViolation("robber may not place on a cop-occupied vertex")
        nxt = replace(state, robber=v, phase=COP_TURN,
                      move_count=state.move_count + 1)
        return _settle(g, nxt)
    if phase == COP_TURN:
        targets = _as_cop_vector(state.k, move)
        for cur, tgt in zip(state.cops, targets):
            _check_vertex(g, tgt)
            if tgt != cur and not g.has_edge(cur, tgt):
                raise RuleViolation(
                    f"cop at {cur} may only stay or move to an adjacent vertex, not {tgt}"
                )
        nxt = replace(state, cops=tuple(sorted(targets)), phase=ROBBER_TURN,
                      move_count=state.move_count + 1)
        return _settle(g, nxt)
    if phase == ROBBER_TURN:
        v = _as_robber_vertex(move)
        _check_vertex(g, v)
        r = state.robber
        if v != r and not g.has_edge(r, v):
            raise RuleViolation("robber may only stay or move to an adjacent vertex")
        if v in state.cops:
            raise RuleViolation("robber may not end a turn on a cop-occupied vertex")
        nxt = replace(state, robber=v, phase=COP_TURN,
                      move_count=state.move_count + 1)
        return _settle(g, nxt)
    raise RuleViolation(f"game already over ({phase})")


def _settle(g, state):
    if state.robber is not None and is_surrounded(g, state):
        return replace(state, phase=COP_WIN)
    return state


def _as_cop_vector(k, move):
    try:
        vec = tuple(int(v) for v in move)
    except TypeError:
        raise RuleViolation("cop move must be a vector of k target vertices") from None
    if len(vec) != k:
        raise RuleViolation(f"cop move must target all {k} cops")
    return vec


def _as_robber_vertex(move):
    if isinstance(move, (tuple, list)):
        raise RuleViolation("robber move is a single vertex")
    return int(move)


def _check_vertex(g, v):
    if not 0 <= v < g.n:
        raise RuleViolation(f"vertex {v} out of range")


@dataclass
class TraceStep:
    phase: str
    move: object
    cops: tuple
    robber: int | None
    annotations: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "phase": self.phase,
            "move": list(self.move) if isinstance(self.move, tuple) else self.move,
            "cops": list(self.cops),
            "robber": self.robber,
            "annotations": self.annotations,
        }


@dataclass
class Trace:
    """Replayable record of a match: graph, k, half-moves, outcome."""

    graph: object
    k: int
    steps: list = field(default_factory=list)
    outcome: str | None = None
    forfeited_by: str | None = None

    def to_jsonl(self):
        lines = [json.dumps({
            "phase": "start",
            "move": None,
            "cops": [],
            "robber": None,
            "annotations": {"graph": self.graph.to_json(), "k": self.k},
        })]
        lines.extend(json.dumps(s.to_json()) for s in self.steps)
        lines.append(json.dumps({
            "phase": "end",
            "move": None,
            "cops": list(self.steps[-1].cops) if self.steps else [],
            "robber": self.steps[-1].robber if self.steps else None,
            "annotations": {"outcome": self.outcome, "forfeited_by": self.forfeited_by},
        }))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_jsonl(text):
        from .graph import graph_from_json

        records = [json.loads(line) for line in text.splitlines() if line.strip()]
        if not records or records[0]["phase"] != "start":
            raise RuleViolation("trace must begin with a start record")
        head = records[0]["annotations"]
        g, _ = graph_from_json(head["graph"])
        trace = Trace(graph=g, k=head["k"])
        for rec in records[1:]:
            if rec["phase"] == "end":
                trace.outcome = rec["annotations"].get("outcome")
                trace.forfeited_by = rec["annotations"].get("forfeited_by")
                break
            move = rec["move"]
            if isinstance(move, list):
                move = tuple(move)
            trace.steps.append(TraceStep(rec["phase"], move, tuple(rec["cops"]),
                                         rec["robber"], rec.get("annotations", {})))
        return trace


def replay_trace(g, trace):
    """Re-apply every half-move; returns the final state. Raises on divergence."""
    state = initial_state(trace.k)
    for step in trace.steps:
        if state.phase != step.phase:
            raise RuleViolation(f"trace phase mismatch: {state.phase} != {step.phase}")
        state = apply_move(g, state, step.move)
        if tuple(state.cops) != step.cops or state.robber != step.robber:
            raise RuleViolation("trace replay diverged")
    return state


def default_move_cap(g):
    return 4 * g.n * g.n


def play_match(g, cop_strategy, robber_strategy, k=None, move_cap=None,
               collect_annotations=True):
    """Run placements then alternation until a win, repetition, or the cap.

    An illegal move from either strategy forfeits for that side; a cop
    strategy may declare the match inconclusive (used by the bounded-D
    toroidal demonstrator), which is recorded distinctly from a robber win.
    """
    if k is None:
        k = cop_strategy.cop_budget
    if move_cap is None:
        move_cap = default_move_cap(g)
    state = initial_state(k)
    trace = Trace(graph=g, k=k)
    seen = set()

    def record(move):
        ann = {}
        if collect_annotations:
            for strat in (cop_strategy, robber_strategy):
                ann.update(strat.annotations())
        trace.steps.append(TraceStep(prev_phase, move, state.cops, state.robber, ann))

    cop_strategy.start(g, k)
    robber_strategy.start(g, k)

    while state.phase in _PLAY_PHASES:
        mover = cop_strategy if state.phase in (COP_PLACEMENT, COP_TURN) else robber_strategy
        side = "cops" if mover is cop_strategy else "robber"
        prev_phase = state.phase
        try:
            if state.phase == COP_PLACEMENT:
                move = cop_strategy.place(state)
            elif state.phase == ROBBER_PLACEMENT:
                move = robber_strategy.place(state)
            elif state.phase == COP_TURN:
                move = cop_strategy.move(state)
            else:
                move = robber_strategy.move(state)
            state = apply_move(g, state, move)
        except RuleViolation as exc:
            trace.outcome = ROBBER_WIN if side == "cops" else COP_WIN
            trace.forfeited_by = side
            trace.steps.append(TraceStep(prev_phase, None, state.cops, state.robber,
                                         {"forfeit": str(exc)}))
            return trace
        record(move)
        if state.phase == COP_WIN:
            trace.outcome = COP_WIN
            return trace
        if getattr(cop_strategy, "declared_inconclusive", False):
            trace.outcome = INCONCLUSIVE
            return trace
        if state.phase in (COP_TURN, ROBBER_TURN):
            pos = state.position()
            if pos in seen:
                trace.outcome = ROBBER_WIN
                return trace
            seen.add(pos)
        if state.move_count >= move_cap:
            trace.outcome = ROBBER_WIN
            return trace
    trace.outcome = state.phase
    return trace


class Strategy:
    """Deterministic per-side strategy: placement plus one move per turn.

    Subclasses set `role` ("cops" or "robber") and `cop_budget` for cop
    strategies. `annotations()` feeds trace rendering and may change per turn.
    """

    role = None
    cop_budget = None

    def start(self, g, k):
        self.g = g
        self.k = k

    def place(self, state):
        raise NotImplementedError

    def move(self, state):
        raise NotImplementedError

    def annotations(self):
        return {}
