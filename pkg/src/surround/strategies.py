"""Strategy scaffolding plus the simple scripted cops and robbers.

Cop strategies track logical cop identities (the engine canonicalizes the
multiset away) and translate per-cop targets into move vectors aligned with
the sorted cop tuple. The orchestrated strategies (planar, outerplanar,
toroidal) subclass CoordinatedCops and drive guards from a generator that
yields once per cop turn.
"""

from __future__ import annotations

import random
from collections import deque

from . import engine
from .errors import StrategyError
from .graph import bfs_distances


class CoordinatedCops(engine.Strategy):
    """Base for cop strategies that steer named cops across turns.

    Subclasses implement `initial_positions()` and `turn(state) -> list of
    target vertices per logical cop`. The base keeps `self.pos` in sync and
    emits vectors aligned with the engine's sorted cop tuple.
    """

    role = "cops"

    def start(self, g, k):
        super().start(g, k)
        self.pos = None
        self._annotations = {}

    def initial_positions(self):
        raise NotImplementedError

    def turn(self, state):
        raise NotImplementedError

    def annotations(self):
        return self._annotations

    def place(self, state):
        self.pos = list(self.initial_positions())
        if len(self.pos) != self.k:
            raise StrategyError("placement must cover every cop")
        return tuple(self.pos)

    def move(self, state):
        if tuple(sorted(self.pos)) != state.cops:
            raise StrategyError("logical cop positions diverged from the engine")
        new_pos = list(self.turn(state))
        if len(new_pos) != self.k:
            raise StrategyError("turn() must target every cop")
        for old, new in zip(self.pos, new_pos):
            if old != new and not self.g.has_edge(old, new):
                raise StrategyError(f"illegal cop step {old} -> {new}")
        vector = _align_vector(self.pos, new_pos, state.cops)
        self.pos = new_pos
        return vector


def _align_vector(old_pos, new_pos, sorted_cops):
    """Assign logical cops to the engine's sorted slots by current vertex."""
    pool = {}
    for i, v in enumerate(old_pos):
        pool.setdefault(v, []).append(i)
    vector = []
    for v in sorted_cops:
        i = pool[v].pop()
        vector.append(new_pos[i])
    return tuple(vector)


class IdPool:
    """Hands out logical cop ids; exhausting it means the budget argument broke."""

    def __init__(self, ids):
        self.free = list(ids)

    def take(self, count):
        if count > len(self.free):
            raise StrategyError(f"cop budget exhausted: need {count}, have {len(self.free)}")
        out = [self.free.pop(0) for _ in range(count)]
        return out

    def release(self, ids):
        for i in ids:
            self.free.append(i)
        self.free.sort()

    def in_use(self, total):
        return total - len(self.free)


# -- robbers ------------------------------------------------------------------


class GreedyRobber(engine.Strategy):
    """Maximizes distance to the nearest cop, lex tie-break; stays if best."""

    role = "robber"

    def _cop_distance(self, cops):
        dist = [-1] * self.g.n
        q = deque()
        for c in set(cops):
            dist[c] = 0
            q.append(c)
        while q:
            u = q.popleft()
            for w in self.g.adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return dist

    def place(self, state):
        dist = self._cop_distance(state.cops)
        best = max(range(self.g.n), key=lambda v: (dist[v], -v))
        if best in state.cops:
            raise StrategyError("no free vertex to place the robber")
        return best

    def move(self, state):
        dist = self._cop_distance(state.cops)
        moves = engine.legal_robber_moves(self.g, state)
        return max(moves, key=lambda v: (dist[v], v == state.robber, -v))


class RandomRobber(engine.Strategy):
    """Uniform legal moves from a seeded generator; deterministic per seed."""

    role = "robber"

    def __init__(self, seed=0):
        self.seed = seed

    def start(self, g, k):
        super().start(g, k)
        self.rng = random.Random(self.seed)

    def place(self, state):
        free = [v for v in range(self.g.n) if v not in state.cops]
        return self.rng.choice(free)

    def move(self, state):
        return self.rng.choice(engine.legal_robber_moves(self.g, state))


class StationaryRobber(engine.Strategy):
    """Places far from the cops and only moves when forced."""

    role = "robber"

    def place(self, state):
        dist = GreedyRobber._cop_distance(self, state.cops)
        return max(range(self.g.n), key=lambda v: (dist[v], -v))

    def move(self, state):
        moves = engine.legal_robber_moves(self.g, state)
        if state.robber in moves:
            return state.robber
        dist = GreedyRobber._cop_distance(self, state.cops)
        return max(moves, key=lambda v: (dist[v], -v))


# -- scripted cop batteries (adversaries for the evasion suites) --------------


class GreedyChaserCops(CoordinatedCops):
    """Every cop walks a shortest path toward the robber's current vertex."""

    def __init__(self, k):
        self.cop_budget = k

    def initial_positions(self):
        return [0] * self.k

    def turn(self, state):
        dist = bfs_distances(self.g, state.robber)
        out = []
        for v in self.pos:
            if dist[v] <= 0:
                out.append(v)
            else:
                out.append(min(w for w in self.g.adj[v] if dist[w] == dist[v] - 1))
        return out


class SurrounderCops(CoordinatedCops):
    """Greedily assigns cops to distinct neighbors of the robber and closes in."""

    def __init__(self, k):
        self.cop_budget = k

    def initial_positions(self):
        return [min(i, self.g.n - 1) for i in range(self.k)]

    def turn(self, state):
        g = self.g
        goals = list(g.adj[state.robber])
        assigned = {}
        taken = set()
        for v in sorted(set(self.pos)):
            dists = bfs_distances(g, v)
            options = [t for t in goals if t not in taken]
            if options:
                tgt = min(options, key=lambda t: (dists[t], t))
                taken.add(tgt)
                for i, p in enumerate(self.pos):
                    if p == v and i not in assigned:
                        assigned[i] = tgt
                        break
        out = []
        for i, v in enumerate(self.pos):
            tgt = assigned.get(i, state.robber)
            dist_t = bfs_distances(g, tgt)
            if dist_t[v] <= 0:
                out.append(v)
            else:
                out.append(min(w for w in g.adj[v] if dist_t[w] == dist_t[v] - 1))
        return out


class RandomCops(CoordinatedCops):
    def __init__(self, k, seed=0):
        self.cop_budget = k
        self.seed = seed

    def start(self, g, k):
        super().start(g, k)
        self.rng = random.Random(self.seed)

    def initial_positions(self):
        return [self.rng.randrange(self.g.n) for _ in range(self.k)]

    def turn(self, state):
        return [
            self.rng.choice(list(self.g.adj[v]) + [v]) for v in self.pos
        ]


class CamperCops(CoordinatedCops):
    """Places spread over the graph and never moves; a do-nothing baseline."""

    def __init__(self, k):
        self.cop_budget = k

    def initial_positions(self):
        stride = max(1, self.g.n // self.k)
        return [(i * stride) % self.g.n for i in range(self.k)]

    def turn(self, state):
        return list(self.pos)


class PatrolCops(CoordinatedCops):
    """Cops sweep the vertex order cyclically, one step along a BFS path."""

    def __init__(self, k):
        self.cop_budget = k

    def start(self, g, k):
        super().start(g, k)
        self._goal = [0] * k

    def initial_positions(self):
        return [i % self.g.n for i in range(self.k)]

    def turn(self, state):
        g = self.g
        out = []
        for i, v in enumerate(self.pos):
            if v == self._goal[i]:
                self._goal[i] = (self._goal[i] + 1 + i) % g.n
            dist = bfs_distances(g, self._goal[i])
            if dist[v] <= 0:
                out.append(v)
            else:
                out.append(min(w for w in g.adj[v] if dist[w] == dist[v] - 1))
        return out


# -- trees ---------------------------------------------------------------------


class TreeChaseCops(CoordinatedCops):
    """Two-cop tree win: a pusher walks onto the robber, a rear guard seals.

    The pusher advances one step along the unique tree path toward the robber
    every turn; the rear guard occupies the pusher's previous vertex, so the
    robber can never slip past, and its territory shrinks until a leaf traps
    it or every neighbor is covered.
    """

    cop_budget = 2

    def __init__(self, extra_cops=0):
        # extra cops beyond the two used ride along to honor a larger budget
        self.cop_budget = 2 + extra_cops

    def initial_positions(self):
        return [0] * self.cop_budget

    def turn(self, state):
        g = self.g
        pusher, rear = self.pos[0], self.pos[1]
        dist = bfs_distances(g, state.robber)
        if dist[pusher] > 0:
            nxt = min(w for w in g.adj[pusher] if dist[w] == dist[pusher] - 1)
        else:
            nxt = pusher
        out = [nxt, pusher if nxt != pusher else rear]
        out.extend(self.pos[2:])
        return out
