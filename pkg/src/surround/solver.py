"""Exact surrounding-cop-number solver by backward-induction attractor.

Positions are (sorted cop multiset, robber vertex, side to move). The cop-win
set is the least fixed point of backward reachability into the surrounded
set, computed with a frontier queue and per-position out-degree counters on
robber nodes so every edge relaxes once. Ranks (BFS levels) drive the
optimal-play oracle.
"""

from __future__ import annotations

import os
from array import array
from collections import deque
from itertools import combinations_with_replacement, product
from math import comb

from . import engine
from .errors import RuleViolation, SizeError, StrategyError

DEFAULT_BUDGET = 2 * 1024 ** 3


class PositionIndex:
    """Bijection between (cop multiset, robber, side) and dense integers.

    Multisets are enumerated in colex order. Side 0 = cops to move,
    side 1 = robber to move; the flat id is (side * M + multiset_rank) * n + r.
    """

    def __init__(self, n, k):
        self.n = n
        self.k = k
        self.multisets = sorted(
            combinations_with_replacement(range(n), k), key=lambda t: t[::-1]
        )
        self.rank_of = {m: i for i, m in enumerate(self.multisets)}
        self.m_count = len(self.multisets)

    def encode(self, cops, robber, side):
        return (side * self.m_count + self.rank_of[tuple(sorted(cops))]) * self.n + robber

    def decode(self, code):
        code, robber = divmod(code, self.n)
        side, m_rank = divmod(code, self.m_count)
        return self.multisets[m_rank], robber, side

    def size(self):
        return self.m_count * self.n * 2


def estimate_bytes(n, k):
    m = comb(n + k - 1, k)
    positions = m * n
    # flags + counters + two rank arrays + compressed successor lists
    per_pos = 1 + 1 + 1 + 4 + 4
    succ_guess = m * min(64, 4 ** k) * 4
    return positions * per_pos + succ_guess


class SolveResult:
    """Attractor output for a fixed cop count plus the optimal-move oracle."""

    def __init__(self, graph, k, index, c2m_win, r2m_win, c2m_rank, r2m_rank,
                 cop_succ_flat, cop_succ_off, winning_starts):
        self.graph = graph
        self.k = k
        self.index = index
        self.c2m_win = c2m_win
        self.r2m_win = r2m_win
        self.c2m_rank = c2m_rank
        self.r2m_rank = r2m_rank
        self._succ_flat = cop_succ_flat
        self._succ_off = cop_succ_off
        self.winning_starts = winning_starts

    # -- queries --------------------------------------------------------------

    def cop_wins(self, cops, robber, side):
        n = self.graph.n
        m_rank = self.index.rank_of[tuple(sorted(cops))]
        pos = m_rank * n + robber
        return bool(self.c2m_win[pos] if side == 0 else self.r2m_win[pos])

    def cop_win_count(self):
        return sum(self.c2m_win) + sum(self.r2m_win)

    def _cop_successors(self, m_rank):
        return self._succ_flat[self._succ_off[m_rank]:self._succ_off[m_rank + 1]]

    def best_cop_placement(self):
        if not self.winning_starts:
            return None
        return self.winning_starts[0]

    def best_cop_move(self, state):
        """A cop move strictly decreasing the attractor rank.

        Raises StrategyError when called on a losing cop-to-move position.
        """
        n = self.graph.n
        idx = self.index
        c_rank = idx.rank_of[state.cops]
        r = state.robber
        pos = c_rank * n + r
        if not self.c2m_win[pos]:
            raise StrategyError("cop side has no winning move from this position")
        target_rank = self.c2m_rank[pos] - 1
        best = None
        for c2 in self._cop_successors(c_rank):
            p2 = c2 * n + r
            if self.r2m_win[p2] and self.r2m_rank[p2] <= target_rank:
                cand = idx.multisets[c2]
                if best is None or cand < best:
                    best = cand
        if best is None:
            raise StrategyError("rank bookkeeping broke: no descending successor")
        return _align_cop_vector(self.graph, state.cops, best)

    def best_robber_move(self, state):
        """Stay outside the attractor when possible, else maximize the rank."""
        n = self.graph.n
        c_rank = self.index.rank_of[state.cops]
        base = c_rank * n
        safe, best, best_rank = None, None, -1
        for r2 in engine.legal_robber_moves(self.graph, state):
            p2 = base + r2
            if not self.c2m_win[p2]:
                if safe is None:
                    safe = r2
            elif self.c2m_rank[p2] > best_rank:
                best, best_rank = r2, self.c2m_rank[p2]
        if safe is not None:
            return safe
        if best is None:
            raise StrategyError("robber has no legal move")
        return best

    def best_robber_placement(self, cops):
        n = self.graph.n
        c_rank = self.index.rank_of[tuple(sorted(cops))]
        base = c_rank * n
        occupied = set(cops)
        safe, best, best_rank = None, None, -1
        for r in range(n):
            if r in occupied:
                continue
            pos = base + r
            if not self.c2m_win[pos]:
                if safe is None:
                    safe = r
            elif self.c2m_rank[pos] > best_rank:
                best, best_rank = r, self.c2m_rank[pos]
        if safe is not None:
            return safe
        return best


def memory_budget():
    return int(os.environ.get("SURROUND_MEMORY_BUDGET", DEFAULT_BUDGET))


def solve(g, k, max_memory=None):
    """Full attractor for k cops on g. Raises SizeError over the budget."""
    if k < 1:
        raise RuleViolation("at least one cop required")
    n = g.n
    if n == 0:
        raise RuleViolation("empty graph")
    budget = max_memory if max_memory is not None else memory_budget()
    need = estimate_bytes(n, k)
    if need > budget:
        raise SizeError(
            f"solving needs ~{need} bytes, budget is {budget}", required_bytes=need
        )
    idx = PositionIndex(n, k)
    m_count = idx.m_count
    multisets = idx.multisets
    rank_of = idx.rank_of

    closed_adj = [tuple(sorted(g.adj[r] + (r,))) for r in range(n)]
    nbr_mask = [0] * n
    for r in range(n):
        for w in g.adj[r]:
            nbr_mask[r] |= 1 << w

    occ_mask = [0] * m_count
    for i, ms in enumerate(multisets):
        m = 0
        for v in ms:
            m |= 1 << v
        occ_mask[i] = m

    # cop transition relation on multisets (symmetric: moves are reversible)
    succ_off = array("i", [0] * (m_count + 1))
    succ_flat = array("i")
    for i, ms in enumerate(multisets):
        seen = set()
        for t in product(*(closed_adj[v] for v in ms)):
            seen.add(tuple(sorted(t)))
        row = sorted(rank_of[t] for t in seen)
        succ_flat.extend(row)
        succ_off[i + 1] = len(succ_flat)

    positions = m_count * n
    c2m_win = bytearray(positions)
    r2m_win = bytearray(positions)
    c2m_rank = array("i", [0]) * positions
    r2m_rank = array("i", [0]) * positions
    counter = array("i", [0]) * positions

    queue = deque()
    # T: surrounded positions, terminal for either side to move
    for ci in range(m_count):
        occ = occ_mask[ci]
        base = ci * n
        for r in range(n):
            pos = base + r
            nm = nbr_mask[r]
            deg_plus = len(closed_adj[r])
            counter[pos] = deg_plus - (((nm | (1 << r)) & occ).bit_count())
            if nm & occ == nm:
                r2m_win[pos] = 1
                queue.append(pos << 1 | 1)
                if not (occ >> r) & 1:
                    c2m_win[pos] = 1
                    queue.append(pos << 1)

    # backward induction: each edge relaxed once
    pop = queue.popleft
    push = queue.append
    while queue:
        packed = pop()
        pos = packed >> 1
        ci, r = divmod(pos, n)
        if packed & 1:
            # robber-to-move win: every cop predecessor can enter it
            rk = r2m_rank[pos] + 1
            for j in range(succ_off[ci], succ_off[ci + 1]):
                c2 = succ_flat[j]
                p2 = c2 * n + r
                if not c2m_win[p2] and not (occ_mask[c2] >> r) & 1:
                    c2m_win[p2] = 1
                    c2m_rank[p2] = rk
                    push(p2 << 1)
        else:
            # cop-to-move win: count down robber predecessors (c, r2)
            rk = c2m_rank[pos] + 1
            base = ci * n
            for r2 in closed_adj[r]:
                p2 = base + r2
                if not r2m_win[p2]:
                    counter[p2] -= 1
                    if counter[p2] == 0:
                        r2m_win[p2] = 1
                        r2m_rank[p2] = rk
                        push(p2 << 1 | 1)

    winning_starts = []
    for ci in range(m_count):
        occ = occ_mask[ci]
        base = ci * n
        ok = True
        for r in range(n):
            if not (occ >> r) & 1 and not c2m_win[base + r]:
                ok = False
                break
        if ok:
            winning_starts.append(multisets[ci])

    return SolveResult(g, k, idx, c2m_win, r2m_win, c2m_rank, r2m_rank,
                       succ_flat, succ_off, winning_starts)


def surrounding_cop_number(g, k_max, max_memory=None):
    """Least k <= k_max with a winning start, else None (unknown beyond k_max)."""
    for k in range(1, k_max + 1):
        if solve(g, k, max_memory=max_memory).winning_starts:
            return k
    return None


def _align_cop_vector(g, current, target_multiset):
    """Turn a target multiset into a move vector aligned with sorted cops.

    Greedy bipartite assignment works because the target is known reachable:
    we match each current cop (processed in sorted order) to the smallest
    still-unused target in its closed neighborhood that leaves the rest
    matchable (checked by recursion with memo on small k).
    """
    targets = list(target_multiset)
    k = len(targets)

    def feasible(i, remaining):
        if i == k:
            return not remaining
        v = current[i]
        allowed = set(g.adj[v]) | {v}
        for j, t in enumerate(remaining):
            if t in allowed:
                if feasible(i + 1, remaining[:j] + remaining[j + 1:]):
                    return True
        return False

    vector = []
    remaining = tuple(targets)
    for i in range(k):
        v = current[i]
        allowed = set(g.adj[v]) | {v}
        chosen = None
        for j, t in enumerate(remaining):
            if t in allowed and feasible(i + 1, remaining[:j] + remaining[j + 1:]):
                chosen = j
                break
        if chosen is None:
            raise StrategyError("target multiset not reachable in one cop move")
        vector.append(remaining[chosen])
        remaining = remaining[:chosen] + remaining[chosen + 1:]
    return tuple(vector)


class SolverCopStrategy(engine.Strategy):
    """Plays the attractor oracle; passes forever from losing positions."""

    role = "cops"

    def __init__(self, result):
        self.result = result
        self.cop_budget = result.k

    def place(self, state):
        start = self.result.best_cop_placement()
        if start is None:
            start = self.result.index.multisets[0]
        return start

    def move(self, state):
        pos_winning = self.result.cop_wins(state.cops, state.robber, 0)
        if not pos_winning:
            return state.cops
        return self.result.best_cop_move(state)


class SolverRobberStrategy(engine.Strategy):
    """Stays outside the cop-win set whenever the position allows it."""

    role = "robber"

    def __init__(self, result):
        self.result = result

    def place(self, state):
        r = self.result.best_robber_placement(state.cops)
        if r is None:
            raise RuleViolation("no legal robber placement")
        return r

    def move(self, state):
        return self.result.best_robber_move(state)
