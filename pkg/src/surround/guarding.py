"""Shadow bookkeeping and path-guarding cop sub-strategies.

A guard owns a path inside a fixed host (robber region plus the path, with
optional deleted edges) and walks a small state machine:

  route  - each cop beelines to the path's first vertex
  chase  - the stacked cops track a virtual index that closes on the shadow
  stalk  - the formation follows the shadow; entry to the path is blocked
  push   - bipartite two-cop guards force a robber standing on the path off

Distances never change because hosts are immutable, so the shadow is a table
lookup. Guards raise StrategyError when one of their guaranteed invariants
breaks; that signals an engine or strategy bug, never a robber win.

Besides the four guard modes of the text (three-cop, two-cop-closed,
bipartite two- and one-cop), the maneuver machinery uses auxiliary
formations: the bottom pair (two-low), top pair (two-high) and the single
top/bottom trackers used while switching paths. Auxiliary guards skip the
no-entry and coverage assertions; the strategy layer owns those jointly.
"""

from __future__ import annotations

from collections import deque

from .errors import GuardSetupError, StrategyError
from .graph import bfs_distances

THREE = "three-cop"
TWO_CLOSED = "two-cop-closed"
TWO_LOW = "two-low"
TWO_HIGH = "two-high"
ONE_LOW = "one-low"
ONE_HIGH = "one-high"
BIP_TWO = "bip-two-cop"
BIP_ONE = "bip-one-cop"

_COP_COUNT = {THREE: 3, TWO_CLOSED: 2, TWO_LOW: 2, TWO_HIGH: 2,
              ONE_LOW: 1, ONE_HIGH: 1, BIP_TWO: 2, BIP_ONE: 1}


def shadow_index(host, path, robber_vertex):
    """min(dist(v0, robber), len(path)-1), measured inside the host."""
    if robber_vertex not in host:
        raise StrategyError(f"robber {robber_vertex} outside guard host")
    d = host.distances(path[0])[robber_vertex]
    k = len(path) - 1
    return k if d < 0 else min(d, k)


def host_is_bipartite(host):
    color = {}
    for s in host.vertices:
        if s in color:
            continue
        color[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for w in host.adj[u]:
                if w not in color:
                    color[w] = 1 - color[u]
                    q.append(w)
                elif color[w] == color[u]:
                    return False
    return True


def formation_slots(mode, d, raw_dist, k):
    """Path indices the cops must hold for shadow d (clamped at the ends)."""
    if mode == THREE:
        if d == 0:
            return (0, 0, min(1, k))
        if d == k:
            return (k - 1, k, k)
        return (d - 1, d, d + 1)
    if mode in (TWO_CLOSED, TWO_LOW):
        if d == 0:
            return (0, 0)
        return (d - 1, d)
    if mode == TWO_HIGH:
        if d == k:
            return (k, k)
        return (d, d + 1)
    if mode == ONE_LOW:
        return (max(d - 1, 0),)
    if mode == ONE_HIGH:
        return (min(d + 1, k),)
    if mode == BIP_TWO:
        if d == 0:
            return (0, min(1, k))
        if d == k:
            return (k - 1, k)
        return (d - 1, d + 1)
    if mode == BIP_ONE:
        dr = raw_dist if raw_dist is not None and raw_dist >= 0 else k + 1
        return (max(0, min(dr, k + 1) - 1),)
    raise ValueError(f"unknown mode {mode}")


def push_slots(d, k):
    """Bipartite push configuration: one cop on the shadow, one above."""
    if d >= k:
        return (k - 1, k)
    return (d, d + 1)


class PathGuard:
    """One guarded path: formations, catch-up, stalking and its assertions."""

    def __init__(self, graph, host, path, mode, cop_ids, validate=True,
                 auxiliary=False, start_state="route"):
        self.graph = graph
        self.host = host
        self.path = tuple(path)
        self.mode = mode
        self.cop_ids = tuple(cop_ids)
        self.auxiliary = auxiliary
        self.k = len(self.path) - 1
        if self.k < 1:
            raise GuardSetupError("guarded paths need at least one edge")
        if len(self.cop_ids) != _COP_COUNT[mode]:
            raise GuardSetupError(
                f"mode {mode} needs {_COP_COUNT[mode]} cops, got {len(self.cop_ids)}"
            )
        self.path_set = frozenset(self.path)
        self.path_index = {v: i for i, v in enumerate(self.path)}
        if len(self.path_index) != len(self.path):
            raise GuardSetupError("path repeats a vertex")
        for a, b in zip(self.path, self.path[1:]):
            if b not in host.adj[a]:
                raise GuardSetupError("path edge missing from host")
        if validate:
            self._validate_preconditions()
        self.dist0 = host.distances(self.path[0])
        # multi-source BFS toward the path: each deploying cop heads for its
        # nearest path vertex rather than funneling through one endpoint
        self.path_dist = [-1] * graph.n
        q = deque()
        for v in self.path:
            self.path_dist[v] = 0
            q.append(v)
        while q:
            u = q.popleft()
            for w in graph.adj[u]:
                if self.path_dist[w] < 0:
                    self.path_dist[w] = self.path_dist[u] + 1
                    q.append(w)
        self.state = "deploy" if start_state == "route" else start_state
        self.last_shadow = None
        self.robber_off_seen = False
        self.turns = 0
        self.deploy_bound = None

    def _validate_preconditions(self):
        host = self.host
        if not host.is_geodesic_path(self.path):
            raise GuardSetupError("path is not geodesic in its host")
        if self.mode in (TWO_CLOSED, BIP_ONE):
            if not host.is_geodesically_closed(self.path):
                raise GuardSetupError("path is not geodesically closed in its host")
        if self.mode in (BIP_TWO, BIP_ONE):
            if not host_is_bipartite(host):
                raise GuardSetupError("bipartite guard on a non-bipartite host")

    # -- observation ---------------------------------------------------------

    def raw_dist(self, robber):
        return self.dist0[robber]

    def shadow(self, robber):
        if robber not in self.host:
            raise StrategyError("robber left the guard's host")
        d = self.dist0[robber]
        return self.k if d < 0 else min(d, self.k)

    def stalking(self):
        return self.state in ("stalk", "push")

    def annotation(self, robber):
        ann = {
            "path": list(self.path),
            "mode": self.mode,
            "state": self.state,
        }
        if robber is not None and robber in self.host:
            ann["shadow"] = self.shadow(robber)
        return ann

    # -- formation morphs -------------------------------------------------------

    def drop_top(self):
        """Release the top cop: three-cop -> bottom pair, bip-two -> bip-one.

        Zero-motion: the remaining cops already stand on the smaller
        formation. Returns the freed cop id.
        """
        if not self.stalking():
            raise StrategyError("can only drop cops from a locked formation")
        if self.mode == THREE:
            freed = self.cop_ids[2]
            self.cop_ids = self.cop_ids[:2]
            self.mode = TWO_LOW
        elif self.mode == BIP_TWO:
            if self.state == "push":
                raise StrategyError("cannot drop the top cop mid-push")
            freed = self.cop_ids[1]
            self.cop_ids = self.cop_ids[:1]
            self.mode = BIP_ONE
        else:
            raise StrategyError(f"drop_top undefined for mode {self.mode}")
        self.auxiliary = True
        return freed

    def drop_bottom(self):
        """Release the bottom cop: three-cop -> top pair, bip-two -> one-high."""
        if not self.stalking():
            raise StrategyError("can only drop cops from a locked formation")
        if self.mode == THREE:
            freed = self.cop_ids[0]
            self.cop_ids = self.cop_ids[1:]
            self.mode = TWO_HIGH
        elif self.mode == BIP_TWO:
            if self.state == "push":
                raise StrategyError("cannot drop the bottom cop mid-push")
            freed = self.cop_ids[0]
            self.cop_ids = self.cop_ids[1:]
            self.mode = ONE_HIGH
        else:
            raise StrategyError(f"drop_bottom undefined for mode {self.mode}")
        self.auxiliary = True
        return freed

    # -- one cop turn ----------------------------------------------------------

    def step(self, positions, robber):
        """Targets for this guard's cops given current positions and robber.

        `positions` maps cop id -> vertex. Returns {cop id: target vertex}.
        """
        self.turns += 1
        d = self.shadow(robber)
        if self.last_shadow is not None and abs(d - self.last_shadow) > 1:
            # a robber standing on the path may hop a chord the host deleted;
            # off the path the host contains all its edges, so a jump is a bug
            if robber not in self.path_set:
                raise StrategyError(
                    f"shadow jumped from {self.last_shadow} to {d} on {self.mode} guard"
                )
        self.last_shadow = d
        if self.deploy_bound is None:
            start = max(self.path_dist[positions[c]] for c in self.cop_ids)
            self.deploy_bound = max(0, start) + 3 * self.k + 4
        if self.state == "deploy":
            targets = self._deploy_step(positions, robber, d)
        else:
            targets = self._stalk_step(positions, robber, d)
        if self.state == "deploy" and self.turns > self.deploy_bound:
            raise StrategyError(
                f"catch-up exceeded {self.deploy_bound} turns on {self.mode} guard"
            )
        if self.state == "stalk" and not self.auxiliary:
            self._assert_coverage(robber, targets)
        return targets

    def _deploy_step(self, positions, robber, d):
        """Cops off the path head for their nearest path vertex; cops on the
        path walk toward their live formation slots.

        A slot drifts at most one index per robber move while its cop gains
        one per turn, and the path ends wall the slot in, so the formation
        locks within ~3k turns of everyone reaching the path.
        """
        raw = self.dist0[robber] if robber is not None else d
        slots = formation_slots(self.mode, d, raw, self.k)
        targets = {}
        locked = True
        for i, c in enumerate(self.cop_ids):
            pos = positions[c]
            if pos in self.path_index:
                t = self._walk_along_path(pos, slots[i])
            else:
                t = min(
                    (w for w in self.graph.adj[pos]
                     if 0 <= self.path_dist[w] < self.path_dist[pos]),
                    default=None,
                )
                if t is None:
                    raise StrategyError("guard cop cannot reach the path")
            targets[c] = t
            if t != self.path[slots[i]]:
                locked = False
        if locked:
            self.state = "stalk"
        return targets

    def _walk_along_path(self, pos, slot_index):
        i = self.path_index.get(pos)
        if i is None:
            raise StrategyError("chasing cop fell off the path")
        if i == slot_index:
            return pos
        return self.path[i + (1 if slot_index > i else -1)]

    def _stalk_step(self, positions, robber, d):
        raw = self.dist0[robber] if robber is not None else d
        on_path = robber is not None and robber in self.path_set
        if self.mode == BIP_TWO:
            return self._bip_two_step(positions, robber, d, on_path)
        if on_path and self.robber_off_seen and not self.auxiliary:
            raise StrategyError("robber re-entered a stalked path")
        slots = formation_slots(self.mode, d, raw, self.k)
        targets = {c: self.path[slots[i]] for i, c in enumerate(self.cop_ids)}
        if on_path and not self._reachable(positions, targets):
            # chord-hopping robber on the path outran the formation; no
            # guarantee exists yet, so fall back to catching up
            self.state = "deploy"
            return self._deploy_step(positions, robber, d)
        self._check_reachable(positions, targets)
        if robber is not None and not on_path:
            self.robber_off_seen = True
        return targets

    def _bip_two_step(self, positions, robber, d, on_path):
        if self.state == "stalk" and on_path:
            if self.robber_off_seen and not self.auxiliary:
                raise StrategyError("robber re-entered a stalked path")
            self.state = "push"
        if self.state == "push":
            stalk = formation_slots(BIP_TWO, d, d, self.k)
            stalk_targets = {
                c: self.path[stalk[i]] for i, c in enumerate(self.cop_ids)
            }
            if not on_path and self._reachable(positions, stalk_targets):
                self.state = "stalk"
                targets = stalk_targets
            else:
                slots = push_slots(d, self.k)
                targets = {c: self.path[slots[i]] for i, c in enumerate(self.cop_ids)}
                if on_path and not self._reachable(positions, targets):
                    self.state = "deploy"
                    return self._deploy_step(positions, robber, d)
                self._check_reachable(positions, targets)
        else:
            slots = formation_slots(BIP_TWO, d, d, self.k)
            targets = {c: self.path[slots[i]] for i, c in enumerate(self.cop_ids)}
            if on_path and not self._reachable(positions, targets):
                self.state = "deploy"
                return self._deploy_step(positions, robber, d)
            self._check_reachable(positions, targets)
        if not on_path:
            self.robber_off_seen = True
        return targets

    def _reachable(self, positions, targets):
        g = self.graph
        return all(
            targets[c] == positions[c] or g.has_edge(positions[c], targets[c])
            for c in self.cop_ids
        )

    def _check_reachable(self, positions, targets):
        if not self._reachable(positions, targets):
            raise StrategyError(
                f"{self.mode} formation not reachable in one step: "
                f"{[positions[c] for c in self.cop_ids]} -> "
                f"{[targets[c] for c in self.cop_ids]}"
            )

    def _assert_coverage(self, robber, targets):
        """The operative guarantee: path neighbors of an off-path robber are covered."""
        if robber is None or robber in self.path_set:
            return
        covered = set(targets.values())
        for w in self.host.adj[robber]:
            if w in self.path_set and w not in covered:
                raise StrategyError(
                    f"uncovered path vertex {w} adjacent to robber {robber} "
                    f"({self.mode}, shadow {self.shadow(robber)})"
                )


def guard_three(graph, host, path, cop_ids):
    """Three-cop guard for a path geodesic in its host."""
    return PathGuard(graph, host, path, THREE, cop_ids)


def guard_two_closed(graph, host, path, cop_ids):
    """Two-cop guard for a geodesically closed path."""
    return PathGuard(graph, host, path, TWO_CLOSED, cop_ids)


def guard_bip_two(graph, host, path, cop_ids):
    """Two-cop guard for a geodesic path in a bipartite host."""
    return PathGuard(graph, host, path, BIP_TWO, cop_ids)


def guard_bip_one(graph, host, path, cop_ids):
    """One-cop guard for a geodesically closed path in a bipartite host."""
    return PathGuard(graph, host, path, BIP_ONE, cop_ids)
