"""Three-cop play on outerplanar graphs.

Two-connected blocks of an outerplanar graph are bounded by a Hamiltonian
exterior cycle, and holding the two ends of any edge pins the robber into
one arc of that cycle. The machine alternates two moves:

  slide   - the robber's territory hangs off a single vertex; a cop seals it
            while its partner walks one vertex deeper.
  reduce  - both ends of the held edge touch the territory; a third cop
            helps guard a geodesic across it, the robber falls into one
            exterior pocket, and two cops seize the pocket's two anchors,
            which form the next held edge.

Each move strictly shrinks the territory, and the held pair never exceeds
three deployed cops.
"""

from __future__ import annotations

from . import guarding
from .errors import GuardSetupError, StrategyError
from .graph import Host, biconnected_components, sub_rotation, trace_faces
from .guarding import PathGuard
from .machine import GuardRec, StagedMachine, TreeChase
from .strategies import CoordinatedCops


def exterior_cycle(g, emb, block):
    """Hamiltonian cycle of a 2-connected outerplanar block, from its
    exterior facial walk, plus the edge classification.

    Returns (cycle_order, exterior_edges, interior_edges). Raises
    GuardSetupError when the block has no Hamiltonian face (not outerplanar)
    or is not 2-connected.
    """
    block = tuple(sorted(block))
    if len(block) < 3:
        raise GuardSetupError("exterior cycle needs a block on >= 3 vertices")
    bset = set(block)
    sub = sub_rotation(g, emb, bset)
    faces = trace_faces(_InducedView(g, bset), _RotationOnly(sub))
    ham = None
    for face in faces:
        if len(face) == len(block) and set(face) == bset:
            ham = face
            break
    if ham is None:
        raise GuardSetupError("block has no Hamiltonian face: not outerplanar")
    n = len(ham)
    exterior = {tuple(sorted((ham[i], ham[(i + 1) % n]))) for i in range(n)}
    interior = []
    for u in block:
        for w in g.adj[u]:
            if u < w and w in bset and (u, w) not in exterior:
                interior.append((u, w))
    return ham, sorted(exterior), sorted(interior)


class _InducedView:
    """Just enough of the Graph surface for face tracing on a sub-rotation."""

    def __init__(self, g, vertices):
        self.n = g.n
        self.adj = tuple(
            tuple(w for w in g.adj[v] if w in vertices) if v in vertices else ()
            for v in range(g.n)
        )

    def num_edges(self):
        return sum(len(a) for a in self.adj) // 2


class _RotationOnly:
    def __init__(self, rotation):
        self.rotation = tuple(tuple(r) for r in rotation)


def interior_edge_split(cycle, edge):
    """The two arcs of the block cycle separated by holding `edge`'s ends.

    For an exterior edge one arc is empty and the other holds everything,
    mirroring the degenerate split.
    """
    order = list(cycle)
    n = len(order)
    u, v = edge
    i, j = order.index(u), order.index(v)
    if i > j:
        i, j = j, i
    arc1 = tuple(order[i + 1:j])
    arc2 = tuple(order[j + 1:] + order[:i])
    return arc1, arc2


def validate_outerplanar(g, emb):
    """Every nontrivial block must expose a Hamiltonian exterior face."""
    blocks, _ = biconnected_components(g)
    for block in blocks:
        if len(block) >= 3:
            exterior_cycle(g, emb, block)
    return blocks


class OuterplanarMachine(StagedMachine):
    """Territory-shrinking 3-cop machine for connected outerplanar graphs."""

    def __init__(self, g, emb):
        super().__init__(g, budget=3)
        self.emb = emb

    def _setup(self):
        blocks = validate_outerplanar(self.g, self.emb)
        nontrivial = sorted(b for b in blocks if len(b) >= 3)
        if not nontrivial:
            self._tree = TreeChase(self.g, self.budget)
            return self._tree.placement()
        bset = set(nontrivial[0])
        edge = min((u, v) for u, v in self.g.edges()
                   if u in bset and v in bset)
        self._start_edge = edge
        ids = self._take(2)
        rec = self._edge_guard(edge, ids, Host(self.g))
        self.guards = [rec]
        return [edge[0]] * self.budget

    def _edge_guard(self, edge, cop_ids, host):
        guard = PathGuard(self.g, host, edge, guarding.TWO_CLOSED, cop_ids)
        return GuardRec(f"hold-{edge[0]}-{edge[1]}", edge, guard)

    def _orchestrate(self):
        robber = yield {}
        while not all(r.guard.stalking() for r in self.guards):
            robber = yield {}
        while any(robber in r.guard.path_set for r in self.guards):
            robber = yield {}
        prev_region = None
        while True:
            self.stage += 1
            if self.stage > 4 * self.g.n + 8:
                raise StrategyError("stage count exceeded 4n: no progress")
            region = self._region_of(robber)
            self._track_progress(region, prev_region)
            prev_region = region
            self.region = region
            rset = set(region)
            attachments = sorted(
                {v for rec in self.guards for v in rec.path
                 if any(w in rset for w in self.g.adj[v])}
            )
            if not attachments:
                raise StrategyError("territory detached from the held edge")
            if len(attachments) == 1:
                self.case = 1
                robber = yield from self._slide(robber, attachments[0])
            else:
                self.case = 2
                robber = yield from self._reduce(robber)

    # -- case 1: advance through a cut vertex -----------------------------------

    def _slide(self, robber, x):
        g = self.g
        rec = self.guards[0]
        ca, cb = rec.guard.cop_ids
        while not (self.pos[ca] == x or self.pos[cb] == x):
            robber = yield {}
        keep, mover = (ca, cb) if self.pos[ca] == x else (cb, ca)
        self.guards.remove(rec)
        region = set(self._region_with(robber, {x}))
        y = min(w for w in g.adj[x] if w in region)
        while self.pos[mover] != y:
            robber = yield {keep: x, mover: self._walk_step(mover, y)}
        host = Host(g, vertices=set(self._region_with(robber, {x, y})) | {x, y})
        rec2 = self._edge_guard((x, y), [keep, mover], host)
        self.guards.append(rec2)
        while not rec2.guard.stalking():
            robber = yield {}
        while robber in rec2.guard.path_set:
            robber = yield {}
        return robber

    def _region_with(self, robber, removed):
        from .graph import component_of

        return component_of(self.g, robber, removed)

    # -- case 2: clear across the held edge --------------------------------------

    def _reduce(self, robber):
        g = self.g
        rec = self.guards[0]
        a, b = rec.path
        ca, cb = rec.guard.cop_ids
        while {self.pos[ca], self.pos[cb]} != {a, b}:
            robber = yield {}
        if self.pos[ca] != a:
            ca, cb = cb, ca
        rset = set(self.region)
        host = Host(g, vertices=rset | {a, b}, removed_edges=[(a, b)])
        path = host.geodesic(a, b)
        mid = self._take(1)[0]
        self.guards.remove(rec)
        g3 = PathGuard(g, host, path, guarding.THREE, [ca, mid, cb])
        rec3 = GuardRec("reduce", path, g3)
        self.guards.append(rec3)
        while not g3.stalking():
            robber = yield {}
        while robber in g3.path_set:
            robber = yield {}
        pocket = set(self._region_with(robber, set(path)))
        att = sorted(u for u in path if any(w in pocket for w in g.adj[u]))
        idx = {v: i for i, v in enumerate(path)}
        if len(att) == 2 and abs(idx[att[0]] - idx[att[1]]) == 1:
            robber = yield from self._seize_pair(robber, rec3, att[0], att[1])
        elif len(att) == 1:
            robber = yield from self._seize_single(robber, rec3, att[0])
        else:
            raise StrategyError(
                f"pocket attaches to {att}: interior split shape violated"
            )
        return robber

    def _seize_pair(self, robber, rec3, ul, ur):
        g = self.g
        guard = rec3.guard
        lo, mid, hi = guard.cop_ids
        path = guard.path
        idx = {v: i for i, v in enumerate(path)}
        q = len(path) - 1
        self.guards.remove(rec3)

        def along(cop, goal):
            p = self.pos[cop]
            i, t = idx[p], idx[goal]
            if i == t:
                return p
            return path[i + (1 if t > i else -1)]

        while not (self.pos[lo] == ul and self.pos[hi] == ur):
            if robber in (ul, ur):
                raise StrategyError("robber won the pocket seizure race")
            d = guard.shadow(robber)
            manual = {
                lo: along(lo, ul),
                hi: along(hi, ur),
                mid: along(mid, path[min(d, q)]),
            }
            robber = yield manual
        self.pool.append(mid)
        self.pool.sort()
        host = Host(g, vertices=set(self._region_with(robber, {ul, ur})) | {ul, ur})
        rec2 = self._edge_guard((ul, ur), [lo, hi], host)
        self.guards.append(rec2)
        while not rec2.guard.stalking():
            robber = yield {}
        while robber in rec2.guard.path_set:
            robber = yield {}
        return robber

    def _seize_single(self, robber, rec3, ut):
        g = self.g
        guard = rec3.guard
        lo, mid, hi = guard.cop_ids
        path = guard.path
        idx = {v: i for i, v in enumerate(path)}
        t = idx[ut]
        # the nearer flank seats on the cut vertex; the others stand down
        seat = lo if abs(idx[self.pos[lo]] - t) <= abs(idx[self.pos[hi]] - t) else hi
        self.guards.remove(rec3)

        def along(cop, goal):
            p = self.pos[cop]
            i, tg = idx[p], idx[goal]
            if i == tg:
                return p
            return path[i + (1 if tg > i else -1)]

        while self.pos[seat] != ut:
            if robber == ut:
                raise StrategyError("robber won the cut-vertex race")
            robber = yield {seat: along(seat, ut)}
        for c in guard.cop_ids:
            if c != seat:
                self.pool.append(c)
        self.pool.sort()
        region = set(self._region_with(robber, {ut}))
        y = min(w for w in g.adj[ut] if w in region)
        mover = self._take(1)[0]
        while self.pos[mover] != y:
            robber = yield {seat: ut, mover: self._walk_step(mover, y)}
        host = Host(g, vertices=set(self._region_with(robber, {ut, y})) | {ut, y})
        rec2 = self._edge_guard((ut, y), [seat, mover], host)
        self.guards.append(rec2)
        while not rec2.guard.stalking():
            robber = yield {}
        while robber in rec2.guard.path_set:
            robber = yield {}
        return robber


class OuterplanarCopStrategy(CoordinatedCops):
    """Engine adapter for the 3-cop outerplanar machine."""

    cop_budget = 3

    def __init__(self, emb):
        self.emb = emb

    def start(self, g, k):
        super().start(g, k)
        if not g.is_connected():
            raise GuardSetupError("strategies need a connected graph")
        self.machine = OuterplanarMachine(g, self.emb)
        if k != self.machine.budget:
            raise StrategyError("match must give this strategy 3 cops")

    def initial_positions(self):
        return self.machine.placement()

    def turn(self, state):
        self.machine.note_cop_turn(state.cops, state.robber)
        out = self.machine.cop_targets(state.robber)
        ann = self.machine.annotations(state.robber)
        if self.machine.region is not None and "stage" in ann:
            ann["block"] = None
        self._annotations = ann
        return out
