"""Staged region-shrinking cop strategies for planar graphs.

The machine keeps the robber enclosed by guarded paths and shrinks its
region every stage:

  Case 1 (path switch): the non-closed fully-guarded path is exchanged for a
  bypath composite; a two-cop top pair deploys on the new path, the old
  guard drops to its bottom pair, and a marcher completes the new formation.
  Case 2 (split): with every path closed or entry-safe, a fresh geodesic
  through the region's interior cuts it in two.
  Case 3 (corridor): a single attachment vertex is seized and walked inward
  until the region re-opens, then a fresh enclosure is built there.

Seven cops suffice in general, four on bipartite hosts; allowing the
second path three cops (the toroidal handoff) raises those to eight/five.
All shadow arithmetic for one path stays in that guard's creation host, so
formations never re-key; every guarantee the text argues is also asserted
at runtime and raises StrategyError when violated.
"""

from __future__ import annotations

from collections import deque

from . import guarding
from .errors import GuardSetupError, StrategyError
from .graph import (
    Host,
    bipartition,
    component_of,
    face_directed_edge_map,
    walk_sides,
)
from .guarding import PathGuard
from .machine import GuardRec, StagedMachine, TreeChase
from .strategies import CoordinatedCops


def find_cycle_edge(g):
    """Lex-min edge (u,v) lying on a cycle, or None for forests."""
    for u, v in g.edges():
        host = Host(g, removed_edges=[(u, v)])
        if host.distances(u)[v] >= 0:
            return (u, v)
    return None


def initial_enclosure(g, emb=None):
    """The opening pair: P2 = lex-min cycle edge, P1 = geodesic around it."""
    edge = find_cycle_edge(g)
    if edge is None:
        return None
    u, v = edge
    host = Host(g, removed_edges=[edge])
    p1 = host.geodesic(u, v)
    return p1, (u, v), host


# -- bypath machinery ---------------------------------------------------------


def _geodesic_dag_walk(host, src, dst, allowed, need_one_of, prefer=None):
    """Lex-min geodesic src->dst inside `allowed` hitting `need_one_of`.

    Walks the BFS dag greedily; `prefer`, when given, must also be hit if
    possible (two-pass: caller retries without it). Returns None if no
    qualifying geodesic exists.
    """
    dist_dst = host.distances(dst)
    dist_src = host.distances(src)
    total = dist_src[dst]
    if total < 0:
        return None

    def dag_next(x):
        return [w for w in host.adj[x]
                if w in allowed and dist_dst[w] == dist_dst[x] - 1]

    # reach[x]: can a dag path from x to dst still hit need_one_of?
    reach = {dst: dst in need_one_of}
    order = sorted((x for x in allowed if dist_src[x] >= 0 and dist_dst[x] >= 0
                    and dist_src[x] + dist_dst[x] == total),
                   key=lambda x: dist_dst[x])
    for x in order:
        if x == dst:
            continue
        reach[x] = x in need_one_of or any(reach.get(w, False) for w in dag_next(x))
    if not reach.get(src, False):
        return None
    path = [src]
    hit = src in need_one_of
    x = src
    while x != dst:
        for w in sorted(dag_next(x)):
            if hit or w in need_one_of or reach.get(w, False):
                path.append(w)
                hit = hit or w in need_one_of
                x = w
                break
        else:
            return None
    return tuple(path)


def _region_detour_host(g, path, region):
    """Region plus the path with every path-to-path edge cut, so detours
    must dive through the region."""
    pset = set(path)
    removed = []
    for u in path:
        for w in g.adj[u]:
            if u < w and w in pset:
                removed.append((u, w))
    return Host(g, vertices=set(region) | pset, removed_edges=removed)


def bypath_pair(g, path, region, detour_host=None):
    """Shortest (then lex-min) segment of `path` admitting an alternative
    geodesic with interior inside `region`, or None."""
    k = len(path) - 1
    rh = detour_host if detour_host is not None else _region_detour_host(g, path, region)
    dists = [rh.distances(v) for v in path]
    for length in range(2, k + 1):
        for i in range(0, k - length + 1):
            j = i + length
            if dists[i][path[j]] == length:
                return i, j
    return None


def select_bypath(g, emb, host, path, region, outside_anchors=(),
                  fallback_anchor=None):
    """Shortest alternative geodesic through the region, pocket-minimal.

    Returns (i, j, S, pocket) where S is a (path[i], path[j])-geodesic of the
    guard host whose interior lies inside the robber's region, and pocket is
    the vertex set enclosed between S and path[i..j]. Raises GuardSetupError
    when no region-interior bypath exists.
    """
    region = set(region)
    rh = _region_detour_host(g, path, region)
    best = bypath_pair(g, path, region, detour_host=rh)
    if best is None:
        raise GuardSetupError("no bypath through the region exists")
    i, j = best
    allowed = (region - set(path)) | {path[i], path[j]}
    need = region - set(path)
    S = _geodesic_dag_walk(rh, path[i], path[j], allowed, need)
    if S is None:
        raise StrategyError("bypath detection and construction disagree")
    # pocket-minimal fixpoint: no other (v_i, v_j)-geodesic may live strictly
    # between S and the path segment
    for _ in range(g.n + 1):
        pocket = _pocket_vertices(g, emb, path, i, j, S, outside_anchors,
                                  fallback_anchor)
        inner = _geodesic_dag_walk(
            rh, path[i], path[j],
            (set(pocket) & allowed) | {path[i], path[j]},
            set(pocket) & need,
        )
        if inner is None or inner == S:
            return i, j, S, pocket
        new_pocket = _pocket_vertices(g, emb, path, i, j, inner,
                                      outside_anchors, fallback_anchor)
        if len(new_pocket) >= len(pocket):
            return i, j, S, pocket
        S = inner
    raise StrategyError("pocket minimization failed to converge")


def _pocket_vertices(g, emb, path, i, j, S, outside_anchors=(),
                     fallback_anchor=None):
    """Vertices strictly between S and path[i..j], via dual-side flooding.

    `outside_anchors` may hold vertices and/or undirected edges (2-tuples)
    known to lie outside the pocket; they disambiguate when the curve
    consumes the whole path. `fallback_anchor` (the robber, in practice)
    settles the remaining single-path ambiguity.
    """
    cyc = list(S) + list(reversed(path[i + 1:j]))
    cycle_edges = set()
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        cycle_edges.add((a, b) if a < b else (b, a))
    faces, side = walk_sides(g, emb, cycle_edges)
    on_curve = set(cyc)
    side_index = {}
    for fi, face in enumerate(faces):
        for v in face:
            side_index.setdefault(v, side[fi])
    anchor_vertices = [v for v in path if v not in on_curve]
    anchor_edges = []
    for a in outside_anchors:
        if isinstance(a, tuple):
            anchor_edges.append(a)
        elif a not in on_curve:
            anchor_vertices.append(a)
    anchor_side = None
    if anchor_vertices:
        anchor_side = side_index[anchor_vertices[0]]
    elif anchor_edges:
        # a non-curve edge's two face sides coincide; that side is outside
        owner = face_directed_edge_map(faces)
        u, v = anchor_edges[0]
        anchor_side = side[owner[(u, v)]]
    elif fallback_anchor is not None and fallback_anchor not in on_curve:
        anchor_side = side_index[fallback_anchor]
    else:
        # no anchor available: call the larger side outside (pockets hug the
        # path); only minimization quality depends on this, not correctness
        counts = {}
        for v in range(g.n):
            if v not in on_curve and v in side_index:
                counts[side_index[v]] = counts.get(side_index[v], 0) + 1
        if not counts:
            return []
        anchor_side = max(sorted(counts), key=lambda s: counts[s])
    return sorted(v for v in range(g.n)
                  if v not in on_curve and side_index.get(v) != anchor_side)


def _shortest_through(host, src, dst, mark):
    """Lex-min shortest src->dst walk forced through `mark`, if it is a path.

    Layered BFS over states (vertex, still-needs-mark). Lengths may exceed
    dist(src, dst); returns None when no such walk exists or the lex-min
    walk self-crosses (callers then fall back to a local split).
    """
    # cost-to-go to the accepting state (dst, False), by backward BFS
    D = {(dst, False): 0}
    q = deque([(dst, False)])
    while q:
        w, n2 = q.popleft()
        d = D[(w, n2)]
        for v in host.adj[w]:
            if w in mark:
                if n2:
                    continue  # arriving at a mark vertex always clears the flag
                preds = ((v, False), (v, True))
            else:
                preds = ((v, n2),)
            for state in preds:
                if state not in D:
                    D[state] = d + 1
                    q.append(state)
    state = (src, src not in mark)
    if state not in D:
        return None
    walk = [src]
    while state != (dst, False):
        v, needs = state
        nxt = None
        for w in sorted(host.adj[v]):
            n2 = needs and (w not in mark)
            if D.get((w, n2)) == D[state] - 1:
                nxt = (w, n2)
                break
        if nxt is None:
            return None
        walk.append(nxt[0])
        state = nxt
    if len(set(walk)) != len(walk):
        return None
    return tuple(walk)


def verify_switch_claim(host, path, i, j, S, bipartite, region):
    """The lemma's operative inequality for every region vertex next to the
    swapped segment's interior; hard failure when it does not hold."""
    d0 = host.distances(path[0])
    region = set(region)
    for l in range(i + 1, j):
        vl = path[l]
        for x in host.adj[vl]:
            if x not in region:
                continue
            dx = d0[x]
            if bipartite:
                ok = dx == l + 1
            else:
                ok = dx in (l, l + 1)
            if not ok:
                raise StrategyError(
                    f"bypath claim violated at {x} next to index {l}: dist {dx}"
                )


# -- the staged machine --------------------------------------------------------


class PlanarMachine(StagedMachine):
    """Staged enclosure play for planar graphs (seven cops, four bipartite).

    The allow_p2_three_cops flag raises the budgets to eight/five and lets a
    preset enclosure's second path keep three cops; the toroidal handoff
    uses it.
    """

    def __init__(self, g, emb, bipartite=False, allow_p2_three_cops=False):
        if bipartite:
            colors, odd = bipartition(g)
            if colors is None:
                raise GuardSetupError(f"graph has an odd cycle {odd}")
        budget = (5 if bipartite else 8) if allow_p2_three_cops \
            else (4 if bipartite else 7)
        super().__init__(g, budget)
        self.emb = emb
        self.bipartite = bipartite
        self.full_mode = guarding.BIP_TWO if bipartite else guarding.THREE
        self.full_count = 2 if bipartite else 3
        self.low_count = 1 if bipartite else 2
        self.preset = None  # optional inherited enclosure (toroidal handoff)

    def _setup(self):
        if self.preset is None and find_cycle_edge(self.g) is None:
            self._tree = TreeChase(self.g, self.budget)
            return self._tree.placement()
        if self.preset is not None:
            self.guards = list(self.preset["guards"])
            used = {c for rec in self.guards for c in rec.guard.cop_ids}
            self.pool = [c for c in range(self.budget) if c not in used]
            return list(self.preset["positions"])
        p1, p2edge, host1 = initial_enclosure(self.g, self.emb)
        u, v = p2edge
        host2 = Host(self.g)
        ids1 = self._take(self.full_count)
        ids2 = self._take(self.low_count)
        g1 = PathGuard(self.g, host1, p1, self.full_mode, ids1)
        low_mode = guarding.BIP_ONE if self.bipartite else guarding.TWO_CLOSED
        g2 = PathGuard(self.g, host2, (u, v), low_mode, ids2)
        self.guards = [GuardRec("P1", p1, g1),
                       GuardRec("P2", (u, v), g2, entry_safe=True)]
        return [u] * self.budget

    def _orchestrate(self):
        robber = yield {}
        # initial catch-up: every guard locks before stages begin
        while not all(rec.guard.stalking() for rec in self.guards):
            robber = yield {}
        while any(robber in rec.guard.path_set for rec in self.guards):
            robber = yield {}
        prev_region = None
        while True:
            self.stage += 1
            if self.stage > 4 * self.g.n + 8:
                raise StrategyError("stage count exceeded 4n: no progress")
            region = self._region_of(robber)
            if prev_region is not None:
                if not set(region) <= set(prev_region):
                    raise StrategyError("robber region escaped its enclosure")
                if len(region) >= len(prev_region):
                    self.stall += 1
                    if self.stall > 2:
                        raise StrategyError("region stopped shrinking")
                else:
                    self.stall = 0
            prev_region = region
            self.region = region
            rset = set(region)
            self._release_covered(rset)
            attachments = sorted(
                {v for rec in self.guards for v in rec.path
                 if any(w in rset for w in self.g.adj[v])}
            )
            if len(attachments) <= 1:
                self.case = 3
                robber = yield from self._cut_advance(robber, attachments)
                continue
            target = None
            for rec in self.guards:
                if rec.full() and not rec.entry_safe and \
                        bypath_pair(self.g, rec.path, rset) is not None:
                    target = rec
                    break
            if target is not None:
                self.case = 1
                robber = yield from self._path_switch(robber, target)
                continue
            for rec in self.guards:
                if rec.full():
                    freed = rec.guard.drop_top()
                    self.pool.append(freed)
                    self.pool.sort()
                    rec.entry_safe = True
            self.case = 2
            robber = yield from self._split_region(robber, attachments)

    # -- Case 1 ---------------------------------------------------------------

    def _path_switch(self, robber, rec):
        g, emb = self.g, self.emb
        guard = rec.guard
        host = guard.host
        path = rec.path
        anchors = []
        for other in self.guards:
            if other is not rec:
                anchors.extend(other.path)
                anchors.append((other.path[0], other.path[1]))
        i, j, S, pocket = select_bypath(g, emb, host, path, self.region,
                                        outside_anchors=anchors,
                                        fallback_anchor=robber)
        verify_switch_claim(host, path, i, j, S, self.bipartite, self.region)
        p3 = path[:i] + S + path[j + 1:]
        # top tracker(s) deploy on the new path while the old guard stands
        top_mode = guarding.ONE_HIGH if self.bipartite else guarding.TWO_HIGH
        top_ids = self._take(1 if self.bipartite else 2)
        top = PathGuard(g, host, p3, top_mode, top_ids,
                        validate=False, auxiliary=True)
        top_rec = GuardRec("P3-top", p3, top, protected=False)
        self.guards.append(top_rec)
        while not top.stalking():
            robber = yield {}
        # the old guard drops to its safe low formation, freeing the marcher
        marcher = guard.drop_top()
        low = PathGuard(g, host, p3, guarding.ONE_LOW, [marcher],
                        validate=False, auxiliary=True)
        low_rec = GuardRec("P3-low", p3, low, protected=False)
        self.guards.append(low_rec)
        while not low.stalking():
            robber = yield {}
        # assemble the full guard on the composite path
        self.guards.remove(top_rec)
        self.guards.remove(low_rec)
        g3 = PathGuard(g, host, p3, self.full_mode, [marcher] + top_ids,
                       start_state="stalk")
        rec3 = GuardRec("P3", p3, g3)
        self.guards.append(rec3)
        while any(robber in r.guard.path_set for r in self.guards):
            robber = yield {}
        # commit to the robber's side: the new pair is (old target, P3) when
        # the robber sits in the pocket, else (partner, P3); the third path's
        # vertices rejoin free space
        others = [r for r in self.guards if r is not rec and r is not rec3]
        side_region = set(component_of(g, robber, set(rec.path) | set(p3)))
        if all(side_region.isdisjoint(o.path) for o in others):
            keep = [rec, rec3]
            rec.entry_safe = True
            rec.self_covered = frozenset(path[i + 1:j])
        else:
            keep = others + [rec3]
        for r in list(self.guards):
            if r not in keep:
                self._release(r)
        return robber

    # -- Case 2 ---------------------------------------------------------------

    def _split_region(self, robber, attachments):
        """Guard a third path through the region and keep the robber's side.

        Prefers the endpoint-spanning split of the staged construction (a
        shortest path through the region in the union of both paths and the
        region), which keeps the enclosure at two paths. When the region
        hangs off a single path, re-encloses between two of its attachment
        vertices instead.
        """
        g = self.g
        rset = set(self.region)
        path3, host = self._spanning_split(rset, attachments)
        ids = self._take(self.full_count)
        g3 = PathGuard(g, host, path3, self.full_mode, ids)
        rec3 = GuardRec("split", path3, g3)
        self.guards.append(rec3)
        while not g3.stalking():
            robber = yield {}
        while any(robber in r.guard.path_set for r in self.guards):
            robber = yield {}
        # keep the one old path that bounds the robber's side of the split
        olds = [r for r in self.guards if r is not rec3]
        keep = olds[0] if olds else None
        for cand in olds:
            side_region = set(component_of(g, robber, set(cand.path) | set(path3)))
            if all(side_region.isdisjoint(o.path) for o in olds if o is not cand):
                keep = cand
                break
        for r in olds:
            if r is not keep:
                self._release(r)
        return robber

    def _spanning_split(self, rset, attachments):
        """Endpoint-to-endpoint third path through the region, guardable.

        Starts from the shortest through-region walk in the chord-free union
        of the enclosure (falling back to a prefix + dive + suffix composite)
        and refines: as long as the candidate is not geodesic in its own
        chord-free host, the host's true geodesic is strictly shorter, still
        spans, and still passes the region; iterate until geodesic.
        """
        paths = [rec.path for rec in self.guards]
        alpha = paths[0][0]
        beta = paths[0][-1]
        if not all(p[0] == alpha and p[-1] == beta for p in paths):
            raise StrategyError("split requires a common-endpoint enclosure")
        cand = self._initial_spanning_path(paths, rset, alpha, beta, attachments)
        for _ in range(self.g.n + 1):
            host = self._chord_free_host(cand, rset)
            if host.is_geodesic_path(cand):
                return cand, host
            shorter = host.geodesic(alpha, beta)
            if not set(shorter) & rset or shorter == cand:
                raise StrategyError("split refinement lost the region")
            cand = shorter
        raise StrategyError("split refinement failed to converge")

    def _chord_free_host(self, path3, rset):
        """Region plus the path, with non-path edges between path vertices cut."""
        p3set = set(path3)
        p3_edges = {(a, b) if a < b else (b, a) for a, b in zip(path3, path3[1:])}
        removed = []
        for u in path3:
            if u in rset:
                continue
            for w in self.g.adj[u]:
                if u < w and w in p3set and w not in rset:
                    if (u, w) not in p3_edges:
                        removed.append((u, w))
        return Host(self.g, vertices=rset | p3set, removed_edges=removed)

    def _initial_spanning_path(self, paths, rset, alpha, beta, attachments):
        verts = set().union(*[set(p) for p in paths]) | rset
        path_edges = set()
        for p in paths:
            for a, b in zip(p, p[1:]):
                path_edges.add((a, b) if a < b else (b, a))
        removed = []
        for u in verts:
            if u in rset:
                continue
            for w in self.g.adj[u]:
                if u < w and w in verts and w not in rset:
                    if (u, w) not in path_edges:
                        removed.append((u, w))
        union_host = Host(self.g, vertices=verts, removed_edges=removed)
        walk = _shortest_through(union_host, alpha, beta, rset)
        if walk is not None and len(set(walk)) == len(walk):
            return walk
        if walk is not None:
            # extract the walk's first dive; compose prefix + dive + suffix
            s = next(i for i, v in enumerate(walk) if v in rset)
            a, e = walk[s - 1], s
            while walk[e] in rset:
                e += 1
            b = walk[e]
            if a != b:
                comp = self._compose_spanning(paths, rset, alpha, beta, a, b)
                if comp is not None:
                    return comp
        for a in attachments:
            for b in attachments:
                if a != b:
                    comp = self._compose_spanning(paths, rset, alpha, beta, a, b)
                    if comp is not None:
                        return comp
        raise StrategyError("no spanning path through the region exists")

    def _compose_spanning(self, paths, rset, alpha, beta, a, b):
        """alpha..a along its path, a->b through the region, b..beta along its path."""
        owner = {}
        for p in paths:
            for i, v in enumerate(p):
                owner.setdefault(v, (p, i))
        if a not in owner or b not in owner:
            return None
        pa, ia = owner[a]
        pb, ib = owner[b]
        if pa is pb and ia > ib:
            a, b, ia, ib = b, a, ib, ia
        if a == beta or b == alpha:
            a, b = b, a
            pa, ia = owner[a]
            pb, ib = owner[b]
        if a == beta or b == alpha or (pa is pb and ia > ib):
            return None
        removed = [(a, b)] if self.g.has_edge(a, b) else []
        dive_host = Host(self.g, vertices=rset | {a, b}, removed_edges=removed)
        if dive_host.distances(a)[b] < 0:
            return None
        dive = dive_host.geodesic(a, b)
        prefix = pa[:ia]
        suffix = pb[ib + 1:]
        cand = tuple(prefix) + dive + tuple(suffix)
        if len(set(cand)) != len(cand):
            return None
        return cand

    # -- Case 3 ---------------------------------------------------------------

    def _cut_advance(self, robber, attachments):
        g = self.g
        if not attachments:
            raise StrategyError("region detached from every guarded path")
        x = attachments[0]
        lead = self._take(1)[0]
        # route one cop to the cut vertex under the standing guards
        while self.pos[lead] != x:
            robber = yield {lead: self._walk_step(lead, x)}
        # sealed: the robber's side of x cannot reach the old paths
        comp = set(component_of(g, robber, {x}))
        for rec in self.guards:
            if any(v in comp for v in rec.path):
                raise StrategyError("corridor seal failed: old path reachable")
        for rec in list(self.guards):
            self._release(rec)
        trail = self._take(1)[0]
        while self.pos[trail] != x:
            robber = yield {trail: self._walk_step(trail, x)}
        head = x
        while True:
            region_now = set(component_of(g, robber, {head}))
            nbrs = [w for w in g.adj[head] if w in region_now]
            if len(nbrs) >= 2:
                break
            if not nbrs:
                raise StrategyError("corridor head lost contact with the region")
            nxt = nbrs[0]
            robber = yield {lead: nxt, trail: head}
            robber = yield {trail: nxt}
            head = nxt
        y = min(nbrs)
        region_now = set(component_of(g, robber, {head}))
        edge_host = Host(g, vertices=region_now | {head})
        low_mode = guarding.BIP_ONE if self.bipartite else guarding.TWO_CLOSED
        if self.bipartite:
            g2 = PathGuard(g, edge_host, (head, y), low_mode, [lead])
            self.pool.append(trail)
            self.pool.sort()
        else:
            g2 = PathGuard(g, edge_host, (head, y), low_mode, [lead, trail])
        rec2 = GuardRec("corridor-edge", (head, y), g2, entry_safe=True)
        self.guards.append(rec2)
        p1_host = Host(g, vertices=region_now | {head},
                       removed_edges=[(head, y)])
        p1 = p1_host.geodesic(head, y)
        ids = self._take(self.full_count)
        g1 = PathGuard(g, p1_host, p1, self.full_mode, ids)
        rec1 = GuardRec("corridor-path", p1, g1)
        self.guards.append(rec1)
        while not (g1.stalking() and g2.stalking()):
            robber = yield {}
        while any(robber in r.guard.path_set for r in self.guards):
            robber = yield {}
        return robber


class PlanarCopStrategy(CoordinatedCops):
    """Engine adapter for the staged planar machine (Theorem-6 style play)."""

    def __init__(self, emb, bipartite=False, allow_p2_three_cops=False):
        self.emb = emb
        self.bipartite = bipartite
        self.allow_p2_three = allow_p2_three_cops
        self.cop_budget = (5 if bipartite else 8) if allow_p2_three_cops \
            else (4 if bipartite else 7)

    def start(self, g, k):
        super().start(g, k)
        if not g.is_connected():
            raise GuardSetupError("strategies need a connected graph")
        self.machine = PlanarMachine(g, self.emb, bipartite=self.bipartite,
                                     allow_p2_three_cops=self.allow_p2_three)
        if k != self.machine.budget:
            raise StrategyError(f"match must give this strategy {self.machine.budget} cops")

    def initial_positions(self):
        return self.machine.placement()

    def turn(self, state):
        self.machine.note_cop_turn(state.cops, state.robber)
        out = self.machine.cop_targets(state.robber)
        self._annotations = self.machine.annotations(state.robber)
        return out
