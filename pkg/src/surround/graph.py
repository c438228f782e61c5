"""Immutable simple graphs, rotation-system embeddings, distances and geodesics.

Vertices are dense indices 0..n-1. Every nondeterministic choice (which
geodesic, which neighbor first) resolves to the lexicographically minimal
candidate so that strategies replay deterministically.
"""

from __future__ import annotations

import json
from collections import deque

from .errors import EmbeddingError, NoPathError, ParseError, ValidationError


class Graph:
    """Simple undirected graph with sorted adjacency lists.

    Attributes:
        n: vertex count.
        adj: tuple of sorted neighbor tuples, one per vertex.
        labels: optional per-vertex string tags carried by witness generators.
    """

    __slots__ = ("n", "adj", "labels", "_adjsets", "_m")

    def __init__(self, n, edges, labels=None):
        if n < 0:
            raise ValidationError("vertex count must be nonnegative")
        seen = set()
        adj = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValidationError(f"loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValidationError(f"parallel edge ({u},{v})")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        self.n = n
        self.adj = tuple(tuple(sorted(a)) for a in adj)
        self._adjsets = tuple(frozenset(a) for a in self.adj)
        self._m = len(seen)
        if labels is not None and len(labels) != n:
            raise ValidationError("labels length must equal vertex count")
        self.labels = tuple(labels) if labels is not None else None

    # -- basic accessors ----------------------------------------------------

    def num_edges(self):
        return self._m

    def neighbors(self, v):
        return self.adj[v]

    def degree(self, v):
        return len(self.adj[v])

    def has_edge(self, u, v):
        return v in self._adjsets[u]

    def edges(self):
        """All edges as (u, v) pairs with u < v, sorted."""
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def closed_neighborhood(self, v):
        return tuple(sorted(self.adj[v] + (v,)))

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self._m})"

    def is_connected(self):
        if self.n == 0:
            return True
        return sum(1 for d in bfs_distances(self, 0) if d >= 0) == self.n

    def to_json(self, embedding=None):
        doc = {"n": self.n, "edges": [[u, v] for u, v in self.edges()]}
        if self.labels is not None:
            doc["labels"] = list(self.labels)
        if embedding is not None:
            doc["rotation"] = [list(r) for r in embedding.rotation]
            if embedding.torus_offsets:
                doc["torus_offsets"] = [
                    [u, v, dx, dy]
                    for (u, v), (dx, dy) in sorted(embedding.torus_offsets.items())
                    if u < v
                ]
            if embedding.outer_face is not None:
                doc["outer_face"] = list(embedding.outer_face)
        return doc


class Embedding:
    """Combinatorial embedding: per-vertex cyclic order of incident neighbors.

    genus_hint is 0 (plane) or 1 (torus). Torus embeddings carry per-directed-
    edge integer translation vectors; offset(u->v) == -offset(v->u) and the
    offsets around every face sum to zero.
    """

    __slots__ = ("rotation", "genus_hint", "torus_offsets", "outer_face")

    def __init__(self, rotation, genus_hint=0, torus_offsets=None, outer_face=None):
        self.rotation = tuple(tuple(r) for r in rotation)
        self.genus_hint = genus_hint
        offsets = {}
        if torus_offsets:
            for (u, v), (dx, dy) in dict(torus_offsets).items():
                offsets[(u, v)] = (dx, dy)
                offsets[(v, u)] = (-dx, -dy)
        self.torus_offsets = offsets
        # outer_face names a directed edge (u, v) lying on the outer walk
        self.outer_face = tuple(outer_face) if outer_face else None

    def validate(self, g):
        if len(self.rotation) != g.n:
            raise EmbeddingError("rotation must list every vertex")
        for v in range(g.n):
            if sorted(self.rotation[v]) != list(g.adj[v]):
                raise EmbeddingError(f"rotation of vertex {v} is not a permutation of its neighbors")
        if self.genus_hint not in (0, 1):
            raise EmbeddingError("genus_hint must be 0 or 1")
        if self.genus_hint == 1:
            if not self.torus_offsets:
                raise EmbeddingError("torus embedding requires torus_offsets")
            for (u, v), (dx, dy) in self.torus_offsets.items():
                if self.torus_offsets.get((v, u)) != (-dx, -dy):
                    raise EmbeddingError(f"offset({u}->{v}) not antisymmetric")
                if not g.has_edge(u, v):
                    raise EmbeddingError(f"offset on non-edge ({u},{v})")
            for u in range(g.n):
                for v in g.adj[u]:
                    if (u, v) not in self.torus_offsets:
                        raise EmbeddingError(f"missing offset for edge ({u},{v})")
        faces = trace_faces(g, self, _validate=True)
        euler = g.n - g.num_edges() + len(faces)
        if euler != 2 - 2 * self.genus_hint:
            raise EmbeddingError(
                f"Euler count {euler} inconsistent with genus {self.genus_hint}"
            )
        if self.genus_hint == 1:
            for face in faces:
                sx = sy = 0
                for u, v in _face_directed_edges(face):
                    dx, dy = self.torus_offsets[(u, v)]
                    sx += dx
                    sy += dy
                if sx or sy:
                    raise EmbeddingError("face offsets do not sum to zero")
        return faces


def _face_directed_edges(face):
    k = len(face)
    return [(face[i], face[(i + 1) % k]) for i in range(k)]


def trace_faces(g, emb, _validate=False):
    """Facial walks of an embedded graph.

    Each face is a vertex walk (v0, v1, ..., v_{k-1}); the closed walk uses
    every directed edge exactly once across all faces. Faces are canonicalized
    to start at their lex-min directed edge and returned sorted.
    """
    if not _validate:
        for v in range(g.n):
            if sorted(emb.rotation[v]) != list(g.adj[v]):
                raise EmbeddingError(f"rotation of vertex {v} is not a permutation of its neighbors")
    index_in_rotation = [
        {w: i for i, w in enumerate(emb.rotation[v])} for v in range(g.n)
    ]
    seen = set()
    faces = []
    for u0 in range(g.n):
        for v0 in emb.rotation[u0]:
            if (u0, v0) in seen:
                continue
            walk = []
            u, v = u0, v0
            while (u, v) not in seen:
                seen.add((u, v))
                walk.append(u)
                rot = emb.rotation[v]
                i = index_in_rotation[v][u]
                w = rot[(i + 1) % len(rot)]
                u, v = v, w
            if (u, v) != (u0, v0):
                raise EmbeddingError("face tracing did not close up")
            faces.append(_canonical_face(walk))
    faces.sort()
    return faces


def _canonical_face(walk):
    k = len(walk)
    best = None
    for s in range(k):
        cand = tuple(walk[(s + i) % k] for i in range(k))
        if best is None or cand < best:
            best = cand
    return best


def face_directed_edge_map(faces):
    """Map directed edge -> index of the face whose walk uses it."""
    owner = {}
    for fi, face in enumerate(faces):
        for de in _face_directed_edges(face):
            owner[de] = fi
    return owner


# -- parsing ----------------------------------------------------------------


def parse_graph(data, fmt):
    """Parse bytes in one of the accepted formats.

    Returns (Graph, Embedding-or-None). json-graph documents may carry a
    rotation system and torus offsets; the other formats never do.
    """
    if isinstance(data, str):
        data = data.encode()
    if fmt == "graph6":
        return _parse_graph6(data), None
    if fmt == "edge-list":
        return _parse_edge_list(data), None
    if fmt == "json-graph":
        return parse_json_graph(data)
    raise ParseError(f"unknown format {fmt!r}")


def _parse_graph6(data):
    s = data.strip()
    if s.startswith(b">>graph6<<"):
        s = s[10:]
    if not s:
        raise ParseError("empty graph6 input", 0)
    pos = 0
    if s[0] == 126:  # '~'
        if len(s) >= 2 and s[1] == 126:
            if len(s) < 8:
                raise ParseError("truncated graph6 size", len(s))
            n = 0
            for i in range(2, 8):
                n = (n << 6) | (s[i] - 63)
            pos = 8
        else:
            if len(s) < 4:
                raise ParseError("truncated graph6 size", len(s))
            n = 0
            for i in range(1, 4):
                n = (n << 6) | (s[i] - 63)
            pos = 4
    else:
        n = s[0] - 63
        pos = 1
    if n < 0:
        raise ParseError("bad graph6 size byte", 0)
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(s) - pos < nbytes:
        raise ParseError("truncated graph6 body", len(s))
    bits = []
    for i in range(nbytes):
        b = s[pos + i] - 63
        if not 0 <= b < 64:
            raise ParseError("invalid graph6 byte", pos + i)
        bits.extend((b >> (5 - j)) & 1 for j in range(6))
    edges = []
    idx = 0
    for v in range(1, n):
        for u in range(v):
            if bits[idx]:
                edges.append((u, v))
            idx += 1
    return Graph(n, edges)


def _parse_edge_list(data):
    edges = []
    maxv = -1
    offset = 0
    for line in data.splitlines(keepends=True):
        text = line.strip()
        if text and not text.startswith(b"#"):
            parts = text.split()
            if len(parts) != 2:
                raise ParseError("edge line must be 'u v'", offset)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError("non-integer vertex id", offset) from None
            if u < 0 or v < 0:
                raise ParseError("negative vertex id", offset)
            edges.append((u, v))
            maxv = max(maxv, u, v)
        offset += len(line)
    try:
        return Graph(maxv + 1, edges)
    except ValidationError as exc:
        raise ParseError(str(exc), 0) from None


def parse_json_graph(data):
    if isinstance(data, (bytes, bytearray)):
        text = data.decode()
    else:
        text = data
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
    return graph_from_json(doc)


def graph_from_json(doc):
    if "n" not in doc or "edges" not in doc:
        raise ParseError("json-graph requires 'n' and 'edges'")
    g = Graph(doc["n"], [tuple(e) for e in doc["edges"]], labels=doc.get("labels"))
    emb = None
    if "rotation" in doc:
        offsets = None
        genus = 0
        if "torus_offsets" in doc:
            offsets = {(u, v): (dx, dy) for u, v, dx, dy in doc["torus_offsets"]}
            genus = 1
        emb = Embedding(
            doc["rotation"],
            genus_hint=genus,
            torus_offsets=offsets,
            outer_face=doc.get("outer_face"),
        )
        emb.validate(g)
    return g, emb


# -- distances, geodesics, structure ----------------------------------------


def bfs_distances(g, source, adjacency=None):
    """Hop distances from source; unreachable vertices get -1."""
    adj = adjacency if adjacency is not None else g.adj
    dist = [-1] * g.n
    dist[source] = 0
    q = deque([source])
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = du
                q.append(w)
    return dist


def geodesic(g, u, v):
    """Lexicographically minimal shortest (u,v)-path as a vertex tuple."""
    dist_to_v = bfs_distances(g, v)
    if dist_to_v[u] < 0:
        raise NoPathError(f"vertices {u} and {v} are disconnected")
    path = [u]
    cur = u
    while cur != v:
        nxt = min(w for w in g.adj[cur] if dist_to_v[w] == dist_to_v[cur] - 1)
        path.append(nxt)
        cur = nxt
    return tuple(path)


def is_path(g, vertices):
    vs = list(vertices)
    if len(set(vs)) != len(vs):
        return False
    return all(g.has_edge(vs[i], vs[i + 1]) for i in range(len(vs) - 1))


def is_geodesic_path(g, vertices, adjacency=None):
    vs = list(vertices)
    if len(vs) == 1:
        return True
    d = bfs_distances(g, vs[0], adjacency=adjacency)
    return d[vs[-1]] == len(vs) - 1


def is_geodesically_closed(g, vertices, edges=None, adjacency=None):
    """True iff every geodesic between two subgraph vertices stays inside it.

    `vertices` is the subgraph's vertex set; `edges` defaults to all induced
    edges. Checks every vertex and edge lying on any shortest (u,v)-path via
    the BFS dag characterization dist_u(x) + dist_v(x) == dist(u,v).
    """
    vs = sorted(set(vertices))
    vset = set(vs)
    if edges is None:
        eset = None  # induced: every host edge between subgraph vertices counts
    else:
        eset = {(a, b) if a < b else (b, a) for a, b in edges}
    adj = adjacency if adjacency is not None else g.adj
    dists = {u: bfs_distances(g, u, adjacency=adj) for u in vs}
    for i, u in enumerate(vs):
        du = dists[u]
        for v in vs[i + 1:]:
            dv = dists[v]
            duv = du[v]
            if duv < 0:
                continue
            for x in range(g.n):
                if du[x] >= 0 and dv[x] >= 0 and du[x] + dv[x] == duv:
                    if x not in vset:
                        return False
                    for y in adj[x]:
                        if du[x] + 1 + (dv[y] if dv[y] >= 0 else duv + 2) == duv:
                            key = (x, y) if x < y else (y, x)
                            if eset is not None and key not in eset:
                                return False
    return True


def bipartition(g):
    """(colors, None) for bipartite graphs, else (None, odd_cycle)."""
    color = [-1] * g.n
    parent = [-1] * g.n
    for s in range(g.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for w in g.adj[u]:
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    parent[w] = u
                    q.append(w)
                elif color[w] == color[u]:
                    return None, _odd_cycle(parent, u, w)
    return color, None


def _odd_cycle(parent, u, w):
    au, aw = [u], [w]
    su, sw = {u}, {w}
    while True:
        if au[-1] in sw:
            meet = au[-1]
            break
        if aw[-1] in su:
            meet = aw[-1]
            break
        if parent[au[-1]] >= 0:
            au.append(parent[au[-1]])
            su.add(au[-1])
        if parent[aw[-1]] >= 0:
            aw.append(parent[aw[-1]])
            sw.add(aw[-1])
    pu = au[: au.index(meet) + 1]
    pw = aw[: aw.index(meet) + 1]
    return pu[:-1] + list(reversed(pw))


def components_minus(g, removed):
    """Connected components of V minus `removed`, each sorted, sorted by head."""
    removed = set(removed)
    seen = set(removed)
    comps = []
    for s in range(g.n):
        if s in seen:
            continue
        comp = []
        q = deque([s])
        seen.add(s)
        while q:
            u = q.popleft()
            comp.append(u)
            for w in g.adj[u]:
                if w not in seen:
                    seen.add(w)
                    q.append(w)
        comps.append(sorted(comp))
    comps.sort()
    return comps


def component_of(g, vertex, removed, adjacency=None):
    """Sorted component of `vertex` in g minus `removed` (vertex excluded from removed)."""
    adj = adjacency if adjacency is not None else g.adj
    removed = set(removed)
    removed.discard(vertex)
    seen = {vertex} | removed
    comp = [vertex]
    q = deque([vertex])
    while q:
        u = q.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                comp.append(w)
                q.append(w)
    return sorted(comp)


class Host:
    """A playing field: induced subgraph on a vertex set, minus some edges.

    Guards measure shadows here. Vertices keep their base-graph indices; BFS
    tables are cached because hosts never change after creation.
    """

    __slots__ = ("graph", "vertices", "removed_edges", "adj", "_dist_cache")

    def __init__(self, graph, vertices=None, removed_edges=()):
        self.graph = graph
        self.vertices = frozenset(range(graph.n) if vertices is None else vertices)
        self.removed_edges = frozenset(
            (u, v) if u < v else (v, u) for u, v in removed_edges
        )
        adj = [()] * graph.n
        for v in self.vertices:
            adj[v] = tuple(
                w
                for w in graph.adj[v]
                if w in self.vertices
                and ((v, w) if v < w else (w, v)) not in self.removed_edges
            )
        self.adj = tuple(adj)
        self._dist_cache = {}

    def __contains__(self, v):
        return v in self.vertices

    def distances(self, source):
        d = self._dist_cache.get(source)
        if d is None:
            if source not in self.vertices:
                raise NoPathError(f"source {source} not in host")
            d = tuple(bfs_distances(self.graph, source, adjacency=self.adj))
            self._dist_cache[source] = d
        return d

    def geodesic(self, u, v):
        dv = self.distances(v)
        if u not in self.vertices or dv[u] < 0:
            raise NoPathError(f"no ({u},{v})-path in host")
        path = [u]
        cur = u
        while cur != v:
            cur = min(w for w in self.adj[cur] if dv[w] == dv[cur] - 1)
            path.append(cur)
        return tuple(path)

    def is_geodesic_path(self, vertices):
        vs = list(vertices)
        if any(v not in self.vertices for v in vs):
            return False
        if len(vs) == 1:
            return True
        d = self.distances(vs[0])
        return d[vs[-1]] == len(vs) - 1

    def is_geodesically_closed(self, vertices):
        return is_geodesically_closed(self.graph, vertices, adjacency=self.adj)


def sub_rotation(g, emb, vertices, removed_edges=()):
    """Rotation system induced on a host (drops absent neighbors)."""
    vset = set(vertices)
    removed = {(u, v) if u < v else (v, u) for u, v in removed_edges}
    rot = []
    for v in range(g.n):
        if v in vset:
            rot.append(
                tuple(
                    w
                    for w in emb.rotation[v]
                    if w in vset and ((v, w) if v < w else (w, v)) not in removed
                )
            )
        else:
            rot.append(())
    return rot


def walk_sides(g, emb, cycle_edges, faces=None):
    """Partition faces by the side of a closed curve they lie on.

    `cycle_edges` is the set of undirected edges forming the curve. Faces
    adjacent across a non-curve edge share a side. Returns (faces, side) where
    side[i] is a small integer component id for face i.
    """
    if faces is None:
        faces = trace_faces(g, emb)
    blocked = {(u, v) if u < v else (v, u) for u, v in cycle_edges}
    owner = face_directed_edge_map(faces)
    parent = list(range(len(faces)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u in range(g.n):
        for v in g.adj[u]:
            if u < v and (u, v) not in blocked:
                a, b = find(owner[(u, v)]), find(owner[(v, u)])
                if a != b:
                    parent[a] = b
    side = [find(i) for i in range(len(faces))]
    return faces, side


def vertex_side(g, faces, side, vertex):
    """Side id of a vertex not on the curve (any incident face's side)."""
    for fi, face in enumerate(faces):
        if vertex in face:
            return side[fi]
    raise ValueError(f"vertex {vertex} not on any face")


def biconnected_components(g):
    """(blocks, cut_vertices): blocks as sorted vertex tuples, iterative Tarjan."""
    visited = [False] * g.n
    depth = [0] * g.n
    low = [0] * g.n
    parent = [-1] * g.n
    cuts = set()
    blocks = []
    edge_stack = []
    for root in range(g.n):
        if visited[root]:
            continue
        stack = [(root, iter(g.adj[root]))]
        visited[root] = True
        root_children = 0
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if not visited[w]:
                    visited[w] = True
                    depth[w] = depth[v] + 1
                    low[w] = depth[w]
                    parent[w] = v
                    edge_stack.append((v, w))
                    stack.append((w, iter(g.adj[w])))
                    if v == root:
                        root_children += 1
                    advanced = True
                    break
                if w != parent[v] and depth[w] < depth[v]:
                    edge_stack.append((v, w))
                    low[v] = min(low[v], depth[w])
            if advanced:
                continue
            stack.pop()
            if stack:
                u = stack[-1][0]
                low[u] = min(low[u], low[v])
                if low[v] >= depth[u]:
                    block = set()
                    while edge_stack:
                        a, b = edge_stack.pop()
                        block.add(a)
                        block.add(b)
                        if (a, b) == (u, v):
                            break
                    if block:
                        blocks.append(tuple(sorted(block)))
                    if u != root or root_children > 1:
                        cuts.add(u)
        if g.degree(root) == 0:
            blocks.append((root,))
    return blocks, sorted(cuts)
