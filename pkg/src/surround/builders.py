"""Constructors for the graph families used by tests, presets and witnesses.

Everything here is deterministic (seeded where random) and returns embeddings
whenever a strategy needs one.
"""

from __future__ import annotations

import random

from .graph import Embedding, Graph


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def star_graph(leaves):
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def grid_graph(rows, cols):
    """rows x cols grid with its planar rotation. Vertex (r,c) -> r*cols + c."""

    def vid(r, c):
        return r * cols + c

    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    g = Graph(rows * cols, edges)
    rotation = []
    for r in range(rows):
        for c in range(cols):
            order = []
            if r > 0:
                order.append(vid(r - 1, c))
            if c + 1 < cols:
                order.append(vid(r, c + 1))
            if r + 1 < rows:
                order.append(vid(r + 1, c))
            if c > 0:
                order.append(vid(r, c - 1))
            rotation.append(order)
    return g, Embedding(rotation)


def cycle_embedding(n):
    g = cycle_graph(n)
    rot = [((v - 1) % n, (v + 1) % n) for v in range(n)]
    return g, Embedding(rot)


def theta_graph(lengths=(2, 2, 2)):
    """Three internally disjoint paths between two hub vertices 0 and 1."""
    edges = []
    n = 2
    rotation_hub0 = []
    rotation_hub1 = []
    arms = []
    for length in lengths:
        if length < 2:
            raise ValueError("arm length >= 2 keeps the graph simple")
        inner = list(range(n, n + length - 1))
        n += length - 1
        chain = [0] + inner + [1]
        for a, b in zip(chain, chain[1:]):
            edges.append((a, b))
        arms.append(inner)
        rotation_hub0.append(inner[0])
        rotation_hub1.append(inner[-1])
    g = Graph(n, edges)
    rotation = [None] * n
    rotation[0] = rotation_hub0
    rotation[1] = list(reversed(rotation_hub1))
    for inner in arms:
        chain = [0] + inner + [1]
        for i, v in enumerate(inner):
            rotation[v] = [chain[i], chain[i + 2]]
    return g, Embedding(rotation)


def lollipop_graph(cycle_len, tail_len):
    """Cycle with a pendant path attached at vertex 0."""
    edges = [(i, (i + 1) % cycle_len) for i in range(cycle_len)]
    prev = 0
    for i in range(tail_len):
        v = cycle_len + i
        edges.append((prev, v))
        prev = v
    return Graph(cycle_len + tail_len, edges)


def subdivide(g, emb=None):
    """Subdivide every edge once. Originals keep ids; labels mark the classes."""
    edges = g.edges()
    n = g.n
    new_edges = []
    mid = {}
    for i, (u, v) in enumerate(edges):
        w = n + i
        mid[(u, v)] = w
        new_edges.append((u, w))
        new_edges.append((w, v))
    labels = ["original"] * n + ["subdivision"] * len(edges)
    sg = Graph(n + len(edges), new_edges, labels=labels)
    semb = None
    if emb is not None:
        rotation = []
        for v in range(n):
            rotation.append(
                [mid[(v, w) if v < w else (w, v)] for w in emb.rotation[v]]
            )
        for i, (u, v) in enumerate(edges):
            rotation.append([u, v])
        semb = Embedding(rotation, genus_hint=emb.genus_hint,
                         torus_offsets=_subdivided_offsets(edges, mid, emb))
    return sg, semb


def _subdivided_offsets(edges, mid, emb):
    if not emb.torus_offsets:
        return None
    offsets = {}
    for u, v in edges:
        w = mid[(u, v)]
        dx, dy = emb.torus_offsets[(u, v)]
        offsets[(u, w)] = (0, 0)
        offsets[(w, v)] = (dx, dy)
    return offsets


def add_vertex_in_face(n, rotation, face):
    """Embed a new vertex inside `face`, joined to every corner of its walk.

    The face must be a simple cycle. Returns (new_vertex_id, new_edges,
    rotation) where rotation is a fresh list of lists.
    """
    if len(set(face)) != len(face):
        raise ValueError("face must be a simple cycle")
    v = n
    rotation = [list(r) for r in rotation] + [[]]
    new_edges = []
    k = len(face)
    for i, c in enumerate(face):
        prev = face[(i - 1) % k]
        new_edges.append((c, v))
        rot = rotation[c]
        # the face corner at c sits between the edges to prev and to nxt;
        # the new spoke belongs in that angular sector
        j = rot.index(prev)
        rot.insert(j + 1, v)
    rotation[v] = list(reversed(face))
    return v, new_edges, rotation


def torus_grid(m, n):
    """C_m box C_n on the torus with translation offsets. Vertex (i,j) -> i*n+j."""
    if m < 3 or n < 3:
        raise ValueError("torus grid needs m, n >= 3 to stay simple")

    def vid(i, j):
        return (i % m) * n + (j % n)

    edges = []
    offsets = {}
    for i in range(m):
        for j in range(n):
            u = vid(i, j)
            v = vid(i + 1, j)
            edges.append((u, v))
            offsets[(u, v)] = (1 if i + 1 == m else 0, 0)
            w = vid(i, j + 1)
            edges.append((u, w))
            offsets[(u, w)] = (0, 1 if j + 1 == n else 0)
    g = Graph(m * n, edges)
    rotation = []
    for i in range(m):
        for j in range(n):
            rotation.append([vid(i - 1, j), vid(i, j + 1), vid(i + 1, j), vid(i, j - 1)])
    emb = Embedding(rotation, genus_hint=1, torus_offsets=offsets)
    return g, emb


def triangular_torus(m, n):
    """6-regular triangulation of the torus: grid plus one diagonal per cell."""
    if m < 3 or n < 3:
        raise ValueError("triangular torus needs m, n >= 3")

    def vid(i, j):
        return (i % m) * n + (j % n)

    edges = []
    offsets = {}
    for i in range(m):
        for j in range(n):
            u = vid(i, j)
            for di, dj in ((1, 0), (0, 1), (1, 1)):
                i2, j2 = i + di, j + dj
                v = vid(i2, j2)
                edges.append((u, v))
                offsets[(u, v)] = (1 if i2 >= m else 0, 1 if j2 >= n else 0)
    g = Graph(m * n, edges)
    rotation = []
    for i in range(m):
        for j in range(n):
            rotation.append([
                vid(i - 1, j), vid(i - 1, j - 1), vid(i, j - 1),
                vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1),
            ])
    emb = Embedding(rotation, genus_hint=1, torus_offsets=offsets)
    return g, emb


def all_trees(n):
    """All free trees on n vertices up to isomorphism, as Graphs.

    Grows trees by attaching a leaf everywhere and deduplicating by the AHU
    canonical form; exhaustive because every tree arises by deleting a leaf.
    """
    if n < 1:
        return []
    current = [Graph(1, [])]
    if n == 1:
        return current
    for size in range(2, n + 1):
        seen = {}
        for t in current:
            for v in range(t.n):
                edges = t.edges() + [(v, t.n)]
                cand = Graph(t.n + 1, edges)
                key = tree_canonical_form(cand)
                if key not in seen:
                    seen[key] = cand
        current = list(seen.values())
    return current


def tree_canonical_form(t):
    """AHU canonical encoding rooted at the tree's center(s)."""
    centers = _tree_centers(t)

    def encode(root):
        def rec(v, parent):
            subs = sorted(rec(w, v) for w in t.adj[v] if w != parent)
            return "(" + "".join(subs) + ")"

        return rec(root, -1)

    return min(encode(c) for c in centers)


def _tree_centers(t):
    if t.n == 1:
        return [0]
    deg = [t.degree(v) for v in range(t.n)]
    leaves = [v for v in range(t.n) if deg[v] == 1]
    removed = len(leaves)
    while removed < t.n:
        nxt = []
        for v in leaves:
            for w in t.adj[v]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        removed += len(nxt)
        leaves = nxt or leaves
        if removed >= t.n:
            break
    return leaves


def random_tree(n, seed=0):
    rng = random.Random(seed)
    edges = [(rng.randrange(i), i) for i in range(1, n)]
    return Graph(n, edges)


def stacked_triangulation(n, seed=0):
    """Random planar triangulation grown by inserting vertices into faces.

    Starts from a triangle; each new vertex lands in a random face and joins
    its three corners, which keeps the rotation system maintainable directly.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    rng = random.Random(seed)
    rotation = [[1, 2], [2, 0], [0, 1]]
    edges = [(0, 1), (1, 2), (0, 2)]
    faces = [(0, 1, 2), (0, 2, 1)]
    for v in range(3, n):
        fi = rng.randrange(len(faces))
        face = faces[fi]
        _, new_edges, rotation = add_vertex_in_face(v, rotation, face)
        edges.extend(new_edges)
        a, b, c = face
        faces[fi] = (a, b, v)
        faces.append((b, c, v))
        faces.append((c, a, v))
    g = Graph(n, edges)
    return g, Embedding(rotation)


def maximal_outerplanar(n, seed=0):
    """Random triangulated polygon with its convex-position rotation."""
    if n < 3:
        raise ValueError("need n >= 3")
    rng = random.Random(seed)
    edges = [(i, (i + 1) % n) for i in range(n)]

    def triangulate(lo, hi):
        # polygon chain lo..hi (cyclic gap closed by chord lo-hi)
        if hi - lo < 2:
            return
        k = rng.randrange(lo + 1, hi)
        if k - lo > 1:
            edges.append((lo, k))
        if hi - k > 1:
            edges.append((k, hi))
        triangulate(lo, k)
        triangulate(k, hi)

    triangulate(0, n - 1)
    g = Graph(n, edges)
    rotation = []
    for v in range(n):
        rotation.append(sorted(g.adj[v], key=lambda w: (w - v) % n))
    return g, Embedding(rotation)


def any_embedding(g):
    """Rotation in sorted order; valid only when it happens to be planar."""
    return Embedding([list(g.adj[v]) for v in range(g.n)])
