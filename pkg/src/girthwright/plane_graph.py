"""Plane graphs as rotation systems.

Vertices are ``0..n-1``.  ``rotations[v]`` lists the neighbours of ``v`` in
clockwise order.  A dart ``(u, v)`` is an edge with a direction, and the
face walk through it continues with ``(v, w)`` where ``w`` follows ``u`` in
the rotation at ``v``.  Each connected component has one designated outer
dart; components are understood to sit side by side in the outer face.

Every graph also carries ``labels``: stable identifiers that survive
taking subgraphs and identifying vertices.  Callers that compose results
across several graphs should key them by label.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

Dart = tuple[int, int]
Edge = tuple[int, int]


class EmbeddingInvalid(ValueError):
    """The rotation system does not describe a plane embedding."""


class NotACycle(ValueError):
    pass


class NotSeparating(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


@dataclass(frozen=True)
class BoundaryWalk:
    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]

    @property
    def is_cycle(self) -> bool:
        return len(self.vertices) >= 3 and len(set(self.vertices)) == len(self.vertices)


@dataclass(frozen=True)
class PlaneGraph:
    rotations: tuple[tuple[int, ...], ...]
    outer: tuple[Dart, ...] = ()
    labels: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        rot = tuple(tuple(int(w) for w in r) for r in self.rotations)
        object.__setattr__(self, "rotations", rot)
        n = len(rot)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(n)))
        elif len(self.labels) != n or len(set(self.labels)) != n:
            raise ValueError("labels must be distinct, one per vertex")
        for v, r in enumerate(rot):
            if len(set(r)) != len(r):
                raise EmbeddingInvalid(f"parallel edges at vertex {v}")
            for w in r:
                if not 0 <= w < n or w == v:
                    raise EmbeddingInvalid(f"bad neighbour {w} at vertex {v}")
                if v not in rot[w]:
                    raise EmbeddingInvalid(f"edge {v}-{w} is not symmetric")
        object.__setattr__(self, "outer", self._settle_outer(tuple(self.outer)))

    # ------------------------------------------------------------------
    # basic structure

    @property
    def n(self) -> int:
        return len(self.rotations)

    @cached_property
    def adj(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(r) for r in self.rotations)

    def neighbours(self, v: int) -> tuple[int, ...]:
        return self.rotations[v]

    def degree(self, v: int) -> int:
        return len(self.rotations[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(sorted((u, w) for u, r in enumerate(self.rotations) for w in r if u < w))

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def index_of(self) -> dict[int, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        for v, r in enumerate(self.rotations):
            indptr[v + 1] = indptr[v] + len(r)
        indices = np.array([w for r in self.rotations for w in r], dtype=np.int64)
        return indptr, indices

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        seen = [-1] * self.n
        comps = []
        for s in range(self.n):
            if seen[s] >= 0:
                continue
            seen[s] = len(comps)
            stack, comp = [s], [s]
            while stack:
                x = stack.pop()
                for y in self.rotations[x]:
                    if seen[y] < 0:
                        seen[y] = len(comps)
                        stack.append(y)
                        comp.append(y)
            comps.append(tuple(sorted(comp)))
        return tuple(comps)

    @cached_property
    def component_of(self) -> tuple[int, ...]:
        out = [0] * self.n
        for i, comp in enumerate(self.components):
            for v in comp:
                out[v] = i
        return tuple(out)

    def is_connected(self) -> bool:
        return len(self.components) <= 1

    # ------------------------------------------------------------------
    # faces

    @cached_property
    def _succ(self) -> tuple[dict[int, int], ...]:
        return tuple({r[i]: r[(i + 1) % len(r)] for i in range(len(r))} for r in self.rotations)

    def next_dart(self, d: Dart) -> Dart:
        u, v = d
        return (v, self._succ[v][u])

    @cached_property
    def _face_data(self) -> tuple[tuple[tuple[Dart, ...], ...], dict[Dart, int]]:
        face_of: dict[Dart, int] = {}
        faces: list[tuple[Dart, ...]] = []
        for u, r in enumerate(self.rotations):
            for w in r:
                d = (u, w)
                if d in face_of:
                    continue
                walk = []
                while d not in face_of:
                    face_of[d] = len(faces)
                    walk.append(d)
                    d = self.next_dart(d)
                faces.append(tuple(walk))
        return tuple(faces), face_of

    @property
    def faces(self) -> tuple[tuple[Dart, ...], ...]:
        return self._face_data[0]

    def face_id(self, d: Dart) -> int:
        return self._face_data[1][d]

    def check_euler(self) -> None:
        comp_of = self.component_of
        nv = [0] * len(self.components)
        ne = [0] * len(self.components)
        nf = [0] * len(self.components)
        for v in range(self.n):
            nv[comp_of[v]] += 1
        for u, _ in self.edges:
            ne[comp_of[u]] += 1
        for f in self.faces:
            nf[comp_of[f[0][0]]] += 1
        for i in range(len(self.components)):
            if ne[i] == 0:
                continue
            if nv[i] - ne[i] + nf[i] != 2:
                raise EmbeddingInvalid(
                    f"component {i}: V - E + F = {nv[i] - ne[i] + nf[i]}, expected 2"
                )

    def _settle_outer(self, given: tuple[Dart, ...]) -> tuple[Dart, ...]:
        self.check_euler()
        chosen: dict[int, Dart] = {}
        for d in given:
            u, v = d
            if not (0 <= u < self.n and v in self.adj[u]):
                raise EmbeddingInvalid(f"outer dart {d} is not an edge")
            c = self.component_of[u]
            if c in chosen:
                raise EmbeddingInvalid("two outer darts in one component")
            chosen[c] = (u, v)
        faces = self.faces
        for c, comp in enumerate(self.components):
            if c in chosen or len(comp) == 1:
                continue
            mine = [f for f in faces if self.component_of[f[0][0]] == c]
            best = max(mine, key=lambda f: (len(f), [-x for d in f for x in d]))
            chosen[c] = min(best)
        return tuple(chosen[c] for c in sorted(chosen))

    @cached_property
    def outer_face_ids(self) -> frozenset[int]:
        return frozenset(self.face_id(d) for d in self.outer)

    @cached_property
    def outer_vertices(self) -> frozenset[int]:
        out = {v for v in range(self.n) if not self.rotations[v]}
        for fid in self.outer_face_ids:
            out.update(u for u, _ in self.faces[fid])
        return frozenset(out)

    @cached_property
    def outer_edges(self) -> frozenset[Edge]:
        out = set()
        for fid in self.outer_face_ids:
            out.update(_edge(u, v) for u, v in self.faces[fid])
        return frozenset(out)

    def face_walk(self, d: Dart) -> BoundaryWalk:
        darts = self.faces[self.face_id(d)]
        i = darts.index(d)
        darts = darts[i:] + darts[:i]
        return BoundaryWalk(tuple(u for u, _ in darts), tuple(_edge(u, v) for u, v in darts))

    # ------------------------------------------------------------------
    # derived graphs

    def subgraph(
        self, vertices: Iterable[int], edges: Iterable[Edge] | None = None
    ) -> tuple["PlaneGraph", dict[int, int]]:
        """Subgraph on ``vertices`` (induced unless ``edges`` is given).

        Returns the new graph and the map from old to new indices.  The
        outer face of each new component is the face that contains the old
        outer face.
        """
        keep = sorted(set(vertices))
        new_of = {old: i for i, old in enumerate(keep)}
        if edges is None:
            wanted = None
        else:
            wanted = {_edge(u, v) for u, v in edges}
            for u, v in wanted:
                if u not in new_of or v not in new_of or not self.has_edge(u, v):
                    raise ValueError(f"edge {u}-{v} is not available")

        def kept(u: int, v: int) -> bool:
            return u in new_of and v in new_of and (wanted is None or _edge(u, v) in wanted)

        rot = tuple(tuple(new_of[w] for w in self.rotations[old] if kept(old, w)) for old in keep)

        uf = _UnionFind(len(self.faces))
        outer_ids = sorted(self.outer_face_ids)
        for fid in outer_ids[1:]:
            uf.union(outer_ids[0], fid)
        for u, v in self.edges:
            if not kept(u, v):
                uf.union(self.face_id((u, v)), self.face_id((v, u)))
        outer_root = uf.find(outer_ids[0]) if outer_ids else -1

        picked: dict[int, Dart] = {}
        comp_seen: set[int] = set()
        # components of the new graph, found on the fly
        new_comp = _components_from_rotations(rot)
        for old in keep:
            for w in self.rotations[old]:
                if not kept(old, w):
                    continue
                c = new_comp[new_of[old]]
                if c in comp_seen:
                    continue
                if uf.find(self.face_id((old, w))) == outer_root:
                    picked[c] = (new_of[old], new_of[w])
                    comp_seen.add(c)
        labels = tuple(self.labels[old] for old in keep)
        g = PlaneGraph(rot, tuple(picked[c] for c in sorted(picked)), labels)
        return g, new_of

    def induced(self, vertices: Iterable[int]) -> "PlaneGraph":
        return self.subgraph(vertices)[0]

    def without(self, vertices: Iterable[int]) -> "PlaneGraph":
        gone = set(vertices)
        return self.subgraph(v for v in range(self.n) if v not in gone)[0]

    def relabelled(self, labels: Sequence[int]) -> "PlaneGraph":
        return PlaneGraph(self.rotations, self.outer, tuple(labels))


def _components_from_rotations(rot: Sequence[Sequence[int]]) -> list[int]:
    comp = [-1] * len(rot)
    c = 0
    for s in range(len(rot)):
        if comp[s] >= 0:
            continue
        comp[s] = c
        stack = [s]
        while stack:
            x = stack.pop()
            for y in rot[x]:
                if comp[y] < 0:
                    comp[y] = c
                    stack.append(y)
        c += 1
    return comp


# ----------------------------------------------------------------------
# module-level operations


def from_edges(n: int, edges: Iterable[Edge]) -> PlaneGraph:
    """Convenience builder for graphs whose rotation order does not matter
    (forests) or is produced by the planarity embedder."""
    from .generator import embed_planar

    return embed_planar(n, list(edges))


def trace_faces(g: PlaneGraph) -> list[BoundaryWalk]:
    g.check_euler()
    return [g.face_walk(f[0]) for f in g.faces]


def outer_boundary(g: PlaneGraph) -> BoundaryWalk:
    """The outer face walk of the first component (the whole story when
    ``g`` is connected)."""
    if not g.outer:
        return BoundaryWalk(tuple(v for v in range(g.n) if not g.rotations[v])[:1], ())
    return g.face_walk(g.outer[0])


def _check_cycle(g: PlaneGraph, c: Sequence[int]) -> tuple[int, ...]:
    c = tuple(c)
    if len(c) < 3 or len(set(c)) != len(c):
        raise NotACycle(f"{c} is not a cycle")
    for i in range(len(c)):
        if not (0 <= c[i] < g.n) or not g.has_edge(c[i], c[(i + 1) % len(c)]):
            raise NotACycle(f"{c} is not a cycle of the graph")
    return c


def cycle_edges(c: Sequence[int]) -> frozenset[Edge]:
    return frozenset(_edge(c[i], c[(i + 1) % len(c)]) for i in range(len(c)))


def chords_of(g: PlaneGraph, c: Sequence[int]) -> list[Edge]:
    c = _check_cycle(g, c)
    on = set(c)
    ce = cycle_edges(c)
    return [e for e in g.edges if e[0] in on and e[1] in on and e not in ce]


def _cycle_sides(g: PlaneGraph, c: tuple[int, ...]) -> tuple[_UnionFind, int, int]:
    ce = cycle_edges(c)
    uf = _UnionFind(len(g.faces))
    outer_ids = sorted(g.outer_face_ids)
    for fid in outer_ids[1:]:
        uf.union(outer_ids[0], fid)
    for u, v in g.edges:
        if (u, v) not in ce:
            uf.union(g.face_id((u, v)), g.face_id((v, u)))
    a = uf.find(g.face_id((c[0], c[1])))
    b = uf.find(g.face_id((c[1], c[0])))
    outer_root = uf.find(outer_ids[0])
    if a == b or outer_root not in (a, b):
        raise EmbeddingInvalid("cycle does not split the plane in two")
    return uf, outer_root, b if a == outer_root else a


def interior(g: PlaneGraph, c: Sequence[int]) -> tuple[frozenset[int], PlaneGraph]:
    """Vertices strictly inside the cycle ``c`` and the closed subgraph
    bounded by it (the cycle together with everything inside)."""
    c = _check_cycle(g, c)
    uf, _, inner = _cycle_sides(g, c)
    on = set(c)
    inside = frozenset(
        v
        for v in range(g.n)
        if v not in on and g.rotations[v] and uf.find(g.face_id((v, g.rotations[v][0]))) == inner
    )
    keep_edges = set(cycle_edges(c))
    for u, v in g.edges:
        if u in inside or v in inside:
            keep_edges.add((u, v))
        elif u in on and v in on and uf.find(g.face_id((u, v))) == inner:
            keep_edges.add((u, v))
    closed, _ = g.subgraph(on | inside, keep_edges)
    return inside, closed


def interior_vertices(g: PlaneGraph, c: Sequence[int]) -> frozenset[int]:
    c = _check_cycle(g, c)
    uf, _, inner = _cycle_sides(g, c)
    on = set(c)
    return frozenset(
        v
        for v in range(g.n)
        if v not in on and g.rotations[v] and uf.find(g.face_id((v, g.rotations[v][0]))) == inner
    )


def split_along_path(g: PlaneGraph, p: Sequence[int]) -> tuple[PlaneGraph, PlaneGraph]:
    """Split a connected graph along a path whose ends lie on the outer face.

    Returns ``(G1, G2)`` with ``G1 ∪ G2 = g`` and ``G1 ∩ G2 = p``.  A single
    vertex path must be a cut vertex; the side holding the smallest other
    vertex comes first.
    """
    sides = path_sides(g, p)
    return g.subgraph(*sides[0])[0], g.subgraph(*sides[1])[0]


def path_sides(
    g: PlaneGraph, p: Sequence[int]
) -> tuple[tuple[frozenset[int], frozenset[Edge]], tuple[frozenset[int], frozenset[Edge]]]:
    p = tuple(p)
    if not p or len(set(p)) != len(p) or not all(0 <= v < g.n for v in p):
        raise NotSeparating(f"{p} is not a path")
    for a, b in zip(p, p[1:]):
        if not g.has_edge(a, b):
            raise NotSeparating(f"{p} is not a path: {a}-{b} missing")
    if not g.is_connected():
        raise NotSeparating("graph is not connected")
    if p[0] not in g.outer_vertices or p[-1] not in g.outer_vertices:
        raise NotSeparating("path ends must lie on the outer face")
    pe = frozenset(_edge(a, b) for a, b in zip(p, p[1:]))
    pv = frozenset(p)

    if len(p) == 1:
        u = p[0]
        rest = g.without([u])
        comps = [frozenset(rest.labels[i] for i in comp) for comp in rest.components]
        # labels of g.without are g's labels; map back to g indices
        idx = g.index_of
        comps = [frozenset(idx[lab] for lab in comp) for comp in comps]
        if len(comps) < 2:
            raise NotSeparating(f"{u} is not a cut vertex")
        first = comps[0]
        second = frozenset().union(*comps[1:])
        out = []
        for side in (first, second):
            vs = side | pv
            es = frozenset(e for e in g.edges if e[0] in vs and e[1] in vs)
            out.append((vs, es))
        return out[0], out[1]

    uf = _UnionFind(len(g.faces))
    outer_ids = g.outer_face_ids
    for u, v in g.edges:
        if (u, v) in pe:
            continue
        a, b = g.face_id((u, v)), g.face_id((v, u))
        if a in outer_ids or b in outer_ids:
            continue
        uf.union(a, b)
    classes: dict[int, set[Edge]] = {}
    for u, v in g.edges:
        if (u, v) in pe:
            continue
        a, b = g.face_id((u, v)), g.face_id((v, u))
        if a in outer_ids and b in outer_ids:
            raise NotSeparating("bridges off the path are not supported")
        root = uf.find(b if a in outer_ids else a)
        classes.setdefault(root, set()).add((u, v))
    if len(classes) != 2:
        raise NotSeparating(f"path leaves {len(classes)} regions, expected 2")
    out = []
    for root in sorted(classes, key=lambda r: min(classes[r])):
        es = frozenset(classes[root]) | pe
        vs = pv | {x for e in es for x in e}
        out.append((frozenset(vs), es))
    (v1, e1), (v2, e2) = out
    if v1 & v2 != pv or not (v1 - pv) or not (v2 - pv):
        raise NotSeparating("sides do not meet exactly in the path")
    return out[0], out[1]


def cut_vertices(g: PlaneGraph) -> frozenset[int]:
    n = g.n
    disc = [-1] * n
    low = [0] * n
    cuts: set[int] = set()
    t = 0
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = t
        t += 1
        children = 0
        stack = [(root, -1, iter(g.rotations[root]))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if disc[w] < 0:
                    disc[w] = low[w] = t
                    t += 1
                    if v == root:
                        children += 1
                    stack.append((w, v, iter(g.rotations[w])))
                    advanced = True
                    break
                if w != parent:
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if parent >= 0:
                low[parent] = min(low[parent], low[v])
                if parent != root and low[v] >= disc[parent]:
                    cuts.add(parent)
        if children > 1:
            cuts.add(root)
    return frozenset(cuts)


def is_2_connected(g: PlaneGraph) -> bool:
    return g.n >= 3 and g.is_connected() and not cut_vertices(g)


def identify_fan_ends(g: PlaneGraph, wj: int, wj1: int, wj2: int) -> PlaneGraph:
    """Delete ``wj1`` and glue ``wj`` to ``wj2`` through the outer face.

    The three vertices must be consecutive on the outer face and ``wj1``
    must have exactly one further neighbour, a hub adjacent to both ends.
    The merged vertex keeps the label of ``wj``; its index is
    ``g.index_of``-compatible through that label.
    """
    for v in (wj, wj1, wj2):
        if not 0 <= v < g.n:
            raise PreconditionViolated(f"unknown vertex {v}")
    if len({wj, wj1, wj2}) != 3:
        raise PreconditionViolated("vertices must be distinct")
    if not (g.has_edge(wj, wj1) and g.has_edge(wj1, wj2)):
        raise PreconditionViolated("middle vertex must be adjacent to both ends")
    if g.has_edge(wj, wj2):
        raise PreconditionViolated("ends are adjacent; gluing them would make a loop")
    others = set(g.adj[wj1]) - {wj, wj2}
    if len(others) != 1:
        raise PreconditionViolated("middle vertex must have degree three")
    (hub,) = others
    if not (g.has_edge(hub, wj) and g.has_edge(hub, wj2)):
        raise PreconditionViolated("no hub adjacent to all three vertices")
    consecutive = False
    for fid in g.outer_face_ids:
        walk = [u for u, _ in g.faces[fid]]
        m = len(walk)
        for i in range(m):
            trip = (walk[i], walk[(i + 1) % m], walk[(i + 2) % m])
            if trip in ((wj, wj1, wj2), (wj2, wj1, wj)):
                consecutive = True
    if not consecutive:
        raise PreconditionViolated("vertices are not consecutive on the outer face")

    h, new_of = g.subgraph([v for v in range(g.n) if v != wj1])
    x, y, hb = new_of[wj], new_of[wj2], new_of[hub]
    corner = None
    for fid in h.outer_face_ids:
        darts = h.faces[fid]
        m = len(darts)
        for i in range(m):
            (p, a), (_, b), (_, c), (_, s) = (darts[(i + j) % m] for j in range(4))
            if a == x and b == hb and c == y:
                corner = (p, x, y, s)
            elif a == y and b == hb and c == x:
                corner = (p, y, x, s)
            if corner:
                break
        if corner:
            break
    if corner is None:
        raise PreconditionViolated("hub does not reach the outer face after deletion")
    p, first, second, s = corner

    def arc(v: int, start: int, stop: int) -> list[int]:
        r = h.rotations[v]
        i = r.index(start)
        out = []
        while True:
            out.append(r[i])
            if r[i] == stop:
                return out
            i = (i + 1) % len(r)

    merged = arc(first, hb, p) + arc(second, s, hb)
    z_rot: list[int] = []
    for w in merged:
        if w not in z_rot:
            z_rot.append(w)
    rot = [list(r) for r in h.rotations]
    rot[first] = z_rot
    for w in set(h.rotations[second]):
        r = rot[w]
        if first in r:
            r.remove(second)
        else:
            r[r.index(second)] = first
    rot[second] = []
    keep = [v for v in range(h.n) if v != second]
    renum = {old: i for i, old in enumerate(keep)}
    new_rot = tuple(tuple(renum[w] for w in rot[old]) for old in keep)
    labels = tuple(g.labels[wj] if old == first else h.labels[old] for old in keep)
    z = renum[first]
    outer = [(z, renum[s])]
    comps = _components_from_rotations(new_rot)
    for c in sorted(set(comps)):
        if c != comps[z]:
            # keep the old outer face for untouched components
            for d in h.outer:
                if d[0] in renum and comps[renum[d[0]]] == c:
                    outer.append((renum[d[0]], renum[d[1]]))
                    break
    try:
        return PlaneGraph(new_rot, tuple(sorted(outer, key=lambda d: comps[d[0]])), labels)
    except EmbeddingInvalid as exc:
        raise PreconditionViolated(f"identification broke the embedding: {exc}") from exc
