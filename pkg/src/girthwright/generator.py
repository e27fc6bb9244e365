"""Test graph factories: planarity embedding, exhaustive small graphs,
random planar graphs and canvases, and the wheel families."""

from __future__ import annotations

import itertools
import random
from collections import deque
from functools import lru_cache
from typing import Iterable, Iterator, Sequence, Union

import networkx as nx

from .canvas import Canvas, is_acceptable_path
from .girth import girth_profile, list_threshold
from .plane_graph import PlaneGraph, outer_boundary
from .wheels import WheelCertificate, broken_wheel_piece, glue, wheel_piece


class NonPlanar(ValueError):
    pass


# ----------------------------------------------------------------------
# planarity embedding


def _blocks(n: int, adj: list[set[int]]) -> list[list[tuple[int, int]]]:
    disc = [-1] * n
    low = [0] * n
    t = 0
    blocks: list[list[tuple[int, int]]] = []
    estack: list[tuple[int, int]] = []
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = t
        t += 1
        stack = [(root, -1, iter(sorted(adj[root])))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if disc[w] < 0:
                    estack.append((v, w))
                    disc[w] = low[w] = t
                    t += 1
                    stack.append((w, v, iter(sorted(adj[w]))))
                    advanced = True
                    break
                if w != parent and disc[w] < disc[v]:
                    estack.append((v, w))
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if parent >= 0:
                low[parent] = min(low[parent], low[v])
                if low[v] >= disc[parent]:
                    block = []
                    while True:
                        e = estack.pop()
                        block.append(e)
                        if e == (parent, v):
                            break
                    blocks.append(block)
    return blocks


def _arc(face: list[int], i: int, j: int) -> list[int]:
    out = []
    while True:
        out.append(face[i])
        if i == j:
            return out
        i = (i + 1) % len(face)


def _embed_block(block: list[tuple[int, int]]) -> list[list[int]]:
    """Faces of a plane embedding of a 2-connected graph, by incremental
    path insertion into admissible faces.  Raises NonPlanar."""
    badj: dict[int, set[int]] = {}
    for a, b in block:
        badj.setdefault(a, set()).add(b)
        badj.setdefault(b, set()).add(a)
    all_edges = {frozenset(e) for e in block}

    # initial cycle through the first edge
    a0, b0 = min(block)
    prev = {b0: None}
    q = deque([b0])
    while q:
        x = q.popleft()
        for y in sorted(badj[x]):
            if y not in prev and not (x == b0 and y == a0):
                prev[y] = x
                q.append(y)
    cycle = [a0]
    x = prev[a0]
    while x is not None:
        cycle.append(x)
        x = prev[x]
    faces = [cycle, cycle[::-1]]
    hv = set(cycle)
    he = {frozenset((cycle[i], cycle[(i + 1) % len(cycle)])) for i in range(len(cycle))}

    while len(he) < len(all_edges):
        frags: list[tuple[set[int], list[int]]] = []
        for e in sorted(all_edges - he, key=sorted):
            u, v = sorted(e)
            if u in hv and v in hv:
                frags.append(({u, v}, [u, v]))
        rest = set(badj) - hv
        seen: set[int] = set()
        for s in sorted(rest):
            if s in seen:
                continue
            comp = {s}
            stack = [s]
            while stack:
                x = stack.pop()
                for y in badj[x]:
                    if y in rest and y not in comp:
                        comp.add(y)
                        stack.append(y)
            seen |= comp
            att = {y for x in comp for y in badj[x] if y in hv}
            frags.append((att, sorted(comp)))
        best = None
        for att, body in frags:
            adm = [i for i, f in enumerate(faces) if att <= set(f)]
            if not adm:
                raise NonPlanar("a fragment fits in no face")
            if best is None or len(adm) < len(best[2]):
                best = (att, body, adm)
            if len(adm) == 1:
                break
        att, body, adm = best
        if len(body) == 2 and set(body) <= hv:
            path = body
        else:
            comp = set(body)
            start = min(att)
            prev2: dict[int, int | None] = {start: None}
            q = deque([start])
            end = None
            while q and end is None:
                x = q.popleft()
                for y in sorted(badj[x]):
                    if y in prev2:
                        continue
                    if y in comp:
                        prev2[y] = x
                        q.append(y)
                    elif y in att and y != start and x != start:
                        prev2[y] = x
                        end = y
                        break
            path = []
            x = end
            while x is not None:
                path.append(x)
                x = prev2[x]
            path.reverse()
        fi = adm[0]
        f = faces[fi]
        i, j = f.index(path[0]), f.index(path[-1])
        inner = path[1:-1]
        faces[fi] = _arc(f, i, j) + inner[::-1]
        faces.append(_arc(f, j, i) + inner)
        hv.update(path)
        he.update(frozenset(p) for p in zip(path, path[1:]))
    return faces


def _rotations_from_faces(faces: list[list[int]]) -> dict[int, list[int]]:
    succ: dict[int, dict[int, int]] = {}
    for f in faces:
        m = len(f)
        for i in range(m):
            succ.setdefault(f[i], {})[f[i - 1]] = f[(i + 1) % m]
    rot = {}
    for v, s in succ.items():
        start = min(s)
        order = [start]
        x = s[start]
        while x != start:
            order.append(x)
            x = s[x]
        rot[v] = order
    return rot


def embed_planar(n: int, edges: Iterable[tuple[int, int]], outer_cycle: Sequence[int] | None = None) -> PlaneGraph:
    """A plane embedding of the abstract graph, or NonPlanar.

    With ``outer_cycle`` the embedding is forced to have that cycle as the
    boundary of a face, which is then made the outer face.
    """
    edges = sorted({(min(a, b), max(a, b)) for a, b in edges})
    for a, b in edges:
        if a == b or not (0 <= a < n and 0 <= b < n):
            raise ValueError(f"bad edge {a}-{b}")
    if outer_cycle is not None:
        apex = n
        g = embed_planar(n + 1, edges + [(v, apex) for v in outer_cycle])
        h = g.without([apex])
        cyc = set(outer_cycle)
        for f in h.faces:
            if len(f) == len(outer_cycle) and {u for u, _ in f} == cyc:
                return PlaneGraph(h.rotations, (f[0],))
        raise NonPlanar("requested outer cycle is not a face boundary")
    adj: list[set[int]] = [set() for _ in range(n)]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    if n >= 3 and len(edges) > 3 * n - 6:
        raise NonPlanar("too many edges")
    rot: list[list[int]] = [[] for _ in range(n)]
    for block in _blocks(n, adj):
        if len(block) == 1:
            a, b = block[0]
            part = {a: [b], b: [a]}
        else:
            part = _rotations_from_faces(_embed_block(block))
        for v, r in part.items():
            rot[v].extend(r)
    return PlaneGraph(tuple(tuple(r) for r in rot))


def is_planar(n: int, edges: Iterable[tuple[int, int]]) -> bool:
    try:
        embed_planar(n, edges)
    except NonPlanar:
        return False
    return True


# ----------------------------------------------------------------------
# exhaustive small graphs


@lru_cache(maxsize=None)
def _connected_planar_edge_sets(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    if n <= 0:
        return ()
    if n == 1:
        return ((),)
    out: list[tuple[tuple[int, int], ...]] = []
    buckets: dict[str, list[nx.Graph]] = {}
    for base in _connected_planar_edge_sets(n - 1):
        for r in range(1, n):
            for nbrs in itertools.combinations(range(n - 1), r):
                edges = tuple(sorted(base + tuple((x, n - 1) for x in nbrs)))
                if len(edges) > 3 * n - 6 and n >= 3:
                    continue
                h = nx.Graph(edges)
                key = nx.weisfeiler_lehman_graph_hash(h, iterations=3)
                bucket = buckets.setdefault(key, [])
                if any(nx.is_isomorphic(h, other) for other in bucket):
                    continue
                if not is_planar(n, edges):
                    bucket.append(h)  # remember the rejection too
                    continue
                bucket.append(h)
                out.append(edges)
    return tuple(out)


def all_connected_planar(n: int) -> Iterator[PlaneGraph]:
    """One embedded representative of each connected planar graph on ``n``
    vertices."""
    if not 1 <= n <= 8:
        raise ValueError("n must be between 1 and 8")
    for edges in _connected_planar_edge_sets(n):
        yield embed_planar(n, edges)


# ----------------------------------------------------------------------
# random graphs


def _distance(adj: list[set[int]], s: int, t: int, cap: int) -> int:
    dist = {s: 0}
    q = deque([s])
    while q:
        x = q.popleft()
        if dist[x] >= cap:
            break
        for y in adj[x]:
            if y not in dist:
                dist[y] = dist[x] + 1
                if y == t:
                    return dist[y]
                q.append(y)
    return cap + 1


def random_planar_graph(n: int, rng: random.Random, min_girth: int = 3, density: float | None = None) -> PlaneGraph:
    """Random connected plane graph: a random tree plus random extra edges
    that keep the graph planar and every cycle at least ``min_girth`` long."""
    adj: list[set[int]] = [set() for _ in range(n)]
    edges = []
    for v in range(1, n):
        u = rng.randrange(v)
        adj[u].add(v)
        adj[v].add(u)
        edges.append((u, v))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if v not in adj[u]]
    rng.shuffle(pairs)
    want = density if density is not None else rng.random()
    budget = int(round(want * len(pairs)))
    for u, v in pairs:
        if budget <= 0:
            break
        if _distance(adj, u, v, min_girth - 2) < min_girth - 1:
            continue
        if not is_planar(n, edges + [(u, v)]):
            continue
        adj[u].add(v)
        adj[v].add(u)
        edges.append((u, v))
        budget -= 1
    perm = list(range(n))
    rng.shuffle(perm)
    return embed_planar(n, [(perm[a], perm[b]) for a, b in edges])


def random_canvas(
    n: int,
    seed: int,
    min_girth: int = 3,
    s_len: int | None = None,
    universe: int = 6,
    a_rate: float = 0.5,
    graph: PlaneGraph | None = None,
) -> Canvas:
    """Random valid canvas with trimmed lists.

    ``min_girth`` is a target on the graph: with 5 every list has three
    colours.  ``graph`` fixes the graph and randomizes the rest.
    """
    rng = random.Random(seed)
    g = graph if graph is not None else random_planar_graph(n, rng, min_girth)
    prof = girth_profile(g)
    walk = outer_boundary(g).vertices
    k = rng.choice([0, 1, 2, 2, 3, 3, 4, 4]) if s_len is None else s_len
    s: list[int] = []
    if walk and k:
        start = rng.randrange(len(walk))
        for i in range(len(walk)):
            v = walk[(start + i) % len(walk)]
            if v in s or len(s) >= k:
                break
            s.append(v)
        while len(s) == 4 and not is_acceptable_path(g, prof, s):
            s.pop()
    if not walk and g.n:
        s = [0][:k]
    lists: list[frozenset[int]] = [frozenset()] * g.n
    for v in s:
        banned = {next(iter(lists[w])) for w in g.adj[v] if w in s and lists[w]}
        lists[v] = frozenset([rng.choice([c for c in range(universe) if c not in banned])])
    outer_v = g.outer_vertices
    a: set[int] = set()
    for v in sorted(outer_v):
        if v in s or prof[v] < 5 or any(w in a for w in g.adj[v]):
            continue
        if rng.random() < a_rate:
            a.add(v)
    for v in range(g.n):
        if v in s:
            continue
        size = 2 if v in a else 3 if v in outer_v else list_threshold(prof[v])
        lists[v] = frozenset(rng.sample(range(universe), size))
    return Canvas(g, tuple(lists), tuple(s), False, frozenset(a))


# ----------------------------------------------------------------------
# wheels

WheelSpec = Union[tuple, list]


def make_broken_wheel(q: int) -> tuple[PlaneGraph, WheelCertificate]:
    """Cycle ``0 .. q-1`` plus chords from vertex 1; principal path 0 1 2."""
    if q < 3:
        raise ValueError("q >= 3 required")
    cert = broken_wheel_piece(0, 1, _fan_order(q))
    return _realize(cert), cert


def _fan_order(q: int) -> list[int]:
    # fan around vertex 1 from 0: 0 -> q-1 -> q-2 -> ... -> 2
    return [*range(q - 1, 1, -1)]


def make_wheel(q: int) -> tuple[PlaneGraph, WheelCertificate]:
    """Rim ``0 .. q-1``, hub ``q``; principal path 0 1 2."""
    if q < 3:
        raise ValueError("q >= 3 required")
    cert = wheel_piece(0, 1, 2, list(range(3, q)), q)
    return _realize(cert), cert


def _realize(cert: WheelCertificate) -> PlaneGraph:
    n = max(cert.vertices) + 1
    return embed_planar(n, cert.edges, outer_cycle=cert.outer_cycle)


def make_generalized(spec: WheelSpec) -> tuple[PlaneGraph, WheelCertificate]:
    """Build a generalized wheel from a nested spec.

    Leaves are ``("wheel", q)`` or ``("broken", q)``; inner nodes are
    ``("glue", left, right)``, gluing the last principal edge of ``left``
    to the first principal edge of ``right``.  A flat list of leaves glues
    them left to right.
    """
    counter = itertools.count(2)

    def leaf(kind: str, q: int, a: int, y: int) -> WheelCertificate:
        if kind == "broken":
            fan = [next(counter) for _ in range(q - 2)]
            return broken_wheel_piece(a, y, fan)
        if kind == "wheel":
            b = next(counter)
            rim = [next(counter) for _ in range(q - 3)]
            return wheel_piece(a, y, b, rim, next(counter))
        raise ValueError(f"unknown piece {kind!r}")

    def build(node, a: int, y: int) -> WheelCertificate:
        if isinstance(node, list):
            node = _chain_to_tree(node)
        if node[0] == "glue":
            left = build(node[1], a, y)
            right = build(node[2], left.principal_path[2], y)
            return glue(left, right)
        return leaf(node[0], node[1], a, y)

    cert = build(spec, 0, 1)
    return _realize(cert), cert


def _chain_to_tree(leaves: list):
    node = leaves[0]
    for nxt in leaves[1:]:
        node = ("glue", node, nxt)
    return node


def random_wheel_spec(rng: random.Random, max_vertices: int = 9, allow_broken_only: bool = False):
    """Random chain of pieces; not a plain broken wheel unless allowed.

    Wheel pieces get rims of at least four vertices.  A three-vertex rim is
    K4, whose hub sits inside a triangle; gluing K4 to another piece leaves
    an outer vertex adjacent to the whole principal path, and then several
    principal colourings can be blocked at once.
    """
    while True:
        leaves = []
        total = 2
        while True:
            kind = rng.choice(["wheel", "broken"])
            q = rng.randint(4 if kind == "wheel" else 3, 6)
            extra = q - 1 if kind == "wheel" else q - 2
            if total + extra > max_vertices:
                break
            leaves.append((kind, q))
            total += extra
            if rng.random() < 0.4:
                break
        if not leaves:
            continue
        if allow_broken_only or any(k == "wheel" for k, _ in leaves):
            return leaves


def random_fan_configuration(
    rng: random.Random, max_fan: int = 6, max_rest: int = 5, max_extra: int = 4
) -> tuple[PlaneGraph, int, list[int]]:
    """A plane graph whose outer cycle runs along a fan.

    Vertex 0 is an interior hub adjacent to the path ``1 .. t`` of outer
    vertices; the outer cycle closes through ``t+1 .. t+m``, and a few more
    vertices are hung inside the region between the hub and that arc.
    Returns the graph, the hub and the fan path.
    """
    t = rng.randint(3, max_fan)
    m = rng.randint(1, max_rest)
    fan = list(range(1, t + 1))
    rest = list(range(t + 1, t + m + 1))
    edges = {(0, v) for v in fan} | {(a, b) for a, b in zip(fan, fan[1:])}
    arc = [fan[-1], *rest, fan[0]]
    edges |= {(min(a, b), max(a, b)) for a, b in zip(arc, arc[1:])}
    n = t + m + 1
    region = [0, *rest]
    for _ in range(rng.randint(0, max_extra)):
        x = n
        n += 1
        for y in rng.sample(region, min(len(region), rng.randint(1, 2))):
            edges.add((y, x))
        region.append(x)
    for _ in range(rng.randint(0, 2)):
        a, b = rng.sample(region, 2)
        if a != b:
            edges.add((min(a, b), max(a, b)))
    outer = [*fan, *rest]
    try:
        g = embed_planar(n, edges, outer_cycle=outer)
    except NonPlanar:
        return random_fan_configuration(rng, max_fan, max_rest, max_extra)
    return g, 0, fan
