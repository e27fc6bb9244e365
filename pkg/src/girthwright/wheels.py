"""Broken wheels, wheels and the generalized wheels glued from them, plus
the three exceptional canvas shapes built on top of them.

A generalized wheel with principal path ``x y z`` is found as a chain of
pieces around ``y``: starting at ``x`` we step to the next outer vertex
either along a triangle with ``y`` (a fan step) or across a whole wheel
whose hub is adjacent to ``y``.  The chain has to end at ``z``.  Fan
steps in a row form one broken wheel; gluing consecutive pieces along
their shared principal edge gives the recursive structure.

Certificates are expressed in vertex *labels* so they stay meaningful
when the graph they came from was a piece of a larger one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .canvas import Canvas, NotAPath, _check_path
from .girth import GirthProfile
from .plane_graph import PlaneGraph

BROKEN, WHEEL, COMPOSITE = "BrokenWheel", "Wheel", "Composite"
TYPE_I, TYPE_II, TYPE_III = "TypeI", "TypeII", "TypeIII"

# decompositions compared when looking for the largest wheel; planar
# neighbourhoods keep the real count far below this
_MAX_DECOMPOSITIONS = 10_000


class HypothesisViolated(ValueError):
    pass


@dataclass(frozen=True)
class WheelCertificate:
    kind: str
    principal_path: tuple[int, int, int]
    outer_cycle: tuple[int, ...]
    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]
    children: tuple["WheelCertificate", ...] = ()
    hub: int | None = None
    glued_edge: tuple[int, int] | None = None

    @property
    def interior(self) -> frozenset[int]:
        return self.vertices - set(self.outer_cycle)

    def to_json(self) -> dict:
        out = {
            "kind": self.kind,
            "principal_path": list(self.principal_path),
            "outer_cycle": list(self.outer_cycle),
        }
        if self.hub is not None:
            out["hub"] = self.hub
        if self.children:
            out["children"] = [c.to_json() for c in self.children]
            out["glued_edge"] = list(self.glued_edge)
        return out


@dataclass(frozen=True)
class ExceptionCertificate:
    kind: str
    s: tuple[int, ...]
    u: int | None = None
    w: int | None = None
    wheel: WheelCertificate | None = None

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind, "S": list(self.s)}
        if self.u is not None:
            out["u"] = self.u
        if self.w is not None:
            out["w"] = self.w
        if self.wheel is not None:
            out["wheel"] = self.wheel.to_json()
        return out


def _e(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


# ----------------------------------------------------------------------
# building certificates from pieces (also used by the generator)


def broken_wheel_piece(a: int, y: int, fan: Sequence[int]) -> WheelCertificate:
    """Broken wheel ``a, fan[0], ..., fan[-1]`` around ``y``; principal path
    ``a y fan[-1]``."""
    chain = [a, *fan]
    edges = {_e(y, c) for c in chain} | {_e(p, q) for p, q in zip(chain, chain[1:])}
    outer = (a, y, chain[-1], *reversed(chain[1:-1]))
    return WheelCertificate(BROKEN, (a, y, chain[-1]), outer, frozenset(chain) | {y}, frozenset(edges))


def wheel_piece(a: int, y: int, b: int, rim: Sequence[int], hub: int) -> WheelCertificate:
    """Wheel with rim ``a y b rim...`` (rim runs from b back to a)."""
    cycle = [a, y, b, *rim]
    edges = {_e(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle))}
    edges |= {_e(hub, c) for c in cycle}
    return WheelCertificate(
        WHEEL, (a, y, b), tuple(cycle), frozenset(cycle) | {hub}, frozenset(edges), hub=hub
    )


def glue(first: WheelCertificate, second: WheelCertificate) -> WheelCertificate:
    """Glue along the principal edge ``y b`` of ``first`` = ``y a`` of
    ``second`` (the chain order used throughout this module)."""
    x, y, b = first.principal_path
    a, y2, z = second.principal_path
    if y != y2 or a != b:
        raise ValueError("pieces do not share a principal edge at the middle vertex")
    # outer cycle: x y z, then second's far side (z .. a), then first's (b .. x)
    tail2 = second.outer_cycle[3:]
    tail1 = first.outer_cycle[3:]
    outer = (x, y, z, *tail2, a, *tail1)
    return WheelCertificate(
        COMPOSITE,
        (x, y, z),
        outer,
        first.vertices | second.vertices,
        first.edges | second.edges,
        children=(first, second),
        glued_edge=(y, a),
    )


def _assemble(x: int, y: int, pieces: list[tuple]) -> WheelCertificate:
    certs: list[WheelCertificate] = []
    start = x
    fan: list[int] = []
    for piece in pieces:
        if piece[0] == "fan":
            fan.append(piece[1])
            continue
        if fan:
            certs.append(broken_wheel_piece(start, y, fan))
            start = fan[-1]
            fan = []
        _, b, rim, hub = piece
        certs.append(wheel_piece(start, y, b, rim, hub))
        start = b
    if fan:
        certs.append(broken_wheel_piece(start, y, fan))
    out = certs[0]
    for c in certs[1:]:
        out = glue(out, c)
    return out


# ----------------------------------------------------------------------
# recognition


def recognize_generalized_wheel(
    g: PlaneGraph, s: Sequence[int], boundary_constraint: Iterable[int]
) -> WheelCertificate | None:
    """A generalized wheel in ``g`` with principal path ``s`` (indices) whose
    outer cycle uses only vertices of ``boundary_constraint``."""
    if len(s) != 3:
        raise NotAPath("principal path needs exactly three vertices")
    _check_path(g, s)
    x, y, z = s
    allowed = frozenset(boundary_constraint)
    if not {x, y, z} <= allowed:
        return None
    adj = g.adj
    ny = adj[y]

    def rim_paths(a: int, h: int, blocked: set[int]):
        # simple paths a -> ... -> b inside N(h), ending at some b in N(y)
        stack = [(a, [a])]
        while stack:
            cur, path = stack.pop()
            for nxt in sorted(adj[cur] & adj[h], reverse=True):
                if nxt in path or nxt in blocked or nxt not in allowed:
                    continue
                if nxt in ny and len(path) >= 1:
                    yield nxt, path[1:]
                stack.append((nxt, path + [nxt]))

    def search(a: int, used: set[int], hubs: set[int], pieces: list[tuple]):
        if a == z:
            yield list(pieces)
            return
        for b in sorted(ny & adj[a]):
            if b in used or b in hubs or b not in allowed:
                continue
            used.add(b)
            pieces.append(("fan", b))
            yield from search(b, used, hubs, pieces)
            pieces.pop()
            used.discard(b)
        for h in sorted(ny & adj[a]):
            if h in used or h in hubs:
                continue
            hubs.add(h)
            for b, rim in rim_paths(a, h, used | hubs | {y}):
                if b in hubs:
                    continue
                inner = set(rim)
                if inner & used or z in inner:
                    continue
                used |= inner | {b}
                pieces.append(("wheel", b, tuple(reversed(rim)), h))
                yield from search(b, used, hubs, pieces)
                pieces.pop()
                used -= inner | {b}
            hubs.discard(h)

    best = None
    for pieces in itertools.islice(search(x, {x, y}, set(), []), _MAX_DECOMPOSITIONS):
        cert = _assemble(x, y, pieces)
        if best is None or len(cert.vertices) > len(best.vertices):
            best = cert
    if best is None:
        return None
    return _relabel(best, g.labels)


def _relabel(cert: WheelCertificate, lab: Sequence[int]) -> WheelCertificate:
    return WheelCertificate(
        cert.kind,
        tuple(lab[v] for v in cert.principal_path),
        tuple(lab[v] for v in cert.outer_cycle),
        frozenset(lab[v] for v in cert.vertices),
        frozenset(_e(lab[a], lab[b]) for a, b in cert.edges),
        tuple(_relabel(c, lab) for c in cert.children),
        None if cert.hub is None else lab[cert.hub],
        None if cert.glued_edge is None else (lab[cert.glued_edge[0]], lab[cert.glued_edge[1]]),
    )


# ----------------------------------------------------------------------
# exceptional canvases


def classify_exception(k: Canvas, profile: GirthProfile | None = None) -> ExceptionCertificate | None:
    """The first of the three exceptional shapes that ``k`` has, if any."""
    g = k.g
    s = k.s
    lab = g.labels
    lists = k.lists
    outer_v = g.outer_vertices
    a_free = k.a - k.s_set
    three = {v for v in outer_v if len(lists[v]) == 3}
    if len(s) == 4:
        v1, v4 = s[0], s[3]
        for u in sorted(a_free):
            if g.has_edge(u, v1) and g.has_edge(u, v4) and lists[u] == lists[v1] | lists[v4]:
                return ExceptionCertificate(TYPE_I, tuple(lab[v] for v in s), u=lab[u])
        for o in (tuple(s), tuple(reversed(s))):
            v1, v2, v3, v4 = o
            for u in sorted(a_free):
                if not g.has_edge(u, v4):
                    continue
                for w in sorted(g.adj[u]):
                    if w in k.s_set or w not in three:
                        continue
                    if not g.has_edge(v2, w):
                        continue
                    cert = recognize_generalized_wheel(g, (v1, v2, w), three | {v1, v2})
                    if cert is not None:
                        return ExceptionCertificate(
                            TYPE_II, tuple(lab[v] for v in o), u=lab[u], w=lab[w], wheel=cert
                        )
    if len(s) == 3 and not k.s_is_cycle:
        cert = recognize_generalized_wheel(g, s, three | set(s))
        if cert is not None:
            return ExceptionCertificate(TYPE_III, tuple(lab[v] for v in s), wheel=cert)
    return None


def blocked_principal_colourings(
    w: WheelCertificate, lists: Mapping[int, Iterable[int]]
) -> set[tuple[int, int, int]]:
    """Colourings of the principal path (from ``lists``, keyed by label) that
    do not extend to the wheel ``w``."""
    from .oracle import colour_edges

    outer = set(w.outer_cycle)
    p = w.principal_path
    for v in w.vertices:
        size = len(set(lists[v]))
        if v in w.interior and size < 5:
            raise HypothesisViolated(f"interior vertex {v} has only {size} colours")
        if v in outer and v not in p and size < 3:
            raise HypothesisViolated(f"outer vertex {v} has only {size} colours")
    verts = sorted(w.vertices)
    idx = {v: i for i, v in enumerate(verts)}
    edges = [(idx[a], idx[b]) for a, b in w.edges]
    lsts = [frozenset(lists[v]) for v in verts]
    blocked = set()
    for cols in itertools.product(*(sorted(lists[v]) for v in p)):
        fixed = dict(zip((idx[v] for v in p), cols))
        if any(fixed[idx[a]] == fixed[idx[b]] for a, b in w.edges if a in p and b in p):
            continue
        if colour_edges(len(verts), edges, lsts, fixed) is None:
            blocked.add(tuple(cols))
    return blocked
