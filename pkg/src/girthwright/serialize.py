"""JSON and DOT formats for plane graphs and canvases.

A file holds one instance::

    {"n": 4, "rotations": [[1, 3], ...], "outer_edge": [0, 1],
     "lists": {"0": [1], ...}, "S": [0, 1], "S_is_cycle": false,
     "A": [], "phi": {"0": 1}}

Only ``n`` and ``rotations`` are required.  ``outer_edge`` is a dart
``[u, v]`` whose left face is the outer face; a disconnected graph gives
one dart per component as ``[[u, v], ...]`` and an edgeless graph gives
``null``.  Unknown keys are an error.  ``dumps`` writes keys in a fixed
order with sorted lists so that ``dumps(loads(text)) == text`` for any
text ``dumps`` produced.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping

from .canvas import Canvas
from .girth import INF, girth_profile
from .plane_graph import EmbeddingInvalid, PlaneGraph

KEYS = ("n", "rotations", "outer_edge", "lists", "S", "S_is_cycle", "A", "phi")


class FormatError(ValueError):
    pass


@dataclass(frozen=True)
class Instance:
    graph: PlaneGraph
    lists: tuple[frozenset[int], ...] | None = None
    s: tuple[int, ...] = ()
    s_is_cycle: bool = False
    a: frozenset[int] = frozenset()
    phi: tuple[tuple[int, int], ...] | None = None

    def canvas(self) -> Canvas:
        if self.lists is None:
            raise FormatError("the instance has no lists")
        return Canvas(self.graph, self.lists, self.s, self.s_is_cycle, self.a)

    def phi_map(self) -> dict[int, int] | None:
        return None if self.phi is None else dict(self.phi)

    @classmethod
    def from_canvas(cls, k: Canvas, phi: Mapping[int, int] | None = None) -> "Instance":
        return cls(
            k.g,
            k.lists,
            k.s,
            k.s_is_cycle,
            k.a,
            None if phi is None else tuple(sorted(phi.items())),
        )


def _int(x: Any, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise FormatError(f"{what} must be an integer, got {x!r}")
    return x


def _vertex(x: Any, n: int, what: str) -> int:
    v = _int(x, what)
    if not 0 <= v < n:
        raise FormatError(f"{what} {v} is not a vertex")
    return v


def _vertex_key(key: str, n: int, what: str) -> int:
    try:
        v = int(key)
    except ValueError:
        raise FormatError(f"{what} key {key!r} is not a vertex id") from None
    if str(v) != key or not 0 <= v < n:
        raise FormatError(f"{what} key {key!r} is not a vertex id")
    return v


def _colour(x: Any, what: str) -> int:
    c = _int(x, what)
    if c < 0:
        raise FormatError(f"{what}: colours are non-negative, got {c}")
    return c


def from_dict(d: Mapping[str, Any]) -> Instance:
    if not isinstance(d, Mapping):
        raise FormatError("top level must be an object")
    unknown = sorted(set(d) - set(KEYS))
    if unknown:
        raise FormatError(f"unknown keys: {', '.join(unknown)}")
    for key in ("n", "rotations"):
        if key not in d:
            raise FormatError(f"missing key {key!r}")
    n = _int(d["n"], "n")
    if n < 0:
        raise FormatError("n must be non-negative")
    rot = d["rotations"]
    if not isinstance(rot, list) or len(rot) != n:
        raise FormatError("rotations must list one rotation per vertex")
    rotations = []
    for v, r in enumerate(rot):
        if not isinstance(r, list):
            raise FormatError(f"rotation of vertex {v} must be a list")
        rotations.append(tuple(_vertex(w, n, f"neighbour of {v}") for w in r))
    outer = _outer_darts(d.get("outer_edge"), n)
    try:
        g = PlaneGraph(tuple(rotations), outer)
    except EmbeddingInvalid as exc:
        raise FormatError(f"bad embedding: {exc}") from None

    lists = None
    if d.get("lists") is not None:
        raw = d["lists"]
        if not isinstance(raw, Mapping):
            raise FormatError("lists must be an object keyed by vertex id")
        got: dict[int, frozenset[int]] = {}
        for key, cols in raw.items():
            v = _vertex_key(key, n, "lists")
            if not isinstance(cols, list):
                raise FormatError(f"list of vertex {v} must be an array")
            got[v] = frozenset(_colour(c, f"list of vertex {v}") for c in cols)
            if len(got[v]) != len(cols):
                raise FormatError(f"list of vertex {v} repeats a colour")
        missing = [v for v in range(n) if v not in got]
        if missing:
            raise FormatError(f"vertices without lists: {missing}")
        lists = tuple(got[v] for v in range(n))

    s = tuple(_vertex(v, n, "S vertex") for v in _array(d.get("S", []), "S"))
    s_is_cycle = d.get("S_is_cycle", False)
    if not isinstance(s_is_cycle, bool):
        raise FormatError("S_is_cycle must be true or false")
    a_list = [_vertex(v, n, "A vertex") for v in _array(d.get("A", []), "A")]
    if len(set(a_list)) != len(a_list):
        raise FormatError("A repeats a vertex")
    phi = None
    if d.get("phi") is not None:
        raw = d["phi"]
        if not isinstance(raw, Mapping):
            raise FormatError("phi must be an object keyed by vertex id")
        phi = tuple(
            sorted((_vertex_key(key, n, "phi"), _colour(c, "phi")) for key, c in raw.items())
        )
    return Instance(g, lists, s, s_is_cycle, frozenset(a_list), phi)


def _array(x: Any, what: str) -> list:
    if not isinstance(x, list):
        raise FormatError(f"{what} must be an array")
    return x


def _outer_darts(x: Any, n: int) -> tuple[tuple[int, int], ...]:
    if x is None:
        return ()
    if not isinstance(x, list):
        raise FormatError("outer_edge must be [u, v], a list of such pairs, or null")
    if len(x) == 2 and all(isinstance(e, int) for e in x):
        x = [x]
    out = []
    for dart in x:
        if not isinstance(dart, list) or len(dart) != 2:
            raise FormatError("outer_edge must be [u, v], a list of such pairs, or null")
        out.append((_vertex(dart[0], n, "outer_edge"), _vertex(dart[1], n, "outer_edge")))
    return tuple(out)


def to_dict(inst: Instance) -> dict[str, Any]:
    g = inst.graph
    if not g.outer:
        outer: Any = None
    elif len(g.outer) == 1:
        outer = list(g.outer[0])
    else:
        outer = [list(d) for d in g.outer]
    out: dict[str, Any] = {
        "n": g.n,
        "rotations": [list(r) for r in g.rotations],
        "outer_edge": outer,
    }
    if inst.lists is not None:
        out["lists"] = {str(v): sorted(inst.lists[v]) for v in range(g.n)}
    out["S"] = list(inst.s)
    out["S_is_cycle"] = inst.s_is_cycle
    out["A"] = sorted(inst.a)
    if inst.phi is not None:
        out["phi"] = {str(v): c for v, c in inst.phi}
    return out


def loads(text: str) -> Instance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not JSON: {exc}") from None
    return from_dict(data)


def dumps(inst: Instance) -> str:
    return json.dumps(to_dict(inst), separators=(",", ":")) + "\n"


def load(path: str) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def store(inst: Instance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(inst))


def to_dot(inst: Instance, colouring: Mapping[int, int] | None = None) -> str:
    """Graphviz source: each vertex shows its id, girth and list; S is
    filled and A is drawn as diamonds."""
    g = inst.graph
    prof = girth_profile(g)
    s_set = set(inst.s)
    lines = ["graph G {", "  node [shape=circle];"]
    for v in range(g.n):
        girth = "inf" if prof[v] == INF else str(prof[v])
        label = f"v{v} g={girth}"
        if inst.lists is not None:
            label += " L={" + ",".join(map(str, sorted(inst.lists[v]))) + "}"
        if colouring is not None and v in colouring:
            label += f" c={colouring[v]}"
        attrs = [f'label="{label}"']
        if v in s_set:
            attrs.append("style=filled")
        if v in inst.a:
            attrs.append("shape=diamond")
        lines.append(f"  {v} [{', '.join(attrs)}];")
    for u, v in g.edges:
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
