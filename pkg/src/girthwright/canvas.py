"""Canvases: a plane graph with lists, a precoloured boundary path or
cycle ``s`` and a set ``a`` of boundary vertices that only get two colours.

Vertices are referred to by index throughout; ``Canvas.g.labels`` links
them back to the caller's ids.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .girth import GirthProfile, girth_profile, list_threshold
from .plane_graph import PlaneGraph, cycle_edges

Colouring = dict[int, int]


class NotAPath(ValueError):
    pass


class NotASubgraph(ValueError):
    pass


class ListExhausted(ValueError):
    pass


@dataclass(frozen=True)
class Canvas:
    g: PlaneGraph
    lists: tuple[frozenset[int], ...]
    s: tuple[int, ...] = ()
    s_is_cycle: bool = False
    a: frozenset[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "lists", tuple(frozenset(x) for x in self.lists))
        object.__setattr__(self, "s", tuple(self.s))
        object.__setattr__(self, "a", frozenset(self.a))
        if len(self.lists) != self.g.n:
            raise ValueError("one list per vertex required")

    @cached_property
    def profile(self) -> GirthProfile:
        return girth_profile(self.g)

    @property
    def n(self) -> int:
        return self.g.n

    @cached_property
    def s_set(self) -> frozenset[int]:
        return frozenset(self.s)

    def size(self) -> tuple[int, int]:
        """(vertices, total list length) - the order reductions must decrease."""
        return self.g.n, sum(len(x) for x in self.lists)

    def with_lists(self, changes: Mapping[int, Iterable[int]]) -> "Canvas":
        lists = list(self.lists)
        for v, l in changes.items():
            lists[v] = frozenset(l)
        return replace(self, lists=tuple(lists))

    def by_label(self, colouring: Mapping[int, int]) -> dict[int, int]:
        return {self.g.labels[v]: c for v, c in colouring.items()}


def check_colouring(g: PlaneGraph, lists: Sequence[Iterable[int]], phi: Mapping[int, int]) -> list[str]:
    """Problems with ``phi`` as a (partial) proper list colouring, by index."""
    problems = []
    for v, c in phi.items():
        if c not in lists[v]:
            problems.append(f"vertex {v}: colour {c} not in its list")
    for u, v in g.edges:
        if u in phi and v in phi and phi[u] == phi[v]:
            problems.append(f"edge {u}-{v}: both coloured {phi[u]}")
    return problems


def is_local_girth_assignment(
    g: PlaneGraph, profile: GirthProfile, lists: Sequence[Iterable[int]]
) -> tuple[bool, int | None]:
    for v in range(g.n):
        if len(set(lists[v])) < list_threshold(profile[v]):
            return False, v
    return True, None


def _check_path(g: PlaneGraph, s: Sequence[int]) -> None:
    if len(set(s)) != len(s) or any(not 0 <= v < g.n for v in s):
        raise NotAPath(f"{tuple(s)} repeats or leaves the graph")
    for a, b in zip(s, s[1:]):
        if not g.has_edge(a, b):
            raise NotAPath(f"{a}-{b} is not an edge")


def is_acceptable_path(g: PlaneGraph, profile: GirthProfile, s: Sequence[int]) -> bool:
    _check_path(g, s)
    k = len(s)
    if k <= 3:
        return True
    if k > 4:
        return False
    g2, g3 = profile[s[1]], profile[s[2]]
    return (g2 >= 4 and g3 >= 4) or g2 >= 5 or g3 >= 5


def is_acceptable_cycle(g: PlaneGraph, profile: GirthProfile, s: Sequence[int]) -> bool:
    from .plane_graph import _check_cycle

    s = _check_cycle(g, s)
    k = len(s)
    # dropping edge s[i-1]s[i] leaves the path s[i], s[i+1], ..., s[i-1]
    return any(is_acceptable_path(g, profile, s[i:] + s[:i]) for i in range(k))


def s_edges(k: Canvas) -> frozenset[tuple[int, int]]:
    if k.s_is_cycle:
        return cycle_edges(k.s)
    return frozenset((min(a, b), max(a, b)) for a, b in zip(k.s, k.s[1:]))


def validate_canvas(k: Canvas, profile: GirthProfile | None = None) -> list[str]:
    g = k.g
    prof = profile if profile is not None else k.profile
    out: list[str] = []
    outer_v = g.outer_vertices
    s_set = set(k.s)
    if len(s_set) != len(k.s):
        out.append("S repeats a vertex")
    if any(not 0 <= v < g.n for v in k.s):
        out.append("S leaves the graph")
        return out
    for a, b in s_edges(k):
        if not g.has_edge(a, b):
            out.append(f"S edge {a}-{b} missing")
        elif (a, b) not in g.outer_edges:
            out.append(f"S edge {a}-{b} not on the outer face boundary")
    if k.s_is_cycle and len(k.s) < 3:
        out.append("S marked as a cycle but has fewer than three vertices")
    elif not out:
        try:
            ok = (is_acceptable_cycle if k.s_is_cycle else is_acceptable_path)(g, prof, k.s)
        except Exception as exc:  # NotAPath / NotACycle
            out.append(f"S is not a path or cycle: {exc}")
        else:
            if not ok:
                out.append("S is not acceptable")
    for v in k.s:
        if v not in outer_v:
            out.append(f"S vertex {v} not on the outer face boundary")
    a_free = k.a - s_set
    for v in k.a:
        if not 0 <= v < g.n:
            out.append(f"A vertex {v} unknown")
            return out
        if prof[v] < 5:
            out.append(f"A vertex {v} has girth {prof[v]} < 5")
    for v in a_free:
        if v not in outer_v:
            out.append(f"A vertex {v} not on the outer face boundary")
    for u, v in g.edges:
        if u in a_free and v in a_free:
            out.append(f"A not independent: {u}-{v}")
    for v in range(g.n):
        size = len(k.lists[v])
        if v in s_set:
            if size < 1:
                out.append(f"S vertex {v} has an empty list")
        elif v in a_free:
            if size != 2:
                out.append(f"A vertex {v} has list size {size}, expected 2")
        elif size < 3:
            out.append(f"vertex {v} has list size {size} < 3")
        elif v not in outer_v and size < list_threshold(prof[v]):
            out.append(f"interior vertex {v} of girth {prof[v]} has list size {size}")
    return out


def subcanvas(k: Canvas, h: PlaneGraph) -> Canvas:
    """Restrict ``k`` to ``h``, a subgraph sharing labels with ``k.g``."""
    idx = k.g.index_of
    try:
        old = [idx[lab] for lab in h.labels]
    except KeyError as exc:
        raise NotASubgraph(f"label {exc.args[0]} not in the canvas graph") from None
    for u, v in h.edges:
        if not k.g.has_edge(old[u], old[v]):
            raise NotASubgraph(f"edge {h.labels[u]}-{h.labels[v]} not in the canvas graph")
    new_of = {o: i for i, o in enumerate(old)}
    s_new: list[int] = []
    cyc = k.s_is_cycle
    if all(v in new_of for v in k.s):
        s_new = [new_of[v] for v in k.s]
        if cyc and not all(h.has_edge(s_new[i], s_new[(i + 1) % len(s_new)]) for i in range(len(s_new))):
            cyc = False
            # the cycle lost an edge: rotate so the missing edge is at the seam
            for i in range(len(s_new)):
                if not h.has_edge(s_new[i - 1], s_new[i]):
                    s_new = s_new[i:] + s_new[:i]
                    break
    else:
        s_new = _longest_surviving_run(k, new_of, h)
        cyc = False
    if not cyc:
        s_new = _trim_to_path(h, s_new)
    lists = tuple(k.lists[o] for o in old)
    a = frozenset(new_of[v] for v in k.a if v in new_of)
    return Canvas(h, lists, tuple(s_new), cyc, a)


def _longest_surviving_run(k: Canvas, new_of: dict[int, int], h: PlaneGraph) -> list[int]:
    seq = list(k.s)
    if k.s_is_cycle:
        # start just after a vanished vertex so runs are contiguous
        for i, v in enumerate(seq):
            if v not in new_of:
                seq = seq[i + 1:] + seq[: i + 1]
                break
    runs: list[list[int]] = [[]]
    for i, v in enumerate(seq):
        if v in new_of and (not runs[-1] or h.has_edge(new_of[seq[i - 1]], new_of[v])):
            runs[-1].append(new_of[v])
        elif v in new_of:
            runs.append([new_of[v]])
        else:
            runs.append([])
    runs = [r for r in runs if r]
    if not runs:
        return []
    if len(runs) > 1:
        # S ∩ H is not a path; keep the part that is (callers choose H so
        # this only happens when they intend it)
        raise NotASubgraph("S restricted to the subgraph is not a single path")
    return runs[0]


def _trim_to_path(h: PlaneGraph, s: list[int]) -> list[int]:
    for a, b in zip(s, s[1:]):
        if not h.has_edge(a, b):
            raise NotASubgraph("S restricted to the subgraph is not a path")
    return s


def trim_lists(k: Canvas) -> Canvas:
    """Cut every list down to the smallest size the canvas needs, keeping the
    smallest colours."""
    g, prof = k.g, k.profile
    outer_v = g.outer_vertices
    lists = []
    s_set = set(k.s)
    for v in range(g.n):
        l = sorted(k.lists[v])
        if v in s_set:
            want = 1
        elif v in k.a:
            want = 2
        elif v in outer_v:
            want = 3
        else:
            want = list_threshold(prof[v])
        lists.append(frozenset(l[:want]))
    return replace(k, lists=tuple(lists))


def delete_and_subtract(
    k: Canvas,
    coloured: Mapping[int, int],
    doomed: Iterable[int],
    *,
    new_s: Sequence[int] | None = None,
    keep: Iterable[int] = (),
) -> tuple[Canvas, dict[int, int]]:
    """Delete the coloured vertices ``doomed`` and remove their colours from
    the lists of surviving neighbours.

    Vertices in ``keep`` keep their lists untouched (used when the caller
    knows the clash cannot happen).  ``new_s`` (old indices) replaces the
    precoloured path; vertices of it that are in ``coloured`` get singleton
    lists.  The new ``a`` holds every surviving non-S vertex whose list
    dropped to two or fewer colours, plus old members of ``a``.

    Returns the canvas and the old-to-new index map.
    """
    doomed = set(doomed)
    for v in doomed:
        if v not in coloured:
            raise ValueError(f"doomed vertex {v} has no colour")
    keep = set(keep)
    g = k.g
    survivors = [v for v in range(g.n) if v not in doomed]
    h, new_of = g.subgraph(survivors)
    s_old = list(k.s) if new_s is None else list(new_s)
    s_old_set = set(s_old)
    lists = []
    for v in survivors:
        if v in s_old_set and v in coloured:
            lst = frozenset([coloured[v]])
        elif v in keep:
            lst = k.lists[v]
        else:
            lst = k.lists[v] - {coloured[w] for w in g.adj[v] if w in doomed}
        if not lst:
            raise ListExhausted(f"list of vertex {g.labels[v]} emptied")
        lists.append(lst)
    a = {new_of[v] for v in survivors if v not in s_old_set and len(lists[new_of[v]]) <= 2}
    a |= {new_of[v] for v in k.a if v in new_of and v not in s_old_set}
    cyc = k.s_is_cycle and new_s is None and not (doomed & set(k.s))
    s_new = tuple(new_of[v] for v in s_old if v in new_of)
    return Canvas(h, tuple(lists), s_new, cyc, frozenset(a)), new_of
