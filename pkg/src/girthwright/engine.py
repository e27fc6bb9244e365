"""Constructive list colouring of canvases by reduction.

``Engine._solve`` takes a valid, unexceptional canvas whose precoloured
path has singleton lists and returns a colouring keyed by vertex label.
It tries an ordered list of reductions; each one builds smaller canvases,
checks them (validity and non-exceptionality), recurses, and glues the
answers back together.  A reduction whose sub-canvas fails the check
*declines* and the next one is tried.  If every reduction declines the
engine falls back to exhaustive search, which is counted and forbidden in
strict mode.

Working in labels keeps composition trivial: every subgraph carries the
labels of the graph it came from, so sub-colourings merge by dict union.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Mapping, Sequence

from . import oracle
from .canvas import (
    Canvas,
    ListExhausted,
    NotASubgraph,
    check_colouring,
    delete_and_subtract,
    is_local_girth_assignment,
    s_edges,
    subcanvas,
    trim_lists,
    validate_canvas,
)
from .girth import girth_profile
from .plane_graph import (
    NotSeparating,
    PlaneGraph,
    PreconditionViolated,
    chords_of,
    cut_vertices,
    identify_fan_ends,
    interior,
    outer_boundary,
    path_sides,
)
from .wheels import ExceptionCertificate, classify_exception

Labelled = dict[int, int]


class AssignmentInvalid(ValueError):
    pass


class CanvasInvalid(ValueError):
    pass


class PhiImproper(ValueError):
    pass


class EngineIncomplete(RuntimeError):
    pass


class EngineInvariantError(AssertionError):
    """A reduction produced something it must never produce."""


class NoReductionApplies(RuntimeError):
    pass


@dataclass
class EngineTrace:
    """What the engine did: one entry per reduction that fired."""

    steps: list[tuple[str, int, int, int]] = field(default_factory=list)
    declines: list[tuple[str, str]] = field(default_factory=list)
    fallbacks: int = 0
    cited: int = 0
    exceptional_searches: int = 0

    def record(self, tag: str, k: Canvas, depth: int) -> None:
        n, total = k.size()
        self.steps.append((tag, n, total, depth))

    def count(self, tag: str) -> int:
        return sum(1 for t, *_ in self.steps if t == tag)

    def tags(self) -> list[str]:
        return [t for t, *_ in self.steps]


@dataclass(frozen=True)
class DeletablePath:
    """Boundary path ``v_{k'+1} .. v_j`` used by the main reduction.

    ``cycle`` is the outer cycle starting with the precoloured path, so the
    path is ``cycle[k_prime : j]`` (0-based) and ``available`` is the one
    colour the vertex before it can still take.
    """

    path: tuple[int, ...]
    k_prime: int
    available: int
    j: int
    q: int
    cycle: tuple[int, ...]


@dataclass
class Reduction:
    tag: str
    children: list[Canvas]
    colouring: dict[int, int]


# ----------------------------------------------------------------------
# small helpers


def _single(lst: frozenset[int]) -> int:
    (c,) = lst
    return c


def _oriented_cycle(k: Canvas) -> tuple[int, ...] | None:
    """The outer cycle, rotated and oriented so it starts with ``k.s``."""
    g = k.g
    if not g.outer or not g.is_connected():
        return None
    walk = list(outer_boundary(g).vertices)
    if len(walk) < 3 or len(set(walk)) != len(walk) or len(walk) != len(g.outer_vertices):
        return None
    s = k.s
    if s:
        i = walk.index(s[0])
        walk = walk[i:] + walk[:i]
        if len(s) >= 2 and walk[1] != s[1]:
            walk = [walk[0]] + walk[1:][::-1]
        if tuple(walk[: len(s)]) != tuple(s):
            return None
    return tuple(walk)


def _short_cycles(g: PlaneGraph, max_len: int) -> list[tuple[int, ...]]:
    out = []
    adj = g.adj
    for s in range(g.n):
        stack = [(s, (s,))]
        while stack:
            v, path = stack.pop()
            for w in adj[v]:
                if w == s and len(path) >= 3 and path[1] < path[-1]:
                    out.append(path)
                elif w > s and w not in path and len(path) < max_len:
                    stack.append((w, path + (w,)))
    out.sort(key=lambda c: (len(c), c))
    return out


def _reversed(k: Canvas) -> Canvas:
    return replace(k, s=tuple(reversed(k.s)))


def _proper_options(lists: Sequence[Iterable[int]], adjacent: Callable[[int, int], bool]) -> Iterable[tuple[int, ...]]:
    """Proper colourings of a short sequence of vertices (positions)."""
    m = len(lists)
    for cols in itertools.product(*(sorted(l) for l in lists)):
        if all(not (cols[a] == cols[b] and adjacent(a, b)) for a in range(m) for b in range(a + 1, m)):
            yield cols


# ----------------------------------------------------------------------


class Engine:
    def __init__(self, strict: bool = False, trace: EngineTrace | None = None):
        self.strict = strict
        self.trace = trace if trace is not None else EngineTrace()
        self.depth = 0
        self._children: list[Canvas] | None = None
        self.cascade: list[tuple[str, Callable[[Canvas], Labelled | None]]] = [
            ("components", self._components),
            ("cut-vertex", self._cut_vertex),
            ("chord", self._chord),
            ("separating-cycle", self._separating_cycle),
            ("trim", self._trim),
            ("normalize-s", self._normalize_s),
            ("extend-s", self._extend_s),
            ("separating-path", self._separating_path),
            ("wheel-path", self._wheel_path),
            ("fan-identify", self._fan_identify),
            ("degree3-v4", self._deg3_v4),
            ("extra-vertices", self._extra_vertices),
            ("colours", self._colours),
            ("deletable-path", self._deletable_path),
            ("bare-cycle", self._bare_cycle),
            ("low-degree", self._low_degree),
            ("boundary-run", self._boundary_run),
        ]

    # ---------------------------------------------------------------- api

    def colour(self, g: PlaneGraph, lists: Sequence[Iterable[int]]) -> dict[int, int]:
        lists = tuple(frozenset(l) for l in lists)
        if len(lists) != g.n:
            raise AssignmentInvalid("one list per vertex required")
        ok, bad = is_local_girth_assignment(g, girth_profile(g), lists)
        if not ok:
            raise AssignmentInvalid(f"vertex {bad} has a list below its girth threshold")
        k = Canvas(g, lists)
        col = self._top(k)
        return {v: col[g.labels[v]] for v in range(g.n)}

    def extend(self, k: Canvas, phi: Mapping[int, int]) -> dict[int, int] | ExceptionCertificate:
        problems = validate_canvas(k)
        if problems:
            raise CanvasInvalid("; ".join(problems))
        restricted = self._restrict(k, phi)
        cert = classify_exception(restricted)
        if cert is not None:
            # exceptional canvases may still extend; only a search can tell
            self.trace.exceptional_searches += 1
            col = oracle.find_colouring(restricted.g, restricted.lists)
            if col is None:
                return cert
            return dict(col)
        col = self._top(restricted)
        return {v: col[k.g.labels[v]] for v in range(k.g.n)}

    def reduce_once(self, k: Canvas, phi: Mapping[int, int] | None = None) -> Reduction:
        """Apply the first reduction that fires and report the canvases it
        recursed into (solved by the full engine)."""
        if phi is not None:
            k = self._restrict(k, phi)
        if classify_exception(k) is not None:
            raise CanvasInvalid("canvas is exceptional")
        if len(k.s) == k.g.n:
            raise NoReductionApplies("every vertex is precoloured")
        for tag, step in self.cascade:
            self._children = []
            before = len(self.trace.steps)
            self.depth = 0
            col = step(k)
            children, self._children = self._children, None
            if col is not None:
                fired = self.trace.steps[before][0] if len(self.trace.steps) > before else tag
                return Reduction(fired, children, {v: col[k.g.labels[v]] for v in range(k.g.n)})
        raise NoReductionApplies("no reduction applies")

    def fallback_backtrack(self, k: Canvas) -> Labelled | None:
        self.trace.fallbacks += 1
        self.trace.record("fallback", k, self.depth)
        if self.strict:
            raise EngineIncomplete(f"no reduction applies to a canvas on {k.g.n} vertices")
        col = oracle.find_colouring(k.g, k.lists)
        return None if col is None else k.by_label(col)

    # ---------------------------------------------------------------- core

    def _restrict(self, k: Canvas, phi: Mapping[int, int]) -> Canvas:
        phi = dict(phi)
        if set(phi) != set(k.s):
            raise PhiImproper("phi must colour exactly the precoloured vertices")
        for v, c in phi.items():
            if c not in k.lists[v]:
                raise PhiImproper(f"colour {c} not in the list of vertex {v}")
        for a, b in k.g.edges:
            if a in phi and b in phi and phi[a] == phi[b]:
                raise PhiImproper(f"edge {a}-{b} gets colour {phi[a]} twice")
        return k.with_lists({v: {c} for v, c in phi.items()})

    def _top(self, k: Canvas) -> Labelled:
        self.depth = 0
        col = self._solve(k)
        if col is None:
            raise EngineIncomplete("the canvas could not be coloured")
        return col

    def _solve(self, k: Canvas) -> Labelled | None:
        g = k.g
        if self._children is not None and self.depth == 0:
            self._children.append(k)
        if len(k.s) == g.n:
            self.trace.record("base", k, self.depth)
            return {g.labels[v]: _single(k.lists[v]) for v in range(g.n)}
        self.depth += 1
        try:
            for tag, step in self.cascade:
                col = step(k)
                if col is not None:
                    self._verify(k, col, tag)
                    return col
            return self.fallback_backtrack(k)
        finally:
            self.depth -= 1

    def _verify(self, k: Canvas, col: Labelled, tag: str) -> None:
        lab = k.g.labels
        missing = [l for l in lab if l not in col]
        if missing:
            raise EngineInvariantError(f"{tag}: vertices {missing} left uncoloured")
        phi = {v: col[lab[v]] for v in range(k.g.n)}
        problems = check_colouring(k.g, k.lists, phi)
        if problems:
            raise EngineInvariantError(f"{tag}: {problems[0]}")

    def _admit(self, parent: Canvas, sub: Canvas, tag: str) -> bool:
        """Is ``sub`` a valid, unexceptional, strictly smaller canvas?"""
        if any(len(sub.lists[v]) != 1 for v in sub.s):
            self.trace.declines.append((tag, "precoloured vertex without a single colour"))
            return False
        problems = validate_canvas(sub)
        if problems:
            self.trace.declines.append((tag, problems[0]))
            return False
        for a, b in s_edges(sub) | {e for e in sub.g.edges if e[0] in sub.s_set and e[1] in sub.s_set}:
            if sub.lists[a] == sub.lists[b]:
                self.trace.declines.append((tag, "precolouring is improper"))
                return False
        cert = classify_exception(sub)
        if cert is not None:
            self.trace.declines.append((tag, f"sub-canvas is {cert.kind}"))
            return False
        if not sub.size() < parent.size():
            raise EngineInvariantError(f"{tag}: sub-canvas is not smaller")
        return True

    def _sub(self, parent: Canvas, sub: Canvas, tag: str) -> Labelled | None:
        if not self._admit(parent, sub, tag):
            return None
        return self._solve(sub)

    def _fire(self, tag: str, k: Canvas) -> None:
        self.trace.record(tag, k, self.depth)

    # canvas construction in label space

    def _canvas_on(
        self,
        k: Canvas,
        h: PlaneGraph,
        s_labels: Sequence[int],
        overrides: Mapping[int, Iterable[int]] | None = None,
        a_labels: Iterable[int] | None = None,
        s_is_cycle: bool = False,
    ) -> Canvas:
        kidx = k.g.index_of
        hidx = h.index_of
        overrides = overrides or {}
        lists = tuple(
            frozenset(overrides[l]) if l in overrides else k.lists[kidx[l]] for l in h.labels
        )
        s = tuple(hidx[l] for l in s_labels)
        if a_labels is None:
            a_labels = (k.g.labels[v] for v in k.a)
        s_set = set(s_labels)
        a = frozenset(hidx[l] for l in a_labels if l in hidx and l not in s_set)
        return Canvas(h, lists, s, s_is_cycle, a)

    def _glue_side(
        self, k: Canvas, side: tuple[frozenset[int], frozenset], path: Sequence[int], col: Labelled
    ) -> Canvas:
        """Canvas on one side of a separating path, with the path
        precoloured by ``col``."""
        lab = k.g.labels
        h = k.g.subgraph(*side)[0]
        s_labels = [lab[v] for v in path]
        return self._canvas_on(k, h, s_labels, {l: {col[l]} for l in s_labels})

    def _split_and_glue(self, k: Canvas, path: Sequence[int], tag: str) -> Labelled | None:
        """Colour the side holding S, then the other side with ``path``
        precoloured."""
        got = self._split(k, path)
        if got is None:
            return None
        k1, side2 = got
        self._fire(tag, k)
        col1 = self._sub(k, k1, tag)
        if col1 is None:
            return None
        k2 = self._glue_side(k, side2, path, col1)
        col2 = self._sub(k, k2, tag)
        if col2 is None:
            return None
        return {**col1, **col2}

    def _split(self, k: Canvas, path: Sequence[int]):
        """Sides of ``path``: (canvas on the side with S, other side)."""
        try:
            sides = path_sides(k.g, path)
        except NotSeparating:
            return None
        pv = set(path)
        rest = [v for v in k.s if v not in pv]
        if k.s_is_cycle and not set(k.s) <= sides[0][0] and not set(k.s) <= sides[1][0]:
            return None
        if rest:
            where = [i for i in (0, 1) if all(v in sides[i][0] for v in rest)]
            if not where:
                return None
            first = where[0]
        else:
            first = 0
        if not s_edges(k) <= sides[first][1]:
            return None
        h1 = k.g.subgraph(*sides[first])[0]
        try:
            k1 = subcanvas(k, h1)
        except NotASubgraph:
            return None
        return k1, sides[1 - first]

    # ------------------------------------------------------- reductions

    def _components(self, k: Canvas) -> Labelled | None:
        g = k.g
        if g.is_connected():
            return None
        self._fire("components", k)
        out: Labelled = {}
        for comp in g.components:
            h = g.induced(comp)
            try:
                sub = subcanvas(k, h)
            except NotASubgraph:
                return None
            col = self._sub(k, sub, "components")
            if col is None:
                return None
            out.update(col)
        return out

    def _cut_vertex(self, k: Canvas) -> Labelled | None:
        g = k.g
        if g.n < 3:
            return None
        cuts = cut_vertices(g)
        if not cuts:
            return None
        u = min(cuts)
        rest = g.without([u])
        idx = g.index_of
        comps = [frozenset(idx[rest.labels[i]] for i in c) for c in rest.components]
        s_set = k.s_set
        j = min(range(len(comps)), key=lambda i: (len(comps[i] & s_set), min(comps[i])))
        g2_vertices = comps[j] | {u}
        g1_vertices = frozenset(range(g.n)) - comps[j]
        lab = g.labels
        try:
            k1 = subcanvas(k, g.induced(g1_vertices))
        except NotASubgraph:
            return None
        self._fire("cut-vertex", k)
        col1 = self._sub(k, k1, "cut-vertex")
        if col1 is None:
            return None
        h2 = g.induced(g2_vertices)
        if u in s_set:
            s2 = [lab[v] for v in k.s if v in g2_vertices]
        else:
            s2 = [lab[u]]
        over = {l: k.lists[idx[l]] for l in s2}
        over[lab[u]] = {col1[lab[u]]}
        try:
            k2 = self._canvas_on(k, h2, s2, over)
        except Exception:
            return None
        col2 = self._sub(k, k2, "cut-vertex")
        if col2 is None:
            return None
        return {**col1, **col2}

    def _chord(self, k: Canvas) -> Labelled | None:
        c = _oriented_cycle(k)
        if c is None:
            return None
        g = k.g
        for u, w in chords_of(g, c):
            try:
                sides = path_sides(g, (u, w))
            except NotSeparating:
                continue
            s_set = k.s_set
            s_e = s_edges(k)
            for i in (0, 1):
                if s_set <= sides[i][0] and s_e <= sides[i][1]:
                    got = self._chord_case_a(k, sides[i], sides[1 - i], (u, w))
                    if got is not None:
                        return got
                    break
            else:
                got = self._chord_case_b(k, sides, (u, w))
                if got is not None:
                    return got
        return None

    def _chord_case_a(self, k, side1, side2, chord) -> Labelled | None:
        g = k.g
        h1 = g.subgraph(*side1)[0]
        try:
            k1 = subcanvas(k, h1)
        except NotASubgraph:
            return None
        self._fire("chord", k)
        col1 = self._sub(k, k1, "chord")
        if col1 is None:
            return None
        k2 = self._glue_side(k, side2, chord, col1)
        col2 = self._sub(k, k2, "chord")
        if col2 is None:
            return None
        return {**col1, **col2}

    def _chord_case_b(self, k, sides, chord) -> Labelled | None:
        if k.s_is_cycle:
            return None
        g, s = k.g, k.s
        lab = g.labels
        inner = [v for v in chord if v in s[1:-1]]
        if len(inner) != 1:
            return None
        x = inner[0]
        y = chord[0] if chord[1] == x else chord[1]
        if y in k.s_set:
            return None
        i = s.index(x)
        sa, sb = s[: i + 1], s[i:]
        side_of = lambda part: [j for j in (0, 1) if all(v in sides[j][0] for v in part)]
        ia, ib = side_of(sa), side_of(sb)
        if len(ia) != 1 or len(ib) != 1 or ia == ib:
            return None
        parts = sorted([(len(sa), 0, sa, ia[0]), (len(sb), 1, sb, ib[0])])
        (_, _, s1, i1), (_, _, s2, i2) = parts
        h1 = g.subgraph(*sides[i1])[0]
        h2 = g.subgraph(*sides[i2])[0]
        try:
            k1 = subcanvas(k, h1)
            k2 = subcanvas(k, h2)
        except NotASubgraph:
            return None
        ly, lx = lab[y], lab[x]
        yi = g.index_of[ly]
        self._fire("chord", k)
        if len(k.lists[yi]) >= 4:
            phi1 = self._sub(k, k1, "chord")
            if phi1 is None:
                return None
            k1b = k1.with_lists({k1.g.index_of[ly]: k.lists[yi] - {phi1[ly]}})
            phi2 = self._sub(k, k1b, "chord")
            if phi2 is None:
                return None
            k2b = k2.with_lists({k2.g.index_of[ly]: {phi1[ly], phi2[ly], phi1[lx]}})
            phi = self._sub(k, k2b, "chord")
            if phi is None:
                return None
            return {**(phi1 if phi[ly] == phi1[ly] else phi2), **phi}
        vphi1 = self._sub(k, k1, "chord")
        vphi2 = self._sub(k, k2, "chord") if vphi1 is not None else None
        if vphi1 is None or vphi2 is None:
            return None
        for kk, other in ((k1, vphi2), (k2, vphi1)):
            yk = kk.g.index_of[ly]
            s_new = (yk,) + kk.s if kk.s[0] == kk.g.index_of[lx] else kk.s + (yk,)
            retry = replace(kk.with_lists({yk: {other[ly]}}), s=s_new, a=kk.a - {yk})
            if not self._admit(k, retry, "chord"):
                continue
            psi = self._solve(retry)
            if psi is not None:
                return {**other, **psi}
        return None

    def _separating_cycle(self, k: Canvas) -> Labelled | None:
        g = k.g
        if g.n < 4 or not g.is_connected():
            return None
        prof = k.profile
        for t in _short_cycles(g, 6):
            m = len(t)
            if m == 5 and not any(prof[v] >= 4 for v in t):
                continue
            if m == 6 and not any(prof[v] >= 5 for v in t):
                continue
            try:
                inside, closed = interior(g, t)
            except Exception:
                continue
            if not inside:
                continue
            got = self._reduce_cycle(k, t, inside, closed)
            if got is not None:
                return got
        return None

    def _reduce_cycle(self, k, t, inside, closed) -> Labelled | None:
        g, prof = k.g, k.profile
        lab = g.labels
        m = len(t)
        if m <= 4:
            keeps = [(t[i], t[(i + 1) % m]) for i in range(m)]
        else:
            need = 4 if m == 5 else 5
            keeps = []
            for i in range(m):
                p = (t[i], t[(i + 1) % m], t[(i + 2) % m])
                if any(prof[v] >= need for v in p):
                    keeps.append(p)
        ext_vertices = [v for v in range(g.n) if v not in inside]
        try:
            k_ext = subcanvas(k, g.induced(ext_vertices))
        except NotASubgraph:
            return None
        tag = "separating-cycle"
        self._fire(tag, k)
        col_ext = self._sub(k, k_ext, tag)
        if col_ext is None:
            return None
        cidx = closed.index_of
        lists = tuple(k.lists[g.index_of[l]] for l in closed.labels)
        base = Canvas(closed, lists)
        coloured = {cidx[lab[v]]: col_ext[lab[v]] for v in t}
        for keep in keeps:
            doomed = [cidx[lab[v]] for v in t if v not in keep]
            try:
                inner, _ = delete_and_subtract(base, coloured, doomed, new_s=[cidx[lab[v]] for v in keep])
            except ListExhausted:
                continue
            if not self._admit(k, inner, tag):
                continue
            col_in = self._solve(inner)
            if col_in is not None:
                return {**col_ext, **col_in}
        return None

    def _trim(self, k: Canvas) -> Labelled | None:
        trimmed = trim_lists(k)
        if trimmed.lists == k.lists:
            return None
        if self._admit(k, trimmed, "trim"):
            self._fire("trim", k)
            return self._solve(trimmed)
        # trimming everything at once made it exceptional: go one vertex at a time
        g = k.g
        for v in range(g.n):
            if trimmed.lists[v] == k.lists[v]:
                continue
            one = k.with_lists({v: trimmed.lists[v]})
            if self._admit(k, one, "trim"):
                self._fire("trim", k)
                return self._solve(one)
        return None

    def _normalize_s(self, k: Canvas) -> Labelled | None:
        if len(k.s) >= 2 or k.g.n == 0:
            return None
        g = k.g
        walk = list(outer_boundary(g).vertices)
        if not k.s:
            v = walk[0]
            lst = k.lists[v]
            new = replace(k.with_lists({v: {min(lst)}}), s=(v,), a=k.a - {v})
        else:
            v1 = k.s[0]
            if not g.adj[v1]:
                return None
            i = walk.index(v1)
            nxt = walk[(i + 1) % len(walk)]
            if not g.has_edge(v1, nxt):
                nxt = min(g.adj[v1] & g.outer_vertices)
            free = sorted(k.lists[nxt] - k.lists[v1])
            if not free:
                return None
            new = replace(k.with_lists({nxt: {free[0]}}), s=(v1, nxt), a=k.a - {nxt})
        if not self._admit(k, new, "normalize-s"):
            return None
        self._fire("normalize-s", k)
        return self._solve(new)

    def _bare_cycle(self, k: Canvas) -> Labelled | None:
        g = k.g
        if not k.s or len(g.edges) != g.n:
            return None
        c = _oriented_cycle(k)
        if c is None or len(c) != g.n:
            return None
        lab = g.labels
        ks = len(k.s)
        rest = list(c[ks:])
        if not rest:
            return None
        first_bad = _single(k.lists[c[ks - 1]])
        last_bad = _single(k.lists[c[0]])
        # dynamic programme over the path c[ks:], each vertex avoiding its predecessor
        options = []
        for i, v in enumerate(rest):
            opts = set(k.lists[v])
            if i == 0:
                opts.discard(first_bad)
            if i == len(rest) - 1:
                opts.discard(last_bad)
            options.append(sorted(opts))
        reach = [set(options[0])]
        for i in range(1, len(rest)):
            reach.append({x for x in options[i] if any(y != x for y in reach[-1])})
        if not reach[-1]:
            return None
        self._fire("bare-cycle", k)
        out = {lab[v]: _single(k.lists[v]) for v in k.s}
        cur = min(reach[-1])
        out[lab[rest[-1]]] = cur
        for i in range(len(rest) - 2, -1, -1):
            cur = min(x for x in reach[i] if x != cur)
            out[lab[rest[i]]] = cur
        return out

    def _extend_s(self, k: Canvas) -> Labelled | None:
        if len(k.s) != 2 or k.s_is_cycle:
            return None
        c = _oriented_cycle(k)
        if c is None or len(c) < 5:
            return None
        g = k.g
        v2, v3, v4 = c[1], c[2], c[3]
        free = sorted(k.lists[v3] - k.lists[v2])
        for col in free:
            new = replace(k.with_lists({v3: {col}}), s=(c[0], v2, v3), a=k.a - {v3})
            if self._admit(k, new, "extend-s"):
                self._fire("extend-s", k)
                return self._solve(new)
        # every choice closes a wheel: drop v3 and pay for it at the hub
        others = set(g.adj[v3]) - {v2, v4}
        if len(others) != 1 or len(free) < 2:
            return None
        (w,) = others
        x = set(free[:2])
        lab = g.labels
        h = g.without([v3])
        new = self._canvas_on(
            k, h, [lab[v] for v in k.s], {lab[w]: k.lists[w] - x}
        )
        if not self._admit(k, new, "extend-s"):
            return None
        self._fire("extend-s", k)
        col = self._solve(new)
        if col is None:
            return None
        left = sorted(x - {col[lab[v4]]})
        col[lab[v3]] = left[0]
        return col

    # separating paths through the interior

    def _ends_and_rest(self, k: Canvas, c: tuple[int, ...]) -> set[int]:
        ks = len(k.s)
        e = set(c[ks:])
        e.add(c[0])
        e.add(c[ks - 1])
        return e

    def _separating_path(self, k: Canvas) -> Labelled | None:
        if not k.s or k.s_is_cycle:
            return None
        c = _oriented_cycle(k)
        if c is None:
            return None
        g, prof = k.g, k.profile
        e = self._ends_and_rest(k, c)
        inside = [v for v in range(g.n) if v not in set(c)]
        a_free = k.a - k.s_set
        for v in inside:
            near = sorted(g.adj[v] & e)
            for u, w in itertools.combinations(near, 2):
                if all(prof[x] == 3 for x in (u, v, w)):
                    continue
                got = self._split_and_glue(k, (u, v, w), "separating-path")
                if got is not None:
                    return got
        for v in inside:
            if prof[v] < 5:
                continue
            for w in sorted(g.adj[v]):
                if w in set(c) or prof[w] < 5:
                    continue
                for v2 in sorted(g.adj[v] & e):
                    for w2 in sorted(g.adj[w] & e):
                        if v2 == w2:
                            continue
                        if any(g.has_edge(a, v2) and g.has_edge(a, w2) for a in a_free):
                            continue
                        got = self._split_and_glue(k, (w2, w, v, v2), "separating-path")
                        if got is not None:
                            return got
        return None

    def _wheel_path(self, k: Canvas) -> Labelled | None:
        """An interior vertex seeing two boundary vertices must fan over
        the boundary between them; otherwise split there."""
        if not k.s or k.s_is_cycle:
            return None
        c = _oriented_cycle(k)
        if c is None:
            return None
        g = k.g
        pos = {v: i for i, v in enumerate(c)}
        e = self._ends_and_rest(k, c)
        inside = [v for v in range(g.n) if v not in pos]
        for u in inside:
            near = sorted(g.adj[u] & e, key=pos.get)
            for vi, vj in itertools.combinations(near, 2):
                i, j = pos[vi], pos[vj]
                arcs = []
                up = list(c[i : j + 1])
                down = list(c[j:]) + list(c[: i + 1])
                for arc in (up, down):
                    pairs = {frozenset(p) for p in zip(arc, arc[1:])}
                    if not any(frozenset(p) in pairs for p in zip(k.s, k.s[1:])):
                        arcs.append(arc)
                if len(arcs) != 1 or all(g.has_edge(u, x) for x in arcs[0]):
                    continue
                got = self._wheel_path_split(k, (vi, u, vj))
                if got is not None:
                    return got
        return None

    def _wheel_path_split(self, k: Canvas, path) -> Labelled | None:
        tag = "wheel-path"
        got = self._split(k, path)
        if got is None:
            return None
        k1, side2 = got
        g = k.g
        lab = g.labels
        vi, u, vj = path
        self._fire(tag, k)
        col1 = self._sub(k, k1, tag)
        if col1 is None:
            return None
        k2 = self._glue_side(k, side2, path, col1)
        if self._admit(k, k2, tag):
            col2 = self._solve(k2)
            return None if col2 is None else {**col1, **col2}
        if classify_exception(k2) is None or validate_canvas(k2):
            return None
        # The far side is a wheel-like piece where at most one colouring of
        # the path fails.  Find it by search and steer around it.
        self.trace.cited += 1
        full = self._canvas_on(
            k, k2.g, [lab[v] for v in path], {lab[v]: k.lists[v] for v in path if v not in k.s_set}
        )
        full = full.with_lists({full.g.index_of[lab[v]]: k.lists[v] for v in path})
        blocked = oracle.blocked_colourings_of_S(full)
        triple = tuple(col1[lab[v]] for v in path)
        if triple in blocked:
            if len(blocked) != 1:
                return None
            bad_u = next(iter(blocked))[1]
            k1b = k1.with_lists({k1.g.index_of[lab[u]]: k.lists[u] - {bad_u}})
            col1 = self._sub(k, k1b, tag)
            if col1 is None:
                return None
            triple = tuple(col1[lab[v]] for v in path)
            if triple in blocked:
                return None
        partial = {full.g.index_of[lab[v]]: col1[lab[v]] for v in path}
        col2 = oracle.find_colouring(full.g, full.lists, partial)
        if col2 is None:
            return None
        return {**col1, **full.by_label(col2)}

    def _fan_identify(self, k: Canvas) -> Labelled | None:
        if not k.s or k.s_is_cycle:
            return None
        c = _oriented_cycle(k)
        if c is None:
            return None
        g = k.g
        lab = g.labels
        ks, q = len(k.s), len(c)
        on_c = set(c)
        for w in range(g.n):
            if w in on_c:
                continue
            run: list[int] = []
            runs = []
            for p in range(ks, q):
                if g.has_edge(w, c[p]):
                    run.append(p)
                else:
                    if run:
                        runs.append(run)
                    run = []
            if run:
                runs.append(run)
            for run in runs:
                for a in range(len(run) - 2):
                    x, y, z = (c[p] for p in run[a : a + 3])
                    if k.lists[x] != k.lists[z]:
                        continue
                    try:
                        h = identify_fan_ends(g, x, y, z)
                    except PreconditionViolated:
                        continue
                    new = self._canvas_on(k, h, [lab[v] for v in k.s])
                    if not self._admit(k, new, "fan-identify"):
                        continue
                    self._fire("fan-identify", k)
                    col = self._solve(new)
                    if col is None:
                        return None
                    col[lab[z]] = col[lab[x]]
                    col[lab[y]] = min(k.lists[y] - {col[lab[x]], col[lab[w]]})
                    return col
        return None

    def _deg3_v4(self, k: Canvas) -> Labelled | None:
        if len(k.s) != 3 or k.s_is_cycle:
            return None
        prof = k.profile
        if any(prof[v] != 3 for v in k.s):
            return None
        for kk in (k, _reversed(k)):
            c = _oriented_cycle(kk)
            if c is None or len(c) < 5:
                continue
            g = k.g
            lab = g.labels
            v3, v4, v5 = c[2], c[3], c[4]
            common = (g.adj[v3] & g.adj[v4] & g.adj[v5]) - set(c)
            if not common or not k.lists[v3] <= k.lists[v4]:
                continue
            w = min(common)
            if set(g.adj[v4]) != {v3, v5, w}:
                continue
            ab = k.lists[v4] - k.lists[v3]
            h = g.without([v4])
            new = self._canvas_on(kk, h, [lab[v] for v in kk.s], {lab[w]: k.lists[w] - ab})
            self._fire("degree3-v4", k)
            if self._admit(k, new, "degree3-v4"):
                col = self._solve(new)
                if col is None:
                    return None
                col[lab[v4]] = min(ab - {col[lab[v5]], col[lab[w]]})
                return col
            # the remainder is a wheel-like near-triangulation whose
            # precoloured path is known to extend; the search only finds it
            self.trace.cited += 1
            col = oracle.find_colouring(g, k.lists)
            return None if col is None else k.by_label(col)
        return None

    def _k_prime(self, k: Canvas, c: tuple[int, ...]) -> tuple[int, int] | None:
        """(k', available colour) or None when the lists do not pin it."""
        ks = len(k.s)
        vk = c[ks - 1]
        if ks < len(c) and c[ks] in k.a:
            kp = ks + 1
            avail = k.lists[c[ks]] - k.lists[vk]
        else:
            kp = ks
            avail = k.lists[vk]
        if len(avail) != 1:
            return None
        return kp, _single(avail)

    def _extra_vertices(self, k: Canvas) -> Labelled | None:
        """Few vertices outside S on the boundary: colour them all and
        delete them."""
        if not k.s or k.s_is_cycle:
            return None
        c = _oriented_cycle(k)
        if c is None:
            return None
        ks = len(k.s)
        kp = ks + 1 if c[ks] in k.a else ks
        if len(c) >= kp + 3:
            return None
        return self._delete_runs(k, c, [list(range(ks, len(c)))], "extra-vertices")

    def _delete_runs(self, k: Canvas, c, runs, tag) -> Labelled | None:
        g = k.g
        lab = g.labels
        fixed = {v: _single(k.lists[v]) for v in k.s}
        for run in runs:
            verts = [c[p] for p in run]
            opts = []
            for v in verts:
                bad = {fixed[w] for w in g.adj[v] if w in fixed}
                opts.append(sorted(k.lists[v] - bad))
            adjacent = lambda a, b: g.has_edge(verts[a], verts[b])
            for cols in _proper_options(opts, adjacent):
                colouring = dict(zip(verts, cols))
                try:
                    new, _ = delete_and_subtract(k, colouring, verts)
                except ListExhausted:
                    continue
                if not self._admit(k, new, tag):
                    continue
                self._fire(tag, k)
                col = self._solve(new)
                if col is None:
                    return None
                col.update({lab[v]: x for v, x in colouring.items()})
                return col
        return None

    def _colours(self, k: Canvas) -> Labelled | None:
        if not k.s or k.s_is_cycle:
            return None
        for kk in (k, _reversed(k)) if len(k.s) > 1 else (k,):
            got = self._colours_one(kk)
            if got is not None:
                return got
        return None

    def _colours_one(self, k: Canvas) -> Labelled | None:
        c = _oriented_cycle(k)
        if c is None:
            return None
        g = k.g
        lab = g.labels
        ks, q = len(k.s), len(c)
        vk, vk1 = c[ks - 1], c[ks]
        tag = "colours"
        # (1) the last precoloured colour is missing from the next list
        if not k.lists[vk] <= k.lists[vk1]:
            colour = _single(k.lists[vk])
            try:
                new, _ = delete_and_subtract(k, {vk: colour}, [vk], new_s=k.s[:-1])
            except ListExhausted:
                new = None
            if new is not None and self._admit(k, new, tag):
                self._fire(tag, k)
                col = self._solve(new)
                if col is not None:
                    col[lab[vk]] = colour
                return col
        kp = self._k_prime(k, c)
        if kp is None or q < kp[0] + 3:
            return None
        kp, avail = kp
        x1, x2, x3 = c[kp], c[kp + 1], c[kp + 2]
        keep = [c[kp - 1]]
        # (2) the first free vertex has a colour its successor lacks
        for spare in sorted(k.lists[x1] - {avail} - k.lists[x2]):
            try:
                new, _ = delete_and_subtract(k, {x1: spare}, [x1], keep=keep)
            except ListExhausted:
                continue
            if self._admit(k, new, tag):
                self._fire(tag, k)
                col = self._solve(new)
                if col is not None:
                    if col[lab[c[kp - 1]]] == spare:
                        raise EngineInvariantError("colours(2): available colour clash")
                    col[lab[x1]] = spare
                return col
        # (3) the second free vertex has a colour its successor lacks
        for spare in sorted(k.lists[x2] - k.lists[x3]):
            for first in sorted(k.lists[x1] - {avail, spare}):
                try:
                    new, _ = delete_and_subtract(k, {x1: first, x2: spare}, [x1, x2], keep=keep)
                except ListExhausted:
                    continue
                if self._admit(k, new, tag):
                    self._fire(tag, k)
                    col = self._solve(new)
                    if col is not None:
                        col[lab[x1]] = first
                        col[lab[x2]] = spare
                    return col
        return None

    def _deletable_path(self, k: Canvas) -> Labelled | None:
        if not k.s or k.s_is_cycle:
            return None
        for kk in (k, _reversed(k)) if len(k.s) > 1 else (k,):
            dp = find_deletable_path(kk)
            if dp is None:
                continue
            got = self._use_deletable_path(kk, dp)
            if got is not None:
                return got
        return None

    def _path_colourings(self, k: Canvas, dp: DeletablePath):
        """Colourings of the deletable path meeting the reduction's rules:
        the last vertex avoids its successor's list, the first avoids the
        available colour, and the rest alternate two colours."""
        c, q = dp.cycle, dp.q
        verts = dp.path
        after = c[dp.j % q]
        lists = [k.lists[v] for v in verts]
        in_a = verts[1] in k.a
        lo = 2 if in_a else 1
        tail = lists[lo:]
        for a in sorted(tail[-1] - k.lists[after]):
            for b in sorted(tail[-1] - {a}):
                if not all({a, b} <= l for l in tail):
                    continue
                cols = [None] * len(verts)
                cur = a
                for i in range(len(verts) - 1, lo - 1, -1):
                    cols[i] = cur
                    cur = b if cur == a else a
                seconds = sorted(lists[1] - {cols[2]}) if in_a else [cols[1]]
                for second in seconds:
                    for first in sorted(lists[0] - {dp.available, second}):
                        out = list(cols)
                        out[0], out[1] = first, second
                        yield dict(zip(verts, out))

    def _use_deletable_path(self, k: Canvas, dp: DeletablePath) -> Labelled | None:
        g = k.g
        lab = g.labels
        prof = k.profile
        c = dp.cycle
        before = c[dp.k_prime - 1]
        tag = "deletable-path"
        verts = list(dp.path)
        for colouring in self._path_colourings(k, dp):
            try:
                new, _ = delete_and_subtract(k, colouring, verts, keep=[before])
            except ListExhausted:
                continue
            if self._admit(k, new, tag):
                self._fire(tag, k)
                col = self._solve(new)
                if col is not None:
                    col.update({lab[v]: x for v, x in colouring.items()})
                return col
            break
        # an interior girth-3 vertex sees the first three path vertices
        x1, x2, x3 = verts[0], verts[1], verts[2]
        hubs = sorted((g.adj[x1] & g.adj[x2] & g.adj[x3]) - set(c))
        for hub in hubs:
            if prof[hub] != 3 or len(g.adj[x2]) != 3:
                continue
            try:
                h = identify_fan_ends(g, x1, x2, x3)
            except PreconditionViolated:
                continue
            new = self._canvas_on(k, h, [lab[v] for v in k.s])
            if not self._admit(k, new, "deletable-path-identify"):
                continue
            self._fire("deletable-path-identify", k)
            col = self._solve(new)
            if col is None:
                return None
            z = col[lab[x1]]
            if z not in k.lists[x3]:
                raise EngineInvariantError("identified colour missing from the far end")
            col[lab[x3]] = z
            col[lab[x2]] = min(k.lists[x2] - {z, col[lab[hub]]})
            return col
        # two adjacent high-girth interior vertices hang off the path
        if verts[1] not in k.a:
            return None
        for u1 in sorted(g.adj[x1]):
            if u1 in set(c) or prof[u1] < 5:
                continue
            for u2 in sorted(g.adj[u1] & g.adj[x3]):
                if u2 in set(c) or prof[u2] < 5:
                    continue
                got = self._notctx(k, dp, u1, u2)
                if got is not None:
                    return got
        return None

    def _notctx(self, k: Canvas, dp: DeletablePath, u1: int, u2: int) -> Labelled | None:
        g = k.g
        lab = g.labels
        c = dp.cycle
        before = c[dp.k_prime - 1]
        tag = "deletable-path-pair"
        verts = list(dp.path)
        doomed = verts + [u1, u2]
        fixed = {v: _single(k.lists[v]) for v in k.s}
        for colouring in self._path_colourings(k, dp):
            col = dict(colouring)
            col.update(fixed)
            # the u with fewer coloured neighbours goes last
            order = sorted((u1, u2), key=lambda u: -sum(1 for w in g.adj[u] if w in col))
            ok = True
            for u in order:
                left = sorted(k.lists[u] - {col[w] for w in g.adj[u] if w in col})
                if not left:
                    ok = False
                    break
                col[u] = left[0]
            if not ok:
                continue
            chosen = {v: col[v] for v in doomed}
            try:
                new, _ = delete_and_subtract(k, chosen, doomed, keep=[before])
            except ListExhausted:
                continue
            if not self._admit(k, new, tag):
                continue
            self._fire(tag, k)
            out = self._solve(new)
            if out is not None:
                out.update({lab[v]: x for v, x in chosen.items()})
            return out
        return None

    def _low_degree(self, k: Canvas) -> Labelled | None:
        g = k.g
        lab = g.labels
        for v in range(g.n):
            if v in k.s_set or g.degree(v) >= len(k.lists[v]):
                continue
            h = g.without([v])
            new = self._canvas_on(k, h, [lab[x] for x in k.s], s_is_cycle=k.s_is_cycle)
            if not self._admit(k, new, "low-degree"):
                continue
            self._fire("low-degree", k)
            col = self._solve(new)
            if col is None:
                return None
            col[lab[v]] = min(k.lists[v] - {col[lab[w]] for w in g.adj[v]})
            return col
        return None

    def _boundary_run(self, k: Canvas) -> Labelled | None:
        """Colour and delete some run of free boundary vertices."""
        if not k.s or k.s_is_cycle:
            return None
        c = _oriented_cycle(k)
        if c is None:
            return None
        ks, q = len(k.s), len(c)
        runs = [list(range(a, b)) for a in range(ks, q) for b in range(a + 1, q + 1)]
        runs.sort(key=len)
        return self._delete_runs(k, c, runs, "boundary-run")


def find_deletable_path(k: Canvas) -> DeletablePath | None:
    """The deletable path with the smallest end index, if the boundary has
    one in the orientation given by ``k.s``."""
    if not k.s or k.s_is_cycle:
        return None
    c = _oriented_cycle(k)
    if c is None:
        return None
    q = len(c)
    ks = len(k.s)
    if q < ks + 3:
        return None
    vk = c[ks - 1]
    if c[ks] in k.a:
        kp = ks + 1
        avail = k.lists[c[ks]] - k.lists[vk]
    else:
        kp = ks
        avail = k.lists[vk]
    if len(avail) != 1 or q < kp + 3:
        return None
    (avail_c,) = avail
    # 1-based indices below follow v_1 .. v_q = c[0] .. c[q-1]
    L = lambda i: k.lists[c[(i - 1) % q]]
    in_a = lambda i: c[(i - 1) % q] in k.a
    if in_a(kp + 1) or in_a(kp + 3):
        return None
    for j in range(kp + 3, q + 1):
        if in_a(j) and j != kp + 2:
            return None
        if j >= kp + 3 and not L(j - 1) <= L(j):
            return None
        if not L(j) <= L(j % q + 1):
            return DeletablePath(tuple(c[kp:j]), kp, avail_c, j, q, c)
    return None


# ----------------------------------------------------------------------
# module-level conveniences


def colour(
    g: PlaneGraph, lists: Sequence[Iterable[int]], strict: bool = False, trace: EngineTrace | None = None
) -> dict[int, int]:
    return Engine(strict, trace).colour(g, lists)


def extend(
    k: Canvas, phi: Mapping[int, int], strict: bool = False, trace: EngineTrace | None = None
) -> dict[int, int] | ExceptionCertificate:
    return Engine(strict, trace).extend(k, phi)


def reduce_once(k: Canvas, phi: Mapping[int, int] | None = None) -> Reduction:
    return Engine().reduce_once(k, phi)


def fallback_backtrack(k: Canvas, strict: bool = False, trace: EngineTrace | None = None) -> dict[int, int] | None:
    eng = Engine(strict, trace)
    col = eng.fallback_backtrack(k)
    return None if col is None else {v: col[k.g.labels[v]] for v in range(k.g.n)}
