"""Brute-force ground truth for small instances."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import _kernels
from .canvas import Canvas
from .girth import girth_profile, list_threshold
from .plane_graph import PlaneGraph


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchBudget:
    nodes: int = 0
    seconds: float | None = None

    def __post_init__(self):
        if self.nodes < 0 or (self.seconds is not None and self.seconds <= 0):
            raise ValueError("budget limits must be positive")


def _csr(n: int, edges: Iterable[tuple[int, int]]) -> tuple[np.ndarray, np.ndarray]:
    nbrs: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    indptr = np.zeros(n + 1, dtype=np.int64)
    for v in range(n):
        indptr[v + 1] = indptr[v] + len(nbrs[v])
    return indptr, np.array([w for l in nbrs for w in l], dtype=np.int64)


def _run(indptr, indices, lists: Sequence[Iterable[int]], fixed: Mapping[int, int], budget: SearchBudget | None):
    n = len(lists)
    palette = sorted(set().union(*map(set, lists), fixed.values()) if n else set())
    if len(palette) > _kernels.MAX_COLOUR:
        raise ValueError(f"at most {_kernels.MAX_COLOUR} distinct colours supported")
    code = {c: i for i, c in enumerate(palette)}
    masks = np.zeros(n, dtype=np.int64)
    for v, l in enumerate(lists):
        m = 0
        for c in l:
            m |= 1 << code[c]
        masks[v] = m
    pinned = np.full(n, -1, dtype=np.int64)
    for v, c in fixed.items():
        if c not in lists[v]:
            return None
        pinned[v] = code[c]
    nodes = budget.nodes if budget else 0
    if budget is None or budget.seconds is None:
        status, col = _kernels.search(indptr, indices, masks, pinned, nodes)
    else:
        # restart with a growing node cap until the clock runs out
        deadline = time.monotonic() + budget.seconds
        cap = 10_000
        while True:
            limit = cap if not nodes else min(cap, nodes)
            status, col = _kernels.search(indptr, indices, masks, pinned, limit)
            if status != _kernels.BUDGET or (nodes and limit >= nodes):
                break
            if time.monotonic() > deadline:
                break
            cap *= 4
    if status == _kernels.BUDGET:
        raise BudgetExceeded("search budget exhausted")
    if status == _kernels.NONE:
        return None
    return {v: palette[int(col[v])] for v in range(n)}


def colour_edges(
    n: int,
    edges: Iterable[tuple[int, int]],
    lists: Sequence[Iterable[int]],
    fixed: Mapping[int, int] | None = None,
    budget: SearchBudget | None = None,
) -> dict[int, int] | None:
    indptr, indices = _csr(n, edges)
    return _run(indptr, indices, [frozenset(l) for l in lists], fixed or {}, budget)


def find_colouring(
    g: PlaneGraph,
    lists: Sequence[Iterable[int]],
    partial: Mapping[int, int] | None = None,
    budget: SearchBudget | None = None,
) -> dict[int, int] | None:
    """A proper colouring from the lists extending ``partial`` (indices), or
    None.  Raises BudgetExceeded rather than guessing."""
    indptr, indices = g.csr
    return _run(indptr, indices, [frozenset(l) for l in lists], partial or {}, budget)


def s_colourings(k: Canvas) -> Iterator[tuple[int, ...]]:
    """Proper colourings of the precoloured path/cycle from its lists."""
    g = k.g
    for cols in itertools.product(*(sorted(k.lists[v]) for v in k.s)):
        phi = dict(zip(k.s, cols))
        if all(phi[a] != phi[b] for a in k.s for b in g.adj[a] if b in phi):
            yield cols


def blocked_colourings_of_S(k: Canvas, budget: SearchBudget | None = None) -> set[tuple[int, ...]]:
    out = set()
    for cols in s_colourings(k):
        if find_colouring(k.g, k.lists, dict(zip(k.s, cols)), budget) is None:
            out.add(cols)
    return out


@dataclass(frozen=True)
class Sampled:
    count: int
    seed: int


@dataclass
class Verdict:
    checked: int = 0
    failures: list[tuple[frozenset[int], ...]] = field(default_factory=list)
    exhaustive: bool = False

    @property
    def ok(self) -> bool:
        return not self.failures


def _canonical_assignments(sizes: Sequence[int], universe: int) -> Iterator[tuple[frozenset[int], ...]]:
    """Every list assignment with the given sizes, up to renaming colours.

    Colours are introduced in increasing order: a vertex may use colours
    already seen plus the next unused ones, never skipping ahead.
    """
    n = len(sizes)

    def rec(i: int, used: int, acc: list[frozenset[int]]):
        if i == n:
            yield tuple(acc)
            return
        for subset in itertools.combinations(range(universe), sizes[i]):
            fresh = [c for c in subset if c >= used]
            if fresh and fresh != list(range(used, used + len(fresh))):
                continue
            acc.append(frozenset(subset))
            yield from rec(i + 1, max(used, used + len(fresh)), acc)
            acc.pop()

    yield from rec(0, 0, [])


def sample_local_girth_lists(g: PlaneGraph, universe: int, rng: random.Random) -> list[frozenset[int]]:
    prof = girth_profile(g)
    return [frozenset(rng.sample(range(universe), list_threshold(prof[v]))) for v in range(g.n)]


def check_local_girth_choosable(
    g: PlaneGraph,
    universe_size: int = 6,
    mode: str | Sampled = "exhaustive",
    budget: SearchBudget | None = None,
    max_assignments: int | None = None,
) -> Verdict:
    """Try every (or a sample of) local girth list assignment over
    ``range(universe_size)``.  Lists are taken at exactly the threshold
    size, which is enough: larger lists only make colouring easier."""
    prof = girth_profile(g)
    sizes = [list_threshold(prof[v]) for v in range(g.n)]
    if any(s > universe_size for s in sizes):
        raise ValueError("universe smaller than a required list size")
    verdict = Verdict(exhaustive=mode == "exhaustive")
    if mode == "exhaustive":
        source: Iterable = _canonical_assignments(sizes, universe_size)
    elif isinstance(mode, Sampled):
        rng = random.Random(mode.seed)
        source = (sample_local_girth_lists(g, universe_size, rng) for _ in range(mode.count))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    for lists in source:
        if max_assignments is not None and verdict.checked >= max_assignments:
            raise BudgetExceeded(f"more than {max_assignments} assignments")
        verdict.checked += 1
        if find_colouring(g, lists, None, budget) is None:
            verdict.failures.append(tuple(lists))
    return verdict
