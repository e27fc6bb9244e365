import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from girthwright import oracle
from girthwright.canvas import (
    Canvas,
    ListExhausted,
    NotAPath,
    NotASubgraph,
    delete_and_subtract,
    is_acceptable_cycle,
    is_acceptable_path,
    is_local_girth_assignment,
    subcanvas,
    trim_lists,
    validate_canvas,
)
from girthwright.generator import all_connected_planar, embed_planar, random_canvas
from girthwright.girth import girth_profile
from girthwright.plane_graph import outer_boundary, split_along_path
from girthwright.serialize import load
from girthwright.wheels import classify_exception

from conftest import c4_chord, cycle, data_file, k4, path


def test_local_girth_assignment():
    g = k4()
    prof = girth_profile(g)
    assert is_local_girth_assignment(g, prof, [range(5)] * 4) == (True, None)
    ok, bad = is_local_girth_assignment(g, prof, [range(4)] * 4)
    assert not ok and bad in range(4)
    c5 = cycle(5)
    assert is_local_girth_assignment(c5, girth_profile(c5), [range(3)] * 5)[0]


def test_acceptable_paths():
    g = k4()
    prof = girth_profile(g)
    assert is_acceptable_path(g, prof, ())
    assert is_acceptable_path(g, prof, (0, 1, 2))
    assert not is_acceptable_path(g, prof, (0, 1, 2, 3))
    c5 = cycle(5)
    assert is_acceptable_path(c5, girth_profile(c5), (0, 1, 2, 3))
    with pytest.raises(NotAPath):
        is_acceptable_path(c5, girth_profile(c5), (0, 2))


def test_acceptable_cycles():
    c3 = cycle(3)
    assert is_acceptable_cycle(c3, girth_profile(c3), (0, 1, 2))
    # a 5-cycle whose vertices all have girth 3: a 5-wheel's rim
    w = embed_planar(6, [(i, (i + 1) % 5) for i in range(5)] + [(i, 5) for i in range(5)], outer_cycle=range(5))
    assert not is_acceptable_cycle(w, girth_profile(w), (0, 1, 2, 3, 4))


def test_type_i_instance_is_valid():
    k = load(data_file("type_i_blocked.json")).canvas()
    assert validate_canvas(k) == []


def test_adjacent_a_vertices_rejected():
    g = cycle(6)
    k = Canvas(g, [{1}, {2}, {1, 2}, {1, 2}, {1, 2, 3}, {1, 2, 3}], (0, 1), False, {2, 3})
    assert any("A not independent" in p for p in validate_canvas(k))


def test_interior_girth_three_vertex_needs_five_colours():
    g = k4()
    hub = next(v for v in range(4) if v not in outer_boundary(g).vertices)
    lists = [{1, 2, 3}] * 4
    lists[hub] = {1, 2, 3, 4}
    problems = validate_canvas(Canvas(g, lists))
    assert any(f"interior vertex {hub}" in p for p in problems)


def test_unacceptable_s_rejected():
    g = k4()
    s = tuple(outer_boundary(g).vertices)
    hub = ({0, 1, 2, 3} - set(s)).pop()
    lists = [{1, 2, 3, 4, 5}] * 4
    k = Canvas(g, lists, (s[0], s[1], s[2], hub))
    assert validate_canvas(k)


def test_subcanvas_of_whole_graph_is_identity():
    k = random_canvas(6, 4)
    assert subcanvas(k, k.g) == k


def test_chord_split_halves_are_valid():
    g = c4_chord()
    k = Canvas(g, [{1}, {2}, {1, 2, 3}, {1, 2, 3}], (0, 1))
    for half in split_along_path(g, (0, 2)):
        assert validate_canvas(subcanvas(k, half)) == []


def test_subcanvas_dropping_s_empties_it():
    g = cycle(5)
    k = Canvas(g, [{1}, {2}, {1, 2, 3}, {1, 2, 3}, {1, 2, 3}], (0, 1))
    assert subcanvas(k, g.induced([2, 3, 4])).s == ()


def test_trim_lists():
    g = embed_planar(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)])
    k = Canvas(g, [{5, 1, 4, 2, 3}] + [{1, 2, 3, 4}] * 4)
    t = trim_lists(k)
    assert t.lists[0] == {1, 2, 3}
    assert trim_lists(t) == t


def test_trim_leaves_interior_threshold():
    g = k4()
    hub = next(v for v in range(4) if v not in outer_boundary(g).vertices)
    k = Canvas(g, [set(range(7))] * 4)
    assert len(trim_lists(k).lists[hub]) == 5


def test_separating_triangle_reduction_on_k4():
    g = k4()
    tri = outer_boundary(g).vertices
    hub = ({0, 1, 2, 3} - set(tri)).pop()
    k = Canvas(g, [{1, 2, 3, 4, 5}] * 4)
    coloured = {tri[0]: 1, tri[1]: 2, tri[2]: 3}
    inner, new_of = delete_and_subtract(k, coloured, [tri[1], tri[2]], new_s=[tri[0]])
    assert inner.lists[new_of[hub]] == {1, 4, 5}
    assert inner.lists[new_of[tri[0]]] == {1}


def test_deleting_isolated_vertex():
    g = embed_planar(3, [(0, 1)])
    k = Canvas(g, [{1, 2, 3}] * 3)
    out, new_of = delete_and_subtract(k, {2: 1}, [2])
    assert out.g.n == 2 and out.lists == (frozenset({1, 2, 3}),) * 2


def test_absent_colour_leaves_neighbour_alone():
    g = path(2)
    k = Canvas(g, [{1, 2, 3}, {4, 5, 6}])
    out, new_of = delete_and_subtract(k, {0: 1}, [0])
    assert out.lists[new_of[1]] == {4, 5, 6}


def test_emptied_list_raises():
    g = path(2)
    k = Canvas(g, [{1}, {1}])
    with pytest.raises(ListExhausted):
        delete_and_subtract(k, {0: 1}, [0])


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 8), st.integers(0, 10**6))
def test_subcanvas_always_valid(n, seed):
    k = random_canvas(n, seed)
    assert validate_canvas(k) == []
    rng = random.Random(seed)
    keep = sorted(set(k.s) | set(rng.sample(range(n), rng.randint(0, n))))
    try:
        sub = subcanvas(k, k.g.induced(keep))
    except NotASubgraph:
        # keeping all of S can still disconnect it
        return
    assert validate_canvas(sub) == []


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 8), st.integers(0, 10**6))
def test_delete_and_subtract_loses_one_colour_per_doomed_neighbour(n, seed):
    k = random_canvas(n, seed)
    rng = random.Random(seed)
    doomed = rng.sample(range(n), rng.randint(1, n - 1))
    coloured = {v: rng.choice(sorted(k.lists[v])) for v in doomed}
    try:
        out, new_of = delete_and_subtract(k, coloured, doomed)
    except ListExhausted:
        return
    for old, new in new_of.items():
        lost = sum(1 for w in k.g.adj[old] if w in coloured)
        assert len(out.lists[new]) >= len(k.lists[old]) - lost


def test_trim_keeps_colourability_of_unexceptional_canvases():
    checked = 0
    for n in range(1, 8):
        for i, g in enumerate(all_connected_planar(n)):
            for r in range(2):
                k = random_canvas(n, 97 * i + r, graph=g, universe=7)
                k = k.with_lists({v: set(k.lists[v]) | {6} for v in range(n) if v not in k.s_set and v not in k.a})
                if classify_exception(k) is not None:
                    continue
                t = trim_lists(k)
                before = oracle.find_colouring(k.g, k.lists) is not None
                after = oracle.find_colouring(t.g, t.lists) is not None
                assert before == after
                checked += 1
    assert checked > 1000
