import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from girthwright import oracle
from girthwright.canvas import Canvas, check_colouring
from girthwright.engine import (
    AssignmentInvalid,
    CanvasInvalid,
    Engine,
    EngineIncomplete,
    EngineInvariantError,
    EngineTrace,
    NoReductionApplies,
    PhiImproper,
    colour,
    extend,
    fallback_backtrack,
    find_deletable_path,
    reduce_once,
)
from girthwright.generator import all_connected_planar, random_canvas, random_planar_graph
from girthwright.girth import girth_profile, list_threshold
from girthwright.oracle import sample_local_girth_lists
from girthwright.serialize import load
from girthwright.wheels import TYPE_I, TYPE_II, TYPE_III, ExceptionCertificate, classify_exception

from conftest import bowtie, c4_chord, cycle, data_file, k4, k4_minus_13


def assert_extends(k, phi, col):
    assert isinstance(col, dict)
    assert check_colouring(k.g, k.lists, col) == []
    assert all(col[v] == c for v, c in phi.items())


def c7_with_deletable_path():
    return Canvas(cycle(7), [{2}, {3}, {1}] + [{1, 2, 3}] * 4, (0, 1, 2))


# ---------------------------------------------------------------- colour


def test_k4_with_five_lists():
    g = k4()
    lists = [set(range(1, 6))] * 4
    col = colour(g, lists, strict=True)
    assert check_colouring(g, lists, col) == []
    assert len(set(col.values())) == 4


def test_five_cycle_with_three_lists():
    g = cycle(5)
    rng = random.Random(5)
    for _ in range(50):
        lists = [set(rng.sample(range(1, 6), 3)) for _ in range(5)]
        assert check_colouring(g, lists, colour(g, lists, strict=True)) == []


def test_lists_below_threshold_rejected():
    with pytest.raises(AssignmentInvalid):
        colour(k4(), [{1, 2, 3, 4}] * 4)
    with pytest.raises(AssignmentInvalid):
        colour(k4(), [set(range(5))] * 3)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 14), st.integers(0, 10**6))
def test_random_graphs_with_threshold_lists(n, seed):
    rng = random.Random(seed)
    g = random_planar_graph(n, rng, min_girth=rng.choice([3, 4, 5]))
    lists = sample_local_girth_lists(g, 7, rng)
    assert oracle.find_colouring(g, lists) is not None
    col = colour(g, lists, strict=True)
    assert check_colouring(g, lists, col) == []


def test_every_small_graph_strictly():
    """All connected plane graphs up to six vertices, a few list draws each."""
    rng = random.Random(6)
    trace = EngineTrace()
    for n in range(1, 7):
        for g in all_connected_planar(n):
            for _ in range(3):
                lists = sample_local_girth_lists(g, 6, rng)
                col = colour(g, lists, strict=True, trace=trace)
                assert check_colouring(g, lists, col) == []
    assert trace.fallbacks == 0


# ---------------------------------------------------------------- extend


def test_triangle_with_two_precoloured():
    g = cycle(3)
    k = Canvas(g, [{1, 2}, {1, 2}, {1, 2, 3}], (0, 1))
    assert extend(k, {0: 1, 1: 2}, strict=True) == {0: 1, 1: 2, 2: 3}


def test_type_i_instance_gives_certificate():
    inst = load(data_file("type_i_blocked.json"))
    trace = EngineTrace()
    cert = extend(inst.canvas(), inst.phi_map(), strict=True, trace=trace)
    assert isinstance(cert, ExceptionCertificate) and cert.kind == TYPE_I
    assert trace.exceptional_searches == 1


@pytest.mark.parametrize("name,kind", [("type_ii_blocked.json", TYPE_II), ("type_iii_blocked.json", TYPE_III)])
def test_other_stored_instances_give_certificates(name, kind):
    inst = load(data_file(name))
    cert = extend(inst.canvas(), inst.phi_map(), strict=True)
    assert isinstance(cert, ExceptionCertificate) and cert.kind == kind


def test_broken_wheel_type_iii():
    g = k4_minus_13()
    k = Canvas(g, [{1, 2}, {2}, {1, 3}, {1, 2, 3}], (0, 1, 2))
    cert = extend(k, {0: 1, 1: 2, 2: 3}, strict=True)
    assert isinstance(cert, ExceptionCertificate) and cert.kind == TYPE_III
    col = extend(k, {0: 1, 1: 2, 2: 1}, strict=True)
    assert col == {0: 1, 1: 2, 2: 1, 3: 3}


def test_exceptional_but_colourable_canvas_is_coloured():
    g = k4_minus_13()
    k = Canvas(g, [{1}, {2}, {3}, {1, 2, 4}], (0, 1, 2))
    assert classify_exception(k) is not None
    trace = EngineTrace()
    col = extend(k, {0: 1, 1: 2, 2: 3}, trace=trace)
    assert col == {0: 1, 1: 2, 2: 3, 3: 4}
    assert trace.exceptional_searches == 1


def test_improper_phi_rejected():
    g = cycle(3)
    k = Canvas(g, [{1, 2}, {1, 2}, {1, 2, 3}], (0, 1))
    with pytest.raises(PhiImproper):
        extend(k, {0: 1, 1: 1})
    with pytest.raises(PhiImproper):
        extend(k, {0: 3, 1: 1})
    with pytest.raises(PhiImproper):
        extend(k, {0: 1})


def test_invalid_canvas_rejected():
    g = k4()
    with pytest.raises(CanvasInvalid):
        extend(Canvas(g, [{1, 2, 3}] * 4), {})


def test_every_small_canvas_and_precolouring():
    """Unexceptional canvases extend every proper precolouring; the oracle
    independently confirms that each returned colouring is proper."""
    checked = 0
    for n in range(1, 7):
        for i, g in enumerate(all_connected_planar(n)):
            for r in range(2):
                k = random_canvas(n, 31 * i + r, graph=g, s_len=3 if r else None)
                k = k.with_lists({v: {0, 1, 2} for v in k.s})
                for cols in oracle.s_colourings(k):
                    phi = dict(zip(k.s, cols))
                    out = extend(k, phi, strict=True)
                    if isinstance(out, ExceptionCertificate):
                        continue
                    assert_extends(k, phi, out)
                    checked += 1
    assert checked > 1000


# ---------------------------------------------------------------- reductions


def test_bowtie_splits_at_cut_vertex():
    k = Canvas(bowtie(), [{1}, {2}] + [{1, 2, 3}] * 3, (0, 1))
    red = reduce_once(k)
    assert red.tag == "cut-vertex"
    assert sorted(c.g.n for c in red.children) == [3, 3]
    assert check_colouring(k.g, k.lists, red.colouring) == []


def test_c4_with_chord_splits_along_it():
    k = Canvas(c4_chord(), [{1}, {2}, {1, 2, 3}, {1, 2, 3}], (0, 1))
    red = reduce_once(k)
    assert red.tag == "chord"
    assert sorted(c.g.n for c in red.children) == [3, 3]


def test_c7_deletable_path():
    k = c7_with_deletable_path()
    dp = find_deletable_path(k)
    assert dp.path == (3, 4, 5, 6)
    assert (dp.k_prime, dp.available, dp.j, dp.q) == (3, 1, 7, 7)
    red = reduce_once(k)
    assert red.tag == "deletable-path"
    assert check_colouring(k.g, k.lists, red.colouring) == []


def test_reduce_once_refuses_exceptional_and_complete_canvases():
    inst = load(data_file("type_i_blocked.json"))
    with pytest.raises(CanvasInvalid):
        reduce_once(inst.canvas(), inst.phi_map())
    with pytest.raises(NoReductionApplies):
        reduce_once(Canvas(cycle(3), [{1}, {2}, {3}], (0, 1, 2), True))


def satisfies_deletable_definition(k, dp):
    c, kp, j, q = dp.cycle, dp.k_prime, dp.j, dp.q
    L = lambda i: k.lists[c[(i - 1) % q]]
    ks = len(k.s)
    if kp not in (ks, ks + 1):
        return False
    if (kp == ks + 1) != (c[ks] in k.a):
        return False
    if not kp + 3 <= j <= q:
        return False
    on_path = set(c[kp:j])
    if on_path & k.a not in (set(), {c[kp + 1]}):
        return False
    if any(not L(i - 1) <= L(i) for i in range(kp + 3, j + 1)):
        return False
    return not L(j) <= L(j % q + 1)


@settings(max_examples=120, deadline=None)
@given(st.integers(4, 9), st.integers(0, 10**6))
def test_found_deletable_paths_meet_the_definition(n, seed):
    k = random_canvas(n, seed, s_len=random.Random(seed).choice([1, 2, 3]))
    dp = find_deletable_path(k)
    if dp is not None:
        assert satisfies_deletable_definition(k, dp)


def test_deletable_path_on_long_cycles():
    found = 0
    for q in range(6, 11):
        for seed in range(40):
            rng = random.Random(seed)
            lists = [{1}, {2}] + [set(rng.sample(range(1, 5), 3)) for _ in range(q - 2)]
            k = Canvas(cycle(q), lists, (0, 1))
            dp = find_deletable_path(k)
            if dp is not None:
                found += 1
                assert satisfies_deletable_definition(k, dp)
                col = extend(k, {0: 1, 1: 2}, strict=True)
                assert_extends(k, {0: 1, 1: 2}, col)
    assert found > 20


def test_sub_canvas_that_does_not_shrink_is_an_invariant_error():
    k = random_canvas(6, 3, s_len=0)
    with pytest.raises(EngineInvariantError):
        Engine()._admit(k, k, "test")


# ---------------------------------------------------------------- fallback


def test_fallback_matches_oracle():
    for seed in range(40):
        k = random_canvas(5, seed)
        k = k.with_lists({v: {min(k.lists[v])} for v in k.s})
        col = fallback_backtrack(k)
        truth = oracle.find_colouring(k.g, k.lists)
        assert (col is None) == (truth is None)
        if col is not None:
            assert check_colouring(k.g, k.lists, col) == []


def test_fallback_in_strict_mode_raises():
    with pytest.raises(EngineIncomplete):
        fallback_backtrack(random_canvas(4, 0), strict=True)


def test_fallback_is_counted():
    trace = EngineTrace()
    fallback_backtrack(random_canvas(4, 0), trace=trace)
    fallback_backtrack(random_canvas(4, 1), trace=trace)
    assert trace.fallbacks == 2
    assert trace.count("fallback") == 2


def test_trace_records_every_step():
    trace = EngineTrace()
    g = random_planar_graph(10, random.Random(4))
    lists = [set(range(list_threshold(x))) for x in girth_profile(g)]
    colour(g, lists, strict=True, trace=trace)
    assert trace.steps and trace.fallbacks == 0
    assert all(depth >= 0 and n >= 0 for _, n, _, depth in trace.steps)
    assert trace.tags()[-1] in {t for t, *_ in trace.steps}
