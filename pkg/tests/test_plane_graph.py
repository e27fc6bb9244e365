import pytest

from girthwright.generator import embed_planar, make_broken_wheel
from girthwright.plane_graph import (
    EmbeddingInvalid,
    NotACycle,
    NotSeparating,
    PlaneGraph,
    PreconditionViolated,
    chords_of,
    cut_vertices,
    identify_fan_ends,
    interior,
    is_2_connected,
    outer_boundary,
    split_along_path,
    trace_faces,
)

from conftest import bowtie, c4_chord, cycle, k4, path, wheel


def test_triangle_has_two_three_faces():
    faces = trace_faces(cycle(3))
    assert sorted(len(f.vertices) for f in faces) == [3, 3]


def test_single_edge_has_one_face_of_length_two():
    faces = trace_faces(path(2))
    assert [len(f.vertices) for f in faces] == [2]


def test_k4_has_four_triangles():
    faces = trace_faces(k4())
    assert sorted(len(f.vertices) for f in faces) == [3, 3, 3, 3]


def test_every_dart_in_exactly_one_face():
    g = wheel(6)
    darts = [d for f in g.faces for d in f]
    assert len(darts) == len(set(darts)) == 2 * len(g.edges)


def test_inconsistent_rotation_rejected():
    # K4 with one rotation flipped no longer satisfies Euler
    g = k4()
    rot = list(g.rotations)
    rot[0] = tuple(reversed(rot[0]))
    rot[1] = tuple(reversed(rot[1]))
    with pytest.raises(EmbeddingInvalid):
        PlaneGraph(tuple(rot))


def test_asymmetric_rotation_rejected():
    with pytest.raises(EmbeddingInvalid):
        PlaneGraph(((1,), ()))


def test_outer_boundary_c5():
    assert len(outer_boundary(cycle(5)).vertices) == 5


def test_outer_boundary_of_path_repeats_middle():
    walk = outer_boundary(path(3)).vertices
    assert len(walk) == 4
    assert sorted(walk) == [0, 1, 1, 2]


def test_outer_boundary_of_wheel_is_rim():
    walk = outer_boundary(wheel(5)).vertices
    assert sorted(walk) == [0, 1, 2, 3, 4]


def test_chords():
    assert chords_of(c4_chord(), (0, 1, 2, 3)) == [(0, 2)]
    assert chords_of(cycle(5), (0, 1, 2, 3, 4)) == []
    g = k4()
    tri = tuple(outer_boundary(g).vertices)
    assert chords_of(g, tri) == []


def test_chords_requires_cycle():
    with pytest.raises(NotACycle):
        chords_of(cycle(5), (0, 2, 4))


def test_interior_of_k4_outer_triangle():
    g = k4()
    tri = tuple(outer_boundary(g).vertices)
    inside, closed = interior(g, tri)
    (hub,) = set(range(4)) - set(tri)
    assert inside == {hub}
    assert closed.n == 4 and len(closed.edges) == 6


def test_interior_of_whole_cycle_is_empty():
    g = cycle(6)
    inside, closed = interior(g, tuple(range(6)))
    assert inside == frozenset()
    assert closed.n == 6 and len(closed.edges) == 6


def test_wheel_hub_triangle_is_empty():
    g = wheel(5)
    inside, closed = interior(g, (0, 1, 5))
    assert inside == frozenset()
    assert set(closed.labels) == {0, 1, 5}


def test_split_c4_along_chord():
    g1, g2 = split_along_path(c4_chord(), (0, 2))
    assert sorted([g1.n, g2.n]) == [3, 3]
    assert len(g1.edges) == len(g2.edges) == 3


def test_split_bowtie_at_cut_vertex():
    g1, g2 = split_along_path(bowtie(), (2,))
    assert {frozenset(g1.labels), frozenset(g2.labels)} == {frozenset({0, 1, 2}), frozenset({2, 3, 4})}


def test_split_needs_a_path():
    with pytest.raises(NotSeparating):
        split_along_path(cycle(5), (0, 2))


def test_split_sizes_add_up():
    g = wheel(6)
    g1, g2 = split_along_path(g, (0, 6, 3))
    assert g1.n + g2.n == g.n + 3
    assert len(g1.edges) + len(g2.edges) == len(g.edges) + 2


def test_cut_vertices():
    assert cut_vertices(bowtie()) == {2}
    assert cut_vertices(cycle(5)) == frozenset()
    assert is_2_connected(cycle(5))
    assert cut_vertices(path(3)) == {1}


def test_identify_on_broken_wheel_of_four_rim_vertices():
    # hub 1, rim path 0-4-3-2 around it: identifying 0 and 3 drops 4
    g, _ = make_broken_wheel(5)
    before = len(g.faces)
    h = identify_fan_ends(g, 0, 4, 3)
    assert h.n == g.n - 2
    assert 4 not in h.labels and 3 not in h.labels
    z = h.index_of[0]
    hub = h.index_of[1]
    assert h.has_edge(z, hub)
    # two triangles around the deleted vertex disappear
    assert len(h.faces) == before - 2


def test_identify_three_rim_fan_collapses_to_edge():
    # hub 0 with fan 1-2-3 and an outer arc 3-4-1
    g = embed_planar(5, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (3, 4), (4, 1)], outer_cycle=[1, 2, 3, 4])
    h = identify_fan_ends(g, 1, 2, 3)
    z, hub, far = h.index_of[1], h.index_of[0], h.index_of[4]
    assert h.n == 3
    assert {frozenset(e) for e in h.edges} == {frozenset((z, hub)), frozenset((z, far))}


def test_identify_rejects_wrong_context():
    with pytest.raises(PreconditionViolated):
        identify_fan_ends(cycle(5), 0, 1, 2)
    with pytest.raises(PreconditionViolated):
        identify_fan_ends(k4(), 0, 1, 2)
