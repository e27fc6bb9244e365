import json
import os
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from girthwright.cli import main
from girthwright.generator import make_generalized, random_canvas, random_planar_graph, random_wheel_spec
from girthwright.serialize import FormatError, Instance, dumps, from_dict, load, loads, store, to_dict, to_dot

from conftest import cycle, data_file, k4, k4_minus_13, path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


def write(tmp_path, name, inst):
    p = tmp_path / name
    store(inst, str(p))
    return str(p)


# ---------------------------------------------------------------- format


def test_round_trip_of_stored_instances():
    for name in ("type_i_blocked.json", "type_ii_blocked.json", "type_iii_blocked.json"):
        text = open(data_file(name), encoding="utf-8").read()
        inst = loads(text)
        assert loads(dumps(inst)) == inst
        assert dumps(loads(dumps(inst))) == dumps(inst)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 10), st.integers(0, 10**6))
def test_round_trip_of_random_canvases(n, seed):
    k = random_canvas(n, seed)
    inst = Instance.from_canvas(k, {v: next(iter(k.lists[v])) for v in k.s})
    text = dumps(inst)
    assert dumps(loads(text)) == text
    assert loads(text).canvas() == k


def test_graph_without_lists():
    inst = Instance(cycle(4))
    d = to_dict(inst)
    assert "lists" not in d
    assert from_dict(d) == inst


def test_edgeless_graph_round_trip():
    g = random_planar_graph(1, random.Random(0))
    inst = Instance(g)
    assert to_dict(inst)["outer_edge"] is None
    assert loads(dumps(inst)) == inst


@pytest.mark.parametrize("patch,message", [
    ({"colour": 3}, "unknown keys"),
    ({"n": -1}, "non-negative"),
    ({"rotations": [[1], [], []]}, "embedding"),
    ({"lists": {"0": [1, 1], "1": [1], "2": [2]}}, "repeats"),
    ({"lists": {"0": [-1], "1": [1], "2": [2]}}, "colour"),
    ({"S_is_cycle": "yes"}, "S_is_cycle"),
    ({"A": [0, 0]}, "A repeats"),
    ({"S": [5]}, "S vertex"),
])
def test_malformed_files(patch, message):
    d = to_dict(Instance(path(3), ({1}, {2}, {1, 2, 3})))
    d.update(patch)
    with pytest.raises(FormatError, match=message):
        from_dict(d)


def test_bad_json():
    with pytest.raises(FormatError):
        loads("{not json")
    with pytest.raises(FormatError):
        loads("[1, 2]")


def test_dot_export():
    inst = load(data_file("type_i_blocked.json"))
    dot = to_dot(inst)
    assert dot.startswith("graph")
    assert 'v0 g=5 L={2}' in dot
    assert "diamond" in dot and "filled" in dot
    coloured = to_dot(inst, {0: 2, 1: 1, 2: 2, 3: 1, 4: 2})
    assert coloured != dot


# ---------------------------------------------------------------- commands


def test_girths_of_five_cycle(tmp_path, capsys):
    f = write(tmp_path, "c5.json", Instance(cycle(5)))
    code, out, _ = run(capsys, "girths", f)
    assert code == 0
    assert set(out["girth"].values()) == {5}


def test_girths_of_a_tree(tmp_path, capsys):
    f = write(tmp_path, "p3.json", Instance(path(3)))
    _, out, _ = run(capsys, "girths", f)
    assert set(out["girth"].values()) == {"inf"}


def test_classify_type_i(capsys):
    code, out, _ = run(capsys, "classify", data_file("type_i_blocked.json"))
    assert code == 0 and out["exception"]["kind"] == "TypeI"


def test_classify_unexceptional(tmp_path, capsys):
    f = write(tmp_path, "k.json", Instance(cycle(3), ({1}, {2}, {1, 2, 3}), (0, 1)))
    code, out, _ = run(capsys, "classify", f)
    assert code == 0 and out["exception"] is None


def test_colour_k4(tmp_path, capsys):
    lists = tuple({1, 2, 3, 4, 5} for _ in range(4))
    f = write(tmp_path, "k4.json", Instance(k4(), lists))
    dot = tmp_path / "k4.dot"
    code, out, _ = run(capsys, "colour", f, "--strict", "--dot", str(dot))
    assert code == 0
    col = {int(v): c for v, c in out["colouring"].items()}
    assert len(set(col.values())) == 4
    assert out["trace"]["fallbacks"] == 0
    assert dot.read_text().startswith("graph")


def test_colour_rejects_short_lists(tmp_path, capsys):
    f = write(tmp_path, "k4.json", Instance(k4(), tuple({1, 2, 3} for _ in range(4))))
    code, _, err = run(capsys, "colour", f)
    assert code == 2 and "error" in err


def test_extend_returns_certificate(capsys):
    code, out, _ = run(capsys, "extend", data_file("type_iii_blocked.json"), "--strict")
    assert code == 1 and out["certificate"]["kind"] == "TypeIII"


def test_extend_returns_colouring(tmp_path, capsys):
    inst = Instance(k4_minus_13(), ({1, 2}, {2}, {1, 3}, {1, 2, 3}), (0, 1, 2), phi=((0, 1), (1, 2), (2, 1)))
    f = write(tmp_path, "bw.json", inst)
    code, out, _ = run(capsys, "extend", f, "--strict")
    assert code == 0 and out["colouring"] == {"0": 1, "1": 2, "2": 1, "3": 3}


def test_extend_with_improper_phi(tmp_path, capsys):
    inst = Instance(cycle(3), ({1}, {1}, {1, 2, 3}), (0, 1))
    f = write(tmp_path, "bad.json", inst)
    code, _, _ = run(capsys, "extend", f)
    assert code == 2


def test_missing_file(capsys):
    code, _, _ = run(capsys, "girths", "/nonexistent/file.json")
    assert code == 2


def test_oracle_check(capsys):
    code, out, _ = run(capsys, "oracle-check", data_file("type_i_blocked.json"))
    assert code == 0 and out["blocked"] == [[2, 1, 2, 1]]


def test_gen_writes_valid_files(tmp_path, capsys):
    code, out, _ = run(capsys, "gen", "--n", "4", "--kind", "all-planar", "--out", str(tmp_path))
    assert code == 0 and len(out["written"]) == 6
    for p in out["written"]:
        assert load(p).graph.n == 4


def test_gen_is_seeded(tmp_path, capsys, monkeypatch):
    def texts(dirname, *extra):
        d = tmp_path / dirname
        _, out, _ = run(capsys, "gen", "--n", "6", "--kind", "canvas", "--count", "3", "--out", str(d), *extra)
        return [open(p).read() for p in out["written"]]

    assert texts("a", "--seed", "7") == texts("b", "--seed", "7")
    assert texts("c", "--seed", "7") != texts("d", "--seed", "8")
    monkeypatch.setenv("GIRTHWRIGHT_SEED", "7")
    assert texts("e", "--seed", "8") == texts("a", "--seed", "7")


def test_stress_small(tmp_path, capsys):
    report = tmp_path / "r.jsonl"
    code, out, _ = run(capsys, "stress", "--n-max", "4", "--seeds", "3", "--strict", "--report", str(report))
    assert code == 0
    assert out["failures"] == 0 and out["fallbacks"] == 0
    assert len(report.read_text().splitlines()) == out["instances"]


def test_generated_wheels_round_trip():
    rng = random.Random(2)
    for _ in range(30):
        g, _ = make_generalized(random_wheel_spec(rng))
        inst = Instance(g)
        assert loads(dumps(inst)) == inst


def test_console_script_entry_point(tmp_path):
    f = write(tmp_path, "c5.json", Instance(cycle(5)))
    done = subprocess.run(
        [sys.executable, "-m", "girthwright.cli", "girths", f],
        capture_output=True, text=True, env={**os.environ, "GIRTHWRIGHT_NO_NUMBA": "1"},
    )
    assert done.returncode == 0
    assert set(json.loads(done.stdout)["girth"].values()) == {5}
