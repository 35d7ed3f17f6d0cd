"""Self-describing CSV output: headers, round trip, determinism."""

import numpy as np
import pytest

import bundlesim as bs


def test_round_trip_floats_and_strings(tmp_path):
    path = tmp_path / "out.csv"
    cols = {"tau": np.array([1.5, 2.5, 3.5]), "flag": ["", "x", "a,b"]}
    bs.write_csv(path, cols, params=bs.SystemParams(), seed=11,
                 meta={"kind": "demo", "n_events": 42})
    meta, back = bs.read_csv(path)
    assert np.array_equal(back["tau"], cols["tau"])
    assert back["flag"] == cols["flag"]
    assert meta["seed"] == "11"
    assert meta["kind"] == "demo"
    assert meta["n_events"] == "42"


def test_header_is_self_describing(tmp_path):
    path = tmp_path / "out.csv"
    p = bs.SystemParams(theta=np.pi / 6)
    bs.write_csv(path, {"x": np.array([0.0])}, params=p, seed=3)
    text = path.read_text(encoding="utf-8")
    head = [l for l in text.splitlines() if l.startswith("#")]
    assert head[0].startswith("# bundlesim ")
    assert any(l.startswith("# timestamp = ") for l in head)
    assert any(l == "# seed = 3" for l in head)
    # every model constant appears
    for key in p.as_dict():
        assert any(l.startswith(f"# param {key} = ") for l in head)


def test_deterministic_modulo_timestamp(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cols = {"v": np.linspace(0, 1, 7) / 3.0}
    for path in (a, b):
        bs.write_csv(path, cols, params=bs.SystemParams(), seed=1,
                     meta={"kind": "demo"})

    def strip_ts(p):
        return [l for l in p.read_text(encoding="utf-8").splitlines()
                if not l.startswith("# timestamp")]

    assert strip_ts(a) == strip_ts(b)


def test_timestamp_can_be_disabled(tmp_path):
    path = tmp_path / "out.csv"
    bs.write_csv(path, {"x": np.array([1.0])}, timestamp=False)
    assert "timestamp" not in path.read_text(encoding="utf-8")


def test_float_format_full_precision(tmp_path):
    path = tmp_path / "out.csv"
    val = 1.0 / 3.0
    bs.write_csv(path, {"x": np.array([val])})
    _, back = bs.read_csv(path)
    assert back["x"][0] == pytest.approx(val, rel=1e-11)


def test_mismatched_column_lengths_rejected(tmp_path):
    with pytest.raises(ValueError):
        bs.write_csv(tmp_path / "bad.csv",
                     {"a": np.array([1.0, 2.0]), "b": np.array([1.0])})


def test_empty_columns_rejected(tmp_path):
    with pytest.raises(ValueError):
        bs.write_csv(tmp_path / "bad.csv", {})


def test_bool_and_int_cells(tmp_path):
    path = tmp_path / "out.csv"
    bs.write_csv(path, {"ok": [True, False], "n": [3, 4]})
    text = path.read_text(encoding="utf-8")
    assert "true" in text and "false" in text
    _, back = bs.read_csv(path)
    assert back["n"][1] == 4
