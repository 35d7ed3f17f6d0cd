"""Flat config parsing: fail-closed behavior and value forms."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import bundlesim as bs
from bundlesim.config import ConfigError, parse_config


def test_minimal_document_fills_defaults():
    cfg = parse_config("omega_q = 5\n")
    assert cfg.params.omega_q == 5.0
    assert cfg.params.n_max == 20
    assert cfg.params.kappa == 2e-3
    assert cfg.seed == 1
    assert cfg.threads == 1
    assert cfg.auto_resonance is True
    assert cfg.kind is None


def test_comments_and_blank_lines_ignored():
    text = "\n# a comment\nomega_q = 4.5\n\n   # indented comment\nkappa = 0.01\n"
    cfg = parse_config(text)
    assert cfg.params.omega_q == 4.5
    assert cfg.params.kappa == 0.01


def test_pi_forms():
    assert parse_config("theta = pi/2\n").params.theta == pytest.approx(np.pi / 2)
    assert parse_config("theta = pi/6\n").params.theta == pytest.approx(np.pi / 6)
    assert parse_config("theta = 0.5*pi\n").params.theta == pytest.approx(np.pi / 2)
    assert parse_config("theta = pi\n").params.theta == pytest.approx(np.pi)
    assert parse_config("theta = 2*pi/3\n").params.theta == pytest.approx(
        2 * np.pi / 3)


def test_array_forms():
    cfg = parse_config("dq_grid = 1.9,2.0,2.1\n")
    assert np.allclose(cfg.dq_grid, [1.9, 2.0, 2.1])
    cfg = parse_config("dq_grid = 0.5:4.5:81\n")
    assert cfg.dq_grid.size == 81
    assert cfg.dq_grid[0] == 0.5
    assert cfg.dq_grid[-1] == 4.5
    cfg = parse_config("tau_grid = 500\n")
    assert np.allclose(cfg.tau_grid, [500.0])
    cfg = parse_config("theta_grid = pi/6,pi/4,pi/3,pi/2\n")
    assert np.allclose(cfg.theta_grid,
                       [np.pi / 6, np.pi / 4, np.pi / 3, np.pi / 2])


def test_negative_rate_is_rejected_by_name():
    with pytest.raises(ConfigError, match="kappa"):
        parse_config("kappa = -0.001\n")


def test_unknown_key_is_rejected_by_name_and_line():
    with pytest.raises(ConfigError, match="kapa"):
        parse_config("omega_q = 5\nkapa = 0.1\n")
    with pytest.raises(ConfigError, match="line 2"):
        parse_config("omega_q = 5\nkapa = 0.1\n")


def test_duplicate_key_rejected():
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config("kappa = 0.1\nkappa = 0.2\n")


def test_missing_equals_rejected():
    with pytest.raises(ConfigError, match="key = value"):
        parse_config("kappa 0.1\n")


def test_bad_number_rejected():
    with pytest.raises(ConfigError, match="omega_q"):
        parse_config("omega_q = fast\n")
    with pytest.raises(ConfigError, match="n_max"):
        parse_config("n_max = 2.5\n")


def test_kind_validation():
    cfg = parse_config("kind = spectrum\n")
    assert cfg.kind == "spectrum"
    with pytest.raises(ConfigError, match="kind"):
        parse_config("kind = espectro\n")


def test_sweep_variable_validation():
    assert parse_config("sweep_variable = theta\n").sweep_variable == "theta"
    with pytest.raises(ConfigError, match="sweep_variable"):
        parse_config("sweep_variable = n_max\n")


def test_empty_grid_rejected():
    with pytest.raises(ConfigError, match="dq_grid"):
        parse_config("dq_grid =\n")


def test_bool_forms():
    for raw, expect in (("true", True), ("off", False), ("1", True),
                        ("no", False)):
        assert parse_config(f"auto_resonance = {raw}\n").auto_resonance is expect
    with pytest.raises(ConfigError):
        parse_config("auto_resonance = maybe\n")


def test_replace_returns_updated_copy():
    cfg = parse_config("kind = rabi\nseed = 3\n")
    cfg2 = cfg.replace(seed=9)
    assert cfg2.seed == 9
    assert cfg.seed == 3
    assert cfg2.kind == "rabi"


@given(omega_q=st.floats(0.1, 50, allow_nan=False),
       kappa=st.floats(1e-6, 1.0),
       n_max=st.integers(1, 40),
       seed=st.integers(0, 2 ** 31))
@settings(max_examples=50, deadline=None)
def test_round_trip_through_text(omega_q, kappa, n_max, seed):
    text = (f"omega_q = {omega_q!r}\nkappa = {kappa!r}\n"
            f"n_max = {n_max}\nseed = {seed}\n")
    cfg = parse_config(text)
    assert cfg.params.omega_q == omega_q
    assert cfg.params.kappa == kappa
    assert cfg.params.n_max == n_max
    assert cfg.seed == seed
