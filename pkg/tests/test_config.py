import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from saddletower.config import (
    Configuration,
    derive_residues,
    from_gaps,
    from_residues,
    normalize_scale,
    residue_relation_residuals,
    reverse_layers,
    theta1,
    theta2,
    validate,
)
from saddletower.errors import (
    ConsistencyFailure,
    DuplicateNodeError,
    ShapeMismatchError,
    Theta1NonzeroError,
    ValidationError,
    ZeroNodeError,
)

from .conftest import random_config


def test_validate_accepts_simple_config():
    validate(Configuration.from_flat([2], [[1, -1]], [1, -2, 2, -1]))


def test_validate_zero_node():
    with pytest.raises(ZeroNodeError):
        validate(Configuration.from_flat([2], [[1, 0]], [1, -2, 2, -1]))


def test_validate_duplicate_node():
    with pytest.raises(DuplicateNodeError):
        validate(Configuration.from_flat([2], [[1, 1 + 1e-15]], [1, -2, 2, -1]))


def test_validate_shape_mismatch():
    with pytest.raises(ShapeMismatchError):
        validate(Configuration([1], [[1]], [0, 0, 0], [0, 0]))
    with pytest.raises(ShapeMismatchError):
        validate(Configuration([2], [[1]], [0, 0], [0, 0]))


def test_errors_are_value_errors():
    assert issubclass(ZeroNodeError, ValidationError)
    assert issubclass(ValidationError, ValueError)


@pytest.mark.parametrize(
    "theta, expected",
    [((1, -2, 2, -1), 0.0), ((1, 1, 1, 1), 4.0), ((2, -1, 0, -1), 0.0)],
)
def test_theta1(theta, expected):
    assert theta1(Configuration.from_flat([1], [[1]], theta)) == expected


def test_flat_ordering_is_interleaved():
    cfg = Configuration.from_flat([1], [[1]], [1, -2, 2, -1])
    assert list(cfg.theta_left) == [1, 2]
    assert list(cfg.theta_right) == [-2, -1]
    assert list(cfg.theta_flat) == [1, -2, 2, -1]


def test_derive_residues_single_layer():
    c = derive_residues(Configuration.from_flat([1], [[1]], [1, -2, 2, -1]))
    assert list(c.c) == [0, -1, 0]
    assert c[1] == -1
    assert list(c.inner) == [-1]


def test_derive_residues_two_layers():
    cfg = Configuration([1, 1], [[1], [-1]], [1, 0, -1], [1, 0, -1])
    np.testing.assert_array_equal(derive_residues(cfg).inner, [2, 2])


def test_derive_residues_theta1_nonzero():
    with pytest.raises(Theta1NonzeroError):
        derive_residues(Configuration.from_flat([1], [[1]], [1, 1, 1, 1]))


def test_theta2_formula():
    cfg = Configuration([1, 1], [[1], [-1]], [1, 0, -1], [2, 0, -2])
    assert theta2(cfg) == pytest.approx(0.5 * ((4 + 0 + 4) - (1 + 0 + 1)))


def test_residue_relations_hold_on_random_configs(rng):
    for _ in range(50):
        cfg = random_config(rng)
        res = residue_relation_residuals(cfg, derive_residues(cfg))
        assert np.max(np.abs(res)) < 1e-12 * (1 + np.max(np.abs(cfg.theta_flat)))


@pytest.mark.parametrize(
    "nodes, expected",
    [([[2, -2]], [[1, -1]]), ([[1j]], [[1]]), ([[1, -1]], [[1, -1]])],
)
def test_normalize_scale(nodes, expected):
    n = len(nodes[0])
    cfg = Configuration([n], nodes, [0, 0], [0, 0])
    out = normalize_scale(cfg)
    np.testing.assert_allclose(out.nodes[0], expected[0])
    assert out.layers == cfg.layers
    np.testing.assert_array_equal(out.theta_left, cfg.theta_left)


def test_normalize_scale_idempotent(rng):
    for _ in range(20):
        cfg = normalize_scale(random_config(rng))
        assert normalize_scale(cfg) == cfg


def test_from_residues_roundtrip(rng):
    for _ in range(20):
        cfg = random_config(rng)
        c = derive_residues(cfg).inner
        rebuilt = from_residues(cfg.layers, cfg.nodes, c, cfg.theta_left)
        np.testing.assert_allclose(rebuilt.theta_right, cfg.theta_right, atol=1e-12)
        rebuilt2 = from_gaps(cfg.layers, cfg.nodes, c, cfg.left_gaps(), theta0=cfg.theta_left[0])
        np.testing.assert_allclose(rebuilt2.theta_left, cfg.theta_left, atol=1e-12)
        assert abs(theta1(rebuilt)) < 1e-12


def test_reverse_layers_involution(rng):
    cfg = random_config(rng)
    assert reverse_layers(reverse_layers(cfg)) == cfg
    rev = reverse_layers(cfg)
    np.testing.assert_allclose(derive_residues(rev).inner, derive_residues(cfg).inner[::-1], atol=1e-12)


def test_json_roundtrip_bit_exact(rng):
    for _ in range(20):
        cfg = random_config(rng)
        assert Configuration.from_json(cfg.to_json()) == cfg


def test_json_schema():
    cfg = Configuration([1], [[1 + 2j]], [1, 2], [-2, -1])
    doc = json.loads(cfg.to_json())
    assert doc == {"layers": [1], "nodes": [[[1.0, 2.0]]], "theta_dot": {"left": [1.0, 2.0], "right": [-2.0, -1.0]}}


@pytest.mark.parametrize("text", ["{", "[]", '{"layers": [1]}', '{"layers":[1],"nodes":[[[1]]],"theta_dot":{}}'])
def test_json_malformed(text):
    with pytest.raises(ValidationError):
        Configuration.from_json(text)


finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=5), st.lists(finite, min_size=4, max_size=4))
def test_json_roundtrip_property(pts, theta):
    cfg = Configuration.from_flat([len(pts)], [[complex(a, b) for a, b in pts]], theta)
    assert Configuration.from_json(cfg.to_json()) == cfg


@settings(max_examples=50, deadline=None)
@given(st.floats(0.1, 10), st.floats(-np.pi, np.pi))
def test_validate_after_normalize(r, a):
    cfg = Configuration([2], [[r * np.exp(1j * a), -r * np.exp(1j * a)]], [0, 0], [0, 0])
    validate(cfg)
    validate(normalize_scale(cfg))


def test_consistency_failure_is_not_user_error():
    assert not issubclass(ConsistencyFailure, ValidationError)
