import json
from math import lcm

import numpy as np
import pytest

from saddletower.config import Configuration, derive_residues, from_gaps, normalize_scale, theta2
from saddletower.engine import (
    SolveLog,
    SolveOptions,
    concavity_check,
    concatenate,
    detect_symmetries,
    embeddedness_check,
    genus0_solve,
    glue_config,
    glue_phase_scan,
    glue_series_leading,
    glue_slope,
    multistart_balance,
    newton_balance,
    profile_is_concave,
    random_embedded_theta,
    rigidity,
    symmetric_chain,
    tail_block,
)
from saddletower.errors import (
    BlockNotBalancedError,
    BlockNotNormalizedError,
    DegenerateQtildeError,
    NoConvergenceError,
    Theta2NonzeroError,
)
from saddletower.forces import force, layer_force_sum
from saddletower.poly.fp import fp_residual, fp_scale, polys_from_nodes
from saddletower.poly.hypergeom import four_end_config, n1_config
from saddletower.poly.lame import symmetric_block

FIG132 = ((1, 3, 2), [2, 1, 13 / 16], [0, -1 / 2, -27 / 16, -29 / 16])


# --- options --------------------------------------------------------------


def test_solve_options_defaults_and_validation():
    o = SolveOptions()
    assert (o.tol, o.max_iter, o.damping_floor, o.rank_rel_tol) == (1e-12, 100, 2**-20, 1e-8)
    with pytest.raises(ValueError):
        SolveOptions(tol=2.0)
    with pytest.raises(ValueError):
        SolveOptions(max_iter=0)


# --- Newton -----------------------------------------------------------------


def test_newton_recovers_roots_of_unity(rng):
    n = 5
    exact = four_end_config(n)
    seed = exact.with_nodes([exact.nodes[0] + 1e-2 * (rng.normal(size=n) + 1j * rng.normal(size=n))])
    log = SolveLog()
    out = newton_balance(seed, log_out=log)
    assert force(out).max_abs_force < 1e-12
    assert out.nodes[0][0] == seed.nodes[0][0]
    q = normalize_scale(out).nodes[0]
    np.testing.assert_allclose(q**n, 1, atol=1e-10)
    assert log.rows[0][0] == 0 and log.rows[-1][1] < 1e-12
    assert log.to_csv().startswith("iter,residual,step_norm\n")


def test_newton_theta2_gate():
    cfg = Configuration([2], [[1, -1]], [1, 1], [1, -3])
    assert theta2(cfg) != 0
    with pytest.raises(Theta2NonzeroError):
        newton_balance(cfg)


def test_newton_no_convergence_carries_best():
    cfg = four_end_config(4)
    seed = cfg.with_nodes([cfg.nodes[0] * np.array([1, 1.7, 0.4j, 2])])
    with pytest.raises(NoConvergenceError) as info:
        newton_balance(seed, SolveOptions(max_iter=1))
    assert isinstance(info.value.best, Configuration)
    assert info.value.history


def test_newton_fixed_point_zeroes_fp_residual(rng):
    layers, c, t0 = FIG132
    res = multistart_balance(layers, c, t0, seeds=10, method="newton")[0]
    cfg = res.config
    assert force(cfg).max_abs_force < 1e-9
    polys = polys_from_nodes(cfg.nodes)
    cc = derive_residues(cfg).inner
    R = fp_residual(polys, cc, cfg.left_gaps())
    assert R.norm() < 1e-10 * fp_scale(polys, cc, cfg.left_gaps())
    assert abs(np.sum(force(cfg).flat)) < 1e-12


@pytest.mark.parametrize("method", ["newton", "fp"])
def test_multistart_is_deterministic(method):
    layers, c, t0 = FIG132
    a = multistart_balance(layers, c, t0, seeds=6, seed=5, method=method)[0]
    b = multistart_balance(layers, c, t0, seeds=6, seed=5, method=method)[0]
    assert a.config == b.config and a.seed_index == b.seed_index


def test_multistart_bad_method():
    with pytest.raises(ValueError):
        multistart_balance([1], [1.0], [0, -1], method="magic")


def test_fig132_rotation_without_reflection():
    # several balanced (1,3,2) configurations exist; one is invariant under
    # q -> 1/q but not under the horizontal reflection q -> conj(q)
    layers, c, t0 = FIG132
    kinds = []
    for res in multistart_balance(layers, c, t0, seeds=20, method="fp", stop_after=4):
        cfg = res.config
        assert cfg.layers == layers and rigidity(cfg).rigid
        kinds.append({name for name, _ in detect_symmetries(cfg)})
    assert any("inversion" in k and "reflection_conj" not in k for k in kinds)


def test_detect_symmetries_on_real_configuration():
    names = {name for name, _ in detect_symmetries(n1_config(2, -1.5, 0.5))}
    assert {"inversion", "reflection_conj"} <= names


# --- rigidity -------------------------------------------------------------------


def test_rigidity_two_roots_of_unity():
    rep = rigidity(four_end_config(2))
    np.testing.assert_allclose(rep.singular_values, [1, 0], atol=1e-15)
    assert rep.numerical_rank == 1 and rep.rigid
    assert json.loads(rep.to_json()) == {"singular_values": [1.0, rep.singular_values[1]], "rank": 1, "rigid": True}


def test_rigidity_five_roots_of_unity():
    rep = rigidity(four_end_config(5))
    assert rep.numerical_rank == 4 and rep.rigid
    assert len(rep.singular_values) == 5
    assert np.all(np.diff(rep.singular_values) <= 0)


def test_rigidity_decoupled_columns():
    cfg = glue_config(2, 3, 1e-6, 0.3)
    rep = rigidity(cfg)
    assert rep.numerical_rank == cfg.N - 2
    assert not rep.rigid


def test_rigidity_scale_invariant(rng):
    cfg = n1_config(3, -2.5, 0.5)
    base = rigidity(cfg)
    for _ in range(5):
        lam = np.exp(rng.normal() + 1j * rng.uniform(-3, 3))
        rep = rigidity(cfg.with_nodes([lam * q for q in cfg.nodes]))
        assert rep.numerical_rank == base.numerical_rank and rep.rigid == base.rigid


# --- embeddedness ----------------------------------------------------------------


def test_embeddedness_examples():
    rep = embeddedness_check(Configuration([1, 1], [[1], [-1]], [1, 0, -1], [1, 0, -1]))
    assert rep.embedded
    rep = embeddedness_check(Configuration([1, 1], [[1], [-1]], [0, 0, -1], [1, 0, -1]))
    assert not rep.embedded and rep.first_violation_left == 1 and rep.first_violation_right is None


def test_concavity_profile():
    assert profile_is_concave(np.log(1 + np.arange(1, 8)))
    assert not profile_is_concave([1, 1, 1, 5, 1])


# --- genus 0 ---------------------------------------------------------------------


def test_genus0_example():
    cfg = genus0_solve([1, 0, -1], [1, 0, -1])
    np.testing.assert_allclose(cfg.flat_nodes, [1, -1])
    np.testing.assert_allclose(derive_residues(cfg).inner, [2, 2])
    assert force(cfg).max_abs_force < 1e-15


def test_genus0_single_layer():
    cfg = genus0_solve([1, -1], [1, -1])
    assert cfg.flat_nodes.tolist() == [1]


def test_genus0_theta2_and_degenerate():
    with pytest.raises(Theta2NonzeroError):
        genus0_solve([1, 0, -1], [2, 0, -2])
    # Qt_1 = c_1 (t_{2,0} + t_{1,inf}) = 0
    with pytest.raises(DegenerateQtildeError):
        genus0_solve([1, -1, 0], [1, -1, 0])


def test_genus0_random_embedded(rng):
    for L in range(1, 7):
        for _ in range(3):
            left, right = random_embedded_theta(L, rng)
            cfg = genus0_solve(left, right)
            assert embeddedness_check(cfg).embedded
            q = cfg.flat_nodes
            assert np.all(np.abs(q.imag) == 0)
            assert np.all(np.sign(q.real) == np.where(np.arange(L) % 2 == 0, 1, -1))
            assert rigidity(cfg).rigid


# --- concatenation ---------------------------------------------------------------


def test_concatenate_single_block_is_identity():
    b = symmetric_block(2, 1.5, 1.5)
    out = concatenate([b])
    np.testing.assert_allclose(out.theta_left, b.theta_left, atol=1e-14)
    np.testing.assert_allclose(out.theta_right, b.theta_right, atol=1e-14)
    for x, y in zip(out.nodes, b.nodes):
        np.testing.assert_allclose(x, y)


def test_concatenate_two_symmetric_blocks():
    b = symmetric_block(2, 1.5, 1.5)
    out = concatenate([b, b])
    assert out.layers == (1, 2, 1, 2, 1)
    assert force(out).max_abs_force < 1e-9
    for l in (0, 2, 4):
        assert out.nodes[l][0] == pytest.approx(1)


def test_concatenate_mixed_blocks_and_tail():
    blocks = [symmetric_block(2, 1.5, 1.5), symmetric_block(3, 1.2, 2.1), tail_block(2, -1.5, 0.5)]
    out = concatenate(blocks[:2])
    assert out.layers == (1, 2, 1, 3, 1) and force(out).max_abs_force < 1e-9
    with_tail = concatenate(blocks, tail=True)
    assert with_tail.layers == (1, 2, 1, 3, 1, 2)
    assert force(with_tail).max_abs_force < 1e-9


def test_concatenate_rejects_bad_blocks():
    b = symmetric_block(2, 1.5, 1.5)
    bad = b.with_nodes([b.nodes[0], b.nodes[1] * 1.01, b.nodes[2]])
    with pytest.raises(BlockNotBalancedError):
        concatenate([bad])
    with pytest.raises(BlockNotNormalizedError):
        concatenate([b.with_nodes([2 * q for q in b.nodes])])
    with pytest.raises(BlockNotNormalizedError):
        concatenate([n1_config(2, -1.5, 0.5)])


def test_symmetric_chain_log_profile():
    profile = np.log(1 + np.arange(1, 6))
    assert profile_is_concave(profile)
    cfg = symmetric_chain([2, 2], profile)
    nc = np.asarray(cfg.layers) * derive_residues(cfg).inner
    np.testing.assert_allclose(nc, profile, rtol=1e-12)
    assert force(cfg).max_abs_force < 1e-9
    assert concavity_check(cfg)


# --- glue scan -------------------------------------------------------------------


@pytest.mark.parametrize("n1,n2", [(1, 1), (2, 3), (2, 2)])
def test_glue_zeros(n1, n2):
    scan = glue_phase_scan(n1, n2, 0.1)
    mu = lcm(n1, n2)
    assert scan.zeros.size == 2 * mu
    assert np.all(scan.zero_offsets() <= np.pi / 200)
    lines = scan.to_csv().splitlines()
    assert lines[0] == "phi,im_G2" and len(lines) == 401


def test_glue_leading_term():
    for n1, n2 in [(1, 1), (2, 3), (2, 2)]:
        lam, phi = 0.01, 0.3
        G2 = layer_force_sum(force(glue_config(n1, n2, lam, phi)), 2)
        lead = glue_series_leading(n1, n2, lam, phi)
        assert abs(G2.imag - lead.imag) < 0.05 * abs(lead.imag)


def test_glue_slope():
    assert glue_slope(2, 2, phi=np.pi / 8) == pytest.approx(2.0, abs=0.1)
    for n1, n2 in [(1, 1), (2, 3)]:
        mu = lcm(n1, n2)
        assert abs(glue_slope(n1, n2) - mu) < 0.05 * mu


def test_glue_rejects_large_lambda():
    with pytest.raises(ValueError):
        glue_phase_scan(1, 1, 0.5)
