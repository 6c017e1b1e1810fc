import numpy as np
import pytest

import oracles
from hillgreen import (
    BCKind,
    GridSpec,
    HypothesisViolated,
    NotContractive,
    PicardConfig,
    Potential,
    bound_constants,
    build_green,
    distance_bound_check,
    fundamental_pair,
    picard_solve,
)
from hillgreen.nonlinear import (
    constant_forcing_spec,
    contraction_constants,
    example_constants,
    example_kernels,
    example_spec,
    split_rule,
)


@pytest.fixture(scope="module")
def constants():
    return example_constants()


@pytest.mark.parametrize("key", ["P_P", "Q_P", "P_D", "Q_D", "K2", "K3", "threshold"])
def test_constants_match_quadrature_oracle(constants, key):
    assert constants[key] == pytest.approx(oracles.QUAD_CONSTANTS[key], rel=1e-7)


def test_k1_equals_periodic_contraction(constants):
    assert constants["K1"] == pytest.approx(constants["P_P"], rel=1e-12)


def test_dirichlet_ratio_is_fixed(constants):
    # K is a constant multiple of f(., 0) and G_D keeps one sign
    assert constants["P_D"] / constants["Q_D"] == pytest.approx(np.sqrt(2 / np.e), rel=1e-9)


def test_split_rule_integrates_singular_weight():
    cfg = PicardConfig()
    t = np.array([0.0, 0.3, 1.0])
    s, w = split_rule(t, cfg, True)
    s = np.broadcast_to(s, w.shape)
    # zero-width pieces carry zero weight, possibly at s = 0
    vals = np.divide(w, np.sqrt(s), out=np.zeros_like(w), where=w != 0)
    approx = vals.sum(axis=-1)
    assert np.allclose(approx, 2.0, atol=1e-10)


def test_lipschitz_weight_valid():
    assert example_spec(0.3).lipschitz_defect(n=2000) <= 1e-12


def test_linear_forcing_solution(pair_zero):
    k = build_green("dirichlet", pair_zero)
    res = picard_solve(k, constant_forcing_spec(1.0))
    exact = 0.5 * (res.t**2 - res.t)
    assert np.max(np.abs(res.u - exact)) < 1e-12
    assert res.iterations == 1


def test_picard_rate_bounded_by_P():
    gd, gp = example_kernels()
    spec = example_spec(0.3)
    for k in (gd, gp):
        res = picard_solve(k, spec)
        inc = np.array(res.increments)
        ratios = inc[1:] / inc[:-1]
        ratios = ratios[inc[:-1] > 1e-13]
        assert res.converged
        assert np.all(ratios <= res.P + 1e-10)
        assert res.sup_norm <= res.bound


def test_not_contractive():
    _, gp = example_kernels()
    with pytest.raises(NotContractive):
        picard_solve(gp, example_spec(0.6))


def test_hypothesis_violated():
    gd, gp = example_kernels()
    with pytest.raises(HypothesisViolated):
        distance_bound_check(gd, gp, example_spec(0.6))


def test_distance_check_passes():
    gd, gp = example_kernels()
    rep = distance_bound_check(gd, gp, example_spec(0.3))
    assert rep["passed"], rep
    assert rep["norm_b_lower"] <= rep["norm_u_b"] <= rep["norm_b_upper"]


def test_bound_constants_scale(constants):
    gd, gp = example_kernels()
    k1 = bound_constants(gd, gp, example_spec(1.0))
    k3 = bound_constants(gd, gp, example_spec(0.3))
    assert k3.K1 == pytest.approx(0.3 * k1.K1, rel=1e-12)
    assert k3.K3 == pytest.approx(0.3 * k1.K3, rel=1e-12)
    assert k1.scaled(0.3).P == pytest.approx(k3.P, rel=1e-12)


def test_nonsingular_contraction_oracle():
    # f = c u has P = sup_t int |G(t, s)| ds; for a = -1 Dirichlet that is (1 - 1/cosh(1/2))
    pair = fundamental_pair(Potential.constant(-1.0), 0.0, GridSpec(1001))
    k = build_green(BCKind.DIRICHLET, pair)
    spec = constant_forcing_spec(1.0)
    spec = spec.__class__(f=lambda t, u: u, lipschitz_weight=lambda t: np.ones_like(t),
                          f_at_zero=lambda t: np.zeros_like(t))
    P, Q, _ = contraction_constants(k, spec, PicardConfig())
    assert P == pytest.approx(1 - 1 / np.cosh(0.5), rel=1e-9)
    assert Q == 0.0
