import numpy as np
import pytest

import oracles
from hillgreen import BCKind, EigenSearchConfig, GridSpec, NotFound, Potential, fundamental_pair
from hillgreen.spectral import (
    characteristic_value,
    count_zeros,
    dirichlet_gap_index,
    first_eigenvalue,
    ordering_check,
    slope_sign_check,
    sturm_report,
)

NODES = GridSpec(1001)


@pytest.mark.parametrize("m", [0, 1, 2])
@pytest.mark.parametrize("bc", list(BCKind))
def test_first_eigenvalue_constant(m, bc):
    lam = first_eigenvalue(bc, Potential.constant(-float(m * m)), grid=NODES)
    assert lam == pytest.approx(oracles.eigen_constant(m)[bc.value], abs=1e-6)


def test_characteristic_vanishes():
    pot = Potential.constant(-1.0)
    lam = first_eigenvalue("dirichlet", pot, grid=NODES)
    assert abs(characteristic_value("dirichlet", pot, lam, NODES)) < 1e-8


def test_not_found():
    cfg = EigenSearchConfig(-100.0, -50.0)
    with pytest.raises(NotFound):
        first_eigenvalue("dirichlet", Potential.constant(0.0), cfg, NODES)


def test_config_validation():
    with pytest.raises(ValueError):
        EigenSearchConfig(1.0, 0.0)


def test_ordering_sampled(sampled_potential):
    rep = ordering_check(sampled_potential, grid=NODES)
    assert rep["passed"], rep


def test_count_zeros():
    t = np.linspace(0, 1, 1001)
    assert count_zeros(np.sin(3 * np.pi * t)) == 2
    assert count_zeros(np.ones_like(t)) == 0


@pytest.mark.parametrize("n", [0, 1, 2])
def test_sturm_counts_zero_potential(n):
    dirichlet = [((k + 1) * np.pi) ** 2 for k in range(5)]
    lo = dirichlet[n - 1] if n else -10.0
    lam = 0.5 * (lo + dirichlet[n])
    assert dirichlet_gap_index(lam, dirichlet) == n
    rep = sturm_report(fundamental_pair(Potential.constant(0.0), lam, NODES))
    assert rep["zeros_r1"] == n and rep["zeros_r2"] == n


def test_slope_signs():
    pair = fundamental_pair(Potential.constant(-1.0), 0.0, NODES)
    rep = slope_sign_check(pair)
    assert rep["passed"] and rep["r2_slope_applies"] and rep["r1_slope_applies"]
