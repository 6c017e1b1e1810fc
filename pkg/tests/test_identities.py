import numpy as np
import pytest

from hillgreen import (
    BCKind,
    GridSpec,
    IdentityId,
    Potential,
    Resonant,
    build_green,
    decomposition_residual,
    fundamental_pair,
    matrix_green_boundary_check,
    remark_residuals,
    sign_comparison_report,
)
from hillgreen.identities import ALL_IDENTITIES, example_comparability, residual_or_status


def test_identity_count():
    assert len(ALL_IDENTITIES) == 36
    assert len({i.value for i in IdentityId}) == 36


@pytest.mark.parametrize("route", ["basis", "trace"])
@pytest.mark.parametrize("ident", ALL_IDENTITIES, ids=lambda i: i.value)
def test_residual_constant(pair_m1, grid101, ident, route):
    rep = decomposition_residual(ident, pair_m1, grid101, route)
    assert rep.passed(1e-8), rep.to_dict()


def test_report_json_keys(pair_m1, grid101):
    d = decomposition_residual(IdentityId.P_from_D, pair_m1, grid101).to_dict(1e-6)
    assert {"identity", "residual", "argmax", "nondegeneracy", "status", "passed"} <= set(d)


def test_resonant_at_dirichlet_eigenvalue(grid101):
    lam = 1.0 + np.pi**2
    pair = fundamental_pair(Potential.constant(-1.0), lam, GridSpec(1001))
    with pytest.raises(Resonant):
        decomposition_residual(IdentityId.P_from_D, pair, grid101)
    rep = residual_or_status(IdentityId.P_from_D, pair, grid101)
    assert rep.status == "resonant" and not rep.passed(1e-6)


@pytest.mark.parametrize("bc", list(BCKind))
def test_matrix_boundary(pair_m1, bc):
    assert matrix_green_boundary_check(build_green(bc, pair_m1))["deviation"] <= 1e-10


def test_sign_orderings(pair_m1, grid101):
    rows = sign_comparison_report(pair_m1, grid101)
    assert len(rows) == 6
    assert all(r["holds"] for r in rows), rows


def test_example_comparability(grid101):
    rows = {(c.m, f"{c.lower} vs {c.upper}"): c for c in example_comparability(grid101, GridSpec(1001))}
    assert rows[(1.0, "P vs M1")].comparable
    assert rows[(1.0, "P vs M2")].comparable
    c2 = rows[(2.0, "P vs M1")]
    assert not c2.comparable and c2.min_gap < 0 < c2.max_gap
    c3 = rows[(3.0, "P vs M2")]
    assert not c3.comparable and c3.min_gap < 0 < c3.max_gap


def test_remarks(pair_m1, grid101):
    out = remark_residuals(pair_m1, grid101)
    assert max(out.values()) < 1e-10
