"""Acceptance criteria, one test each, at the stated tolerances.

Each test records a PASS/FAIL line; the lines are printed at the end of the
pytest run (see conftest.py) and when this file is run as a script.
"""
import time

import numpy as np
import pytest

import oracles
from hillgreen import BCKind, GridSpec, IdentityId, Potential, Resonant, build_green, fundamental_pair
from hillgreen.greens import check_green_definition
from hillgreen.identities import (
    ALL_IDENTITIES,
    decomposition_residual,
    example_comparability,
    identity_sides,
    matrix_green_boundary_check,
    remark_residuals,
    sign_comparison_report,
)
from hillgreen.nonlinear import (
    PUBLISHED_CROSSOVER,
    PicardConfig,
    bound_constants,
    distance_bound_check,
    example_constants,
    example_kernels,
    example_spec,
    gamma,
    picard_solve,
    psi,
)
from hillgreen.spectral import dirichlet_gap_index, first_eigenvalue, ordering_check, sturm_report

RESULTS = {}
NODES = GridSpec(1001)
G101 = GridSpec(101)


def record(key, ok, detail):
    RESULTS[key] = f"[{'PASS' if ok else 'FAIL'}] {key}: {detail}"
    assert ok, RESULTS[key]


def _sampled():
    t = np.linspace(0.0, 1.0, 101)
    return Potential.sampled(t, -2.0 - np.sin(2 * np.pi * t))


def test_ac1_example_constants():
    t0 = time.perf_counter()
    v = example_constants()
    elapsed = time.perf_counter() - t0
    bad = []
    for key, ref in oracles.PUBLISHED.items():
        rel = abs(v[key] - ref) / ref
        if rel > 2e-3:
            bad.append(f"{key}={v[key]:.6g} vs {ref} (rel {rel:.2e})")
    ok = not bad and elapsed <= 10.0
    detail = f"{len(oracles.PUBLISHED) - len(bad)}/{len(oracles.PUBLISHED)} constants within 2e-3, {elapsed:.2f}s"
    if bad:
        detail += "; off: " + ", ".join(bad)
    record("AC1 example constants", ok, detail)


def test_ac2_identity_suite():
    t0 = time.perf_counter()
    worst = {}
    cases = [("a=-1", Potential.constant(-1.0), 1e-6), ("a=-4", Potential.constant(-4.0), 1e-6),
             ("sampled", _sampled(), 1e-5)]
    ok = True
    for label, pot, tol in cases:
        pair = fundamental_pair(pot, 0.0, NODES)
        for route in ("basis", "trace"):
            res = [decomposition_residual(i, pair, G101, route).max_abs_residual for i in ALL_IDENTITIES]
            worst[f"{label}/{route}"] = max(res)
            ok &= max(res) <= tol
    resonant = 0
    pair = fundamental_pair(Potential.constant(-1.0), 1.0 + np.pi**2, NODES)
    for ident in (IdentityId.P_from_D, IdentityId.N_from_D, IdentityId.M1_from_D, IdentityId.D_from_P):
        try:
            decomposition_residual(ident, pair, G101)
        except Resonant:
            resonant += 1
    elapsed = time.perf_counter() - t0
    ok = bool(ok and resonant == 4 and elapsed <= 60.0)
    w = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    record("AC2 identity residuals", ok, f"36 ids, worst {w}; Resonant raised {resonant}/4; {elapsed:.1f}s")


def test_ac3_definition_suite():
    pair = fundamental_pair(Potential.constant(-1.0), 0.0, NODES)
    worst_def, worst_mat = 0.0, 0.0
    for bc in BCKind:
        k = build_green(bc, pair)
        rep = check_green_definition(k, G101)
        worst_def = max(worst_def, rep.ode_residual, rep.boundary_residual, rep.jump_defect, rep.symmetry_defect)
        worst_mat = max(worst_mat, matrix_green_boundary_check(k)["deviation"])
    ok = worst_def <= 1e-6 and worst_mat <= 1e-6
    record("AC3 kernel definitions", ok, f"worst definition defect {worst_def:.1e}, matrix {worst_mat:.1e}")


def test_ac4_closed_form_oracles():
    T, S = np.meshgrid(G101.nodes, G101.nodes, indexing="ij")
    pair = fundamental_pair(Potential.constant(-1.0), 0.0, NODES)
    ed = np.abs(build_green("d", pair).value(T, S) - oracles.green_dirichlet_m1(T, S)).max()
    ep = np.abs(build_green("p", pair).value(T, S) - oracles.green_periodic_m1(T, S)).max()
    z = fundamental_pair(Potential.constant(0.0), 0.0, NODES)
    ez = np.abs(build_green("d", z).value(T, S) - oracles.green_dirichlet_zero(T, S)).max()
    ok = ed <= 1e-7 and ep <= 1e-7 and ez <= 1e-9
    record("AC4 closed-form kernels", ok, f"D {ed:.1e}, P {ep:.1e}, D(a=0) {ez:.1e}")


def test_ac5_spectral_suite():
    worst, flags_ok = 0.0, True
    for m in (0, 1, 2):
        pot = Potential.constant(-float(m * m))
        exact = oracles.eigen_constant(m)
        for bc in BCKind:
            worst = max(worst, abs(first_eigenvalue(bc, pot, grid=NODES) - exact[bc.value]))
        flags_ok &= ordering_check(pot, grid=NODES)["passed"]
    dirichlet = [((k + 1) * np.pi) ** 2 for k in range(5)]
    sturm_ok = True
    for n in (0, 1, 2):
        lam = 0.5 * ((dirichlet[n - 1] if n else -10.0) + dirichlet[n])
        rep = sturm_report(fundamental_pair(Potential.constant(0.0), lam, NODES))
        sturm_ok &= rep["zeros_r1"] == rep["zeros_r2"] == dirichlet_gap_index(lam, dirichlet) == n
    ok = bool(worst <= 1e-6 and flags_ok and sturm_ok)
    record("AC5 eigenvalues", ok, f"max error {worst:.1e}; orderings {flags_ok}; Sturm counts {sturm_ok}")


def test_ac6_sign_suite():
    pair = fundamental_pair(Potential.constant(-1.0), 0.0, NODES)
    rows = sign_comparison_report(pair, G101)
    held = sum(r["holds"] for r in rows)
    comp = {(c.m, c.upper): c for c in example_comparability(G101, NODES)}
    flip = lambda c: (not c.comparable) and c.min_gap < 0 < c.max_gap
    ex_ok = comp[(1.0, "M1")].comparable and flip(comp[(2.0, "M1")]) \
        and comp[(1.0, "M2")].comparable and flip(comp[(3.0, "M2")])
    ok = bool(held == 6 and ex_ok)
    record("AC6 sign comparisons", ok, f"{held}/6 orderings strict; comparability example {ex_ok}")


def test_ac7_nonlinear_bounds():
    cfg = PicardConfig()
    gd, gp = example_kernels(NODES)
    spec = example_spec(0.3)
    rates_ok = True
    for k in (gd, gp):
        res = picard_solve(k, spec, cfg)
        inc = np.array(res.increments)
        r = inc[1:] / inc[:-1]
        r = r[inc[:-1] > 1e-13]
        rates_ok &= res.converged and bool(np.all(r <= res.P + cfg.tol))
    rep = distance_bound_check(gd, gp, spec, cfg)
    v = example_constants(cfg, NODES)
    d = [psi(c, v) - gamma(c, v) for c in (0.1, PUBLISHED_CROSSOVER, 0.5)]
    cross_ok = d[0] < 0 < d[2] and abs(d[1]) <= 5e-3
    ok = bool(rates_ok and rep["within_bound"] and rep["norm_bracket"] and cross_ok)
    record("AC7 nonlinear bounds", ok,
           f"rates {rates_ok}; |u_D-u_P| {rep['measured_distance']:.4f} <= {rep['distance_bound']:.4f}; "
           f"bracket {rep['norm_bracket']}; psi-gamma at {PUBLISHED_CROSSOVER} = {d[1]:.2e}")


def test_ac8_property_suites():
    rng = np.random.default_rng(11)
    checks = {}
    pots = [Potential.closed_form("sin", c0, a1, 1.0) for c0, a1 in rng.uniform([-6, -1.5], [-0.5, 1.5], (5, 2))]
    checks["wronskian"] = max(fundamental_pair(p, 0.0, NODES).wronskian_defect for p in pots) <= 1e-10
    gd, gp = example_kernels(NODES)
    base = bound_constants(gd, gp, example_spec(1.0))
    sc = bound_constants(gd, gp, example_spec(0.37))
    checks["scaling"] = all(abs(getattr(sc, n) - 0.37 * getattr(base, n)) <= 1e-11 * abs(getattr(base, n))
                            for n in ("K1", "K2", "K3", "P", "Q"))
    lam0 = first_eigenvalue("periodic", pots[0], grid=NODES)
    lam1 = first_eigenvalue("periodic", pots[0].shifted(1.7), grid=NODES)
    checks["shift"] = abs(lam1 - (lam0 - 1.7)) <= 1e-7
    alt, rem = 0.0, 0.0
    for p in pots:
        pair = fundamental_pair(p, 0.0, NODES)
        _, a, _ = identity_sides(IdentityId.P_from_D, pair, G101)
        _, b, _ = identity_sides(IdentityId.P_from_D_alt, pair, G101)
        alt = max(alt, float(np.abs(a - b).max()))
        rem = max(rem, max(remark_residuals(pair, G101).values()))
    checks["P_from_D_alt"] = alt <= 2e-6
    checks["remarks"] = rem <= 1e-5
    ok = all(checks.values())
    record("AC8 properties", ok, ", ".join(f"{k} {'ok' if v else 'FAIL'}" for k, v in checks.items())
           + f" (alt gap {alt:.1e}, remarks {rem:.1e})")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
