"""First eigenvalues, zero counts and slope signs of the basis functions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import NotFound
from .greens import BasisKind, BCKind, basis_solution
from .ode_core import endpoint_values


@dataclass(frozen=True)
class EigenSearchConfig:
    lambda_min: float = -100.0
    lambda_max: float = 150.0
    scan_step: float = 0.25
    bisection_tol: float = 1e-9
    # |Delta - 2| below this at a scan minimum counts as a periodic tangency
    tangency_tol: float = 1e-8

    def __post_init__(self):
        if not self.lambda_min < self.lambda_max:
            raise ValueError("lambda_min must be below lambda_max")
        if not 0 < self.scan_step < self.lambda_max - self.lambda_min:
            raise ValueError("scan_step must be positive and smaller than the window")
        if not self.bisection_tol > 0:
            raise ValueError("bisection_tol must be positive")

    def scan_points(self):
        n = int(np.floor((self.lambda_max - self.lambda_min) / self.scan_step + 1e-9)) + 1
        pts = self.lambda_min + self.scan_step * np.arange(n)
        if pts[-1] < self.lambda_max:
            pts = np.append(pts, self.lambda_max)
        return pts


def _char_from_ends(bc, ends):
    p1, dp1, p2, dp2 = (ends[..., k] for k in range(4))
    bc = BCKind.parse(bc)
    if bc is BCKind.DIRICHLET:
        return p2
    if bc is BCKind.NEUMANN:
        return dp1
    if bc is BCKind.MIXED1:
        return p1
    if bc is BCKind.MIXED2:
        return dp2
    return p1 + dp2 - 2.0


def characteristic_value(bc, potential, lam, grid=None):
    """Scalar that vanishes exactly when lam is an eigenvalue of the bc problem."""
    return float(_char_from_ends(bc, endpoint_values(potential, [lam], grid))[0])


def characteristic_values(bc, potential, lams, grid=None):
    return _char_from_ends(bc, endpoint_values(potential, lams, grid))


def first_eigenvalue(bc, potential, cfg=None, grid=None):
    """Smallest root of the characteristic function in the search window."""
    cfg = cfg or EigenSearchConfig()
    bc = BCKind.parse(bc)
    lams = cfg.scan_points()
    vals = characteristic_values(bc, potential, lams, grid)
    f = lambda x: characteristic_value(bc, potential, x, grid)
    for i in range(len(lams)):
        if vals[i] == 0.0:
            return float(lams[i])
        if i and np.sign(vals[i]) != np.sign(vals[i - 1]):
            return float(brentq(f, lams[i - 1], lams[i], xtol=cfg.bisection_tol, rtol=4 * np.finfo(float).eps))
    if bc is BCKind.PERIODIC:
        root = _periodic_tangency(potential, lams, vals, cfg, grid)
        if root is not None:
            return root
    raise NotFound(f"no {bc.value} eigenvalue in [{cfg.lambda_min}, {cfg.lambda_max}]")


def _periodic_tangency(potential, lams, vals, cfg, grid):
    """Delta may touch 2 without crossing; refine local minima of |Delta - 2|."""
    mag = np.abs(vals)
    idx = [i for i in range(1, len(lams) - 1) if mag[i] <= mag[i - 1] and mag[i] <= mag[i + 1]]
    g = lambda x: abs(characteristic_value(BCKind.PERIODIC, potential, x, grid))
    for i in idx:
        res = minimize_scalar(g, bracket=(lams[i - 1], lams[i], lams[i + 1]), method="golden",
                              tol=cfg.bisection_tol)
        if res.fun <= cfg.tangency_tol:
            return float(res.x)
    return None


def count_zeros(traj):
    """Zeros of u over the interior nodes.

    A run of exact zeros counts once; otherwise each pair of neighbouring
    nodes with opposite signs brackets one zero.
    """
    u = np.asarray(traj.u if hasattr(traj, "u") else traj, dtype=float)[1:-1]
    sg = np.sign(u)
    count = 0
    prev = None
    for v in sg:
        if v == 0:
            if prev != 0:
                count += 1
        elif prev is not None and prev != 0 and v != prev:
            count += 1
        prev = v
    return count


def first_eigenvalues(potential, cfg=None, grid=None):
    return {bc.value: first_eigenvalue(bc, potential, cfg, grid) for bc in BCKind}


def ordering_check(potential, cfg=None, grid=None):
    """First eigenvalues of all five problems and the orderings between them."""
    cfg = cfg or EigenSearchConfig()
    lam = first_eigenvalues(potential, cfg, grid)
    slack = 2 * cfg.bisection_tol
    n, p, d = lam["neumann"], lam["periodic"], lam["dirichlet"]
    m1, m2 = lam["mixed1"], lam["mixed2"]
    flags = {
        "N<=P<D": bool(n <= p + slack and p < d),
        "N<M1<D": bool(n < m1 < d),
        "N<M2<D": bool(n < m2 < d),
    }
    return {"lambda0": lam, "flags": flags, "passed": all(flags.values())}


def slope_sign_check(pair, lambda0_m1=None, lambda0_m2=None, cfg=None):
    """r2'(1) > 0 below the first Mixed2 eigenvalue, r1'(0) < 0 below the first Mixed1 one."""
    lam = pair.lam
    if lambda0_m1 is None:
        lambda0_m1 = first_eigenvalue(BCKind.MIXED1, pair.potential, cfg, pair.grid)
    if lambda0_m2 is None:
        lambda0_m2 = first_eigenvalue(BCKind.MIXED2, pair.potential, cfg, pair.grid)
    r1 = basis_solution(BasisKind.R1, pair)
    r2 = basis_solution(BasisKind.R2, pair)
    dr2_1 = float(r2.du[-1])
    dr1_0 = float(r1.du[0])
    app2 = lam < lambda0_m2
    app1 = lam < lambda0_m1
    out = {
        "lambda": lam,
        "dr2_at_1": dr2_1,
        "dr1_at_0": dr1_0,
        "lambda0_mixed1": lambda0_m1,
        "lambda0_mixed2": lambda0_m2,
        "r2_slope_applies": app2,
        "r1_slope_applies": app1,
        "r2_slope_positive": dr2_1 > 0,
        "r1_slope_negative": dr1_0 < 0,
    }
    out["passed"] = (not app2 or dr2_1 > 0) and (not app1 or dr1_0 < 0)
    return out


def dirichlet_gap_index(lam, eigenvalues):
    """n such that lam lies in (lambda_{n-1}, lambda_n) for sorted Dirichlet eigenvalues."""
    return int(np.searchsorted(np.asarray(eigenvalues), lam))


def sturm_report(pair):
    """Zero counts of r1, r2 and the sign of r1'(1)."""
    r1 = basis_solution(BasisKind.R1, pair)
    r2 = basis_solution(BasisKind.R2, pair)
    return {
        "lambda": pair.lam,
        "zeros_r1": count_zeros(r1),
        "zeros_r2": count_zeros(r2),
        "dr1_at_1": float(r1.du[-1]),
    }
