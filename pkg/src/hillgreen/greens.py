"""Green's kernels of u'' + (a + lam) u = sigma under five boundary conditions.

Every kernel is stored as

    G(t, s) = c1(s) phi1(t) + c2(s) phi2(t) + H(t - s) k(t, s),
    k(t, s) = phi2(t) phi1(s) - phi1(t) phi2(s),

with (c1, c2)(s) = N (phi1(s), phi2(s)) for a constant 2x2 matrix N fixed by
the boundary conditions. Partial derivatives follow by differentiating the
fundamental pair, so nothing here is finite-differenced.

Boundary conditions are written as B x(0) + C x(1) = 0 with x = (u, u').
The same (B, C) rows, set equal to a unit vector instead of zero, define the
basis solutions r1..r10.
"""
from __future__ import annotations

import csv
import enum
from dataclasses import dataclass

import numpy as np

from .errors import OutOfDomain, Resonant
from .ode_core import GridSpec

RESONANCE_RTOL = 1e-9
DOMAIN_SLACK = 1e-12


class BCKind(str, enum.Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"
    PERIODIC = "periodic"
    MIXED1 = "mixed1"  # u'(0) = u(1) = 0
    MIXED2 = "mixed2"  # u(0) = u'(1) = 0

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower()
        aliases = {"d": "dirichlet", "n": "neumann", "p": "periodic", "m1": "mixed1", "m2": "mixed2"}
        try:
            return cls(aliases.get(key, key))
        except ValueError:
            raise ValueError(f"unknown boundary condition {name!r}") from None

    @property
    def short(self):
        return {"dirichlet": "D", "neumann": "N", "periodic": "P", "mixed1": "M1", "mixed2": "M2"}[self.value]


_E = np.eye(2)
_Z = np.zeros((2, 2))

BC_MATRICES = {
    BCKind.NEUMANN: (np.array([[0.0, 1.0], [0.0, 0.0]]), np.array([[0.0, 0.0], [0.0, 1.0]])),
    BCKind.DIRICHLET: (np.array([[1.0, 0.0], [0.0, 0.0]]), np.array([[0.0, 0.0], [1.0, 0.0]])),
    BCKind.MIXED1: (np.array([[0.0, 1.0], [0.0, 0.0]]), np.array([[0.0, 0.0], [1.0, 0.0]])),
    BCKind.MIXED2: (np.array([[1.0, 0.0], [0.0, 0.0]]), np.array([[0.0, 0.0], [0.0, 1.0]])),
    BCKind.PERIODIC: (_E.copy(), -_E),
}


class BasisKind(str, enum.Enum):
    R1 = "r1"
    R2 = "r2"
    R3 = "r3"
    R4 = "r4"
    R5 = "r5"
    R6 = "r6"
    R7 = "r7"
    R8 = "r8"
    R9 = "r9"
    R10 = "r10"

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        if isinstance(name, (int, np.integer)):
            return cls(f"r{int(name)}")
        return cls(str(name).strip().lower())

    @property
    def index(self):
        return int(self.value[1:])

    @property
    def bc(self):
        """The boundary condition whose functionals define this basis function."""
        return _BASIS_BC[(self.index - 1) // 2]

    @property
    def rhs(self):
        """Unit data imposed on the (B, C) functionals."""
        return _E[(self.index - 1) % 2]


_BASIS_BC = (BCKind.DIRICHLET, BCKind.PERIODIC, BCKind.NEUMANN, BCKind.MIXED2, BCKind.MIXED1)


def boundary_matrix(bc, pair):
    """M = B + C Phi(1), the matrix of the boundary functionals on (phi1, phi2)."""
    B, C = BC_MATRICES[BCKind.parse(bc)]
    p1, dp1, p2, dp2 = pair.end
    phi_end = np.array([[p1, p2], [dp1, dp2]])
    return B + C @ phi_end


def resonance_threshold(pair):
    return RESONANCE_RTOL * (1.0 + pair.scale)


def _checked_matrix(bc, pair, what):
    M = boundary_matrix(bc, pair)
    det = float(np.linalg.det(M))
    thr = resonance_threshold(pair)
    if not abs(det) >= thr:
        raise Resonant(what, det, thr)
    return M, det


def basis_solution(kind, pair):
    """The basis function r_i as a Trajectory on the pair's grid."""
    kind = BasisKind.parse(kind)
    M, _ = _checked_matrix(kind.bc, pair, f"{kind.value} ({kind.bc.value} data)")
    alpha, beta = np.linalg.solve(M, kind.rhs)
    return pair.phi1.combine(alpha, pair.phi2, beta)


def basis_coefficients(kind, pair):
    kind = BasisKind.parse(kind)
    M, _ = _checked_matrix(kind.bc, pair, f"{kind.value} ({kind.bc.value} data)")
    return np.linalg.solve(M, kind.rhs)


_SIDES = ("lower", "upper")


def _step(t, s, side):
    """Unit step H(t - s); on the diagonal the side picks the limit."""
    if side not in _SIDES:
        raise ValueError(f"side must be one of {_SIDES}, got {side!r}")
    on_diag = 1.0 if side == "upper" else 0.0
    return np.where(t > s, 1.0, np.where(t < s, 0.0, on_diag))


def _check_domain(*xs):
    for x in xs:
        x = np.asarray(x, dtype=float)
        if x.size and (not np.all(np.isfinite(x)) or x.min() < -DOMAIN_SLACK or x.max() > 1.0 + DOMAIN_SLACK):
            raise OutOfDomain("arguments must lie in [0, 1]")


@dataclass(frozen=True, eq=False)
class GreenKernel:
    bc: BCKind
    pair: object
    N: np.ndarray
    det: float

    @property
    def detBC(self):
        return self.det

    def coefficients(self, s):
        """c1(s), c2(s)."""
        a, _, b, _ = self.pair(s)
        return self.N[0, 0] * a + self.N[0, 1] * b, self.N[1, 0] * a + self.N[1, 1] * b

    def coefficient_derivatives(self, s):
        _, da, _, db = self.pair(s)
        return self.N[0, 0] * da + self.N[0, 1] * db, self.N[1, 0] * da + self.N[1, 1] * db

    def _parts(self, t, s):
        t, s = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(s, dtype=float))
        ft = self.pair(t)
        fs = self.pair(s)
        return t, s, ft, fs

    def value(self, t, s):
        t, s, (a, _, b, _), (as_, das, bs, dbs) = self._parts(t, s)
        c1 = self.N[0, 0] * as_ + self.N[0, 1] * bs
        c2 = self.N[1, 0] * as_ + self.N[1, 1] * bs
        k = b * as_ - a * bs
        return c1 * a + c2 * b + np.where(t > s, k, 0.0)

    def partials(self, t, s, side=None):
        """(dG/dt, dG/ds, d2G/dtds) with the diagonal convention of ``green_partials``."""
        t, s, (a, da, b, db), (as_, das, bs, dbs) = self._parts(t, s)
        N = self.N
        c1 = N[0, 0] * as_ + N[0, 1] * bs
        c2 = N[1, 0] * as_ + N[1, 1] * bs
        e1 = N[0, 0] * das + N[0, 1] * dbs
        e2 = N[1, 0] * das + N[1, 1] * dbs
        h_t = _step(t, s, side or "lower")
        h_s = _step(t, s, side or "upper")
        h_ts = _step(t, s, side or "lower")
        dt = c1 * da + c2 * db + h_t * (db * as_ - da * bs)
        ds = e1 * a + e2 * b + h_s * (b * das - a * dbs)
        dts = e1 * da + e2 * db + h_ts * (db * das - da * dbs)
        return dt, ds, dts

    def dt(self, t, s, side="lower"):
        return self.partials(t, s, side)[0]

    def ds(self, t, s, side="upper"):
        return self.partials(t, s, side)[1]

    def dts(self, t, s, side="lower"):
        return self.partials(t, s, side)[2]

    def trace_t(self, t0, s, derivative=False):
        """G(t0, s) or dG/dt(t0, s) as a function of s, for t0 in {0, 1}.

        The side is the one interior to the square: t0 = 0 sits below the
        diagonal and t0 = 1 above it.
        """
        side = "lower" if t0 == 0 else "upper"
        if derivative:
            return self.dt(t0, s, side)
        return self.value(t0, s)

    def trace_s(self, t, s0, derivative=False):
        """G(t, s0) or dG/ds(t, s0) as a function of t, for s0 in {0, 1}."""
        side = "upper" if s0 == 0 else "lower"
        if derivative:
            return self.ds(t, s0, side)
        return self.value(t, s0)

    def table(self, grid):
        """Values and first partials on grid x grid (row-major in t)."""
        x = grid.nodes if isinstance(grid, GridSpec) else np.asarray(grid, dtype=float)
        T, S = np.meshgrid(x, x, indexing="ij")
        dt, ds, _ = self.partials(T, S)
        return T, S, self.value(T, S), dt, ds


def build_green(bc, pair):
    bc = BCKind.parse(bc)
    M, det = _checked_matrix(bc, pair, f"{bc.value} problem")
    _, C = BC_MATRICES[bc]
    p1, dp1, p2, dp2 = pair.end
    K = np.array([[p2, -p1], [dp2, -dp1]])
    N = -np.linalg.solve(M, C @ K)
    N.setflags(write=False)
    return GreenKernel(bc, pair, N, det)


def eval_green(kernel, t, s):
    _check_domain(t, s)
    out = kernel.value(t, s)
    return float(out) if np.ndim(out) == 0 else out


def green_partials(kernel, t, s, side=None):
    """dG/dt, dG/ds, d2G/dtds at (t, s).

    On the diagonal the default takes t -> s- for dG/dt and d2G/dtds and
    s -> t- for dG/ds; ``side="lower"`` or ``"upper"`` forces one limit
    for all three.
    """
    _check_domain(t, s)
    out = kernel.partials(t, s, side)
    if np.ndim(out[0]) == 0:
        return tuple(float(v) for v in out)
    return out


@dataclass(frozen=True)
class DefinitionReport:
    bc: str
    ode_residual: float
    boundary_residual: float
    jump_defect: float
    symmetry_defect: float
    boundary_rows: tuple = (0.0, 0.0)

    def passed(self, tol=1e-6):
        return max(self.ode_residual, self.boundary_residual, self.jump_defect, self.symmetry_defect) <= tol

    def to_dict(self, tol=1e-6):
        return {
            "bc": self.bc,
            "ode_residual": self.ode_residual,
            "boundary_residual": self.boundary_residual,
            "boundary_rows": list(self.boundary_rows),
            "jump_defect": self.jump_defect,
            "symmetry_defect": self.symmetry_defect,
            "passed": self.passed(tol),
        }


def _ode_residual(kernel, s_values):
    """Max |G_tt + q G| off the diagonal, with G_tt from a 5-point stencil on dG/dt.

    The stencil runs over the integration nodes, where the trajectories hold
    exact RK values, and skips any stencil that straddles t = s.
    """
    grid = kernel.pair.grid
    t = grid.nodes
    h = grid.h
    q = kernel.pair.coefficient(t)
    worst = 0.0
    idx = np.arange(2, grid.n - 2)
    for s in s_values:
        S = np.full_like(t, s)
        g = kernel.value(t, S)
        dg = kernel.dt(t, S)
        d2 = (dg[idx - 2] - 8 * dg[idx - 1] + 8 * dg[idx + 1] - dg[idx + 2]) / (12 * h)
        ok = np.abs(t[idx] - s) > 2.5 * h
        res = np.abs(d2 + q[idx] * g[idx])[ok]
        if res.size:
            worst = max(worst, float(res.max()))
    return worst


def _boundary_rows(kernel, s):
    """B x(0) + C x(1) for x = (G, dG/dt)(., s), rows stacked per s."""
    B, C = BC_MATRICES[kernel.bc]
    s = np.asarray(s, dtype=float)
    x0 = np.stack([kernel.value(0.0, s), kernel.dt(0.0, s, "lower")])
    x1 = np.stack([kernel.value(1.0, s), kernel.dt(1.0, s, "upper")])
    return B @ x0 + C @ x1


def check_green_definition(kernel, grid=None):
    grid = GridSpec(101) if grid is None else grid
    if not isinstance(grid, GridSpec):
        grid = GridSpec(grid)
    x = grid.nodes
    interior = x[1:-1]
    ode = _ode_residual(kernel, interior)
    rows = np.abs(_boundary_rows(kernel, interior))
    row_max = tuple(float(r.max()) if r.size else 0.0 for r in rows)
    jump = kernel.dt(x, x, "upper") - kernel.dt(x, x, "lower")
    T, S = np.meshgrid(x, x, indexing="ij")
    G = kernel.value(T, S)
    return DefinitionReport(
        bc=kernel.bc.value,
        ode_residual=ode,
        boundary_residual=max(row_max),
        jump_defect=float(np.abs(jump - 1.0).max()),
        symmetry_defect=float(np.abs(G - G.T).max()),
        boundary_rows=row_max,
    )


# r_i against its Green's-function trace: (basis, bc, s0, use dG/ds, sign)
BASIS_TRACES = (
    (BasisKind.R1, BCKind.DIRICHLET, 0, True, -1.0),
    (BasisKind.R2, BCKind.DIRICHLET, 1, True, 1.0),
    (BasisKind.R3, BCKind.PERIODIC, 0, True, -1.0),
    (BasisKind.R4, BCKind.PERIODIC, 0, False, 1.0),
    (BasisKind.R5, BCKind.NEUMANN, 0, False, 1.0),
    (BasisKind.R6, BCKind.NEUMANN, 1, False, -1.0),
    (BasisKind.R7, BCKind.MIXED2, 0, True, -1.0),
    (BasisKind.R8, BCKind.MIXED2, 1, False, -1.0),
    (BasisKind.R9, BCKind.MIXED1, 0, False, 1.0),
    (BasisKind.R10, BCKind.MIXED1, 1, True, 1.0),
)


def trace_basis(kind, kernel, t):
    """r_i(t) and r_i'(t) read off the Green's function of its boundary condition."""
    kind = BasisKind.parse(kind)
    _, bc, s0, deriv, sign = next(row for row in BASIS_TRACES if row[0] == kind)
    if kernel.bc != bc:
        raise ValueError(f"{kind.value} is a trace of the {bc.value} kernel, not {kernel.bc.value}")
    t = np.asarray(t, dtype=float)
    side = "upper" if s0 == 0 else "lower"
    S = np.full_like(t, float(s0))
    dt, ds, dts = kernel.partials(t, S, side)
    if deriv:
        return sign * ds, sign * dts
    return sign * kernel.value(t, S), sign * dt


def basis_green_identity_check(pair, grid=None, tol=1e-6):
    """Sup-norm gap between each r_i and its Green's-function expression.

    Entries whose kernel is resonant carry status "resonant" instead of
    numbers.
    """
    grid = GridSpec(101) if grid is None else grid
    if not isinstance(grid, GridSpec):
        grid = GridSpec(grid)
    t = grid.nodes
    rows = []
    kernels = {}
    for kind, bc, s0, deriv, sign in BASIS_TRACES:
        entry = {"basis": kind.value, "bc": bc.value}
        try:
            if bc not in kernels:
                kernels[bc] = build_green(bc, pair)
            r = basis_solution(kind, pair)
        except Resonant as exc:
            entry.update(status="resonant", determinant=exc.determinant, deviation=None, passed=False)
            rows.append(entry)
            continue
        u, du = r(t)
        v, dv = trace_basis(kind, kernels[bc], t)
        dev = float(np.abs(u - v).max())
        ddev = float(np.abs(du - dv).max())
        entry.update(status="ok", deviation=dev, derivative_deviation=ddev, passed=dev <= tol)
        rows.append(entry)
    return rows


def write_kernel_csv(kernel, grid, fh):
    """Dump G and its first partials on grid x grid, 17 significant digits."""
    T, S, G, dt, ds = kernel.table(grid)
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["t", "s", "G", "dGdt", "dGds"])
    for row in zip(T.ravel(), S.ravel(), G.ravel(), dt.ravel(), ds.ravel()):
        w.writerow([format(float(v), ".17g") for v in row])
