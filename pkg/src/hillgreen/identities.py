"""Cross-boundary-condition decompositions of Green's functions, as residuals.

Each identity writes a target kernel G_X as a source kernel G_Y plus
rank-one corrections r_i(t) * (boundary trace in s). Traces with t fixed
at 0 or 1 are read from inside the square (see ``GreenKernel.trace_t``).

Two routes feed the r_i: ``"basis"`` solves their defining problems
directly, ``"trace"`` reads them off the Green's function of their own
boundary condition. Both must reproduce the target.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateIdentity, Resonant
from .greens import (
    BC_MATRICES,
    BasisKind,
    BCKind,
    basis_solution,
    build_green,
    resonance_threshold,
    trace_basis,
)
from .ode_core import GridSpec, fundamental_pair

D, N, P, M1, M2 = BCKind.DIRICHLET, BCKind.NEUMANN, BCKind.PERIODIC, BCKind.MIXED1, BCKind.MIXED2


class IdentityId(str, enum.Enum):
    # rank-one superpositions
    P_from_D = "P_from_D"
    D_from_P = "D_from_P"
    N_from_D = "N_from_D"
    D_from_N = "D_from_N"
    M1_from_D = "M1_from_D"
    M2_from_D = "M2_from_D"
    D_from_M2 = "D_from_M2"
    D_from_M1 = "D_from_M1"
    M2_from_N = "M2_from_N"
    M1_from_N = "M1_from_N"
    N_from_M2 = "N_from_M2"
    N_from_M1 = "N_from_M1"
    P_from_N = "P_from_N"
    N_from_P = "N_from_P"
    M1_from_P = "M1_from_P"
    M2_from_P = "M2_from_P"
    P_from_M2 = "P_from_M2"
    P_from_M1 = "P_from_M1"
    # forms that only use the source kernel, with a nondegeneracy scalar
    M2_from_D_alt = "M2_from_D_alt"
    M1_from_D_alt = "M1_from_D_alt"
    D_from_M2_alt = "D_from_M2_alt"
    D_from_M1_alt = "D_from_M1_alt"
    N_from_D_alt = "N_from_D_alt"
    D_from_N_alt = "D_from_N_alt"
    P_from_D_alt = "P_from_D_alt"
    D_from_P_alt = "D_from_P_alt"
    M2_from_N_alt = "M2_from_N_alt"
    M1_from_N_alt = "M1_from_N_alt"
    N_from_M1_alt = "N_from_M1_alt"
    N_from_M2_alt = "N_from_M2_alt"
    N_from_P_alt = "N_from_P_alt"
    P_from_N_alt = "P_from_N_alt"
    M1_from_P_alt = "M1_from_P_alt"
    M2_from_P_alt = "M2_from_P_alt"
    P_from_M2_alt = "P_from_M2_alt"
    P_from_M1_alt = "P_from_M1_alt"

    @property
    def spec(self):
        return _TABLE[self]

    @property
    def target(self):
        return self.spec.target

    @property
    def source(self):
        return self.spec.source

    @property
    def group(self):
        return "alt" if self.value.endswith("_alt") else "superposition"

    @property
    def basis(self):
        return self.spec.basis


class _Ctx:
    """Lazy kernels, traces and basis values on a t x s grid."""

    def __init__(self, pair, x, route):
        self.pair = pair
        self.x = x
        self.route = route
        self._kernels = {}
        self._basis = {}
        self.t = x[:, None]
        self.s = x[None, :]

    def kernel(self, bc):
        if bc not in self._kernels:
            self._kernels[bc] = build_green(bc, self.pair)
        return self._kernels[bc]

    def G(self, bc):
        return self.kernel(bc).value(self.t, self.s)

    def at(self, bc, t0):
        """G(t0, s) as a row."""
        return self.kernel(bc).trace_t(t0, self.s)

    def dat(self, bc, t0):
        """dG/dt(t0, s) as a row."""
        return self.kernel(bc).trace_t(t0, self.s, derivative=True)

    def _basis_fn(self, i):
        kind = BasisKind.parse(i)
        if kind not in self._basis:
            if self.route == "trace":
                k = self.kernel(kind.bc)
                self._basis[kind] = lambda t, k=k, kind=kind: trace_basis(kind, k, np.asarray(t, dtype=float))
            else:
                traj = basis_solution(kind, self.pair)
                self._basis[kind] = traj
        return self._basis[kind]

    def r(self, i):
        return self._basis_fn(i)(self.t)[0]

    def rv(self, i, x):
        return float(self._basis_fn(i)(np.float64(x))[0])

    def drv(self, i, x):
        return float(self._basis_fn(i)(np.float64(x))[1])


@dataclass(frozen=True)
class _Spec:
    target: BCKind
    source: BCKind
    basis: tuple
    rhs: object
    nondeg: object = None  # S4 only: ctx -> scalar d


def _s3(target, source, basis, rhs):
    return _Spec(target, source, basis, rhs)


def _s4(target, source, basis, nondeg, rhs):
    return _Spec(target, source, basis, rhs, nondeg)


_TABLE = {
    IdentityId.P_from_D: _s3(P, D, (1, 2), lambda c: c.G(D) + (c.r(1) + c.r(2)) * c.at(P, 1)),
    IdentityId.D_from_P: _s3(D, P, (4,), lambda c: c.G(P) + c.r(4) * (c.dat(D, 0) - c.dat(D, 1))),
    IdentityId.N_from_D: _s3(N, D, (1, 2), lambda c: c.G(D) + c.r(1) * c.at(N, 0) + c.r(2) * c.at(N, 1)),
    IdentityId.D_from_N: _s3(D, N, (5, 6), lambda c: c.G(N) + c.r(5) * c.dat(D, 0) + c.r(6) * c.dat(D, 1)),
    IdentityId.M1_from_D: _s3(M1, D, (1,), lambda c: c.G(D) + c.r(1) * c.at(M1, 0)),
    IdentityId.M2_from_D: _s3(M2, D, (2,), lambda c: c.G(D) + c.r(2) * c.at(M2, 1)),
    IdentityId.D_from_M2: _s3(D, M2, (8,), lambda c: c.G(M2) + c.r(8) * c.dat(D, 1)),
    IdentityId.D_from_M1: _s3(D, M1, (9,), lambda c: c.G(M1) + c.r(9) * c.dat(D, 0)),
    IdentityId.M2_from_N: _s3(M2, N, (5,), lambda c: c.G(N) + c.r(5) * c.dat(M2, 0)),
    IdentityId.M1_from_N: _s3(M1, N, (6,), lambda c: c.G(N) + c.r(6) * c.dat(M1, 1)),
    IdentityId.N_from_M2: _s3(N, M2, (7,), lambda c: c.G(M2) + c.r(7) * c.at(N, 0)),
    IdentityId.N_from_M1: _s3(N, M1, (10,), lambda c: c.G(M1) + c.r(10) * c.at(N, 1)),
    IdentityId.P_from_N: _s3(P, N, (5, 6), lambda c: c.G(N) + (c.r(5) + c.r(6)) * c.dat(P, 0)),
    IdentityId.N_from_P: _s3(N, P, (3,), lambda c: c.G(P) + c.r(3) * (c.at(N, 0) - c.at(N, 1))),
    IdentityId.M1_from_P: _s3(
        M1, P, (3, 4), lambda c: c.G(P) + c.r(3) * c.at(M1, 0) - c.r(4) * c.dat(M1, 1)
    ),
    IdentityId.M2_from_P: _s3(
        M2, P, (3, 4), lambda c: c.G(P) - c.r(3) * c.at(M2, 1) + c.r(4) * c.dat(M2, 0)
    ),
    IdentityId.P_from_M2: _s3(
        P, M2, (7, 8), lambda c: c.G(M2) + c.r(7) * c.at(P, 1) + c.r(8) * c.dat(P, 0)
    ),
    IdentityId.P_from_M1: _s3(
        P, M1, (9, 10), lambda c: c.G(M1) + c.r(9) * c.dat(P, 1) + c.r(10) * c.at(P, 0)
    ),
    IdentityId.M2_from_D_alt: _s4(
        M2, D, (2,), lambda c: c.drv(2, 1), lambda c, d: c.G(D) - c.r(2) / d * c.dat(D, 1)
    ),
    IdentityId.M1_from_D_alt: _s4(
        M1, D, (1,), lambda c: c.drv(1, 0), lambda c, d: c.G(D) - c.r(1) / d * c.dat(D, 0)
    ),
    IdentityId.D_from_M2_alt: _s4(
        D, M2, (8,), lambda c: c.rv(8, 1), lambda c, d: c.G(M2) - c.r(8) / d * c.at(M2, 1)
    ),
    IdentityId.D_from_M1_alt: _s4(
        D, M1, (9,), lambda c: c.rv(9, 0), lambda c, d: c.G(M1) - c.r(9) / d * c.at(M1, 0)
    ),
    IdentityId.N_from_D_alt: _s4(
        N,
        D,
        (1, 2),
        lambda c: c.drv(1, 0) * c.drv(2, 1) - c.drv(2, 0) * c.drv(1, 1),
        lambda c, d: c.G(D)
        + (
            -c.drv(2, 1) * c.r(1) * c.dat(D, 0)
            + c.drv(1, 1) * c.r(2) * c.dat(D, 0)
            + c.drv(2, 0) * c.r(1) * c.dat(D, 1)
            - c.drv(1, 0) * c.r(2) * c.dat(D, 1)
        )
        / d,
    ),
    IdentityId.D_from_N_alt: _s4(
        D,
        N,
        (5, 6),
        lambda c: c.rv(5, 0) * c.rv(6, 1) - c.rv(6, 0) * c.rv(5, 1),
        lambda c, d: c.G(N)
        + (
            c.r(5) * (-c.rv(6, 1) * c.at(N, 0) + c.rv(6, 0) * c.at(N, 1))
            + c.r(6) * (c.rv(5, 1) * c.at(N, 0) - c.rv(5, 0) * c.at(N, 1))
        )
        / d,
    ),
    IdentityId.P_from_D_alt: _s4(
        P,
        D,
        (1, 2),
        lambda c: 2 * c.drv(1, 1) + c.drv(2, 1) - c.drv(1, 0),
        lambda c, d: c.G(D) + (c.r(1) + c.r(2)) / d * (c.dat(D, 0) - c.dat(D, 1)),
    ),
    IdentityId.D_from_P_alt: _s4(
        D, P, (4,), lambda c: c.rv(4, 1), lambda c, d: c.G(P) - c.r(4) / d * c.at(P, 1)
    ),
    IdentityId.M2_from_N_alt: _s4(
        M2, N, (5,), lambda c: c.rv(5, 0), lambda c, d: c.G(N) - c.r(5) / d * c.at(N, 0)
    ),
    IdentityId.M1_from_N_alt: _s4(
        M1, N, (6,), lambda c: c.rv(6, 1), lambda c, d: c.G(N) - c.r(6) / d * c.at(N, 1)
    ),
    IdentityId.N_from_M1_alt: _s4(
        N, M1, (10,), lambda c: c.drv(10, 1), lambda c, d: c.G(M1) - c.r(10) / d * c.dat(M1, 1)
    ),
    IdentityId.N_from_M2_alt: _s4(
        N, M2, (7,), lambda c: c.drv(7, 0), lambda c, d: c.G(M2) - c.r(7) / d * c.dat(M2, 0)
    ),
    IdentityId.N_from_P_alt: _s4(
        N, P, (3,), lambda c: c.drv(3, 1), lambda c, d: c.G(P) - c.r(3) / d * c.dat(P, 1)
    ),
    IdentityId.P_from_N_alt: _s4(
        P,
        N,
        (5, 6),
        lambda c: c.rv(5, 1) - c.rv(5, 0) + c.rv(6, 1) - c.rv(6, 0),
        lambda c, d: c.G(N) + (c.r(5) + c.r(6)) * (c.at(N, 0) - c.at(N, 1)) / d,
    ),
    IdentityId.M1_from_P_alt: _s4(
        M1,
        P,
        (3, 4),
        lambda c: (1 - c.rv(3, 0)) * (1 + c.drv(4, 1)) + c.rv(4, 0) * c.drv(3, 1),
        lambda c, d: c.G(P)
        + c.r(3) / d * ((1 + c.drv(4, 1)) * c.at(P, 0) - c.rv(4, 0) * c.dat(P, 1))
        - c.r(4) / d * (c.drv(3, 1) * c.at(P, 0) + (1 - c.rv(3, 0)) * c.dat(P, 1)),
    ),
    IdentityId.M2_from_P_alt: _s4(
        M2,
        P,
        (3, 4),
        lambda c: (1 + c.rv(3, 1)) * (1 - c.drv(4, 0)) + c.drv(3, 0) * c.rv(4, 1),
        lambda c, d: c.G(P)
        - c.r(3) / d * ((1 - c.drv(4, 0)) * c.at(P, 1) + c.rv(4, 1) * c.dat(P, 0))
        - c.r(4) / d * (c.drv(3, 0) * c.at(P, 1) - (1 + c.rv(3, 1)) * c.dat(P, 0)),
    ),
    IdentityId.P_from_M2_alt: _s4(
        P,
        M2,
        (7, 8),
        lambda c: (1 - c.rv(7, 1)) * (1 - c.drv(8, 0)) - c.rv(8, 1) * c.drv(7, 0),
        lambda c, d: c.G(M2)
        + (
            (1 - c.drv(8, 0)) * c.r(7) * c.at(M2, 1)
            + c.rv(8, 1) * c.r(7) * c.dat(M2, 0)
            + c.drv(7, 0) * c.r(8) * c.at(M2, 1)
            + (1 - c.rv(7, 1)) * c.r(8) * c.dat(M2, 0)
        )
        / d,
    ),
    IdentityId.P_from_M1_alt: _s4(
        P,
        M1,
        (9, 10),
        lambda c: (1 - c.drv(9, 1)) * (1 - c.rv(10, 0)) - c.rv(9, 0) * c.drv(10, 1),
        lambda c, d: c.G(M1)
        + c.r(9) / d * ((1 - c.rv(10, 0)) * c.dat(M1, 1) + c.drv(10, 1) * c.at(M1, 0))
        + c.r(10) / d * (c.rv(9, 0) * c.dat(M1, 1) + (1 - c.drv(9, 1)) * c.at(M1, 0)),
    ),
}

ALL_IDENTITIES = tuple(IdentityId)


@dataclass(frozen=True)
class ResidualReport:
    identity: IdentityId
    grid: GridSpec
    max_abs_residual: float | None
    argmax: tuple | None
    nondegeneracy_value: float | None
    status: str = "ok"
    detail: str = ""

    def passed(self, tol):
        return self.status == "ok" and self.max_abs_residual <= tol

    def to_dict(self, tol=None):
        out = {
            "identity": self.identity.value,
            "residual": self.max_abs_residual,
            "argmax": list(self.argmax) if self.argmax is not None else None,
            "nondegeneracy": self.nondegeneracy_value,
            "status": self.status,
        }
        if self.detail:
            out["detail"] = self.detail
        if tol is not None:
            out["passed"] = self.passed(tol)
        return out


def _as_grid(grid):
    if grid is None:
        return GridSpec(101)
    return grid if isinstance(grid, GridSpec) else GridSpec(grid)


def identity_sides(ident, pair, grid=None, route="basis"):
    """(target, reconstruction, nondegeneracy) on grid x grid.

    Raises Resonant or DegenerateIdentity when the hypotheses fail.
    """
    ident = IdentityId(ident)
    grid = _as_grid(grid)
    if route not in ("basis", "trace"):
        raise ValueError(f"route must be 'basis' or 'trace', got {route!r}")
    spec = ident.spec
    c = _Ctx(pair, grid.nodes, route)
    src = c.kernel(spec.source)
    if spec.nondeg is None:
        tgt = c.kernel(spec.target)
        d = min(abs(src.det), abs(tgt.det))
        rhs = spec.rhs(c)
    else:
        d = float(spec.nondeg(c))
        thr = resonance_threshold(pair)
        if not abs(d) >= thr:
            raise DegenerateIdentity(ident.value, d, thr)
        tgt = c.kernel(spec.target)
        rhs = spec.rhs(c, d)
    lhs = c.G(spec.target)
    return lhs, np.broadcast_to(rhs, lhs.shape), d


def decomposition_residual(ident, pair, grid=None, route="basis"):
    ident = IdentityId(ident)
    grid = _as_grid(grid)
    lhs, rhs, d = identity_sides(ident, pair, grid, route)
    err = np.abs(lhs - rhs)
    i, j = np.unravel_index(int(np.argmax(err)), err.shape)
    x = grid.nodes
    return ResidualReport(ident, grid, float(err[i, j]), (float(x[i]), float(x[j])), float(d))


def residual_or_status(ident, pair, grid=None, route="basis"):
    """Like decomposition_residual but folds hypothesis failures into the status."""
    ident = IdentityId(ident)
    grid = _as_grid(grid)
    try:
        return decomposition_residual(ident, pair, grid, route)
    except Resonant as exc:
        return ResidualReport(ident, grid, None, None, exc.determinant, "resonant", str(exc))
    except DegenerateIdentity as exc:
        return ResidualReport(ident, grid, None, None, exc.value, "degenerate", str(exc))


def all_residuals(pair, grid=None, route="basis", ids=None):
    return [residual_or_status(i, pair, grid, route) for i in (ids or ALL_IDENTITIES)]


def matrix_kernel(kernel, t, s, side):
    """g(t, s) = [[-dG/ds, G], [-d2G/dtds, dG/dt]]."""
    dt, ds, dts = kernel.partials(t, s, side)
    return np.array([[-ds, kernel.value(t, s)], [-dts, dt]], dtype=float)


def matrix_green_boundary_check(kernel):
    """Deviation of B g(0,0) + C g(1,0) = B and B g(0,1) + C g(1,1) = -C.

    g(., 0) is taken from above the diagonal and g(., 1) from below, the
    sides on which t runs over the whole interval.
    """
    B, C = BC_MATRICES[kernel.bc]
    lhs0 = B @ matrix_kernel(kernel, 0.0, 0.0, "upper") + C @ matrix_kernel(kernel, 1.0, 0.0, "upper")
    lhs1 = B @ matrix_kernel(kernel, 0.0, 1.0, "lower") + C @ matrix_kernel(kernel, 1.0, 1.0, "lower")
    dev0 = float(np.abs(lhs0 - B).max())
    dev1 = float(np.abs(lhs1 + C).max())
    return {"bc": kernel.bc.value, "at_s0": dev0, "at_s1": dev1, "deviation": max(dev0, dev1)}


# (smaller, larger) with the open/closed sides of the square they are claimed on.
# Each entry: name, lower kernel, upper kernel, t-range flags, s-range flags.
# Flags (include_0, include_1); the upper kernel must also stay < 0.
SIGN_ORDERINGS = (
    ("G_P < G_D < 0", P, D, (False, False), (False, False)),
    ("G_N < G_D < 0", N, D, (False, False), (False, False)),
    ("G_M1 < G_D < 0", M1, D, (False, False), (False, False)),
    ("G_M2 < G_D < 0", M2, D, (False, False), (False, False)),
    ("G_N < G_M2 < 0", N, M2, (False, True), (False, True)),
    ("G_N < G_M1 < 0", N, M1, (True, False), (True, False)),
)


def _restrict(x, flags):
    inc0, inc1 = flags
    mask = np.ones(x.shape, dtype=bool)
    if not inc0:
        mask &= x > 0.0
    if not inc1:
        mask &= x < 1.0
    return x[mask]


def sign_comparison_report(pair, grid=None):
    """Check each strict ordering at every grid point of its domain; report the worst margin.

    The margin is min over the domain of min(upper - lower, -upper); the
    ordering holds strictly iff it is positive.
    """
    grid = _as_grid(grid)
    x = grid.nodes
    kernels = {}
    rows = []
    for name, lo, hi, tf, sf in SIGN_ORDERINGS:
        entry = {"ordering": name}
        try:
            for bc in (lo, hi):
                if bc not in kernels:
                    kernels[bc] = build_green(bc, pair)
        except Resonant as exc:
            entry.update(status="resonant", margin=None, holds=False, detail=str(exc))
            rows.append(entry)
            continue
        t = _restrict(x, tf)[:, None]
        s = _restrict(x, sf)[None, :]
        glo = kernels[lo].value(t, s)
        ghi = kernels[hi].value(t, s)
        gap = ghi - glo
        margin = np.minimum(gap, -ghi)
        i, j = np.unravel_index(int(np.argmin(margin)), margin.shape)
        worst = float(margin[i, j])
        entry.update(
            status="ok",
            margin=worst,
            order_margin=float(gap.min()),
            sign_margin=float((-ghi).min()),
            argmin=[float(t[i, 0]), float(s[0, j])],
            holds=worst > 0.0,
        )
        rows.append(entry)
    return rows


@dataclass(frozen=True)
class Comparability:
    m: float
    lower: str
    upper: str
    comparable: bool
    min_gap: float
    max_gap: float
    witness_negative: tuple | None = None
    witness_positive: tuple | None = None

    def to_dict(self):
        return {
            "m": self.m,
            "pair": f"{self.lower} vs {self.upper}",
            "comparable": self.comparable,
            "min_gap": self.min_gap,
            "max_gap": self.max_gap,
            "witness_negative": list(self.witness_negative) if self.witness_negative else None,
            "witness_positive": list(self.witness_positive) if self.witness_positive else None,
        }


def comparability(potential, lam, lower, upper, grid=None, nodes=None):
    """Whether G_lower < G_upper on the open square, or two points where the sign flips.

    Incomparability is certified by a grid point where G_upper - G_lower is
    negative and another where it is positive.
    """
    grid = _as_grid(grid)
    pair = fundamental_pair(potential, lam, nodes)
    lo = build_green(lower, pair)
    hi = build_green(upper, pair)
    x = grid.nodes[1:-1]
    T, S = np.meshgrid(x, x, indexing="ij")
    gap = hi.value(T, S) - lo.value(T, S)
    imin = np.unravel_index(int(np.argmin(gap)), gap.shape)
    imax = np.unravel_index(int(np.argmax(gap)), gap.shape)
    gmin, gmax = float(gap[imin]), float(gap[imax])
    neg = (float(T[imin]), float(S[imin])) if gmin < 0 else None
    pos = (float(T[imax]), float(S[imax])) if gmax > 0 else None
    m = float(np.sqrt(max(-potential(0.0) - lam, 0.0)))
    return Comparability(m, lo.bc.short, hi.bc.short, gmin > 0, gmin, gmax, neg, pos)


def example_comparability(grid=None, nodes=None):
    """G_P against G_M1 and G_M2 for a = -m^2, lam = 0, m in {1, 2, 3}."""
    from .ode_core import Potential

    out = []
    for m in (1, 2, 3):
        pot = Potential.constant(-float(m * m))
        for other in (M1, M2):
            out.append(comparability(pot, 0.0, P, other, grid, nodes))
    return out


def remark_residuals(pair, grid=None):
    """Residuals of two consequences of the P/D and P/N relations.

    (1) d/ds(G_D - G_P)(t,s) G_P(1,s) = (G_D - G_P)(t,s) dG_P/ds(1,s)
    (2) (G_N(t,0) - G_N(t,1)) dG_P/dt(0,s) = (G_N(s,0) - G_N(s,1)) dG_P/dt(0,t)
    """
    grid = _as_grid(grid)
    x = grid.nodes
    gd = build_green(D, pair)
    gp = build_green(P, pair)
    gn = build_green(N, pair)
    t = x[:, None]
    s = x[None, :]
    diff = gd.value(t, s) - gp.value(t, s)
    # off the diagonal the two sides agree; on it the jump of dG/ds cancels in the difference
    dsdiff = gd.ds(t, s) - gp.ds(t, s)
    gp1 = gp.value(1.0, s)
    dgp1 = gp.ds(1.0, s, "upper")
    r1 = np.abs(dsdiff * gp1 - diff * dgp1)

    def n_trace(y):
        return gn.value(y, 0.0) - gn.value(y, 1.0)

    dp0 = lambda y: gp.dt(0.0, y, "lower")
    r2 = np.abs(n_trace(t) * dp0(s) - n_trace(s) * dp0(t))
    return {"ds_ratio": float(r1.max()), "symmetric_ratio": float(r2.max())}
