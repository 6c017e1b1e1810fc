"""Potentials, grids and the fundamental solutions of u'' + (a(t) + lam) u = 0."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import InvalidGrid, PotentialDomain
from .kernels import rk4_endpoints, rk4_trajectories

DEFAULT_NODES = 1001

CLOSED_FORMS = {
    # a(t) = c0 + amp * sin(2 pi freq t)
    "sin": lambda t, c0, amp, freq: c0 + amp * np.sin(2.0 * np.pi * freq * t),
    "cos": lambda t, c0, amp, freq: c0 + amp * np.cos(2.0 * np.pi * freq * t),
}


@dataclass(frozen=True)
class Potential:
    """The coefficient a(t) on [0, 1].

    ``kind`` is ``"constant"``, ``"closed_form"`` (``form`` names an entry of
    ``CLOSED_FORMS``, ``params`` its arguments) or ``"sampled"``.
    """

    kind: str
    value: float = 0.0
    samples: tuple = ()
    interp: str = "linear"
    form: str | None = None
    params: tuple = ()

    def __post_init__(self):
        if self.kind == "constant":
            if not math.isfinite(self.value):
                raise PotentialDomain("constant potential must be finite")
        elif self.kind == "closed_form":
            if self.form not in CLOSED_FORMS:
                raise PotentialDomain(f"unknown closed form {self.form!r}")
        elif self.kind == "sampled":
            if self.interp not in ("linear", "cubic"):
                raise PotentialDomain(f"unknown interpolation {self.interp!r}")
            pts = np.asarray(self.samples, dtype=float)
            if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
                raise PotentialDomain("samples must be a list of at least two (t, a) pairs")
            t = pts[:, 0]
            if t[0] != 0.0 or t[-1] != 1.0:
                raise PotentialDomain("sample abscissae must start at 0 and end at 1")
            if np.any(np.diff(t) <= 0):
                raise PotentialDomain("sample abscissae must be strictly increasing")
            if not np.all(np.isfinite(pts)):
                raise PotentialDomain("samples must be finite")
            object.__setattr__(self, "samples", tuple(map(tuple, pts.tolist())))
        else:
            raise PotentialDomain(f"unknown potential kind {self.kind!r}")

    @classmethod
    def constant(cls, value):
        return cls("constant", value=float(value))

    @classmethod
    def sampled(cls, t, a, interp="linear"):
        return cls("sampled", samples=tuple(zip(map(float, t), map(float, a))), interp=interp)

    @classmethod
    def closed_form(cls, form, *params):
        return cls("closed_form", form=form, params=tuple(float(p) for p in params))

    @cached_property
    def _spline(self):
        pts = np.asarray(self.samples)
        return CubicSpline(pts[:, 0], pts[:, 1], bc_type="not-a-knot")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "constant":
            return np.full_like(t, self.value)
        if self.kind == "closed_form":
            return CLOSED_FORMS[self.form](t, *self.params)
        pts = np.asarray(self.samples)
        if self.interp == "linear":
            return np.interp(t, pts[:, 0], pts[:, 1])
        return self._spline(t)

    def shifted(self, c):
        """The potential a(t) + c."""
        if self.kind == "constant":
            return Potential.constant(self.value + c)
        if self.kind == "closed_form":
            return Potential.closed_form(self.form, self.params[0] + c, *self.params[1:])
        return Potential("sampled", samples=tuple((t, a + c) for t, a in self.samples), interp=self.interp)

    def to_dict(self):
        if self.kind == "constant":
            return {"kind": "constant", "value": self.value}
        if self.kind == "closed_form":
            return {"kind": "closed_form", "form": self.form, "params": list(self.params)}
        return {"kind": "sampled", "interp": self.interp, "samples": [list(p) for p in self.samples]}

    @classmethod
    def from_dict(cls, d):
        kind = d.get("kind")
        if kind == "constant":
            return cls.constant(d["value"])
        if kind == "sampled":
            return cls("sampled", samples=tuple(tuple(p) for p in d["samples"]), interp=d.get("interp", "linear"))
        if kind in ("closed_form", "closed_form_id"):
            return cls.closed_form(d["form"], *d.get("params", ()))
        raise PotentialDomain(f"unknown potential kind {kind!r}")

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def to_json(self):
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class GridSpec:
    n: int = DEFAULT_NODES

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise InvalidGrid(f"grid needs at least 2 nodes, got {self.n}")

    @property
    def h(self):
        return 1.0 / (self.n - 1)

    @property
    def nodes(self):
        return np.linspace(0.0, 1.0, self.n)

    def locate(self, t):
        """Index of the left node of the cell containing each t, and the local offset."""
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.floor(t * (self.n - 1)).astype(np.int64), 0, self.n - 2)
        return idx, t - idx * self.h


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Node values of a solution and its derivative with cubic Hermite dense output.

    ``ddu`` (the second derivative at the nodes) is optional; when present
    the derivative is interpolated by Hermite on (u', u'') instead of by
    differentiating the cubic for u.
    """

    grid: GridSpec
    u: np.ndarray
    du: np.ndarray
    ddu: np.ndarray | None = None

    def __post_init__(self):
        for name in ("u", "du") + (("ddu",) if self.ddu is not None else ()):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (self.grid.n,):
                raise InvalidGrid(f"{name} has shape {arr.shape}, expected ({self.grid.n},)")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __call__(self, t):
        """Return (u(t), u'(t)) for scalar or array t in [0, 1]."""
        t = np.asarray(t, dtype=float)
        shape = t.shape
        t = t.ravel()
        g = self.grid
        idx, x = g.locate(t)
        h = g.h
        s = x / h
        s2 = s * s
        s3 = s2 * s
        h00 = 2 * s3 - 3 * s2 + 1
        h10 = s3 - 2 * s2 + s
        h01 = -2 * s3 + 3 * s2
        h11 = s3 - s2
        u0, u1 = self.u[idx], self.u[idx + 1]
        d0, d1 = self.du[idx], self.du[idx + 1]
        u = h00 * u0 + h10 * h * d0 + h01 * u1 + h11 * h * d1
        if self.ddu is not None:
            e0, e1 = self.ddu[idx], self.ddu[idx + 1]
            du = h00 * d0 + h10 * h * e0 + h01 * d1 + h11 * h * e1
        else:
            dh00 = (6 * s2 - 6 * s) / h
            dh10 = 3 * s2 - 4 * s + 1
            dh01 = (-6 * s2 + 6 * s) / h
            dh11 = 3 * s2 - 2 * s
            du = dh00 * u0 + dh10 * d0 + dh01 * u1 + dh11 * d1
        # exact node hits return the stored values
        hit = np.isclose(s, 0.0, rtol=0.0, atol=1e-12)
        u = np.where(hit, u0, u)
        du = np.where(hit, d0, du)
        hit1 = np.isclose(s, 1.0, rtol=0.0, atol=1e-12)
        u = np.where(hit1, u1, u)
        du = np.where(hit1, d1, du)
        return u.reshape(shape), du.reshape(shape)

    def combine(self, alpha, other, beta):
        """alpha * self + beta * other on the same grid."""
        ddu = None
        if self.ddu is not None and other.ddu is not None:
            ddu = alpha * self.ddu + beta * other.ddu
        return Trajectory(self.grid, alpha * self.u + beta * other.u, alpha * self.du + beta * other.du, ddu)

    @property
    def start(self):
        return float(self.u[0]), float(self.du[0])

    @property
    def end(self):
        return float(self.u[-1]), float(self.du[-1])


@dataclass(frozen=True, eq=False)
class FundamentalPair:
    phi1: Trajectory
    phi2: Trajectory
    lam: float
    potential: Potential
    wronskian_defect: float = field(default=0.0)

    @property
    def grid(self):
        return self.phi1.grid

    def __call__(self, t):
        """(phi1, phi1', phi2, phi2') evaluated at t."""
        a, da = self.phi1(t)
        b, db = self.phi2(t)
        return a, da, b, db

    @property
    def end(self):
        """phi1(1), phi1'(1), phi2(1), phi2'(1)."""
        return self.phi1.end + self.phi2.end

    @property
    def scale(self):
        return float(max(np.abs(self.phi1.u).max(), np.abs(self.phi2.u).max(),
                         np.abs(self.phi1.du).max(), np.abs(self.phi2.du).max()))

    def coefficient(self, t):
        """a(t) + lam."""
        return self.potential(t) + self.lam


def _coefficients(potential, lam, n_fine):
    t = np.linspace(0.0, 1.0, n_fine)
    h = 1.0 / (n_fine - 1)
    q_nodes = potential(t) + lam
    q_mid = potential(t[:-1] + 0.5 * h) + lam
    return q_nodes, q_mid, h


def _integrate(potential, lam, y0, grid, substeps):
    n_fine = (grid.n - 1) * substeps + 1
    q_nodes, q_mid, h = _coefficients(potential, lam, n_fine)
    out = rk4_trajectories(q_nodes, q_mid, np.asarray(y0, dtype=float).reshape(-1, 2), h)
    return out[:, :, ::substeps]


def _solve(potential, lam, y0, grid, substeps, richardson):
    if not isinstance(grid, GridSpec):
        grid = GridSpec(grid)
    if substeps < 1:
        raise InvalidGrid("substeps must be >= 1")
    out = _integrate(potential, lam, y0, grid, substeps)
    if richardson:
        fine = _integrate(potential, lam, y0, grid, 2 * substeps)
        out = (16.0 * fine - out) / 15.0
        # initial data is exact; keep it bitwise
        out[:, :, 0] = np.asarray(y0, dtype=float).reshape(-1, 2)
    return grid, out


def integrate_ivp(potential, lam, y0, grid=None, *, substeps=1, richardson=False):
    """Solve u'' + (a + lam) u = 0 with u(0), u'(0) = y0, sampled on ``grid``."""
    grid = GridSpec() if grid is None else grid
    grid, out = _solve(potential, float(lam), [y0], grid, substeps, richardson)
    q = potential(grid.nodes) + lam
    u, du = out[0]
    return Trajectory(grid, u, du, -q * u)


def fundamental_pair(potential, lam, grid=None, *, substeps=1, richardson=False):
    """phi1, phi2 with (phi1, phi1')(0) = (1, 0) and (phi2, phi2')(0) = (0, 1)."""
    grid = GridSpec() if grid is None else grid
    grid, out = _solve(potential, float(lam), [(1.0, 0.0), (0.0, 1.0)], grid, substeps, richardson)
    q = potential(grid.nodes) + lam
    phi1 = Trajectory(grid, out[0, 0], out[0, 1], -q * out[0, 0])
    phi2 = Trajectory(grid, out[1, 0], out[1, 1], -q * out[1, 0])
    w = phi1.u * phi2.du - phi1.du * phi2.u
    return FundamentalPair(phi1, phi2, float(lam), potential, float(np.abs(w - 1.0).max()))


def endpoint_values(potential, lams, grid=None):
    """Batched phi1(1), phi1'(1), phi2(1), phi2'(1) for many lambda; shape (L, 4)."""
    grid = GridSpec() if grid is None else grid
    if not isinstance(grid, GridSpec):
        grid = GridSpec(grid)
    q_nodes, q_mid, h = _coefficients(potential, 0.0, grid.n)
    return rk4_endpoints(q_nodes, q_mid, np.atleast_1d(np.asarray(lams, dtype=float)), h)


def wronskian(pair):
    """phi1 phi2' - phi1' phi2 at the grid nodes."""
    return pair.phi1.u * pair.phi2.du - pair.phi1.du * pair.phi2.u
