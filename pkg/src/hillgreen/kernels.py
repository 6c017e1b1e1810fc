"""RK4 kernels for u'' + q(t) u = 0 on a uniform grid.

Two implementations are kept side by side: a pure-numpy one that vectorises
over the batch axis, and a numba one that loops. ``rk4_trajectories`` and
``rk4_endpoints`` resolve to the backend picked in :mod:`hillgreen._accel`.
"""
import numpy as np

from ._accel import HAVE_NUMBA, njit


def _rk4_trajectories_numpy(q_nodes, q_mid, y0, h):
    """Integrate ``B`` initial conditions through a shared coefficient.

    q_nodes: (N,) coefficient at the nodes; q_mid: (N-1,) at the midpoints;
    y0: (B, 2) initial (u, u'). Returns (B, 2, N).
    """
    n = q_nodes.shape[0]
    b = y0.shape[0]
    out = np.empty((b, 2, n))
    u = y0[:, 0].astype(np.float64).copy()
    v = y0[:, 1].astype(np.float64).copy()
    out[:, 0, 0] = u
    out[:, 1, 0] = v
    hh = 0.5 * h
    for i in range(n - 1):
        qa = q_nodes[i]
        qm = q_mid[i]
        qb = q_nodes[i + 1]
        k1u = v
        k1v = -qa * u
        k2u = v + hh * k1v
        k2v = -qm * (u + hh * k1u)
        k3u = v + hh * k2v
        k3v = -qm * (u + hh * k2u)
        k4u = v + h * k3v
        k4v = -qb * (u + h * k3u)
        u = u + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        v = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        out[:, 0, i + 1] = u
        out[:, 1, i + 1] = v
    return out


def _rk4_endpoints_numpy(q_nodes, q_mid, shifts, h):
    """Fundamental pair at t=1 for every shift in ``shifts`` (q -> q + shift).

    Returns (L, 4) columns phi1(1), phi1'(1), phi2(1), phi2'(1).
    """
    lam = np.asarray(shifts, dtype=np.float64)
    u1 = np.ones_like(lam)
    v1 = np.zeros_like(lam)
    u2 = np.zeros_like(lam)
    v2 = np.ones_like(lam)
    hh = 0.5 * h
    for i in range(q_nodes.shape[0] - 1):
        qa = q_nodes[i] + lam
        qm = q_mid[i] + lam
        qb = q_nodes[i + 1] + lam
        stepped = []
        for u, v in ((u1, v1), (u2, v2)):
            k1u = v
            k1v = -qa * u
            k2u = v + hh * k1v
            k2v = -qm * (u + hh * k1u)
            k3u = v + hh * k2v
            k3v = -qm * (u + hh * k2u)
            k4u = v + h * k3v
            k4v = -qb * (u + h * k3u)
            stepped.append(
                (
                    u + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
                    v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v),
                )
            )
        (u1, v1), (u2, v2) = stepped
    return np.stack([u1, v1, u2, v2], axis=1)


def _rk4_trajectories_loop(q_nodes, q_mid, y0, h):
    n = q_nodes.shape[0]
    b = y0.shape[0]
    out = np.empty((b, 2, n))
    hh = 0.5 * h
    for j in range(b):
        u = y0[j, 0]
        v = y0[j, 1]
        out[j, 0, 0] = u
        out[j, 1, 0] = v
        for i in range(n - 1):
            qa = q_nodes[i]
            qm = q_mid[i]
            qb = q_nodes[i + 1]
            k1u = v
            k1v = -qa * u
            k2u = v + hh * k1v
            k2v = -qm * (u + hh * k1u)
            k3u = v + hh * k2v
            k3v = -qm * (u + hh * k2u)
            k4u = v + h * k3v
            k4v = -qb * (u + h * k3u)
            u = u + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
            v = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
            out[j, 0, i + 1] = u
            out[j, 1, i + 1] = v
    return out


def _rk4_endpoints_loop(q_nodes, q_mid, shifts, h):
    m = shifts.shape[0]
    out = np.empty((m, 4))
    hh = 0.5 * h
    for k in range(m):
        lam = shifts[k]
        for col in range(2):
            u = 1.0 if col == 0 else 0.0
            v = 0.0 if col == 0 else 1.0
            for i in range(q_nodes.shape[0] - 1):
                qa = q_nodes[i] + lam
                qm = q_mid[i] + lam
                qb = q_nodes[i + 1] + lam
                k1u = v
                k1v = -qa * u
                k2u = v + hh * k1v
                k2v = -qm * (u + hh * k1u)
                k3u = v + hh * k2v
                k3v = -qm * (u + hh * k2u)
                k4u = v + h * k3v
                k4v = -qb * (u + h * k3u)
                u = u + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
                v = v + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
            out[k, 2 * col] = u
            out[k, 2 * col + 1] = v
    return out


if HAVE_NUMBA:
    _rk4_trajectories_numba = njit(cache=True)(_rk4_trajectories_loop)
    _rk4_endpoints_numba = njit(cache=True)(_rk4_endpoints_loop)
else:
    _rk4_trajectories_numba = None
    _rk4_endpoints_numba = None


def get_kernels(backend):
    """Return ``(rk4_trajectories, rk4_endpoints)`` for ``"numba"`` or ``"numpy"``."""
    if backend == "numpy":
        return _rk4_trajectories_numpy, _rk4_endpoints_numpy
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend unavailable")
        return _rk4_trajectories_numba, _rk4_endpoints_numba
    raise ValueError(f"unknown backend {backend!r}")


def _as_inputs(q_nodes, q_mid, arr):
    return (
        np.ascontiguousarray(q_nodes, dtype=np.float64),
        np.ascontiguousarray(q_mid, dtype=np.float64),
        np.ascontiguousarray(arr, dtype=np.float64),
    )


def rk4_trajectories(q_nodes, q_mid, y0, h):
    fn = _rk4_trajectories_numba if HAVE_NUMBA else _rk4_trajectories_numpy
    q_nodes, q_mid, y0 = _as_inputs(q_nodes, q_mid, np.atleast_2d(y0))
    return fn(q_nodes, q_mid, y0, float(h))


def rk4_endpoints(q_nodes, q_mid, shifts, h):
    fn = _rk4_endpoints_numba if HAVE_NUMBA else _rk4_endpoints_numpy
    q_nodes, q_mid, shifts = _as_inputs(q_nodes, q_mid, np.atleast_1d(shifts))
    return fn(q_nodes, q_mid, shifts, float(h))
