"""Time the numba and numpy RK4 kernels on the same inputs.

    python benchmarks/bench_backends.py [--nodes 1001] [--lambdas 1001] [--repeat 5]
"""
import argparse
import time

import numpy as np

from hillgreen._accel import HAVE_NUMBA
from hillgreen.kernels import get_kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=1001)
    ap.add_argument("--lambdas", type=int, default=1001, help="batch size for the endpoint scan")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    n = args.nodes
    h = 1.0 / (n - 1)
    t = np.linspace(0.0, 1.0, n)
    q_nodes = -2.0 - np.sin(2 * np.pi * t)
    q_mid = -2.0 - np.sin(2 * np.pi * (t[:-1] + 0.5 * h))
    y0 = np.array([[1.0, 0.0], [0.0, 1.0]])
    shifts = np.linspace(-100.0, 150.0, args.lambdas)

    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    results = {}
    for name in backends:
        traj, ends = get_kernels(name)
        traj(q_nodes, q_mid, y0, h)  # warm-up / compile
        ends(q_nodes, q_mid, shifts[:2], h)
        tt, out_t = best_of(lambda: traj(q_nodes, q_mid, y0, h), args.repeat)
        te, out_e = best_of(lambda: ends(q_nodes, q_mid, shifts, h), args.repeat)
        results[name] = (tt, te, out_t, out_e)
        print(f"{name:6s} trajectories {tt * 1e3:9.3f} ms   endpoints x{args.lambdas} {te * 1e3:9.3f} ms")

    if "numba" in results:
        a, b = results["numpy"], results["numba"]
        dt = np.abs(a[2] - b[2]).max()
        de = np.abs(a[3] - b[3]).max()
        print(f"speedup      trajectories {a[0] / b[0]:7.1f}x   endpoints {a[1] / b[1]:7.1f}x")
        print(f"max |numpy - numba|: trajectories {dt:.1e}, endpoints {de:.1e}")
    else:
        print("numba unavailable or disabled; only the numpy backend was timed")


if __name__ == "__main__":
    main()
