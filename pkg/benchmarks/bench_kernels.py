"""Compare the compiled kernels with the numpy fallback.

Run with ``python benchmarks/bench_kernels.py``. Each kernel is timed on the
same inputs with both backends and the outputs are checked for agreement.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from srlie import kernels
from srlie.algebra import BasisKind, structure_constants
from srlie.geodesics import GeodesicParams, geodesic
from srlie.groups import GroupKind
from srlie.oracle import ShootingGrid, shooting_distance


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return min(times), out


def bench_scan(mod, group, grid):
    phi, a2, beta, trel = grid.axes()
    target = mod.endpoints(group, 2, 0.4, 0.3, 1.1, 2.0)
    err = np.empty((len(a2), len(beta), len(trel)))
    idx = np.empty(err.shape, dtype=np.int64)
    mod.scan(group, 2, target, phi, a2, beta, trel, err, idx, 0, len(a2))
    return err


def bench_integrate(mod, group, n, steps):
    rng = np.random.default_rng(0)
    a = rng.normal(size=(n, 3))
    a /= np.linalg.norm(a, axis=1)[:, None]
    psi0 = np.column_stack([a, rng.uniform(-2, 2, n)])
    consts = np.ascontiguousarray(structure_constants(BasisKind.D2), dtype=float)
    return mod.integrate(group, 2, consts, psi0, np.full(n, 3.0), steps, steps)[0]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--trajectories", type=int, default=64)
    ap.add_argument("--steps", type=int, default=2000)
    args = ap.parse_args()

    if "compiled" not in kernels.available_backends():
        print("compiled kernels are not built; only the numpy backend is available")
    mods = {"python": kernels._pykernels}
    if kernels._ckernels is not None:
        mods["compiled"] = kernels._ckernels

    grid = ShootingGrid()
    print(f"{'kernel':<28}{'backend':<10}{'seconds':>10}{'speedup':>10}")
    for label, job in [
        ("scan su2r (default grid)", lambda m: bench_scan(m, 0, grid)),
        ("scan so3r (default grid)", lambda m: bench_scan(m, 1, grid)),
        (f"integrate su2r {args.trajectories}x{args.steps}",
         lambda m: bench_integrate(m, 0, args.trajectories, args.steps)),
        (f"integrate so3r {args.trajectories}x{args.steps}",
         lambda m: bench_integrate(m, 1, args.trajectories, args.steps)),
    ]:
        results = {name: best_of(lambda: job(mod), args.repeat) for name, mod in mods.items()}
        base = results["python"][0]
        for name, (secs, _) in results.items():
            print(f"{label:<28}{name:<10}{secs:>10.4f}{base / secs:>9.1f}x")
        if len(results) == 2:
            diff = np.max(np.abs(results["python"][1] - results["compiled"][1]))
            print(f"{'':<28}max |python - compiled| = {diff:.1e}")

    # one end-to-end shooting solve per backend
    p = GeodesicParams.from_phi0(0.4, 0.3, 1.1, BasisKind.D2, GroupKind.SO3R)
    target = geodesic(p, 2.0)
    for name in mods:
        previous = kernels.use_backend(name)
        try:
            secs, rep = best_of(lambda: shooting_distance(target, GroupKind.SO3R), 1)
        finally:
            kernels.use_backend(previous)
        print(f"{'shooting_distance so3r':<28}{name:<10}{secs:>10.4f}   d = {rep.best_distance:.15f}")


if __name__ == "__main__":
    main()
