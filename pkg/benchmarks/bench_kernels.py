"""Benchmark the detector-scan backends (compiled extension vs pure numpy).

Usage: python benchmarks/bench_kernels.py [--points N]
"""

import argparse
import math
import time

import numpy as np

from ergorate import _kernels, drift, rwmodel


def reference_models():
    law42 = rwmodel.IncrementLaw(2, 1, np.array([0.5, 1 / 3, 0.0, 1 / 6]))
    walk = rwmodel.RandomWalkModel(
        law42, rwmodel.BoundaryRows(np.array([[0.1, 0.9, 0.0], [0.1, 0.0, 0.9]]), 2)
    )
    bd = rwmodel.RandomWalkModel(
        rwmodel.IncrementLaw(1, 1, np.array([0.6, 0.15, 0.25])),
        rwmodel.BoundaryRows(np.array([[0.3, 0.7]]), 1),
    )
    wide = rwmodel.RandomWalkModel(
        rwmodel.IncrementLaw(3, 2, np.array([0.3, 0.2, 0.2, 0.1, 0.1, 0.1])),
        rwmodel.BoundaryRows(
            np.array(
                [
                    [0.3, 0.3, 0.2, 0.2, 0.0, 0.0],
                    [0.2, 0.2, 0.2, 0.2, 0.2, 0.0],
                    [0.1, 0.2, 0.3, 0.2, 0.1, 0.1],
                ]
            ),
            5,
        ),
    )
    return [("birth-death g=1", bd), ("two-step g=2", walk), ("three-step g=3", wide)]


def grid_for(model, points):
    prof = drift.compute_profile(model.law)
    angular = max(8, int(math.sqrt(points * 4)))
    radial = max(4, points // angular)
    radii = np.exp(
        np.linspace(math.log(prof.delta_hat * (1 + 1e-6)), math.log(1 - 1e-6), radial)
    )
    angles = 2 * np.pi * (np.arange(angular) + 0.5) / angular
    lam = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
    return prof, lam


def run(points):
    backends = _kernels.available_backends()
    print(f"available backends: {sorted(backends)}")
    if "compiled" not in backends:
        print("compiled kernel missing; build it with "
              "`python setup.py build_ext --inplace`")
    for label, model in reference_models():
        prof, lam = grid_for(model, points)
        args = (
            np.asarray(model.law.a, dtype=complex),
            model.g,
            np.asarray(model.boundary.rows, dtype=float),
            prof.gamma_hat,
            lam,
        )
        results = {}
        timings = {}
        for name, mod in sorted(backends.items()):
            mod.scan_sigma_min(*args)  # warm up
            best = float("inf")
            for _ in range(3):
                t0 = time.perf_counter()
                results[name] = mod.scan_sigma_min(*args)
                best = min(best, time.perf_counter() - t0)
            timings[name] = best
        line = f"{label:18s} {lam.size:7d} pts"
        for name in sorted(timings):
            rate = lam.size / timings[name] / 1e3
            line += f" | {name}: {timings[name] * 1e3:8.1f} ms ({rate:7.1f} kpts/s)"
        if len(timings) == 2:
            line += f" | speedup {timings['pure'] / timings['compiled']:.1f}x"
            ok = np.isfinite(results["pure"][0]) & (results["compiled"][0] >= 0)
            dev = np.max(np.abs(results["pure"][0][ok] - results["compiled"][0][ok]))
            line += f" | max dev {dev:.1e}"
        print(line)


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=64 * 256)
    run(ap.parse_args().points)
