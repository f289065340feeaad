#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Times the two fused kernels on realistic workload shapes and a full
coverage estimation run with each backend swapped in.  Run from the repo
root after building the extension:

    python setup.py build_ext --inplace
    python benchmarks/bench_backends.py
"""

from __future__ import annotations

import math
import time

import numpy as np

import clustercov as cc
import clustercov.mc as mc
from clustercov._accel import _py

try:
    from clustercov._accel import _core
except ImportError:
    _core = None


def _time(fn, repeats: int = 5) -> float:
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _row(name: str, t_py: float, t_cy: float | None) -> None:
    if t_cy is None:
        print(f"{name:>12} {t_py * 1e3:>9.2f}ms {'n/a':>10}")
    else:
        print(f"{name:>12} {t_py * 1e3:>9.2f}ms {t_cy * 1e3:>9.2f}ms {t_py / t_cy:>7.2f}x")


def bench_kernels() -> None:
    print("kernels on a reference-scale chunk (512 trials, 160 clusters of 6)")
    print(f"{'kernel':>12} {'numpy':>10} {'compiled':>10} {'speedup':>8}")
    rng = np.random.default_rng(42)
    n_trials = 512
    n_parents = 160 * n_trials
    n_nodes = 6 * n_parents

    parent_r = 20000.0 * np.sqrt(rng.uniform(size=n_parents))
    trial_of_parent = np.repeat(np.arange(n_trials, dtype=np.intp), 160)
    node_parent = np.repeat(np.arange(n_parents, dtype=np.intp), 6)
    off_r = 500.0 * np.sqrt(rng.uniform(size=n_nodes))
    off_th = rng.uniform(0.0, 2.0 * math.pi, size=n_nodes)
    h = rng.exponential(size=n_nodes)
    r = 20000.0 * np.sqrt(rng.uniform(size=n_parents))
    h_r = rng.exponential(size=n_parents)
    idx = np.repeat(np.arange(n_trials, dtype=np.intp), 160)

    for alpha in (3.5, 4.2):
        t_py = _time(lambda: _py.inter_sums(
            parent_r, trial_of_parent, node_parent, off_r, off_th, h, n_trials, -alpha))
        t_cy = None if _core is None else _time(lambda: _core.inter_sums(
            parent_r, trial_of_parent, node_parent, off_r, off_th, h, n_trials, -alpha))
        _row(f"inter a={alpha}", t_py, t_cy)
        t_py = _time(lambda: _py.radial_sums(r, h_r, idx, n_trials, -alpha))
        t_cy = None if _core is None else _time(
            lambda: _core.radial_sums(r, h_r, idx, n_trials, -alpha))
        _row(f"radial a={alpha}", t_py, t_cy)


def bench_end_to_end() -> None:
    power = 10.0**1.4
    link = cc.LinkParams(
        p_x0=power, p_x=power, p_z=power,
        eta=cc.free_space_eta(868e6), alpha=3.5, a=500.0,
        lambda_g=0.1 / (500.0**2 * math.pi), lambda_co=0.1 / (500.0**2 * math.pi),
        sigma2=cc.noise_power_mw(125e3),
    )
    spec = cc.SimSpec(
        config=cc.NetworkConfig(link=link, window_radius=20000.0),
        scenario=cc.Scenario(cc.Unordered(), cc.FixedSize(6)),
        trials=20000,
        seed=1,
        gamma_grid=(0.1,),
    )
    print("\nend-to-end: estimate_coverage, 20k trials, reference network")
    results = {}
    backends = [("numpy", _py)] + ([("compiled", _core)] if _core is not None else [])
    for name, impl in backends:
        mc.radial_sums = impl.radial_sums
        mc.inter_sums = impl.inter_sums
        t0 = time.perf_counter()
        est = cc.estimate_coverage(spec)[0]
        elapsed = time.perf_counter() - t0
        results[name] = (elapsed, est.mean)
        print(f"{name:>10}: {elapsed:6.2f}s  coverage={est.mean:.4f}")
    if len(results) == 2:
        print(f"{'speedup':>10}: {results['numpy'][0] / results['compiled'][0]:.2f}x")
        agree = abs(results["numpy"][1] - results["compiled"][1])
        print(f"{'|diff|':>10}: {agree:.2e}")


if __name__ == "__main__":
    print(f"active backend at import: {cc.KERNEL_BACKEND}")
    bench_kernels()
    bench_end_to_end()
