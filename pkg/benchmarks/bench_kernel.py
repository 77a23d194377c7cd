#!/usr/bin/env python3
"""Benchmark: compiled SU(2) stepping kernel vs the numpy fallback.

Runs the heaviest sweep-style workload (long run time, two-level search
model) through both backends at identical step counts and reports the
timing ratio plus the final-state agreement.
"""
import time

import numpy as np

from adia_tradeoff import grover_family, make_schedule
from adia_tradeoff._kernel import pure

try:
    from adia_tradeoff._kernel import _native
except ImportError:
    _native = None


def workload(n_steps: int, T: float, N: int = 32):
    family = grover_family(N, make_schedule("linear"))
    h = 1.0 / n_steps
    s0 = np.arange(n_steps) * h
    f1, f2 = pure.effective_f(
        family.schedule(s0 + pure.GAUSS_C1 * h),
        family.schedule(s0 + pure.GAUSS_C2 * h),
    )
    _, vecs = np.linalg.eigh(family.eval(0.0, 0))
    psi0 = vecs[:, 0].astype(complex)
    marks = np.array([n_steps])
    args = (
        family.h_initial.astype(complex),
        family.h_final.astype(complex),
        f1,
        f2,
        T * h / 2.0,
        psi0,
        marks,
    )
    return args


def run(fn, args, repeats=5):
    best = np.inf
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    print(f"{'steps':>9} {'pure [ms]':>10} {'native [ms]':>12} {'speedup':>8}  agreement")
    for n_steps, T in [(20_000, 1500.0), (100_000, 6000.0), (400_000, 24000.0)]:
        args = workload(n_steps, T)
        t_pure, out_pure = run(pure.su2_interp_propagate, args)
        if _native is None:
            print(f"{n_steps:>9} {t_pure * 1e3:>10.2f} {'n/a':>12}")
            continue
        t_nat, out_nat = run(_native.su2_interp_propagate, args)
        diff = np.abs(out_pure - out_nat).max()
        print(
            f"{n_steps:>9} {t_pure * 1e3:>10.2f} {t_nat * 1e3:>12.2f} "
            f"{t_pure / t_nat:>8.2f}  max|diff|={diff:.2e}"
        )
    if _native is None:
        print("native kernel not built; only the fallback was timed")


if __name__ == "__main__":
    main()
