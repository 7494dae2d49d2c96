"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--dim 80] [--order 64] [--repeat 20]
"""
import argparse
import time

import numpy as np

from zeno_distill import FIG1, _backend
from zeno_distill.free import coupling_amplitude
from zeno_distill.quadrature import normal_rule


def best_of(fn, repeat):
    fn()  # warm up
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dim", type=int, default=80)
    ap.add_argument("--order", type=int, default=64)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)

    beta = coupling_amplitude(FIG1.g_bar, FIG1.tau_bar)
    p, w = normal_rule(args.order, FIG1.dp_bar)
    coeffs = w * np.exp(-0.5j * p ** 2 * FIG1.tau_bar)
    cases = {
        "displacement_elements": lambda mod: mod.displacement_elements(1.3 - 0.7j, args.dim),
        "projected_sum": lambda mod: mod.projected_sum(beta, p, coeffs, args.dim),
    }
    names = sorted(_backend.BACKENDS)
    if "compiled" not in names:
        print("compiled extension not built; timing the fallback only")
    print(f"dim={args.dim} order={args.order} repeat={args.repeat} (best of, ms)")
    print(f"{'kernel':<24}" + "".join(f"{n:>12}" for n in names) + ("    speedup" if len(names) > 1 else ""))
    for label, case in cases.items():
        t = {n: best_of(lambda: case(_backend.BACKENDS[n]), args.repeat) for n in names}
        line = f"{label:<24}" + "".join(f"{1e3 * t[n]:>12.3f}" for n in names)
        if len(names) > 1:
            ref = case(_backend.BACKENDS["python"])
            diff = np.abs(case(_backend.BACKENDS["compiled"]) - ref).max()
            line += f"   {t['python'] / t['compiled']:>7.1f}x  (max diff {diff:.1e})"
        print(line)


if __name__ == "__main__":
    main()
