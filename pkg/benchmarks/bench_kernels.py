"""Timing of the compiled kernels against the numpy fallback.

Usage::

    python benchmarks/bench_kernels.py [--repeat 5]

Each row reports the best wall time per backend and the speedup. The
forces computed by both backends are checked to agree before timing.
"""
import argparse
import timeit

import numpy as np

from casimir_piston import _backend
from casimir_piston.force import KernelSpec, ThermalState, force_finite_T, force_T0, kernel_force
from casimir_piston.spectrum import spectrum_circle, spectrum_triangle


def cases():
    tri = spectrum_triangle(1.0, 4000)
    circ = spectrum_circle(1.0, 3000)
    x = np.geomspace(1e-3, 600.0, 200000)
    return [
        ("bessel_k0k1 (2e5 points)",
         lambda b: _backend.get(b).bessel_k0k1(x)[0].sum()),
        ("force_T0 triangle 4000, L=0.05",
         lambda b: force_T0(tri, 0.05, strict=False, backend=b).value),
        ("force_finite_T triangle 4000, L=0.3, T=0.05",
         lambda b: force_finite_T(tri, ThermalState(0.3, 0.05), strict=False, backend=b).value),
        ("kernel_force circle 3000, Q=1e4",
         lambda b: kernel_force(circ, 0.5, KernelSpec("exp", 1e4, 100.0), backend=b).net),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    backends = list(_backend.available_backends())
    if "compiled" not in backends:
        print("compiled extension not built; timing the fallback only")
    print(f"{'case':48s}" + "".join(f"{b:>12s}" for b in backends) + f"{'speedup':>10s}")
    for name, fn in cases():
        vals = [fn(b) for b in backends]
        if len(vals) > 1 and not np.isclose(vals[0], vals[1], rtol=1e-12):
            raise SystemExit(f"{name}: backends disagree {vals}")
        times = [min(timeit.repeat(lambda: fn(b), number=1, repeat=args.repeat))
                 for b in backends]
        speed = f"{times[-1] / times[0]:9.1f}x" if len(times) > 1 else ""
        print(f"{name:48s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times) + f" {speed}")


if __name__ == "__main__":
    main()
