"""Time the compiled and numpy reconstruction kernels.

    python3 benchmarks/bench_kernels.py [--rows 200000] [--repeat 5]

Reports best-of-``repeat`` wall time for the ENO/WENO row kernels and for one
full semi-discrete right-hand side of the 2D explosion problem.
"""

import argparse
import time

import numpy as np

from esno import _backend
from esno.integrator import semi_discrete_rhs
from esno.problems import get_problem, initial_condition
from esno.schemes import parse_scheme_name
from esno.stencils import stencil_coefficients


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_cases(n_rows: int, rng):
    for k in (2, 3):
        st = stencil_coefficients(k)
        rows = rng.normal(size=(n_rows, 2 * k - 1))
        yield f"eno{k}_rows", lambda kern, r=rows, s=st, k=k: kern.eno_rows(r, s.C, k)
        for z in (False, True):
            label = f"weno{2 * k - 1}{'z' if z else 'js'}_rows"
            yield label, lambda kern, r=rows, s=st, z=z: kern.weno_rows(r, s.C, s.gamma, s.A, s.G, 1e-6, z)


def rhs_case(n: int):
    spec = get_problem("explosion")
    fld, model = initial_condition(spec, n), spec.model()
    scheme = parse_scheme_name("EC6-WENOJS-5")
    return lambda: semi_discrete_rhs(fld, model, scheme)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--n2d", type=int, default=100, help="cells per axis of the RHS case")
    args = ap.parse_args(argv)

    names = _backend.available_backends()
    kernels = {name: _backend.load_backend(name) for name in names}
    rng = np.random.default_rng(0)
    print(f"{'case':<22}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else ""))

    def report(label, times):
        line = f"{label:<22}" + "".join(f"{times[n] * 1e3:>10.2f}ms" for n in names)
        if len(names) > 1:
            line += f"{times['python'] / times['cython']:>11.1f}x"
        print(line)

    for label, fn in kernel_cases(args.rows, rng):
        report(label, {n: best_of(lambda: fn(kern), args.repeat) for n, kern in kernels.items()})

    rhs = rhs_case(args.n2d)
    saved = _backend.kernels
    times = {}
    try:
        for n, kern in kernels.items():
            _backend.kernels = kern
            times[n] = best_of(rhs, args.repeat)
    finally:
        _backend.kernels = saved
    report(f"rhs explosion {args.n2d}^2", times)


if __name__ == "__main__":
    main()
