"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--batch 20000] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from sun_euler import _fallback, measure
from sun_euler.group import element_program, random_coordinates

try:
    from sun_euler import _ext
except ImportError:
    _ext = None


def bench(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--batch", type=int, default=20_000)
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()
    if _ext is None:
        print("compiled extension not available; only the fallback can run")
    rng = np.random.default_rng(0)
    print(f"{'kernel':<16}{'n':>3}{'python [ms]':>14}{'compiled [ms]':>16}{'speedup':>10}{'max |diff|':>13}")
    for n in (2, 3, 4, 6, 8):
        a = random_coordinates(n, rng, size=args.batch)
        prog = np.ascontiguousarray(element_program(n))
        dens = measure._density_program(n)
        cases = [
            ("apply_program", lambda m, a=a, prog=prog, n=n: m.apply_program(prog, a, n)),
            ("density_terms", lambda m, a=a, dens=dens: m.density_terms(a, *dens)),
        ]
        for name, call in cases:
            t_py = bench(lambda: call(_fallback), args.repeat)
            if _ext is None:
                print(f"{name:<16}{n:>3}{t_py * 1e3:>14.2f}{'-':>16}{'-':>10}{'-':>13}")
                continue
            t_c = bench(lambda: call(_ext), args.repeat)
            diff = float(np.max(np.abs(call(_fallback) - call(_ext))))
            print(f"{name:<16}{n:>3}{t_py * 1e3:>14.2f}{t_c * 1e3:>16.2f}{t_py / t_c:>10.1f}{diff:>13.1e}")


if __name__ == "__main__":
    main()
