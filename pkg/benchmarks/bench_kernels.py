"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

from sphere_rigidity import kernels
from sphere_rigidity.lattice import GridSpec, SpaceModel, enumerate_grid_sphere


def coded_sphere(n, m):
    fns = enumerate_grid_sphere(SpaceModel.standard(n), GridSpec(m))
    return [tuple(int(v * m) for v in f.values) for f in fns]


def cases():
    for n, m in [(3, 4), (4, 4), (5, 3)]:
        rows = coded_sphere(n, m)
        yield f"distance_matrix n={n} m={m} ({len(rows)} fns)", lambda b, r=rows: kernels.distance_matrix(r, backend=b)
    for n, m in [(2, 5), (3, 2), (3, 1)]:
        dist = kernels.distance_matrix(coded_sphere(n, m))
        yield f"isometry_search n={n} m={m} ({len(dist)} fns)", lambda b, d=dist: kernels.isometry_search(d, backend=b)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = kernels.available_backends()
    print(f"{'case':<44}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for label, run in cases():
        times = {b: min(timeit.repeat(lambda: run(b), number=1, repeat=args.repeat)) for b in backends}
        row = f"{label:<44}" + "".join(f"{times[b] * 1e3:>10.2f}ms" for b in backends)
        if "cython" in times:
            row += f"{times['python'] / times['cython']:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
