"""Compare the numba-compiled kernels with the numpy/scipy fallback path.

Two levels are timed:

* kernels in-process: compiled loop kernels against their numpy/LAPACK/scipy
  counterparts on the shapes the certification actually uses (9x9 Hermitian
  eigenproblems, 5x3 constraint stacks, one Nelder-Mead local search);
* end to end: ``edge_search`` on a (4,4) family state with 300 restarts, run
  in a subprocess once with numba and once with ``EDGESTATES_NO_NUMBA=1``.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat N] [--restarts R]
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

END_TO_END = """
import time
from edgestates import SearchConfig, backend_name, edge_search
from edgestates.families import named_family
_, x = named_family("44", 2.0)
edge_search(x, SearchConfig(restarts=1))  # compile or load cache
t0 = time.perf_counter()
rep = edge_search(x, SearchConfig(restarts={restarts}, seed=0))
print(backend_name(), time.perf_counter() - t0, rep.min_objective)
"""


def _best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def bench_kernels(repeat):
    from edgestates import _kernels
    from edgestates._backend import HAVE_NUMBA

    if not HAVE_NUMBA:
        print("numba disabled in this process; kernel table skipped")
        return
    rng = np.random.default_rng(0)
    a = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    h = a + a.conj().T
    stack = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
    tau_kernel = rng.normal(size=(3, 3, 3)) + 1j * rng.normal(size=(3, 3, 3))
    kernel = rng.normal(size=(2, 3, 3)) + 1j * rng.normal(size=(2, 3, 3))
    p = rng.uniform(0, np.pi, size=4)

    # warm up the compiled versions
    _kernels.jacobi_eigh_loops(h)
    _kernels.hestenes_svd_loops(stack)
    _kernels.edge_objective_loops(p, 3, tau_kernel, kernel)
    _kernels.nelder_mead_edge(p, 0.5, 3, tau_kernel, kernel, 500, 1e-12, 1e-13)

    rows = [
        ("eigh 9x9", lambda: _kernels.jacobi_eigh_loops(h), lambda: _kernels.eigh_numpy(h), 200),
        ("svd 5x3", lambda: _kernels.hestenes_svd_loops(stack), lambda: _kernels.svd_numpy(stack), 2000),
        ("objective", lambda: _kernels.edge_objective_loops(p, 3, tau_kernel, kernel),
         lambda: _kernels.edge_objective_numpy(p, 3, tau_kernel, kernel), 2000),
        ("nelder-mead", lambda: _kernels.nelder_mead_edge(p, 0.5, 3, tau_kernel, kernel, 500, 1e-12, 1e-13),
         lambda: _kernels.nelder_mead_numpy(p, 0.5, 3, tau_kernel, kernel, 500, 1e-12, 1e-13), 5),
    ]
    print(f"{'kernel':<14}{'numba (us)':>14}{'numpy (us)':>14}{'speedup':>10}")
    for name, fast, slow, number in rows:
        tf = _best(fast, repeat, number) * 1e6
        ts = _best(slow, repeat, max(1, number // 10)) * 1e6
        print(f"{name:<14}{tf:>14.2f}{ts:>14.2f}{ts / tf:>10.1f}")


def bench_end_to_end(restarts):
    print(f"\nedge_search, (4,4) family, {restarts} restarts")
    results = {}
    for flag in ("", "1"):
        env = dict(os.environ, EDGESTATES_NO_NUMBA=flag)
        out = subprocess.run(
            [sys.executable, "-c", END_TO_END.format(restarts=restarts)],
            env=env, capture_output=True, text=True, check=True,
        ).stdout.split()
        backend, seconds, objective = out[0], float(out[1]), float(out[2])
        results[backend] = seconds
        print(f"  {backend:<6} {seconds:8.3f} s   min objective {objective:.6g}")
    if len(results) == 2:
        print(f"  speedup {results['numpy'] / results['numba']:.1f}x")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--restarts", type=int, default=300)
    args = parser.parse_args(argv)
    bench_kernels(args.repeat)
    bench_end_to_end(args.restarts)


if __name__ == "__main__":
    main()
