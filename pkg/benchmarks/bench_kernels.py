"""Compare the compiled and pure-Python kernels.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
from __future__ import annotations

import argparse
import itertools
import timeit

import numpy as np

from polycons import _pykernels
from polycons.graph import _perm_tables

try:
    from polycons import _ckernels
except ImportError:  # extension not built
    _ckernels = None


def cases():
    rng = np.random.default_rng(0)
    lams = rng.uniform(-0.9, 0.9, 12)
    grid = np.linspace(-1.0, 1.0, 601)
    edges, perms = _perm_tables(6)
    bits = np.array(list(itertools.product((0, 1), repeat=len(edges)))[::16], dtype=np.int64)
    n = 30
    x = rng.standard_normal((n, n))
    mats = np.stack([(x + x.T) / (4 * n), np.eye(n)])
    seq = np.zeros(3000, dtype=np.int64)
    x0 = rng.standard_normal(n)
    return {
        "minmax_grid (12 eigenvalues, 601^2 grid)": lambda k: k.minmax_grid(lams, grid),
        f"canonical_codes ({bits.shape[0]} graphs, 720 perms)": lambda k: k.canonical_codes(bits, perms),
        "propagate (n=30, 3000 steps)": lambda k: k.propagate(mats, seq, x0, 0.0, np.inf),
    }


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    print(f"{'kernel':48s} {'python [s]':>11s} {'cython [s]':>11s} {'speedup':>8s}")
    for name, fn in cases().items():
        py = min(timeit.repeat(lambda: fn(_pykernels), number=1, repeat=args.repeat))
        if _ckernels is None:
            print(f"{name:48s} {py:11.4f} {'n/a':>11s} {'n/a':>8s}")
            continue
        cy = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat))
        print(f"{name:48s} {py:11.4f} {cy:11.4f} {py / cy:8.1f}")


if __name__ == "__main__":
    main()
