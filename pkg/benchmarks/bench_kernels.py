"""Time the compiled bitmask kernels against the pure-Python ones.

    python benchmarks/bench_kernels.py [--repeat 5] [--bits 40]
"""

import argparse
import sys
import timeit
from fractions import Fraction

import numpy as np

from robust_tverberg import _kernels_py as pure

try:
    from robust_tverberg import _kernels as compiled
except ImportError:
    compiled = None


def workloads(rng, bits):
    def masks(n, density):
        return [int(sum(1 << b for b in range(bits) if rng.random() < density)) for _ in range(n)]

    many, left, right = masks(4000, 0.7), masks(150, 0.8), masks(150, 0.8)
    gimel, halfspaces = masks(150, 0.6), masks(1500, 0.5)
    # slack of `bits` accepts everything, so the whole table is scanned
    share, lam = Fraction(1, 2), Fraction(bits)
    args = (share.numerator, share.denominator, lam.numerator, lam.denominator)
    return {
        "maximal_indices (4000 masks)": lambda k: k.maximal_indices(many),
        "intersect_maximal (150 x 150)": lambda k: k.intersect_maximal(left, right),
        "ledger_accept (150 x 1500)": lambda k: k.ledger_accept(gimel, halfspaces, *args),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--bits", type=int, default=40, help="mask width (at most 64 for the compiled path)")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if compiled is None:
        print("compiled extension not available; build with `pip install -e . --no-build-isolation`")
        return 1
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':32s} {'pure (ms)':>11s} {'compiled (ms)':>14s} {'speedup':>8s}")
    for name, fn in workloads(rng, args.bits).items():
        assert fn(pure) == fn(compiled), name
        t_pure = min(timeit.repeat(lambda: fn(pure), number=1, repeat=args.repeat))
        t_comp = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=args.repeat))
        print(f"{name:32s} {1e3 * t_pure:11.2f} {1e3 * t_comp:14.2f} {t_pure / t_comp:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
