"""Random instance builders and independent float oracles for the tests."""

from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy.optimize import linprog

from robust_tverberg.geom_core import PointConfig


def random_config(rng, N, d, lo=-9, hi=9):
    rows = rng.integers(lo, hi + 1, size=(N, d))
    return PointConfig.from_rows(rows.tolist())


def det(rows):
    m = [list(map(Fraction, r)) for r in rows]
    n, s = len(m), Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            s = -s
        s *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return s


def in_general_position(config):
    d = config.dim
    return all(
        det([[*p, 1] for p in sub]) != 0 for sub in combinations(config.points, d + 1)
    ) if len(config) > d else True


def general_position_config(rng, N, d, lo=-30, hi=30):
    while True:
        cfg = random_config(rng, N, d, lo, hi)
        if in_general_position(cfg):
            return cfg


def lp_origin_in_hull(points):
    """Float LP: is 0 a convex combination of the points?"""
    if not points:
        return False
    P = np.array([[float(x) for x in p] for p in points]).T
    A = np.vstack([P, np.ones(P.shape[1])])
    b = np.zeros(A.shape[0])
    b[-1] = 1
    res = linprog(np.zeros(P.shape[1]), A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    return res.status == 0


def lp_common_point(parts):
    """Float LP for a common point of the part hulls."""
    if any(not p for p in parts):
        return False
    d = len(parts[0][0])
    sizes = [len(p) for p in parts]
    nv = d + sum(sizes)
    rows, rhs = [], []
    off = d
    for p in parts:
        for c in range(d):
            row = np.zeros(nv)
            row[c] = -1
            row[off:off + len(p)] = [float(q[c]) for q in p]
            rows.append(row)
            rhs.append(0)
        row = np.zeros(nv)
        row[off:off + len(p)] = 1
        rows.append(row)
        rhs.append(1)
        off += len(p)
    bounds = [(None, None)] * d + [(0, None)] * sum(sizes)
    res = linprog(np.zeros(nv), A_eq=np.array(rows), b_eq=rhs, bounds=bounds, method="highs")
    return res.status == 0


def subsets(n):
    for mask in range(1 << n):
        yield mask, [i for i in range(n) if mask >> i & 1]
