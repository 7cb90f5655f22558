"""The exact LP and the arrangement walker that the public modules sit on."""

import math
from itertools import combinations
from fractions import Fraction as F

import numpy as np
from scipy.optimize import linprog

from robust_tverberg._arrangement import canonical, cells, dot
from robust_tverberg._simplex import check_farkas, solve

from support import det


def test_simplex_agrees_with_scipy():
    rng = np.random.default_rng(0)
    for _ in range(300):
        m, n = int(rng.integers(1, 5)), int(rng.integers(1, 7))
        A = rng.integers(-4, 5, size=(m, n))
        b = rng.integers(-4, 5, size=m)
        res = solve([[F(int(x)) for x in row] for row in A], [F(int(x)) for x in b])
        ref = linprog(np.zeros(n), A_eq=A, b_eq=b, bounds=(0, None), method="highs")
        assert res.feasible == (ref.status == 0)
        if res.feasible:
            assert all(x >= 0 for x in res.x)
            assert all(sum(a * x for a, x in zip(row, res.x)) == bi for row, bi in zip(A.tolist(), b.tolist()))
        else:
            assert check_farkas(A.tolist(), b.tolist(), res.farkas)


def test_simplex_degenerate_rows():
    res = solve([[F(0), F(0)], [F(1), F(1)]], [F(0), F(1)])
    assert res.feasible and sum(res.x) == 1
    res = solve([[F(0), F(0)]], [F(1)])
    assert not res.feasible and check_farkas([[0, 0]], [1], res.farkas)


def generic_normals(rng, N, k):
    while True:
        rows = [tuple(int(x) for x in rng.integers(-9, 10, size=k)) for _ in range(N)]
        if all(any(r) for r in rows) and all(
            det([rows[i] for i in idx]) != 0 for idx in combinations(range(N), k)
        ):
            return rows


def test_generic_cell_counts():
    rng = np.random.default_rng(1)
    for k in (2, 3, 4):
        for N in range(1, 8):
            normals = [canonical(v)[0] for v in generic_normals(rng, N, k)]
            got = cells(normals, k)
            assert len(got) == 2 * sum(math.comb(N - 1, i) for i in range(k))
            signs = {tuple(dot(w, v) > 0 for v in normals) for w in got}
            assert len(signs) == len(got)
            assert all(dot(w, v) != 0 for w in got for v in normals)


def test_sampled_sign_vectors_are_found():
    rng = np.random.default_rng(2)
    normals = list({canonical(tuple(int(x) for x in rng.integers(-3, 4, size=3)))[0] for _ in range(9)} - {(0, 0, 0)})
    found = {tuple(dot(w, v) > 0 for v in normals) for w in cells(normals, 3)}
    for w in rng.normal(size=(4000, 3)):
        s = [float(np.dot(w, v)) for v in normals]
        if min(abs(x) for x in s) > 1e-9:
            assert tuple(x > 0 for x in s) in found


def test_rank_deficient_arrangement():
    # all normals in the plane z = 0: cells are wedges in (x, y)
    normals = [(1, 0, 0), (0, 1, 0), (1, 1, 0)]
    got = cells(normals, 3)
    assert len(got) == 6
