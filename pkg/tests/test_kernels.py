import os
import subprocess
import sys
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from robust_tverberg import _kernels_py as pure
from robust_tverberg import kernels

compiled = pytest.importorskip("robust_tverberg._kernels") if kernels.COMPILED else None
needs_compiled = pytest.mark.skipif(compiled is None, reason="extension not built")

masks64 = st.lists(st.integers(0, 2**64 - 1), max_size=25)
masks12 = st.lists(st.integers(0, 2**12 - 1), max_size=25)


def naive_maximal(masks):
    return [i for i, m in enumerate(masks)
            if not any((m & ~o == 0) and (o != m or j < i) for j, o in enumerate(masks))]


@settings(max_examples=200, deadline=None)
@given(masks12)
def test_pure_maximal_matches_naive(masks):
    assert pure.maximal_indices(masks) == naive_maximal(masks)


@settings(max_examples=100, deadline=None)
@given(masks12, masks12)
def test_intersect_returns_maximal_products(a, b):
    out = pure.intersect_maximal(a, b)
    products = {x & y for x in a for y in b}
    top = {p for p in products if not any(p != o and p & ~o == 0 for o in products)}
    assert {m for m, _, _ in out} == top
    for m, i, j in out:
        assert a[i] & b[j] == m


@settings(max_examples=200, deadline=None)
@given(masks12, masks12, st.integers(1, 5), st.fractions(0, 6))
def test_pure_ledger_accept_matches_fractions(g, h, r, lam):
    share = F(1, r)
    expect = all(bin(v & x).count("1") >= share * bin(v).count("1") - lam for v in g for x in h)
    assert pure.ledger_accept(g, h, share.numerator, share.denominator, lam.numerator, lam.denominator) == expect


@needs_compiled
@settings(max_examples=300, deadline=None)
@given(masks64, masks64)
def test_compiled_matches_pure(a, b):
    assert compiled.maximal_indices(a) == pure.maximal_indices(a)
    assert compiled.intersect_maximal(a, b) == pure.intersect_maximal(a, b)
    for x in a:
        assert compiled.popcount(x) == pure.popcount(x)


@needs_compiled
@settings(max_examples=300, deadline=None)
@given(masks64, masks64, st.fractions(0, 1).filter(lambda f: f > 0), st.fractions(0, 40))
def test_compiled_ledger_matches_pure(g, h, share, lam):
    args = (g, h, share.numerator, share.denominator, lam.numerator, lam.denominator)
    assert compiled.ledger_accept(*args) == pure.ledger_accept(*args)


@needs_compiled
def test_compiled_ledger_with_huge_rationals():
    g, h = [2**63 + 5], [2**62 + 1]
    share, lam = F(2**70 + 1, 2**71), F(3**50, 7**20)
    args = (g, h, share.numerator, share.denominator, lam.numerator, lam.denominator)
    assert compiled.ledger_accept(*args) == pure.ledger_accept(*args)


def test_selector_falls_back_for_wide_masks():
    wide = [1 << 70, (1 << 70) | 1, 3]
    assert kernels.maximal_indices(wide) == pure.maximal_indices(wide)
    assert kernels.intersect_maximal(wide, wide) == pure.intersect_maximal(wide, wide)


def test_pure_mode_env_var():
    code = "from robust_tverberg import kernels; print(kernels.COMPILED)"
    env = dict(os.environ, ROBUST_TVERBERG_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"


def test_random_bulk_agreement():
    rng = np.random.default_rng(0)
    for _ in range(50):
        a = [int(x) for x in rng.integers(0, 2**40, size=int(rng.integers(1, 60)))]
        b = [int(x) for x in rng.integers(0, 2**40, size=int(rng.integers(1, 60)))]
        assert kernels.intersect_maximal(a, b) == pure.intersect_maximal(a, b)
