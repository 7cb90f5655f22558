"""Bitmask kernels with a compiled fast path.

The Cython build is used when it imported and every mask fits in 64 bits;
set ``ROBUST_TVERBERG_PURE=1`` to force the Python versions.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Sequence

from . import _kernels_py

try:
    if os.environ.get("ROBUST_TVERBERG_PURE"):
        raise ImportError("pure kernels requested")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

COMPILED = _compiled is not None
_LIMIT = 1 << 64


def _fits(*seqs: Sequence[int]) -> bool:
    return all(0 <= x < _LIMIT for s in seqs for x in s)


def _pick(*seqs):
    if _compiled is not None and _fits(*seqs):
        return _compiled
    return _kernels_py


def popcount(x: int) -> int:
    return _kernels_py.popcount(x)


def maximal_indices(masks: Sequence[int]) -> list[int]:
    """Indices of the containment-maximal masks (first of any duplicates)."""
    return _pick(masks).maximal_indices(masks)


def intersect_maximal(a: Sequence[int], b: Sequence[int]) -> list[tuple[int, int, int]]:
    """Maximal masks among ``a[i] & b[j]``, each with one ``(i, j)`` producing it."""
    return _pick(a, b).intersect_maximal(a, b)


def ledger_accept(gimel: Sequence[int], inside: Sequence[int], share: Fraction, lam: Fraction) -> bool:
    """True iff ``|V & H| >= share * |V| - lam`` for every V in gimel and H in inside."""
    return _pick(gimel, inside).ledger_accept(
        gimel, inside, share.numerator, share.denominator, lam.numerator, lam.denominator
    )
