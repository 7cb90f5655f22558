"""Exact linear feasibility: find x >= 0 with A x = b, or a Farkas vector.

Phase-one simplex over an integer-preserving tableau (every entry is an
integer, the true tableau is ``T / D`` for the last pivot ``D``).  Bland's
rule keeps it from cycling.  Infeasibility is reported with a vector ``y``
satisfying ``A^T y >= 0`` and ``b . y < 0``, read off the reduced costs of
the artificial columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    x: Optional[tuple[Fraction, ...]] = None
    farkas: Optional[tuple[int, ...]] = None


def _integer_row(row: Sequence[Fraction], rhs: Fraction) -> tuple[list[int], int, int]:
    den = 1
    for v in row:
        den = lcm(den, Fraction(v).denominator)
    den = lcm(den, Fraction(rhs).denominator)
    ints = [int(Fraction(v) * den) for v in row]
    return ints, int(Fraction(rhs) * den), den


def _primitive(vec: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for v in vec:
        g = gcd(g, v)
    if g <= 1:
        return tuple(vec)
    return tuple(v // g for v in vec)


def solve(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Feasibility:
    """Decide ``{x >= 0 : A x = b}`` exactly.

    ``A`` is given row-wise.  Zero rows are allowed.  The returned Farkas
    vector is primitive and integral, indexed like the rows of ``A``.
    """
    m = len(A)
    nvar = len(A[0]) if m else 0
    if m == 0:
        return Feasibility(True, x=tuple(Fraction(0) for _ in range(nvar)))

    rows: list[list[int]] = []
    row_scale: list[int] = []
    for i in range(m):
        ints, rhs, den = _integer_row(A[i], b[i])
        sign = 1
        if rhs < 0:
            ints = [-v for v in ints]
            rhs = -rhs
            sign = -1
        art = [0] * m
        art[i] = 1
        rows.append(ints + art + [rhs])
        row_scale.append(sign * den)

    width = nvar + m + 1
    obj = [0] * width
    for j in range(nvar):
        obj[j] = -sum(rows[i][j] for i in range(m))
    obj[-1] = -sum(rows[i][-1] for i in range(m))
    tab = rows + [obj]
    basis = [nvar + i for i in range(m)]
    D = 1

    while True:
        q = -1
        for j in range(width - 1):
            if obj[j] < 0:
                q = j
                break
        if q < 0:
            break
        p = -1
        for i in range(m):
            a = tab[i][q]
            if a <= 0:
                continue
            if p < 0:
                p = i
                continue
            # compare rhs_i / a with rhs_p / a_p
            lhs = tab[i][-1] * tab[p][q]
            rhs_ = tab[p][-1] * a
            if lhs < rhs_ or (lhs == rhs_ and basis[i] < basis[p]):
                p = i
        if p < 0:  # pragma: no cover - phase one is bounded below by zero
            raise ArithmeticError("phase-one objective unbounded")
        piv = tab[p][q]
        prow = tab[p]
        for i in range(m + 1):
            if i == p:
                continue
            row = tab[i]
            f = row[q]
            if f == 0:
                if piv != D:
                    for j in range(width):
                        row[j] = row[j] * piv // D
                continue
            for j in range(width):
                row[j] = (row[j] * piv - f * prow[j]) // D
        D = piv
        basis[p] = q
        obj = tab[m]

    if obj[-1] < 0:
        # optimum sum of artificials is -obj[-1]/D > 0; y_i = 1 - obj[nvar+i]/D
        # and z = -y certifies infeasibility; undo row scaling and flips
        z = [obj[nvar + i] - D for i in range(m)]
        y = [z[i] * row_scale[i] for i in range(m)]
        return Feasibility(False, farkas=_primitive(y))

    x = [Fraction(0)] * nvar
    for i, j in enumerate(basis):
        if j < nvar:
            x[j] = Fraction(tab[i][-1], D)
    return Feasibility(True, x=tuple(x))


def check_farkas(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction], y: Sequence[int]) -> bool:
    m = len(A)
    nvar = len(A[0]) if m else 0
    for j in range(nvar):
        if sum(Fraction(A[i][j]) * y[i] for i in range(m)) < 0:
            return False
    return sum(Fraction(b[i]) * y[i] for i in range(m)) < 0
