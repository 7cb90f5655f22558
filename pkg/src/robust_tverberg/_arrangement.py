"""Full-dimensional cells of a central hyperplane arrangement.

The arrangement is ``{w : <w, v> = 0}`` for integer vectors ``v``.  Every
cell of an essential arrangement in R^k (k >= 2) is a pointed cone, so its
closure contains an extreme ray cut out by k-1 independent hyperplanes.
Walking every such ray and recursing on the hyperplanes through it (an
arrangement of rank k-1) therefore reaches every cell.  Non-essential
arrangements are projected onto coordinates that carry their span.

All arithmetic is on Python integers; representatives come back as
primitive integer directions lying strictly inside their cell.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Sequence

Vec = tuple[int, ...]


def primitive(v: Sequence[int]) -> Vec:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def canonical(v: Sequence[int]) -> tuple[Vec, int]:
    """Primitive direction with first nonzero entry positive, plus the sign."""
    p = primitive(v)
    for x in p:
        if x:
            if x < 0:
                return tuple(-y for y in p), -1
            return p, 1
    raise ValueError("zero vector has no direction")


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _echelon_pivots(rows: Sequence[Vec], k: int) -> list[int]:
    """Pivot columns of the row space of ``rows`` (fraction-free elimination)."""
    mat = [list(r) for r in rows]
    pivots: list[int] = []
    top = 0
    for col in range(k):
        piv = None
        for i in range(top, len(mat)):
            if mat[i][col]:
                piv = i
                break
        if piv is None:
            continue
        mat[top], mat[piv] = mat[piv], mat[top]
        a = mat[top][col]
        for i in range(top + 1, len(mat)):
            c = mat[i][col]
            if c:
                mat[i] = [a * x - c * y for x, y in zip(mat[i], mat[top])]
        pivots.append(col)
        top += 1
        if top == len(mat):
            break
    return pivots


def _null_direction(rows: Sequence[Vec], k: int) -> Vec | None:
    """Nonzero integer vector orthogonal to k-1 rows, or None if they are dependent."""
    # generalized cross product: signed (k-1)x(k-1) minors
    out = []
    for drop in range(k):
        sub = [[r[c] for c in range(k) if c != drop] for r in rows]
        det = _det(sub)
        out.append(det if drop % 2 == 0 else -det)
    if not any(out):
        return None
    return primitive(out)


def _det(mat: list[list[int]]) -> int:
    n = len(mat)
    if n == 0:
        return 1
    if n == 1:
        return mat[0][0]
    if n == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    # Bareiss
    m = [row[:] for row in mat]
    sign = 1
    prev = 1
    for i in range(n - 1):
        if m[i][i] == 0:
            for j in range(i + 1, n):
                if m[j][i]:
                    m[i], m[j] = m[j], m[i]
                    sign = -sign
                    break
            else:
                return 0
        for j in range(i + 1, n):
            for c in range(i + 1, n):
                m[j][c] = (m[j][c] * m[i][i] - m[j][i] * m[i][c]) // prev
        prev = m[i][i]
    return sign * m[n - 1][n - 1]


def cells(normals: Sequence[Vec], k: int) -> list[Vec]:
    """One interior direction per full-dimensional cell of the arrangement.

    ``normals`` must be nonzero, pairwise non-parallel, canonical vectors
    of length ``k``.
    """
    return list(_cells(tuple(sorted(normals)), k))


@lru_cache(maxsize=4096)
def _cells(normals: tuple[Vec, ...], k: int) -> tuple[Vec, ...]:
    if not normals:
        return (tuple(1 if i == 0 else 0 for i in range(k)),)
    pivots = _echelon_pivots(normals, k)
    rank = len(pivots)
    if rank < k:
        proj = [canonical([v[c] for c in pivots]) for v in normals]
        sub = tuple(sorted({p for p, _ in proj}))
        out = []
        for w in _cells(sub, rank):
            full = [0] * k
            for c, x in zip(pivots, w):
                full[c] = x
            out.append(tuple(full))
        return tuple(out)
    if k == 1:
        return ((1,), (-1,))

    found: dict[tuple[int, ...], Vec] = {}
    seen_rays: set[Vec] = set()
    for subset in combinations(normals, k - 1):
        u = _null_direction(subset, k)
        if u is None:
            continue
        u, _ = canonical(u)
        if u in seen_rays:
            continue
        seen_rays.add(u)
        zero = tuple(v for v in normals if dot(u, v) == 0)
        rest = [(v, dot(u, v)) for v in normals if dot(u, v) != 0]
        local = _cells(zero, k)
        for s in (1, -1):
            us = u if s == 1 else tuple(-x for x in u)
            for g in local:
                scale = 1
                for v, a in rest:
                    a *= s
                    b = dot(g, v)
                    if (a > 0) != (b > 0) and b != 0:
                        need = abs(b) // abs(a) + 1
                        if need > scale:
                            scale = need
                w = primitive([scale * x + y for x, y in zip(us, g)])
                key = tuple(1 if dot(w, v) > 0 else -1 for v in normals)
                if key not in found:
                    found[key] = w
    return tuple(found.values())
