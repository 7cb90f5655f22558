"""Exact geometric predicates: origin in a convex hull, common points of
hulls, and the finite half-space family that certifies every subset."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence, Union

from . import _arrangement, _simplex
from .errors import DimensionMismatch
from .kernels import maximal_indices

Scalar = Fraction
Point = tuple[Fraction, ...]
Number = Union[int, str, Fraction]


def to_scalar(value: Number) -> Fraction:
    """Parse an exact rational from an int, a Fraction, "p/q" or a decimal string.

    Floats go through their shortest repr, so ``0.1`` becomes ``1/10``.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def format_scalar(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def as_point(coords: Iterable[Number]) -> Point:
    return tuple(to_scalar(c) for c in coords)


def _common_dim(points: Sequence[Sequence], dim: Optional[int] = None) -> int:
    for p in points:
        if dim is None:
            dim = len(p)
        elif len(p) != dim:
            raise DimensionMismatch(f"expected dimension {dim}, got {len(p)}")
    if dim is None:
        return 1
    if dim < 1:
        raise DimensionMismatch("dimension must be positive")
    return dim


@dataclass(frozen=True)
class PointConfig:
    """An ordered point set in R^dim with exact coordinates; index i is point i."""

    dim: int
    points: tuple[Point, ...]

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionMismatch("dimension must be positive")
        if not self.points:
            raise ValueError("a point configuration needs at least one point")
        pts = tuple(as_point(p) for p in self.points)
        _common_dim(pts, self.dim)
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Number]]) -> "PointConfig":
        return cls(len(rows[0]), tuple(as_point(r) for r in rows))

    def __len__(self) -> int:
        return len(self.points)

    def translated(self, shift: Sequence[Number]) -> "PointConfig":
        t = as_point(shift)
        return PointConfig(self.dim, tuple(tuple(a + b for a, b in zip(p, t)) for p in self.points))


@dataclass(frozen=True)
class Halfspace:
    """Closed half-space ``{z : <normal, z> <= offset}``."""

    normal: tuple[Fraction, ...]
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        normal = as_point(self.normal)
        if not any(normal):
            raise ValueError("half-space normal must be nonzero")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", to_scalar(self.offset))

    @property
    def contains_origin(self) -> bool:
        return self.offset >= 0

    def contains(self, z: Sequence[Fraction]) -> bool:
        if len(z) != len(self.normal):
            raise DimensionMismatch("point and half-space dimensions differ")
        return sum(a * b for a, b in zip(self.normal, z)) <= self.offset

    def excludes_all(self, points: Iterable[Sequence[Fraction]]) -> bool:
        return not any(self.contains(p) for p in points)


@dataclass(frozen=True)
class HullDecision:
    """Outcome of :func:`origin_in_hull` with its certificate."""

    inside: bool
    coefficients: Optional[tuple[Fraction, ...]] = None
    witness: Optional[Halfspace] = None

    def __bool__(self) -> bool:
        return self.inside


def check_hull_decision(points: Sequence[Sequence[Fraction]], decision: HullDecision) -> bool:
    """Re-verify a certificate with exact arithmetic."""
    if decision.inside:
        lam = decision.coefficients
        if lam is None or len(lam) != len(points) or any(c < 0 for c in lam) or sum(lam) != 1:
            return False
        dim = len(points[0])
        return all(sum(c * p[k] for c, p in zip(lam, points)) == 0 for k in range(dim))
    h = decision.witness
    return h is not None and h.contains_origin and h.excludes_all(points)


def origin_in_hull(points: Sequence[Sequence[Number]], dim: Optional[int] = None) -> HullDecision:
    """Decide whether 0 lies in the closed convex hull of ``points``.

    >>> origin_in_hull([(1, 0), (-1, 0)]).coefficients
    (Fraction(1, 2), Fraction(1, 2))
    """
    dim = _common_dim(points, dim)
    pts = [as_point(p) for p in points]
    if not pts:
        return HullDecision(False, witness=Halfspace(tuple(int(k == 0) for k in range(dim)), 0))
    A = [[p[k] for p in pts] for k in range(dim)] + [[Fraction(1)] * len(pts)]
    b = [Fraction(0)] * dim + [Fraction(1)]
    res = _simplex.solve(A, b)
    if res.feasible:
        return HullDecision(True, coefficients=res.x)
    # y = (w, t) with <w, p> + t >= 0 and t < 0, so <w, p> > 0 for every point
    w = res.farkas[:dim]
    return HullDecision(False, witness=Halfspace(w, 0))


@dataclass(frozen=True)
class CommonPoint:
    """Outcome of :func:`common_point_of_hulls`.

    ``coefficients[j]`` are convex weights on ``parts[j]`` that all produce ``point``.
    """

    intersect: bool
    point: Optional[Point] = None
    coefficients: Optional[tuple[tuple[Fraction, ...], ...]] = None

    def __bool__(self) -> bool:
        return self.intersect


def common_point_of_hulls(parts: Sequence[Sequence[Sequence[Number]]]) -> CommonPoint:
    """Find a point shared by the convex hulls of all ``parts``, if any."""
    if not parts:
        raise ValueError("need at least one part")
    dim = _common_dim([p for part in parts for p in part])
    pp = [[as_point(p) for p in part] for part in parts]
    if any(not part for part in pp):
        return CommonPoint(False)
    sizes = [len(part) for part in pp]
    offsets = [sum(sizes[:j]) for j in range(len(pp))]
    nvar = sum(sizes)
    A: list[list[Fraction]] = []
    b: list[Fraction] = []
    for j, part in enumerate(pp):
        row = [Fraction(0)] * nvar
        for i in range(len(part)):
            row[offsets[j] + i] = Fraction(1)
        A.append(row)
        b.append(Fraction(1))
    first = pp[0]
    for j in range(1, len(pp)):
        for k in range(dim):
            row = [Fraction(0)] * nvar
            for i, p in enumerate(first):
                row[i] = p[k]
            for i, p in enumerate(pp[j]):
                row[offsets[j] + i] = -p[k]
            A.append(row)
            b.append(Fraction(0))
    res = _simplex.solve(A, b)
    if not res.feasible:
        return CommonPoint(False)
    lam = tuple(tuple(res.x[offsets[j] : offsets[j] + sizes[j]]) for j in range(len(pp)))
    point = tuple(sum(c * p[k] for c, p in zip(lam[0], first)) for k in range(dim))
    return CommonPoint(True, point=point, coefficients=lam)


def check_common_point(parts: Sequence[Sequence[Sequence[Fraction]]], res: CommonPoint) -> bool:
    if not res.intersect:
        return False
    for lam, part in zip(res.coefficients, parts):
        if any(c < 0 for c in lam) or sum(lam) != 1:
            return False
        dim = len(res.point)
        if any(sum(c * p[k] for c, p in zip(lam, part)) != res.point[k] for k in range(dim)):
            return False
    return True


def integer_direction(p: Sequence[Fraction]) -> tuple[int, ...]:
    """Positive multiple of ``p`` with integer entries (signs of dot products survive)."""
    den = 1
    for x in p:
        den = lcm(den, Fraction(x).denominator)
    return tuple(int(Fraction(x) * den) for x in p)


@dataclass(frozen=True)
class HalfspaceFamily:
    """Half-spaces through the origin certifying origin-in-hull for every subset.

    ``excluded[t]`` is the bitmask of generating points lying strictly
    outside ``halfspaces[t]``.
    """

    ambient_dim: int
    halfspaces: tuple[Halfspace, ...]
    excluded: tuple[int, ...] = field(default=())
    n_points: int = 0

    def __len__(self) -> int:
        return len(self.halfspaces)

    def certifies_outside(self, subset_mask: int) -> Optional[int]:
        """Index of a member disjoint from the subset, or None."""
        for t, ex in enumerate(self.excluded):
            if subset_mask & ~ex == 0:
                return t
        return None


def halfspace_family(points: Sequence[Sequence[Number]], maximal_only: bool = False) -> HalfspaceFamily:
    """Enumerate one closed half-space through 0 per separation class of ``points``.

    A class is the set of points a half-space leaves strictly outside.
    Empty classes are dropped unless nothing else exists.  With
    ``maximal_only`` only containment-maximal classes are kept, which is
    still enough to certify every subset.
    """
    if not points:
        raise ValueError("need at least one point")
    dim = _common_dim(points)
    ints = [integer_direction(as_point(p)) for p in points]
    normals = sorted({_arrangement.canonical(v)[0] for v in ints if any(v)})
    reps = _arrangement.cells(normals, dim)

    by_mask: dict[int, tuple[int, ...]] = {}
    for w in reps:
        mask = 0
        for i, v in enumerate(ints):
            if _arrangement.dot(w, v) > 0:
                mask |= 1 << i
        by_mask.setdefault(mask, w)
    if len(by_mask) > 1:
        by_mask.pop(0, None)
    masks = sorted(by_mask, key=lambda m: (-bin(m).count("1"), m))
    if maximal_only:
        masks = [masks[i] for i in maximal_indices(masks)]
    hs = tuple(Halfspace(by_mask[m], 0) for m in masks)
    fam = HalfspaceFamily(dim, hs, tuple(masks), len(points))
    assert len(fam) <= max(1, len(points) ** dim)
    return fam
