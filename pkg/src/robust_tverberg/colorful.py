"""Colorful variant: r-blocks, colorful transversals and their robust families.

An r-block is an r x r array of points in R^n whose columns each have the
origin in their convex hull.  A colorful transversal picks one entry per
row and per column, i.e. a permutation ``perm`` with ``perm[j]`` the
column chosen in row ``j``.  Lifting r points ``x_0..x_{r-1}`` of one
color class puts ``(x_a, 1) (x) v_j`` at row j, column a, so choosing
``perm`` sends point ``perm[j]`` to part j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Any, Optional, Sequence

import numpy as np

from .errors import BudgetExceeded, RetryBudgetExhausted
from .geom_core import (
    Halfspace,
    Point,
    as_point,
    common_point_of_hulls,
    halfspace_family,
    origin_in_hull,
)
from .kernels import intersect_maximal, ledger_accept, maximal_indices, popcount
from .robust_constructor import (
    ConstructionSchedule,
    GimelLedger,
    Real,
    _schedule,
    check_epsilon,
)
from .sarkaria_lift import SimplexFrame, simplex_frame, tensor


def derangements(r: int) -> int:
    """Permutations of r elements without fixed points: D_r = (r-1)(D_{r-1} + D_{r-2})."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    a, b = 1, 0  # D_0, D_1
    if r == 0:
        return a
    for k in range(2, r + 1):
        a, b = b, (k - 1) * (a + b)
    return b


def fixed_point_probability(r: int) -> Fraction:
    """Chance that a uniform permutation of r elements has at least one fixed point."""
    if r < 1:
        raise ValueError("r must be at least 1")
    return 1 - Fraction(derangements(r), math.factorial(r))


def m_col_bound(epsilon: Real, r: int) -> int:
    """``floor(ln(eps) / ln(1 - p_r)) + 1`` evaluated exactly at integer boundaries."""
    if r < 2:
        raise ValueError("r must be at least 2 (1 - p_1 = 0)")
    eps = check_epsilon(epsilon)
    if eps >= 1:
        raise ValueError("epsilon must lie in (0, 1)")
    q = 1 - fixed_point_probability(r)
    m = max(1, math.floor(math.log(float(eps)) / math.log(float(q))) + 1)
    while not q**m < eps:
        m += 1
    while m > 1 and q ** (m - 1) < eps:
        m -= 1
    return m


@dataclass(frozen=True)
class ColorfulParams:
    epsilon: Fraction
    r: int
    p_r: Fraction
    m_col: int

    def __post_init__(self):
        object.__setattr__(self, "epsilon", check_epsilon(self.epsilon))
        if self.p_r != fixed_point_probability(self.r):
            raise ValueError("p_r must equal fixed_point_probability(r)")
        if not 1 <= self.m_col <= self.bound:
            raise ValueError(f"m_col must lie in 1..{self.bound}")

    @property
    def bound(self) -> int:
        return 1 if self.epsilon == 1 else m_col_bound(self.epsilon, self.r)

    @classmethod
    def default(cls, epsilon: Real, r: int, m_col: Optional[int] = None) -> "ColorfulParams":
        eps = check_epsilon(epsilon)
        m = (1 if eps == 1 else m_col_bound(eps, r)) if m_col is None else m_col
        return cls(eps, r, fixed_point_probability(r), m)


@dataclass(frozen=True)
class RBlock:
    """``entries[j][a]``: row j (part), column a (source point)."""

    r: int
    entries: tuple[tuple[Point, ...], ...]

    def __post_init__(self):
        ents = tuple(tuple(as_point(p) for p in row) for row in self.entries)
        if len(ents) != self.r or any(len(row) != self.r for row in ents):
            raise ValueError("an r-block is an r x r array")
        dims = {len(p) for row in ents for p in row}
        if len(dims) != 1:
            raise ValueError("block entries must share one dimension")
        object.__setattr__(self, "entries", ents)

    @property
    def dim(self) -> int:
        return len(self.entries[0][0])

    def column(self, a: int) -> list[Point]:
        return [self.entries[j][a] for j in range(self.r)]

    def selected(self, perm: Sequence[int]) -> list[Point]:
        return [self.entries[j][perm[j]] for j in range(self.r)]

    def columns_contain_origin(self) -> bool:
        return all(origin_in_hull(self.column(a)).inside for a in range(self.r))


def block_from_colored_class(points: Sequence[Sequence[Real]], frame: SimplexFrame) -> RBlock:
    """Lift one color class of r points in R^d to an r-block in R^n."""
    if len(points) != frame.r:
        raise ValueError(f"a color class needs exactly {frame.r} points")
    one = Fraction(1)
    ys = [as_point(p) + (one,) for p in points]
    return RBlock(frame.r, tuple(tuple(tensor(y, v) for y in ys) for v in frame.vertices))


def blocks_from_classes(classes: Sequence[Sequence[Sequence[Real]]], r: int) -> list[RBlock]:
    frame = simplex_frame(r)
    return [block_from_colored_class(cls, frame) for cls in classes]


def is_colorful_transversal(perm: Sequence[int], r: int) -> bool:
    return sorted(perm) == list(range(r))


def block_hit_probability(block: RBlock, H: Halfspace, max_r: int = 8) -> Fraction:
    """Exact share of the r! colorful transversals with an entry in ``H``."""
    if not H.contains_origin:
        raise ValueError("the half-space must contain the origin")
    if block.r > max_r:
        raise BudgetExceeded(f"{block.r}! transversals exceed the enumeration budget")
    r = block.r
    inside = [[H.contains(block.entries[j][a]) for a in range(r)] for j in range(r)]
    hits = sum(1 for perm in permutations(range(r)) if any(inside[j][perm[j]] for j in range(r)))
    frac = Fraction(hits, math.factorial(r))
    assert frac >= fixed_point_probability(r)
    return frac


@dataclass(frozen=True)
class ColorfulFamily:
    """``transversals[k][b]`` is the permutation chosen in block b by transversal k."""

    transversals: tuple[tuple[tuple[int, ...], ...], ...]
    r: int
    seed: Optional[int] = None

    @property
    def m(self) -> int:
        return len(self.transversals)


def sample_colorful_family(N: int, r: int, m: int, seed: Optional[int]) -> ColorfulFamily:
    rng = np.random.default_rng(seed)
    return ColorfulFamily(
        tuple(tuple(tuple(rng.permutation(r).tolist()) for _ in range(N)) for _ in range(m)), r, seed
    )


def colorful_schedule(N: int, params: ColorfulParams, n: int, lam: Optional[Real] = None) -> ConstructionSchedule:
    """``A = (N r^2)^n`` and ``N_k = N_{k-1}(1 - p_r) + lambda``."""
    A = (N * params.r**2) ** n
    keep = 1 - params.p_r
    return _schedule(N, params.m_col, keep, A, params.epsilon, lam, 1 / params.p_r)


def _selected_points(blocks: Sequence[RBlock], trans: Sequence[Sequence[int]]) -> list[Point]:
    return [p for b, perm in zip(blocks, trans) for p in b.selected(perm)]


def _block_masks(point_mask: int, N: int, r: int) -> int:
    full = (1 << r) - 1
    out = 0
    for b in range(N):
        if (point_mask >> (b * r)) & full == full:
            out |= 1 << b
    return out


@dataclass(frozen=True)
class ColorfulBadSet:
    blocks: tuple[int, ...]
    per_k_witness: tuple[Halfspace, ...]

    def __len__(self) -> int:
        return len(self.blocks)


def colorful_maximal_bad_subsets(
    blocks: Sequence[RBlock], family: ColorfulFamily, budget: int = 10**7
) -> list[ColorfulBadSet]:
    """Maximal block sets G with ``0`` outside the selected entries of G for every transversal."""
    N, r = len(blocks), family.r
    if family.m == 0:
        return [ColorfulBadSet(tuple(range(N)), ())]
    per_k = []
    for trans in family.transversals:
        fam = halfspace_family(_selected_points(blocks, trans), maximal_only=True)
        bm = [_block_masks(ex, N, r) for ex in fam.excluded]
        keep = maximal_indices(bm)
        per_k.append(([bm[t] for t in keep], [fam.halfspaces[t] for t in keep]))
    current = [(mask, (t,)) for t, mask in enumerate(per_k[0][0])]
    spent = 0
    for k in range(1, family.m):
        spent += len(current) * len(per_k[k][0])
        if spent > budget:
            raise BudgetExceeded(f"more than {budget} half-space tuples to intersect")
        combos = intersect_maximal([c[0] for c in current], per_k[k][0])
        current = [(mask, current[a][1] + (b,)) for mask, a, b in combos]
    out = []
    for mask, tup in current:
        idx = tuple(i for i in range(N) if mask >> i & 1)
        out.append(ColorfulBadSet(idx, tuple(per_k[k][1][t] for k, t in enumerate(tup))))
    out.sort(key=lambda c: (-len(c), c.blocks))
    return out


def colorful_exhaustive_bad_masks(blocks: Sequence[RBlock], family: ColorfulFamily, max_blocks: int = 16) -> list[int]:
    """Every bad block set, by origin-in-hull tests with upward closure of good sets."""
    N = len(blocks)
    if N > max_blocks:
        raise BudgetExceeded(f"exhaustive sweep over 2^{N} block sets refused")
    dim = blocks[0].dim
    bad = bytearray([1]) * (1 << N)
    for trans in family.transversals:
        sel = [b.selected(p) for b, p in zip(blocks, trans)]
        good = bytearray(1 << N)
        for Y in range(1, 1 << N):
            y = Y
            while y:
                low = y & -y
                if good[Y ^ low]:
                    good[Y] = 1
                    break
                y ^= low
            else:
                pts = [p for b in range(N) if Y >> b & 1 for p in sel[b]]
                if origin_in_hull(pts, dim=dim).inside:
                    good[Y] = 1
            if good[Y]:
                bad[Y] = 0
    return [Y for Y in range(1 << N) if bad[Y]]


@dataclass(frozen=True)
class ColorfulVerdict:
    robust: bool
    max_bad_size: int
    threshold: int
    certificate: Optional[ColorfulBadSet] = None
    mode: str = "maximal"


def verify_colorful_family(
    blocks: Sequence[RBlock], family: ColorfulFamily, epsilon: Real, mode: str = "maximal", budget: int = 10**7
) -> ColorfulVerdict:
    """Robust iff every block set with ``|G| > eps N`` is served by some transversal."""
    N = len(blocks)
    s0 = math.floor(check_epsilon(epsilon) * N) + 1
    if mode == "maximal":
        certs = colorful_maximal_bad_subsets(blocks, family, budget)
        size = len(certs[0])
        return ColorfulVerdict(size < s0, size, s0, None if size < s0 else certs[0], mode)
    if mode == "exhaustive":
        bad = colorful_exhaustive_bad_masks(blocks, family)
        best = max(bad, key=lambda Y: (popcount(Y), -Y))
        size = popcount(best)
        cert = None
        if size >= s0:
            idx = tuple(i for i in range(N) if best >> i & 1)
            wit = []
            for trans in family.transversals:
                dec = origin_in_hull([p for b in idx for p in blocks[b].selected(trans[b])], dim=blocks[0].dim)
                wit.append(dec.witness)
            cert = ColorfulBadSet(idx, tuple(wit))
        return ColorfulVerdict(size < s0, size, s0, cert, mode)
    raise ValueError(f"unknown verification mode {mode!r}")


def check_colorful_certificate(blocks: Sequence[RBlock], family: ColorfulFamily, cert: ColorfulBadSet) -> bool:
    if len(cert.per_k_witness) != family.m:
        return False
    for trans, h in zip(family.transversals, cert.per_k_witness):
        pts = [p for b in cert.blocks for p in blocks[b].selected(trans[b])]
        if not (h.contains_origin and h.excludes_all(pts)):
            return False
    return True


def colorful_is_tverberg(classes: Sequence[Sequence[Sequence[Real]]], perms: Sequence[Sequence[int]], subset) -> bool:
    """Direct check in R^d: part j collects point ``perm[j]`` of every chosen class."""
    idx = sorted(subset)
    if not idx:
        return False
    r = len(perms[0])
    parts = [[as_point(classes[i][perms[i][j]]) for i in idx] for j in range(r)]
    return common_point_of_hulls(parts).intersect


@dataclass
class ColorfulConstruction:
    family: ColorfulFamily
    report: dict[str, Any]
    ledgers: list[GimelLedger] = field(default_factory=list)


def construct_colorful_family(
    blocks: Sequence[RBlock],
    params: ColorfulParams,
    mode: str = "ledger",
    seed: Optional[int] = 0,
    lam: Optional[Real] = None,
    budget: int = 10**6,
    check_claims: Optional[bool] = None,
    cell_budget: int = 20000,
) -> ColorfulConstruction:
    """Colorful counterpart of ``construct_family``: one uniform permutation per block and level.

    Ledger mode needs ``eps > (1 - p_r)^m``.  Oracle mode certifies after
    the fact, so any m up to the bound may be tried (m = 1 probes the
    single-transversal conjecture).
    """
    if any(b.r != params.r for b in blocks):
        raise ValueError("block size differs from params.r")
    if mode == "ledger":
        if not params.epsilon > (1 - params.p_r) ** params.m_col:
            raise ValueError("epsilon must exceed (1 - p_r)^m")
        return _colorful_ledger(blocks, params, seed, lam, budget, check_claims, cell_budget)
    if mode == "oracle":
        return _colorful_oracle(blocks, params, seed, budget)
    raise ValueError(f"unknown mode {mode!r}")


def _colorful_ledger(blocks, params, seed, lam, budget, check_claims, cell_budget) -> ColorfulConstruction:
    N, r, m = len(blocks), params.r, params.m_col
    n = blocks[0].dim
    if N > 62:
        raise BudgetExceeded("ledger mode tracks block sets in 64-bit masks; N must be <= 62")
    M = N * r * r
    if 2 * sum(math.comb(M - 1, i) for i in range(min(n, M))) > cell_budget:
        raise BudgetExceeded(f"half-space enumeration for {M} points in R^{n} exceeds the cell budget")
    sched = colorful_schedule(N, params, n, lam)
    union = [blocks[b].entries[j][a] for b in range(N) for j in range(r) for a in range(r)]
    fam_h = halfspace_family(union)
    table = np.zeros((len(fam_h), N, r, r), dtype=bool)
    for t, mask in enumerate(fam_h.excluded):
        for bit in range(M):
            if mask >> bit & 1:
                b, rest = divmod(bit, r * r)
                table[t, b, rest // r, rest % r] = True
    if check_claims is None:
        check_claims = N <= 12
    full = (1 << N) - 1
    gimel = GimelLedger(0, [full], Fraction(N))
    ledgers = [gimel]
    chosen: list[tuple[tuple[int, ...], ...]] = []
    attempts = []
    streams = np.random.SeedSequence(seed).spawn(m)
    rows = np.arange(r)
    for k in range(1, m + 1):
        rng = np.random.default_rng(streams[k - 1])
        for tries in range(1, budget + 1):
            perms = np.array([rng.permutation(r) for _ in range(N)])
            # hit[t, b]: some selected entry of block b lies in half-space t
            sel = table[:, np.arange(N)[:, None], rows[None, :], perms]
            hit = ~sel.all(axis=2)
            inside = [sum(1 << b for b in range(N) if hit[t, b]) for t in range(len(fam_h))]
            if ledger_accept(gimel.families, inside, params.p_r, sched.lam):
                break
        else:
            raise RetryBudgetExhausted(f"level {k}: no acceptable transversal in {budget} draws")
        attempts.append(tries)
        chosen.append(tuple(tuple(p.tolist()) for p in perms))
        children = [mask for mask, _, _ in intersect_maximal(gimel.families, [full & ~h for h in inside])]
        gimel = GimelLedger(k, children, sched.Nk[k])
        gimel.checks["size_bound"] = all(popcount(v) <= sched.Nk[k] for v in children)
        gimel.checks["count_bound"] = len(children) <= sched.A**k
        if check_claims:
            bad = colorful_exhaustive_bad_masks(blocks, ColorfulFamily(tuple(chosen), r, seed))
            gimel.checks["containment"] = all(any(g & ~v == 0 for v in children) for g in bad)
        assert all(gimel.checks.values()), f"ledger property failed at level {k}: {gimel.checks}"
        ledgers.append(gimel)
    s0 = math.floor(params.epsilon * N) + 1
    report = {
        "mode": "ledger",
        "schedule": sched.as_dict(),
        "halfspaces": len(fam_h),
        "attempts": attempts,
        "levels": [{"k": g.level, "members": len(g.families), "max_size": g.max_size, "checks": g.checks} for g in ledgers],
        "final_max_size": gimel.max_size,
        "robust_by_ledger": gimel.max_size < s0,
    }
    return ColorfulConstruction(ColorfulFamily(tuple(chosen), r, seed), report, ledgers)


def _colorful_oracle(blocks, params, seed, budget) -> ColorfulConstruction:
    rng = np.random.default_rng(seed)
    N, r = len(blocks), params.r
    mode = "maximal" if blocks[0].dim <= 4 else "exhaustive"
    for attempt in range(1, budget + 1):
        fam = ColorfulFamily(
            tuple(tuple(tuple(rng.permutation(r).tolist()) for _ in range(N)) for _ in range(params.m_col)), r, seed
        )
        verdict = verify_colorful_family(blocks, fam, params.epsilon, mode=mode)
        if verdict.robust:
            report = {
                "mode": "oracle",
                "attempts": attempt,
                "verifier": mode,
                "max_bad_size": verdict.max_bad_size,
                "threshold": verdict.threshold,
            }
            return ColorfulConstruction(fam, report)
    raise RetryBudgetExhausted(f"no robust colorful family in {budget} attempts")
