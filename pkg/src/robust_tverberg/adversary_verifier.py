"""Deciding whether a partition family is eps-robust, and the greedy adversary.

A subset Y is *bad* for a family when no partition restricts to a
Tverberg partition of Y.  Bad sets are closed under taking subsets, so a
family is robust iff every bad set is smaller than ``ceil(eps N)``.

Two independent routes find the largest bad sets:

* ``maximal`` works in the lifted space.  For each partition the maximal
  separable subsets of its lifted transversal come from the half-space
  family; bad sets are exactly subsets of intersections of one such set
  per partition.
* ``exhaustive`` sweeps every subset with the direct hull-intersection
  test in R^d, inferring "good" from any good subset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from .errors import BudgetExceeded
from .geom_core import Halfspace, PointConfig, halfspace_family, origin_in_hull
from .kernels import intersect_maximal, popcount
from .robust_constructor import PartitionFamily, Real, check_epsilon
from .sarkaria_lift import LiftedFamily, Partition, is_tverberg, lift, restrict_transversal

Witness = Union[int, Halfspace]


@dataclass(frozen=True)
class BadSubsetCertificate:
    """A subset together with, per partition, why it is not Tverberg there.

    A witness is either an int (the label of a part missing from the
    subset) or a half-space containing 0 that excludes the subset's lifted
    transversal points.
    """

    indices: tuple[int, ...]
    per_k_witness: tuple[Witness, ...]

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def mask(self) -> int:
        return sum(1 << i for i in self.indices)


def _indices(mask: int) -> tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


def check_certificate(
    config: PointConfig, family: PartitionFamily, cert: BadSubsetCertificate, lifted: Optional[LiftedFamily] = None
) -> bool:
    """Exact re-check of every per-partition witness."""
    if len(cert.per_k_witness) != family.m:
        return False
    lifted = lifted or lift(config, family.r)
    for part, w in zip(family, cert.per_k_witness):
        if isinstance(w, int):
            if any(part.labels[i] == w for i in cert.indices):
                return False
        else:
            if not w.contains_origin:
                return False
            if not w.excludes_all(restrict_transversal(part, lifted, cert.indices)):
                return False
    return True


def _witness_for(config, part: Partition, idx: Sequence[int], lifted: LiftedFamily) -> Witness:
    j = part.empty_part(idx)
    if j is not None:
        return j
    dec = origin_in_hull(restrict_transversal(part, lifted, idx), dim=lifted.n)
    if dec.inside:
        raise ValueError("subset is Tverberg for this partition")
    return dec.witness


def certify(config: PointConfig, family: PartitionFamily, indices: Sequence[int], lifted=None) -> BadSubsetCertificate:
    """Build a certificate for a subset already known to be bad."""
    lifted = lifted or lift(config, family.r)
    idx = tuple(sorted(indices))
    return BadSubsetCertificate(idx, tuple(_witness_for(config, p, idx, lifted) for p in family))


def greedy_adversary(config: PointConfig, family: PartitionFamily) -> BadSubsetCertificate:
    """Defeat the family by deleting, for each partition in turn, its smallest surviving part.

    Ties go to the lowest label.  The survivors number at least
    ``N((r-1)/r)^m`` and every partition has an empty part on them.
    """
    alive = list(range(len(config)))
    removed: list[int] = []
    for part in family:
        counts = [0] * family.r
        for i in alive:
            counts[part.labels[i] - 1] += 1
        j = min(range(family.r), key=lambda t: (counts[t], t)) + 1
        alive = [i for i in alive if part.labels[i] != j]
        removed.append(j)
    return BadSubsetCertificate(tuple(alive), tuple(removed))


def greedy_size_bound(N: int, r: int, m: int) -> int:
    """Size the greedy recursion is guaranteed to keep: ``s -> s - floor(s/r)`` applied m times."""
    s = N
    for _ in range(m):
        s -= s // r
    return s


def _transversal_families(config, family, lifted):
    out = []
    for part in family:
        pts = restrict_transversal(part, lifted, range(len(config)))
        out.append(halfspace_family(pts, maximal_only=True))
    return out


def maximal_bad_subsets(
    config: PointConfig, family: PartitionFamily, budget: int = 10**7
) -> list[BadSubsetCertificate]:
    """All containment-maximal bad subsets, largest first, with certificates.

    Every bad subset lies inside one of them.  ``budget`` caps the number
    of pairwise intersections formed.
    """
    N = len(config)
    full = (1 << N) - 1
    if family.m == 0:
        return [BadSubsetCertificate(tuple(range(N)), ())]
    lifted = lift(config, family.r)
    fams = _transversal_families(config, family, lifted)
    current = [(ex, (t,)) for t, ex in enumerate(fams[0].excluded)]
    spent = 0
    for k in range(1, family.m):
        spent += len(current) * len(fams[k])
        if spent > budget:
            raise BudgetExceeded(f"more than {budget} half-space tuples to intersect")
        combos = intersect_maximal([c[0] for c in current], list(fams[k].excluded))
        current = [(mask, current[a][1] + (b,)) for mask, a, b in combos]
    certs = []
    for mask, tup in current:
        idx = _indices(mask & full)
        wit = []
        for part, fam, t in zip(family, fams, tup):
            j = part.empty_part(idx)
            wit.append(j if j is not None else fam.halfspaces[t])
        certs.append(BadSubsetCertificate(idx, tuple(wit)))
    certs.sort(key=lambda c: (-len(c), c.indices))
    return certs


def _good_table(config: PointConfig, part: Partition) -> bytearray:
    """``good[Y]`` for every subset mask Y: does ``part`` restrict to a Tverberg partition of Y?"""
    N = len(config)
    part_masks = [sum(1 << i for i in p) for p in part.parts()]
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
            if any(Y & pm == 0 for pm in part_masks):
                continue
            if is_tverberg(config, part, _indices(Y), certify=False).is_tverberg:
                good[Y] = 1
    return good


def exhaustive_bad_masks(config: PointConfig, family: PartitionFamily, max_points: int = 20) -> list[int]:
    """Every bad subset mask, by brute force with the direct test."""
    N = len(config)
    if N > max_points:
        raise BudgetExceeded(f"exhaustive sweep over 2^{N} subsets refused (limit {max_points} points)")
    bad = bytearray([1]) * (1 << N)
    for part in family:
        good = _good_table(config, part)
        for Y in range(1 << N):
            if good[Y]:
                bad[Y] = 0
    return [Y for Y in range(1 << N) if bad[Y]]


@dataclass(frozen=True)
class FamilyVerdict:
    robust: bool
    max_bad_size: int
    threshold: int
    certificate: Optional[BadSubsetCertificate] = None
    mode: str = "maximal"


def size_threshold(epsilon: Real, N: int, strict: bool = False) -> int:
    """Smallest subset size the robustness claim quantifies over.

    ``|Y| >= eps N`` gives ``ceil(eps N)``; the strict ``|Y| > eps N`` gives
    ``floor(eps N) + 1``.
    """
    x = check_epsilon(epsilon) * N
    return math.floor(x) + 1 if strict else math.ceil(x)


def verify_family(
    config: PointConfig,
    family: PartitionFamily,
    epsilon: Real,
    mode: str = "maximal",
    budget: int = 10**7,
) -> FamilyVerdict:
    """Is every subset of size ``>= ceil(eps N)`` served by some partition?"""
    N = len(config)
    s0 = size_threshold(epsilon, N)
    if mode == "maximal":
        certs = maximal_bad_subsets(config, family, budget)
        best = certs[0]
        size = len(best)
        return FamilyVerdict(size < s0, size, s0, None if size < s0 else best, mode)
    if mode == "exhaustive":
        bad = exhaustive_bad_masks(config, family)
        best = max(bad, key=lambda Y: (popcount(Y), -Y))
        size = popcount(best)
        cert = None if size < s0 else certify(config, family, _indices(best))
        return FamilyVerdict(size < s0, size, s0, cert, mode)
    raise ValueError(f"unknown verification mode {mode!r}")


@dataclass(frozen=True)
class MonteCarloReport:
    trials: int
    bad: int
    subset_size: int
    certificate: Optional[BadSubsetCertificate] = None

    @property
    def rate(self) -> float:
        return self.bad / self.trials


def monte_carlo_verify(
    config: PointConfig, family: PartitionFamily, epsilon: Real, trials: int, seed: Optional[int] = 0
) -> MonteCarloReport:
    """Estimate the fraction of random ``ceil(eps N)``-subsets that are bad."""
    if trials < 1:
        raise ValueError("trials must be positive")
    N = len(config)
    s0 = size_threshold(epsilon, N)
    rng = np.random.default_rng(seed)
    lifted = lift(config, family.r)
    seen: dict[tuple[int, ...], bool] = {}
    bad = 0
    cert = None
    for _ in range(trials):
        idx = tuple(sorted(rng.choice(N, size=s0, replace=False).tolist()))
        if idx not in seen:
            seen[idx] = not any(is_tverberg(config, p, idx, lifted, certify=False) for p in family)
        if seen[idx]:
            bad += 1
            if cert is None:
                cert = certify(config, family, idx, lifted)
    return MonteCarloReport(trials, bad, s0, cert)


def lower_bound_holds(config: PointConfig, family: PartitionFamily) -> bool:
    """Greedy survivors are at least ``N((r-1)/r)^m`` and certified bad."""
    cert = greedy_adversary(config, family)
    bound = len(config) * Fraction(family.r - 1, family.r) ** family.m
    return len(cert) >= bound and check_certificate(config, family, cert)
