"""Randomized construction of epsilon-robust partition families.

``construct_family`` has two modes.  ``ledger`` runs the inductive
construction with its bookkeeping of still-unserved index sets: each new
partition is resampled until every tracked set keeps at least a
``1/r - lambda`` share inside every certifying half-space.  ``oracle``
resamples whole families until the exact verifier accepts one.  The
theoretical lambda exceeds N at desk scale, so ledger mode lets the
caller choose it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence, Union

import numpy as np

from .errors import BudgetExceeded, RetryBudgetExhausted
from .geom_core import PointConfig, halfspace_family
from .kernels import intersect_maximal, ledger_accept, popcount
from .sarkaria_lift import Partition, lift

log = logging.getLogger(__name__)

Real = Union[int, float, str, Fraction]


def to_fraction(x: Real) -> Fraction:
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def check_epsilon(epsilon: Real) -> Fraction:
    eps = to_fraction(epsilon)
    if not 0 < eps <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    return eps


def _smallest_power_below(base: Fraction, eps: Fraction, guess: int) -> int:
    """Smallest m >= 1 with base**m < eps, starting the search at ``guess``."""
    num, den = base.numerator, base.denominator

    def below(m: int) -> bool:
        return num**m * eps.denominator < eps.numerator * den**m

    m = max(1, guess)
    while not below(m):
        m += 1
    while m > 1 and below(m - 1):
        m -= 1
    return m


def m_required(epsilon: Real, r: int) -> int:
    """Number of partitions needed: ``floor(ln(1/eps) / ln(r/(r-1))) + 1``.

    The float estimate is corrected against exact powers, so
    ``eps == ((r-1)/r)**m`` lands on ``m + 1``.
    """
    if r < 2:
        raise ValueError("r must be at least 2")
    eps = check_epsilon(epsilon)
    guess = math.floor(math.log(1 / float(eps)) / math.log(r / (r - 1))) + 1
    return _smallest_power_below(Fraction(r - 1, r), eps, guess)


def epsilon_threshold(m: int, r: int) -> Fraction:
    """``((r-1)/r)**m``; eps must exceed it for m partitions to suffice."""
    if m < 0 or r < 2:
        raise ValueError("need m >= 0 and r >= 2")
    return Fraction(r - 1, r) ** m


def hoeffding_tail(N: int, lam: float) -> float:
    """Hoeffding bound ``exp(-2 lam^2 / N)`` on a lower deviation of lam."""
    if N < 1 or lam < 0:
        raise ValueError("need N >= 1 and lam >= 0")
    return math.exp(-2.0 * lam * lam / N)


@dataclass(frozen=True)
class RobustParams:
    epsilon: Fraction
    r: int
    m: int
    N: int

    def __post_init__(self):
        object.__setattr__(self, "epsilon", check_epsilon(self.epsilon))
        if self.r < 2 or self.m < 0 or self.N < 1:
            raise ValueError("need r >= 2, m >= 0, N >= 1")

    @classmethod
    def default(cls, epsilon: Real, r: int, N: int) -> "RobustParams":
        return cls(to_fraction(epsilon), r, m_required(epsilon, r), N)


@dataclass(frozen=True)
class ConstructionSchedule:
    A: int
    lam: Fraction
    Nk: tuple[Fraction, ...]
    final_bound: Fraction
    vacuous: bool
    keep: Fraction

    @property
    def lam_exceeds_N(self) -> bool:
        return self.lam > self.Nk[0]

    def as_dict(self) -> dict[str, Any]:
        return {
            "A": str(self.A),
            "lambda": float(self.lam),
            "N_k": [float(x) for x in self.Nk],
            "final_bound": float(self.final_bound),
            "vacuous": self.vacuous,
            "lambda_exceeds_N": self.lam_exceeds_N,
        }


def default_lambda(m: int, N: int, A: int) -> Fraction:
    return Fraction(math.sqrt(m * N * math.log(A)) * (1 + 1e-6)) if m and A > 1 else Fraction(0)


def _schedule(N: int, m: int, keep: Fraction, A: int, eps: Fraction, lam: Optional[Real], slack: Real) -> ConstructionSchedule:
    lam_f = default_lambda(m, N, A) if lam is None else to_fraction(lam)
    Nk = [Fraction(N)]
    for _ in range(m):
        Nk.append(Nk[-1] * keep + lam_f)
    final = N * keep**m + slack * lam_f
    assert Nk[-1] <= final
    return ConstructionSchedule(A, lam_f, tuple(Nk), final, not final < eps * N, keep)


def schedule(params: RobustParams, n: int, lam: Optional[Real] = None) -> ConstructionSchedule:
    """``A = (N r)^n``, lambda (default just above ``sqrt(m N ln A)``) and the N_k sequence.

    ``vacuous`` is set when ``N((r-1)/r)^m + r lambda < eps N`` fails, i.e.
    the a-priori argument proves nothing at this N.
    """
    if n < 1:
        raise ValueError("n must be positive")
    A = (params.N * params.r) ** n
    keep = Fraction(params.r - 1, params.r)
    return _schedule(params.N, params.m, keep, A, params.epsilon, lam, params.r)


@dataclass(frozen=True)
class PartitionFamily:
    partitions: tuple[Partition, ...]
    r: int
    seed: Optional[int] = None

    @property
    def m(self) -> int:
        return len(self.partitions)

    def __iter__(self):
        return iter(self.partitions)

    def __len__(self) -> int:
        return len(self.partitions)

    @classmethod
    def from_labels(cls, rows: Sequence[Sequence[int]], r: int, seed: Optional[int] = None) -> "PartitionFamily":
        return cls(tuple(Partition(tuple(row), r) for row in rows), r, seed)


def sample_family(config: PointConfig, r: int, m: int, seed: Optional[int]) -> PartitionFamily:
    """m partitions with i.i.d. uniform labels; reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    labels = rng.integers(1, r + 1, size=(m, len(config)))
    return PartitionFamily.from_labels(labels.tolist(), r, seed)


@dataclass
class GimelLedger:
    """Index sets (bitmasks over points) still unserved after ``level`` partitions."""

    level: int
    families: list[int]
    bound: Fraction
    checks: dict[str, bool] = field(default_factory=dict)

    def members(self) -> list[tuple[int, ...]]:
        return [tuple(i for i in range(mask.bit_length()) if mask >> i & 1) for mask in self.families]

    @property
    def max_size(self) -> int:
        return max((popcount(v) for v in self.families), default=0)


@dataclass
class ConstructionResult:
    family: PartitionFamily
    report: dict[str, Any]
    ledgers: list[GimelLedger] = field(default_factory=list)


def _inside_masks(excluded: np.ndarray, labels: np.ndarray, weights: np.ndarray) -> list[int]:
    # excluded: (H, N, r) bool; a class counts as inside H when its chosen point is
    inside = ~excluded[:, np.arange(labels.size), labels - 1]
    return [int(x) for x in (inside.astype(object) @ weights)]


def _exclusion_table(family, N: int, r: int) -> np.ndarray:
    table = np.zeros((len(family), N, r), dtype=bool)
    for t, mask in enumerate(family.excluded):
        for b in range(N * r):
            if mask >> b & 1:
                table[t, b // r, b % r] = True
    return table


def construct_family(
    config: PointConfig,
    params: RobustParams,
    mode: str = "ledger",
    seed: Optional[int] = 0,
    lam: Optional[Real] = None,
    budget: int = 10**6,
    check_claims: Optional[bool] = None,
    cell_budget: int = 20000,
) -> ConstructionResult:
    """Build ``params.m`` partitions of ``config`` meant to be eps-robust.

    ``lam`` only matters in ledger mode.  ``check_claims`` (default: on for
    N <= 12) re-derives every bad subset by brute force after each level
    and checks that some ledger member contains it.
    """
    if len(config) != params.N:
        raise ValueError("params.N does not match the configuration")
    if not params.epsilon > epsilon_threshold(params.m, params.r):
        raise ValueError("epsilon must exceed ((r-1)/r)^m for m partitions to suffice")
    if mode == "ledger":
        return _construct_ledger(config, params, seed, lam, budget, check_claims, cell_budget)
    if mode == "oracle":
        return _construct_oracle(config, params, seed, budget)
    raise ValueError(f"unknown mode {mode!r}")


def _cell_estimate(M: int, n: int) -> int:
    return 2 * sum(math.comb(M - 1, i) for i in range(min(n, M)))


def _construct_ledger(config, params, seed, lam, budget, check_claims, cell_budget) -> ConstructionResult:
    from .adversary_verifier import exhaustive_bad_masks

    N, r, m = params.N, params.r, params.m
    lifted = lift(config, r)
    n = lifted.n
    if N > 62:
        raise BudgetExceeded("ledger mode tracks index sets in 64-bit masks; N must be <= 62")
    if _cell_estimate(N * r, n) > cell_budget:
        raise BudgetExceeded(f"half-space enumeration for {N * r} points in R^{n} exceeds the cell budget")
    sched = schedule(params, n, lam)
    fam_h = halfspace_family(lifted.union())
    excluded = _exclusion_table(fam_h, N, r)
    weights = np.array([1 << i for i in range(N)], dtype=object)
    lam_f = sched.lam
    if check_claims is None:
        check_claims = N <= 12

    full = (1 << N) - 1
    gimel = GimelLedger(0, [full], Fraction(N))
    ledgers = [gimel]
    partitions: list[Partition] = []
    attempts: list[int] = []
    streams = np.random.SeedSequence(seed).spawn(m)
    for k in range(1, m + 1):
        rng = np.random.default_rng(streams[k - 1])
        for tries in range(1, budget + 1):
            labels = rng.integers(1, r + 1, size=N)
            inside = _inside_masks(excluded, labels, weights)
            if ledger_accept(gimel.families, inside, Fraction(1, r), lam_f):
                break
        else:
            raise RetryBudgetExhausted(f"level {k}: no acceptable partition in {budget} draws")
        attempts.append(tries)
        partitions.append(Partition(tuple(labels.tolist()), r))
        outside = [full & ~h for h in inside]
        children = [mask for mask, _, _ in intersect_maximal(gimel.families, outside)]
        gimel = GimelLedger(k, children, sched.Nk[k])
        gimel.checks["size_bound"] = all(popcount(v) <= sched.Nk[k] for v in children)
        gimel.checks["count_bound"] = len(children) <= sched.A**k
        if check_claims:
            fam_k = PartitionFamily(tuple(partitions), r, seed)
            bad = exhaustive_bad_masks(config, fam_k)
            gimel.checks["containment"] = all(any(g & ~v == 0 for v in children) for g in bad)
        assert all(gimel.checks.values()), f"ledger property failed at level {k}: {gimel.checks}"
        ledgers.append(gimel)
        log.debug("level %d: %d draws, |gimel|=%d, max size %d", k, tries, len(children), gimel.max_size)

    final_max = gimel.max_size
    assert final_max <= sched.final_bound
    threshold = math.ceil(params.epsilon * N)
    report = {
        "mode": "ledger",
        "schedule": sched.as_dict(),
        "halfspaces": len(fam_h),
        "attempts": attempts,
        "levels": [
            {"k": g.level, "members": len(g.families), "max_size": g.max_size, "N_k": float(g.bound), "checks": g.checks}
            for g in ledgers
        ],
        "final_max_size": final_max,
        "robust_by_ledger": final_max < threshold,
    }
    return ConstructionResult(PartitionFamily(tuple(partitions), r, seed), report, ledgers)


def _construct_oracle(config, params, seed, budget) -> ConstructionResult:
    from .adversary_verifier import verify_family

    rng = np.random.default_rng(seed)
    mode = "maximal" if (config.dim + 1) * (params.r - 1) <= 4 else "exhaustive"
    for attempt in range(1, budget + 1):
        labels = rng.integers(1, params.r + 1, size=(params.m, params.N))
        fam = PartitionFamily.from_labels(labels.tolist(), params.r, seed)
        verdict = verify_family(config, fam, params.epsilon, mode=mode)
        if verdict.robust:
            log.info("oracle construction accepted after %d attempts", attempt)
            report = {
                "mode": "oracle",
                "attempts": attempt,
                "verifier": mode,
                "max_bad_size": verdict.max_bad_size,
                "threshold": verdict.threshold,
            }
            return ConstructionResult(fam, report)
    raise RetryBudgetExhausted(f"no robust family in {budget} attempts")
