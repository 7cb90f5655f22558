"""Acceptance suite: each test covers one numbered criterion at its stated tolerance.

Run ``pytest tests/test_acceptance.py`` and read the "acceptance criteria"
section at the end of the report for the per-criterion verdicts.
"""

import math
import sys
import time
from fractions import Fraction as F
from itertools import permutations, product

import numpy as np
import pytest

from robust_tverberg.adversary_verifier import (
    check_certificate,
    greedy_adversary,
    maximal_bad_subsets,
    verify_family,
)
from robust_tverberg.colorful import (
    ColorfulParams,
    RBlock,
    block_hit_probability,
    blocks_from_classes,
    construct_colorful_family,
    fixed_point_probability,
)
from robust_tverberg.geom_core import Halfspace
from robust_tverberg.robust_constructor import (
    RobustParams,
    construct_family,
    epsilon_threshold,
    hoeffding_tail,
    m_required,
    sample_family,
    schedule,
)
from robust_tverberg.sarkaria_lift import Partition, is_tverberg, lift, lifted_is_tverberg

from support import general_position_config, random_config


class Clock:
    def __init__(self, limit):
        self.limit, self.start = limit, time.perf_counter()

    def check(self):
        elapsed = time.perf_counter() - self.start
        assert elapsed < self.limit, f"took {elapsed:.1f}s, limit {self.limit}s"
        return elapsed


def closed_form(eps, r):
    """floor(ln(1/eps) / ln(r/(r-1))) + 1, with exact arithmetic at integer ratios."""
    ratio = math.log(1 / float(eps)) / math.log(r / (r - 1))
    k = round(ratio)
    if abs(ratio - k) < 1e-9:
        # ratio is (numerically) the integer k; settle it exactly
        return k + 1 if F(r - 1, r) ** k == eps else (k if F(r - 1, r) ** k < eps else k + 1)
    return math.floor(ratio) + 1


@pytest.mark.criterion(1, "formula suite on a 10^4-cell (eps, r) grid, strict equivalence, < 5 s")
def test_formula_suite():
    clock = Clock(5)
    eps_grid = [F(k, 100) for k in range(1, 101)]
    r_grid = range(2, 102)
    cells = 0
    for eps, r in product(eps_grid, r_grid):
        m = m_required(eps, r)
        assert m == closed_form(eps, r), (eps, r)
        for mm in (m - 1, m):
            if mm >= 0:
                assert (eps > epsilon_threshold(mm, r)) == (m <= mm)
        cells += 1
    assert cells == 10_000
    clock.check()


@pytest.mark.criterion(2, "direct vs lifted Tverberg verdicts on >= 1000 instances, < 2 min")
def test_lifted_equivalence():
    clock = Clock(120)
    rng = np.random.default_rng(20240)
    checked = agree_true = 0
    while checked < 1000:
        d, r = int(rng.integers(1, 4)), int(rng.integers(2, 4))
        N = int(rng.integers(r, 13))
        cfg = random_config(rng, N, d, -6, 6)
        part = Partition(tuple(rng.integers(1, r + 1, size=N).tolist()), r)
        sub = [i for i in range(N) if rng.random() < 0.85]
        if part.empty_part(sub) is not None:
            continue
        direct = is_tverberg(cfg, part, sub, certify=False).is_tverberg
        assert direct == lifted_is_tverberg(part, lift(cfg, r), sub)
        checked += 1
        agree_true += direct
    # both verdicts occur, so agreement is not vacuous
    assert 50 < agree_true < 950
    clock.check()


def find_tverberg_partition(cfg, r):
    N = len(cfg)
    for tail in product(range(1, r + 1), repeat=N - 1):
        part = Partition((1, *tail), r)
        if part.empty_part(range(N)) is None and is_tverberg(cfg, part, certify=False).is_tverberg:
            return part
    return None


@pytest.mark.criterion(3, "Tverberg partitions exist at N = (r-1)(d+1)+1, 100 sets per (r, d), < 5 min")
@pytest.mark.parametrize("r,d", [(2, 2), (3, 2), (2, 3)])
def test_tverberg_existence(r, d):
    clock = Clock(300)
    rng = np.random.default_rng(1000 * r + d)
    N = (r - 1) * (d + 1) + 1
    for _ in range(100):
        cfg = general_position_config(rng, N, d)
        part = find_tverberg_partition(cfg, r)
        assert part is not None
        assert is_tverberg(cfg, part).common_point is not None
    clock.check()


@pytest.mark.criterion(4, "greedy lower bound on 100 families per m (N = 16, r = 2), verified violations")
@pytest.mark.parametrize("m", [1, 2, 3])
def test_lower_bound(m):
    rng = np.random.default_rng(40 + m)
    need = math.ceil(16 * F(1, 2) ** m)
    for t in range(100):
        cfg = random_config(rng, 16, 2, -40, 40)
        fam = sample_family(cfg, 2, m, seed=t)
        cert = greedy_adversary(cfg, fam)
        assert len(cert) >= need and check_certificate(cfg, fam, cert)
        for eps in {F(len(cert), 16), F(need, 16)}:
            v = verify_family(cfg, fam, eps)
            assert not v.robust and v.max_bad_size >= len(cert)
            assert check_certificate(cfg, fam, v.certificate)


@pytest.mark.criterion(5, "maximal vs exhaustive verifier verdicts on >= 200 instances, zero disagreements")
def test_verifier_agreement():
    rng = np.random.default_rng(555)
    shapes = [(1, 2), (2, 2), (3, 2), (1, 3)]  # n = (d+1)(r-1) <= 4
    disagreements = 0
    for t in range(200):
        d, r = shapes[t % 4]
        N = int(rng.integers(r + 1, 11))
        m = 1 + t % 2
        cfg = random_config(rng, N, d, -9, 9)
        fam = sample_family(cfg, r, m, seed=t)
        maxi = maximal_bad_subsets(cfg, fam)[0]
        eps = F(int(rng.integers(1, N + 1)), N)
        a = verify_family(cfg, fam, eps, mode="maximal")
        b = verify_family(cfg, fam, eps, mode="exhaustive")
        disagreements += a.robust != b.robust or not a.max_bad_size == b.max_bad_size == len(maxi)
    assert disagreements == 0


@pytest.mark.criterion(6, "end-to-end oracle construction certified robust with m = 1, < 10 min")
@pytest.mark.parametrize("d,eps,N", [(1, "0.9", 12), (2, "0.95", 14)])
def test_end_to_end(d, eps, N, capsys):
    clock = Clock(600)
    cfg = general_position_config(np.random.default_rng(600 + d), N, d, -99, 99)
    params = RobustParams.default(eps, 2, N)
    assert params.m == m_required(eps, 2) == 1
    res = construct_family(cfg, params, mode="oracle", seed=7)
    assert res.family.m == 1 and res.report["attempts"] >= 1
    for mode in ("maximal", "exhaustive"):
        assert verify_family(cfg, res.family, eps, mode=mode).robust
    with capsys.disabled():
        print(f"\n  d={d} eps={eps} N={N}: accepted after {res.report['attempts']} attempt(s)")
    clock.check()


@pytest.mark.criterion(7, "p_r equals permutation counts for r <= 8; |p_r - (1 - 1/e)| < 1e-3 for r >= 7")
def test_colorful_exact_values():
    for r in range(1, 9):
        perms = list(permutations(range(r)))
        count = sum(any(p[i] == i for i in range(r)) for p in perms)
        assert fixed_point_probability(r) == F(count, len(perms))
    assert [fixed_point_probability(r) for r in (1, 2, 3, 4, 5)] == [1, F(1, 2), F(2, 3), F(5, 8), F(19, 30)]
    for r in range(7, 40):
        assert abs(float(fixed_point_probability(r)) - (1 - math.exp(-1))) < 1e-3


def random_block(rng, r, dim):
    cols = []
    for _ in range(r):
        pts = rng.integers(-9, 10, size=(r, dim))
        cols.append(r * pts - pts.sum(axis=0))
    return RBlock(r, tuple(tuple(tuple(int(x) for x in cols[a][j]) for a in range(r)) for j in range(r)))


@pytest.mark.criterion(8, "block hitting share >= p_r on 1000 pairs with r <= 5, tight case at r = 2")
def test_block_hitting():
    rng = np.random.default_rng(88)
    pairs = tight = 0
    while pairs < 1000:
        r, dim = int(rng.integers(2, 6)), int(rng.integers(1, 4))
        block = random_block(rng, r, dim)
        w = rng.integers(-5, 6, size=dim)
        if not w.any():
            continue
        h = Halfspace(tuple(F(int(x)) for x in w), F(int(rng.integers(0, 2))))
        share = block_hit_probability(block, h)
        assert share >= fixed_point_probability(r)
        tight += r == 2 and share == F(1, 2)
        pairs += 1
    diagonal = RBlock(2, (((-1,), (1,)), ((1,), (-1,))))
    assert block_hit_probability(diagonal, Halfspace((F(1),))) == fixed_point_probability(2)
    assert tight > 0


@pytest.mark.criterion(9, "Bernoulli sum tails (N = 200, 10^5 trials) below exp(-2 lambda^2 / N)")
def test_hoeffding_dominance():
    N, trials = 200, 100_000
    rng = np.random.default_rng(99)
    sums = np.concatenate([rng.integers(0, 2, size=(10_000, N), dtype=np.int8).sum(axis=1) for _ in range(10)])
    assert sums.size == trials
    for lam in (10, 20, 30):
        bound = hoeffding_tail(N, lam)
        lower = np.mean(sums <= N / 2 - lam)
        upper = np.mean(sums >= N / 2 + lam)
        assert lower <= bound and upper <= bound


@pytest.mark.criterion(10, "ledger runs assert containment, |V| <= N_k and |gimel_k| <= A^k at every level")
@pytest.mark.parametrize(
    "d,r,N,eps,m,lam",
    [(1, 2, 8, "0.9", 1, None), (1, 2, 10, "3/4", 2, 2), (1, 2, 12, "0.6", 2, "5/2"), (1, 2, 9, "0.3", 3, 2), (2, 2, 8, "0.8", 2, 2)],
)
def test_ledger_invariants(d, r, N, eps, m, lam):
    cfg = random_config(np.random.default_rng(N * 10 + m), N, d, -50, 50)
    params = RobustParams(F(eps), r, m, N)
    res = construct_family(cfg, params, mode="ledger", seed=N, lam=lam, check_claims=True)
    sched = schedule(params, (d + 1) * (r - 1), lam)
    assert len(res.ledgers) == m + 1
    for g in res.ledgers[1:]:
        assert g.checks == {"size_bound": True, "count_bound": True, "containment": True}
        assert g.max_size <= sched.Nk[g.level] and len(g.families) <= sched.A**g.level
    assert res.ledgers[-1].max_size <= N * F(r - 1, r) ** m + r * sched.lam


@pytest.mark.criterion(10, "ledger runs assert containment, |V| <= N_k and |gimel_k| <= A^k at every level")
def test_colorful_ledger_invariants():
    classes = np.random.default_rng(10).integers(-30, 31, size=(10, 2, 1)).tolist()
    blocks = blocks_from_classes(classes, 2)
    params = ColorfulParams.default("0.5", 2, m_col=2)
    res = construct_colorful_family(blocks, params, mode="ledger", seed=3, lam=2, check_claims=True)
    for g in res.ledgers[1:]:
        assert g.checks == {"size_bound": True, "count_bound": True, "containment": True}


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
