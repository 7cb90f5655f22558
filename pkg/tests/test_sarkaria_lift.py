from fractions import Fraction as F
from itertools import combinations

import numpy as np
import pytest

from robust_tverberg.geom_core import PointConfig, check_hull_decision, origin_in_hull
from robust_tverberg.sarkaria_lift import (
    Partition,
    is_tverberg,
    lift,
    lifted_is_tverberg,
    restrict_transversal,
    simplex_frame,
)

from support import det, lp_common_point, random_config

RADON = PointConfig.from_rows([[0, 0], [2, 0], [1, 2], [1, F(1, 2)]])


def test_frame_r2_is_antipodal_pair():
    assert simplex_frame(2).vertices == ((F(1),), (F(-1),))


@pytest.mark.parametrize("r", range(2, 8))
def test_frame_identities(r):
    fr = simplex_frame(r)
    vs = fr.vertices
    assert len(vs) == r and all(len(v) == r - 1 for v in vs)
    assert all(sum(v[k] for v in vs) == 0 for k in range(r - 1))
    norms = {fr.gram(v, v) for v in vs}
    cross = {fr.gram(a, b) for a, b in combinations(vs, 2)}
    assert len(norms) == 1 and len(cross) == 1
    # any r-1 vertices are a basis
    for drop in range(r):
        assert det([v for j, v in enumerate(vs) if j != drop]) != 0


def test_frame_rejects_r1():
    with pytest.raises(ValueError):
        simplex_frame(1)


def test_lift_on_the_line():
    lf = lift(PointConfig.from_rows([[3]]), 2)
    assert lf.classes[0] == ((F(3), F(1)), (F(-3), F(-1)))
    assert lf.n == 2


def test_lift_in_the_plane():
    lf = lift(PointConfig.from_rows([[1, 2]]), 2)
    assert lf.classes[0] == ((1, 2, 1), (-1, -2, -1))


@pytest.mark.parametrize("d,r", [(1, 2), (2, 3), (3, 4), (2, 5)])
def test_classes_average_to_zero(d, r):
    cfg = random_config(np.random.default_rng(d * r), 6, d)
    lf = lift(cfg, r)
    assert lf.n == (d + 1) * (r - 1)
    for cls in lf.classes:
        assert all(sum(p[k] for p in cls) == 0 for k in range(lf.n))
        dec = origin_in_hull(list(cls))
        assert dec.inside and check_hull_decision(list(cls), dec)


def test_points_on_a_line_tverberg():
    cfg = PointConfig.from_rows([[0], [1], [2]])
    v = is_tverberg(cfg, Partition((1, 2, 1), 2))
    assert v.is_tverberg and v.common_point.point == (F(1),)


def test_radon_instance():
    part = Partition((1, 1, 1, 2), 2)
    assert is_tverberg(RADON, part).is_tverberg
    dropped = is_tverberg(RADON, part, subset=[0, 1, 2])
    assert not dropped.is_tverberg and dropped.empty_part == 2


def test_negative_verdict_carries_lifted_witness():
    cfg = PointConfig.from_rows([[0], [1], [5]])
    part = Partition((1, 1, 2), 2)
    v = is_tverberg(cfg, part)
    assert not v.is_tverberg
    pts = restrict_transversal(part, lift(cfg, 2), range(3))
    assert v.witness.contains_origin and v.witness.excludes_all(pts)


def test_restrict_transversal_shapes():
    cfg = random_config(np.random.default_rng(0), 5, 2)
    part = Partition((1, 2, 3, 1, 2), 3)
    lf = lift(cfg, 3)
    assert restrict_transversal(part, lf, []) == []
    full = restrict_transversal(part, lf, range(5))
    assert full == [lf.classes[i][part.labels[i] - 1] for i in range(5)]
    one = lift(PointConfig.from_rows([[3]]), 2)
    assert restrict_transversal(Partition((1,), 2), one, [0]) == [(3, 1)]


def test_partition_validates_labels():
    with pytest.raises(ValueError):
        Partition((1, 3), 2)


def test_direct_verdict_matches_float_lp():
    rng = np.random.default_rng(21)
    for _ in range(150):
        d, r = int(rng.integers(1, 4)), int(rng.integers(2, 4))
        N = int(rng.integers(r, 10))
        cfg = random_config(rng, N, d, -4, 4)
        part = Partition(tuple(rng.integers(1, r + 1, size=N).tolist()), r)
        parts = [[cfg.points[i] for i in p] for p in part.parts()]
        assert is_tverberg(cfg, part, certify=False).is_tverberg == lp_common_point(parts)


def test_translation_invariance():
    rng = np.random.default_rng(8)
    for _ in range(100):
        d, r = int(rng.integers(1, 4)), int(rng.integers(2, 4))
        N = int(rng.integers(2, 9))
        cfg = random_config(rng, N, d)
        shifted = cfg.translated(rng.integers(-20, 21, size=d).tolist())
        part = Partition(tuple(rng.integers(1, r + 1, size=N).tolist()), r)
        sub = [i for i in range(N) if rng.random() < 0.8]
        a = is_tverberg(cfg, part, sub, certify=False).is_tverberg
        assert a == is_tverberg(shifted, part, sub, certify=False).is_tverberg
        assert a == lifted_is_tverberg(part, lift(shifted, r), sub)


def test_translation_shifts_lift_linearly():
    cfg = PointConfig.from_rows([[1, -2], [0, 3]])
    t = (F(5), F(-1))
    fr = simplex_frame(3)
    a, b = lift(cfg, 3), lift(cfg.translated(t), 3)
    for i in range(2):
        for j, v in enumerate(fr.vertices):
            delta = tuple(x - y for x, y in zip(b.classes[i][j], a.classes[i][j]))
            assert delta == tuple(c * w for c in (*t, 0) for w in v)


def test_empty_part_lifted_side_agrees():
    # a subset missing a part never has the origin in its lifted transversal
    rng = np.random.default_rng(2)
    for _ in range(200):
        d, r = int(rng.integers(1, 4)), int(rng.integers(2, 4))
        N = int(rng.integers(1, 8))
        cfg = random_config(rng, N, d, -3, 3)
        part = Partition(tuple(rng.integers(1, r + 1, size=N).tolist()), r)
        sub = [i for i in range(N) if rng.random() < 0.6]
        if part.empty_part(sub) is not None:
            assert not lifted_is_tverberg(part, lift(cfg, r), sub)
