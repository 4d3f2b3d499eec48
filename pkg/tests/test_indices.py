from __future__ import annotations

from random import Random

import pytest

from _oracles import approx, rotation_cz, safe_floor
from spindex import (
    BlockPath,
    DegenerateIterate,
    ExactReal,
    Hyperbolic,
    Rotation,
    Shear,
    beta_invariants,
    cz_index,
    dc_iteration_check,
    index_bundle,
    is_dynamically_convex,
    mean_index,
    mu_pm,
)
from spindex.blockpaths import direct_sum
from spindex.generate import random_block_path, random_rotation


def test_rotation_cz_matches_floor_oracle():
    rng = Random(31)
    for _ in range(80):
        rot = random_rotation(rng)
        path = BlockPath(0, (rot,))
        lam = approx(rot.lam)
        for k in range(1, 30):
            t = k * rot.lam
            if t.is_integer():
                continue
            want = rotation_cz(abs(lam), k)
            if rot.lam.sign() < 0:
                want = -want
            assert cz_index(path, k) == want


def test_negative_rotation_antisymmetry():
    lam = ExactReal.parse("sqrt2") / 3
    pos = BlockPath(0, (Rotation(lam),))
    neg = BlockPath(0, (Rotation(ExactReal(0) - lam),))
    for k in range(1, 40):
        assert cz_index(neg, k) == -cz_index(pos, k)


def test_hyperbolic_and_loop_values():
    assert cz_index(BlockPath(0, (Hyperbolic(4),)), 3) == 12
    assert cz_index(BlockPath(0, (Hyperbolic(-3, True),)), 5) == -15
    assert cz_index(BlockPath(2, (Hyperbolic(1, True),)), 3) == 12 + 3
    assert mean_index(BlockPath(2, ())) == 4


def test_mean_index_values():
    lam = ExactReal.parse("1/3")
    assert mean_index(BlockPath(0, (Rotation(lam),))) == ExactReal.parse("2/3")
    assert mean_index(BlockPath(0, (Hyperbolic(5, True),))) == 5
    assert mean_index(BlockPath(0, (Shear("qplus", 2),))) == 0
    p = BlockPath(1, (Rotation(ExactReal.parse("sqrt2")), Hyperbolic(2)))
    assert mean_index(p) == ExactReal.parse("4+2*sqrt2")


def test_mean_index_homogeneous_under_iteration():
    from spindex import iterate
    rng = Random(32)
    for _ in range(60):
        p = random_block_path(rng)
        k = rng.randint(1, 20)
        assert mean_index(iterate(p, k)) == mean_index(p) * k


def test_mu_bounds_by_half_dim():
    rng = Random(33)
    for _ in range(80):
        p = random_block_path(rng)
        m = p.half_dim
        h = mean_index(p)
        for k in range(1, 25):
            lo, hi = mu_pm(p, k)
            assert lo <= hi
            assert h * k - m <= lo
            assert hi <= h * k + m


def test_mu_additive_under_direct_sum():
    rng = Random(34)
    for _ in range(60):
        p1, p2 = random_block_path(rng), random_block_path(rng)
        s = direct_sum(p1, p2)
        k = rng.randint(1, 15)
        a1, b1 = mu_pm(p1, k)
        a2, b2 = mu_pm(p2, k)
        assert mu_pm(s, k) == (a1 + a2, b1 + b2)


def test_beta_gap_bounded_by_half_dim():
    rng = Random(35)
    for _ in range(80):
        p = random_block_path(rng)
        k = rng.randint(1, 25)
        b = index_bundle(p, k)
        assert abs(b.beta_plus - b.beta_minus) <= p.half_dim
        assert b.mu_minus == b.mu_plus - b.beta_plus - b.beta_minus


def test_cz_refused_on_degenerate_iterates():
    p = BlockPath(0, (Rotation(ExactReal.parse("1/4")),))
    assert cz_index(p, 3) == 1
    with pytest.raises(DegenerateIterate):
        cz_index(p, 4)
    b = index_bundle(p, 4)
    assert b.degenerate and b.cz is None
    assert b.nu0 == 1
    shear = BlockPath(0, (Shear("q0", 1),))
    with pytest.raises(DegenerateIterate):
        cz_index(shear, 1)


def test_nondegenerate_bundle_collapses_to_cz():
    rng = Random(36)
    from spindex.generate import random_nondegenerate_path
    for _ in range(60):
        p = random_nondegenerate_path(rng)
        for k in (1, 2, 7):
            b = index_bundle(p, k)
            if b.degenerate:
                continue
            assert b.mu_minus == b.mu_plus == b.cz == cz_index(p, k)
            assert beta_invariants(p, k) == (0, 0, 0, 0)


def test_bundle_json_keys():
    p = BlockPath(0, (Rotation(ExactReal.parse("sqrt5")), Shear("qminus", 1)))
    obj = index_bundle(p, 2).to_json()
    assert set(obj) == {"k", "meanIndex", "czIndex", "muMinus", "muPlus",
                        "nu0", "b0", "bPlus", "bMinus", "betaPlus",
                        "betaMinus", "halfDim"}
    assert obj["czIndex"] is None and obj["bMinus"] == 1


def test_shear_beta_bookkeeping():
    p = BlockPath(0, (Shear("zero", 2), Shear("q0", 3), Shear("qplus", 1),
                      Shear("qminus", 1)))
    assert beta_invariants(p, 7) == (2, 1, 1, 1)
    lo, hi = mu_pm(p, 7)
    assert lo == -(2 + 1 + 1) and hi == 2 + 1 + 1


def test_dynamical_convexity_threshold():
    # mu-(1) = 3 = m + 2 for the round ellipsoid in dimension 4
    round2 = BlockPath(0, (Rotation(ExactReal.parse("1001/1000")),
                           Rotation(ExactReal.parse("1002/1000"))))
    assert is_dynamically_convex(round2)
    flat = BlockPath(0, (Rotation(ExactReal.parse("1/5")),
                         Rotation(ExactReal.parse("1/7"))))
    assert not is_dynamically_convex(flat)


def test_dc_iteration_sweep():
    p = BlockPath(0, (Rotation(ExactReal.parse("1001/1000")),
                      Rotation(ExactReal.parse("sqrt2")),))
    rep = dc_iteration_check(p, 200)
    assert rep.dc and rep.ok and rep.first_violation is None


def test_large_k_sweep_consistency():
    lam = (ExactReal.sqrt(5) - 1) / 2
    p = BlockPath(0, (Rotation(lam),))
    lamf = approx(lam)
    for k in range(1, 2001, 97):
        assert cz_index(p, k) == 2 * safe_floor(k * lamf) + 1
