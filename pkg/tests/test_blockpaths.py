from __future__ import annotations

import json
from random import Random

import pytest

from spindex import (
    BlockPath,
    ExactReal,
    Hyperbolic,
    Rotation,
    Shear,
    is_admissible,
    iterate,
    mean_index,
    rational_rotation_denominators,
    root_of_unity_lcm,
)
from spindex.blockpaths import direct_sum, eigenvalue_summary
from spindex.generate import random_block_path


def test_rotation_rejects_integers_and_zero():
    with pytest.raises(ValueError):
        Rotation(ExactReal(2))
    with pytest.raises(ValueError):
        Rotation(ExactReal(0))
    Rotation(ExactReal.parse("1/2"))
    Rotation(ExactReal.parse("sqrt2"))


def test_hyperbolic_parity_contract():
    Hyperbolic(2, False)
    Hyperbolic(3, True)
    with pytest.raises(ValueError):
        Hyperbolic(3, False)
    with pytest.raises(ValueError):
        Hyperbolic(2, True)


def test_shear_forms():
    Shear("zero", 3)
    Shear("q0", 3)
    Shear("qplus", 2)
    with pytest.raises(ValueError):
        Shear("q0", 2)  # q0 needs odd size
    with pytest.raises(ValueError):
        Shear("weird", 1)
    with pytest.raises(ValueError):
        Shear("zero", 0)


def test_half_dim_adds_up():
    p = BlockPath(1, (Rotation(ExactReal.parse("1/3")), Hyperbolic(2),
                      Shear("zero", 2), Shear("q0", 3)))
    assert p.half_dim == 1 + 1 + 2 + 3
    assert p.dimension == 2 * p.half_dim


def test_iterate_scales_rotations_and_loop():
    p = BlockPath(2, (Rotation(ExactReal.parse("sqrt2")),))
    q = iterate(p, 3)
    assert q.loop == 6
    assert q.blocks[0].lam == ExactReal.parse("3*sqrt2")


def test_iterate_demotes_integral_rotation():
    p = BlockPath(0, (Rotation(ExactReal.parse("1/3")),))
    q = iterate(p, 3)
    assert q.loop == 1
    assert q.blocks == (Shear("zero", 1),)
    assert mean_index(q) == mean_index(p) * 3


def test_iterate_hyperbolic_sign_rule():
    p = BlockPath(0, (Hyperbolic(3, True),))
    assert iterate(p, 2).blocks[0] == Hyperbolic(6, False)
    assert iterate(p, 3).blocks[0] == Hyperbolic(9, True)


def test_iterate_composes():
    rng = Random(21)
    for _ in range(50):
        p = random_block_path(rng)
        a, b = rng.randint(1, 5), rng.randint(1, 5)
        assert iterate(iterate(p, a), b) == iterate(p, a * b)


def test_iterate_rejects_bad_power():
    p = BlockPath(0, (Hyperbolic(2),))
    for k in (0, -1, 2.0):
        with pytest.raises(ValueError):
            iterate(p, k)


def test_direct_sum_concatenates():
    p1 = BlockPath(1, (Hyperbolic(2),))
    p2 = BlockPath(2, (Shear("q0", 1),))
    s = direct_sum(p1, p2)
    assert s.loop == 3
    assert s.blocks == p1.blocks + p2.blocks


def test_eigenvalue_summary_counts():
    p = BlockPath(0, (Rotation(ExactReal.parse("1/2")),
                      Rotation(ExactReal.parse("sqrt2")),
                      Hyperbolic(3, True),
                      Shear("q0", 1)))
    s = eigenvalue_summary(p, 1)
    assert s.minus_ones == 2
    assert len(s.elliptic) == 1
    assert s.hyperbolic_negative_pairs == 1
    assert s.b0 == 1 and s.nu0 == 0
    assert s.degenerate
    s2 = eigenvalue_summary(p, 2)
    assert s2.minus_ones == 0
    assert s2.nu0 == 1  # the 1/2 rotation closed up
    assert s2.hyperbolic_negative_pairs == 0


def test_admissibility_and_denominators():
    p = BlockPath(0, (Rotation(ExactReal.parse("1/2")),
                      Rotation(ExactReal.parse("2/3")),
                      Rotation(ExactReal.parse("sqrt5"))))
    assert sorted(rational_rotation_denominators(p)) == [2, 3]
    assert root_of_unity_lcm(p) == 6
    admissible = [k for k in range(1, 13) if is_admissible(p, k)]
    assert admissible == [1, 5, 7, 11]


def test_irrational_only_path_fully_admissible():
    p = BlockPath(0, (Rotation(ExactReal.parse("sqrt2")),))
    assert root_of_unity_lcm(p) == 1
    assert all(is_admissible(p, k) for k in range(1, 50))


def test_guarded_rotation_treated_irrational():
    p = BlockPath(0, (Rotation(ExactReal.guarded("0.5", "0.001")),))
    assert rational_rotation_denominators(p) == []
    assert is_admissible(p, 2)


def test_json_round_trip():
    rng = Random(22)
    for _ in range(60):
        p = random_block_path(rng)
        blob = json.dumps(p.to_json())
        assert BlockPath.from_json(json.loads(blob)) == p
