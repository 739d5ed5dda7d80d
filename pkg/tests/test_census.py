import random
from math import gcd
from itertools import permutations, product

import pytest

from fixedloci.census import (
    Cocharacter,
    FixedPoint,
    NonCompactError,
    TangentWeight,
    cell_dimension,
    count_fixed_points,
    dimension_multiset,
    fixed_points,
    h0_series,
    is_compact_regime,
    ow,
    poincare_series,
    refinement_sign,
    tangent_weights,
    weight_pairing,
)
from fixedloci.partitions import Partition, arm_leg, count_s_tuples

import oracles


def fp(*diagrams):
    return FixedPoint(tuple(Partition(d) for d in diagrams))


def test_cocharacter_validation():
    with pytest.raises(ValueError):
        Cocharacter(2, 4, (0,))
    with pytest.raises(ValueError):
        Cocharacter(0, 1, (0,))
    assert Cocharacter.homogeneous(3, 1).w == (1, 0, 0)
    assert ow(2, 0) == (0, 0)


def test_tangent_weight_examples():
    assert sorted(tangent_weights(fp((1,)))) == [(1, 1, 0, 1), (1, 1, 1, 0)]
    assert tangent_weights(fp((), (), ())) == []
    # (i, j, k1, k2) stands for e_j e_i^-1 t1^k1 t2^k2
    got = sorted(tangent_weights(fp((1,), ())))
    assert got == sorted([(1, 1, 0, 1), (1, 1, 1, 0), (1, 2, 1, 1), (2, 1, 0, 0)])


def test_tangent_weights_match_oracle():
    for r in (1, 2, 3):
        for n in range(5):
            for p in fixed_points(r, n):
                mine = sorted((w.i - 1, w.j - 1, w.k1, w.k2) for w in tangent_weights(p))
                assert mine == sorted(oracles.weights(tuple(tuple(d) for d in p.diagrams)))


def test_weight_pairing_examples():
    assert weight_pairing(TangentWeight(1, 1, 0, 1), Cocharacter(1, 1, (0,))) == 1
    assert weight_pairing(TangentWeight(2, 1, 1, 0), Cocharacter(1, 2, (1, 0))) == 2
    with pytest.raises(ValueError):
        weight_pairing(TangentWeight(3, 1, 0, 0), Cocharacter(1, 1, (0, 0)))


def test_refinement_sign_examples():
    assert refinement_sign(TangentWeight(1, 1, 0, 1)) == 1
    assert refinement_sign(TangentWeight(2, 1, 0, 0)) == 1
    assert refinement_sign(TangentWeight(1, 2, 0, 0)) == -1
    assert refinement_sign(TangentWeight(1, 1, 3, -1)) == -1


def test_cell_dimension_examples():
    assert cell_dimension(fp((2,), ()), Cocharacter(1, 1, (1, 0))) == 1
    assert cell_dimension(fp((), (2,)), Cocharacter(1, 1, (1, 0))) == 0
    assert cell_dimension(fp((1, 1, 1)), Cocharacter(1, 2, (0,))) == 1


def test_cell_dimension_against_oracle_random_cocharacters():
    rng = random.Random(7)
    for _ in range(25):
        r = rng.randint(1, 3)
        while True:
            a, b = rng.randint(1, 4), rng.randint(1, 4)
            if gcd(a, b) == 1:
                break
        w = tuple(rng.randint(0, a + b - 1) for _ in range(r))
        c = Cocharacter(a, b, w)
        n = rng.randint(0, 5 if r < 3 else 4)
        for p in fixed_points(r, n):
            D = tuple(tuple(d) for d in p.diagrams)
            assert cell_dimension(p, c) == oracles.dim(D, a, b, w)


def _three_sums(D, w):
    """The alpha = beta = 1 cell dimension as three literal box counts."""
    r = len(D)
    total = 0
    for i in range(r):
        for s in D[i].boxes():
            a, l = arm_leg(D[i], s)
            total += a + 1 == l
    for i in range(r):
        for j in range(i):
            for s in D[i].boxes():
                a, _ = arm_leg(D[i], s)
                _, l = arm_leg(D[j], s)
                total += w[j] - w[i] - l + a + 1 == 0
            for s in D[j].boxes():
                a, _ = arm_leg(D[j], s)
                _, l = arm_leg(D[i], s)
                total += w[j] - w[i] + l + 1 - a == 0
    return total


def test_cell_dimension_matches_three_sum_formula():
    for r in (1, 2, 3):
        for m in range(r + 1):
            c = Cocharacter.homogeneous(r, m)
            for n in range(7 if r < 3 else 6):
                for p in fixed_points(r, n):
                    assert cell_dimension(p, c) == _three_sums(p.diagrams, c.w)


def test_dimension_in_range():
    c = Cocharacter(2, 3, (0, 4))
    for n in range(5):
        for p in fixed_points(2, n):
            assert 0 <= cell_dimension(p, c) <= 4 * n


def test_compactness_examples():
    assert is_compact_regime(Cocharacter(1, 1, (1, 0, 0)))
    assert not is_compact_regime(Cocharacter(1, 1, (2, 0)))
    assert is_compact_regime(Cocharacter(2, 3, (4, 0)))
    with pytest.raises(NonCompactError, match="alpha \\+ beta"):
        h0_series(2, Cocharacter(1, 1, (2, 0)), 3)


def test_fixed_point_count():
    for r in (1, 2, 3):
        for n in range(7):
            assert len(fixed_points(r, n)) == count_fixed_points(r, n)
            assert len(fixed_points(r, n)) == sum(1 for _ in oracles.fixed_points(r, n))


def test_h0_examples():
    assert list(h0_series(1, Cocharacter(1, 1, (0,)), 5)) == [1, 1, 1, 2, 2, 3]
    assert list(h0_series(2, Cocharacter(1, 1, (1, 0)), 5)) == [1, 2, 2, 4, 6, 8]
    assert list(h0_series(3, Cocharacter(1, 1, (1, 0, 0)), 4)) == [1, 2, 3, 5, 8]


def test_h0_matches_oracle():
    for r, w in [(1, (0,)), (2, (1, 0)), (2, (0, 0)), (3, (1, 1, 0))]:
        assert list(h0_series(r, Cocharacter(1, 1, w), 5)) == oracles.h0(r, 1, 1, w, 5)


def test_zero_cells_biject_with_s_set():
    for r in (1, 2, 3):
        for m in range(r + 1):
            h = h0_series(r, Cocharacter.homogeneous(r, m), 8)
            assert list(h) == [count_s_tuples(r, m, n) for n in range(9)]


def test_poincare_examples():
    p = poincare_series(2, Cocharacter(1, 1, (0, 0)), 3)
    assert p[1] == (1, 1)
    assert p[2] == (2, 2, 1)
    assert poincare_series(1, Cocharacter(1, 2, (0,)), 3)[3] == (2, 1)
    assert [list(x) for x in p.coeffs] == oracles.poincare(2, 1, 1, (0, 0), 3)


def test_poincare_at_q_one_counts_fixed_points():
    p = poincare_series(2, Cocharacter(1, 2, (0, 2)), 6)
    assert p.at_q_equals_one() == [count_fixed_points(2, n) for n in range(7)]


def test_weight_permutation_preserves_dimension_multisets():
    for w in product((0, 1), repeat=2):
        for perm in set(permutations(w)):
            for n in range(7):
                assert dimension_multiset(Cocharacter(1, 1, w), n) == dimension_multiset(Cocharacter(1, 1, perm), n)


def test_parallel_table_matches_serial():
    from fixedloci.census import dimension_table

    c = Cocharacter(1, 1, (1, 0))
    assert dimension_table(c, 6, jobs=2) == dimension_table(c, 6)
