"""Algebra-level tests, checked against an independent matrix representation.

The six generators satisfy e_i e_{j+3} + e_{j+3} e_i = 2*delta_ij with all
other anticommutators zero, so sending e_i to exterior multiplication and
e_{i+3} to twice the contraction on the 8-dimensional exterior algebra of a
3-space gives a faithful representation.  That representation is built here
from scratch (sign counting only) and every one of the 64x64 basis products
is compared against it.
"""

import itertools
import random
from fractions import Fraction

import pytest

from klein33.errors import KleinError
from klein33.ga_core import (GRADE, LABELS, Multivector, e, from_map,
                             masks_of_grade, pairing, parse_label,
                             projective_eq, quadratic_form, to_map)

DIM = 8  # exterior algebra over a 3-dimensional space


def _zero():
    return [[Fraction(0)] * DIM for _ in range(DIM)]


def _ident():
    m = _zero()
    for i in range(DIM):
        m[i][i] = Fraction(1)
    return m


def _mm(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(DIM)) for j in range(DIM)]
            for i in range(DIM)]


def _madd(a, b, s=1):
    return [[a[i][j] + s * b[i][j] for j in range(DIM)] for i in range(DIM)]


def _mscale(a, s):
    return [[a[i][j] * s for j in range(DIM)] for i in range(DIM)]


def _sign_below(state, i):
    return -1 if bin(state & ((1 << i) - 1)).count("1") % 2 else 1


def _creation(i):
    m = _zero()
    for s in range(DIM):
        if not s & (1 << i):
            m[s | (1 << i)][s] = Fraction(_sign_below(s, i))
    return m


def _contraction(i):
    m = _zero()
    for s in range(DIM):
        if s & (1 << i):
            m[s ^ (1 << i)][s] = Fraction(_sign_below(s, i))
    return m


# generator matrices: e1,e2,e3 create; e4,e5,e6 contract (times two)
GEN = [_creation(0), _creation(1), _creation(2),
       _mscale(_contraction(0), 2), _mscale(_contraction(1), 2),
       _mscale(_contraction(2), 2)]


def _rep_of_mask(mask):
    idx = [i for i in range(6) if mask & (1 << i)]
    if not idx:
        return _ident()
    acc = _zero()
    count = 0
    for perm in itertools.permutations(range(len(idx))):
        inv = sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm))
                  if perm[a] > perm[b])
        term = _ident()
        for p in perm:
            term = _mm(term, GEN[idx[p]])
        acc = _madd(acc, term, (-1) ** inv)
        count += 1
    return _mscale(acc, Fraction(1, count))


def _intify(m):
    assert all(x.denominator == 1 for row in m for x in row)
    return [[int(x) for x in row] for row in m]


REP = {mask: _intify(_rep_of_mask(mask)) for mask in range(64)}


def _rep(mv: Multivector):
    acc = [[0] * DIM for _ in range(DIM)]
    for mask, c in mv.items():
        acc = _madd(acc, REP[mask], c)
    return [[Fraction(x) for x in row] for row in acc]


def test_generator_relations():
    for i in range(6):
        for j in range(6):
            anti = _madd(_mm(GEN[i], GEN[j]), _mm(GEN[j], GEN[i]))
            want = _mscale(_ident(), 2) if (i % 3 == j % 3 and i != j) else _zero()
            assert anti == want, (i, j)


def test_representation_is_faithful():
    rows = [[Fraction(REP[m][i][j]) for i in range(DIM) for j in range(DIM)]
            for m in range(64)]
    from klein33 import linalg
    assert linalg.rank(rows) == 64


def test_all_basis_products_match_matrix_representation():
    for m1 in range(64):
        r1 = REP[m1]
        for m2 in range(64):
            prod = Multivector.basis(m1) * Multivector.basis(m2)
            want = [[Fraction(x) for x in row] for row in _mm(r1, REP[m2])]
            assert _rep(prod) == want, (LABELS[m1], LABELS[m2])


def _shuffle_sign(ma, mb):
    """Parity of merging the ascending index words of ma and mb."""
    sign = 1
    for i in range(6):
        if mb & (1 << i):
            higher = bin(ma >> (i + 1)).count("1")
            sign *= (-1) ** higher
    return sign


def _wedge_dicts(a, b):
    """Independent Grassmann product on mask->coeff dicts."""
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            if ma & mb:
                continue
            out[ma | mb] = out.get(ma | mb, 0) + _shuffle_sign(ma, mb) * ca * cb
    return {m: c for m, c in out.items() if c}


def test_outer_product_matches_grassmann_signs():
    rng = random.Random(20)
    for _ in range(300):
        a = {m: rng.randint(-3, 3) for m in rng.sample(range(64), 4)}
        b = {m: rng.randint(-3, 3) for m in rng.sample(range(64), 4)}
        mva = Multivector(dict(a))
        mvb = Multivector(dict(b))
        want = _wedge_dicts(a, b)
        got = {m: c for m, c in (mva ^ mvb).items()}
        assert got == {m: c for m, c in want.items()}


def test_associativity_and_distributivity():
    rng = random.Random(21)
    for _ in range(60):
        a, b, c = (Multivector({m: rng.randint(-4, 4)
                                for m in rng.sample(range(64), 5)})
                   for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert (a ^ b) ^ c == a ^ (b ^ c)
        assert a * (b + c) == a * b + a * c
        assert (a + b) ^ c == (a ^ c) + (b ^ c)


def test_vector_square_is_quadratic_form():
    rng = random.Random(22)
    for _ in range(200):
        v = [rng.randint(-5, 5) for _ in range(6)]
        sq = Multivector.vector(v) * Multivector.vector(v)
        assert sq == Multivector.scalar(quadratic_form(v))
        assert quadratic_form(v) == 2 * sum(v[i] * v[i + 3] for i in range(3))


def test_pairing_polarizes_quadratic_form():
    rng = random.Random(23)
    for _ in range(200):
        v = [rng.randint(-5, 5) for _ in range(6)]
        w = [rng.randint(-5, 5) for _ in range(6)]
        vw = [v[i] + w[i] for i in range(6)]
        assert (quadratic_form(vw) - quadratic_form(v) - quadratic_form(w)
                == 2 * pairing(v, w))
        mv, mw = Multivector.vector(v), Multivector.vector(w)
        assert mv * mw + mw * mv == Multivector.scalar(2 * pairing(v, w))


def test_reverse_is_an_antiautomorphism():
    rng = random.Random(24)
    for _ in range(60):
        a = Multivector({m: rng.randint(-4, 4) for m in rng.sample(range(64), 5)})
        b = Multivector({m: rng.randint(-4, 4) for m in rng.sample(range(64), 5)})
        assert (a * b).reverse() == b.reverse() * a.reverse()
    for i in range(1, 7):
        assert e(i).reverse() == e(i)
    for k in range(7):
        for m in masks_of_grade(k):
            sign = (-1) ** (k * (k - 1) // 2)
            assert Multivector.basis(m).reverse() == Multivector.basis(m) * sign


def test_alpha_is_the_grade_involution():
    rng = random.Random(25)
    for _ in range(60):
        a = Multivector({m: rng.randint(-4, 4) for m in rng.sample(range(64), 5)})
        b = Multivector({m: rng.randint(-4, 4) for m in rng.sample(range(64), 5)})
        assert (a * b).alpha() == a.alpha() * b.alpha()
        assert a.alpha().alpha() == a
    for k in range(7):
        for m in masks_of_grade(k):
            assert Multivector.basis(m).alpha() == Multivector.basis(m) * (-1) ** k


def test_conjugation_composes_alpha_and_reverse():
    rng = random.Random(26)
    for _ in range(40):
        a = Multivector({m: rng.randint(-4, 4) for m in rng.sample(range(64), 6)})
        assert a.conj() == a.alpha().reverse()
        assert a.conj() == a.reverse().alpha()


def test_pseudoscalar_squares_to_one_and_dual_is_involutive():
    J = Multivector.basis(63)
    assert J * J == Multivector.scalar(1)
    assert Multivector.scalar(1).dual() == J
    rng = random.Random(27)
    for _ in range(40):
        a = Multivector({m: rng.randint(-4, 4) for m in rng.sample(range(64), 6)})
        assert a.dual() == a * J
        assert a.dual().dual() == a


def test_grade_bookkeeping():
    assert [len(masks_of_grade(k)) for k in range(7)] == [1, 6, 15, 20, 15, 6, 1]
    for m in range(64):
        assert GRADE[m] == bin(m).count("1")
    mv = from_map({"1": 2, "e12": 3, "e123456": -1})
    assert mv.grades() == [0, 2, 6]
    assert mv.grade_part(2) == from_map({"e12": 3})
    assert mv.scalar_part() == 2


def test_label_round_trip():
    for m in range(64):
        assert parse_label(LABELS[m]) == m
    mv = from_map({"e25": "3/2", "1": -2})
    assert to_map(mv) == {"1": "-2", "e25": "3/2"}
    assert from_map(to_map(mv)) == mv
    with pytest.raises(KleinError):
        from_map({"e12": 1.5})
    with pytest.raises(KleinError):
        from_map({"e99": 1})


def test_example_three_line_wedge():
    l1 = Multivector.vector([1, 0, 0, 0, 0, 2])
    l2 = Multivector.vector([0, 1, 0, 2, 0, 0])
    l3 = Multivector.vector([0, 0, 1, 0, 2, 0])
    expected = from_map({"e123": 1, "e125": 2, "e134": -2, "e145": 4,
                         "e236": 2, "e256": 4, "e346": -4, "e456": 8})
    assert (l1 ^ l2 ^ l3) == expected


def test_projective_equality():
    a = from_map({"e12": 2, "e34": -4})
    assert projective_eq(a, from_map({"e12": -1, "e34": 2}))
    assert not projective_eq(a, from_map({"e12": 2, "e34": 4}))
    assert not projective_eq(a, Multivector.scalar(0))
    with pytest.raises(KleinError):
        projective_eq(Multivector.scalar(0), Multivector.scalar(0))


def test_scalar_division_and_integer_coefficients_survive():
    a = from_map({"e12": 3})
    assert a / 3 == from_map({"e12": 1})
    assert (a / 2) * 2 == a
    b = Multivector.vector([1, 2, 3, 4, 5, 6])
    assert all(isinstance(c, int) for _, c in (b * b).items())
