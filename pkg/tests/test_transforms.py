"""Sandwich actions, matrix transfer, and reflection factorization.

The heavy oracles: a versor built as a product of vectors must transport
lines exactly the way its 4x4 matrix transports points (even case) or
planes to points (odd case); and every factorization must recompose to its
input, exactly, in whichever representation it was produced.
"""

import random
from fractions import Fraction

import pytest

from klein33 import linalg, transforms as tr
from klein33.errors import KleinError
from klein33.exactnum import QuadExt
from klein33.ga_core import Multivector, from_map, projective_eq, quadratic_form
from klein33.klein_lines import (embed, extract, line_from_planes,
                                 line_from_points)
from klein33.acceptance import G_PLUS, G_MINUS, H_PLUS, H_MINUS, K_MATRIX


def _mv(v):
    return Multivector.vector(list(v))


def _rand_nonnull(rng, lo=-3, hi=3):
    while True:
        a = tuple(rng.randint(lo, hi) for _ in range(6))
        if any(a) and quadratic_form(a):
            return a


def _rand_point(rng):
    while True:
        x = [rng.randint(-4, 4) for _ in range(4)]
        if any(x):
            return x


def test_null_polarity_matrix_shape_and_round_trip():
    a = (1, 2, 3, 4, 5, 6)
    m = tr.vector_to_null_polarity(a)
    assert m == [[0, -4, -5, -6],
                 [4, 0, -3, 2],
                 [5, 3, 0, -1],
                 [6, -2, 1, 0]]
    assert tr.null_polarity_to_vector(m) == a
    rng = random.Random(50)
    for _ in range(100):
        a = tuple(rng.randint(-6, 6) for _ in range(6))
        if not any(a):
            continue
        m = tr.vector_to_null_polarity(a)
        assert all(m[i][j] == -m[j][i] for i in range(4) for j in range(4))
        assert tr.null_polarity_to_vector(m) == a
        s = a[0] * a[3] + a[1] * a[4] + a[2] * a[5]
        assert linalg.det(linalg.mat(m)) == s * s
    with pytest.raises(KleinError):
        tr.vector_to_null_polarity((0, 0, 0, 0, 0, 0))
    with pytest.raises(KleinError):
        tr.null_polarity_to_vector([[1, 0, 0, 0]] * 4)


def test_polarity_image_of_a_point_lies_on_incident_lines():
    # the image plane of x contains x itself (skew form), and any line
    # through x inside that plane pairs to zero with the defining vector
    rng = random.Random(51)
    for _ in range(50):
        a = _rand_nonnull(rng)
        m = tr.vector_to_null_polarity(a)
        x = _rand_point(rng)
        plane = linalg.mat_vec(linalg.mat(m), linalg.vec(x))
        assert sum(p * xi for p, xi in zip(plane, x)) == 0


def test_sandwich_matrix_of_a_vector_doubles_its_line_map():
    rng = random.Random(52)
    for _ in range(40):
        a = _rand_nonnull(rng)
        s = tr.sandwich_matrix6(_mv(a))
        lm = tr.vector_to_linemap6(a)
        assert linalg.mat_eq(linalg.mat(s),
                             linalg.mat_scale(linalg.mat(lm.mat), 2))
        # and the algebra agrees column by column
        for j in range(6):
            basis = [0] * 6
            basis[j] = 1
            img = tr.sandwich(_mv(a), _mv(basis))
            assert list(extract(img)) == [2 * lm.mat[i][j] for i in range(6)]


def test_even_versor_transports_lines_like_its_point_matrix():
    rng = random.Random(53)
    for _ in range(25):
        g = Multivector.scalar(1)
        for _ in range(2 * rng.randint(1, 3)):
            g = g * _mv(_rand_nonnull(rng))
        a = tr.versor_to_matrix(g)
        assert a.kind == tr.COLLINEATION
        am = linalg.mat(a.mat)
        for _ in range(4):
            x, y = _rand_point(rng), _rand_point(rng)
            try:
                line = line_from_points(x, y)
                image = line_from_points(linalg.mat_vec(am, linalg.vec(x)),
                                         linalg.mat_vec(am, linalg.vec(y)))
            except KleinError:
                continue
            got = tr.sandwich(g, embed(line))
            assert projective_eq(got, embed(image))


def test_odd_versor_transports_lines_like_its_plane_to_point_matrix():
    rng = random.Random(54)
    for _ in range(25):
        g = Multivector.scalar(1)
        for _ in range(2 * rng.randint(0, 2) + 1):
            g = g * _mv(_rand_nonnull(rng))
        a = tr.versor_to_matrix(g)
        assert a.kind == tr.CORRELATION
        am = linalg.mat(a.mat)
        for _ in range(4):
            u, v = _rand_point(rng), _rand_point(rng)
            try:
                line = line_from_planes(u, v)
                image = line_from_points(linalg.mat_vec(am, linalg.vec(u)),
                                         linalg.mat_vec(am, linalg.vec(v)))
            except KleinError:
                continue
            got = tr.sandwich(g, embed(line))
            assert projective_eq(got, embed(image))


def test_versor_matrix_is_multiplicative_in_the_alternating_sense():
    rng = random.Random(55)
    for _ in range(40):
        a, b = _rand_nonnull(rng), _rand_nonnull(rng)
        g = _mv(a) * _mv(b)
        expect = linalg.mat_mul(linalg.mat(tr._odd_matrix(_mv(a))),
                                linalg.mat(tr.vector_to_null_polarity(b)))
        got = tr.versor_to_matrix(g)
        assert got.kind == tr.COLLINEATION
        assert linalg.projective_eq_mat(linalg.mat(got.mat), expect)


def test_collineation_golden_matrix():
    versor = tr.matrix_to_versor(tr.ProjMatrix4(K_MATRIX, tr.COLLINEATION))
    assert versor.parity == "even"
    assert (projective_eq(versor.mv, from_map(G_PLUS))
            or projective_eq(versor.mv, from_map(G_MINUS)))
    back = tr.versor_to_matrix(versor)
    assert linalg.projective_eq_mat(linalg.mat(back.mat), linalg.mat(K_MATRIX))
    # both golden rays map back to the same projective matrix
    for ray in (G_PLUS, G_MINUS):
        m = tr.versor_to_matrix(from_map(ray))
        assert m.kind == tr.COLLINEATION
        assert linalg.projective_eq_mat(linalg.mat(m.mat), linalg.mat(K_MATRIX))


def test_correlation_golden_matrix():
    versor = tr.matrix_to_versor(tr.ProjMatrix4(K_MATRIX, tr.CORRELATION))
    assert versor.parity == "odd"
    assert (projective_eq(versor.mv, from_map(H_PLUS))
            or projective_eq(versor.mv, from_map(H_MINUS)))
    for ray in (H_PLUS, H_MINUS):
        m = tr.versor_to_matrix(from_map(ray))
        assert m.kind == tr.CORRELATION
        assert linalg.projective_eq_mat(linalg.mat(m.mat), linalg.mat(K_MATRIX))


def test_reflection_matrices_are_involutions():
    rng = random.Random(56)
    for _ in range(40):
        w = _rand_nonnull(rng)
        r = tr.reflection_matrix(w)
        rm = linalg.mat(r)
        assert linalg.mat_eq(linalg.mat_mul(rm, rm), linalg.identity(6))
        img = linalg.mat_vec(rm, linalg.vec(w))
        assert list(img) == [-x for x in linalg.vec(w)]
    with pytest.raises(KleinError):
        tr.reflection_matrix((1, 0, 0, 0, 0, 0))


def test_reflection_factorization_recomposes_exactly():
    rng = random.Random(57)
    for _ in range(30):
        k = rng.randint(1, 6)
        target = linalg.identity(6)
        for _ in range(k):
            target = linalg.mat_mul(target,
                                    linalg.mat(tr.reflection_matrix(
                                        _rand_nonnull(rng))))
        ws = tr.linemap_to_reflections(target)
        assert len(ws) <= 6
        back = linalg.identity(6)
        for w in ws:
            back = linalg.mat_mul(back, linalg.mat(tr.reflection_matrix(w)))
        assert linalg.mat_eq(back, target)


def test_identity_needs_no_reflections():
    assert tr.linemap_to_reflections(linalg.identity(6)) == []


def test_unipotent_maps_factor():
    # transvections have totally isotropic image of (f - 1): the tricky branch
    shear = [[1, 0, 0, 0], [5, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    versor = tr.matrix_to_versor(tr.ProjMatrix4(shear, tr.COLLINEATION))
    back = tr.versor_to_matrix(versor)
    assert linalg.projective_eq_mat(linalg.mat(back.mat), linalg.mat(shear))
    jordan = [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1], [0, 0, 0, 1]]
    versor = tr.matrix_to_versor(tr.ProjMatrix4(jordan, tr.COLLINEATION))
    back = tr.versor_to_matrix(versor)
    assert linalg.projective_eq_mat(linalg.mat(back.mat), linalg.mat(jordan))


def test_non_square_determinant_uses_quadratic_extension():
    stretch = [[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    versor = tr.matrix_to_versor(tr.ProjMatrix4(stretch, tr.COLLINEATION))
    assert any(isinstance(c, QuadExt) for w in versor.factors for c in w)
    back = tr.versor_to_matrix(versor)
    assert linalg.projective_eq_mat(linalg.mat(back.mat), linalg.mat(stretch))


def test_negative_conformal_factor_is_rejected():
    flip = tr.ProjMatrix4([[1, 0, 0, 0], [0, 1, 0, 0],
                           [0, 0, 1, 0], [0, 0, 0, -1]], tr.COLLINEATION)
    lm = tr.matrix_to_linemap6(flip)
    assert lm.lam == -1
    # the induced line map negates the quadric pairing
    g6 = [[0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1],
          [1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]]
    lhs = linalg.mat_mul(linalg.transpose(linalg.mat(lm.mat)),
                         linalg.mat_mul(linalg.mat(g6), linalg.mat(lm.mat)))
    assert linalg.mat_eq(lhs, linalg.mat_scale(linalg.mat(g6), -1))
    with pytest.raises(KleinError) as err:
        tr.matrix_to_versor(flip)
    assert err.value.code == "E_NOT_PIN_REPRESENTABLE"


def test_singular_matrix_is_rejected():
    sing = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [1, 1, 1, 0]]
    with pytest.raises(KleinError) as err:
        tr.matrix_to_versor(tr.ProjMatrix4(sing, tr.COLLINEATION))
    assert err.value.code == "E_SINGULAR"
    with pytest.raises(KleinError):
        tr.matrix_to_linemap6(tr.ProjMatrix4(sing, tr.COLLINEATION))


def test_single_polarity_decomposes_to_itself_when_swap_symmetric():
    a = (1, 2, 3, 1, 2, 3)
    m = tr.vector_to_null_polarity(a)
    polys = tr.decompose_null_polarities(tr.ProjMatrix4(m, tr.CORRELATION))
    assert len(polys) == 1
    assert linalg.projective_eq_mat(linalg.mat(polys[0]), linalg.mat(m))


def test_decomposition_recomposes_products_of_polarities():
    rng = random.Random(58)
    for k in range(1, 7):
        vs = [_rand_nonnull(rng) for _ in range(k)]
        a = linalg.identity(4)
        for j, v in enumerate(vs):
            steps_after = len(vs) - 1 - j
            m = (tr.vector_to_null_polarity(v) if steps_after % 2 == 0
                 else tr._odd_matrix(_mv(v)))
            a = linalg.mat_mul(a, linalg.mat(m))
        kind = tr.COLLINEATION if k % 2 == 0 else tr.CORRELATION
        polys = tr.decompose_null_polarities(tr.ProjMatrix4(a, kind))
        assert 0 < len(polys) <= 6 and len(polys) % 2 == k % 2
        g = Multivector.scalar(1)
        for p in polys:
            g = g * _mv(tr.null_polarity_to_vector(p))
        back = tr.versor_to_matrix(g)
        assert back.kind == kind
        assert linalg.projective_eq_mat(linalg.mat(back.mat), a)


def test_closure_check_accepts_versors_and_certifies_failures():
    rng = random.Random(59)
    for _ in range(30):
        g = Multivector.scalar(1)
        for _ in range(rng.randint(1, 6)):
            g = g * _mv(_rand_nonnull(rng, -2, 2))
        assert tr.grade1_closure_check(g).ok
    bad = from_map({"1": 1, "e1234": 5})
    check = tr.grade1_closure_check(bad)
    assert not check.ok
    assert check.vector_index is not None and check.residual is not None
    assert not check.residual.is_zero
    # the certificate is reproducible: that basis vector's sandwich image
    # really does contain the reported non-vector part (1-based index)
    basis = [0] * 6
    basis[check.vector_index - 1] = 1
    img = tr.sandwich(bad, _mv(basis))
    leak = img - img.grade_part(1)
    assert leak == check.residual
    with pytest.raises(KleinError) as err:
        tr.versor_to_matrix(bad)
    assert err.value.code == "E_NOT_VERSOR"


def test_null_versor_composition():
    null_v = (1, 0, 0, 0, 0, 0)
    w = (0, 1, 0, 0, 1, 0)
    versor = tr.null_versor_compose([null_v, w])
    assert versor.is_null and versor.parity == "even"
    assert tr.grade1_closure_check(versor.mv).ok
    # a null versor still maps null vectors to null vectors
    rng = random.Random(60)
    for _ in range(20):
        x = _rand_point(rng)
        y = _rand_point(rng)
        try:
            line = line_from_points(x, y)
        except KleinError:
            continue
        img = tr.sandwich(versor.mv, embed(line))
        assert (img * img).is_zero
    with pytest.raises(KleinError):
        tr.null_versor_compose([(0, 1, 0, 0, 1, 0), (1, 0, 0, 1, 0, 0)])
    with pytest.raises(KleinError):
        tr.null_versor_compose([(1, 0, 0, 0, 0, 0), (1, 0, 0, 0, 0, 0)])
    with pytest.raises(KleinError):
        tr.null_versor_compose([])


def test_versor_normalize():
    norm = tr.versor_normalize(from_map(G_PLUS))
    assert norm.sign == 1              # g conj(g) = 128 > 0
    scale = 128 ** 0.5
    for label, value in G_PLUS.items():
        assert abs(norm.coeffs[label] - value / scale) < 1e-12
    norm = tr.versor_normalize(from_map(G_MINUS))
    assert norm.sign == -1
    with pytest.raises(KleinError) as err:
        tr.versor_normalize(tr.null_versor_compose(
            [(1, 0, 0, 0, 0, 0), (0, 1, 0, 0, 1, 0)]).mv)
    assert err.value.code == "E_NULL_VERSOR"


def test_conformal_factor_gate():
    lm = tr.matrix_to_linemap6(tr.ProjMatrix4(K_MATRIX, tr.COLLINEATION))
    assert lm.lam == 4
    assert tr.conformal_factor(lm.mat) == 4
    lopsided = [[1 if i == j else 0 for j in range(6)] for i in range(6)]
    lopsided[0][1] = 1                 # shears the pairing: not conformal
    with pytest.raises(KleinError):
        tr.conformal_factor(linalg.mat(lopsided))


def test_projmatrix_validation():
    with pytest.raises(KleinError):
        tr.ProjMatrix4([[1, 0], [0, 1]], tr.COLLINEATION)
    with pytest.raises(KleinError):
        tr.ProjMatrix4(K_MATRIX, "reflection")
