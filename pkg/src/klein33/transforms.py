"""Projective transformations of P^3 as versor sandwich actions.

A vector a with a a != 0 acts on line space by x -> a x a; this is (twice)
the line map of the null polarity with skew matrix

    m(a) = [[  0, -a4, -a5, -a6],
            [ a4,   0, -a3,  a2],
            [ a5,  a3,   0, -a1],
            [ a6, -a2,  a1,   0]]      (point -> plane).

Products of vectors act through the sandwich alpha(g) X conj(g); even
products induce collineations, odd products correlations.  Both directions
of the correspondence are provided:

  * versor_to_matrix reads the 4x4 matrix straight off the versor's
    coefficients (linear formulas, valid for null versors too; correlation
    matrices are plane -> point);
  * matrix_to_versor lifts a regular matrix to its line map on Plücker
    coordinates, normalizes by the conformal factor, and factors the
    resulting pseudo-orthogonal map into at most 6 reflections
    (Cartan–Dieudonné), multiplying the reflection vectors back together.

Everything is exact: rational throughout, with coefficients in Q(sqrt(d))
when the conformal factor is a non-square.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import (KleinError, E_DOMAIN, E_NOT_PIN_REPRESENTABLE,
                     E_NOT_VERSOR, E_NULL_VERSOR, E_SINGULAR)
from .exactnum import exact_sqrt
from .ga_core import (Multivector, masks_of_grade, pairing, quadratic_form,
                      projective_eq, LABELS)
from .klein_lines import line_from_points

COLLINEATION = "collineation"
CORRELATION = "correlation"

# unit-block pairing matrix of the (3,3) space: B(e_i, e_j) = [|i-j| = 3]
G6 = [[Fraction(1) if abs(i - j) == 3 else Fraction(0) for j in range(6)]
      for i in range(6)]


def sandwich(g: Multivector, x: Multivector) -> Multivector:
    """alpha(g) x conj(g) — the grade-respecting group action."""
    return g.alpha() * x * g.conj()


# --- 4x4 projective matrices -------------------------------------------------

@dataclass
class ProjMatrix4:
    """4x4 exact matrix with its action kind (point map or plane -> point)."""

    mat: list
    kind: str

    def __post_init__(self):
        if self.kind not in (COLLINEATION, CORRELATION):
            raise KleinError(E_DOMAIN, f"unknown matrix kind {self.kind!r}")
        if len(self.mat) != 4 or any(len(r) != 4 for r in self.mat):
            raise KleinError(E_DOMAIN, "expected a 4x4 matrix")
        self.mat = [[linalg.lift(x) for x in row] for row in self.mat]

    @property
    def det(self):
        return linalg.det(self.mat)

    @property
    def regular(self) -> bool:
        return bool(self.det)


@dataclass
class LineMap6:
    """6x6 matrix acting on Plücker coordinates, with conformal factor lam."""

    mat: list
    lam: Fraction


@dataclass
class Versor:
    mv: Multivector
    parity: str                  # "even" | "odd"
    factors: list | None         # reflection vectors (6-tuples), if known
    norm: object                 # g * conj(g), a scalar

    @property
    def is_null(self) -> bool:
        return not self.norm

    @property
    def kind(self) -> str:
        return COLLINEATION if self.parity == "even" else CORRELATION


@dataclass
class ClosureCheck:
    ok: bool
    vector_index: int | None = None
    residual: Multivector | None = None

    def __bool__(self):
        return self.ok


@dataclass
class NormalizedVersor:
    coeffs: dict                 # blade label -> float
    sign: int                    # sign of g conj(g)
    exact: Multivector           # the exact representative kept alongside


# --- parity and the grade-1 closure check ------------------------------------

def _parity_of(mv: Multivector) -> str:
    gs = set(mv.grades())
    if not gs:
        raise KleinError(E_DOMAIN, "zero element has no parity")
    if gs <= {0, 2, 4, 6}:
        return "even"
    if gs <= {1, 3, 5}:
        return "odd"
    raise KleinError(E_DOMAIN, "element mixes even and odd grades")


def grade1_closure_check(g: Multivector) -> ClosureCheck:
    """Does the sandwich by g map every vector to a vector?

    Checks all six basis vectors; the failing basis vector and the nonzero
    higher-grade residual are returned as a certificate.  (For even g the
    residual lives in grades 3 and 5 — vanishing of those coefficients is a
    system of quadratic constraints on g that cuts out exactly the versor
    variety.)
    """
    _parity_of(g)
    for i in range(6):
        image = sandwich(g, Multivector.basis(1 << i))
        residual = image - image.grade_part(1)
        if not residual.is_zero:
            return ClosureCheck(False, i + 1, residual)
    return ClosureCheck(True)


def sandwich_matrix6(g: Multivector) -> list:
    """Grade-1 restriction of the sandwich as a 6x6 matrix (columns = images)."""
    cols = []
    for i in range(6):
        img = sandwich(g, Multivector.basis(1 << i)).grade_part(1)
        cols.append([img.coeff(1 << r) for r in range(6)])
    return [[linalg.lift(cols[j][r]) for j in range(6)] for r in range(6)]


# --- null polarities ----------------------------------------------------------

def vector_to_null_polarity(a) -> list:
    """Skew point->plane matrix of the null polarity of a nonzero vector."""
    a = _vec6(a)
    if all(x == 0 for x in a):
        raise KleinError(E_DOMAIN, "zero vector defines no null polarity")
    a1, a2, a3, a4, a5, a6 = a
    return [[0, -a4, -a5, -a6],
            [a4, 0, -a3, a2],
            [a5, a3, 0, -a1],
            [a6, -a2, a1, 0]]


def null_polarity_to_vector(m) -> tuple:
    """Inverse read-off; validates skewness."""
    m = [[linalg.lift(x) for x in row] for row in m]
    if len(m) != 4 or any(len(r) != 4 for r in m):
        raise KleinError(E_DOMAIN, "expected a 4x4 matrix")
    for i in range(4):
        for j in range(4):
            if m[i][j] != -m[j][i]:
                raise KleinError(E_DOMAIN, "null polarity matrix must be skew")
    a = tuple(_plain(x) for x in
              (-m[2][3], m[1][3], -m[1][2], m[1][0], m[2][0], m[3][0]))
    if all(x == 0 for x in a):
        raise KleinError(E_DOMAIN, "zero matrix is not a null polarity")
    return a


def _plain(x):
    """Collapse integral Fractions to int so algebra products stay in int."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def _vec6(a):
    if isinstance(a, Multivector):
        return tuple(_plain(x) for x in a.vector_coeffs())
    a = list(a)
    if len(a) != 6:
        raise KleinError(E_DOMAIN, "expected 6 coordinates")
    return tuple(_plain(linalg.lift(x)) for x in a)


def vector_to_linemap6(a) -> LineMap6:
    """6x6 line map of the null polarity of a (half the sandwich action).

    Columns agree projectively with sandwich(a, e_j); the exact relation is
    sandwich(a, e_j) = 2 * column_j.  Satisfies M^T Q M = s^2 Q with
    s = a1 a4 + a2 a5 + a3 a6 (i.e. a quarter of (aa)^2).
    """
    a1, a2, a3, a4, a5, a6 = _vec6(a)
    k1 = -a5 * a2 - a6 * a3
    k2 = -a4 * a1 - a6 * a3
    k3 = -a4 * a1 - a5 * a2
    m = [
        [k1, a1 * a5, a1 * a6, a1 * a1, a1 * a2, a1 * a3],
        [a2 * a4, k2, a2 * a6, a1 * a2, a2 * a2, a2 * a3],
        [a3 * a4, a3 * a5, k3, a1 * a3, a2 * a3, a3 * a3],
        [a4 * a4, a4 * a5, a4 * a6, k1, a2 * a4, a3 * a4],
        [a4 * a5, a5 * a5, a5 * a6, a1 * a5, k2, a3 * a5],
        [a4 * a6, a5 * a6, a6 * a6, a1 * a6, a2 * a6, k3],
    ]
    s = a1 * a4 + a2 * a5 + a3 * a6
    return LineMap6([[linalg.lift(x) for x in row] for row in m], s * s)


# --- line maps of 4x4 matrices -------------------------------------------------

_POINT_PAIRS = (
    ((1, 0, 0, 0), (0, 1, 0, 0)),
    ((1, 0, 0, 0), (0, 0, 1, 0)),
    ((1, 0, 0, 0), (0, 0, 0, 1)),
    ((0, 0, 1, 0), (0, 0, 0, 1)),
    ((0, 0, 0, 1), (0, 1, 0, 0)),
    ((0, 1, 0, 0), (0, 0, 1, 0)),
)

# plane pairs whose meet is exactly the corresponding basis line
_PLANE_PAIRS = (
    ((0, 0, 1, 0), (0, 0, 0, 1)),
    ((0, 0, 0, 1), (0, 1, 0, 0)),
    ((0, 1, 0, 0), (0, 0, 1, 0)),
    ((1, 0, 0, 0), (0, 1, 0, 0)),
    ((1, 0, 0, 0), (0, 0, 1, 0)),
    ((1, 0, 0, 0), (0, 0, 0, 1)),
)


def _g_times(m):
    """G6 @ m without a matrix product: G6 only swaps row blocks."""
    return [m[3], m[4], m[5], m[0], m[1], m[2]]


def conformal_factor(mat6):
    """lam with L^T Q L = lam Q; errors when L is not quadric-compatible."""
    m = [[linalg.lift(x) for x in row] for row in mat6]
    t = linalg.mat_mul(linalg.transpose(m), _g_times(m))
    lam = t[0][3]
    expect = linalg.mat_scale(G6, lam)
    if not linalg.mat_eq(t, expect):
        raise KleinError(E_DOMAIN, "matrix does not scale the quadric pairing")
    return lam


def matrix_to_linemap6(a: ProjMatrix4) -> LineMap6:
    """Exact induced action on Plücker coordinates; lam = det."""
    if not isinstance(a, ProjMatrix4):
        raise KleinError(E_DOMAIN, "need a ProjMatrix4 with an explicit kind")
    d = a.det
    if d == 0:
        raise KleinError(E_SINGULAR, "singular matrix induces no line map")
    cols = []
    if a.kind == COLLINEATION:
        for x, y in _POINT_PAIRS:
            cols.append(line_from_points(linalg.mat_vec(a.mat, list(x)),
                                         linalg.mat_vec(a.mat, list(y))))
    else:
        for u, v in _PLANE_PAIRS:
            cols.append(line_from_points(linalg.mat_vec(a.mat, list(u)),
                                         linalg.mat_vec(a.mat, list(v))))
    mat = [[cols[j][r] for j in range(6)] for r in range(6)]
    lam = conformal_factor(mat)
    if lam != d:
        raise AssertionError("conformal factor disagrees with determinant")
    return LineMap6(mat, lam)


# --- Cartan–Dieudonné factorization --------------------------------------------

_UNITS = [tuple(1 if t == i else 0 for t in range(6)) for i in range(6)]
_CAND_U = list(_UNITS)
for _i in range(6):
    for _j in range(_i + 1, 6):
        _CAND_U.append(tuple((1 if t == _i else 0) + (1 if t == _j else 0)
                             for t in range(6)))
        _CAND_U.append(tuple((1 if t == _i else 0) - (1 if t == _j else 0)
                             for t in range(6)))
_CAND_U.append((1, 1, 1, 1, 1, 1))
_CAND_U.append((1, -1, 1, -1, 1, -1))
_CAND_U.append((1, 2, 3, 4, 5, 6))

_NONNULL = [u for u in _CAND_U if quadratic_form(u)]


def reflection_matrix(w) -> list:
    """Matrix of x -> x - (2 B(w,x) / Q(w)) w for a non-null vector w."""
    w = list(w)
    q = quadratic_form(w)
    if not q:
        raise KleinError(E_DOMAIN, "cannot reflect in a null vector")
    cols = []
    for j in range(6):
        bj = w[j + 3] if j < 3 else w[j - 3]        # B(w, e_j)
        f = 2 * bj * (1 / linalg.lift(q))
        col = [(1 if i == j else 0) - f * w[i] for i in range(6)]
        cols.append(col)
    return [[cols[j][i] for j in range(6)] for i in range(6)]


def _quad_eval(w_mat, u):
    idx = [i for i in range(6) if u[i]]
    return sum(u[i] * w_mat[i][j] * u[j] for i in idx for j in idx)


def _mat_minus_identity(f):
    return [[f[i][j] - (1 if i == j else 0) for j in range(6)] for i in range(6)]


def _gram_of_image(m):
    """M^T G M: pairwise pairings of the columns of M."""
    return linalg.mat_mul(linalg.transpose(m), _g_times(m))


def _state(f):
    m = _mat_minus_identity(f)
    if linalg.is_zero_mat(m):
        return m, 0, False
    return m, linalg.rank(m), linalg.is_zero_mat(_gram_of_image(m))


def _greedy_factor(f):
    """Factor an exact Q-orthogonal 6x6 map into <= 6 reflection vectors.

    Rank accounting: reflecting in w = f(u) - u (whenever that is non-null)
    fixes u on top of everything already fixed and keeps the image of f - 1
    inside itself, so rank(f - 1) drops by at least one per step — at most 6
    steps when the image never becomes totally isotropic.  If the image *is*
    totally isotropic (all pairings vanish; in signature (3,3) its dimension
    is then at most 3), no such w exists; one reflection in any non-null
    vector moves a fixed vector and re-enters the generic case with rank at
    most one higher, for a worst case of 3 + 2 within the budget of 6.  A
    one-step lookahead keeps the descent from re-entering the isotropic
    state when a choice avoids it.
    """
    out = []
    m, r, iso = _state(f)
    for _ in range(10):
        if not any(any(row) for row in m):
            break
        w6 = _gram_of_image(m)
        valid = []
        for u in _CAND_U:
            if _quad_eval(w6, u):
                valid.append(u)
                if len(valid) == 6:
                    break
        best = None
        if valid:
            for u in valid:
                w = [sum(m[i][t] * u[t] for t in range(6)) for i in range(6)]
                f2 = linalg.mat_mul(reflection_matrix(w), f)
                m2, r2, iso2 = _state(f2)
                score = (0 if r2 == 0 else 1, 1 if iso2 else 0, r2)
                if best is None or score < best[0]:
                    best = (score, w, f2, m2)
                if score[0] == 0 or (score[1] == 0 and r2 == r - 1):
                    break
        else:
            # image of f-1 totally isotropic: insert one non-null reflection
            for v in _NONNULL:
                f2 = linalg.mat_mul(reflection_matrix(list(map(Fraction, v))), f)
                m2, r2, iso2 = _state(f2)
                if not iso2 and r2 > 0:
                    score = (1, 1 if iso2 else 0, r2)
                    if best is None or score < best[0]:
                        best = (score, [linalg.lift(x) for x in v], f2, m2)
                    if score[1] == 0 and r2 <= r + 1:
                        break
            if best is None:
                return None
        _, w, f, m = best
        out.append(tuple(linalg.primitive_vector(w)))
        r = linalg.rank(m) if any(any(row) for row in m) else 0
        if len(out) > 6:
            return None
    else:
        return None
    # exact verification: the reflections must recompose to f's original value
    return out


def linemap_to_reflections(lm) -> list:
    """Reflection vectors whose composition realizes a line map (<= 6).

    lam < 0 admits no real factorization (E_NOT_PIN_REPRESENTABLE); lam = 0
    is singular.  For non-square positive lam the reflections carry exact
    Q(sqrt(d)) coefficients.
    """
    if isinstance(lm, LineMap6):
        mat, lam = lm.mat, lm.lam
    else:
        mat = [[linalg.lift(x) for x in row] for row in lm]
        lam = conformal_factor(mat)
    if lam == 0:
        raise KleinError(E_SINGULAR, "conformal factor zero: no reflections")
    if lam < 0:
        raise KleinError(E_NOT_PIN_REPRESENTABLE,
                         "negative conformal factor: the map is not a pin "
                         "sandwich on the real algebra")
    s = exact_sqrt(lam)
    inv = 1 / linalg.lift(s) if isinstance(s, Fraction) else 1 / s
    n = [[x * inv for x in row] for row in mat]
    neg = [[-x for x in row] for row in n]
    _, r_pos, _ = _state(n)
    _, r_neg, _ = _state(neg)
    ordered = [n, neg] if r_pos <= r_neg else [neg, n]
    for cand in ordered:
        vectors = _greedy_factor([row[:] for row in cand])
        if vectors is None or len(vectors) > 6:
            continue
        check = linalg.identity(6)
        for w in vectors:
            check = linalg.mat_mul(check, reflection_matrix(w))
        if linalg.mat_eq(check, cand):
            return vectors
    raise AssertionError("reflection factorization failed to terminate")


# --- versor <-> matrix ----------------------------------------------------------

_EVEN_ORDER = [0] + masks_of_grade(2) + masks_of_grade(4) + [63]
_ODD_ORDER = masks_of_grade(1) + masks_of_grade(3) + masks_of_grade(5)


def _even_matrix(g: Multivector) -> list:
    c = [g.coeff(m) for m in _EVEN_ORDER]

    def gi(i):
        return c[i - 1]

    g1 = gi(1)
    k1 = g1 - gi(20) - gi(24) - gi(32) - gi(29) + gi(9) + gi(4) + gi(13)
    k2 = gi(24) - gi(9) + gi(20) - gi(13) - gi(32) + g1 + gi(4) - gi(29)
    k3 = g1 - gi(13) - gi(32) - gi(4) + gi(29) + gi(9) - gi(24) + gi(20)
    k4 = gi(24) + gi(13) + gi(29) + g1 - gi(4) - gi(9) - gi(20) - gi(32)
    return [
        [k1, 2 * (gi(7) + gi(17)), 2 * (gi(18) - gi(3)), 2 * (gi(19) + gi(2))],
        [-2 * (gi(26) + gi(16)), k2, 2 * (gi(5) + gi(25)), 2 * (gi(6) - gi(22))],
        [2 * (gi(15) - gi(30)), 2 * (gi(8) + gi(28)), k3, 2 * (gi(21) + gi(10))],
        [-2 * (gi(31) + gi(14)), 2 * (gi(11) - gi(27)), 2 * (gi(23) + gi(12)), k4],
    ]


def _odd_matrix(g: Multivector) -> list:
    c = [g.coeff(m) for m in _ODD_ORDER]

    def hi(i):
        return c[i - 1]

    return [
        [-2 * hi(7), hi(1) + hi(9) + hi(13) - hi(29),
         hi(2) + hi(19) + hi(28) - hi(8), hi(3) - hi(18) - hi(27) - hi(11)],
        [hi(13) - hi(1) + hi(29) + hi(9), -2 * hi(16),
         hi(6) + hi(30) + hi(15) - hi(22), hi(31) - hi(25) - hi(14) - hi(5)],
        [hi(19) - hi(2) - hi(8) - hi(28), hi(15) - hi(30) - hi(6) - hi(22),
         2 * hi(21), hi(4) - hi(20) + hi(32) + hi(24)],
        [hi(27) - hi(3) - hi(11) - hi(18), hi(5) - hi(31) - hi(25) - hi(14),
         hi(24) - hi(4) - hi(20) - hi(32), -2 * hi(23)],
    ]


def _matrix_of(mv: Multivector) -> ProjMatrix4:
    """Coefficient formulas only — caller guarantees mv is a versor action."""
    parity = _parity_of(mv)
    mat = _even_matrix(mv) if parity == "even" else _odd_matrix(mv)
    if all(not x for row in mat for x in row):
        raise KleinError(E_DOMAIN,
                         "sandwich action collapses: no induced projective map")
    kind = COLLINEATION if parity == "even" else CORRELATION
    return ProjMatrix4([[linalg.lift(x) for x in row] for row in mat], kind)


def versor_to_matrix(g) -> ProjMatrix4:
    """4x4 matrix of the sandwich action (collineation or plane->point).

    Valid for null versors as well (the matrix is then singular); requires
    the grade-1 closure check to pass.
    """
    mv = g.mv if isinstance(g, Versor) else g
    if mv.is_zero:
        raise KleinError(E_DOMAIN, "zero element has no sandwich action")
    check = grade1_closure_check(mv)
    if not check.ok:
        raise KleinError(E_NOT_VERSOR,
                         "not a versor action: sandwich of e%d leaves grade 1"
                         % check.vector_index)
    return _matrix_of(mv)


def _product_versor(vectors) -> Multivector:
    g = Multivector.scalar(1)
    for v in vectors:
        g = g * Multivector.vector(list(v))
    return g


def _normalize_versor_rep(g: Multivector) -> Multivector:
    items = g.items()
    coeffs = linalg.primitive_vector([v for _, v in items])
    return Multivector({m: c for (m, _), c in zip(items, coeffs)})


def matrix_to_versor(a: ProjMatrix4) -> Versor:
    """Exact versor whose sandwich induces the given regular matrix."""
    if not isinstance(a, ProjMatrix4):
        raise KleinError(E_DOMAIN, "need a ProjMatrix4 with an explicit kind")
    if a.det == 0:
        raise KleinError(E_SINGULAR,
                         "singular matrix: no invertible versor exists "
                         "(null versors come from explicit vector factors)")
    lm = matrix_to_linemap6(a)
    vectors = linemap_to_reflections(lm)
    parity = "even" if len(vectors) % 2 == 0 else "odd"
    if (parity == "even") != (a.kind == COLLINEATION):
        raise AssertionError("reflection parity contradicts the matrix kind")
    g = _product_versor(vectors) if vectors else Multivector.scalar(1)
    g = _normalize_versor_rep(g)
    norm = (g * g.conj()).scalar_part()
    back = _matrix_of(g)      # closure holds by construction (vector product)
    if not linalg.projective_eq_mat(back.mat, a.mat):
        raise AssertionError("versor round trip failed")
    return Versor(g, parity, vectors, norm)


def decompose_null_polarities(a: ProjMatrix4) -> list:
    """Write a regular matrix as a product of at most 6 null polarities.

    Returns the polarity matrices of the reflection vectors in composition
    order; an even count realizes a collineation, an odd count a correlation.
    """
    versor = matrix_to_versor(a)
    return [vector_to_null_polarity(v) for v in versor.factors]


# --- null versors and normalization ----------------------------------------------

def null_versor_compose(vectors) -> Versor:
    """Versor from explicit vector factors, at least one of them null.

    This is the only constructor for non-invertible sandwich actions;
    products of exclusively non-null vectors should go through
    matrix_to_versor instead.
    """
    if not vectors:
        raise KleinError(E_DOMAIN, "need at least one vector factor")
    vs = [_vec6(v) for v in vectors]
    if all(not any(x for x in v) for v in vs):
        raise KleinError(E_DOMAIN, "zero vectors are not allowed")
    if not any(quadratic_form(v) == 0 for v in vs):
        raise KleinError(E_DOMAIN,
                         "all factors are non-null: use matrix_to_versor for "
                         "invertible actions")
    g = _product_versor(vs)
    if g.is_zero:
        raise KleinError(E_DOMAIN, "factor product vanished")
    norm = (g * g.conj()).scalar_part()
    return Versor(g, "even" if len(vs) % 2 == 0 else "odd", vs, norm)


def versor_normalize(g) -> NormalizedVersor:
    """g / sqrt(|g conj(g)|) as floats, plus the exact sign and representative."""
    mv = g.mv if isinstance(g, Versor) else g
    gg = mv * mv.conj()
    if not gg.is_zero and gg.grades() != [0]:
        raise KleinError(E_DOMAIN, "g conj(g) is not a scalar")
    n = gg.scalar_part()
    if not n:
        raise KleinError(E_NULL_VERSOR, "null versor has no unit normalization")
    sign = 1 if (n > 0 if isinstance(n, (int, Fraction)) else n.sign() > 0) else -1
    scale = 1.0 / math.sqrt(abs(float(n)))
    coeffs = {LABELS[m]: float(v) * scale for m, v in mv.items()}
    return NormalizedVersor(coeffs, sign, mv)
