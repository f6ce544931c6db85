"""Incidence structures carried by blades: pencils, bundles, fields, reguli,
linear congruences and linear complexes.

A k-blade B has two null spaces:

    outer  NO(B) = { v : v ^ B = 0 }       (dimension k)
    inner  NI(B) = { v : v . B = 0 }       (dimension 6 - k, = NO(B * J))

Null vectors of NO(B) are the lines the blade "contains"; classification of
the resulting line manifold only needs exact rank computations and the sign
behaviour of the quadric pairing restricted to NO(B).

Meets are computed in the Grassmann (exterior) algebra of P^3 itself: a line
transfers to the 2-vector

    p01 f12 + p02 f13 + p03 f14 + p23 f34 - p31 f24 + p12 f23

over generators f1..f4 (note the sign on f24), and a point X lies on the
line exactly when (transfer ^ X) = 0.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from . import klein_lines, linalg
from .errors import (KleinError, E_DOMAIN, E_EMPTY_CONIC, E_NO_INTERSECTION)
from .ga_core import Multivector, pairing, projective_eq, quadratic_form
from .klein_lines import extract, line_from_points, omega, swap_triples

IDEAL_PLANE = (1, 0, 0, 0)  # x0 = 0


# --- Grassmann algebra of P^3 (exterior only, 4 generators) -----------------

def _g_indices(mask):
    return tuple(i for i in range(4) if mask >> i & 1)


def _g_sign(a, b):
    inv = 0
    for i in _g_indices(a):
        inv += sum(1 for j in _g_indices(b) if j < i)
    return -1 if inv % 2 else 1


def g_wedge(a: dict, b: dict) -> dict:
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            if ma & mb:
                continue
            m = ma | mb
            out[m] = out.get(m, 0) + ca * cb * _g_sign(ma, mb)
    return {m: c for m, c in out.items() if c}


def transfer_line(c) -> dict:
    """Image of a Plücker 6-tuple in the exterior algebra of P^3."""
    p01, p02, p03, p23, p31, p12 = (Fraction(x) for x in c)
    return {m: v for m, v in {
        0b0011: p01, 0b0101: p02, 0b1001: p03,
        0b1100: p23, 0b1010: -p31, 0b0110: p12,
    }.items() if v}


def g_point(x) -> dict:
    return {1 << i: Fraction(v) for i, v in enumerate(x) if v}


_G3_MASKS = (0b0111, 0b1011, 0b1101, 0b1110)


def _incidence_rows(line6):
    """4 rows of the linear system 'X lies on the line' in X's coordinates."""
    t = transfer_line(line6)
    cols = []
    for i in range(4):
        w = g_wedge(t, {1 << i: Fraction(1)})
        cols.append([w.get(m, Fraction(0)) for m in _G3_MASKS])
    return [[cols[j][r] for j in range(4)] for r in range(len(_G3_MASKS))]


def common_point(lines) -> tuple:
    """The unique common point of a family of lines (exact nullspace)."""
    rows = []
    for c in lines:
        rows.extend(_incidence_rows(c))
    ns = linalg.nullspace(rows)
    if len(ns) != 1:
        raise KleinError(E_DOMAIN, "lines do not have a unique common point")
    return tuple(linalg.primitive_vector(ns[0]))


def meet_lines_p3(c1, c2) -> tuple:
    """Common point of two distinct coplanar lines of P^3."""
    if all(Fraction(x) == 0 for x in c1) or all(Fraction(x) == 0 for x in c2):
        raise KleinError(E_DOMAIN, "zero tuple is not a line")
    if klein_lines.plucker_form(c1) != 0 or klein_lines.plucker_form(c2) != 0:
        raise KleinError(E_DOMAIN, "inputs must satisfy the line condition")
    if linalg.projective_eq_vec(list(c1), list(c2)):
        raise KleinError(E_DOMAIN, "identical lines meet everywhere")
    if omega(c1, c2) != 0:
        raise KleinError(E_NO_INTERSECTION, "skew lines have no common point")
    return common_point([c1, c2])


# --- outer / inner null spaces ----------------------------------------------

def _pure_grade(b: Multivector, lo=1, hi=5) -> int:
    gs = b.grades()
    if len(gs) != 1 or not lo <= gs[0] <= hi:
        raise KleinError(E_DOMAIN,
                         f"expected a pure blade of grade {lo}..{hi}, got grades {gs}")
    return gs[0]


def _solve_vector_maps(images) -> list:
    """Nullspace of v -> sum x_i * images[i] over the 64 blade coordinates."""
    masks = sorted({m for img in images for m, _ in img.items()})
    rows = [[img.coeff(m) for img in images] for m in masks]
    return [tuple(linalg.primitive_vector(v)) for v in linalg.nullspace(rows)]


def opns_basis(b: Multivector) -> list:
    """Basis of NO(b) = { v : v ^ b = 0 }, as Plücker 6-tuples."""
    if b.is_zero:
        raise KleinError(E_DOMAIN, "zero element has no outer null space")
    _pure_grade(b)
    basis = [Multivector.basis(1 << i) for i in range(6)]
    return _solve_vector_maps([v ^ b for v in basis])


def ipns_basis(b: Multivector) -> list:
    """Basis of NI(b) = { v : v . b = 0 } (left contraction)."""
    if b.is_zero:
        raise KleinError(E_DOMAIN, "zero element has no inner null space")
    _pure_grade(b)
    basis = [Multivector.basis(1 << i) for i in range(6)]
    return _solve_vector_maps([v.lc(b) for v in basis])


# --- blades -------------------------------------------------------------------

@dataclass
class Blade:
    """A decomposable multivector, optionally remembering a factorization."""

    mv: Multivector
    grade: int
    factors: list | None = None

    @classmethod
    def from_vectors(cls, vectors):
        vs = [tuple(Fraction(x) for x in v) for v in vectors]
        mv = Multivector.vector(vs[0])
        for v in vs[1:]:
            mv = mv ^ Multivector.vector(v)
        if mv.is_zero:
            raise KleinError(E_DOMAIN, "wedge of dependent vectors vanishes")
        return cls(mv, len(vs), vs)

    @classmethod
    def from_multivector(cls, mv: Multivector):
        k = _pure_grade(mv, 1, 6)
        if k <= 5 and len(opns_basis(mv)) != k:
            raise KleinError(E_DOMAIN, "element is not decomposable (not a blade)")
        return cls(mv, k, None)


def as_blade(b) -> Blade:
    return b if isinstance(b, Blade) else Blade.from_multivector(b)


# --- classification ------------------------------------------------------------

PENCIL = "pencil"
BUNDLE = "bundle"
FIELD = "field"
CONIC_REGULUS = "conic_regulus"
DEGENERATE_CONIC = "degenerate_conic"
CONGRUENCE = "congruence"
COMPLEX = "complex"

HYPERBOLIC = "hyperbolic"
PARABOLIC = "parabolic"
ELLIPTIC = "elliptic"

HYPERBOLOID = "hyperboloid_of_one_sheet"
PARABOLOID = "hyperbolic_paraboloid"


@dataclass
class ManifoldClass:
    kind: str
    vertex: tuple | None = None
    plane: tuple | None = None
    congruence_type: str | None = None
    regular: bool | None = None
    complex_coords: tuple | None = None
    real_points: bool | None = None
    surface: str | None = None


def _gram(vectors):
    return [[pairing(u, v) for v in vectors] for u in vectors]


def _totally_null(vectors) -> bool:
    return all(not x for row in _gram(vectors) for x in row)


def _disc_type(gram2) -> str:
    (a, b), (_, c) = gram2
    disc = b * b - a * c
    if disc > 0:
        return HYPERBOLIC
    if disc == 0:
        return PARABOLIC
    return ELLIPTIC


def _ideal_member_dim(basis) -> int:
    # dimension of span(basis) ∩ {first Plücker triple = 0}
    rows = [[v[i] for v in basis] for i in range(3)]
    return len(basis) - linalg.rank(rows)


def classify_blade(b) -> ManifoldClass:
    """Classify the line manifold carried by a blade of grade 2..5."""
    blade = as_blade(b)
    k = blade.grade
    if not 2 <= k <= 5:
        raise KleinError(E_DOMAIN, f"classification needs grade 2..5, got {k}")
    basis = opns_basis(blade.mv)

    if k == 2:
        if _totally_null(basis):
            return ManifoldClass(PENCIL)
        # non-null 2-space = polar (dual) line of a linear congruence
        return ManifoldClass(CONGRUENCE, congruence_type=_disc_type(_gram(basis)))

    if k == 3:
        if _totally_null(basis):
            d = _ideal_member_dim(basis)
            if d in (1, 3):
                return ManifoldClass(FIELD, plane=field_plane(blade))
            return ManifoldClass(BUNDLE, vertex=bundle_vertex(blade))
        gram = _gram(basis)
        pos, neg, zero = linalg.symmetric_signature(gram)
        if zero:
            return ManifoldClass(DEGENERATE_CONIC)
        real = not (pos == 3 or neg == 3)
        surface = None
        if real:
            surface = PARABOLOID if _ideal_member_dim(basis) > 0 else HYPERBOLOID
        return ManifoldClass(CONIC_REGULUS, real_points=real, surface=surface)

    if k == 4:
        dual_basis = opns_basis(blade.mv.dual())
        return ManifoldClass(CONGRUENCE,
                             congruence_type=_disc_type(_gram(dual_basis)))

    w = blade.mv.dual()
    coords = tuple(linalg.primitive_vector(list(extract(w))))
    return ManifoldClass(COMPLEX, regular=quadratic_form(coords) != 0,
                         complex_coords=coords)


def bundle_vertex(b) -> tuple:
    """Common point of all lines of a bundle blade."""
    blade = as_blade(b)
    if blade.grade != 3:
        raise KleinError(E_DOMAIN, "bundle vertex needs a 3-blade")
    basis = opns_basis(blade.mv)
    if not _totally_null(basis) or _ideal_member_dim(basis) in (1, 3):
        raise KleinError(E_DOMAIN, "blade is not a bundle")
    return common_point(basis)


def field_plane(b) -> tuple:
    """Common plane of all lines of a field blade.

    Exchanging the two Plücker triples is the coordinate form of a duality
    of P^3, turning fields into bundles; the field's plane is the vertex of
    the swapped line family.
    """
    blade = as_blade(b)
    if blade.grade != 3:
        raise KleinError(E_DOMAIN, "field plane needs a 3-blade")
    basis = opns_basis(blade.mv)
    if not _totally_null(basis) or _ideal_member_dim(basis) in (0, 2):
        raise KleinError(E_DOMAIN, "blade is not a field")
    return common_point([swap_triples(v) for v in basis])


# --- three-line constructions -------------------------------------------------

def bundle_blade(point) -> Blade:
    """3-blade of the bundle of lines through a point.

    For y0 != 0 the three coordinate lines through the point are used; for
    ideal points the construction falls back to joins with basis points.
    """
    y0, y1, y2, y3 = (Fraction(x) for x in point)
    if all(v == 0 for v in (y0, y1, y2, y3)):
        raise KleinError(E_DOMAIN, "point must be nonzero")
    if y0:
        ls = [(y0, 0, 0, 0, y3, -y2),
              (0, y0, 0, -y3, 0, y1),
              (0, 0, y0, y2, -y1, 0)]
        return Blade.from_vectors(ls)
    units = [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    pt = (y0, y1, y2, y3)
    for combo in itertools.combinations(units, 3):
        try:
            ls = [line_from_points(pt, u) for u in combo]
            return Blade.from_vectors(ls)
        except KleinError:
            continue
    raise KleinError(E_DOMAIN, "no independent line triple through the point")


def field_blade(plane) -> Blade:
    """3-blade of the field of lines inside a plane (dual construction)."""
    u0, u1, u2, u3 = (Fraction(x) for x in plane)
    if all(v == 0 for v in (u0, u1, u2, u3)):
        raise KleinError(E_DOMAIN, "plane must be nonzero")
    if u0:
        ls = [(0, u3, -u2, u0, 0, 0),
              (-u3, 0, u1, 0, u0, 0),
              (u2, -u1, 0, 0, 0, u0)]
        return Blade.from_vectors(ls)
    points = linalg.nullspace([[u0, u1, u2, u3]])
    ls = [line_from_points(points[0], points[1]),
          line_from_points(points[0], points[2]),
          line_from_points(points[1], points[2])]
    return Blade.from_vectors(ls)


# --- reguli ---------------------------------------------------------------------

def _regulus_factors(b, factors=None):
    blade = as_blade(b)
    if blade.grade != 3:
        raise KleinError(E_DOMAIN, "a regulus carrier is a 3-blade")
    if factors is None:
        factors = blade.factors
    if factors is None:
        factors = opns_basis(blade.mv)
    else:
        factors = [tuple(Fraction(x) for x in f) for f in factors]
        wedge = Blade.from_vectors(factors).mv
        if not projective_eq(wedge, blade.mv):
            raise KleinError(E_DOMAIN, "factors do not span the given blade")
    return blade, factors


def regulus_form(b, factors=None):
    """Gram matrix S of a fixed factorization: (x S x^T) = 0 cuts the conic."""
    _, fs = _regulus_factors(b, factors)
    return [[pairing(u, v) for v in fs] for u in fs]


def _conic_eval(s, x):
    return sum(x[i] * s[i][j] * x[j] for i in range(3) for j in range(3))


def _conic_pair(s, x, y):
    return sum(x[i] * s[i][j] * y[j] for i in range(3) for j in range(3))


def _param_candidates():
    # deterministic enumeration of projective parameter triples
    yield (1, 0, 0)
    yield (0, 1, 0)
    yield (0, 0, 1)
    for bound in range(1, 13):
        for a in range(-bound, bound + 1):
            for b in range(-bound, bound + 1):
                for c in range(-bound, bound + 1):
                    if max(abs(a), abs(b), abs(c)) != bound:
                        continue
                    g = math.gcd(math.gcd(abs(a), abs(b)), abs(c))
                    if g != 1:
                        continue
                    yield (a, b, c)


def _t_sequence(limit):
    # 0, 1, -1, 2, -2, 1/2, -1/2, 3, -3, 1/3, 2/3, ...
    yield Fraction(0)
    for q in range(1, limit):
        for p in range(1, limit):
            for num, den in ((p, q), (-p, q)):
                f = Fraction(num, den)
                if f.numerator == num and f.denominator == den:
                    yield f


def regulus_sample(b, n, seed=0, allow_float=True):
    """Sample n distinct lines of the regulus of a nondegenerate 3-blade.

    Returns (lines, exact): exact sampling through a rational conic point
    when one is found by bounded search; otherwise a floating-point
    parametrization (flagged exact=False) unless allow_float is False.
    """
    if n < 1:
        raise KleinError(E_DOMAIN, "need n >= 1 samples")
    blade, fs = _regulus_factors(b)
    s = regulus_form(blade, fs)
    pos, neg, zero = linalg.symmetric_signature(s)
    if zero:
        raise KleinError(E_DOMAIN, "degenerate conic: regulus sampling undefined")
    if pos == 3 or neg == 3:
        raise KleinError(E_EMPTY_CONIC, "regulus has no real lines")

    def to_line(param):
        line = tuple(sum(Fraction(param[i]) * fs[i][j] for i in range(3))
                     for j in range(6))
        return tuple(linalg.primitive_vector(line))

    p0 = None
    for cand in _param_candidates():
        if _conic_eval(s, cand) == 0:
            p0 = tuple(Fraction(x) for x in cand)
            break

    if p0 is not None:
        units = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
        comp = []
        for u in units:
            if linalg.rank([list(p0)] + [list(c) for c in comp] + [list(u)]) \
                    == 2 + len(comp):
                comp.append(u)
            if len(comp) == 2:
                break
        w1, w2 = comp
        directions = [w1, w2]
        ts = [t for t in _t_sequence(40)]
        if seed:
            random.Random(seed).shuffle(ts)
        for t in ts:
            if t == 0:
                continue
            directions.append(tuple(a + t * b for a, b in zip(w1, w2)))
        seen = set()
        out = []
        params = [p0]
        for u in directions:
            qu = _conic_eval(s, u)
            bu = _conic_pair(s, p0, u)
            # second intersection of the chord through p0 with direction u
            pt = tuple(qu * p for p in p0)
            pt = tuple(a - 2 * bu * c for a, c in zip(pt, u))
            if any(pt):
                params.append(pt)
        for param in params:
            line = to_line(param)
            if line in seen:
                continue
            seen.add(line)
            assert klein_lines.plucker_form(line) == 0
            out.append(line)
            if len(out) == n:
                return out, True
        raise KleinError(E_DOMAIN, "parameter enumeration exhausted")

    if not allow_float:
        raise KleinError(E_DOMAIN,
                         "no rational point found within the search bound")

    # floating fallback: run the same chord construction from a float point
    up = next(c for c in _param_candidates() if _conic_eval(s, c) > 0)
    un = next(c for c in _param_candidates() if _conic_eval(s, c) < 0)
    qv, bb, qu = (float(_conic_eval(s, un)), float(_conic_pair(s, up, un)),
                  float(_conic_eval(s, up)))
    root = (-2 * bb + math.sqrt(4 * bb * bb - 4 * qv * qu)) / (2 * qv)
    pf = tuple(float(a) + root * float(c) for a, c in zip(up, un))
    sf = [[float(x) for x in row] for row in s]

    def fdot(x, y):
        return sum(x[i] * sf[i][j] * y[j] for i in range(3) for j in range(3))

    out, seen = [], set()
    units = [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)]
    dirs = []
    ts = [float(t) for t in _t_sequence(40)]
    if seed:
        random.Random(seed).shuffle(ts)
    for t in ts:
        dirs.append(tuple(a + t * b for a, b in zip(units[0], units[1])))
        dirs.append(tuple(a + t * b for a, b in zip(units[1], units[2])))
    for u in dirs:
        qu, bu = fdot(u, u), fdot(pf, u)
        pt = tuple(qu * p - 2 * bu * c for p, c in zip(pf, u))
        norm = max(abs(x) for x in pt)
        if norm < 1e-9:
            continue
        pt = tuple(x / norm for x in pt)
        line = tuple(sum(pt[i] * float(fs[i][j]) for i in range(3))
                     for j in range(6))
        mag = max(abs(x) for x in line)
        if mag < 1e-9:
            continue
        line = tuple(x / mag for x in line)
        if line[0] < 0 or (line[0] == 0 and next((x for x in line if x), 1) < 0):
            line = tuple(-x for x in line)
        key = tuple(round(x, 9) for x in line)
        if key in seen:
            continue
        residual = line[0] * line[3] + line[1] * line[4] + line[2] * line[5]
        assert abs(residual) < 1e-12
        seen.add(key)
        out.append(line)
        if len(out) == n:
            return out, False
    raise KleinError(E_DOMAIN, "float sampling failed to find enough lines")


@dataclass
class RegulusDual:
    blade: Blade
    surface: str | None


def opposite_regulus(b) -> RegulusDual:
    """Dual blade carrying the opposite regulus, plus the surface subtype."""
    blade = as_blade(b)
    cls = classify_blade(blade)
    if cls.kind != CONIC_REGULUS:
        raise KleinError(E_DOMAIN, f"not a conic regulus (got {cls.kind})")
    dual_blade = Blade.from_multivector(blade.mv.dual())
    return RegulusDual(dual_blade, cls.surface)
