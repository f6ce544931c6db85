"""Acceptance gate: eleven go/no-go checks over the whole kernel.

Every check is exact (integer/rational identities); a handful also carry a
wall-clock budget.  Each criterion emits exactly one PASS/FAIL line through
``run_all``; the pytest suite and the ``selftest`` CLI subcommand both call
into this module so there is a single source of truth for what "done" means.

The golden fixtures (the 4x4 matrix K together with the two even and two odd
integer-scaled solutions) are locked here coefficient by coefficient; the
factorization tests must land exactly on one of these rays.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from . import incidence, linalg
from .errors import KleinError, E_NOT_PIN_REPRESENTABLE
from .ga_core import (Multivector, from_map, masks_of_grade, projective_eq,
                      quadratic_form)
from .klein_lines import line_from_points
from .transforms import (COLLINEATION, CORRELATION, ProjMatrix4,
                         conformal_factor, decompose_null_polarities,
                         grade1_closure_check, matrix_to_linemap6,
                         matrix_to_versor, null_polarity_to_vector,
                         vector_to_null_polarity, sandwich, versor_to_matrix,
                         _odd_matrix)

# --- golden fixtures -----------------------------------------------------------

K_MATRIX = [[1, 0, 3, 0],
            [1, 1, 0, 1],
            [1, 2, 1, 0],
            [1, 1, 2, 1]]

G_PLUS = {
    "1": 7, "e12": 6, "e13": -6, "e14": 1, "e15": -2, "e23": -6, "e24": 6,
    "e25": -1, "e26": -2, "e34": 2, "e35": 6, "e36": -5, "e45": -4,
    "e46": 2, "e56": -4, "e1234": 6, "e1235": 6, "e1236": -6, "e1245": -5,
    "e1246": 2, "e1256": -4, "e1345": 2, "e1346": -1, "e1356": 2,
    "e2345": -2, "e2346": 2, "e2356": 1, "e2456": -2, "e123456": -1}

G_MINUS = {
    "1": 1, "e12": -6, "e13": -6, "e14": -1, "e15": 2, "e16": 4, "e23": 6,
    "e24": 2, "e25": 1, "e26": 2, "e34": 2, "e35": 2, "e36": 5, "e46": 2,
    "e1234": -6, "e1235": 6, "e1236": 6, "e1245": 5, "e1246": -2,
    "e1345": 6, "e1346": 1, "e1356": -2, "e1456": -4, "e2345": -2,
    "e2346": 6, "e2356": -1, "e2456": -2, "e3456": -4, "e123456": -7}

H_PLUS = {
    "e1": 1, "e2": 1, "e3": 1, "e4": 2, "e6": -4, "e123": -2, "e124": -3,
    "e125": 1, "e126": 4, "e134": -1, "e136": 1, "e145": -2, "e146": -2,
    "e156": -2, "e234": -2, "e235": -1, "e236": 5, "e245": -4, "e246": 2,
    "e256": -6, "e345": -2, "e356": -2, "e456": 4, "e12345": 3,
    "e12346": 3, "e12356": 3, "e23456": -6}

H_MINUS = {
    "e1": -3, "e2": 3, "e3": -3, "e4": -6, "e123": -2, "e124": -5,
    "e125": 1, "e126": -4, "e134": -1, "e136": 1, "e145": -2, "e146": 6,
    "e156": -2, "e234": 2, "e235": -1, "e236": 3, "e246": 2, "e256": 2,
    "e345": -2, "e346": 4, "e356": -2, "e456": -4, "e12345": -1,
    "e12346": 1, "e12356": -1, "e12456": -4, "e23456": 2}

CONIC_LINES = ((1, 0, 0, 0, 0, 2), (0, 1, 0, 2, 0, 0), (0, 0, 1, 0, 2, 0))

CONIC_WEDGE = {
    "e123": 1, "e125": 2, "e134": -2, "e145": 4,
    "e236": 2, "e256": 4, "e346": -4, "e456": 8}


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        word = "PASS" if self.passed else "FAIL"
        return "%s %2d %-38s [%7.1f ms] %s" % (
            word, self.number, self.name, self.seconds * 1000, self.detail)


def _mv(v):
    return Multivector.vector(list(v))


def _rand_nonnull(rng, lo=-3, hi=3):
    while True:
        a = tuple(rng.randint(lo, hi) for _ in range(6))
        if any(a) and quadratic_form(a):
            return a


def _rand_null_line(rng):
    while True:
        x = [rng.randint(-4, 4) for _ in range(4)]
        y = [rng.randint(-4, 4) for _ in range(4)]
        try:
            return line_from_points(x, y)
        except KleinError:
            continue


# --- the criteria ----------------------------------------------------------------

def _crit_1():
    l1, l2, l3 = (_mv(v) for v in CONIC_LINES)
    t0 = time.perf_counter()
    wedge = l1 ^ l2 ^ l3
    dt = time.perf_counter() - t0
    expected = from_map(CONIC_WEDGE)
    ok = wedge == expected and dt < 1e-3
    return ok, "8 coefficients exact" if ok else "wedge mismatch", dt


def _crit_2():
    t0 = time.perf_counter()
    blade = incidence.Blade.from_vectors(CONIC_LINES)
    s = incidence.regulus_form(blade)
    dt = time.perf_counter() - t0
    want = [[0, 2, 2], [2, 0, 2], [2, 2, 0]]
    ok = [[int(x) for x in row] for row in s] == want
    return ok, "S = [[0,2,2],[2,0,2],[2,2,0]]" if ok else "form mismatch", dt


def _crit_3():
    t0 = time.perf_counter()
    versor = matrix_to_versor(ProjMatrix4(K_MATRIX, COLLINEATION))
    back = versor_to_matrix(versor)
    dt = time.perf_counter() - t0
    gp, gm = from_map(G_PLUS), from_map(G_MINUS)
    hit = ("g+" if projective_eq(versor.mv, gp)
           else "g-" if projective_eq(versor.mv, gm) else None)
    round_trip = (back.kind == COLLINEATION and
                  linalg.projective_eq_mat(back.mat, linalg.mat(K_MATRIX)))
    ok = hit is not None and round_trip
    detail = ("landed on %s, %d reflections, round trip exact"
              % (hit, len(versor.factors)) if ok else
              "no golden match" if hit is None else "round trip failed")
    return ok, detail, dt


def _crit_4():
    t0 = time.perf_counter()
    versor = matrix_to_versor(ProjMatrix4(K_MATRIX, CORRELATION))
    back = versor_to_matrix(versor)
    hp, hm = from_map(H_PLUS), from_map(H_MINUS)
    kf = linalg.mat(K_MATRIX)
    hit = ("h+" if projective_eq(versor.mv, hp)
           else "h-" if projective_eq(versor.mv, hm) else None)
    both_rays = (linalg.projective_eq_mat(versor_to_matrix(hp).mat, kf) and
                 linalg.projective_eq_mat(versor_to_matrix(hm).mat, kf))
    round_trip = (back.kind == CORRELATION and
                  linalg.projective_eq_mat(back.mat, kf))
    dt = time.perf_counter() - t0
    ok = hit is not None and round_trip and both_rays
    detail = ("landed on %s, both golden rays reproduce the matrix"
              % hit if ok else "correlation golden failed")
    return ok, detail, dt


def _crit_5():
    rng = random.Random(5)
    t0 = time.perf_counter()
    for _ in range(1000):
        a = tuple(rng.randint(-9, 9) for _ in range(6))
        if not any(a):
            continue
        s = a[0] * a[3] + a[1] * a[4] + a[2] * a[5]
        if linalg.det(linalg.mat(vector_to_null_polarity(a))) != s * s:
            return False, "determinant identity violated at %r" % (a,), 0.0
    dt = time.perf_counter() - t0
    return dt < 1.0, "1000 determinants exact", dt


def _crit_6():
    rng = random.Random(6)
    t0 = time.perf_counter()
    for i in range(1000):
        g = Multivector.scalar(1)
        for _ in range(rng.randint(1, 6)):
            g = g * _mv(_rand_nonnull(rng, -2, 2))
        x = _mv(_rand_null_line(rng))
        image = sandwich(g, x)
        if not (image * image).is_zero:
            return False, "image of a null vector is not null (pair %d)" % i, 0.0
    dt = time.perf_counter() - t0
    return dt < 5.0, "1000 sandwich images square to zero", dt


def _crit_7():
    rng = random.Random(7)
    t0 = time.perf_counter()
    done = 0
    while done < 200:
        k = rng.randint(1, 5)
        vs = [tuple(rng.randint(-3, 3) for _ in range(6)) for _ in range(k)]
        mv = _mv(vs[0])
        for v in vs[1:]:
            mv = mv ^ _mv(v)
        if mv.is_zero:
            continue
        inner = incidence.ipns_basis(mv)
        outer = incidence.opns_basis(mv.dual())
        ra = linalg.rank(linalg.mat(inner))
        rb = linalg.rank(linalg.mat(outer))
        rc = linalg.rank(linalg.mat(inner + outer))
        if not (ra == rb == rc == 6 - k):
            return False, "null spaces differ for a grade-%d blade" % k, 0.0
        done += 1
    dt = time.perf_counter() - t0
    return True, "200 blades: inner null space = dual outer null space", dt


def _crit_8():
    rng = random.Random(8)
    t0 = time.perf_counter()
    for i in range(500):
        k = rng.randint(1, 6)
        vs = [_rand_nonnull(rng) for _ in range(k)]
        mats = []
        for j, v in enumerate(vs):
            if (len(vs) - 1 - j) % 2 == 0:
                mats.append(vector_to_null_polarity(v))
            else:
                mats.append(_odd_matrix(_mv(v)))
        a = linalg.identity(4)
        for m in mats:
            a = linalg.mat_mul(a, linalg.mat(m))
        kind = COLLINEATION if k % 2 == 0 else CORRELATION
        polys = decompose_null_polarities(ProjMatrix4(a, kind))
        if len(polys) > 6 or len(polys) % 2 != k % 2:
            return False, "factor count wrong on input %d" % i, 0.0
        g = Multivector.scalar(1)
        for p in polys:
            g = g * _mv(null_polarity_to_vector(p))
        back = versor_to_matrix(g)
        if back.kind != kind or not linalg.projective_eq_mat(back.mat, a):
            return False, "recomposition failed on input %d" % i, 0.0
    dt = time.perf_counter() - t0
    return dt < 30.0, "500 products of null polarities refactored", dt


def _crit_9():
    t0 = time.perf_counter()
    flip = ProjMatrix4([[1, 0, 0, 0], [0, 1, 0, 0],
                        [0, 0, 1, 0], [0, 0, 0, -1]], COLLINEATION)
    lam = matrix_to_linemap6(flip).lam
    if lam != -1 or conformal_factor(matrix_to_linemap6(flip).mat) != -1:
        return False, "conformal factor is not -1", 0.0
    try:
        matrix_to_versor(flip)
        return False, "negative factor was not rejected", 0.0
    except KleinError as err:
        dt = time.perf_counter() - t0
        ok = err.code == E_NOT_PIN_REPRESENTABLE
        return ok, "lam = -1 rejected with %s" % err.code, dt


def _crit_10():
    rng = random.Random(10)
    t0 = time.perf_counter()
    for _ in range(200):
        point = tuple(rng.randint(-6, 6) for _ in range(4))
        if not any(point):
            continue
        blade = incidence.bundle_blade(point)
        cls = incidence.classify_blade(blade)
        if cls.kind != incidence.BUNDLE:
            return False, "bundle blade misclassified for %r" % (point,), 0.0
        if not linalg.projective_eq_vec(list(incidence.bundle_vertex(blade)),
                                        list(point)):
            return False, "vertex mismatch for %r" % (point,), 0.0
    for _ in range(200):
        plane = tuple(rng.randint(-6, 6) for _ in range(4))
        if not any(plane):
            continue
        blade = incidence.field_blade(plane)
        cls = incidence.classify_blade(blade)
        if cls.kind != incidence.FIELD:
            return False, "field blade misclassified for %r" % (plane,), 0.0
        if not linalg.projective_eq_vec(list(incidence.field_plane(blade)),
                                        list(plane)):
            return False, "plane mismatch for %r" % (plane,), 0.0
    dt = time.perf_counter() - t0
    return True, "200 bundles and 200 fields recovered", dt


def _crit_11():
    rng = random.Random(11)
    t0 = time.perf_counter()
    for trial in range(60):
        g = Multivector.scalar(1)
        for _ in range(rng.randint(1, 6)):
            g = g * _mv(_rand_nonnull(rng, -2, 2))
        if not grade1_closure_check(g).ok:
            return False, "closure failed for a generated versor", 0.0
    even_masks = [m for m in (masks_of_grade(2) + masks_of_grade(4) + [0, 63])]
    failures = 0
    verified = 0
    for trial in range(100):
        g = Multivector.scalar(1)
        for _ in range(2 * rng.randint(1, 3)):
            g = g * _mv(_rand_nonnull(rng, -2, 2))
        delta = Multivector.basis(rng.choice(even_masks)) * rng.randint(1, 3)
        candidate = g + delta
        if candidate.is_zero:
            continue
        if not grade1_closure_check(candidate).ok:
            failures += 1
            continue
        # a perturbation that still passes must be a genuine versor: factor
        # its matrix and demand the factorization reproduces the element
        try:
            again = matrix_to_versor(versor_to_matrix(candidate))
        except KleinError:
            return False, "closure passed for a non-factorable element", 0.0
        if not projective_eq(again.mv, candidate):
            return False, "closure passed for a non-versor", 0.0
        verified += 1
    dt = time.perf_counter() - t0
    ok = failures + verified == 100
    detail = ("60 versors pass; %d perturbations fail, %d verify as versors"
              % (failures, verified))
    return ok, detail, dt


CRITERIA = (
    (1, "three-line wedge expansion", _crit_1),
    (2, "regulus quadratic form", _crit_2),
    (3, "collineation golden factorization", _crit_3),
    (4, "correlation golden factorization", _crit_4),
    (5, "null polarity determinant identity", _crit_5),
    (6, "sandwich nullity preservation", _crit_6),
    (7, "inner/outer null space duality", _crit_7),
    (8, "null polarity factorization bound", _crit_8),
    (9, "anti-orthogonal rejection gate", _crit_9),
    (10, "bundle and field recovery", _crit_10),
    (11, "grade-1 closure discrimination", _crit_11),
)


def run_criterion(number: int) -> CriterionResult:
    for num, name, fn in CRITERIA:
        if num == number:
            t0 = time.perf_counter()
            try:
                ok, detail, dt = fn()
            except Exception as exc:          # a crash is a failure, not an abort
                return CriterionResult(num, name, False,
                                       "raised %r" % (exc,),
                                       time.perf_counter() - t0)
            if not dt:
                dt = time.perf_counter() - t0
            return CriterionResult(num, name, bool(ok), detail, dt)
    raise KleinError("E_DOMAIN", "no criterion %r" % number)


def run_all(stream=None) -> list:
    results = [run_criterion(num) for num, _, _ in CRITERIA]
    if stream is not None:
        for r in results:
            print(r.line(), file=stream)
        n_pass = sum(r.passed for r in results)
        print("%d/%d acceptance criteria passed" % (n_pass, len(results)),
              file=stream)
    return results
