"""Exact Clifford algebra Cl(3,3) on the null basis adapted to line space.

Generators e1..e6 pair hyperbolically: e_i e_{i+3} + e_{i+3} e_i = 2 for
i = 1,2,3, all other anticommutators vanish, and every generator squares to
zero.  A vector v = x1 e1 + ... + x6 e6 therefore satisfies

    v v = 2 (x1 x4 + x2 x5 + x3 x6).

The canonical 64-dimensional basis consists of the wedge blades
e_{i1} ^ ... ^ e_{ik} with strictly ascending indices.  On a null basis the
wedge is *not* the same as the ascending product word (e1 e4 = e14 + 1), so
the structure constants are computed in two steps: products of words are
normalized with the rewriting rules

    e_j e_i -> 2 G_ij - e_i e_j   (j > i),      e_i e_i -> 0,

where G_ij = 1 iff |i - j| = 3, and the exact unitriangular change of basis
between product words and wedge blades is applied on both sides.  The full
64 x 64 table is precomputed at import time with integer coefficients.

Coefficients of multivectors are ints / Fractions (QuadExt elements are also
accepted); there is no floating point here.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import KleinError, E_DOMAIN, E_SCHEMA

GEN_COUNT = 6
DIM = 64
PSEUDO_MASK = DIM - 1


def _indices(mask: int) -> tuple:
    return tuple(i for i in range(GEN_COUNT) if mask >> i & 1)


def _mask_of(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << i
    return m


GRADE = [bin(m).count("1") for m in range(DIM)]

LABELS = ["1"] + [""] * (DIM - 1)
for _m in range(1, DIM):
    LABELS[_m] = "e" + "".join(str(i + 1) for i in _indices(_m))

_LABEL_TO_MASK = {lab: m for m, lab in enumerate(LABELS)}


def parse_label(label: str) -> int:
    """Map a canonical blade label ('1', 'e25', 'e123456') to its mask."""
    m = _LABEL_TO_MASK.get(label)
    if m is None:
        raise KleinError(E_SCHEMA, f"unknown blade label {label!r}")
    return m


def masks_of_grade(k: int) -> list:
    """Masks of grade k sorted lexicographically by index tuple."""
    return sorted((m for m in range(DIM) if GRADE[m] == k), key=_indices)


def _pairing_gen(i: int, j: int) -> int:
    return 1 if abs(i - j) == 3 else 0


# --- step 1: products of generator words, canonicalized by rewriting -------

def _normalize_word(word) -> dict:
    out = {}
    stack = [(1, list(word))]
    while stack:
        coeff, w = stack.pop()
        k = -1
        for t in range(len(w) - 1):
            if w[t] >= w[t + 1]:
                k = t
                break
        if k < 0:
            key = _mask_of(w)
            out[key] = out.get(key, 0) + coeff
            if not out[key]:
                del out[key]
            continue
        i, j = w[k], w[k + 1]
        if i == j:
            continue  # null generators: e_i e_i = 0
        g = _pairing_gen(i, j)
        if g:
            stack.append((2 * g * coeff, w[:k] + w[k + 2:]))
        stack.append((-coeff, w[:k] + [j, i] + w[k + 2:]))
    return out


_word_mul_cache: dict = {}


def _word_mul(wa: int, wb: int) -> dict:
    key = (wa, wb)
    hit = _word_mul_cache.get(key)
    if hit is None:
        hit = _normalize_word(list(_indices(wa)) + list(_indices(wb)))
        _word_mul_cache[key] = hit
    return hit


# --- step 2: change of basis between words and wedge blades ----------------

def _build_wedge_tables():
    wedge_w = {0: {0: Fraction(1)}}
    for mask in sorted(range(1, DIM), key=lambda m: (GRADE[m], m)):
        low = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << low)
        a = wedge_w[rest]
        k = GRADE[rest]
        acc: dict = {}
        for wm, c in a.items():
            for rm, rc in _word_mul(1 << low, wm).items():
                acc[rm] = acc.get(rm, Fraction(0)) + c * rc
            s = -1 if k % 2 else 1
            for rm, rc in _word_mul(wm, 1 << low).items():
                acc[rm] = acc.get(rm, Fraction(0)) + s * c * rc
        half = {}
        for rm, c in acc.items():
            c = c / 2
            if c:
                half[rm] = c
        wedge_w[mask] = half
    # integrality check, then invert the unitriangular system
    for mask, d in wedge_w.items():
        for rm, c in d.items():
            if c.denominator != 1:
                raise AssertionError("non-integer wedge/word structure constant")
        wedge_w[mask] = {rm: int(c) for rm, c in d.items()}
    word_wedge: dict = {}
    for wm in sorted(range(DIM), key=lambda m: (GRADE[m], m)):
        expansion = dict(wedge_w[wm])
        lead = expansion.pop(wm)
        if lead != 1:
            raise AssertionError("wedge/word basis change is not unitriangular")
        out = {wm: 1}
        for sub, c in expansion.items():
            for bm, bc in word_wedge[sub].items():
                out[bm] = out.get(bm, 0) - c * bc
                if not out[bm]:
                    del out[bm]
        word_wedge[wm] = out
    return wedge_w, word_wedge


_WEDGE_IN_WORDS, _WORD_IN_WEDGES = _build_wedge_tables()


def _build_mul_table():
    table = [[None] * DIM for _ in range(DIM)]
    for a in range(DIM):
        wa = _WEDGE_IN_WORDS[a]
        for b in range(DIM):
            wb = _WEDGE_IN_WORDS[b]
            word_acc: dict = {}
            for ma, ca in wa.items():
                for mb, cb in wb.items():
                    cab = ca * cb
                    for mr, cr in _word_mul(ma, mb).items():
                        word_acc[mr] = word_acc.get(mr, 0) + cab * cr
            wedge_acc: dict = {}
            for mr, c in word_acc.items():
                if not c:
                    continue
                for bm, bc in _WORD_IN_WEDGES[mr].items():
                    wedge_acc[bm] = wedge_acc.get(bm, 0) + c * bc
            table[a][b] = tuple((m, c) for m, c in wedge_acc.items() if c)
    return table


MUL = _build_mul_table()


def _outer_sign(a: int, b: int) -> int:
    inv = 0
    for i in _indices(a):
        inv += sum(1 for j in _indices(b) if j < i)
    return -1 if inv % 2 else 1


OUTER = [[None] * DIM for _ in range(DIM)]
for _a in range(DIM):
    for _b in range(DIM):
        if _a & _b:
            OUTER[_a][_b] = None
        else:
            OUTER[_a][_b] = (_a | _b, _outer_sign(_a, _b))

ALPHA_SIGN = [(-1) ** GRADE[m] for m in range(DIM)]
REVERSE_SIGN = [(-1) ** (GRADE[m] * (GRADE[m] - 1) // 2) for m in range(DIM)]
CONJ_SIGN = [(-1) ** (GRADE[m] * (GRADE[m] + 1) // 2) for m in range(DIM)]


# --- multivectors -----------------------------------------------------------

def _sort_key(mask: int):
    return (GRADE[mask], _indices(mask))


class Multivector:
    """Sparse multivector with exact coefficients on the wedge-blade basis."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for k, v in coeffs.items():
                m = k if isinstance(k, int) else parse_label(k)
                if not 0 <= m < DIM:
                    raise KleinError(E_SCHEMA, f"blade mask {m} out of range")
                if v:
                    c[m] = c.get(m, 0) + v
        self._c = {m: v for m, v in c.items() if v}

    # -- constructors -------------------------------------------------------
    @classmethod
    def scalar(cls, x):
        return cls({0: x})

    @classmethod
    def vector(cls, xs):
        xs = list(xs)
        if len(xs) != GEN_COUNT:
            raise KleinError(E_DOMAIN, "a vector needs exactly 6 coordinates")
        return cls({1 << i: x for i, x in enumerate(xs)})

    @classmethod
    def basis(cls, label):
        m = label if isinstance(label, int) else parse_label(label)
        return cls({m: 1})

    # -- inspection ----------------------------------------------------------
    def items(self):
        return sorted(self._c.items(), key=lambda kv: _sort_key(kv[0]))

    def coeff(self, key):
        m = key if isinstance(key, int) else parse_label(key)
        return self._c.get(m, 0)

    def grades(self):
        return sorted({GRADE[m] for m in self._c})

    def grade_part(self, k):
        return Multivector({m: v for m, v in self._c.items() if GRADE[m] == k})

    def scalar_part(self):
        return self._c.get(0, 0)

    @property
    def is_zero(self):
        return not self._c

    def vector_coeffs(self):
        if any(GRADE[m] != 1 for m in self._c):
            raise KleinError(E_DOMAIN, "not a pure grade-1 element")
        return tuple(self._c.get(1 << i, 0) for i in range(GEN_COUNT))

    # -- ring structure ------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Multivector):
            other = Multivector.scalar(other)
        c = dict(self._c)
        for m, v in other._c.items():
            c[m] = c.get(m, 0) + v
        out = Multivector.__new__(Multivector)
        out._c = {m: v for m, v in c.items() if v}
        return out

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Multivector):
            other = Multivector.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        out = Multivector.__new__(Multivector)
        out._c = {m: -v for m, v in self._c.items()}
        return out

    def __mul__(self, other):
        if not isinstance(other, Multivector):
            out = Multivector.__new__(Multivector)
            out._c = {m: v * other for m, v in self._c.items() if v * other}
            return out
        acc: dict = {}
        for ma, ca in self._c.items():
            row = MUL[ma]
            for mb, cb in other._c.items():
                cab = ca * cb
                for mr, cr in row[mb]:
                    acc[mr] = acc.get(mr, 0) + cab * cr
        out = Multivector.__new__(Multivector)
        out._c = {m: v for m, v in acc.items() if v}
        return out

    def __rmul__(self, other):
        # only scalars reach here, and scalars commute
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, Multivector):
            raise KleinError(E_DOMAIN, "division by a multivector is not defined")
        return self * (Fraction(1) / other)

    def __xor__(self, other):
        if not isinstance(other, Multivector):
            other = Multivector.scalar(other)
        acc: dict = {}
        for ma, ca in self._c.items():
            for mb, cb in other._c.items():
                cell = OUTER[ma][mb]
                if cell is None:
                    continue
                mr, s = cell
                acc[mr] = acc.get(mr, 0) + ca * cb * s
        out = Multivector.__new__(Multivector)
        out._c = {m: v for m, v in acc.items() if v}
        return out

    def wedge(self, other):
        return self ^ other

    def lc(self, other):
        """Left contraction: grade-(s-r) parts of the geometric product."""
        acc: dict = {}
        for ma, ca in self._c.items():
            ga = GRADE[ma]
            for mb, cb in other._c.items():
                target = GRADE[mb] - ga
                if target < 0:
                    continue
                cab = ca * cb
                for mr, cr in MUL[ma][mb]:
                    if GRADE[mr] == target:
                        acc[mr] = acc.get(mr, 0) + cab * cr
        out = Multivector.__new__(Multivector)
        out._c = {m: v for m, v in acc.items() if v}
        return out

    # -- involutions and duality ---------------------------------------------
    def alpha(self):
        out = Multivector.__new__(Multivector)
        out._c = {m: v if ALPHA_SIGN[m] > 0 else -v for m, v in self._c.items()}
        return out

    def reverse(self):
        out = Multivector.__new__(Multivector)
        out._c = {m: v if REVERSE_SIGN[m] > 0 else -v for m, v in self._c.items()}
        return out

    def conj(self):
        out = Multivector.__new__(Multivector)
        out._c = {m: v if CONJ_SIGN[m] > 0 else -v for m, v in self._c.items()}
        return out

    def dual(self):
        return self * _PSEUDO

    # -- comparisons -----------------------------------------------------------
    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if isinstance(other, Multivector):
            return self._c == other._c
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self._c
            return set(self._c) == {0} and self._c[0] == other
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self.items()))

    def __repr__(self):
        if not self._c:
            return "0"
        parts = []
        for m, v in self.items():
            lab = LABELS[m]
            term = str(v) if m == 0 else (f"{v}*{lab}" if v != 1 else lab)
            if v == -1 and m != 0:
                term = f"-{lab}"
            parts.append(term)
        s = " + ".join(parts)
        return s.replace("+ -", "- ")


_PSEUDO = Multivector.basis(PSEUDO_MASK)


def e(i: int) -> Multivector:
    """Basis vector e_i, 1-indexed."""
    if not 1 <= i <= GEN_COUNT:
        raise KleinError(E_DOMAIN, "generator index out of range")
    return Multivector.basis(1 << (i - 1))


# --- module-level operation names ------------------------------------------

def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    return a * b


def outer_product(a: Multivector, b: Multivector) -> Multivector:
    return a ^ b


def left_contraction(a: Multivector, b: Multivector) -> Multivector:
    return a.lc(b)


def involution_alpha(a: Multivector) -> Multivector:
    return a.alpha()


def involution_reverse(a: Multivector) -> Multivector:
    return a.reverse()


def involution_conjugate(a: Multivector) -> Multivector:
    return a.conj()


def dual(a: Multivector) -> Multivector:
    return a.dual()


def grade_projection(a: Multivector, k: int) -> Multivector:
    return a.grade_part(k)


def projective_eq(a: Multivector, b: Multivector) -> bool:
    """Equality up to a nonzero scalar factor; both-zero is a domain error."""
    if a.is_zero and b.is_zero:
        raise KleinError(E_DOMAIN, "projective comparison of two zero elements")
    if a.is_zero or b.is_zero:
        return False
    lam = None
    masks = set(a._c) | set(b._c)
    for m in masks:
        x, y = a._c.get(m, 0), b._c.get(m, 0)
        if bool(x) != bool(y):
            return False
        if lam is None:
            lam = x / y if not isinstance(y, int) or not isinstance(x, int) else Fraction(x, y)
        else:
            if x != lam * y:
                return False
    return True


def pairing(v, w):
    """Symmetric bilinear form B(v, w) = (vw + wv)/2 on coordinate 6-tuples."""
    return sum(v[i] * w[i + 3] + v[i + 3] * w[i] for i in range(3))


def quadratic_form(v):
    """Q(v) = v v = 2(x1 x4 + x2 x5 + x3 x6) on coordinate 6-tuples."""
    return 2 * sum(v[i] * v[i + 3] for i in range(3))


# --- serialization -----------------------------------------------------------

def to_map(a: Multivector) -> dict:
    """Canonical text form: blade label -> exact coefficient string."""
    out = {}
    for m, v in a.items():
        out[LABELS[m]] = str(v) if not isinstance(v, int) else str(Fraction(v))
    return out


def from_map(d: dict) -> Multivector:
    coeffs = {}
    for lab, val in d.items():
        m = parse_label(lab)
        if isinstance(val, bool) or isinstance(val, float):
            raise KleinError(E_SCHEMA, f"coefficient for {lab} must be exact (int or 'p/q')")
        try:
            coeffs[m] = Fraction(val)
        except (ValueError, TypeError) as exc:
            raise KleinError(E_SCHEMA, f"bad coefficient {val!r} for {lab}") from exc
    return Multivector(coeffs)
