"""Plücker coordinates, the Klein quadric pairing, and linear complexes.

A line through points X, Y of P^3 gets coordinates

    (p01, p02, p03, p23, p31, p12),    p_ij = x_i y_j - x_j y_i,

and that 6-tuple, read as coefficients of e1..e6, is a null vector of the
algebra: v v = 2 (p01 p23 + p02 p31 + p03 p12).  The quadric pairing is

    omega(x, y) = (x1 y4 + x2 y5 + x3 y6 + x4 y1 + x5 y2 + x6 y3) / 2,

so the algebra's bilinear form is exactly 4*omega through v w + w v.
Regular 6-tuples (omega(c, c) != 0) are linear complexes; pitch and axis
are recovered in the usual Euclidean normalization.
"""

from __future__ import annotations

from fractions import Fraction

from . import ga_core
from .errors import KleinError, E_DOMAIN
from .ga_core import Multivector

# order of Plücker coordinates throughout the package
COORD_ORDER = ("p01", "p02", "p03", "p23", "p31", "p12")

# index pairs (i, j) of p_ij in that order
COORD_PAIRS = ((0, 1), (0, 2), (0, 3), (2, 3), (3, 1), (1, 2))


def _check4(x, what):
    xs = [Fraction(v) for v in x]
    if len(xs) != 4:
        raise KleinError(E_DOMAIN, f"{what} needs 4 homogeneous coordinates")
    if all(v == 0 for v in xs):
        raise KleinError(E_DOMAIN, f"{what} must be nonzero")
    return xs


def _check6(x, what="6-tuple"):
    xs = [Fraction(v) for v in x]
    if len(xs) != 6:
        raise KleinError(E_DOMAIN, f"{what} needs 6 coordinates")
    return xs


def line_from_points(x, y):
    """Plücker coordinates of the line joining two distinct points."""
    x = _check4(x, "point")
    y = _check4(y, "point")
    p = tuple(x[i] * y[j] - x[j] * y[i] for i, j in COORD_PAIRS)
    if all(v == 0 for v in p):
        raise KleinError(E_DOMAIN, "points are projectively equal; no unique line")
    return p


def line_from_planes(u, v):
    """Plücker coordinates of the intersection line of two distinct planes.

    The 2x2 minors of two planes are the *axis* (dual) coordinates of their
    meet; exchanging the two coordinate triples converts them to the point
    based coordinates used everywhere else.
    """
    u = _check4(u, "plane")
    v = _check4(v, "plane")
    q = tuple(u[i] * v[j] - u[j] * v[i] for i, j in COORD_PAIRS)
    if all(x == 0 for x in q):
        raise KleinError(E_DOMAIN, "planes are projectively equal; no unique line")
    return (q[3], q[4], q[5], q[0], q[1], q[2])


def plucker_form(c):
    """p01 p23 + p02 p31 + p03 p12; zero exactly on lines."""
    c = _check6(c)
    return c[0] * c[3] + c[1] * c[4] + c[2] * c[5]


def is_line(c) -> bool:
    return plucker_form(c) == 0


def omega(x, y):
    """Polar form of the Klein quadric (with the conventional 1/2)."""
    x = _check6(x)
    y = _check6(y)
    return sum(x[i] * y[i + 3] + x[i + 3] * y[i] for i in range(3)) / 2


def embed(c) -> Multivector:
    """Read a Plücker 6-tuple as the grade-1 element p01 e1 + ... + p12 e6."""
    return Multivector.vector(_check6(c))


def extract(v: Multivector):
    """Inverse of embed; requires a pure grade-1 element."""
    return tuple(Fraction(x) for x in v.vector_coeffs())


def swap_triples(c):
    """Exchange (p01,p02,p03) with (p23,p31,p12) — the dual-coordinates swap."""
    c = _check6(c)
    return tuple(c[3:]) + tuple(c[:3])


def complex_pitch_axis(c):
    """Pitch and axis of a linear complex (c, cbar).

    Writing c = (d, m) with direction part d = (c1,c2,c3) and moment part
    m = (c4,c5,c6): pitch = <d,m>/<d,d>, axis = (d, m - pitch*d).  A singular
    complex (a line) comes back with pitch 0 and itself as axis.  Complexes
    with zero direction part (ideal lines / complexes of ideal type) have no
    Euclidean axis and are rejected.
    """
    c = _check6(c, "complex")
    d, m = c[:3], c[3:]
    dd = sum(x * x for x in d)
    if dd == 0:
        raise KleinError(E_DOMAIN, "zero direction part: no Euclidean pitch/axis")
    dm = sum(x * y for x, y in zip(d, m))
    pitch = dm / dd
    axis = tuple(d) + tuple(mi - pitch * di for di, mi in zip(d, m))
    singular = plucker_form(c) == 0
    return pitch, axis, singular
