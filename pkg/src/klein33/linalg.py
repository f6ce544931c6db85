"""Small exact linear algebra layer over Fraction (or QuadExt) entries.

Matrices are plain lists of lists; vectors are lists.  Everything is done
with fraction-free-ish Gaussian elimination on exact field elements — no
floats, no pivoting heuristics beyond "first nonzero".
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import KleinError, E_DOMAIN, E_SINGULAR
from .exactnum import QuadExt


def lift(x):
    """Coerce an entry to an exact field element (Fraction or QuadExt)."""
    if isinstance(x, QuadExt):
        return x
    return Fraction(x)


def mat(rows):
    return [[lift(x) for x in row] for row in rows]


def vec(xs):
    return [lift(x) for x in xs]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(r, c):
    return [[Fraction(0)] * c for _ in range(r)]


def transpose(a):
    return [list(col) for col in zip(*a)]


def mat_mul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, s):
    return [[x * s for x in row] for row in a]


def vec_sub(u, v):
    return [x - y for x, y in zip(u, v)]


def vec_scale(u, s):
    return [x * s for x in u]


def mat_eq(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def is_zero_mat(a):
    return all(not x for row in a for x in row)


def is_zero_vec(v):
    return all(not x for x in v)


def rref(a):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    m = [list(map(lift, row)) for row in a]
    if not m:
        return m, []
    rows, cols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(cols):
        sel = next((i for i in range(r, rows) if m[i][c]), None)
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a):
    return len(rref(a)[1])


def nullspace(a):
    """Basis of the right null space of a (list of vectors)."""
    if not a:
        return []
    m, pivots = rref(a)
    cols = len(a[0])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(v)
    return basis


def det(a):
    m = [list(map(lift, row)) for row in a]
    n = len(m)
    d = Fraction(1)
    sign = 1
    for c in range(n):
        sel = next((i for i in range(c, n) if m[i][c]), None)
        if sel is None:
            return Fraction(0)
        if sel != c:
            m[c], m[sel] = m[sel], m[c]
            sign = -sign
        piv = m[c][c]
        d = d * piv
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] / piv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d * sign


def inverse(a):
    n = len(a)
    m = [list(map(lift, row)) + list(identity(n)[i]) for i, row in enumerate(a)]
    red, pivots = rref(m)
    if pivots[:n] != list(range(n)):
        raise KleinError(E_SINGULAR, "matrix is singular")
    return [row[n:] for row in red]


def solve(a, b):
    """Solve a x = b exactly; raises if the system is inconsistent/singular."""
    n, cols = len(a), len(a[0])
    aug = [list(map(lift, row)) + [lift(bb)] for row, bb in zip(a, b)]
    red, pivots = rref(aug)
    if cols in pivots:
        raise KleinError(E_DOMAIN, "inconsistent linear system")
    if len(pivots) < cols:
        raise KleinError(E_SINGULAR, "underdetermined linear system")
    x = [Fraction(0)] * cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][cols]
    return x


def primitive_vector(v):
    """Projective normal form: integer entries, gcd 1, first nonzero positive.

    Entries with a QuadExt component are instead scaled so the first nonzero
    entry becomes 1 (integer content has no meaning there).
    """
    v = [lift(x) for x in v]
    first = next((x for x in v if x), None)
    if first is None:
        raise KleinError(E_DOMAIN, "zero vector has no projective normal form")
    if any(isinstance(x, QuadExt) and not x.is_rational for x in v):
        return [x / first for x in v]
    fr = [Fraction(x) if not isinstance(x, QuadExt) else x.as_fraction() for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    if lead < 0:
        ints = [-x for x in ints]
    return ints


def projective_eq_vec(u, v) -> bool:
    u, v = vec(u), vec(v)
    if is_zero_vec(u) or is_zero_vec(v):
        raise KleinError(E_DOMAIN, "projective comparison with a zero vector")
    lam = None
    for x, y in zip(u, v):
        if bool(x) != bool(y):
            return False
        if x:
            if lam is None:
                lam = x / y
            elif x != lam * y:
                return False
    return True


def projective_eq_mat(a, b) -> bool:
    return projective_eq_vec([x for row in a for x in row],
                             [x for row in b for x in row])


def primitive_matrix(a):
    flat = primitive_vector([x for row in a for x in row])
    c = len(a[0])
    return [flat[i * c:(i + 1) * c] for i in range(len(a))]


def symmetric_signature(s):
    """Inertia (pos, neg, zero) of a symmetric rational matrix.

    Exact congruence diagonalization: clear a row/column pair per pivot;
    when the whole active diagonal vanishes, a row+column addition creates a
    usable pivot (it cannot fail while the active block is nonzero).
    """
    m = [list(map(Fraction, row)) for row in s]
    n = len(m)
    pos = neg = 0
    for i in range(n):
        if m[i][i] == 0:
            j = next((j for j in range(i + 1, n) if m[j][j]), None)
            if j is None:
                off = next(((a, b) for a in range(i, n) for b in range(a + 1, n)
                            if m[a][b]), None)
                if off is None:
                    break  # active block is zero
                a, b = off
                for t in range(n):
                    m[a][t] += m[b][t]
                for t in range(n):
                    m[t][a] += m[t][b]
                j = a
            if j != i:
                m[i], m[j] = m[j], m[i]
                for t in range(n):
                    m[t][i], m[t][j] = m[t][j], m[t][i]
        piv = m[i][i]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        for j in range(i + 1, n):
            if m[j][i]:
                f = m[j][i] / piv
                for t in range(n):
                    m[j][t] -= f * m[i][t]
                for t in range(n):
                    m[t][j] -= f * m[t][i]
    return pos, neg, n - pos - neg
