"""Exact integer/rational matrix arithmetic, lattices, and abelian quotients.

Everything here is arbitrary precision: matrices are tuples of tuples of
Python ints or fractions.Fraction, never floats.  Lattices are kept in a
canonical Hermite form (row-style upper echelon, positive pivots, entries
above each pivot reduced into [0, pivot)), so two equal lattices are equal
as Python values and usable as dict keys.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import NotContained

Mat = tuple  # tuple of row tuples
Vec = tuple


class _InfiniteIndex:
    __slots__ = ()

    def __repr__(self):
        return "INFINITE_INDEX"


INFINITE_INDEX = _InfiniteIndex()


# ---------------------------------------------------------------------------
# plain matrix helpers (entries int or Fraction)

def mat_from_rows(rows) -> Mat:
    return tuple(tuple(r) for r in rows)


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(r: int, c: int) -> Mat:
    return tuple((0,) * c for _ in range(r))


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_add(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a: Mat, s) -> Mat:
    return tuple(tuple(x * s for x in row) for row in a)


def mat_transpose(a: Mat) -> Mat:
    return tuple(zip(*a))


def vec_mat(v: Vec, a: Mat) -> Vec:
    cols = tuple(zip(*a))
    return tuple(sum(x * y for x, y in zip(v, col)) for col in cols)


def mat_pow(a: Mat, k: int) -> Mat:
    n = len(a)
    result = identity(n)
    base = a
    while k > 0:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def mat_eq_zero(a: Mat) -> bool:
    return all(all(x == 0 for x in row) for row in a)


def mat_denominator(a: Mat) -> int:
    d = 1
    for row in a:
        for x in row:
            if isinstance(x, Fraction):
                d = lcm(d, x.denominator)
    return d


def mat_to_int(a: Mat) -> Mat:
    """Cast a matrix of integral Fractions to plain ints."""
    out = []
    for row in a:
        r = []
        for x in row:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError("entry is not integral")
                r.append(x.numerator)
            else:
                r.append(x)
        out.append(tuple(r))
    return tuple(out)


def mat_is_integral(a: Mat) -> bool:
    for row in a:
        for x in row:
            if isinstance(x, Fraction) and x.denominator != 1:
                return False
    return True


def mat_inverse(a: Mat) -> Mat:
    """Exact inverse over Q via Gauss-Jordan.  Raises ZeroDivisionError if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for i in range(n):
            if i != col and m[i][col] != 0:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return tuple(tuple(row[n:]) for row in m)


def bareiss_det(a: Mat) -> int:
    """Fraction-free determinant of an integer matrix."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            piv = None
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    piv = i
                    break
            if piv is None:
                return 0
            m[k], m[piv] = m[piv], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def mat_rank(a: Mat) -> int:
    """Rank over Q (fraction-free elimination on a scaled integer copy)."""
    if not a or not a[0]:
        return 0
    den = mat_denominator(a)
    m = [[int(x * den) if isinstance(x, Fraction) else x * den for x in row] for row in a]
    rows, cols = len(m), len(m[0])
    rank = 0
    row = 0
    for col in range(cols):
        piv = None
        for i in range(row, rows):
            if m[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        for i in range(row + 1, rows):
            if m[i][col] != 0:
                g = gcd(m[row][col], m[i][col])
                fa, fb = m[i][col] // g, m[row][col] // g
                m[i] = [fb * x - fa * y for x, y in zip(m[i], m[row])]
        row += 1
        rank += 1
        if row == rows:
            break
    return rank


def solve_left(a: Mat, v: Vec):
    """Solve x·a = v over Q; returns tuple of Fractions or None.

    a has full row rank (rows independent); v must lie in the row span.
    """
    m = [[Fraction(x) for x in row] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else len(v)
    rhs = [Fraction(x) for x in v]
    # Gaussian elimination on the transposed system a^T x^T = v^T
    aug = [[m[r][c] for r in range(rows)] + [rhs[c]] for c in range(cols)]
    piv_cols = []
    r = 0
    for c in range(rows):
        piv = None
        for i in range(r, cols):
            if aug[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        pv = aug[r][c]
        aug[r] = [x / pv for x in aug[r]]
        for i in range(cols):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    sol = [Fraction(0)] * rows
    for i, c in enumerate(piv_cols):
        sol[c] = aug[i][-1]
    # consistency check
    for i in range(r, cols):
        if aug[i][-1] != 0:
            return None
    return tuple(sol)


# ---------------------------------------------------------------------------
# Hermite and Smith normal forms

def _xgcd(a: int, b: int):
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    return g, x, y


def _echelon_insert(basis, pivots, vec):
    """Insert vec (list) into an int row-echelon basis, in place."""
    n = len(vec)
    j = 0
    while True:
        while j < n and vec[j] == 0:
            j += 1
        if j == n:
            return
        if j in pivots:
            p = pivots[j]
            row = basis[p]
            a, b = row[j], vec[j]
            if b % a == 0:
                q = b // a
                for t in range(j, n):
                    vec[t] -= q * row[t]
            else:
                g, x, y = _xgcd(a, b)
                ag, bg = a // g, b // g
                for t in range(j, n):
                    rt, vt = row[t], vec[t]
                    row[t] = x * rt + y * vt
                    vec[t] = -bg * rt + ag * vt
        else:
            pivots[j] = len(basis)
            basis.append(vec)
            return


def _echelon_normalize(basis, pivots, n):
    """Sort rows by pivot, make pivots positive, reduce entries above pivots.

    Row k is reduced against the pivot rows below it in increasing pivot-column
    order; each subtraction only touches columns right of the pivot being
    cleared, so previously reduced columns stay reduced.
    """
    order = sorted(pivots)
    rows = [basis[pivots[j]] for j in order]
    for i, j in enumerate(order):
        if rows[i][j] < 0:
            rows[i] = [-x for x in rows[i]]
    for k in range(len(rows) - 2, -1, -1):
        for i in range(k + 1, len(rows)):
            pj = order[i]
            q = rows[k][pj] // rows[i][pj]
            if q:
                rows[k] = [x - q * y for x, y in zip(rows[k], rows[i])]
    return [tuple(r) for r in rows]


def hnf_rows(rows) -> tuple:
    """Canonical HNF of the lattice spanned by integer rows; zero rows dropped."""
    basis: list = []
    pivots: dict = {}
    for r in rows:
        if any(r):
            _echelon_insert(basis, pivots, list(r))
    if not basis:
        return ()
    n = len(basis[0])
    return tuple(_echelon_normalize(basis, pivots, n))


def hnf_with_transform(a: Mat):
    """(H, V) with V unimodular, V·a = H, H the canonical Hermite form of a.

    H keeps the shape of a (zero rows collected at the bottom).
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug_basis: list = []
    pivots: dict = {}
    kernel_rows: list = []
    for i, r in enumerate(a):
        vec = list(r) + [0] * rows
        vec[cols + i] = 1
        # insert on the first `cols` coordinates only
        j = 0
        n = cols
        while True:
            while j < n and vec[j] == 0:
                j += 1
            if j == n:
                kernel_rows.append(vec)
                break
            if j in pivots:
                p = pivots[j]
                row = aug_basis[p]
                x0, y0 = row[j], vec[j]
                if y0 % x0 == 0:
                    q = y0 // x0
                    for t in range(j, cols + rows):
                        vec[t] -= q * row[t]
                else:
                    g, x, y = _xgcd(x0, y0)
                    ag, bg = x0 // g, y0 // g
                    for t in range(j, cols + rows):
                        rt, vt = row[t], vec[t]
                        row[t] = x * rt + y * vt
                        vec[t] = -bg * rt + ag * vt
            else:
                pivots[j] = len(aug_basis)
                aug_basis.append(vec)
                break
    order = sorted(pivots)
    rows_sorted = [aug_basis[pivots[j]] for j in order]
    for i, j in enumerate(order):
        if rows_sorted[i][j] < 0:
            rows_sorted[i] = [-x for x in rows_sorted[i]]
    for k in range(len(rows_sorted) - 2, -1, -1):
        for i in range(k + 1, len(rows_sorted)):
            pj = order[i]
            q = rows_sorted[k][pj] // rows_sorted[i][pj]
            if q:
                rows_sorted[k] = [x - q * y for x, y in zip(rows_sorted[k], rows_sorted[i])]
    all_rows = rows_sorted + kernel_rows
    h = tuple(tuple(r[:cols]) for r in all_rows)
    v = tuple(tuple(r[cols:]) for r in all_rows)
    return h, v


def kernel_int(a: Mat) -> tuple:
    """Basis (HNF) of the left integer kernel {x : x·a = 0} of an int matrix."""
    h, v = hnf_with_transform(a)
    ker = [vr for hr, vr in zip(h, v) if not any(hr)]
    return hnf_rows(ker)


def snf_with_transform(a: Mat):
    """(D, P, Q) with P, Q unimodular and P·a·Q = D, d_i | d_{i+1}, d_i >= 0."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = [list(r) for r in a]
    p = [[int(i == j) for j in range(rows)] for i in range(rows)]
    q = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def row_op(i1, i2, x, y, u, v):  # (r1, r2) <- (x r1 + y r2, u r1 + v r2)
        for t in range(cols):
            a1, a2 = m[i1][t], m[i2][t]
            m[i1][t] = x * a1 + y * a2
            m[i2][t] = u * a1 + v * a2
        for t in range(rows):
            a1, a2 = p[i1][t], p[i2][t]
            p[i1][t] = x * a1 + y * a2
            p[i2][t] = u * a1 + v * a2

    def col_op(j1, j2, x, y, u, v):
        for t in range(rows):
            a1, a2 = m[t][j1], m[t][j2]
            m[t][j1] = x * a1 + y * a2
            m[t][j2] = u * a1 + v * a2
        for t in range(cols):
            a1, a2 = q[t][j1], q[t][j2]
            q[t][j1] = x * a1 + y * a2
            q[t][j2] = u * a1 + v * a2

    k = 0
    nmin = min(rows, cols)
    while k < nmin:
        # find a nonzero pivot in the remaining block
        piv = None
        for i in range(k, rows):
            for j in range(k, cols):
                if m[i][j] != 0:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i0, j0 = piv
        if i0 != k:
            row_op(k, i0, 0, 1, 1, 0)
        if j0 != k:
            col_op(k, j0, 0, 1, 1, 0)
        while True:
            cleared = True
            for i in range(k + 1, rows):
                if m[i][k] != 0:
                    a0, b0 = m[k][k], m[i][k]
                    if b0 % a0 == 0:
                        f = b0 // a0
                        row_op(k, i, 1, 0, -f, 1)
                    else:
                        g, x, y = _xgcd(a0, b0)
                        row_op(k, i, x, y, -(b0 // g), a0 // g)
                    cleared = False
            for j in range(k + 1, cols):
                if m[k][j] != 0:
                    a0, b0 = m[k][k], m[k][j]
                    if b0 % a0 == 0:
                        f = b0 // a0
                        col_op(k, j, 1, 0, -f, 1)
                    else:
                        g, x, y = _xgcd(a0, b0)
                        col_op(k, j, x, y, -(b0 // g), a0 // g)
                    cleared = False
            if cleared:
                break
        # divisibility fix-up: ensure m[k][k] divides the rest of the block
        bad = None
        for i in range(k + 1, rows):
            for j in range(k + 1, cols):
                if m[i][j] % m[k][k] != 0:
                    bad = i
                    break
            if bad:
                break
        if bad is not None:
            row_op(k, bad, 1, 1, 0, 1)  # add the offending row to row k
            continue
        k += 1
    for i in range(nmin):
        if m[i][i] < 0:
            m[i] = [-x for x in m[i]]
            p[i] = [-x for x in p[i]]
    d = tuple(tuple(r) for r in m)
    return d, tuple(tuple(r) for r in p), tuple(tuple(r) for r in q)


def snf_diagonal(a: Mat) -> tuple:
    d, _, _ = snf_with_transform(a)
    n = min(len(d), len(d[0]) if d else 0)
    return tuple(d[i][i] for i in range(n))


# ---------------------------------------------------------------------------
# lattices

@dataclass(frozen=True)
class Lattice:
    """A f.g. subgroup of Q^n: rows/den in canonical HNF, usable as a dict key."""

    ambient: int
    den: int
    rows: tuple

    @staticmethod
    def from_rows(rows, ambient: int | None = None, den: int = 1) -> "Lattice":
        rows = [tuple(r) for r in rows]
        if ambient is None:
            if not rows:
                raise ValueError("ambient dimension required for empty row set")
            ambient = len(rows[0])
        fr_rows = []
        scale = 1
        for r in rows:
            fr = [Fraction(x, den) if not isinstance(x, Fraction) else x / den for x in r]
            fr_rows.append(fr)
            for fx in fr:
                scale = lcm(scale, fx.denominator)
        int_rows = [tuple(int(fx * scale) for fx in fr) for fr in fr_rows]
        h = hnf_rows(int_rows)
        if not h:
            return Lattice(ambient, 1, ())
        g = scale
        for r in h:
            for x in r:
                if x:
                    g = gcd(g, x)
        if g > 1:
            h = tuple(tuple(x // g for x in r) for r in h)
            scale //= g
        return Lattice(ambient, scale, h)

    @staticmethod
    def from_int_rows(rows, ambient: int, den: int = 1) -> "Lattice":
        """Fast constructor for integer rows over a common denominator."""
        h = hnf_rows(rows)
        if not h:
            return Lattice(ambient, 1, ())
        g = den
        for r in h:
            for x in r:
                if x:
                    g = gcd(g, x)
        if g > 1:
            h = tuple(tuple(x // g for x in r) for r in h)
            den //= g
        return Lattice(ambient, den, h)

    @staticmethod
    def zero(ambient: int) -> "Lattice":
        return Lattice(ambient, 1, ())

    @staticmethod
    def standard(ambient: int) -> "Lattice":
        return Lattice(ambient, 1, identity(ambient))

    @property
    def rank(self) -> int:
        return len(self.rows)

    def key(self):
        return (self.ambient, self.den, self.rows)

    def basis_fractions(self) -> Mat:
        if self.den == 1:
            return self.rows
        return tuple(tuple(Fraction(x, self.den) for x in r) for r in self.rows)

    def scaled(self, c) -> "Lattice":
        """The lattice c·L."""
        c = Fraction(c)
        return Lattice.from_rows(
            [tuple(Fraction(x * c.numerator, self.den * c.denominator) for x in r) for r in self.rows],
            self.ambient,
        )

    def apply(self, m: Mat) -> "Lattice":
        """Image lattice L·m for a square matrix m on the ambient space."""
        if not self.rows:
            return Lattice.zero(self.ambient)
        img = mat_mul(self.rows, m)
        return Lattice.from_rows(
            [tuple(Fraction(x, self.den) if self.den != 1 or isinstance(x, Fraction) else x
                   for x in row) for row in img],
            self.ambient,
        )

    def contains_vector(self, v) -> bool:
        if len(v) != self.ambient:
            raise ValueError("dimension mismatch")
        if all(x == 0 for x in v):
            return True
        if not self.rows:
            return False
        # clear denominators: v in L  iff  den·v in int-row-lattice
        target = []
        for x in v:
            fx = Fraction(x) * self.den
            if fx.denominator != 1:
                return False
            target.append(fx.numerator)
        piv = {}
        for i, row in enumerate(self.rows):
            for j, x in enumerate(row):
                if x:
                    piv[j] = i
                    break
        vec = target
        n = self.ambient
        j = 0
        while j < n:
            if vec[j] == 0:
                j += 1
                continue
            if j not in piv:
                return False
            row = self.rows[piv[j]]
            if vec[j] % row[j] != 0:
                return False
            q = vec[j] // row[j]
            vec = [a - q * b for a, b in zip(vec, row)]
        return True

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains_vector(tuple(Fraction(x, other.den) for x in r))
                   for r in other.rows)


def lattice_sum(l1: Lattice, l2: Lattice) -> Lattice:
    if l1.ambient != l2.ambient:
        raise ValueError("ambient dimensions differ")
    rows = [tuple(Fraction(x, l1.den) for x in r) for r in l1.rows]
    rows += [tuple(Fraction(x, l2.den) for x in r) for r in l2.rows]
    if not rows:
        return Lattice.zero(l1.ambient)
    return Lattice.from_rows(rows, l1.ambient)


def lattice_intersect(l1: Lattice, l2: Lattice) -> Lattice:
    if l1.ambient != l2.ambient:
        raise ValueError("ambient dimensions differ")
    if not l1.rows or not l2.rows:
        return Lattice.zero(l1.ambient)
    # common denominator d: compare integer lattices for (d/den_i)·rows_i
    d = lcm(l1.den, l2.den)
    rows1 = [tuple(x * (d // l1.den) for x in r) for r in l1.rows]
    rows2 = [tuple(x * (d // l2.den) for x in r) for r in l2.rows]
    stacked = mat_from_rows(rows1 + rows2)
    h, v = hnf_with_transform(stacked)
    k1 = len(rows1)
    inter = []
    for hr, vr in zip(h, v):
        if any(hr):
            continue
        # relation: sum vr[i]·stacked[i] = 0, so the l1-part lands in the intersection
        vec = [0] * l1.ambient
        for i in range(k1):
            if vr[i]:
                for t in range(l1.ambient):
                    vec[t] += vr[i] * rows1[i][t]
        inter.append(tuple(vec))
    return Lattice.from_rows([tuple(Fraction(x, d) for x in r) for r in inter], l1.ambient) \
        if inter else Lattice.zero(l1.ambient)


def lattice_index(l_big: Lattice, l_small: Lattice):
    """[l_big : l_small]; INFINITE_INDEX when the rank drops; NotContained if invalid."""
    if not l_big.contains_lattice(l_small):
        raise NotContained("second lattice is not contained in the first")
    if l_small.rank < l_big.rank:
        return INFINITE_INDEX
    coords = lattice_coordinates(l_big, l_small)
    det = bareiss_det(coords)
    return abs(det)


def lattice_coordinates(l_big: Lattice, l_small: Lattice) -> Mat:
    """Integer matrix R with rows(l_small) = R·rows(l_big) (as rational bases)."""
    big = l_big.basis_fractions()
    out = []
    for r in l_small.rows:
        v = tuple(Fraction(x, l_small.den) for x in r)
        sol = solve_left(big, v)
        if sol is None:
            raise NotContained("vector outside the big lattice's span")
        row = []
        for x in sol:
            if x.denominator != 1:
                raise NotContained("non-integral coordinates")
            row.append(x.numerator)
        out.append(tuple(row))
    return tuple(out)


def saturate(l: Lattice, within: Lattice | None = None) -> Lattice:
    """Smallest lattice containing l whose quotient by l is torsion (pure closure).

    With `within`, returns span_Q(l) ∩ within; otherwise span_Q(l) ∩ Z^n.
    """
    if not l.rows:
        return Lattice.zero(l.ambient)
    d, p, q = snf_with_transform(l.rows)
    qinv = mat_to_int(mat_inverse(q))
    sat_rows = [qinv[i] for i in range(len(l.rows))]
    sat = Lattice.from_rows(sat_rows, l.ambient)
    if within is not None:
        sat = lattice_intersect(sat, within)
    return sat


def lattice_membership(v, l: Lattice) -> bool:
    return l.contains_vector(v)


def lll_reduce(rows, delta=Fraction(3, 4)) -> tuple:
    """Exact LLL reduction of independent integer rows (rational arithmetic).

    Returns a basis of the same lattice with short, nearly orthogonal rows;
    used to make element enumerations over skew ideal bases effective.
    """
    b = [list(map(int, r)) for r in rows]
    n = len(b)
    if n <= 1:
        return tuple(tuple(r) for r in b)

    def dot(u, v):
        return sum(x * y for x, y in zip(u, v))

    def gram_schmidt():
        star = []
        mu = [[Fraction(0)] * n for _ in range(n)]
        norms = []
        for i in range(n):
            v = [Fraction(x) for x in b[i]]
            for j in range(i):
                mu[i][j] = Fraction(dot(b[i], star[j])) / norms[j] if norms[j] else Fraction(0)
                v = [x - mu[i][j] * y for x, y in zip(v, star[j])]
            star.append(v)
            norms.append(dot(v, v))
        return star, mu, norms

    star, mu, norms = gram_schmidt()
    k = 1
    guard = 0
    while k < n:
        guard += 1
        if guard > 10000:
            break
        for j in range(k - 1, -1, -1):
            q = mu[k][j]
            r = int(q + Fraction(1, 2)) if q >= 0 else -int(-q + Fraction(1, 2))
            if r:
                b[k] = [x - r * y for x, y in zip(b[k], b[j])]
        star, mu, norms = gram_schmidt()
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            b[k], b[k - 1] = b[k - 1], b[k]
            star, mu, norms = gram_schmidt()
            k = max(k - 1, 1)
    return tuple(tuple(r) for r in b)


# ---------------------------------------------------------------------------
# abelian quotients

@dataclass(frozen=True)
class AbelianQuotient:
    """The group l_big/l_small with explicit lift/projection maps.

    invariant_factors lists the torsion factors d_1 | d_2 | ... (each > 1)
    followed by one 0 per free factor.  Coordinates of a quotient element are
    integers; torsion coordinates are canonical representatives mod d_i.
    """

    big: Lattice
    small: Lattice
    invariant_factors: tuple
    _gens: Mat          # rows: ambient (rational) vectors mapping to the coordinate generators
    _big_basis: Mat     # rational basis of big used for projection
    _proj: Mat          # coordinate matrix: big-basis coords -> quotient coords (pre-reduction)

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    @property
    def torsion_order(self) -> int:
        t = 1
        for d in self.invariant_factors:
            if d:
                t *= d
        return t

    def is_finite(self) -> bool:
        return self.rank == 0

    def order(self) -> int:
        if not self.is_finite():
            raise ValueError("quotient is infinite")
        return self.torsion_order

    def reduce(self, coords) -> tuple:
        out = []
        for x, d in zip(coords, self.invariant_factors):
            out.append(x % d if d else x)
        return tuple(out)

    def project(self, v) -> tuple:
        sol = solve_left(self._big_basis, tuple(Fraction(x) for x in v))
        if sol is None:
            raise NotContained("vector not in the big lattice's span")
        ints = []
        for x in sol:
            if x.denominator != 1:
                raise NotContained("vector not in the big lattice")
            ints.append(x.numerator)
        coords = vec_mat(tuple(ints), self._proj)
        return self.reduce(coords)

    def lift(self, coords) -> tuple:
        v = [Fraction(0)] * self.big.ambient
        for c, g in zip(coords, self._gens):
            if c:
                for t in range(self.big.ambient):
                    v[t] += c * g[t]
        return tuple(v)

    def elements(self):
        """All elements (as coordinate tuples); quotient must be finite."""
        if not self.is_finite():
            raise ValueError("quotient is infinite")

        def rec(i, acc):
            if i == len(self.invariant_factors):
                yield tuple(acc)
                return
            for x in range(self.invariant_factors[i]):
                acc.append(x)
                yield from rec(i + 1, acc)
                acc.pop()

        yield from rec(0, [])

    def action_matrix(self, amb_mat: Mat) -> Mat:
        """Induced action on quotient coordinates (free quotients only)."""
        if self.torsion_order != 1:
            raise ValueError("induced matrices only supported on free quotients")
        rows = []
        for g in self._gens:
            img = vec_mat(g, amb_mat)
            rows.append(self.project(img))
        return tuple(rows)


def quotient_group(l_big: Lattice, l_small: Lattice) -> AbelianQuotient:
    if not l_big.contains_lattice(l_small):
        raise NotContained("quotient requires l_small <= l_big")
    kb = l_big.rank
    big_basis = l_big.basis_fractions()
    if kb == 0:
        return AbelianQuotient(l_big, l_small, (), (), (), ())
    if l_small.rank == 0:
        rel = zeros(1, kb)
    else:
        rel = lattice_coordinates(l_big, l_small)
    d, p, q = snf_with_transform(rel)
    ks = len(rel)
    diag = [d[i][i] for i in range(min(ks, kb))]
    diag += [0] * (kb - len(diag))
    # adapted basis of big: rows of q^{-1}·big_basis; l_small = <diag_i * c_i>
    qinv = mat_inverse(q)
    adapted = mat_mul(qinv, big_basis)
    factors = []
    gens = []
    proj_cols = []
    for i, di in enumerate(diag):
        if di == 1:
            continue
        factors.append(di)
        gens.append(tuple(adapted[i]))
        proj_cols.append(i)
    # order: torsion (already divisibility-sorted by SNF) then free (di == 0)
    order = sorted(range(len(factors)), key=lambda t: (factors[t] == 0, 0))
    factors_sorted = tuple(factors[t] for t in order)
    gens_sorted = tuple(gens[t] for t in order)
    cols_sorted = [proj_cols[t] for t in order]
    # projection: big-basis coords a -> adapted coords a·q, keep selected columns
    proj = tuple(tuple(row[c] for c in cols_sorted) for row in q)
    return AbelianQuotient(l_big, l_small, factors_sorted, gens_sorted, big_basis, proj)


# ---------------------------------------------------------------------------
# integer linear systems

def solve_left_int(a: Mat, v: Vec):
    """One integer solution x of x·a = v, or None.  a's rows need not be independent."""
    h, t = hnf_with_transform(a)
    piv = {}
    for i, row in enumerate(h):
        for j, x in enumerate(row):
            if x:
                piv[j] = i
                break
    vec = list(v)
    n = len(vec)
    y = [0] * len(h)
    j = 0
    while j < n:
        if vec[j] == 0:
            j += 1
            continue
        if j not in piv:
            return None
        i = piv[j]
        if vec[j] % h[i][j] != 0:
            return None
        q = vec[j] // h[i][j]
        y[i] = q
        vec = [x - q * z for x, z in zip(vec, h[i])]
    if any(vec):
        return None
    return vec_mat(tuple(y), t)
