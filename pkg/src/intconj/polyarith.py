"""Exact univariate polynomial arithmetic over Z and Q.

Polynomials are tuples of coefficients in ascending degree order (ints or
Fractions).  Includes factorisation over Q (certified), minimal and
characteristic polynomials, rational conjugacy with witnesses, and the
additive Jordan-Chevalley decomposition by Newton iteration.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from . import exactlin as ex
from .exactlin import Mat, mat_mul, mat_add, mat_sub, mat_scale, identity, zeros

Poly = tuple


# ---------------------------------------------------------------------------
# basic polynomial arithmetic

def pol_trim(p) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def pol_deg(p: Poly) -> int:
    return len(p) - 1  # zero polynomial gets degree -1


def pol_add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return pol_trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0)
                     for i in range(n)])


def pol_sub(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return pol_trim([(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0)
                     for i in range(n)])


def pol_mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return pol_trim(out)


def pol_scale(p: Poly, s) -> Poly:
    return pol_trim([c * s for c in p])


def pol_divmod(p: Poly, q: Poly):
    """Division with remainder over Q (exact Fractions)."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = [Fraction(c) for c in p]
    quo = [Fraction(0)] * max(0, len(p) - len(q) + 1)
    dq = len(q) - 1
    lead = Fraction(q[-1])
    while len(rem) - 1 >= dq and any(rem):
        if rem[-1] == 0:
            rem.pop()
            continue
        k = len(rem) - 1 - dq
        f = rem[-1] / lead
        quo[k] = f
        for i in range(len(q)):
            rem[k + i] -= f * q[i]
        rem.pop()
    return pol_trim(quo), pol_trim(rem)


def pol_monic(p: Poly) -> Poly:
    if not p:
        return p
    lead = Fraction(p[-1])
    return tuple(Fraction(c) / lead for c in p)


def pol_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd over Q."""
    a, b = pol_trim(p), pol_trim(q)
    while b:
        _, r = pol_divmod(a, b)
        a, b = b, r
    return pol_monic(a) if a else ()


def pol_deriv(p: Poly) -> Poly:
    return pol_trim([i * c for i, c in enumerate(p)][1:])


def pol_eval(p: Poly, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def pol_primitive(p: Poly):
    """(content, primitive part) for integer polynomials, positive leading coeff."""
    p = pol_trim(p)
    if not p:
        return 0, ()
    g = 0
    for c in p:
        g = gcd(g, int(c))
    if p[-1] < 0:
        g = -g
    return g, tuple(int(c) // g for c in p)


def pol_int(p: Poly) -> Poly:
    """Cast rational coefficients that are integral to ints."""
    out = []
    for c in p:
        f = Fraction(c)
        if f.denominator != 1:
            raise ValueError("polynomial is not integral")
        out.append(f.numerator)
    return tuple(out)


def squarefree_part(f: Poly) -> Poly:
    """Product of the distinct irreducible factors: f / gcd(f, f')."""
    f = pol_trim(f)
    if not f:
        raise ValueError("zero polynomial")
    g = pol_gcd(f, pol_deriv(f))
    q, r = pol_divmod(f, g)
    assert not r
    return pol_monic(q)


def companion(f: Poly) -> Mat:
    """Companion matrix (row-action convention) of a monic polynomial."""
    f = pol_monic(f)
    n = len(f) - 1
    rows = []
    for i in range(n - 1):
        rows.append(tuple(1 if j == i + 1 else 0 for j in range(n)))
    last = tuple(-Fraction(f[j]) for j in range(n))
    if all(c.denominator == 1 for c in last):
        last = tuple(c.numerator for c in last)
        rows = [tuple(int(x) for x in r) for r in rows]
    rows.append(last)
    return tuple(rows)


def mat_eval_poly(p: Poly, a: Mat) -> Mat:
    """p(a) by Horner's rule."""
    n = len(a)
    acc = zeros(n, n)
    ident = identity(n)
    for c in reversed(p):
        acc = mat_mul(acc, a)
        if c:
            acc = mat_add(acc, mat_scale(ident, c))
    return acc


# ---------------------------------------------------------------------------
# factorisation over Q (backed by sympy, certified here)

@dataclass(frozen=True)
class Factorisation:
    unit: Fraction
    factors: tuple  # ((poly, multiplicity), ...) primitive integer polys, positive lead

    def expand(self) -> Poly:
        out: Poly = (self.unit,)
        for f, m in self.factors:
            for _ in range(m):
                out = pol_mul(out, f)
        return out


def factor_over_q(f: Poly) -> Factorisation:
    """Factor a nonzero integer polynomial into irreducibles over Q.

    The returned factors are primitive integer polynomials with positive
    leading coefficients (monic when the input is monic).  The product is
    re-expanded and compared with the input exactly.
    """
    import sympy

    f = pol_trim(f)
    if not f:
        raise ValueError("zero polynomial")
    fz = pol_int(f)
    x = sympy.Symbol("x")
    expr = sum(int(c) * x ** i for i, c in enumerate(fz))
    content, factor_list = sympy.factor_list(sympy.Poly(expr, x, domain="QQ"))
    factors = []
    unit = Fraction(sympy.Rational(content).p, sympy.Rational(content).q)
    for poly, mult in factor_list:
        coeffs = [Fraction(sympy.Rational(c).p, sympy.Rational(c).q)
                  for c in reversed(poly.all_coeffs())]
        den = lcm(*(c.denominator for c in coeffs))
        g, prim = pol_primitive(tuple(int(c * den) for c in coeffs))
        factors.append((prim, int(mult)))
        unit *= Fraction(g, den) ** int(mult)
    factors.sort(key=lambda fm: (pol_deg(fm[0]), fm[0]))
    result = Factorisation(unit, tuple(factors))
    check = result.expand()
    if pol_trim([Fraction(c) for c in check]) != pol_trim([Fraction(c) for c in f]):
        raise AssertionError("factorisation failed re-multiplication check")
    return result


# ---------------------------------------------------------------------------
# minimal / characteristic polynomials

def minimal_polynomial(a: Mat) -> Poly:
    """Monic minimal polynomial by Krylov spinning with exact lcm over Q."""
    n = len(a)
    m: Poly = (Fraction(1),)
    for start in range(n):
        # annihilator of e_start relative to the part already killed by m
        v = tuple(Fraction(int(i == start)) for i in range(n))
        v = tuple(ex.vec_mat(v, mat_eval_poly(m, a)))
        if all(c == 0 for c in v):
            continue
        rows = [v]
        while True:
            v = ex.vec_mat(v, a)
            sol = ex.solve_left(tuple(rows), v)
            if sol is not None:
                ann = [-c for c in sol] + [Fraction(1)]
                m = pol_mul(m, tuple(ann))
                break
            rows.append(v)
        if pol_deg(m) == n:
            break
    m = pol_monic(m)
    assert ex.mat_eq_zero(mat_eval_poly(m, a))
    return m


def characteristic_polynomial(a: Mat) -> Poly:
    """det(xI - a) by the Faddeev-LeVerrier recurrence, exact over Q."""
    n = len(a)
    cs = [Fraction(1)]
    nmat = identity(n)
    for k in range(1, n + 1):
        ak = mat_mul(a, nmat)
        tr = sum(Fraction(ak[i][i]) for i in range(n))
        ck = -tr / k
        cs.append(ck)
        nmat = mat_add(ak, mat_scale(identity(n), ck))
    return tuple(reversed(cs))  # ascending: cs holds leading-first coefficients


# ---------------------------------------------------------------------------
# rational conjugacy

def _rank_profile(a: Mat, factors) -> tuple:
    """Ranks of q(a)^j for each irreducible factor q; determines the Q-class."""
    n = len(a)
    profile = []
    for q, _mult in factors:
        qa = mat_eval_poly(q, a)
        power = qa
        ranks = []
        while True:
            r = ex.mat_rank(power)
            ranks.append(r)
            if r == 0 or (ranks[-1] == ranks[-2] if len(ranks) > 1 else False):
                break
            if len(ranks) > n:
                break
            power = mat_mul(power, qa)
        profile.append((q, tuple(ranks)))
    return tuple(profile)


def rationally_similar(a: Mat, b: Mat) -> bool:
    """Similarity over Q, decided by the invariant-factor data alone
    (characteristic/minimal polynomials and primary rank profiles)."""
    n = len(a)
    if len(b) != n:
        return False
    if pol_trim(characteristic_polynomial(a)) != pol_trim(characteristic_polynomial(b)):
        return False
    ma, mb = minimal_polynomial(a), minimal_polynomial(b)
    if ma != mb:
        return False
    den = 1
    for c in ma:
        den = lcm(den, Fraction(c).denominator)
    fz = tuple(int(Fraction(c) * den) for c in ma)
    facs = factor_over_q(fz).factors
    return _rank_profile(a, facs) == _rank_profile(b, facs)


def rational_conjugacy(a: Mat, b: Mat, seed: int = 0):
    """A matrix x with x·a·x^{-1} = b over Q, or None when none exists.

    The negative answer is certified by differing invariant-factor data
    (characteristic polynomial and rank profiles of the primary components);
    the positive answer ships an explicit verified witness.
    """
    n = len(a)
    if len(b) != n:
        return None
    ca, cb = characteristic_polynomial(a), characteristic_polynomial(b)
    if pol_trim(ca) != pol_trim(cb):
        return None
    ma, mb = minimal_polynomial(a), minimal_polynomial(b)
    if ma != mb:
        return None
    # scale to integer polynomials for factoring
    den = 1
    for c in ma:
        den = lcm(den, Fraction(c).denominator)
    fz = tuple(int(Fraction(c) * den) for c in ma)
    facs = factor_over_q(fz).factors
    if _rank_profile(a, facs) != _rank_profile(b, facs):
        return None
    # solution space of x·a = b·x
    nn = n * n
    eqs = []
    for i in range(n):
        for j in range(n):
            row = [0] * nn
            for p in range(n):
                for q in range(n):
                    coeff = (a[q][j] if p == i else 0) - (b[i][p] if q == j else 0)
                    if coeff:
                        row[p * n + q] = coeff
            eqs.append(tuple(row))
    basis = _rational_kernel(tuple(eqs))
    rng = random.Random(seed)
    for attempt in range(200):
        if attempt < len(basis):
            combo = [int(i == attempt) for i in range(len(basis))]
        else:
            combo = [rng.randint(-3, 3) for _ in basis]
        xflat = [sum(c * bv[t] for c, bv in zip(combo, basis)) for t in range(nn)]
        x = tuple(tuple(xflat[i * n + j] for j in range(n)) for i in range(n))
        try:
            xinv = ex.mat_inverse(x)
        except ZeroDivisionError:
            continue
        if ex.mat_eq_zero(mat_sub(mat_mul(mat_mul(x, a), xinv), b)):
            return x
    return None


def _rational_kernel(a_t: Mat) -> list:
    """Rows x with x·aᵀ-style system solved: kernel of the linear map given row-wise."""
    # a_t rows are the unknown-coefficient vectors; kernel over Q, integer-cleared
    m = [list(map(Fraction, row)) for row in a_t]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    piv = []
    r = 0
    for c in range(cols):
        pr = None
        for i in range(r, rows):
            if m[i][c] != 0:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        piv.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for ri, pc in enumerate(piv):
            v[pc] = -m[ri][fc]
        d = 1
        for x in v:
            d = lcm(d, x.denominator)
        basis.append([int(x * d) for x in v])
    return basis


# ---------------------------------------------------------------------------
# Jordan-Chevalley decomposition

def jordan_chevalley(t: Mat):
    """(s, u) with s semisimple, u nilpotent, t = s + u, su = us; all exact.

    Newton iteration on the squarefree part g of the minimal polynomial,
    carried out on polynomials modulo the minimal polynomial, so the number
    of matrix evaluations stays at ceil(log2 l) + 1.
    """
    n = len(t)
    m = minimal_polynomial(t)
    g = squarefree_part(m)
    if pol_deg(g) == pol_deg(m):
        u = zeros(n, n)
        return t, u
    # iterate a <- a - g(a)·g'(a)^{-1} in Q[x]/(m)
    a: Poly = (Fraction(0), Fraction(1))  # x
    steps = 0
    max_steps = pol_deg(m).bit_length() + 2
    while True:
        ga = _pol_compose_mod(g, a, m)
        if not ga:
            break
        dga = _pol_compose_mod(pol_deriv(g), a, m)
        inv = _pol_inverse_mod(dga, m)
        a = pol_sub(a, _pol_mul_mod(ga, inv, m))
        steps += 1
        if steps > max_steps:
            raise AssertionError("Newton iteration failed to converge")
    s = mat_eval_poly(a, t)
    u = mat_sub(t, s)
    # exact verification
    assert mat_mul(s, u) == mat_mul(u, s)
    assert ex.mat_eq_zero(ex.mat_pow(u, n))
    ms = minimal_polynomial(s)
    assert ms == squarefree_part(ms)
    return s, u


def _pol_mul_mod(p: Poly, q: Poly, m: Poly) -> Poly:
    _, r = pol_divmod(pol_mul(p, q), m)
    return r


def _pol_compose_mod(p: Poly, a: Poly, m: Poly) -> Poly:
    acc: Poly = ()
    for c in reversed(p):
        acc = _pol_mul_mod(acc, a, m)
        acc = pol_add(acc, (Fraction(c),))
    return acc


def _pol_inverse_mod(p: Poly, m: Poly) -> Poly:
    """Inverse of p modulo m over Q via the extended Euclidean algorithm."""
    r0, r1 = m, pol_trim(p)
    s0, s1 = (), (Fraction(1),)
    while r1:
        q, r = pol_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, pol_sub(s0, pol_mul(q, s1))
    if pol_deg(r0) != 0:
        raise ZeroDivisionError("element not invertible modulo m")
    inv_lead = Fraction(1) / Fraction(r0[0])
    return pol_scale(s0, inv_lead)


# ---------------------------------------------------------------------------
# integral scaling

def integral_scaling(t: Mat, t_hat: Mat):
    """Least k >= 1 making both Jordan-Chevalley parts of k·t and k·t_hat integral.

    Conjugacy in GL(n,Z) and the centraliser are unchanged by the scaling.
    """
    parts = []
    for m in (t, t_hat):
        s, u = jordan_chevalley(m)
        parts.append((s, u))
    k = 1
    for s, u in parts:
        k = lcm(k, ex.mat_denominator(s), ex.mat_denominator(u))
    kt = ex.mat_to_int(mat_scale(t, k)) if ex.mat_is_integral(mat_scale(t, k)) else mat_scale(t, k)
    kth = ex.mat_to_int(mat_scale(t_hat, k)) if ex.mat_is_integral(mat_scale(t_hat, k)) else mat_scale(t_hat, k)
    return k, kt, kth
