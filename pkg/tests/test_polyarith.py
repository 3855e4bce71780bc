"""Polynomial arithmetic, factorisation, and matrix decompositions."""

import random
from fractions import Fraction

from intconj import exactlin as ex
from intconj import polyarith as pa


def brute_force_factor(f, coeff_bound=20):
    """Oracle: search monic integer factors of small degree directly."""
    from itertools import product
    f = pa.pol_trim(f)
    deg = pa.pol_deg(f)
    for d in range(1, deg // 2 + 1):
        for tail in product(range(-coeff_bound, coeff_bound + 1), repeat=d):
            cand = tuple(tail) + (1,)
            q, r = pa.pol_divmod(f, cand)
            if not r and all(Fraction(c).denominator == 1 for c in q):
                return cand, tuple(int(Fraction(c)) for c in q)
    return None


class TestBasics:
    def test_divmod_roundtrip(self):
        rng = random.Random(3)
        for _ in range(30):
            p = tuple(rng.randint(-5, 5) for _ in range(rng.randint(1, 6)))
            q = tuple(rng.randint(-5, 5) for _ in range(rng.randint(1, 4)))
            if not any(q):
                continue
            quo, rem = pa.pol_divmod(p, q)
            assert pa.pol_add(pa.pol_mul(quo, q), rem) == pa.pol_trim(
                tuple(Fraction(c) for c in p))

    def test_squarefree_part(self):
        assert pa.squarefree_part((1, -2, 1)) == (Fraction(-1), Fraction(1))  # (x-1)^2
        assert pa.squarefree_part((5, 0, 1)) == (Fraction(5), Fraction(0), Fraction(1))
        # (x^2+1)^3 (x-2) -> (x^2+1)(x-2) via an explicit gcd oracle
        f = pa.pol_mul(pa.pol_mul(pa.pol_mul((1, 0, 1), (1, 0, 1)), (1, 0, 1)), (-2, 1))
        sf = pa.squarefree_part(f)
        expected = pa.pol_monic(pa.pol_mul((1, 0, 1), (-2, 1)))
        assert sf == expected


class TestFactorisation:
    def test_x4_minus_1(self):
        fac = pa.factor_over_q((-1, 0, 0, 0, 1))
        assert fac.unit == 1
        assert set(fac.factors) == {((-1, 1), 1), ((1, 1), 1), ((1, 0, 1), 1)}
        # cross-check the quadratic factor is irreducible by brute force
        assert brute_force_factor((1, 0, 1)) is None

    def test_degree5_square(self):
        f5 = (1, -3, 0, 0, 16, 1)  # x^5 + 16x^4 - 3x + 1
        f = pa.pol_mul(f5, f5)
        fac = pa.factor_over_q(f)
        assert fac.factors == ((f5, 2),)

    def test_two_factor_product(self):
        f1 = (2, 0, 0, 0, 1)
        f2 = (1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 1)
        fac = pa.factor_over_q(pa.pol_mul(f1, f2))
        assert set(f for f, _ in fac.factors) == {f1, f2}

    def test_remultiplication_random(self):
        rng = random.Random(9)
        for _ in range(25):
            f = tuple(rng.randint(-6, 6) for _ in range(rng.randint(2, 8)))
            if not any(f):
                continue
            fac = pa.factor_over_q(f)
            assert pa.pol_trim(tuple(Fraction(c) for c in fac.expand())) == \
                pa.pol_trim(tuple(Fraction(c) for c in f))


class TestMinCharPoly:
    def test_companion(self):
        f = (5, 0, 1)
        c = pa.companion(f)
        assert pa.minimal_polynomial(c) == pa.pol_monic(f)
        assert pa.characteristic_polynomial(c) == pa.pol_monic(f)

    def test_identity(self):
        i3 = ex.identity(3)
        assert pa.minimal_polynomial(i3) == (Fraction(-1), Fraction(1))
        cp = pa.characteristic_polynomial(i3)
        assert cp == pa.pol_monic(pa.pol_mul(pa.pol_mul((-1, 1), (-1, 1)), (-1, 1)))

    def test_substitution_oracle(self):
        t = ((-5, 8, -5), (4, -7, 5), (1, -2, 2))
        m = pa.minimal_polynomial(t)
        assert ex.mat_eq_zero(pa.mat_eval_poly(m, t))
        cp = pa.characteristic_polynomial(t)
        q, r = pa.pol_divmod(cp, m)
        assert not r

    def test_min_divides_char_random(self):
        rng = random.Random(1)
        for _ in range(15):
            n = rng.randint(2, 4)
            a = tuple(tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(n))
            m = pa.minimal_polynomial(a)
            c = pa.characteristic_polynomial(a)
            _, r = pa.pol_divmod(c, m)
            assert not r
            assert ex.mat_eq_zero(pa.mat_eval_poly(m, a))


class TestRationalConjugacy:
    def test_self(self):
        a = pa.companion((5, 0, 1))
        x = pa.rational_conjugacy(a, a)
        assert x is not None

    def test_witness_against_planted(self):
        a = pa.companion((5, 0, 1))
        u = ((1, 2), (0, 1))
        b = ex.mat_mul(ex.mat_mul(u, a), ex.mat_inverse(u))
        x = pa.rational_conjugacy(a, b)
        assert x is not None
        xinv = ex.mat_inverse(x)
        assert ex.mat_eq_zero(ex.mat_sub(ex.mat_mul(ex.mat_mul(x, a), xinv), b))

    def test_distinct_char_polys(self):
        assert pa.rational_conjugacy(pa.companion((5, 0, 1)),
                                     pa.companion((1, 0, 1))) is None

    def test_random_unimodular_roundtrip(self):
        rng = random.Random(42)
        found = 0
        for _ in range(100):
            n = rng.randint(2, 3)
            a = tuple(tuple(rng.randint(-4, 4) for _ in range(n)) for _ in range(n))
            x = [list(r) for r in ex.identity(n)]
            for _ in range(6):
                i, j = rng.randrange(n), rng.randrange(n)
                if i != j:
                    c = rng.choice([-1, 1])
                    for t in range(n):
                        x[i][t] += c * x[j][t]
            x = tuple(tuple(r) for r in x)
            b = ex.mat_mul(ex.mat_mul(x, a), ex.mat_inverse(x))
            w = pa.rational_conjugacy(a, b)
            assert w is not None
            winv = ex.mat_inverse(w)
            assert ex.mat_eq_zero(ex.mat_sub(ex.mat_mul(ex.mat_mul(w, a), winv), b))
            found += 1
        assert found == 100


class TestJordanChevalley:
    def test_diagonalizable(self):
        t = ((1, 0), (0, 2))
        s, u = pa.jordan_chevalley(t)
        assert ex.mat_eq_zero(u)
        assert ex.mat_eq_zero(ex.mat_sub(s, t))

    def test_jordan_block(self):
        s, u = pa.jordan_chevalley(((1, 1), (0, 1)))
        assert s == ex.identity(2)
        assert u == ((0, 1), (0, 0))

    def test_scalar_plus_nilpotent(self):
        h = Fraction(1, 2)
        s, u = pa.jordan_chevalley(((h, 1), (0, h)))
        assert s == ((h, 0), (0, h))
        assert u == ((0, 1), (0, 0))

    def test_random_exact_properties(self):
        rng = random.Random(2)
        checked = 0
        for _ in range(60):
            n = rng.randint(2, 4)
            t = tuple(tuple(rng.randint(-5, 5) for _ in range(n)) for _ in range(n))
            s, u = pa.jordan_chevalley(t)
            assert ex.mat_eq_zero(ex.mat_sub(ex.mat_add(s, u), t))
            assert ex.mat_mul(s, u) == ex.mat_mul(u, s)
            assert ex.mat_eq_zero(ex.mat_pow(u, n))
            ms = pa.minimal_polynomial(s)
            assert ms == pa.squarefree_part(ms)
            checked += 1
        assert checked == 60


class TestIntegralScaling:
    def test_integral_input(self):
        t = ((1, 1), (0, 1))
        k, kt, kth = pa.integral_scaling(t, t)
        assert k == 1 and kt == t

    def test_half(self):
        h = Fraction(1, 2)
        t = ((h, 1), (0, h))
        k, kt, _ = pa.integral_scaling(t, t)
        assert k == 2
        assert kt == ((1, 2), (0, 1))

    def test_mixed_denominators(self):
        a = ((Fraction(1, 2), 0), (0, Fraction(1, 2)))
        b = ((Fraction(1, 3), 0), (0, Fraction(1, 3)))
        k, _, _ = pa.integral_scaling(a, b)
        assert k == 6
