"""Orders in number fields: maximal orders, ideal arithmetic, units, and
Steinitz decompositions of torsion-free modules.

An Order stores a Z-basis as rational coordinate rows over the power basis of
K = Q[x]/(P) together with its integer multiplication tensor.  Elements are
coordinate tuples over the order basis.  Ideals are HNF lattices in order
coordinates.  No class groups are ever computed: freeness questions are
settled by bounded principal-generator searches, exactly (and hence with a
certified negative) over Q and imaginary quadratic fields, and with an
explicit completeness flag elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm

import sympy

from . import exactlin as ex
from . import polyarith as pa
from .config import Budgets, default_budgets
from .errors import EnumerationBudgetExceeded, FactorisationTooHard
from .exactlin import Lattice, Mat


# ---------------------------------------------------------------------------
# budgeted integer factorisation

def factor_int(n: int, budgets: Budgets | None = None) -> dict:
    """Full prime factorisation {p: e} of |n|, or FactorisationTooHard."""
    budgets = budgets or default_budgets()
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor zero")
    out: dict = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    wi = 0
    while d * d <= n and d <= budgets.factor_trial_limit:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += wheel[wi]
        wi = (wi + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if m < budgets.factor_trial_limit ** 2 or sympy.isprime(m):
            out[m] = out.get(m, 0) + (1 if m > 1 else 0)
            continue
        f = _pollard_brent(m, budgets.factor_rho_iters)
        if f is None:
            raise FactorisationTooHard(n, m)
        stack.append(f)
        stack.append(m // f)
    out.pop(1, None)
    return out


def _pollard_brent(n: int, max_iters: int):
    if n % 2 == 0:
        return 2
    for c in (1, 3, 5, 7, 11):
        y, m = 2, 128
        g, r, q = 1, 1, 1
        x = ys = y
        iters = 0
        while g == 1 and iters < max_iters:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r <<= 1
            iters += r
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    return None


# ---------------------------------------------------------------------------
# orders

@dataclass(frozen=True)
class Order:
    """A Z-order in K = Q[x]/(poly), given by basis rows over the power basis."""

    poly: tuple          # monic irreducible ZPoly (ascending coefficients)
    basis: Mat           # e×e Fraction rows over the power basis
    mult: tuple          # mult[i][j] = integer coords of basis_i·basis_j
    traces: tuple        # Tr(basis_i)
    disc: int
    is_maximal: bool

    @property
    def degree(self) -> int:
        return len(self.poly) - 1

    def one(self) -> tuple:
        return poly_to_elem(self, (1,))

    def x_elem(self) -> tuple:
        return poly_to_elem(self, (0, 1))


def elem_to_poly(order: Order, coords) -> tuple:
    e = order.degree
    out = [Fraction(0)] * e
    for c, row in zip(coords, order.basis):
        if c:
            for t in range(e):
                out[t] += c * row[t]
    return pa.pol_trim(out)


def poly_to_elem(order: Order, poly) -> tuple:
    """Coordinates over the order basis; raises if not in the order's span lattice."""
    e = order.degree
    vec = tuple(Fraction(poly[i]) if i < len(poly) else Fraction(0) for i in range(e))
    sol = ex.solve_left(order.basis, vec)
    if sol is None:
        raise ValueError("polynomial outside the field presentation")
    return tuple(sol)


def elem_mul(order: Order, a, b) -> tuple:
    e = order.degree
    out = [0] * e
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod = order.mult[i][j]
                    f = ai * bj
                    for t in range(e):
                        if prod[t]:
                            out[t] += f * prod[t]
    return tuple(out)


def elem_mult_matrix(order: Order, a) -> Mat:
    """Rows: coords of basis_j·a, so vec·M = coords of (vec-element)·a."""
    e = order.degree
    rows = []
    for j in range(e):
        row = [0] * e
        for i, ai in enumerate(a):
            if ai:
                prod = order.mult[j][i]
                for t in range(e):
                    if prod[t]:
                        row[t] += ai * prod[t]
        rows.append(tuple(row))
    return tuple(rows)


def elem_norm(order: Order, a):
    m = elem_mult_matrix(order, a)
    if ex.mat_is_integral(m):
        return ex.bareiss_det(ex.mat_to_int(m))
    den = ex.mat_denominator(m)
    scaled = ex.mat_to_int(ex.mat_scale(m, den))
    return Fraction(ex.bareiss_det(scaled), den ** order.degree)


def elem_trace(order: Order, a):
    return sum(c * t for c, t in zip(a, order.traces))


def elem_inverse(order: Order, a) -> tuple:
    """Inverse in K, as (generally fractional) coordinates over the order basis."""
    apoly = elem_to_poly(order, a)
    inv = pa._pol_inverse_mod(apoly, tuple(Fraction(c) for c in order.poly))
    return poly_to_elem(order, inv)


def _power_basis_mult(poly) -> tuple:
    e = len(poly) - 1
    table = []
    for i in range(e):
        row = []
        for j in range(e):
            prod = [0] * (i + j) + [1]
            _, rem = pa.pol_divmod(prod, poly)
            row.append(tuple(int(Fraction(c)) for c in rem) + (0,) * (e - len(rem)))
        table.append(tuple(row))
    return tuple(table)


def _build_order(poly, basis_rows, is_maximal=False) -> Order:
    """Assemble an Order from basis rows over the power basis (must be closed)."""
    e = len(poly) - 1
    basis = tuple(tuple(Fraction(x) for x in r) for r in basis_rows)
    power_mult = _power_basis_mult(poly)

    def poly_mul_coords(u, v):
        out = [Fraction(0)] * e
        for i, ui in enumerate(u):
            if ui:
                for j, vj in enumerate(v):
                    if vj:
                        prod = power_mult[i][j]
                        f = ui * vj
                        for t in range(e):
                            if prod[t]:
                                out[t] += f * prod[t]
        return tuple(out)

    mult = []
    for i in range(e):
        row = []
        for j in range(e):
            prod_power = poly_mul_coords(basis[i], basis[j])
            sol = ex.solve_left(basis, prod_power)
            if sol is None or any(s.denominator != 1 for s in sol):
                raise ValueError("basis is not multiplicatively closed")
            row.append(tuple(s.numerator for s in sol))
        mult.append(tuple(row))
    mult = tuple(mult)
    # traces: Tr(basis_k) = trace of its multiplication matrix
    traces = []
    for k in range(e):
        tr = 0
        for j in range(e):
            tr += mult[j][k][j]
        traces.append(tr)
    traces = tuple(traces)
    gram = tuple(
        tuple(sum(c * t for c, t in zip(mult[i][j], traces)) for j in range(e))
        for i in range(e)
    )
    disc = ex.bareiss_det(gram)
    return Order(tuple(int(c) for c in poly), basis, mult, traces, int(disc), is_maximal)


def equation_order(poly) -> Order:
    """Z[x]/(P) with the power basis."""
    e = len(poly) - 1
    return _build_order(poly, ex.identity(e))


def _p_radical(order: Order, p: int) -> Lattice:
    """The radical of pO as a lattice in order coordinates (contains p·Z^e)."""
    e = order.degree
    q = p
    while q < e:
        q *= p
    # matrix of a -> a^q on O/pO (F_p-linear since q is a power of p)
    rows = []
    for k in range(e):
        result = None
        b = tuple(int(i == k) for i in range(e))
        ee = q
        while ee:
            if ee & 1:
                result = b if result is None else tuple(x % p for x in elem_mul(order, result, b))
            b = tuple(x % p for x in elem_mul(order, b, b))
            ee >>= 1
        rows.append(tuple(x % p for x in result))
    ker = _kernel_mod_p(rows, p)
    gens = [tuple(int(x) for x in v) for v in ker]
    gens += [tuple(p * int(i == j) for i in range(e)) for j in range(e)]
    return Lattice.from_rows(gens, e)


def _kernel_mod_p(rows, p: int) -> list:
    """Left kernel basis of the matrix over F_p: {v : v·rows = 0 mod p}."""
    n = len(rows)
    m = len(rows[0]) if n else 0
    aug = [[rows[i][j] % p for j in range(m)] + [int(i == k) for k in range(n)]
           for i, _ in enumerate(rows)]
    # row-reduce the coefficient part
    r = 0
    piv_cols = []
    for c in range(m):
        piv = None
        for i in range(r, n):
            if aug[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [(x * inv) % p for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] % p:
                f = aug[i][c]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    return [row[m:] for row in aug[r:]]


def _multiplier_ring(order: Order, rad: Lattice) -> Lattice:
    """{x in K : x·rad ⊆ rad} as a lattice in order coordinates."""
    e = order.degree
    result = None
    for gamma in rad.basis_fractions():
        ginv = elem_inverse(order, gamma)
        gmat = elem_mult_matrix(order, ginv)
        cand = Lattice.from_rows(ex.mat_mul(rad.basis_fractions(), gmat), e)
        result = cand if result is None else ex.lattice_intersect(result, cand)
    return result


_MAXIMAL_ORDER_CACHE: dict = {}


def maximal_order(poly, budgets: Budgets | None = None) -> Order:
    """The maximal order of Q[x]/(poly), by radical-multiplier enlargement.

    Raises FactorisationTooHard when the discriminant cannot be factored
    within budget (the enlargement loop needs the primes whose square divides
    the discriminant).
    """
    key = tuple(int(c) for c in poly)
    cached = _MAXIMAL_ORDER_CACHE.get(key)
    if cached is not None:
        return cached
    budgets = budgets or default_budgets()
    order = equation_order(poly)
    if order.degree == 1:
        return _build_order(poly, ((Fraction(1),),), is_maximal=True)
    factors = factor_int(order.disc, budgets)
    primes = sorted(p for p, k in factors.items() if k >= 2)
    for p in primes:
        while True:
            rad = _p_radical(order, p)
            bigger = _multiplier_ring(order, rad)
            std = Lattice.standard(order.degree)
            idx = ex.lattice_index(bigger, std)
            if idx == 1:
                break
            new_basis = ex.mat_mul(bigger.basis_fractions(), order.basis)
            order = _build_order(poly, new_basis)
    # canonical basis: HNF over power-basis coordinates
    lat = Lattice.from_rows(order.basis, order.degree)
    order = _build_order(poly, lat.basis_fractions(), is_maximal=True)
    _MAXIMAL_ORDER_CACHE[key] = order
    return order


def is_p_maximal(order: Order, p: int) -> bool:
    rad = _p_radical(order, p)
    bigger = _multiplier_ring(order, rad)
    return ex.lattice_index(bigger, Lattice.standard(order.degree)) == 1


# ---------------------------------------------------------------------------
# ideals

@dataclass(frozen=True)
class OrderIdeal:
    """A nonzero (possibly fractional) O-ideal as an HNF lattice in O-coords."""

    order: Order
    lattice: Lattice

    def norm(self):
        e = self.order.degree
        rows = self.lattice.rows
        assert len(rows) == e, "ideal lattice must have full rank"
        det = 1
        for i in range(e):
            det *= rows[i][_pivot_col(rows[i])]
        n = Fraction(abs(det), self.lattice.den ** e)
        return int(n) if n.denominator == 1 else n

    def is_integral(self) -> bool:
        return self.lattice.den == 1

    def elements_basis(self):
        return self.lattice.basis_fractions()


def _pivot_col(row) -> int:
    for j, x in enumerate(row):
        if x:
            return j
    raise ValueError("zero row in ideal basis")


def ideal_from_gens(order: Order, gens) -> OrderIdeal:
    rows = []
    e = order.degree
    for g in gens:
        gm = elem_mult_matrix(order, g)
        for k in range(e):
            basis_vec = tuple(int(i == k) for i in range(e))
            rows.append(ex.vec_mat(basis_vec, gm))
    lat = Lattice.from_rows(rows, e)
    return OrderIdeal(order, lat)


def unit_ideal(order: Order) -> OrderIdeal:
    return OrderIdeal(order, Lattice.standard(order.degree))


def principal_ideal(order: Order, a) -> OrderIdeal:
    return ideal_from_gens(order, [a])


def ideal_mul(i1: OrderIdeal, i2: OrderIdeal) -> OrderIdeal:
    assert i1.order is i2.order
    rows = []
    e = i1.order.degree
    b2 = i2.lattice.basis_fractions()
    for a in i1.lattice.basis_fractions():
        am = elem_mult_matrix(i1.order, a)
        for b in b2:
            rows.append(ex.vec_mat(b, am))
    return OrderIdeal(i1.order, Lattice.from_rows(rows, e))


def ideal_add(i1: OrderIdeal, i2: OrderIdeal) -> OrderIdeal:
    return OrderIdeal(i1.order, ex.lattice_sum(i1.lattice, i2.lattice))


def ideal_inverse(i: OrderIdeal) -> OrderIdeal:
    """(O : I) = ∩ O·γ^{-1} over a basis of I; the true inverse over a maximal order."""
    order = i.order
    e = order.degree
    result = None
    std_rows = ex.identity(e)
    for gamma in i.lattice.basis_fractions():
        ginv = elem_mult_matrix(order, elem_inverse(order, gamma))
        cand = Lattice.from_rows(ex.mat_mul(std_rows, ginv), e)
        result = cand if result is None else ex.lattice_intersect(result, cand)
    return OrderIdeal(order, result)


def ideal_norm(i: OrderIdeal):
    return i.norm()


# ---------------------------------------------------------------------------
# element enumeration and principality

def _box_vectors(rows, radius: int, cap: int, skip_zero=True):
    """Integer combinations of the given rows with coefficients in [-radius, radius].

    Yields (coeff_tuple, vector).  Raises EnumerationBudgetExceeded past cap.
    """
    k = len(rows)
    count = 0
    coeffs = [0] * k

    def rec(i):
        nonlocal count
        if i == k:
            if skip_zero and all(c == 0 for c in coeffs):
                return
            count += 1
            if count > cap:
                raise EnumerationBudgetExceeded(f"element box of size > {cap}")
            vec = tuple(sum(coeffs[t] * rows[t][j] for t in range(k))
                        for j in range(len(rows[0])))
            yield tuple(coeffs), vec
            return
        for c in range(-radius, radius + 1):
            coeffs[i] = c
            yield from rec(i + 1)
        coeffs[i] = 0

    yield from rec(0)


def _field_signature_negative(order: Order) -> bool:
    """True iff K is imaginary quadratic (degree 2, negative discriminant)."""
    return order.degree == 2 and order.disc < 0


def reduced_basis_rows(lat: Lattice):
    """LLL-short Fraction rows spanning the same lattice."""
    red = ex.lll_reduce(lat.rows)
    if lat.den == 1:
        return tuple(red)
    return tuple(tuple(Fraction(x, lat.den) for x in r) for r in red)


def _norm_int(order: Order, coords) -> int:
    """Norm of an element with integer coordinates (fast integer path)."""
    e = order.degree
    rows = []
    for j in range(e):
        row = [0] * e
        mj = order.mult[j]
        for i, ci in enumerate(coords):
            if ci:
                prod = mj[i]
                for tt in range(e):
                    if prod[tt]:
                        row[tt] += ci * prod[tt]
        rows.append(tuple(row))
    return ex.bareiss_det(tuple(rows))


def principal_generator(ideal: OrderIdeal, budgets: Budgets | None = None):
    """(alpha, certified): alpha generates the ideal, or (None, certified).

    certified=True means the answer is exact: a found generator is always
    certified; a failed search is certified only over Q and imaginary
    quadratic fields, where the norm form is positive definite and the
    search region provably covers all candidates.
    """
    budgets = budgets or default_budgets()
    order = ideal.order
    target = ideal.norm()
    tnum = Fraction(target)
    if order.degree == 1:
        g = ideal.lattice.basis_fractions()[0][0]
        return (g,), True
    if _field_signature_negative(order):
        alpha = _imag_quadratic_generator(ideal, tnum)
        return (alpha, True) if alpha is not None else (None, True)
    den = ideal.lattice.den
    rows_int = ex.lll_reduce(ideal.lattice.rows)
    target_int = tnum * den ** order.degree
    assert target_int.denominator == 1
    target_int = int(target_int)

    def as_fraction(vec):
        return tuple(Fraction(x, den) for x in vec) if den != 1 else tuple(vec)

    for row in rows_int:
        if abs(_norm_int(order, row)) == target_int:
            return as_fraction(row), True
    radius = 1
    while radius <= budgets.elem_radius:
        try:
            for _, vec in _box_vectors(rows_int, radius, budgets.elem_search_max):
                if abs(_norm_int(order, vec)) == target_int:
                    return as_fraction(vec), True
        except EnumerationBudgetExceeded:
            return None, False
        radius *= 2
    return None, False


def _imag_quadratic_generator(ideal: OrderIdeal, target: Fraction):
    """Exact principality for imaginary quadratic orders via the definite norm form."""
    order = ideal.order
    b, c = int(order.poly[1]), int(order.poly[0])
    # elements of the ideal lie in (1/f)·Z[x] with f = order_den · ideal_den;
    # the norm form is N(u + v·x) = u² - b·u·v + c·v² (root sum is -b)
    f_order = 1
    for row in order.basis:
        for val in row:
            f_order = lcm(f_order, Fraction(val).denominator)
    f = f_order * ideal.lattice.den
    ntar_f = target * f * f
    if ntar_f.denominator != 1:
        return None
    ntar = int(ntar_f)
    disc_form = b * b - 4 * c
    assert disc_form < 0
    vmax = isqrt(4 * ntar // (-disc_form)) + 1
    for v in range(-vmax, vmax + 1):
        # u² - b·u·v + (c·v² - ntar) = 0
        d = b * b * v * v - 4 * (c * v * v - ntar)
        if d < 0:
            continue
        s = isqrt(d)
        if s * s != d:
            continue
        for sgn in (1, -1):
            u2 = b * v + sgn * s
            if u2 % 2:
                continue
            u = u2 // 2
            if u == 0 and v == 0:
                continue
            # candidate (u + v·x)/f as (possibly fractional) order coords
            try:
                coords = poly_to_elem(order, (Fraction(u, f), Fraction(v, f)))
            except ValueError:
                continue
            if ideal.lattice.contains_vector(coords):
                return tuple(coords)
    return None


def inverse_class_small(ideal: OrderIdeal, budgets: Budgets | None = None):
    """(J, alpha) with I·J = (alpha) principal and J integral of small norm.

    alpha is an element of I of minimal absolute norm found inside the
    enumeration region; the product is certified by an exact lattice equality.
    """
    budgets = budgets or default_budgets()
    order = ideal.order
    n_i = Fraction(ideal.norm())
    den = ideal.lattice.den
    rows_int = ex.lll_reduce(ideal.lattice.rows)
    scale = Fraction(1, den ** order.degree)
    best = None
    best_norm = None
    for row in rows_int:
        nr = abs(_norm_int(order, row)) * scale
        if nr and (best_norm is None or nr < best_norm):
            best, best_norm = tuple(row), nr
    if best_norm != n_i:
        radius = 1
        while radius <= budgets.elem_radius:
            try:
                for _, vec in _box_vectors(rows_int, radius, budgets.elem_search_max):
                    nv = abs(_norm_int(order, vec)) * scale
                    if nv and (best_norm is None or nv < best_norm):
                        best, best_norm = tuple(vec), nv
            except EnumerationBudgetExceeded:
                break
            if best_norm == n_i:
                break
            radius *= 2
    if best is None:
        raise EnumerationBudgetExceeded("no nonzero element found in ideal box")
    alpha = tuple(Fraction(x, den) for x in best) if den != 1 else best
    inv = ideal_inverse(ideal)
    alpha_mat = elem_mult_matrix(order, alpha)
    j_lat = Lattice.from_rows(ex.mat_mul(inv.lattice.basis_fractions(), alpha_mat),
                              order.degree)
    j = OrderIdeal(order, j_lat)
    assert j.is_integral(), "alpha·I^{-1} must be integral"
    prod = ideal_mul(ideal, j)
    assert prod.lattice == principal_ideal(order, alpha).lattice, \
        "I·J is not the principal ideal (alpha)"
    return j, alpha


# ---------------------------------------------------------------------------
# unit groups

@dataclass(frozen=True)
class UnitGens:
    gens: tuple      # element coordinate tuples, -1 excluded
    complete: bool

    def with_minus_one(self, order: Order):
        minus = tuple(-c for c in order.one())
        return (minus,) + self.gens


def _pell_fundamental(d: int):
    """Fundamental solution of x² - d·y² = ±1 by the continued fraction of √d."""
    a0 = isqrt(d)
    assert a0 * a0 != d
    m, den, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    while p * p - d * q * q not in (1, -1):
        m = den * a - m
        den = (d - m * m) // den
        a = (a0 + m) // den
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
    return p, q


def _real_quadratic_fundamental(order: Order):
    """Fundamental unit of a real quadratic maximal order, as order coords."""
    d_field = order.disc
    if d_field % 4 == 0:
        d = d_field // 4
        x, y = _pell_fundamental(d)
        return _sqrt_combination(order, Fraction(x), Fraction(y, 2))
    d = d_field
    x1, y1 = _pell_fundamental(d)
    bound = x1 // isqrt(d) + y1 + 2
    for y in range(1, bound + 1):
        for sgn in (-4, 4):
            val = d * y * y + sgn
            if val <= 0:
                continue
            x = isqrt(val)
            if x * x == val:
                return _sqrt_combination(order, Fraction(x, 2), Fraction(y, 2))
    return _sqrt_combination(order, Fraction(x1), Fraction(y1))


def _sqrt_combination(order: Order, a: Fraction, b: Fraction):
    """Coordinates of a + b·√(disc_K) ... scaled to the true field square root."""
    bq, cq = int(order.poly[1]), int(order.poly[0])
    d0 = bq * bq - 4 * cq                      # disc of the defining polynomial
    dk = order.disc                            # field discriminant
    f2, rem = divmod(d0, dk)
    assert rem == 0
    f = isqrt(f2)
    assert f * f == f2
    # √dk = (2x + b)/f in K = Q[x]/(poly), using the same branch throughout
    u = a + b * Fraction(bq, f)
    v = b * Fraction(2, f)
    coords = poly_to_elem(order, (u, v))
    assert all(Fraction(c).denominator == 1 for c in coords)
    coords = tuple(int(c) for c in coords)
    assert abs(elem_norm(order, coords)) == 1
    return coords


def unit_gens(order: Order, budgets: Budgets | None = None) -> UnitGens:
    """Generators of the unit group (−1 implied) with a completeness flag.

    Complete for degree ≤ 2.  For higher degree the generators come from a
    bounded norm ±1 box enumeration and the flag is False.
    """
    budgets = budgets or default_budgets()
    e = order.degree
    if e == 1:
        return UnitGens((), True)
    if e == 2:
        if order.disc < 0:
            gens = []
            if order.disc == -4:
                gens.append(_root_of(order, (1, 0, 1)))       # i
            elif order.disc == -3:
                gens.append(_root_of(order, (1, -1, 1)))      # primitive 6th root
            return UnitGens(tuple(g for g in gens if g is not None), True)
        eps = _real_quadratic_fundamental(order)
        return UnitGens((eps,), True)
    found = {}
    one = tuple(int(Fraction(c)) for c in order.one())
    minus_one = tuple(-c for c in one)
    rows = ex.identity(e)
    radius = min(2, budgets.elem_radius)
    while radius <= budgets.elem_radius and len(found) < 16:
        try:
            for _, vec in _box_vectors(rows, radius, budgets.elem_search_max):
                if vec in (one, minus_one) or vec in found:
                    continue
                if abs(elem_norm(order, vec)) == 1:
                    inv = elem_inverse(order, vec)
                    inv = tuple(int(Fraction(c)) for c in inv)
                    neg = tuple(-c for c in vec)
                    neg_inv = tuple(-c for c in inv)
                    if inv in found or neg in found or neg_inv in found:
                        continue
                    found[vec] = True
        except EnumerationBudgetExceeded:
            break
        radius *= 2
    gens = sorted(found, key=lambda v: (max(abs(c) for c in v), v))[:12]
    return UnitGens(tuple(gens), False)


def _root_of(order: Order, poly):
    """An order element satisfying the given monic Z-polynomial, if one exists."""
    e = order.degree
    for _, vec in _box_vectors(ex.identity(e), 3, 10_000):
        val = _eval_elem_poly(order, poly, vec)
        if all(c == 0 for c in val):
            return tuple(vec)
    return None


def _eval_elem_poly(order: Order, poly, elem):
    acc = tuple(0 for _ in range(order.degree))
    one = order.one()
    for c in reversed(poly):
        acc = elem_mul(order, acc, elem)
        if c:
            acc = tuple(a + c * o for a, o in zip(acc, one))
    return tuple(acc)


# ---------------------------------------------------------------------------
# GL(r, O_K) generators

_EUCLIDEAN_IMAG_QUAD_DISCS = {-3, -4, -7, -8, -11}


@dataclass(frozen=True)
class GlGens:
    rank: int
    order: Order
    mats: tuple      # r×r matrices with element-coordinate entries
    complete: bool


def gl_gens(r: int, order: Order, budgets: Budgets | None = None) -> GlGens:
    """Generators for GL(r, O_K): elementaries over a Z-basis plus unit diagonals.

    The completeness flag is False exactly when the elementary generation of
    SL(2) is not guaranteed (imaginary quadratic non-Euclidean) or when the
    unit list itself is incomplete (degree ≥ 3 fields).
    """
    assert r >= 1
    budgets = budgets or default_budgets()
    e = order.degree
    units = unit_gens(order, budgets)
    one = tuple(int(Fraction(c)) for c in order.one())
    zero = (0,) * e

    def eye():
        return [[one if i == j else zero for j in range(r)] for i in range(r)]

    mats = []
    for u in units.with_minus_one(order):
        m = eye()
        m[0][0] = tuple(u)
        mats.append(tuple(tuple(row) for row in m))
    if r >= 2:
        for s in range(r):
            for t in range(r):
                if s == t:
                    continue
                for k in range(e):
                    m = eye()
                    m[s][t] = tuple(int(i == k) for i in range(e))
                    mats.append(tuple(tuple(row) for row in m))
    if r == 1:
        elementary_complete = True
    elif r >= 3 or e == 1:
        elementary_complete = True
    elif e == 2 and order.disc > 0:
        elementary_complete = True
    elif e == 2 and order.disc < 0:
        elementary_complete = order.disc in _EUCLIDEAN_IMAG_QUAD_DISCS
    else:
        elementary_complete = True  # infinitely many units: elementary generation holds
    return GlGens(r, order, tuple(mats), elementary_complete and units.complete)


# ---------------------------------------------------------------------------
# torsion-free O_K-modules (integral action, full rank lattice Z^dim)

@dataclass(frozen=True)
class OkModule:
    """Z^dim with an integral action of the order's basis elements."""

    order: Order
    dim: int
    acts: tuple  # one dim×dim integer matrix per order basis element

    @property
    def rank(self) -> int:
        assert self.dim % self.order.degree == 0
        return self.dim // self.order.degree

    def elem_action(self, coords) -> Mat:
        m = None
        for c, a in zip(coords, self.acts):
            if c:
                term = ex.mat_scale(a, c)
                m = term if m is None else ex.mat_add(m, term)
        if m is None:
            m = ex.zeros(self.dim, self.dim)
        return m


def submodule_span(mod: OkModule, vectors) -> Lattice:
    """The O_K-submodule (as a lattice) generated by the given vectors."""
    rows = []
    for v in vectors:
        for a in mod.acts:
            rows.append(ex.vec_mat(v, a))
    if not rows:
        return Lattice.zero(mod.dim)
    return Lattice.from_rows(rows, mod.dim)


def induced_matrix(basis_lat: Lattice, amb: Mat) -> Mat:
    """The action of amb restricted to the sublattice, in its basis coordinates."""
    rows = []
    bf = basis_lat.basis_fractions()
    for r in bf:
        img = ex.vec_mat(r, amb)
        sol = ex.solve_left(bf, img)
        assert sol is not None, "sublattice is not invariant"
        assert all(s.denominator == 1 for s in sol)
        rows.append(tuple(s.numerator for s in sol))
    return tuple(rows)


def restrict_module(mod: OkModule, sub: Lattice) -> OkModule:
    acts = tuple(induced_matrix(sub, a) for a in mod.acts)
    return OkModule(mod.order, sub.rank, acts)


def rank1_ideal(mod: OkModule, v0) -> OrderIdeal:
    """For a rank-1 module: the fractional ideal I with module = I·v0."""
    e = mod.order.degree
    b = tuple(ex.vec_mat(v0, a) for a in mod.acts)
    d, p, q = ex.snf_with_transform(b)
    rows = []
    for i in range(e):
        di = d[i][i]
        assert di != 0, "v0 does not span the module rationally"
        rows.append(tuple(Fraction(x, di) for x in p[i]))
    return OrderIdeal(mod.order, Lattice.from_rows(rows, e))


def _splitting(mod: OkModule, sub: Lattice, quo: ex.AbelianQuotient):
    """An O_K-linear integral section s of Z^dim -> Z^dim/sub (free quotient)."""
    dim = mod.dim
    qdim = quo.rank
    acts_q = [quo.action_matrix(a) for a in mod.acts]
    # unknowns: S (qdim×dim); equations: S·proj = I and A_q·S = S·A for each action
    cols = []
    rhs = []

    def unknown_index(i, j):
        return i * dim + j

    # S·P = I  where P[v] = proj coords of ambient basis vector v
    pmat = [quo.project(tuple(int(t == j) for t in range(dim))) for j in range(dim)]
    for i in range(qdim):
        for j in range(qdim):
            col = [0] * (qdim * dim)
            for t in range(dim):
                col[unknown_index(i, t)] = pmat[t][j]
            cols.append(col)
            rhs.append(int(i == j))
    for aq, a in zip(acts_q, mod.acts):
        for i in range(qdim):
            for j in range(dim):
                col = [0] * (qdim * dim)
                # (aq·S)[i][j] = sum_t aq[i][t]·S[t][j]
                for t in range(qdim):
                    if aq[i][t]:
                        col[unknown_index(t, j)] += aq[i][t]
                # (S·a)[i][j] = sum_t S[i][t]·a[t][j]
                for t in range(dim):
                    if a[t][j]:
                        col[unknown_index(i, t)] -= a[t][j]
                cols.append(col)
                rhs.append(0)
    amat = tuple(zip(*[tuple(c) for c in cols]))  # (qdim·dim) × num_eqs
    sol = ex.solve_left_int(amat, tuple(rhs))
    assert sol is not None, "integral splitting must exist for projective quotients"
    smat = tuple(tuple(sol[i * dim + j] for j in range(dim)) for i in range(qdim))
    return smat


def pseudo_basis(mod: OkModule) -> list:
    """[(ideal_i, v_i)] with the module equal to the direct sum of I_i·v_i."""
    e = mod.order.degree
    r = mod.rank
    if r == 1:
        v0 = tuple(int(i == 0) for i in range(mod.dim))
        return [(rank1_ideal(mod, v0), tuple(Fraction(c) for c in v0))]
    v0 = tuple(int(i == 0) for i in range(mod.dim))
    n1 = ex.saturate(submodule_span(mod, [v0]))
    quo = ex.quotient_group(Lattice.standard(mod.dim), n1)
    sub_mod = restrict_module(mod, n1)
    w0 = tuple(int(i == 0) for i in range(e))
    ideal1 = rank1_ideal(sub_mod, w0)
    v1 = n1.basis_fractions()[0]
    qmod = OkModule(mod.order, quo.rank, tuple(quo.action_matrix(a) for a in mod.acts))
    rest = pseudo_basis(qmod)
    smat = _splitting(mod, n1, quo)
    lifted = [(ideal, tuple(ex.vec_mat(u, smat))) for ideal, u in rest]
    return [(ideal1, tuple(Fraction(c) for c in v1))] + lifted


def pseudo_to_lattice(mod: OkModule, pairs) -> Lattice:
    rows = []
    for ideal, v in pairs:
        for lam in ideal.lattice.basis_fractions():
            rows.append(ex.vec_mat(v, mod.elem_action(lam)))
    return Lattice.from_rows(rows, mod.dim)


def _coprime_pair(mod: OkModule, ia: OrderIdeal, ib: OrderIdeal,
                  budgets: Budgets):
    """x ∈ Ia, y ∈ Ib with x·Ia⁻¹ + y·Ib⁻¹ = O, plus i', j' with x·i' + y·j' = 1."""
    order = mod.order
    e = order.degree
    ia_inv = ideal_inverse(ia)
    ib_inv = ideal_inverse(ib)
    std = Lattice.standard(e)

    def scaled(idl, elem):
        m = elem_mult_matrix(order, elem)
        return Lattice.from_rows(ex.mat_mul(idl.lattice.basis_fractions(), m), e)

    for radius in (1, 2, 4):
        try:
            for _, va in _box_vectors(ia.lattice.basis_fractions(), radius, 5000):
                for _, vb in _box_vectors(ib.lattice.basis_fractions(), radius, 5000):
                    la = scaled(ia_inv, va)
                    lb = scaled(ib_inv, vb)
                    if ex.lattice_sum(la, lb) == std:
                        # solve 1 = x·i' + y·j'
                        gens = list(la.basis_fractions()) + list(lb.basis_fractions())
                        den = 1
                        for row in gens:
                            for val in row:
                                den = lcm(den, Fraction(val).denominator)
                        int_gens = tuple(tuple(int(v * den) for v in row) for row in gens)
                        one = tuple(int(Fraction(c) * den) for c in order.one())
                        sol = ex.solve_left_int(int_gens, one)
                        assert sol is not None
                        ka = la.rank
                        iprime = [Fraction(0)] * e
                        jprime = [Fraction(0)] * e
                        for cidx, coef in enumerate(sol):
                            if not coef:
                                continue
                            row = gens[cidx]
                            tgt = iprime if cidx < ka else jprime
                            for t in range(e):
                                tgt[t] += coef * row[t]
                        return tuple(va), tuple(vb), tuple(iprime), tuple(jprime)
        except EnumerationBudgetExceeded:
            break
    raise EnumerationBudgetExceeded("no coprime pair found for ideal folding")


def steinitz_fold(mod: OkModule, pairs, budgets: Budgets | None = None):
    """Fold a pseudo-basis to (free vectors, final ideal, final vector)."""
    budgets = budgets or default_budgets()
    order = mod.order
    pairs = list(pairs)
    free_vectors = []
    while len(pairs) > 1:
        (ia, va), (ib, vb) = pairs[0], pairs[1]
        x, y, iprime, jprime = _coprime_pair(mod, ia, ib, budgets)
        e_vec = tuple(p + q for p, q in zip(ex.vec_mat(va, mod.elem_action(x)),
                                            ex.vec_mat(vb, mod.elem_action(y))))
        f_vec = tuple(q - p for p, q in zip(ex.vec_mat(va, mod.elem_action(jprime)),
                                            ex.vec_mat(vb, mod.elem_action(iprime))))
        iab = ideal_mul(ia, ib)
        old = pseudo_to_lattice(mod, [(ia, va), (ib, vb)])
        new = pseudo_to_lattice(mod, [(unit_ideal(order), e_vec), (iab, f_vec)])
        assert old == new, "pseudo-basis fold failed the lattice equality check"
        free_vectors.append(e_vec)
        pairs = [(iab, f_vec)] + pairs[2:]
    last_ideal, last_vec = pairs[0]
    return free_vectors, last_ideal, last_vec


@dataclass(frozen=True)
class SteinitzDecomposition:
    rank: int
    free_vectors: tuple      # r-1 module vectors spanning free summands
    ideal: OrderIdeal        # the Steinitz ideal
    ideal_vector: tuple      # vector v with the last summand = ideal·v
    free_basis: tuple | None # full free basis when the module is free
    certified: bool          # freeness verdict is exact


def steinitz_decompose(mod: OkModule, budgets: Budgets | None = None) -> SteinitzDecomposition:
    """Decompose a torsion-free module as O^{r-1} ⊕ I, deciding freeness."""
    budgets = budgets or default_budgets()
    pairs = pseudo_basis(mod)
    assert pseudo_to_lattice(mod, pairs) == Lattice.standard(mod.dim), \
        "pseudo-basis does not reconstruct the module"
    free_vecs, ideal, vec = steinitz_fold(mod, pairs, budgets)
    alpha, certified = principal_generator(ideal, budgets)
    if alpha is not None:
        last = ex.vec_mat(vec, mod.elem_action(alpha))
        basis = tuple(tuple(v) for v in free_vecs) + (tuple(last),)
        span = submodule_span(mod, basis)
        assert span == Lattice.standard(mod.dim), "free basis does not span the module"
        return SteinitzDecomposition(mod.rank, tuple(tuple(v) for v in free_vecs),
                                     ideal, tuple(vec), basis, True)
    return SteinitzDecomposition(mod.rank, tuple(tuple(v) for v in free_vecs),
                                 ideal, tuple(vec), None, certified)


def free_submodule_min_index(mod: OkModule, budgets: Budgets | None = None):
    """(basis vectors, index, certified): a free submodule of minimal index.

    Minimality is certified within the element-enumeration region; when the
    module is already free the module itself is returned with index 1.
    """
    budgets = budgets or default_budgets()
    dec = steinitz_decompose(mod, budgets)
    if dec.free_basis is not None:
        return dec.free_basis, 1, dec.certified
    j, alpha = inverse_class_small(dec.ideal, budgets)
    last = ex.vec_mat(dec.ideal_vector, mod.elem_action(alpha))
    basis = dec.free_vectors + (tuple(last),)
    span = submodule_span(mod, basis)
    idx = ex.lattice_index(Lattice.standard(mod.dim), span)
    expected = ideal_norm(j)
    assert idx == expected, "free submodule index does not match norm(J)"
    return basis, int(idx), dec.certified
