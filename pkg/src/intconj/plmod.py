"""Integral modules over truncated polynomial rings O[y]/(y^l).

A PlModule is a lattice in Q^n together with the commuting action matrices of
x (semisimple part) and y (nilpotent part); the maximal order of
K = Q[x]/(P) acts through rational matrices on the same ambient space.
Submodules share the ambient coordinates, so lattices double as canonical
orbit keys everywhere downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from math import lcm

from . import exactlin as ex
from . import numfield as nf
from . import polyarith as pa
from .config import Budgets, default_budgets
from .errors import EnumerationBudgetExceeded
from .exactlin import Lattice, Mat


@dataclass(frozen=True)
class PlModule:
    n: int
    xmat: Mat
    ymat: Mat
    l: int
    order: nf.Order       # equation order Z[x]/(P)
    okord: nf.Order       # maximal order of the same field
    lattice: Lattice

    @cached_property
    def ok_actions(self) -> tuple:
        """Ambient matrices of the maximal order's basis elements (rational)."""
        return tuple(pa.mat_eval_poly(w, self.xmat) for w in self.okord.basis)

    @cached_property
    def is_ok_integral(self) -> bool:
        return all(self._maps_into(a) for a in self.ok_actions)

    def _maps_into(self, amb: Mat) -> bool:
        img = self.lattice.apply(amb)
        return self.lattice.contains_lattice(img)

    @cached_property
    def series(self) -> "Series":
        return _compute_series(self)

    def with_lattice(self, lat: Lattice) -> "PlModule":
        return replace(self, lattice=lat)

    def module_type(self) -> tuple:
        return self.series.type


@dataclass(frozen=True)
class Series:
    """The y-kernel series and its refinements for one module."""

    ks: tuple        # K_0 .. K_l  (K_0 = 0, K_l = M)
    ls: tuple        # L_1 .. L_l
    qs: tuple        # AbelianQuotient K_i/L_i for i = 1..l
    type: tuple      # (r_1, ..., r_l)

    def k(self, i: int) -> Lattice:
        return self.ks[i]

    def l_(self, i: int) -> Lattice:
        return self.ls[i - 1]

    def q(self, i: int) -> ex.AbelianQuotient:
        return self.qs[i - 1]


def make_module(xmat: Mat, ymat: Mat, l: int, poly,
                budgets: Budgets | None = None,
                okord: nf.Order | None = None,
                lattice: Lattice | None = None) -> PlModule:
    """Assemble a module; poly is the (irreducible) minimal polynomial of xmat."""
    budgets = budgets or default_budgets()
    n = len(xmat)
    order = nf.equation_order(poly)
    if okord is None:
        okord = nf.maximal_order(poly, budgets)
    if lattice is None:
        lattice = Lattice.standard(n)
    assert ex.mat_mul(xmat, ymat) == ex.mat_mul(ymat, xmat)
    assert ex.mat_eq_zero(ex.mat_pow(ymat, l))
    return PlModule(n, xmat, ymat, l, order, okord, lattice)


def _compute_series(m: PlModule) -> Series:
    lat = m.lattice
    base = lat.basis_fractions()
    ks = [Lattice.zero(m.n)]
    ypow = ex.identity(m.n)
    for i in range(1, m.l + 1):
        ypow = ex.mat_mul(ypow, m.ymat)
        prod = ex.mat_mul(base, ypow)
        den = ex.mat_denominator(prod)
        prod_int = ex.mat_to_int(ex.mat_scale(prod, den)) if den != 1 else prod
        combos = ex.kernel_int(prod_int)
        rows = [ex.vec_mat(c, base) for c in combos]
        ks.append(Lattice.from_rows(rows, m.n) if rows else Lattice.zero(m.n))
    ks_full = tuple(ks) + (lat,)  # K_{l+1} = K_l = M

    def k_of(i: int) -> Lattice:
        return ks_full[i] if i <= m.l else lat

    ls = []
    qs = []
    rtype = []
    e = m.okord.degree
    for i in range(1, m.l + 1):
        li = ex.lattice_sum(k_of(i + 1).apply(m.ymat), k_of(i - 1))
        ls.append(li)
        q = ex.quotient_group(k_of(i), li)
        qs.append(q)
        assert q.rank % e == 0, "quotient rank is not a multiple of the field degree"
        rtype.append(q.rank // e)
    return Series(tuple(ks_full[: m.l + 1]), tuple(ls), tuple(qs), tuple(rtype))


def layer_lattice(m: PlModule, i: int, j: int) -> Lattice:
    """I_{i,j} = K_j·y^{j-i} + K_{i-1} for 1 <= i <= l, i <= j <= l+1."""
    s = m.series
    kj = s.k(min(j, m.l))
    ki1 = s.k(i - 1)
    img = kj.apply(ex.mat_pow(m.ymat, j - i))
    return ex.lattice_sum(img, ki1)


def kernel_series(m: PlModule) -> tuple:
    return m.series.ks


def layer_series(m: PlModule) -> tuple:
    return m.series.ls


def module_type(m: PlModule) -> tuple:
    return m.series.type


# ---------------------------------------------------------------------------
# quotients as O_K-modules

@dataclass(frozen=True)
class QuotientModule:
    """A free quotient K_i/L (torsion removed) packaged as an OkModule."""

    okmod: nf.OkModule
    quo: ex.AbelianQuotient

    def lift(self, coords) -> tuple:
        return self.quo.lift(coords)

    def project(self, v) -> tuple:
        return self.quo.project(v)


def free_quotient_module(m: PlModule, big: Lattice, small: Lattice) -> QuotientModule:
    """big/small as an OkModule; small must be saturated in big."""
    quo = ex.quotient_group(big, small)
    assert quo.torsion_order == 1, "quotient has torsion; saturate first"
    acts = tuple(quo.action_matrix(a) for a in m.ok_actions)
    return QuotientModule(nf.OkModule(m.okord, quo.rank, acts), quo)


def torsion_data(m: PlModule, i: int):
    """(saturated L̂_i, torsion quotient L̂_i/L_i) at level i."""
    s = m.series
    lhat = ex.saturate(s.l_(i), within=s.k(i))
    tq = ex.quotient_group(lhat, s.l_(i))
    return lhat, tq


# ---------------------------------------------------------------------------
# standardness

@dataclass(frozen=True)
class StdGenSeq:
    """Standard generating sequence: one tuple of ambient vectors per level."""

    levels: tuple  # levels[i-1] = vectors of F_i, each an ambient int vector

    def level(self, i: int) -> tuple:
        return self.levels[i - 1]

    def all_vectors(self):
        for lv in self.levels:
            yield from lv


@dataclass(frozen=True)
class Standardness:
    is_standard: bool
    certified: bool
    seq: StdGenSeq | None


def standardness(m: PlModule, budgets: Budgets | None = None) -> Standardness:
    """Decide standardness (every Q_i free over O_K) and build a generating
    sequence by pulling back free bases along the level projections."""
    budgets = budgets or default_budgets()
    cache = m.__dict__.setdefault("_standardness_cache", {})
    cached = cache.get(budgets.elem_radius)
    if cached is not None:
        return cached
    result = _standardness_uncached(m, budgets)
    cache[budgets.elem_radius] = result
    return result


def _standardness_uncached(m: PlModule, budgets: Budgets) -> Standardness:
    s = m.series
    levels = []
    for i in range(1, m.l + 1):
        q = s.q(i)
        if q.torsion_order != 1:
            return Standardness(False, True, None)
        if q.rank == 0:
            levels.append(())
            continue
        qm = free_quotient_module(m, s.k(i), s.l_(i))
        dec = nf.steinitz_decompose(qm.okmod, budgets)
        if dec.free_basis is None:
            return Standardness(False, dec.certified, None)
        vecs = []
        for b in dec.free_basis:
            v = qm.lift(b)
            assert all(Fraction(c).denominator == 1 for c in v)
            vecs.append(tuple(int(Fraction(c)) for c in v))
        levels.append(tuple(vecs))
    seq = StdGenSeq(tuple(levels))
    _verify_standard_seq(m, seq)
    return Standardness(True, True, seq)


def is_standard(m: PlModule, budgets: Budgets | None = None) -> bool:
    return standardness(m, budgets).is_standard


def standard_gen_seq(m: PlModule, budgets: Budgets | None = None) -> StdGenSeq:
    st = standardness(m, budgets)
    if not st.is_standard:
        if st.certified:
            raise AssertionError("module is not standard")
        raise EnumerationBudgetExceeded(
            "freeness could not be certified within the element search budget")
    return st.seq


def _verify_standard_seq(m: PlModule, seq: StdGenSeq):
    """The W_j spans must add up to M directly (rank count + index one)."""
    total_rank = 0
    acc = Lattice.zero(m.n)
    for j in range(1, m.l + 1):
        vecs = seq.level(j)
        if not vecs:
            continue
        wj = spanned_submodule(m, vecs)
        total_rank += len(vecs) * m.okord.degree * j
        acc = ex.lattice_sum(acc, wj)
    assert total_rank == m.lattice.rank, "standard sequence ranks do not add up"
    assert acc == m.lattice, "standard sequence does not generate the module"


def spanned_submodule(m: PlModule, vectors) -> Lattice:
    """Smallest sublattice containing the vectors, closed under O_K and y."""
    if not vectors:
        return Lattice.zero(m.n)
    current = Lattice.from_rows([tuple(v) for v in vectors], m.n)
    mats = list(m.ok_actions) + [m.ymat]
    while True:
        nxt = current
        for a in mats:
            nxt = ex.lattice_sum(nxt, current.apply(a))
        if nxt == current:
            return current
        current = nxt


# ---------------------------------------------------------------------------
# reduction to the maximal order

def max_ok_submodule(m: PlModule) -> PlModule:
    """The unique maximal P_l(O_K)-submodule of finite index, by the
    concatenated-action Smith construction; result verified closed."""
    assert m.lattice == Lattice.standard(m.n), "module must be in its own coordinates"
    if m.is_ok_integral:
        return m
    concat = []
    for i in range(m.n):
        row = []
        for a in m.ok_actions:
            row.extend(a[i])
        concat.append(tuple(row))
    c = tuple(concat)
    d = ex.mat_denominator(c)
    dc = ex.mat_to_int(ex.mat_scale(c, d))
    dd, p, q = ex.snf_with_transform(dc)
    rows = []
    for i in range(m.n):
        di = dd[i][i]
        ai = Fraction(di, d).denominator
        rows.append(tuple(ai * x for x in p[i]))
    lat = Lattice.from_rows(rows, m.n)
    sub = m.with_lattice(lat)
    assert sub.is_ok_integral, "constructed sublattice is not O_K-closed"
    assert sub._maps_into(m.ymat), "constructed sublattice is not y-closed"
    idx = ex.lattice_index(m.lattice, lat)
    assert idx is not ex.INFINITE_INDEX
    return sub
