"""Free submodules of the level quotients and standard submodules with
prescribed associated indices, plus the counting and index laws.

Enumeration is deterministic: transversals and submodule lists are walked in
a fixed lexicographic/canonical-key order, results are deduplicated by the
canonical HNF lattice key, and the final cardinality is checked against the
counting formula at runtime.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import exactlin as ex
from . import numfield as nf
from . import plmod as pm
from .config import Budgets, default_budgets
from .errors import EnumerationBudgetExceeded
from .exactlin import Lattice


# ---------------------------------------------------------------------------
# invariant sublattice enumeration over F_p

def _span_mod_p(vectors, p: int):
    """Row space basis of vectors over F_p (reduced echelon)."""
    rows = [list(v) for v in vectors]
    basis = []
    for v in rows:
        v = [x % p for x in v]
        for b in basis:
            piv = next(i for i, x in enumerate(b) if x)
            if v[piv]:
                f = v[piv]
                v = [(x - f * y) % p for x, y in zip(v, b)]
        if any(v):
            piv = next(i for i, x in enumerate(v) if x)
            inv = pow(v[piv], -1, p)
            v = [(x * inv) % p for x in v]
            basis.append(v)
    basis.sort(key=lambda b: next(i for i, x in enumerate(b) if x))
    return basis


def _generated_submodule_mod_p(v, mats, p: int):
    """Span of v under the (commuting) matrices over F_p."""
    basis = _span_mod_p([v], p)
    frontier = [v]
    while frontier:
        new = []
        for w in frontier:
            for m in mats:
                img = [sum(w[t] * m[t][j] for t in range(len(w))) % p
                       for j in range(len(w))]
                trial = _span_mod_p(basis + [img], p)
                if len(trial) > len(basis):
                    basis = trial
                    new.append(img)
        frontier = new
    return basis


def _polmul_mod_p(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def _poldivmod_mod_p(a, b, p):
    a = list(a)
    binv = pow(b[-1], -1, p)
    quo = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        k = len(a) - len(b)
        f = a[-1] * binv % p
        quo[k] = f
        for i in range(len(b)):
            a[k + i] = (a[k + i] - f * b[i]) % p
        a.pop()
    while a and a[-1] == 0:
        a.pop()
    return quo, a


def _polgcd_mod_p(a, b, p):
    a, b = list(a), list(b)
    while b:
        _, r = _poldivmod_mod_p(a, b, p)
        a, b = b, r
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _minpoly_mod_p(x_mat, p):
    """Minimal polynomial of a matrix over F_p (ascending coefficients)."""
    dim = len(x_mat)
    m = [1]
    for start in range(dim):
        v = [int(i == start) for i in range(dim)]
        # apply current m
        acc = [0] * dim
        w = list(v)
        for c in m:
            if c:
                acc = [(a + c * b) % p for a, b in zip(acc, w)]
            w = [sum(w[t] * x_mat[t][j] for t in range(dim)) % p for j in range(dim)]
        v = acc
        if not any(v):
            continue
        rows = [v]
        anns = None
        while True:
            v = [sum(v[t] * x_mat[t][j] for t in range(dim)) % p for j in range(dim)]
            sol = _solve_mod_p(rows, v, p)
            if sol is not None:
                ann = [(-c) % p for c in sol] + [1]
                m = _polmul_mod_p(m, ann, p)
                break
            rows.append(v)
    return m


def _solve_mod_p(rows, v, p):
    """Coefficients c with sum c_i rows_i = v over F_p, or None."""
    k = len(rows)
    n = len(v)
    aug = [[rows[i][j] for i in range(k)] + [v[j]] for j in range(n)]
    piv = []
    r = 0
    for c in range(k):
        pr = None
        for i in range(r, n):
            if aug[i][c] % p:
                pr = i
                break
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [x * inv % p for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] % p:
                f = aug[i][c]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[r])]
        piv.append(c)
        r += 1
    sol = [0] * k
    for i, c in enumerate(piv):
        sol[c] = aug[i][-1]
    for i in range(r, n):
        if aug[i][-1] % p:
            return None
    return sol


def _matpoly_mod_p(poly, x_mat, p):
    dim = len(x_mat)
    acc = [[0] * dim for _ in range(dim)]
    for c in reversed(poly):
        acc = [[sum(acc[i][t] * x_mat[t][j] for t in range(dim)) % p
                for j in range(dim)] for i in range(dim)]
        if c:
            for i in range(dim):
                acc[i][i] = (acc[i][i] + c) % p
    return acc


def _factor_mod_p(poly, p):
    """Irreducible factors (ascending coefficient lists) of a poly over F_p."""
    import warnings

    import sympy
    x = sympy.Symbol("x")
    expr = sum(int(c) * x ** i for i, c in enumerate(poly))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        _, facs = sympy.factor_list(sympy.Poly(expr, x, modulus=p))
    out = []
    for f, mult in facs:
        coeffs = [int(c) % p for c in reversed(f.all_coeffs())]
        out.append((coeffs, int(mult)))
    return out


def _simple_dual_submodules(mats, x_mat, dim: int, p: int, cap: int):
    """Minimal nonzero invariant subspaces of the dual module over F_p.

    Every simple submodule over the (commutative) acting algebra contains a
    simple F_p[X]-submodule for the single generator X, and equals its closure
    under the full algebra; the F_p[X]-simples live inside the kernels of the
    irreducible factors of the minimal polynomial of X, as F_q-lines.
    """
    dual_mats = [tuple(zip(*m)) for m in mats]
    x_dual = tuple(zip(*x_mat))
    minpoly = _minpoly_mod_p(x_dual, p)
    spans = {}
    for g, _mult in _factor_mod_p(minpoly, p):
        gx = _matpoly_mod_p(g, x_dual, p)
        ker = nf._kernel_mod_p(gx, p)
        if not ker:
            continue
        deg = len(g) - 1
        # F_q-structure on the kernel: scalars act through powers of X
        basis_fq = []
        covered = []
        for v in ker:
            if _solve_mod_p(covered, list(v), p) is not None and covered:
                continue
            block = [list(v)]
            for _ in range(deg - 1):
                w = block[-1]
                block.append([sum(w[t] * x_dual[t][j] for t in range(dim)) % p
                              for j in range(dim)])
            basis_fq.append(block)
            covered.extend(block)
        s = len(basis_fq)
        n_lines = sum(p ** (deg * t) for t in range(s))
        if n_lines > cap:
            raise EnumerationBudgetExceeded(
                f"{n_lines} F_q-lines exceed the cap {cap}")
        # projective representatives over F_q: v = b_i + sum_{j<i} c_j b_j
        for i in range(s):
            lead = basis_fq[i][0]
            coeff_space = product(*[product(range(p), repeat=deg)
                                    for _ in range(i)])
            for coeffs in coeff_space:
                v = list(lead)
                for j, cvec in enumerate(coeffs):
                    for tpow, a in enumerate(cvec):
                        if a:
                            w = basis_fq[j][tpow]
                            v = [(x + a * y) % p for x, y in zip(v, w)]
                span = _generated_submodule_mod_p(v, dual_mats, p)
                spans[tuple(tuple(r) for r in span)] = span
    minimal = []
    vals = list(spans.values())
    for s_ in vals:
        if not any(t is not s_ and len(t) < len(s_) and _span_contains(s_, t, p)
                   for t in vals):
            minimal.append(s_)
    return minimal


def _span_contains(big, small, p: int) -> bool:
    merged = _span_mod_p(big + small, p)
    return len(merged) == len(big)


def _kernel_of_functionals(functionals, dim: int, p: int):
    """{w in F_p^dim : w·f = 0 for all f} as an echelon basis."""
    rows = [[f[j] % p for j in range(dim)] for f in functionals]
    # solve w·rowsᵀ = 0: kernel of the matrix whose columns are the functionals
    mat = [tuple(rows[i][j] for i in range(len(rows))) for j in range(dim)]
    aug = [list(mat[j]) + [int(j == t) for t in range(dim)] for j in range(dim)]
    ncols = len(rows)
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, dim):
            if aug[i][c] % p:
                piv = i
                break
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [(x * inv) % p for x in aug[r]]
        for i in range(dim):
            if i != r and aug[i][c] % p:
                f = aug[i][c]
                aug[i] = [(x - f * y) % p for x, y in zip(aug[i], aug[r])]
        r += 1
    return [row[ncols:] for row in aug[r:]]


def _maximal_invariant_sublattices(w: Lattice, okmod: nf.OkModule, p: int, cap: int):
    """Maximal O_K-invariant sublattices of w with p-power index (above p·w)."""
    k = w.rank
    acts_w = [nf.induced_matrix(w, a) for a in okmod.acts]
    x_coords = nf.poly_to_elem(okmod.order, (0, 1)) if okmod.order.degree > 1 else (1,)
    x_w = None
    for c, a in zip(x_coords, acts_w):
        ci = int(Fraction(c))
        if ci:
            term = ex.mat_scale(a, ci)
            x_w = term if x_w is None else ex.mat_add(x_w, term)
    if x_w is None:
        x_w = ex.zeros(k, k)
    out = []
    for simple in _simple_dual_submodules(acts_w, x_w, k, p, cap):
        ker = _kernel_of_functionals(simple, k, p)
        rows = [tuple(int(x) for x in v) for v in ker]
        rows += [tuple(p * int(i == j) for i in range(k)) for j in range(k)]
        sub_coords = Lattice.from_rows(rows, k)
        amb_rows = ex.mat_mul(sub_coords.basis_fractions(), w.basis_fractions())
        out.append(Lattice.from_rows(amb_rows, w.ambient))
    return out


def _submodules_of_prime_power_index(start: Lattice, okmod: nf.OkModule,
                                     p: int, a: int, budgets: Budgets):
    """All O_K-invariant sublattices of `start` of index p^a."""
    cap = budgets.enum_max
    results = {}
    layer = {start.key(): start}
    for _step in range(a):
        nxt = {}
        for lat in layer.values():
            idx_so_far = ex.lattice_index(start, lat)
            for sub in _maximal_invariant_sublattices(lat, okmod, p, cap):
                idx = ex.lattice_index(start, sub)
                if idx > p ** a or (p ** a) % idx != 0:
                    continue
                if idx == p ** a:
                    results[sub.key()] = sub
                elif idx > idx_so_far:
                    nxt[sub.key()] = sub
                if len(results) + len(nxt) > cap:
                    raise EnumerationBudgetExceeded(
                        f"more than {cap} submodules at prime {p}")
        layer = nxt
        if not layer:
            break
    return list(results.values())


def invariant_sublattices_of_index(start: Lattice, okmod: nf.OkModule, v: int,
                                   budgets: Budgets | None = None):
    """All O_K-invariant sublattices of the given index, via CRT over primes."""
    budgets = budgets or default_budgets()
    if v == 1:
        return [start]
    factors = nf.factor_int(v, budgets)
    per_prime = []
    for p, a in sorted(factors.items()):
        per_prime.append(_submodules_of_prime_power_index(start, okmod, p, a, budgets))
    combined = per_prime[0]
    for nxt in per_prime[1:]:
        merged = {}
        for l1 in combined:
            for l2 in nxt:
                inter = ex.lattice_intersect(l1, l2)
                merged[inter.key()] = inter
        combined = list(merged.values())
        if len(combined) > budgets.enum_max:
            raise EnumerationBudgetExceeded("CRT combination exceeded the cap")
    for lat in combined:
        assert ex.lattice_index(start, lat) == v
    return sorted(combined, key=lambda l: l.key())


# ---------------------------------------------------------------------------
# Algorithm I.1: free submodules of the level quotients

@dataclass(frozen=True)
class FreeLevelChoice:
    """A free O_K-submodule of Q_i(M), as its pullback to K_i(M)."""

    level: int
    index: int            # h_i = [Q_i : R_i]
    pullback: Lattice     # preimage of R_i in K_i(M); contains L_i(M)
    basis_vectors: tuple  # ambient lifts of a free O_K-basis of R_i


class Flags:
    """Completeness bookkeeping: once any search is marked incomplete, every
    negative verdict downstream degrades to 'unknown'."""

    def __init__(self):
        self.entries: dict = {}

    def mark(self, name: str, ok: bool):
        self.entries[name] = self.entries.get(name, True) and ok

    @property
    def all_ok(self) -> bool:
        return all(self.entries.values())

    def failing(self):
        return sorted(k for k, v in self.entries.items() if not v)

    def merge(self, other: "Flags"):
        for k, v in other.entries.items():
            self.mark(k, v)


def free_submodules_of_index(m: pm.PlModule, i: int, h: int,
                             budgets: Budgets | None = None,
                             flags: Flags | None = None):
    """All free O_K-submodules of index h in Q_i(M) (Algorithm I.1, one level)."""
    budgets = budgets or default_budgets()
    s = m.series
    lhat, tq = pm.torsion_data(m, i)
    t = tq.order()
    if h % t != 0:
        return []
    v = h // t
    r = s.type[i - 1]
    if r == 0:
        if v != 1:
            return []
        return [FreeLevelChoice(i, h, s.l_(i), ())]
    qm = pm.free_quotient_module(m, s.k(i), lhat)
    dim = qm.okmod.dim
    std = Lattice.standard(dim)
    subs = invariant_sublattices_of_index(std, qm.okmod, v, budgets)
    torsion_lifts = [tq.lift(c) for c in tq.elements()]
    out = []
    count_free = 0
    for w in subs:
        wmod = nf.restrict_module(qm.okmod, w)
        dec = nf.steinitz_decompose(wmod, budgets)
        if dec.free_basis is None:
            if not dec.certified:
                if flags is None:
                    raise EnumerationBudgetExceeded(
                        "uncertified freeness verdict during submodule enumeration")
                flags.mark("free-submodule-enumeration", False)
            continue
        count_free += 1
        # free basis vectors back in quotient coordinates, then lifted to K_i
        basis_q = [ex.vec_mat(b, w.basis_fractions()) for b in dec.free_basis]
        lifts = []
        for b in basis_q:
            vlift = qm.lift(b)
            assert all(Fraction(c).denominator == 1 for c in vlift)
            lifts.append(tuple(int(Fraction(c)) for c in vlift))
        for shift in product(torsion_lifts, repeat=r):
            vecs = tuple(
                tuple(int(Fraction(a) + Fraction(bc)) for a, bc in zip(base, extra))
                for base, extra in zip(lifts, shift)
            )
            span = _ok_span_ambient(m, vecs)
            pull = ex.lattice_sum(span, s.l_(i))
            idx = ex.lattice_index(s.k(i), pull)
            assert idx == h, "pullback index mismatch in the torsion-lift loop"
            out.append(FreeLevelChoice(i, h, pull, vecs))
    dedup = {}
    for choice in out:
        dedup[choice.pullback.key()] = choice
    result = sorted(dedup.values(), key=lambda ch: ch.pullback.key())
    assert len(result) == count_free * (t ** r), \
        "lift count does not match u·t^r"
    return result


def _ok_span_ambient(m: pm.PlModule, vectors) -> Lattice:
    """Z-span of the O_K-orbit of the vectors, in ambient coordinates."""
    rows = [ex.vec_mat(v, a) for v in vectors for a in m.ok_actions]
    if not rows:
        return Lattice.zero(m.n)
    return Lattice.from_rows(rows, m.n)


# ---------------------------------------------------------------------------
# Algorithms I.2 / I.3

@dataclass(frozen=True)
class StandardSubmodule:
    module: pm.PlModule       # the submodule, sharing the parent's actions
    seq: pm.StdGenSeq
    indices: tuple            # associated indices (h_1, ..., h_l)

    @property
    def lattice(self) -> Lattice:
        return self.module.lattice


def sequences_of_free_submodules(m: pm.PlModule, hs,
                                 budgets: Budgets | None = None,
                                 flags: Flags | None = None):
    budgets = budgets or default_budgets()
    assert len(hs) == m.l
    per_level = []
    for i in range(1, m.l + 1):
        level = free_submodules_of_index(m, i, hs[i - 1], budgets, flags)
        if not level:
            return []
        per_level.append(level)
    seqs = [tuple(combo) for combo in product(*per_level)]
    if len(seqs) > budgets.enum_max:
        raise EnumerationBudgetExceeded("too many free-submodule sequences")
    return seqs


def _seed_standard_submodule(m: pm.PlModule, seq) -> pm.PlModule:
    vectors = []
    for choice in seq:
        vectors.extend(choice.basis_vectors)
    lat = pm.spanned_submodule(m, vectors)
    return m.with_lattice(lat)


def _transversal_vectors(big: Lattice, small: Lattice):
    quo = ex.quotient_group(big, small)
    out = []
    for coords in quo.elements():
        v = quo.lift(coords)
        out.append(tuple(int(Fraction(c)) for c in v))
    return out


def standard_submodules_for_sequence(m: pm.PlModule, seq,
                                     budgets: Budgets | None = None):
    """All standard submodules associated with one sequence (Algorithm I.2)."""
    budgets = budgets or default_budgets()
    s = m.series
    rtype = s.type
    hs = tuple(choice.index for choice in seq)
    current = {_seed_key(m, seq): _seed_standard_submodule(m, seq)}

    # first loop: shift the levels above i by a transversal of R_i in K_i(M)
    for i in range(m.l, 0, -1):
        choice = seq[i - 1]
        trans = _transversal_vectors(s.k(i), choice.pullback)
        exponent = sum(rtype[j - 1] for j in range(i + 1, m.l + 1))
        if len(trans) == 1 or exponent == 0:
            continue
        if len(trans) ** exponent > budgets.enum_max:
            raise EnumerationBudgetExceeded("transversal loop A blow-up")
        nxt = {}
        for sub in current.values():
            fseq = pm.standard_gen_seq(sub, budgets)
            shift_space = [list(product(trans, repeat=rtype[j - 1]))
                           for j in range(i + 1, m.l + 1)]
            for shifts in product(*shift_space):
                new_levels = list(fseq.levels)
                for off, j in enumerate(range(i + 1, m.l + 1)):
                    new_levels[j - 1] = tuple(
                        tuple(a + b for a, b in zip(vec, tvec))
                        for vec, tvec in zip(fseq.levels[j - 1], shifts[off]))
                vectors = [v for lv in new_levels for v in lv]
                lat = pm.spanned_submodule(m, vectors)
                nxt[lat.key()] = m.with_lattice(lat)
        current = nxt

    # second loop: shift the levels >= i by a transversal of L_i(S)+K_{i-1} in L_i(M)
    for i in range(m.l, 0, -1):
        exponent = sum(rtype[j - 1] for j in range(i, m.l + 1))
        if exponent == 0:
            continue
        nxt = {}
        for sub in current.values():
            ssub = sub.series
            small = ex.lattice_sum(ssub.l_(i), s.k(i - 1))
            trans = _transversal_vectors(s.l_(i), small)
            if len(trans) == 1:
                nxt[sub.lattice.key()] = sub
                continue
            if len(trans) ** exponent > budgets.enum_max:
                raise EnumerationBudgetExceeded("transversal loop B blow-up")
            fseq = pm.standard_gen_seq(sub, budgets)
            shift_space = [list(product(trans, repeat=rtype[j - 1]))
                           for j in range(i, m.l + 1)]
            for shifts in product(*shift_space):
                new_levels = list(fseq.levels)
                for off, j in enumerate(range(i, m.l + 1)):
                    new_levels[j - 1] = tuple(
                        tuple(a + b for a, b in zip(vec, tvec))
                        for vec, tvec in zip(fseq.levels[j - 1], shifts[off]))
                vectors = [v for lv in new_levels for v in lv]
                lat = pm.spanned_submodule(m, vectors)
                nxt[lat.key()] = m.with_lattice(lat)
        current = nxt

    out = []
    for sub in current.values():
        st = pm.standardness(sub, budgets)
        assert st.is_standard, "transversal loop produced a non-standard module"
        idx = associated_indices(m, sub)
        assert idx == hs, "transversal loop changed the associated indices"
        out.append(StandardSubmodule(sub, st.seq, idx))
    out.sort(key=lambda t: t.lattice.key())
    expected = standard_count_formula(hs, rtype)
    assert len(out) == expected, (
        f"enumerated {len(out)} standard submodules, counting law says {expected}")
    return out


def _seed_key(m: pm.PlModule, seq):
    return _seed_standard_submodule(m, seq).lattice.key()


def standard_submodules_with_indices(m: pm.PlModule, hs,
                                     budgets: Budgets | None = None,
                                     flags: Flags | None = None):
    """Algorithm I.3: union over all free-submodule sequences, deduplicated."""
    budgets = budgets or default_budgets()
    out = {}
    for seq in sequences_of_free_submodules(m, hs, budgets, flags):
        for sub in standard_submodules_for_sequence(m, seq, budgets):
            out[sub.lattice.key()] = sub
        if len(out) > budgets.enum_max:
            raise EnumerationBudgetExceeded("standard submodule list exceeded cap")
    return sorted(out.values(), key=lambda t: t.lattice.key())


def associated_indices(m: pm.PlModule, sub: pm.PlModule) -> tuple:
    """h_i = [Q_i(M) : image of Q_i(S)], with the product law verified."""
    s = m.series
    ssub = sub.series
    hs = []
    for i in range(1, m.l + 1):
        img = ex.lattice_sum(ssub.k(i), s.l_(i))
        h = ex.lattice_index(s.k(i), img)
        assert h is not ex.INFINITE_INDEX
        hs.append(int(h))
    total = ex.lattice_index(m.lattice, sub.lattice)
    prod = 1
    for k, h in enumerate(hs, start=1):
        prod *= h ** k
    assert total == prod, "index law [M:S] = prod h_k^k failed"
    return tuple(hs)


def standard_count_formula(hs, rs) -> int:
    """The number of standard submodules per free-submodule sequence."""
    l = len(hs)
    total = 1
    for i in range(1, l + 1):
        num = 1
        prod_h = 1
        for j in range(i, l + 1):
            prod_h *= hs[j - 1]
        exp = sum(rs[j - 1] for j in range(i, l + 1))
        num = prod_h ** exp
        den = hs[i - 1] ** rs[i - 1]
        assert num % den == 0
        total *= num // den
    return total


def min_index_standard_submodule(m: pm.PlModule,
                                 budgets: Budgets | None = None,
                                 flags: Flags | None = None) -> StandardSubmodule:
    """One standard submodule of minimal index (minimal per-level free parts)."""
    budgets = budgets or default_budgets()
    st = pm.standardness(m, budgets)
    if st.is_standard:
        return StandardSubmodule(m, st.seq, (1,) * m.l)
    if not st.certified and flags is not None:
        flags.mark("min-index-minimality", False)
    s = m.series
    vectors = []
    for i in range(1, m.l + 1):
        if s.type[i - 1] == 0:
            continue
        lhat, _tq = pm.torsion_data(m, i)
        qm = pm.free_quotient_module(m, s.k(i), lhat)
        basis, _idx, cert = nf.free_submodule_min_index(qm.okmod, budgets)
        if not cert and flags is not None:
            flags.mark("min-index-minimality", False)
        for b in basis:
            vlift = qm.lift(b)
            assert all(Fraction(c).denominator == 1 for c in vlift)
            vectors.append(tuple(int(Fraction(c)) for c in vlift))
    lat = pm.spanned_submodule(m, vectors)
    sub = m.with_lattice(lat)
    seq = pm.standard_gen_seq(sub, budgets)
    return StandardSubmodule(sub, seq, associated_indices(m, sub))
