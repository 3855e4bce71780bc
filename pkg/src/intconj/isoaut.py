"""Isomorphisms and automorphism generators for integral modules, plus the
lattice orbit-stabiliser engine with Schreier generators.

Module maps are rational matrices acting on ambient row vectors; every map is
verified at construction (exact commutation with both action matrices and the
exact lattice image), never trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import exactlin as ex
from . import numfield as nf
from . import plmod as pm
from . import stdsub as sd
from .config import Budgets, default_budgets
from .errors import OrbitBudgetExceeded
from .exactlin import Lattice, Mat
from .stdsub import Flags


@dataclass(frozen=True)
class ModuleMap:
    source: pm.PlModule
    target: pm.PlModule
    mat: Mat

    def __post_init__(self):
        assert ex.mat_eq_zero(ex.mat_sub(ex.mat_mul(self.source.xmat, self.mat),
                                         ex.mat_mul(self.mat, self.target.xmat))), \
            "map does not intertwine the x-actions"
        assert ex.mat_eq_zero(ex.mat_sub(ex.mat_mul(self.source.ymat, self.mat),
                                         ex.mat_mul(self.mat, self.target.ymat))), \
            "map does not intertwine the y-actions"
        img = self.source.lattice.apply(self.mat)
        assert self.target.lattice.contains_lattice(img), \
            "map does not send the source lattice into the target"

    @property
    def is_isomorphism(self) -> bool:
        return self.source.lattice.apply(self.mat) == self.target.lattice

    def then(self, other: "ModuleMap") -> "ModuleMap":
        assert self.target.lattice.ambient == other.source.lattice.ambient
        return ModuleMap(self.source, other.target, ex.mat_mul(self.mat, other.mat))

    def inverse(self) -> "ModuleMap":
        return ModuleMap(self.target, self.source, ex.mat_inverse(self.mat))


@dataclass(frozen=True)
class AutGens:
    module: pm.PlModule
    maps: tuple           # ModuleMap automorphisms
    complete: bool


# ---------------------------------------------------------------------------
# standard module maps from generator images

def _adapted_layout(m: pm.PlModule, seq: pm.StdGenSeq):
    """Row layout (level j, generator index, y-power k, basis index w)."""
    layout = []
    for j in range(1, m.l + 1):
        for fi in range(len(seq.level(j))):
            for k in range(j):
                for w in range(m.okord.degree):
                    layout.append((j, fi, k, w))
    return layout


def _adapted_rows(m: pm.PlModule, seq: pm.StdGenSeq, vectors_for=None):
    """Adapted basis rows; vectors_for overrides F-vectors by (level, index)."""
    acts = m.ok_actions
    ypows = [ex.identity(m.n)]
    for _ in range(m.l):
        ypows.append(ex.mat_mul(ypows[-1], m.ymat))
    rows = []
    for (j, fi, k, w) in _adapted_layout(m, seq):
        base = seq.level(j)[fi] if vectors_for is None else vectors_for[(j, fi)]
        v = ex.vec_mat(ex.vec_mat(base, acts[w]), ypows[k])
        rows.append(v)
    return tuple(rows)


def map_from_generator_images(src: pm.PlModule, src_seq: pm.StdGenSeq,
                              dst: pm.PlModule, images: dict) -> ModuleMap:
    """Extend F-vector images to a P_l(O_K)-linear map src -> dst.

    images maps (level, index) to a vector of dst; the extension sends
    f·w·y^k to image(f)·w·y^k, using dst's action matrices on the image side.
    """
    e_src = _adapted_rows(src, src_seq)
    acts = dst.ok_actions
    ypows = [ex.identity(dst.n)]
    for _ in range(dst.l):
        ypows.append(ex.mat_mul(ypows[-1], dst.ymat))
    img_rows = []
    for (j, fi, k, w) in _adapted_layout(src, src_seq):
        base = images[(j, fi)]
        img_rows.append(ex.vec_mat(ex.vec_mat(base, acts[w]), ypows[k]))
    g = ex.mat_mul(ex.mat_inverse(e_src), tuple(img_rows))
    return ModuleMap(src, dst, g)


def standard_isomorphism(n1: pm.PlModule, n2: pm.PlModule,
                         seq1: pm.StdGenSeq | None = None,
                         seq2: pm.StdGenSeq | None = None,
                         budgets: Budgets | None = None):
    """An isomorphism of standard modules, or None when the types differ."""
    budgets = budgets or default_budgets()
    if n1.module_type() != n2.module_type():
        return None
    seq1 = seq1 or pm.standard_gen_seq(n1, budgets)
    seq2 = seq2 or pm.standard_gen_seq(n2, budgets)
    images = {}
    for j in range(1, n1.l + 1):
        for fi, vec in enumerate(seq2.level(j)):
            images[(j, fi)] = vec
    iso = map_from_generator_images(n1, seq1, n2, images)
    assert iso.is_isomorphism, "standard generator bijection must give an isomorphism"
    return iso


def xi_automorphism(m: pm.PlModule, seq: pm.StdGenSeq, level: int,
                    gen_index: int, shift) -> ModuleMap:
    """The kernel automorphism sending one standard generator f to f + shift
    and fixing every other generator."""
    images = {}
    for j in range(1, m.l + 1):
        for fi, vec in enumerate(seq.level(j)):
            if j == level and fi == gen_index:
                images[(j, fi)] = tuple(a + b for a, b in zip(vec, shift))
            else:
                images[(j, fi)] = vec
    amap = map_from_generator_images(m, seq, m, images)
    assert amap.is_isomorphism
    return amap


def special_layer_generators(m: pm.PlModule, seq: pm.StdGenSeq, i: int):
    """The generating vectors of L_i(M) used for the kernel generators:
    S_1 ∪ ... ∪ S_{i-1} ∪ T_i with S_j = ∪_{k>=j} F_k·y^{k-j}."""
    ypows = [ex.identity(m.n)]
    for _ in range(m.l):
        ypows.append(ex.mat_mul(ypows[-1], m.ymat))

    def s_set(j):
        out = []
        for k in range(j, m.l + 1):
            for f in seq.level(k):
                out.append(ex.vec_mat(f, ypows[k - j]))
        return out

    def t_set(j):
        out = []
        for k in range(j + 1, m.l + 1):
            for f in seq.level(k):
                out.append(ex.vec_mat(f, ypows[k - j]))
        return out

    gens = []
    for j in range(1, i):
        gens.extend(s_set(j))
    gens.extend(t_set(i))
    return gens


def standard_aut_kernel_gens(m: pm.PlModule, seq: pm.StdGenSeq | None = None,
                             budgets: Budgets | None = None) -> AutGens:
    """Generators of the kernel of the action on the level quotients.

    Uses the special generating set of each L_i (images of higher standard
    generators under powers of y), multiplied through a Z-basis of O_K; an
    arbitrary generating set of L_i would be wrong here.
    """
    budgets = budgets or default_budgets()
    seq = seq or pm.standard_gen_seq(m, budgets)
    maps = []
    for i in range(1, m.l + 1):
        if not seq.level(i):
            continue
        layer_gens = special_layer_generators(m, seq, i)
        for fi in range(len(seq.level(i))):
            for g in layer_gens:
                for a in m.ok_actions:
                    shift = ex.vec_mat(g, a)
                    assert all(Fraction(c).denominator == 1 for c in map(Fraction, shift))
                    shift = tuple(int(Fraction(c)) for c in shift)
                    maps.append(xi_automorphism(m, seq, i, fi, shift))
    uniq = {}
    for amap in maps:
        key = tuple(tuple(Fraction(x) for x in row) for row in amap.mat)
        if key not in uniq and not _is_identity(amap.mat):
            uniq[key] = amap
    return AutGens(m, tuple(uniq.values()), True)


def standard_aut_image_gens(m: pm.PlModule, seq: pm.StdGenSeq | None = None,
                            budgets: Budgets | None = None) -> AutGens:
    """Automorphisms realising GL(r_j, O_K) on each level, identity elsewhere."""
    budgets = budgets or default_budgets()
    seq = seq or pm.standard_gen_seq(m, budgets)
    maps = []
    complete = True
    for j in range(1, m.l + 1):
        r = len(seq.level(j))
        if r == 0:
            continue
        gl = nf.gl_gens(r, m.okord, budgets)
        complete = complete and gl.complete
        for gmat in gl.mats:
            images = {}
            for jj in range(1, m.l + 1):
                for fi, vec in enumerate(seq.level(jj)):
                    if jj != j:
                        images[(jj, fi)] = vec
            for s in range(r):
                acc = None
                for t in range(r):
                    coords = gmat[s][t]
                    if all(c == 0 for c in coords):
                        continue
                    term = ex.vec_mat(seq.level(j)[t], _elem_ambient(m, coords))
                    acc = term if acc is None else tuple(x + y for x, y in zip(acc, term))
                images[(j, s)] = acc
            amap = map_from_generator_images(m, seq, m, images)
            assert amap.is_isomorphism
            if not _is_identity(amap.mat):
                maps.append(amap)
    return AutGens(m, tuple(maps), complete)


def _elem_ambient(m: pm.PlModule, coords) -> Mat:
    acc = None
    for c, a in zip(coords, m.ok_actions):
        if c:
            term = ex.mat_scale(a, c)
            acc = term if acc is None else ex.mat_add(acc, term)
    if acc is None:
        acc = ex.zeros(m.n, m.n)
    return acc


def _is_identity(mat: Mat) -> bool:
    n = len(mat)
    for i in range(n):
        for j in range(n):
            if Fraction(mat[i][j]) != (1 if i == j else 0):
                return False
    return True


def standard_aut_gens(m: pm.PlModule, seq: pm.StdGenSeq | None = None,
                      budgets: Budgets | None = None) -> AutGens:
    budgets = budgets or default_budgets()
    seq = seq or pm.standard_gen_seq(m, budgets)
    image = standard_aut_image_gens(m, seq, budgets)
    kernel = standard_aut_kernel_gens(m, seq, budgets)
    return AutGens(m, image.maps + kernel.maps, image.complete)


# ---------------------------------------------------------------------------
# orbit-stabiliser

@dataclass
class OrbitTable:
    seed: Lattice
    parents: dict        # lattice key -> (parent key, generator index); seed -> None
    lattices: dict       # lattice key -> Lattice

    def __contains__(self, lat: Lattice) -> bool:
        return lat.key() in self.parents

    def __len__(self) -> int:
        return len(self.parents)

    def word(self, lat: Lattice) -> tuple:
        """Generator indices applied to the seed to reach the given lattice."""
        out = []
        key = lat.key()
        while True:
            entry = self.parents[key]
            if entry is None:
                return tuple(reversed(out))
            parent, gidx = entry
            out.append(gidx)
            key = parent

    def transversal_matrix(self, lat: Lattice, gen_mats) -> Mat:
        n = self.seed.ambient
        g = ex.identity(n)
        for gidx in self.word(lat):
            g = ex.mat_mul(g, gen_mats[gidx])
        return g


def _int_scaled_matrix(g: Mat):
    """(integer matrix, denominator) pair for fast lattice application."""
    den = ex.mat_denominator(g)
    return ex.mat_to_int(ex.mat_scale(g, den)), den


def orbit_table(gen_mats, seed: Lattice, budget: int) -> OrbitTable:
    """Breadth-first orbit of the seed lattice under the generator images.

    The closure of a finite orbit under bijections is automatically closed
    under inverses, so only the given generators are applied.  Generator
    matrices are pre-scaled to integers so the hot loop is integer-only.
    """
    fast_gens = [_int_scaled_matrix(g) for g in gen_mats]
    parents = {seed.key(): None}
    lattices = {seed.key(): seed}
    queue = [seed]
    qi = 0
    while qi < len(queue):
        lat = queue[qi]
        qi += 1
        for gidx, (gi, gden) in enumerate(fast_gens):
            rows = ex.mat_mul(lat.rows, gi)
            img = Lattice.from_int_rows(rows, lat.ambient, lat.den * gden)
            k = img.key()
            if k not in parents:
                if len(parents) >= budget:
                    raise OrbitBudgetExceeded(
                        f"orbit exceeded the budget of {budget} lattices")
                parents[k] = (lat.key(), gidx)
                lattices[k] = img
                queue.append(img)
    return OrbitTable(seed, parents, lattices)


def schreier_stabilizer(table: OrbitTable, gen_mats) -> tuple:
    """Schreier generators of the stabiliser of the seed; tree edges skipped."""
    seed = table.seed
    fast_gens = [_int_scaled_matrix(g) for g in gen_mats]
    words = {seed.key(): ex.identity(seed.ambient)}
    order = sorted(table.lattices.values(), key=lambda l: len(table.word(l)))
    for lat in order:
        k = lat.key()
        if k not in words:
            parent, gidx = table.parents[k]
            words[k] = ex.mat_mul(words[parent], gen_mats[gidx])
    stab = {}
    for lat in order:
        for gidx, g in enumerate(gen_mats):
            gi, gden = fast_gens[gidx]
            img = Lattice.from_int_rows(ex.mat_mul(lat.rows, gi),
                                        lat.ambient, lat.den * gden)
            k = img.key()
            if table.parents[k] == (lat.key(), gidx):
                continue  # spanning tree edge: Schreier generator is trivial
            w = ex.mat_mul(ex.mat_mul(words[lat.key()], g),
                           ex.mat_inverse(words[k]))
            key = tuple(tuple(Fraction(x) for x in row) for row in w)
            if key not in stab and not _is_identity(w):
                assert seed.apply(w) == seed
                stab[key] = w
    return tuple(stab.values())


def orbit_stabilizer(gen_mats, seed: Lattice, budget: int):
    """Orbit table plus Schreier stabiliser matrices for the seed lattice."""
    table = orbit_table(gen_mats, seed, budget)
    return table, schreier_stabilizer(table, gen_mats)


# ---------------------------------------------------------------------------
# Algorithms II.1 / II.2 (modules over the maximal order)

@dataclass(frozen=True)
class IsoResult:
    map: ModuleMap | None
    reason: str
    certified: bool       # a negative answer is conclusive iff True


def _exponent_of_quotient(big: Lattice, small: Lattice) -> int:
    quo = ex.quotient_group(big, small)
    facs = [d for d in quo.invariant_factors if d != 0]
    assert quo.rank == 0, "quotient must be finite"
    return facs[-1] if facs else 1


def iso_over_maximal(m: pm.PlModule, m_hat: pm.PlModule,
                     budgets: Budgets | None = None,
                     flags: Flags | None = None) -> IsoResult:
    """Algorithm II.1: isomorphism of integral modules over the maximal order."""
    budgets = budgets or default_budgets()
    flags = flags if flags is not None else Flags()
    if m.module_type() != m_hat.module_type():
        return IsoResult(None, "type mismatch", True)
    n_std = sd.min_index_standard_submodule(m, budgets, flags)
    c = _exponent_of_quotient(m.lattice, n_std.lattice)
    cm = m.lattice.scaled(c)
    cm_hat = m_hat.lattice.scaled(c)
    candidates = sd.standard_submodules_with_indices(m_hat, n_std.indices,
                                                     budgets, flags)
    if not candidates:
        return IsoResult(None, "no standard submodules with matching indices",
                         flags.all_ok)
    auts = standard_aut_gens(n_std.module, n_std.seq, budgets)
    flags.mark("generator-completeness", auts.complete)
    gen_mats = tuple(a.mat for a in auts.maps)
    table = orbit_table(gen_mats, cm, budgets.orbit_max)
    for cand in candidates:
        gamma = standard_isomorphism(n_std.module, cand.module,
                                     n_std.seq, cand.seq, budgets)
        if gamma is None:
            continue
        target = cm_hat.apply(ex.mat_inverse(gamma.mat))
        if target in table:
            tau = table.transversal_matrix(table.lattices[target.key()], gen_mats)
            sigma_mat = ex.mat_mul(tau, gamma.mat)
            sigma = ModuleMap(m, m_hat, sigma_mat)
            assert sigma.is_isomorphism
            return IsoResult(sigma, "witness found", True)
    if flags.all_ok:
        return IsoResult(None, "orbit exhausted (complete gens)", True)
    return IsoResult(None, f"unknown (incomplete: {', '.join(flags.failing())})", False)


def aut_over_maximal(m: pm.PlModule, budgets: Budgets | None = None,
                     flags: Flags | None = None) -> AutGens:
    """Algorithm II.2: generators of the automorphism group over the maximal order."""
    budgets = budgets or default_budgets()
    flags = flags if flags is not None else Flags()
    n_std = sd.min_index_standard_submodule(m, budgets, flags)
    c = _exponent_of_quotient(m.lattice, n_std.lattice)
    cm = m.lattice.scaled(c)
    candidates = sd.standard_submodules_with_indices(m, n_std.indices,
                                                     budgets, flags)
    auts = standard_aut_gens(n_std.module, n_std.seq, budgets)
    flags.mark("generator-completeness", auts.complete)
    gen_mats = tuple(a.mat for a in auts.maps)
    table = orbit_table(gen_mats, cm, budgets.orbit_max)
    stab = schreier_stabilizer(table, gen_mats)
    out = []
    for cand in candidates:
        if cand.lattice == n_std.lattice:
            continue
        gamma = standard_isomorphism(n_std.module, cand.module,
                                     n_std.seq, cand.seq, budgets)
        if gamma is None:
            continue
        target = cm.apply(ex.mat_inverse(gamma.mat))
        if target in table:
            tau = table.transversal_matrix(table.lattices[target.key()], gen_mats)
            eps = ex.mat_mul(tau, gamma.mat)
            out.append(ModuleMap(m, m, eps))
    for w in stab:
        out.append(ModuleMap(m, m, w))
    for amap in out:
        assert amap.is_isomorphism
    return AutGens(m, tuple(out), flags.all_ok)


# ---------------------------------------------------------------------------
# Algorithms III.1 / III.2 (arbitrary orders)

def iso_over_order(m: pm.PlModule, m_hat: pm.PlModule,
                   budgets: Budgets | None = None,
                   flags: Flags | None = None) -> IsoResult:
    """Algorithm III.1: reduce to the maximal order through the unique maximal
    O_K-closed submodules, then orbit-match the scaled module."""
    budgets = budgets or default_budgets()
    flags = flags if flags is not None else Flags()
    l_sub = pm.max_ok_submodule(m)
    l_hat = pm.max_ok_submodule(m_hat)
    if ex.lattice_index(m.lattice, l_sub.lattice) != \
            ex.lattice_index(m_hat.lattice, l_hat.lattice):
        return IsoResult(None, "index mismatch", True)
    if l_sub.lattice == m.lattice:
        return iso_over_maximal(m, m_hat, budgets, flags)
    first = iso_over_maximal(l_sub, l_hat, budgets, flags)
    if first.map is None:
        return first
    c = _exponent_of_quotient(m.lattice, l_sub.lattice)
    cm = m.lattice.scaled(c)
    cm_hat = m_hat.lattice.scaled(c)
    aut_l = aut_over_maximal(l_sub, budgets, flags)
    gen_mats = tuple(a.mat for a in aut_l.maps)
    table = orbit_table(gen_mats, cm, budgets.orbit_max)
    target = cm_hat.apply(ex.mat_inverse(first.map.mat))
    if target in table:
        tau = table.transversal_matrix(table.lattices[target.key()], gen_mats)
        sigma = ModuleMap(m, m_hat, ex.mat_mul(tau, first.map.mat))
        assert sigma.is_isomorphism
        return IsoResult(sigma, "witness found", True)
    if flags.all_ok:
        return IsoResult(None, "orbit exhausted (complete gens)", True)
    return IsoResult(None, f"unknown (incomplete: {', '.join(flags.failing())})", False)


def aut_over_order(m: pm.PlModule, budgets: Budgets | None = None,
                   flags: Flags | None = None) -> AutGens:
    """Algorithm III.2: the stabiliser of c·M inside the automorphisms of the
    maximal O_K-closed submodule, read off Schreier generators."""
    budgets = budgets or default_budgets()
    flags = flags if flags is not None else Flags()
    l_sub = pm.max_ok_submodule(m)
    aut_l = aut_over_maximal(l_sub, budgets, flags)
    if l_sub.lattice == m.lattice:
        return aut_l
    c = _exponent_of_quotient(m.lattice, l_sub.lattice)
    cm = m.lattice.scaled(c)
    gen_mats = tuple(a.mat for a in aut_l.maps)
    table = orbit_table(gen_mats, cm, budgets.orbit_max)
    stab = schreier_stabilizer(table, gen_mats)
    maps = tuple(ModuleMap(m, m, w) for w in stab)
    for amap in maps:
        assert amap.is_isomorphism
    return AutGens(m, maps, flags.all_ok)
