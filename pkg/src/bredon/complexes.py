"""Bounded complexes of free modules: spheres, box products, linear models,
levelwise homology, and the chain-homotopy oracle.

The oracle computes homotopy classes [K, Σ^m L] as degree -m homology of the
hom complex in the span category.  At the top orbit level this is built
directly from span composition; the Mackey-valued variant is obtained by
evaluating the internal-hom complex dual(K) box L at each orbit level, which
realizes [F_e box K, Σ^m L].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from . import arith, linalg, mackey
from .linalg import AbelianGroup
from .mackey import (
    BlockMorphism,
    FreeModule,
    LevelwiseGroup,
    NamedMackey,
    RestrictionData,
    SpanMorphism,
    block_from_entries,
    box_spans,
    bracket,
    i_pi,
    identity,
    ipi_rpi,
    r_pi,
    recognize,
    rt,
    zero_block,
)


@dataclass(frozen=True)
class FreeComplex:
    """Bounded chain complex of free modules.

    ``diffs[i]`` is the differential from degree bottom+i+1 to bottom+i.
    """

    n: int
    bottom: int
    terms: tuple[FreeModule, ...]
    diffs: tuple[BlockMorphism, ...]

    def __post_init__(self):
        if len(self.diffs) != max(len(self.terms) - 1, 0):
            raise ValueError("need exactly len(terms) - 1 differentials")
        for i, d in enumerate(self.diffs):
            if d.src != self.terms[i + 1] or d.dst != self.terms[i]:
                raise ValueError(f"differential {i} has wrong endpoints")

    @property
    def top(self) -> int:
        return self.bottom + len(self.terms) - 1

    def term(self, deg: int) -> FreeModule:
        if self.bottom <= deg <= self.top:
            return self.terms[deg - self.bottom]
        return FreeModule(self.n, ())

    def diff_out(self, deg: int) -> BlockMorphism | None:
        """The differential leaving degree deg (None at or below the bottom)."""
        i = deg - self.bottom - 1
        if 0 <= i < len(self.diffs):
            return self.diffs[i]
        return None

    def check(self) -> None:
        """Assert d o d = 0."""
        for i in range(len(self.diffs) - 1):
            if not self.diffs[i].compose(self.diffs[i + 1]).is_zero():
                raise AssertionError(f"d o d != 0 between degrees {self.bottom + i + 2} and {self.bottom + i}")

    def dual(self) -> "FreeComplex":
        terms = tuple(reversed(self.terms))
        diffs = tuple(d.dual() for d in reversed(self.diffs))
        return FreeComplex(self.n, -self.top, terms, diffs)

    def matrices_at_level(self, e: int) -> list[list[dict[int, int]]]:
        return [d.matrix_at_level(e) for d in self.diffs]


def _single_chain(n: int, bottom: int, orbits: list[int], maps: list[SpanMorphism]) -> FreeComplex:
    terms = tuple(FreeModule(n, (d,)) for d in orbits)
    diffs = tuple(
        BlockMorphism(terms[i + 1], terms[i], ((maps[i],),)) for i in range(len(maps))
    )
    return FreeComplex(n, bottom, terms, diffs)


def constant_complex(n: int) -> FreeComplex:
    """The constant Mackey ring concentrated in degree 0."""
    return FreeComplex(n, 0, (FreeModule(n, (1,)),), ())


def sphere(n: int, d: int) -> FreeComplex:
    """The 3-term sphere complex F_d -> F_d -> Z in degrees 2, 1, 0."""
    mackey.check_orbit(n, d)
    one_minus_t = identity(n, d) - rt(n, d)
    return _single_chain(n, 0, [1, d, d], [r_pi(n, d), one_minus_t])


def sphere_dual(n: int, d: int) -> FreeComplex:
    """The inverse sphere, concentrated in degrees 0 to -2."""
    return sphere(n, d).dual()


def general_sphere(n: int, k: int) -> FreeComplex:
    """Reduced cell complex of the rotation-by-k two-sphere for any 1 <= k < n.

    The attaching map is 1 - Rt^A where A*k = gcd(k, n) modulo n; when k | n
    this is the usual sphere complex for the orbit n/k.
    """
    if not 1 <= k < n:
        raise ValueError("need 1 <= k < n")
    g = math.gcd(k, n)
    d = n // g
    # smallest positive A with A*(k/g) = 1 mod d
    kk = k // g
    _, x, _ = linalg.xgcd(kk, d)
    a = x % d if d > 1 else 1
    if a == 0:
        a = d
    shift_a = SpanMorphism.from_vector(n, d, d, [1 if p == a % d else 0 for p in range(d)])
    one_minus = identity(n, d) - shift_a
    return _single_chain(n, 0, [1, d, d], [r_pi(n, d), one_minus])


def linear_model(n: int, b) -> FreeComplex:
    """The small (2s+1)-term model of a box of spheres.

    For a non divisor string, the model of the associated divisor string is
    used; entries equal to 1 are allowed and contribute suspension-like
    segments.
    """
    b = tuple(b)
    if not b:
        raise ValueError("linear_model needs a nonempty tuple")
    for x in b:
        mackey.check_orbit(n, x)
    bs = arith.lcm_gcd_seq(b)
    orbits = [1]
    maps: list[SpanMorphism] = []
    prev = 1
    for x in bs:
        # two new terms F_x -> F_x -> (previous)
        maps.append(ipi_rpi(n, x, prev) if prev != 1 else r_pi(n, x))
        maps.append(identity(n, x) - rt(n, x))
        orbits.extend([x, x])
        prev = x
    return _single_chain(n, 0, orbits, maps)


def sphere_model(n: int, b) -> FreeComplex:
    """linear_model, but an empty tuple gives the constant complex."""
    b = tuple(b)
    return linear_model(n, b) if b else constant_complex(n)


# ---------------------------------------------------------------------------
# box product


def box(a: FreeComplex, b: FreeComplex) -> FreeComplex:
    """Total complex of the levelwise box product.

    Summands of degree p are indexed by (degree in a, summand of a, summand
    of b, orbit class j); the second differential carries the sign (-1)^|a|.
    """
    if a.n != b.n:
        raise ValueError("complexes over different groups")
    n = a.n
    bottom = a.bottom + b.bottom
    top = a.top + b.top

    index: list[dict[tuple[int, int, int, int], int]] = []
    terms: list[FreeModule] = []
    for p in range(bottom, top + 1):
        keys: dict[tuple[int, int, int, int], int] = {}
        orbs: list[int] = []
        for da in range(a.bottom, a.top + 1):
            db = p - da
            if not (b.bottom <= db <= b.top):
                continue
            ta = a.term(da)
            tb = b.term(db)
            for sa, x in enumerate(ta.summands):
                for sb, y in enumerate(tb.summands):
                    for j in range(math.gcd(x, y)):
                        keys[(da, sa, sb, j)] = len(orbs)
                        orbs.append(arith.lcm(x, y))
        index.append(keys)
        terms.append(FreeModule(n, tuple(orbs)))

    span_cache: dict = {}

    def boxed(f: SpanMorphism, g: SpanMorphism):
        key = (f, g)
        if key not in span_cache:
            span_cache[key] = box_spans(f, g)
        return span_cache[key]

    diffs: list[BlockMorphism] = []
    for p in range(bottom + 1, top + 1):
        src_keys = index[p - bottom]
        dst_keys = index[p - 1 - bottom]
        entries: dict[tuple[int, int], SpanMorphism] = {}

        def put(row: int, col: int, s: SpanMorphism) -> None:
            cur = entries.get((row, col))
            entries[(row, col)] = s if cur is None else cur + s

        for (da, sa, sb, j), col in src_keys.items():
            db = p - da
            x = a.term(da).summands[sa]
            y = b.term(db).summands[sb]
            da_out = a.diff_out(da)
            if da_out is not None:
                for ta_i in range(da_out.dst.num_summands):
                    blk = da_out.blocks[ta_i][sa]
                    if blk is None or blk.is_zero():
                        continue
                    for (j_src, j_dst), s in boxed(blk, identity(n, y)).items():
                        if j_src != j:
                            continue
                        put(dst_keys[(da - 1, ta_i, sb, j_dst)], col, s)
            db_out = b.diff_out(db)
            if db_out is not None:
                sign = -1 if da % 2 else 1
                for tb_i in range(db_out.dst.num_summands):
                    blk = db_out.blocks[tb_i][sb]
                    if blk is None or blk.is_zero():
                        continue
                    for (j_src, j_dst), s in boxed(identity(n, x), blk).items():
                        if j_src != j:
                            continue
                        put(dst_keys[(da, sa, tb_i, j_dst)], col, s.scale(sign))

        src = terms[p - bottom]
        dst = terms[p - 1 - bottom]
        diffs.append(block_from_entries(src, dst, entries))

    return FreeComplex(n, bottom, tuple(terms), tuple(diffs))


def box_summand_keys(a: FreeComplex, b: FreeComplex) -> list[dict]:
    """Summand bookkeeping of box(a, b), degree by degree (same order)."""
    out = []
    for p in range(a.bottom + b.bottom, a.top + b.top + 1):
        keys = {}
        pos = 0
        for da in range(a.bottom, a.top + 1):
            db = p - da
            if not (b.bottom <= db <= b.top):
                continue
            for sa, x in enumerate(a.term(da).summands):
                for sb, y in enumerate(b.term(db).summands):
                    for j in range(math.gcd(x, y)):
                        keys[(da, sa, sb, j)] = pos
                        pos += 1
        out.append(keys)
    return out


# ---------------------------------------------------------------------------
# homology


def homology_levels(c: FreeComplex, levels=None) -> dict[int, dict[int, AbelianGroup]]:
    """Exact homology at every degree, per orbit level.

    Returns {degree: {level: group}}.  Free ranks come from the ranks of the
    two adjacent differentials; torsion comes from the invariant factors of
    the incoming one (integer kernels of differentials are saturated).
    """
    if levels is None:
        levels = arith.divisors(c.n)
    out: dict[int, dict[int, AbelianGroup]] = {
        deg: {} for deg in range(c.bottom, c.top + 1)
    }
    for e in levels:
        dims = [t.rank_at_level(e) for t in c.terms]
        ranks = []
        torsions = []
        for d in c.diffs:
            rk, tors = linalg.smith_invariants(d.matrix_at_level(e), d.src.rank_at_level(e))
            ranks.append(rk)
            torsions.append(tors)
        for i, deg in enumerate(range(c.bottom, c.top + 1)):
            r_out = ranks[i - 1] if i > 0 else 0
            r_in = ranks[i] if i < len(ranks) else 0
            tors = torsions[i] if i < len(torsions) else []
            free = dims[i] - r_out - r_in
            out[deg][e] = AbelianGroup.from_diagonal(tors, free)
    return out


def homology_at(c: FreeComplex, deg: int, e: int) -> AbelianGroup:
    if deg < c.bottom or deg > c.top:
        return AbelianGroup.zero()
    return homology_levels(c, levels=[e])[deg][e]


@dataclass
class HomologyPresentation:
    """Homology of one degree at one level, with generator vectors.

    ``generators`` are chain vectors (coordinates in the term's summand
    basis at the given level); ``orders`` lists each generator's additive
    order (0 for infinite).  ``kernel`` spans the cycle lattice (a matrix
    whose columns are the basis) and ``image_in_kernel`` expresses the
    boundaries in kernel coordinates.
    """

    group: AbelianGroup
    generators: list[list[int]]
    orders: list[int]
    kernel: list[list[int]]
    image_in_kernel: list[list[int]]
    _u: list[list[int]] = field(default_factory=list)
    _kept: list[int] = field(default_factory=list)

    def class_of(self, cycle: list[int]) -> list[int]:
        """Coordinates of a cycle's homology class over the generators."""
        if not self.kernel or not self.kernel[0]:
            return []
        y = linalg.solve_integer(self.kernel, cycle)
        if y is None:
            raise ValueError("vector is not a cycle")
        z = linalg.mat_vec(self._u, y)
        out = []
        for pos, o in zip(self._kept, self.orders):
            out.append(z[pos] % o if o else z[pos])
        return out


def presentation_from_matrices(
    d_out: list[dict[int, int]] | None,
    nrows_out: int,
    d_in: list[dict[int, int]] | None,
    ncols_in: int,
    ncols: int,
) -> HomologyPresentation:
    """ker(d_out)/im(d_in) in an ambient Z^ncols, dense path with generators."""
    if d_out is not None and nrows_out:
        dense = [[d_out[i].get(j, 0) for j in range(ncols)] for i in range(nrows_out)]
        ker = linalg.integer_kernel(dense)
    else:
        ker = [[int(r == j) for j in range(ncols)] for r in range(ncols)]
    kdim = len(ker[0]) if ker else 0
    if kdim == 0:
        return HomologyPresentation(AbelianGroup.zero(), [], [], ker, [])
    if d_in is not None and ncols_in:
        cols_in_kernel = []
        for col in range(ncols_in):
            vec = [d_in[r].get(col, 0) for r in range(ncols)]
            sol = linalg.solve_integer(ker, vec)
            if sol is None:
                raise AssertionError("boundary is not a cycle")
            cols_in_kernel.append(sol)
        y = [[cik[r] for cik in cols_in_kernel] for r in range(kdim)]
    else:
        y = [[] for _ in range(kdim)]

    if y and y[0]:
        d, u, _ = linalg.smith_normal_form(y)
        diag = [d[r][r] for r in range(min(kdim, len(y[0])))]
    else:
        u = [[int(r == j) for j in range(kdim)] for r in range(kdim)]
        diag = []
    diag = diag + [0] * (kdim - len(diag))

    # in the coordinates z = u*(kernel coords) the image is diagonal, so the
    # quotient generators are the columns of u^-1 with diag entry != 1
    gens, orders, kept = [], [], []
    group = AbelianGroup.zero()
    for j in range(kdim):
        o = abs(diag[j])
        if o == 1:
            continue
        ej = [int(r == j) for r in range(kdim)]
        uinv_col = linalg.solve_integer(u, ej)
        vec = [sum(ker[r][t] * uinv_col[t] for t in range(kdim)) for r in range(ncols)]
        gens.append(vec)
        orders.append(o)
        kept.append(j)
        group = group.direct_sum(AbelianGroup.cyclic(o))
    return HomologyPresentation(group, gens, orders, ker, y, u, kept)


def homology_presentation(c: FreeComplex, deg: int, e: int) -> HomologyPresentation:
    """Dense homology computation with explicit generators (small inputs)."""
    if deg < c.bottom or deg > c.top:
        return HomologyPresentation(AbelianGroup.zero(), [], [], [], [])
    i = deg - c.bottom
    ncols = c.terms[i].rank_at_level(e)
    d_out = c.diffs[i - 1].matrix_at_level(e) if i > 0 else None
    nrows_out = c.terms[i - 1].rank_at_level(e) if i > 0 else 0
    d_in = c.diffs[i].matrix_at_level(e) if i < len(c.diffs) else None
    ncols_in = c.terms[i + 1].rank_at_level(e) if i < len(c.diffs) else 0
    return presentation_from_matrices(d_out, nrows_out, d_in, ncols_in, ncols)


def restriction_chain_map(c: FreeComplex, e: int) -> list[list[list[int]]]:
    """Matrices (per degree) of the restriction from level 1 to level e.

    The level-1 basis vector of a summand F_d is the full orbit sum, which
    restricts to the sum of all residue-class indicators at level e.
    """
    out = []
    for t in c.terms:
        cols = []
        for d in t.summands:
            cols.append([1] * math.gcd(d, e))
        rows_total = sum(len(col) for col in cols)
        mat = [[0] * len(t.summands) for _ in range(rows_total)]
        r0 = 0
        for j, col in enumerate(cols):
            for r, v in enumerate(col):
                mat[r0 + r][j] = v
            r0 += len(col)
        out.append(mat)
    return out


def homology_restriction_meta(c: FreeComplex, deg: int) -> RestrictionData:
    """Cokernels of restriction on homology in one degree, for recognition."""
    n = c.n
    cokers = {}
    pres1 = homology_presentation(c, deg, 1)
    for e in arith.divisors(n):
        prese = homology_presentation(c, deg, e)
        if prese.group.is_zero():
            cokers[e] = AbelianGroup.zero()
            continue
        mats = restriction_chain_map(c, e)
        i = deg - c.bottom
        mat = mats[i]
        images = []
        for g in pres1.generators:
            img = [sum(mat[r][j] * g[j] for j in range(len(g))) for r in range(len(mat))]
            images.append(img)
        # cokernel of H(theta_1) -> H(theta_e): quotient of the target by
        # boundaries plus restricted generators, computed in kernel coords
        ker = prese.kernel
        cols = [list(col) for col in zip(*prese.image_in_kernel)] if prese.image_in_kernel and prese.image_in_kernel[0] else []
        for img in images:
            sol = linalg.solve_integer(ker, img)
            if sol is None:
                raise AssertionError("restriction of a cycle is not a cycle")
            cols.append(sol)
        kdim = len(ker[0]) if ker else 0
        if not cols:
            cokers[e] = AbelianGroup.free(kdim)
            continue
        rows = [{j: cols[j][r] for j in range(len(cols)) if cols[j][r]} for r in range(kdim)]
        cokers[e] = linalg.cokernel(rows, kdim, len(cols))
    return RestrictionData(n, tuple(sorted(cokers.items())))


def homology(c: FreeComplex, with_names: bool = True):
    """Levelwise homology with recognition: {degree: (LevelwiseGroup, NamedMackey)}."""
    levels = homology_levels(c)
    out = {}
    for deg, per_level in levels.items():
        lw = LevelwiseGroup.from_dict(c.n, per_level)
        named = NamedMackey("Unrecognized")
        if with_names:
            if lw.is_zero():
                named = mackey.ZERO_MACKEY
            else:
                meta = homology_restriction_meta(c, deg)
                named = recognize(lw, meta)
        out[deg] = (lw, named)
    return out


# ---------------------------------------------------------------------------
# the named extension module Z(e;d), realized as sphere-stable homology


@lru_cache(maxsize=None)
def _z_ed(n: int, e: int, d: int):
    if e % d != 0:
        raise ValueError("Z(e;d) needs d | e")
    x = box(sphere(n, d), sphere_dual(n, e))
    levels = homology_levels(x)[0]
    lw = LevelwiseGroup.from_dict(n, levels)
    meta = homology_restriction_meta(x, 0)
    return lw, meta


def z_ed_levels(n: int, e: int, d: int) -> LevelwiseGroup:
    return _z_ed(n, e, d)[0]


def z_ed_restriction(n: int, e: int, d: int) -> RestrictionData:
    return _z_ed(n, e, d)[1]


# ---------------------------------------------------------------------------
# hom complexes in the span category


@dataclass
class HomLattice:
    """Basis bookkeeping for Hom(A, B) between free modules: one span basis
    vector per (summand of A, summand of B, span index)."""

    src: FreeModule
    dst: FreeModule
    keys: list[tuple[int, int, int]]
    offsets: dict[tuple[int, int], int]

    @staticmethod
    def build(src: FreeModule, dst: FreeModule) -> "HomLattice":
        keys = []
        offsets = {}
        for j, x in enumerate(src.summands):
            for i, y in enumerate(dst.summands):
                offsets[(j, i)] = len(keys)
                for s in range(math.gcd(x, y)):
                    keys.append((j, i, s))
        return HomLattice(src, dst, keys, offsets)

    @property
    def dim(self) -> int:
        return len(self.keys)

    def vector_of(self, f: BlockMorphism) -> list[int]:
        if f.src != self.src or f.dst != self.dst:
            raise ValueError("morphism does not live in this lattice")
        v = [0] * self.dim
        for i, row in enumerate(f.blocks):
            for j, blk in enumerate(row):
                if blk is None:
                    continue
                base = self.offsets[(j, i)]
                for s, coef in enumerate(blk.coeffs):
                    v[base + s] = coef
        return v

    def morphism_of(self, v: list[int]) -> BlockMorphism:
        n = self.src.n
        entries = {}
        for (j, i), base in self.offsets.items():
            x = self.src.summands[j]
            y = self.dst.summands[i]
            g = math.gcd(x, y)
            coeffs = tuple(v[base + s] for s in range(g))
            if any(coeffs):
                entries[(i, j)] = SpanMorphism(n, x, y, coeffs)
        return block_from_entries(self.src, self.dst, entries)


@dataclass
class HomComplex:
    """The complex Hom^p = ⊕_i Hom(K_i, L_{i+p}) with D(f) = d_L f - (-1)^p f d_K."""

    k: FreeComplex
    l: FreeComplex
    bottom: int
    lattices: list[list[tuple[int, HomLattice]]]   # per degree: [(i_K_degree, lattice)]
    matrices: list[list[dict[int, int]]]           # matrices[p - bottom - 1]: degree p -> p-1

    def degree_dim(self, p: int) -> int:
        if not (self.bottom <= p <= self.bottom + len(self.lattices) - 1):
            return 0
        return sum(lat.dim for _, lat in self.lattices[p - self.bottom])


def hom_complex(k: FreeComplex, l: FreeComplex) -> HomComplex:
    if k.n != l.n:
        raise ValueError("complexes over different groups")
    bottom = l.bottom - k.top
    top = l.top - k.bottom
    lattices = []
    for p in range(bottom, top + 1):
        row = []
        for deg in range(k.bottom, k.top + 1):
            if l.bottom <= deg + p <= l.top:
                row.append((deg, HomLattice.build(k.term(deg), l.term(deg + p))))
        lattices.append(row)

    def offset_map(row):
        offs = {}
        pos = 0
        for deg, lat in row:
            offs[deg] = pos
            pos += lat.dim
        return offs, pos

    matrices = []
    for p in range(bottom + 1, top + 1):
        src_row = lattices[p - bottom]
        dst_row = lattices[p - 1 - bottom]
        src_offs, _ = offset_map(src_row)
        dst_offs, dst_dim = offset_map(dst_row)
        rows: list[dict[int, int]] = [dict() for _ in range(dst_dim)]
        sign = -1 if p % 2 else 1
        for deg, lat in src_row:
            base = src_offs[deg]
            for idx, (j, i, s) in enumerate(lat.keys):
                col = base + idx
                x = lat.src.summands[j]
                y = lat.dst.summands[i]
                span = SpanMorphism(k.n, x, y, tuple(int(t == s) for t in range(math.gcd(x, y))))
                # d_L o f lands in Hom(K_deg, L_{deg+p-1})
                d_l = l.diff_out(deg + p)
                if d_l is not None and deg in dst_offs:
                    tgt = next(lt for dg, lt in dst_row if dg == deg)
                    for i2 in range(d_l.dst.num_summands):
                        blk = d_l.blocks[i2][i]
                        if blk is None or blk.is_zero():
                            continue
                        comp = blk.compose(span)
                        b2 = tgt.offsets[(j, i2)]
                        for s2, coef in enumerate(comp.coeffs):
                            if coef:
                                r = dst_offs[deg] + b2 + s2
                                rows[r][col] = rows[r].get(col, 0) + coef
                # -(-1)^p f o d_K lands in Hom(K_{deg+1}, L_{deg+p})
                d_k = k.diff_out(deg + 1)
                if d_k is not None and (deg + 1) in dst_offs:
                    tgt = next(lt for dg, lt in dst_row if dg == deg + 1)
                    for j2 in range(d_k.src.num_summands):
                        blk = d_k.blocks[j][j2]
                        if blk is None or blk.is_zero():
                            continue
                        comp = span.compose(blk)
                        b2 = tgt.offsets[(j2, i)]
                        for s2, coef in enumerate(comp.coeffs):
                            if coef:
                                r = dst_offs[deg + 1] + b2 + s2
                                rows[r][col] = rows[r].get(col, 0) - sign * coef
        matrices.append(rows)
    return HomComplex(k, l, bottom, lattices, matrices)


def chain_map_vector(hc: HomComplex, f: dict[int, BlockMorphism], p: int) -> list[int]:
    """Coordinates of the degree-p hom element {f_deg: K_deg -> L_{deg+p}}."""
    row = hc.lattices[p - hc.bottom]
    vec: list[int] = []
    for deg, lat in row:
        if deg in f:
            vec.extend(lat.vector_of(f[deg]))
        else:
            vec.extend([0] * lat.dim)
    return vec


def hom_h_group(hc: HomComplex, p: int) -> AbelianGroup:
    """Homology of the hom complex in degree p."""
    top = hc.bottom + len(hc.lattices) - 1
    if p < hc.bottom or p > top:
        return AbelianGroup.zero()
    dim = hc.degree_dim(p)
    i = p - hc.bottom
    r_out, _ = (
        linalg.smith_invariants([dict(r) for r in hc.matrices[i - 1]], dim) if i > 0 else (0, [])
    )
    if i < len(hc.matrices):
        r_in, tors = linalg.smith_invariants([dict(r) for r in hc.matrices[i]], hc.degree_dim(p + 1))
    else:
        r_in, tors = 0, []
    return AbelianGroup.from_diagonal(tors, dim - r_out - r_in)


@dataclass
class HomotopyGroupResult:
    """A computed homotopy-class group with provenance."""

    group: AbelianGroup
    levels: LevelwiseGroup | None
    generators: list
    method: str


def hom_group(k: FreeComplex, l: FreeComplex, m: int, levels: bool = False) -> HomotopyGroupResult:
    """[K, Σ^m L]: degree -m homology of the hom complex.

    With ``levels=True`` the Mackey-valued groups are computed as well, by
    evaluating dual(K) box L at every orbit level.
    """
    hc = hom_complex(k, l)
    group = hom_h_group(hc, -m)
    lw = None
    if levels:
        x = box(k.dual(), l)
        per = homology_levels(x)
        data = per.get(-m)
        if data is None:
            data = {e: AbelianGroup.zero() for e in arith.divisors(k.n)}
        lw = LevelwiseGroup.from_dict(k.n, data)
        if lw.at(1) != group:
            raise AssertionError("hom complex and internal-hom evaluation disagree")
    gens = homotopy_class_generators(hc, -m)
    return HomotopyGroupResult(group, lw, gens, "oracle")


def hom_presentation(hc: HomComplex, p: int) -> HomologyPresentation:
    """Presentation (with generators) of H_p of the hom complex."""
    top = hc.bottom + len(hc.lattices) - 1
    if p < hc.bottom or p > top:
        return HomologyPresentation(AbelianGroup.zero(), [], [], [], [])
    i = p - hc.bottom
    d_out = [dict(r) for r in hc.matrices[i - 1]] if i > 0 else None
    nrows_out = hc.degree_dim(p - 1) if i > 0 else 0
    d_in = [dict(r) for r in hc.matrices[i]] if i < len(hc.matrices) else None
    ncols_in = hc.degree_dim(p + 1) if i < len(hc.matrices) else 0
    return presentation_from_matrices(d_out, nrows_out, d_in, ncols_in, hc.degree_dim(p))


def homotopy_class_generators(hc: HomComplex, p: int) -> list[dict[int, BlockMorphism]]:
    """Chain-map representatives generating H_p of the hom complex."""
    pres = hom_presentation(hc, p)
    out = []
    row = hc.lattices[p - hc.bottom] if pres.generators else []
    for g in pres.generators:
        f = {}
        pos = 0
        for deg, lat in row:
            sub = g[pos : pos + lat.dim]
            pos += lat.dim
            if any(sub):
                f[deg] = lat.morphism_of(list(sub))
        out.append(f)
    return out


# ---------------------------------------------------------------------------
# chain maps between linear models


@dataclass(frozen=True)
class ChainMapData:
    """Normity/translation data (M, w) describing a chain map L(c) -> L(d)
    between linear models of divisor strings of equal length."""

    n: int
    c: tuple[int, ...]
    d: tuple[int, ...]
    m: tuple[int, ...]
    w: tuple[int, ...]

    def __post_init__(self):
        if not (len(self.c) == len(self.d) == len(self.m) == len(self.w)):
            raise ValueError("c, d, M, w must have equal lengths")
        if not arith.is_divisor_string(self.c) or not arith.is_divisor_string(self.d):
            raise ValueError("c and d must be divisor strings")
        for i in self.c + self.d:
            mackey.check_orbit(self.n, i)
        self.validate()

    @property
    def k(self) -> int:
        return len(self.c)

    @property
    def w0(self) -> int:
        return self.m[0] * arith.colon(self.d[0], self.c[0]) if self.m else 0

    def validate(self) -> None:
        c = (1,) + self.c
        d = (1,) + self.d
        m = (0,) + self.m
        for i in range(2, self.k + 1):
            lhs = m[i] * arith.colon(d[i], c[i])
            rhs = (m[i - 1] + self.w[i - 2] * math.gcd(c[i - 1], d[i - 1])) * arith.colon(c[i - 1], d[i - 1])
            if lhs != rhs:
                raise ValueError(f"chain-map consistency fails at index {i}")


def chain_map_from_data(data: ChainMapData) -> dict[int, BlockMorphism]:
    """The block chain map L(c) -> L(d) with M_i p*p^* + w_i transfer blocks."""
    n = data.n
    k = data.k
    src = linear_model(n, data.c)
    dst = linear_model(n, data.d)
    f: dict[int, BlockMorphism] = {}

    def single(deg: int, span: SpanMorphism) -> BlockMorphism:
        return BlockMorphism(src.term(deg), dst.term(deg), ((span,),))

    f[0] = single(0, identity(n, 1).scale(data.w0))
    for i in range(1, k + 1):
        ci, di = data.c[i - 1], data.d[i - 1]
        g = math.gcd(ci, di)
        base = bracket(n, ci, di, (data.m[i - 1],) + (0,) * (g - 1))
        f[2 * i - 1] = single(2 * i - 1, base)
        f[2 * i] = single(2 * i, base + ipi_rpi(n, ci, di).scale(data.w[i - 1]))
    # the data must commute with the differentials
    for deg in range(1, 2 * k + 1):
        lhs = dst.diff_out(deg).compose(f[deg])
        rhs = f[deg - 1].compose(src.diff_out(deg))
        if not (lhs - rhs).is_zero():
            raise AssertionError(f"chain map does not commute in degree {deg}")
    return f


def is_null_homotopic(data: ChainMapData) -> bool:
    """Divisibility test for null-homotopy of the chain map given by data."""
    k = data.k
    c, d, m, w = data.c, data.d, data.m, data.w
    if m[0] % math.gcd(c[0], d[0]) != 0:
        return False
    for i in range(1, k):
        bound = arith.colon(d[i], c[i - 1]) * math.gcd(d[i - 1], c[i - 1])
        if (m[i - 1] + math.gcd(c[i - 1], d[i - 1]) * w[i - 1]) % bound != 0:
            return False
    return m[k - 1] + math.gcd(c[k - 1], d[k - 1]) * w[k - 1] == 0


def is_null_homotopic_oracle(data: ChainMapData) -> bool:
    """Independent check: solve d s + s d = f over the integers."""
    src = linear_model(data.n, data.c)
    dst = linear_model(data.n, data.d)
    f = chain_map_from_data(data)
    hc = hom_complex(src, dst)
    target = chain_map_vector(hc, f, 0)
    i = -hc.bottom  # index of degree 0
    if i >= len(hc.matrices):
        return all(v == 0 for v in target)
    rows = hc.matrices[i]
    ncols = hc.degree_dim(1)
    cols = [[rows[r].get(j, 0) for r in range(len(rows))] for j in range(ncols)]
    basis = linalg.hnf_column_basis(cols, len(rows))
    return _in_lattice(basis, target)


def _in_lattice(basis: list[list[int]], v: list[int]) -> bool:
    v = list(v)
    piv = {next(i for i, x in enumerate(b) if x): b for b in basis}
    for i in range(len(v)):
        if v[i] == 0:
            continue
        b = piv.get(i)
        if b is None or v[i] % b[i] != 0:
            return False
        q = v[i] // b[i]
        for r in range(i, len(v)):
            v[r] -= q * b[r]
    return all(x == 0 for x in v)


def homology_action(data: ChainMapData, i: int) -> int:
    """Multiplication constant (up to sign) induced on H_{2i}."""
    if i < 0 or i > data.k:
        raise ValueError("index out of range")
    if i == 0:
        return data.w0
    ci, di = data.c[i - 1], data.d[i - 1]
    return arith.colon(ci, di) * (data.m[i - 1] + data.w[i - 1] * math.gcd(ci, di))


def homology_action_oracle(data: ChainMapData, i: int) -> int:
    """The induced multiple computed from the actual chain map on homology."""
    src = linear_model(data.n, data.c)
    dst = linear_model(data.n, data.d)
    f = chain_map_from_data(data)
    deg = 2 * i
    pres_s = homology_presentation(src, deg, 1)
    pres_d = homology_presentation(dst, deg, 1)
    if pres_s.group.is_zero() or pres_d.group.is_zero():
        return 0
    gen = pres_s.generators[0]
    blk = f[deg]
    mat = blk.matrix_at_level(1)
    img = [sum(row.get(j, 0) * gen[j] for j in range(len(gen))) for row in mat]
    cls = pres_d.class_of(img)
    return cls[0]


# ---------------------------------------------------------------------------
# the image-of-Phi description of [S^c, S^d] for equal-length strings


def phi_image(c, d) -> HomotopyGroupResult:
    """Group of (M', w) tuples modulo the null-homotopy congruences.

    The free lattice of consistent tuples maps to a product of cyclic groups
    and one Z; the image is the homotopy group of maps between the two
    linear models in degree zero.
    """
    c, d = tuple(c), tuple(d)
    if len(c) != len(d):
        raise ValueError("phi_image needs equal-length strings")
    if not c:
        return HomotopyGroupResult(AbelianGroup.free(1), None, [], "phi-image")
    k = len(c)
    # lattice: coordinates (M'_1..M'_k, w_1..w_k) with the k-1 relations
    # (M'_i - w_i (c_i, d_i)) (d_i : c_i) = M'_{i-1} (c_{i-1} : d_{i-1})
    rel = []
    for i in range(2, k + 1):
        row = [0] * (2 * k)
        row[i - 1] = arith.colon(d[i - 1], c[i - 1])
        row[k + i - 1] = -math.gcd(c[i - 1], d[i - 1]) * arith.colon(d[i - 1], c[i - 1])
        row[i - 2] = -arith.colon(c[i - 2], d[i - 2])
        rel.append(row)
    basis = (
        linalg.integer_kernel(rel)
        if rel
        else [[int(i == j) for j in range(2 * k)] for i in range(2 * k)]
    )
    nb = len(basis[0]) if basis else 0
    # target: Z/(c1,d1) + sum Z/N_i + Z, mapped by (M'_1, M'_1, ..., M'_{k-1}, M'_k)
    moduli = [math.gcd(c[0], d[0])]
    for i in range(1, k):
        moduli.append(arith.colon(d[i], c[i - 1]) * math.gcd(d[i - 1], c[i - 1]))
    tdim = len(moduli) + 1
    gens = []
    for col in range(nb):
        mp = [basis[r][col] for r in range(2 * k)]
        vec = [mp[0] % moduli[0] if moduli[0] else mp[0]]
        for i in range(1, k):
            vec.append(mp[i - 1] % moduli[i] if moduli[i] else mp[i - 1])
        vec.append(mp[k - 1])
        gens.append(vec)
    rels = []
    for i, mod in enumerate(moduli):
        if mod:
            rels.append([mod if r == i else 0 for r in range(tdim)])
    group = linalg.quotient_lattice(gens + rels, rels, tdim)
    # subtract the relation part: the image is (gens + rels)/rels
    return HomotopyGroupResult(group, None, [tuple(basis[r][col] for r in range(2 * k)) for col in range(nb)], "phi-image")


def phi_torsion_order_k2(c, d) -> int:
    """Closed form for the torsion order when k = 2."""
    c, d = tuple(c), tuple(d)
    return math.gcd(c[0], d[0] * d[1]) // math.gcd(c[0], d[1])
