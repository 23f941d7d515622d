"""Free modules over the constant Mackey ring for C_n and their morphisms.

The computational model: a morphism F_b -> F_c is the image of the chosen
generator of F_b, a vector in Z^c fixed by the shift-by-b action (so by
shift-by-gcd(b,c)).  The user-facing coordinates are the span basis, size
gcd(b,c); basis element i corresponds to the shift-invariant vector
supported on the residue class -i mod gcd(b,c).  Composition is plain
shift-convolution of vectors, and evaluating at the orbit level e
restricts to vectors fixed by shift-by-e, whose natural basis is the set
of residue-class indicators mod gcd(-, e).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from . import arith
from .linalg import AbelianGroup


def check_orbit(n: int, d: int) -> None:
    if d < 1 or n % d != 0:
        raise ValueError(f"{d} is not a divisor of {n}")


def _crt(a: int, m: int, b: int, k: int) -> int:
    """x with x = a mod m, x = b mod k; inputs must be consistent."""
    g = math.gcd(m, k)
    if (b - a) % g != 0:
        raise ValueError("inconsistent congruence")
    lcm = m // g * k
    _, p, _ = _xgcd(m // g, k // g)
    diff = (b - a) // g
    return (a + m * (diff * p % (k // g))) % lcm


def _xgcd(a: int, b: int):
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    return g, x, y


@dataclass(frozen=True)
class SpanMorphism:
    """A map F_src -> F_dst in span coordinates (length gcd(src, dst))."""

    n: int
    src: int
    dst: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        check_orbit(self.n, self.src)
        check_orbit(self.n, self.dst)
        if len(self.coeffs) != math.gcd(self.src, self.dst):
            raise ValueError("span coordinate vector has the wrong length")

    # -- representations ---------------------------------------------------

    @staticmethod
    def from_vector(n: int, src: int, dst: int, vec) -> "SpanMorphism":
        vec = list(vec)
        if len(vec) != dst:
            raise ValueError("vector must have length dst")
        g = math.gcd(src, dst)
        for p in range(dst):
            if vec[p] != vec[(p + src) % dst]:
                raise ValueError("vector is not fixed by the source shift")
        return SpanMorphism(n, src, dst, tuple(vec[(-i) % dst] for i in range(g)))

    def vector(self) -> list[int]:
        g = len(self.coeffs)
        return [self.coeffs[(-p) % g] for p in range(self.dst)]

    # -- algebra ------------------------------------------------------------

    def __add__(self, other: "SpanMorphism") -> "SpanMorphism":
        if (self.n, self.src, self.dst) != (other.n, other.src, other.dst):
            raise ValueError("shape mismatch")
        return SpanMorphism(self.n, self.src, self.dst,
                            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "SpanMorphism":
        return self.scale(-1)

    def __sub__(self, other: "SpanMorphism") -> "SpanMorphism":
        return self + (-other)

    def scale(self, k: int) -> "SpanMorphism":
        return SpanMorphism(self.n, self.src, self.dst, tuple(k * c for c in self.coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def normity(self) -> int:
        """Sum of the span coefficients; basis-independent up to sign."""
        return sum(self.coeffs)

    def compose(self, other: "SpanMorphism") -> "SpanMorphism":
        """self o other (other first)."""
        if other.dst != self.src or other.n != self.n:
            raise ValueError("morphisms are not composable")
        v = other.vector()          # length self.src
        w = self.vector()           # length self.dst
        d = self.dst
        out = [0] * d
        for i, vi in enumerate(v):
            if vi:
                for p in range(d):
                    out[p] += vi * w[(p - i) % d]
        return SpanMorphism.from_vector(self.n, other.src, self.dst, out)

    def dual(self) -> "SpanMorphism":
        """Transpose under Hom(-, constant ring); swaps induction and restriction."""
        v = self.vector()
        w = [v[(-q) % self.dst] for q in range(self.src)]
        return SpanMorphism.from_vector(self.n, self.dst, self.src, w)

    def matrix_at_level(self, e: int) -> list[list[int]]:
        """Matrix of the induced map F_src(orbit e) -> F_dst(orbit e).

        Bases are residue-class indicator vectors, mod gcd(src, e) on the
        source and mod gcd(dst, e) on the target.
        """
        check_orbit(self.n, e)
        gs = math.gcd(self.src, e)
        gd = math.gcd(self.dst, e)
        v = self.vector()
        c = self.dst
        mat = [[0] * gs for _ in range(gd)]
        for r in range(gs):
            col = [0] * gd
            for i in range(r, self.src, gs):
                for q in range(gd):
                    col[q] += v[(q - i) % c]
            for q in range(gd):
                mat[q][r] = col[q]
        return mat

    def __str__(self) -> str:
        return f"<{','.join(map(str, self.coeffs))}>: F{self.src}->F{self.dst}"


# -- distinguished morphisms -------------------------------------------------


def identity(n: int, d: int) -> SpanMorphism:
    return SpanMorphism(n, d, d, (1,) + (0,) * (d - 1))


def zero_map(n: int, src: int, dst: int) -> SpanMorphism:
    return SpanMorphism(n, src, dst, (0,) * math.gcd(src, dst))


def rt(n: int, d: int) -> SpanMorphism:
    """The action map on F_d (shift by one)."""
    if d == 1:
        return identity(n, 1)
    return SpanMorphism.from_vector(n, d, d, [0, 1] + [0] * (d - 2))


def r_pi(n: int, d: int) -> SpanMorphism:
    """Projection F_d -> F_1."""
    return SpanMorphism(n, d, 1, (1,))


def i_pi(n: int, d: int) -> SpanMorphism:
    """Transfer F_1 -> F_d (the all-ones vector)."""
    return SpanMorphism.from_vector(n, 1, d, [1] * d)


def ipi_rpi(n: int, src: int, dst: int) -> SpanMorphism:
    """The through-the-bottom composite F_src -> F_1 -> F_dst."""
    return SpanMorphism.from_vector(n, src, dst, [1] * dst)


def bracket(n: int, src: int, dst: int, m) -> SpanMorphism:
    return SpanMorphism(n, src, dst, tuple(m))


def special(n: int, kind: str, src: int, dst: int, m=None) -> SpanMorphism:
    """Named morphisms: Rt, Rpi, Ipi, IpiRpi, bracket(m)."""
    if kind == "Rt":
        if src != dst:
            raise ValueError("Rt needs src == dst")
        return rt(n, src)
    if kind == "Rpi":
        if dst != 1:
            raise ValueError("Rpi lands in the constant ring")
        return r_pi(n, src)
    if kind == "Ipi":
        if src != 1:
            raise ValueError("Ipi starts at the constant ring")
        return i_pi(n, dst)
    if kind == "IpiRpi":
        return ipi_rpi(n, src, dst)
    if kind == "bracket":
        return bracket(n, src, dst, m)
    raise ValueError(f"unknown morphism kind {kind!r}")


def span_basis(n: int, src: int, dst: int) -> list[SpanMorphism]:
    g = math.gcd(src, dst)
    return [SpanMorphism(n, src, dst, tuple(int(i == j) for j in range(g))) for i in range(g)]


# -- free modules and block morphisms ----------------------------------------


@dataclass(frozen=True)
class FreeModule:
    """Finite direct sum of orbit frees F_d."""

    n: int
    summands: tuple[int, ...]

    def __post_init__(self):
        for d in self.summands:
            check_orbit(self.n, d)

    def rank_at_level(self, e: int) -> int:
        return sum(math.gcd(d, e) for d in self.summands)

    @property
    def num_summands(self) -> int:
        return len(self.summands)

    def __str__(self) -> str:
        return " + ".join(f"F{d}" for d in self.summands) if self.summands else "0"


def evaluate(module: FreeModule, e: int) -> int:
    """Rank of the free abelian group underlying the module at orbit level e."""
    check_orbit(module.n, e)
    return module.rank_at_level(e)


@dataclass(frozen=True)
class BlockMorphism:
    """Matrix of span morphisms between direct sums of frees.

    ``blocks[i][j]`` maps summand j of src into summand i of dst; None is a
    zero block.
    """

    src: FreeModule
    dst: FreeModule
    blocks: tuple[tuple[SpanMorphism | None, ...], ...]

    def __post_init__(self):
        if len(self.blocks) != self.dst.num_summands:
            raise ValueError("block row count mismatch")
        for i, row in enumerate(self.blocks):
            if len(row) != self.src.num_summands:
                raise ValueError("block column count mismatch")
            for j, blk in enumerate(row):
                if blk is None:
                    continue
                if blk.src != self.src.summands[j] or blk.dst != self.dst.summands[i]:
                    raise ValueError("block orbit mismatch")

    @property
    def n(self) -> int:
        return self.src.n

    def compose(self, other: "BlockMorphism") -> "BlockMorphism":
        if other.dst != self.src:
            raise ValueError("block morphisms are not composable")
        rows = []
        for i in range(self.dst.num_summands):
            row = []
            for j in range(other.src.num_summands):
                acc = None
                for k in range(self.src.num_summands):
                    a = self.blocks[i][k]
                    b = other.blocks[k][j]
                    if a is None or b is None:
                        continue
                    term = a.compose(b)
                    acc = term if acc is None else acc + term
                row.append(acc)
            rows.append(tuple(row))
        return BlockMorphism(other.src, self.dst, tuple(rows))

    def __add__(self, other: "BlockMorphism") -> "BlockMorphism":
        if other.src != self.src or other.dst != self.dst:
            raise ValueError("shape mismatch")
        rows = []
        for i in range(self.dst.num_summands):
            row = []
            for j in range(self.src.num_summands):
                a, b = self.blocks[i][j], other.blocks[i][j]
                row.append(b if a is None else a if b is None else a + b)
            rows.append(tuple(row))
        return BlockMorphism(self.src, self.dst, tuple(rows))

    def scale(self, k: int) -> "BlockMorphism":
        rows = tuple(
            tuple(None if blk is None else blk.scale(k) for blk in row) for row in self.blocks
        )
        return BlockMorphism(self.src, self.dst, rows)

    def is_zero(self) -> bool:
        return all(blk is None or blk.is_zero() for row in self.blocks for blk in row)

    def dual(self) -> "BlockMorphism":
        rows = []
        for j in range(self.src.num_summands):
            row = []
            for i in range(self.dst.num_summands):
                blk = self.blocks[i][j]
                row.append(None if blk is None else blk.dual())
            rows.append(tuple(row))
        return BlockMorphism(self.dst, self.src, tuple(rows))

    def matrix_at_level(self, e: int) -> list[dict[int, int]]:
        """Sparse rows of the induced integer matrix at orbit level e."""
        src_off = []
        off = 0
        for d in self.src.summands:
            src_off.append(off)
            off += math.gcd(d, e)
        ncols = off
        dst_off = []
        off = 0
        for d in self.dst.summands:
            dst_off.append(off)
            off += math.gcd(d, e)
        rows: list[dict[int, int]] = [dict() for _ in range(off)]
        for i, row in enumerate(self.blocks):
            for j, blk in enumerate(row):
                if blk is None or blk.is_zero():
                    continue
                sub = blk.matrix_at_level(e)
                for r, subrow in enumerate(sub):
                    target = rows[dst_off[i] + r]
                    for cidx, v in enumerate(subrow):
                        if v:
                            target[src_off[j] + cidx] = target.get(src_off[j] + cidx, 0) + v
        return rows


def zero_block(src: FreeModule, dst: FreeModule) -> BlockMorphism:
    rows = tuple(tuple(None for _ in src.summands) for _ in dst.summands)
    return BlockMorphism(src, dst, rows)


def block_from_entries(src: FreeModule, dst: FreeModule, entries: dict) -> BlockMorphism:
    """entries: {(i, j): SpanMorphism} with i indexing dst summands."""
    rows = [[None] * src.num_summands for _ in range(dst.num_summands)]
    for (i, j), f in entries.items():
        rows[i][j] = f
    return BlockMorphism(src, dst, tuple(tuple(r) for r in rows))


# -- box product of frees -----------------------------------------------------


def box_summands(b: int, c: int) -> list[int]:
    """F_b box F_c decomposes into gcd(b,c) copies of F_lcm(b,c), with the
    j-th summand generated by the orbit of the pair (0, j)."""
    return [arith.lcm(b, c)] * math.gcd(b, c)


def box_spans(f: SpanMorphism, g: SpanMorphism) -> dict[tuple[int, int], SpanMorphism]:
    """Blocks of f box g between the orbit decompositions.

    Returns {(j_src, j_dst): span} for the map from summand j_src of
    F_{f.src} box F_{g.src} to summand j_dst of F_{f.dst} box F_{g.dst}.
    The pair (p, q) sits in target summand (q - p) mod gcd, at position
    determined by CRT.
    """
    n = f.n
    b1, c1 = f.src, g.src
    b2, c2 = f.dst, g.dst
    gs = math.gcd(b1, c1)
    gd = math.gcd(b2, c2)
    ld = arith.lcm(b2, c2)
    v = f.vector()
    w = g.vector()
    out_vecs: dict[tuple[int, int], list[int]] = {}
    nz_v = [(p, vp) for p, vp in enumerate(v) if vp]
    nz_w = [(q, wq) for q, wq in enumerate(w) if wq]
    for j in range(gs):
        for p, vp in nz_v:
            for q0, wq in nz_w:
                q = (q0 + j) % c2
                jd = (q - p) % gd
                alpha = _crt(p, b2, (q - jd) % c2, c2)
                key = (j, jd)
                vec = out_vecs.get(key)
                if vec is None:
                    vec = out_vecs[key] = [0] * ld
                vec[alpha] += vp * wq
    return {
        key: SpanMorphism.from_vector(n, arith.lcm(b1, c1), arith.lcm(b2, c2), vec)
        for key, vec in out_vecs.items()
    }


# -- abelian invariants, levelwise data, recognition --------------------------


@dataclass(frozen=True)
class LevelwiseGroup:
    """One finitely generated abelian group per orbit level (divisor of n)."""

    n: int
    groups: tuple[tuple[int, AbelianGroup], ...]

    @staticmethod
    def from_dict(n: int, d: dict[int, AbelianGroup]) -> "LevelwiseGroup":
        for e in arith.divisors(n):
            if e not in d:
                raise ValueError(f"missing level {e}")
        return LevelwiseGroup(n, tuple(sorted(d.items())))

    def at(self, e: int) -> AbelianGroup:
        for lvl, g in self.groups:
            if lvl == e:
                return g
        raise KeyError(e)

    def as_dict(self) -> dict[int, AbelianGroup]:
        return dict(self.groups)

    def is_zero(self) -> bool:
        return all(g.is_zero() for _, g in self.groups)

    def __str__(self) -> str:
        return ", ".join(f"T{lvl}: {g}" for lvl, g in self.groups)


@dataclass(frozen=True)
class NamedMackey:
    """A recognized module: one of the basic named classes, or a direct sum,
    or Unrecognized (carrying only the levelwise data)."""

    tag: str                      # Z, Z/I, I, Z(e;d), DirectSum, Unrecognized
    params: tuple[int, ...] = ()
    parts: tuple["NamedMackey", ...] = ()

    def __str__(self) -> str:
        if self.tag == "Z":
            return "Z"
        if self.tag == "Z/I":
            return f"Z/I_{self.params[0]}"
        if self.tag == "I":
            return f"I_{self.params[0]}"
        if self.tag == "Z(e;d)":
            return f"Z({self.params[0]};{self.params[1]})"
        if self.tag == "DirectSum":
            return " + ".join(str(p) for p in self.parts) if self.parts else "0"
        return "Unrecognized"


ZERO_MACKEY = NamedMackey("DirectSum")


def named_levels(n: int, named: NamedMackey) -> LevelwiseGroup:
    """Levelwise groups of the algebraically-described named modules."""
    out: dict[int, AbelianGroup] = {}
    for e in arith.divisors(n):
        out[e] = _named_level(n, named, e)
    return LevelwiseGroup.from_dict(n, out)


def _named_level(n: int, named: NamedMackey, e: int) -> AbelianGroup:
    if named.tag == "Z":
        return AbelianGroup.free(1)
    if named.tag == "Z/I":
        d = named.params[0]
        return AbelianGroup.cyclic(arith.colon(d, e))
    if named.tag == "I":
        return AbelianGroup.free(1)
    if named.tag == "Z(e;d)":
        from . import complexes

        return complexes.z_ed_levels(n, named.params[0], named.params[1]).at(e)
    if named.tag == "DirectSum":
        out = AbelianGroup.zero()
        for p in named.parts:
            out = out.direct_sum(_named_level(n, p, e))
        return out
    raise ValueError(f"no level data for {named.tag}")


@dataclass(frozen=True)
class RestrictionData:
    """Cokernels of the restriction maps from the top level Theta_1 down to
    each orbit level; the recognizers key off surjectivity and the cokernel
    orders."""

    n: int
    cokernels: tuple[tuple[int, AbelianGroup], ...]

    def coker(self, e: int) -> AbelianGroup:
        for lvl, g in self.cokernels:
            if lvl == e:
                return g
        raise KeyError(e)

    def surjective(self, e: int) -> bool:
        return self.coker(e).is_zero()


def recognize(levels: LevelwiseGroup, meta: RestrictionData | None) -> NamedMackey:
    """Match levelwise data against the basic named modules.

    Conservative: a name is returned only when every level (and, where it
    matters, every restriction cokernel) matches exactly; otherwise
    Unrecognized.
    """
    n = levels.n
    divs = arith.divisors(n)
    if levels.is_zero():
        return ZERO_MACKEY

    ranks = {e: levels.at(e).rank for e in divs}
    torsions = {e: levels.at(e).torsion for e in divs}

    if all(ranks[e] == 1 and not torsions[e] for e in divs):
        # constant Z versus an ideal I_d: told apart by restriction cokernels
        if meta is None:
            return NamedMackey("Unrecognized")
        d = meta.coker(n).torsion_order if meta.coker(n).rank == 0 else 0
        if d and n % d == 0:
            ok = all(
                meta.coker(e).rank == 0 and meta.coker(e).torsion_order == math.gcd(d, e)
                for e in divs
            )
            if ok:
                return NamedMackey("Z") if d == 1 else NamedMackey("I", (d,))
        return NamedMackey("Unrecognized")

    if all(ranks[e] == 0 for e in divs):
        g1 = levels.at(1)
        if g1.is_cyclic():
            d = g1.torsion_order
            if n % d == 0 and d > 1:
                pattern = all(
                    torsions[e] == AbelianGroup.cyclic(arith.colon(d, e)).torsion for e in divs
                )
                surj = meta is None or all(meta.surjective(e) for e in divs)
                if pattern and surj:
                    return NamedMackey("Z/I", (d,))
        return NamedMackey("Unrecognized")

    if all(ranks[e] == 1 for e in divs):
        # candidate extension Z(e;d): locate parameters from the top level
        from . import complexes

        g1 = levels.at(1)
        if g1.torsion:
            return NamedMackey("Unrecognized")
        for e0 in divs:
            for d0 in arith.divisors(e0):
                if d0 == 1:
                    continue
                cand = NamedMackey("Z(e;d)", (e0, d0))
                ref = complexes.z_ed_levels(n, e0, d0)
                if all(levels.at(e) == ref.at(e) for e in divs):
                    refmeta = complexes.z_ed_restriction(n, e0, d0)
                    if meta is None or all(
                        meta.coker(e) == refmeta.coker(e) for e in divs
                    ):
                        return cand
    return NamedMackey("Unrecognized")
