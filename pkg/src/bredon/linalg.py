"""Exact integer linear algebra: Smith form, kernels, lattice quotients.

Matrices come in two flavors.  The sparse form is a list of row dicts
``{col: value}`` together with a column count, and is what the homology
engine feeds to :func:`smith_invariants`.  The dense form (list of lists)
is used by the small computations that need unimodular transforms.

Cokernel invariants are extracted without any divisibility bookkeeping
during elimination: once a pivot divides its row and column it is split
off as a cyclic summand, and the final multiset of diagonal entries is
distilled into a divisor chain by repeated gcd/lcm moves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import arith


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with x*a + y*b == g == gcd(a, b) >= 0."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


@dataclass(frozen=True)
class AbelianGroup:
    """Finitely generated abelian group: free rank plus invariant factors.

    ``torsion`` is the chain t_1 | t_2 | ... with every t_i >= 2.
    """

    rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        if any(t < 2 for t in self.torsion):
            raise ValueError("invariant factors must be >= 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a != 0:
                raise ValueError("invariant factors must form a divisor chain")

    @staticmethod
    def from_diagonal(diag, free_rank: int = 0) -> "AbelianGroup":
        """Group ⊕ Z/d over the diagonal entries (d=0 adds a free summand)."""
        tors = [abs(d) for d in diag if abs(d) > 1]
        free_rank += sum(1 for d in diag if d == 0)
        if tors:
            tors = [t for t in arith.pairwise_distill(tuple(tors)) if t > 1]
        return AbelianGroup(free_rank, tuple(tors))

    @staticmethod
    def zero() -> "AbelianGroup":
        return AbelianGroup(0, ())

    @staticmethod
    def free(rank: int) -> "AbelianGroup":
        return AbelianGroup(rank, ())

    @staticmethod
    def cyclic(order: int) -> "AbelianGroup":
        if order == 0:
            return AbelianGroup(1, ())
        return AbelianGroup(0, (order,)) if order > 1 else AbelianGroup(0, ())

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def is_cyclic(self) -> bool:
        return self.rank + len(self.torsion) <= 1

    @property
    def torsion_order(self) -> int:
        out = 1
        for t in self.torsion:
            out *= t
        return out

    def direct_sum(self, other: "AbelianGroup") -> "AbelianGroup":
        return AbelianGroup.from_diagonal(self.torsion + other.torsion, self.rank + other.rank)

    def __str__(self) -> str:
        parts = ["Z"] * self.rank + [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# sparse elimination


def smith_invariants(rows: list[dict[int, int]], ncols: int) -> tuple[int, list[int]]:
    """Rank and invariant factors (>1 only) of an integer matrix.

    ``rows`` is consumed destructively.  Pivots are chosen from rows of
    minimal length (preferring unit entries in thin columns), which keeps
    fill-in low without rescanning the matrix.
    """
    row_of: dict[int, dict[int, int]] = {i: r for i, r in enumerate(rows) if r}
    col_of: dict[int, set[int]] = {}
    for i, r in row_of.items():
        for j in r:
            col_of.setdefault(j, set()).add(i)
    buckets: dict[int, set[int]] = {}
    for i, r in row_of.items():
        buckets.setdefault(len(r), set()).add(i)

    def rebucket(i: int, old: int) -> None:
        new = len(row_of[i])
        if new == old:
            return
        b = buckets[old]
        b.discard(i)
        if not b:
            del buckets[old]
        buckets.setdefault(new, set()).add(i)

    def drop(i: int, j: int) -> None:
        old = len(row_of[i])
        del row_of[i][j]
        rebucket(i, old)
        c = col_of[j]
        c.discard(i)
        if not c:
            del col_of[j]

    def put(i: int, j: int, v: int) -> None:
        r = row_of[i]
        if v:
            old = len(r)
            r[j] = v
            rebucket(i, old)
            col_of.setdefault(j, set()).add(i)
        elif j in r:
            drop(i, j)

    def add_row(src: int, dst: int, mult: int) -> None:
        # row[dst] += mult * row[src]
        for j, v in list(row_of[src].items()):
            put(dst, j, row_of[dst].get(j, 0) + mult * v)

    def add_col(src: int, dst: int, mult: int) -> None:
        for i in list(col_of.get(src, ())):
            put(i, dst, row_of[i].get(dst, 0) + mult * row_of[i][src])

    def remove_row(i: int) -> None:
        b = buckets[len(row_of[i])]
        b.discard(i)
        if not b:
            del buckets[len(row_of[i])]
        for j in list(row_of[i]):
            c = col_of[j]
            c.discard(i)
            if not c:
                del col_of[j]
        del row_of[i]

    diag: list[int] = []
    while buckets:
        # shortest rows first; among a few of them prefer a unit entry
        # sitting in the thinnest column
        min_len = min(buckets)
        if min_len == 0:
            for i in list(buckets[0]):
                remove_row(i)
            continue
        best = None
        best_key = None
        for i in list(buckets[min_len])[:8]:
            for j, v in row_of[i].items():
                key = (abs(v) != 1, len(col_of[j]), abs(v))
                if best_key is None or key < best_key:
                    best_key = key
                    best = (i, j)
            if best_key is not None and not best_key[0]:
                break
        pi, pj = best

        # shrink the pivot until it divides its column and row
        while True:
            p = row_of[pi][pj]
            moved = False
            for i in list(col_of[pj]):
                if i == pi:
                    continue
                v = row_of[i][pj]
                if v % p != 0:
                    add_row(pi, i, -(v // p))
                    if abs(row_of.get(i, {}).get(pj, 0)) < abs(p):
                        pi = i
                        moved = True
                        break
            if moved:
                continue
            p = row_of[pi][pj]
            bad = None
            for j, v in row_of[pi].items():
                if j != pj and v % p != 0:
                    bad = j
                    break
            if bad is None:
                break
            add_col(pj, bad, -(row_of[pi][bad] // p))
            q = row_of[pi].get(bad, 0)
            if q and abs(q) < abs(p):
                pj = bad

        p = row_of[pi][pj]
        for i in list(col_of[pj]):
            if i != pi:
                add_row(pi, i, -(row_of[i][pj] // p))
        # pivot row entries are multiples of p; column ops only touch row pi now
        remove_row(pi)
        diag.append(abs(p))

    rank = len(diag)
    tors = [d for d in diag if d > 1]
    if tors:
        tors = [t for t in arith.pairwise_distill(tuple(tors)) if t > 1]
    return rank, tors


def cokernel(rows: list[dict[int, int]], nrows: int, ncols: int) -> AbelianGroup:
    """Z^nrows / column span of the matrix."""
    rank, tors = smith_invariants([dict(r) for r in rows], ncols)
    return AbelianGroup(nrows - rank, tuple(tors))


# ---------------------------------------------------------------------------
# dense algorithms with transforms (small matrices)


def _identity(k: int) -> list[list[int]]:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    if not a or not b:
        return [[0] * (len(b[0]) if b else 0) for _ in a]
    bn = len(b[0])
    return [[sum(ra[k] * b[k][j] for k in range(len(b))) for j in range(bn)] for ra in a]


def mat_vec(a: list[list[int]], v: list[int]) -> list[int]:
    return [sum(r[k] * v[k] for k in range(len(v))) for r in a]


def smith_normal_form(a: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Dense Smith form with transforms: returns (d, u, v) with u*a*v = d,
    d diagonal with a divisor chain, u and v unimodular."""
    m = len(a)
    n = len(a[0]) if m else 0
    d = [row[:] for row in a]
    u = _identity(m)
    v = _identity(n)

    def rop(i1, i2, q):  # row i2 -= q * row i1
        for j in range(n):
            d[i2][j] -= q * d[i1][j]
        for j in range(m):
            u[i2][j] -= q * u[i1][j]

    def cop(j1, j2, q):  # col j2 -= q * col j1
        for i in range(m):
            d[i][j2] -= q * d[i][j1]
        for i in range(n):
            v[i][j2] -= q * v[i][j1]

    def rswap(i1, i2):
        d[i1], d[i2] = d[i2], d[i1]
        u[i1], u[i2] = u[i2], u[i1]

    def cswap(j1, j2):
        for i in range(m):
            d[i][j1], d[i][j2] = d[i][j2], d[i][j1]
        for i in range(n):
            v[i][j1], v[i][j2] = v[i][j2], v[i][j1]

    t = 0
    while True:
        # find a pivot in the submatrix at (t, t)
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if d[i][j] and (piv is None or abs(d[i][j]) < abs(d[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        rswap(t, piv[0])
        cswap(t, piv[1])
        while True:
            # clear column t by row ops, restarting if a remainder appears
            restart = False
            for i in range(t + 1, m):
                if d[i][t]:
                    q = d[i][t] // d[t][t]
                    rop(t, i, q)
                    if d[i][t]:
                        rswap(t, i)
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, n):
                if d[t][j]:
                    q = d[t][j] // d[t][t]
                    cop(t, j, q)
                    if d[t][j]:
                        cswap(t, j)
                        restart = True
                        break
            if not restart:
                break
        t += 1

    # enforce the divisor chain on the diagonal with 2x2 unimodular moves:
    # diag(a, b) ~ diag(gcd, lcm)
    r = t
    for i in range(r):
        for j in range(i + 1, r):
            a_, b_ = d[i][i], d[j][j]
            if b_ % a_ == 0:
                continue
            g, x, y = xgcd(a_, b_)
            l = a_ // g * b_
            u2 = ((x, y), (-(b_ // g), a_ // g))
            v2 = ((1, -(y * (b_ // g))), (1, x * (a_ // g)))
            for col in range(n):
                ri, rj = d[i][col], d[j][col]
                d[i][col] = u2[0][0] * ri + u2[0][1] * rj
                d[j][col] = u2[1][0] * ri + u2[1][1] * rj
            for col in range(m):
                ri, rj = u[i][col], u[j][col]
                u[i][col] = u2[0][0] * ri + u2[0][1] * rj
                u[j][col] = u2[1][0] * ri + u2[1][1] * rj
            for row in range(m):
                ci, cj = d[row][i], d[row][j]
                d[row][i] = ci * v2[0][0] + cj * v2[1][0]
                d[row][j] = ci * v2[0][1] + cj * v2[1][1]
            for row in range(n):
                ci, cj = v[row][i], v[row][j]
                v[row][i] = ci * v2[0][0] + cj * v2[1][0]
                v[row][j] = ci * v2[0][1] + cj * v2[1][1]
            assert d[i][i] == g and d[j][j] == l and d[i][j] == 0 and d[j][i] == 0
    for i in range(min(m, n)):
        if d[i][i] < 0:
            for j in range(n):
                v[j][i] = -v[j][i]
            d[i][i] = -d[i][i]
    return d, u, v


def smith_diagonal(a: list[list[int]]) -> list[int]:
    d, _, _ = smith_normal_form(a)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]


def integer_kernel(a: list[list[int]]) -> list[list[int]]:
    """Basis (as columns) of {x : a @ x = 0}; spans the saturated kernel lattice."""
    m = len(a)
    n = len(a[0]) if m else 0
    if n == 0:
        return []
    d, _, v = smith_normal_form(a)
    r = sum(1 for i in range(min(m, n)) if d[i][i])
    return [[v[i][j] for j in range(r, n)] for i in range(n)]


def solve_integer(a: list[list[int]], b: list[int]) -> list[int] | None:
    """One integer solution of a @ x = b, or None."""
    m = len(a)
    n = len(a[0]) if m else 0
    d, u, v = smith_normal_form(a)
    c = mat_vec(u, b)
    y = [0] * n
    for i in range(m):
        di = d[i][i] if i < n else 0
        if di:
            if c[i] % di != 0:
                return None
            y[i] = c[i] // di
        elif c[i] != 0:
            return None
    return mat_vec(v, y)


def hnf_column_basis(cols: list[list[int]], dim: int) -> list[list[int]]:
    """Basis (list of columns) of the lattice spanned by the given columns."""
    # column-style Hermite elimination keyed by topmost nonzero row
    pivots: dict[int, list[int]] = {}
    for col in cols:
        cur = list(col)
        while True:
            i = next((k for k in range(dim) if cur[k]), None)
            if i is None:
                break
            if i not in pivots:
                if cur[i] < 0:
                    cur = [-x for x in cur]
                pivots[i] = cur
                break
            p = pivots[i]
            g, x, y = xgcd(p[i], cur[i])
            pn = [x * p[k] + y * cur[k] for k in range(dim)]
            cn = [(p[i] // g) * cur[k] - (cur[i] // g) * p[k] for k in range(dim)]
            pivots[i] = pn
            cur = cn
    return [pivots[i] for i in sorted(pivots)]


def quotient_lattice(num_cols: list[list[int]], den_cols: list[list[int]], dim: int) -> AbelianGroup:
    """The group (N + D)/D where N, D are lattices in Z^dim given by columns."""
    ambient = hnf_column_basis([c for c in num_cols] + [c for c in den_cols], dim)
    if not ambient:
        return AbelianGroup.zero()
    amb_mat = [[ambient[j][i] for j in range(len(ambient))] for i in range(dim)]
    rel_cols = []
    for c in den_cols:
        y = solve_integer(amb_mat, list(c))
        if y is None:
            raise ValueError("denominator lattice is not contained in the span")
        rel_cols.append(y)
    k = len(ambient)
    if not rel_cols:
        return AbelianGroup.free(k)
    rel = [[rc[i] for rc in rel_cols] for i in range(k)]
    diag = smith_diagonal(rel)
    return AbelianGroup.from_diagonal(diag, k - len(diag))
