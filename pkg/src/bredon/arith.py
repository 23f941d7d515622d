"""Divisor combinatorics: gcd/lcm strings, the colon operation, path gcds.

Everything here is pure arbitrary-precision integer arithmetic.  Divisor
tuples are ordinary tuples of positive integers; a *divisor string* is a
tuple in which each entry divides the next.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations


def gcd(*xs: int) -> int:
    return math.gcd(*xs) if xs else 0


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out


def colon(x: int, y: int) -> int:
    """The colon operation x:y = x/gcd(x,y) on positive integers."""
    if x < 1 or y < 1:
        raise ValueError("colon is defined for positive integers")
    return x // math.gcd(x, y)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def ell_parts(d: int, ell: int) -> tuple[int, int]:
    """Split d = d(ell) * d(ell-hat) into the ell-power part and the rest."""
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if d < 1:
        raise ValueError("d must be positive")
    part = 1
    while d % ell == 0:
        d //= ell
        part *= ell
    return part, d


def ell_part(d: int, ell: int) -> int:
    return ell_parts(d, ell)[0]


def factorize(x: int) -> dict[int, int]:
    """Prime factorization by trial division (inputs here are small)."""
    out: dict[int, int] = {}
    p = 2
    while p * p <= x:
        while x % p == 0:
            out[p] = out.get(p, 0) + 1
            x //= p
        p += 1 if p == 2 else 2
    if x > 1:
        out[x] = out.get(x, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    """Sorted list of positive divisors of n."""
    if n < 1:
        raise ValueError("n must be positive")
    out = [1]
    for p, e in factorize(n).items():
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def is_divisor_string(seq) -> bool:
    seq = tuple(seq)
    if any(x < 1 for x in seq):
        return False
    return all(seq[i + 1] % seq[i] == 0 for i in range(len(seq) - 1))


def lcm_gcd_seq(b: tuple[int, ...] | list[int]) -> tuple[int, ...]:
    """The divisor string associated to a tuple: entry j is the gcd of all
    (j+1)-fold lcms.

    Computed per prime: the j-th entry takes the j-th smallest exponent
    appearing among the factorizations.  (The brute-force definition over
    all j-fold lcms is used as an independent oracle in the tests.)
    """
    b = tuple(b)
    if not b:
        raise ValueError("lcm_gcd_seq needs a nonempty tuple")
    if any(x < 1 for x in b):
        raise ValueError("entries must be positive")
    s = len(b)
    exps: dict[int, list[int]] = {}
    for x in b:
        for p, e in factorize(x).items():
            exps.setdefault(p, []).append(e)
    out = [1] * s
    for p, es in exps.items():
        es = sorted(es) + [0] * (s - len(es))
        es.sort()
        for j in range(s):
            out[j] *= p ** es[j]
    return tuple(out)


def lcm_gcd_seq_bruteforce(b: tuple[int, ...] | list[int]) -> tuple[int, ...]:
    """Direct definition: gcd over all j-fold lcms.  Test oracle."""
    b = tuple(b)
    if not b:
        raise ValueError("lcm_gcd_seq needs a nonempty tuple")
    return tuple(gcd(*(lcm(*c) for c in combinations(b, j))) for j in range(1, len(b) + 1))


def pairwise_distill(b: tuple[int, ...] | list[int]) -> tuple[int, ...]:
    """Apply x,y -> (gcd, lcm) to pairs until the tuple is a divisor string."""
    cur = list(b)
    if not cur:
        raise ValueError("pairwise_distill needs a nonempty tuple")
    changed = True
    while changed:
        changed = False
        for i in range(len(cur)):
            for j in range(i + 1, len(cur)):
                x, y = cur[i], cur[j]
                if y % x != 0:
                    cur[i], cur[j] = math.gcd(x, y), lcm(x, y)
                    changed = True
        cur.sort()
    return tuple(cur)


def distill_moves(b: tuple[int, ...] | list[int]) -> tuple[tuple[int, ...], list[tuple[int, int]]]:
    """Like pairwise_distill but also returns the list of (x, y) moves applied,
    skipping pairs that were already comparable."""
    cur = list(b)
    moves: list[tuple[int, int]] = []
    changed = True
    while changed:
        changed = False
        for i in range(len(cur)):
            for j in range(i + 1, len(cur)):
                x, y = cur[i], cur[j]
                if x % y != 0 and y % x != 0:
                    moves.append((x, y))
                    cur[i], cur[j] = math.gcd(x, y), lcm(x, y)
                    changed = True
    return tuple(sorted(cur)), moves


@dataclass
class PathSet:
    """Gcds of the path products through the 2 x (k+1) array, split by endpoint.

    ``end_c``/``end_d`` are the gcds over allowable paths ending at c_k resp.
    d_k.  When built with ``explicit=True`` the individual path products are
    kept as well (exponentially many; tests only).
    """

    end_c: int
    end_d: int
    paths_c: list[int] = field(default_factory=list)
    paths_d: list[int] = field(default_factory=list)


def allowable_paths(c: tuple[int, ...], d: tuple[int, ...], explicit: bool = False) -> PathSet:
    """Paths start at the initial 1, stepping right (R), up-right (UR) or
    down (D) through the array

        .  d1 d2 ... dk
        1  c1 c2 ... ck

    and multiply every entry they visit.  Gcds are accumulated column by
    column, which is exact because gcd commutes with multiplication by the
    fixed column entry.
    """
    c, d = tuple(c), tuple(d)
    if len(c) != len(d):
        raise ValueError("allowable_paths needs equal-length tuples")
    k = len(c)
    if k == 0:
        raise ValueError("allowable_paths needs nonempty tuples")
    bot, top = 1, 0  # gcds of path products ending at bottom/top of the column
    for j in range(k):
        top = math.gcd(bot * d[j], top * d[j])
        bot = math.gcd(bot * c[j], top * c[j])
    ps = PathSet(end_c=bot, end_d=top)
    if explicit:
        bots, tops = [1], []
        for j in range(k):
            tops = [p * d[j] for p in bots] + [p * d[j] for p in tops]
            bots = [p * c[j] for p in bots] + [p * c[j] for p in tops]
        ps.paths_c, ps.paths_d = bots, tops
    return ps


def y_recursive(c: tuple[int, ...], d: tuple[int, ...]) -> int:
    """The integrality constant Y: Y_0 = 1, Y_j = ((c_j * Y_{j-1} : d_j), c_j)."""
    c, d = tuple(c), tuple(d)
    if len(c) != len(d):
        raise ValueError("y_recursive needs equal-length tuples")
    y = 1
    for cj, dj in zip(c, d):
        if cj < 1 or dj < 1:
            raise ValueError("entries must be positive")
        y = math.gcd(colon(cj * y, dj), cj)
    return y


def y_path(c: tuple[int, ...], d: tuple[int, ...]) -> int:
    """Y computed from allowable-path gcds: (E)/(E, F)."""
    c, d = tuple(c), tuple(d)
    if len(c) != len(d):
        raise ValueError("y_path needs equal-length tuples")
    if not c:
        return 1
    ps = allowable_paths(c, d)
    return ps.end_c // math.gcd(ps.end_c, ps.end_d)


def pad_to_equal_length(c: tuple[int, ...], d: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Left-pad the shorter tuple with 1s (u_1 = 1, so this is harmless)."""
    c, d = tuple(c), tuple(d)
    k = max(len(c), len(d))
    return (1,) * (k - len(c)) + c, (1,) * (k - len(d)) + d


def associated_pair(c: tuple[int, ...], d: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Pad to equal length and replace both tuples by their divisor strings."""
    c, d = pad_to_equal_length(c, d)
    return lcm_gcd_seq(c) if c else (), lcm_gcd_seq(d) if d else ()
