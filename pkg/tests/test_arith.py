import math
import random

import pytest

from bredon import arith
from bredon.arith import (
    allowable_paths,
    colon,
    ell_parts,
    is_divisor_string,
    lcm,
    lcm_gcd_seq,
    lcm_gcd_seq_bruteforce,
    pairwise_distill,
    y_path,
    y_recursive,
)


def test_colon_basics():
    assert colon(12, 8) == 3
    assert colon(7, 7) == 1
    for x in (1, 2, 17, 360):
        assert colon(x, 1) == x
        assert colon(1, x) == 1


def test_colon_identities_random():
    # the ten arithmetic identities of the colon operation
    rng = random.Random(1)
    for _ in range(10_000):
        x = rng.randrange(1, 10**6)
        y = rng.randrange(1, 10**6)
        z = rng.randrange(1, 10**6)
        g = math.gcd(x, y)
        assert colon(x, y) == x // g                               # (a)
        assert colon(x, y) == colon(x, g)                          # (b)
        assert colon(x, 1) == x and colon(1, x) == 1               # (c)
        assert colon(x, y) == colon(x * z, y * z)                  # (d)
        assert colon(colon(x, y), z) == colon(x, y * z)            # (e)
        if math.gcd(y, z) == 1:
            assert colon(x, y) * z == colon(x * z, y)              # (f)
        assert colon(x, colon(y, z)) == colon(x * z, y) // colon(z, y)          # (g)
        assert colon(x, colon(y, z)) == math.gcd(x * y, x * z) // math.gcd(y, x * z)
        assert colon(x, y) * math.gcd(x, y) * math.gcd(y, z) == colon(x, colon(y, z)) * math.gcd(y, x * z)  # (h)
        assert colon(x, y) == colon(x, y * z) * math.gcd(colon(x, y), z)        # (i)
        if y % z == 0:
            assert lcm(colon(x, y // z), z) == z * colon(x, y)     # (j)


def test_colon_corollary_divisibility():
    rng = random.Random(2)
    for _ in range(2000):
        d1 = rng.randrange(1, 10**4)
        d2 = d1 * rng.randrange(1, 100)
        c = rng.randrange(1, 10**4)
        assert colon(d2, c) % colon(d1, c) == 0
        assert (colon(d2, c) // colon(d1, c)) * d1 == d2 * math.gcd(c, d1) // math.gcd(c, d2)


def test_ell_parts():
    assert ell_parts(45, 3) == (9, 5)
    assert ell_parts(45, 7) == (1, 45)
    assert ell_parts(1, 3) == (1, 1)
    with pytest.raises(ValueError):
        ell_parts(10, 4)
    rng = random.Random(3)
    for _ in range(500):
        d = rng.randrange(1, 10**6)
        for ell in (2, 3, 5, 13):
            a, b = ell_parts(d, ell)
            assert a * b == d and b % ell != 0 and (a == 1 or a % ell == 0)


def test_lcm_gcd_seq_paper_example():
    assert lcm_gcd_seq((15, 9, 18)) == (3, 9, 90)
    assert pairwise_distill((15, 9, 18)) == (3, 9, 90)


def test_lcm_gcd_seq_fixes_divisor_strings():
    for s in [(1,), (2, 4), (3, 9, 45), (1, 1, 5, 10, 40)]:
        assert is_divisor_string(s)
        assert lcm_gcd_seq(s) == s
        assert pairwise_distill(s) == s


def test_lcm_gcd_seq_vs_bruteforce_and_distill():
    assert lcm_gcd_seq((6, 10, 15)) == (1, 30, 30)
    rng = random.Random(4)
    for _ in range(1000):
        s = rng.randrange(1, 6)
        b = tuple(rng.randrange(1, 400) for _ in range(s))
        seq = lcm_gcd_seq(b)
        assert seq == lcm_gcd_seq_bruteforce(b)
        assert seq == pairwise_distill(b)
        assert is_divisor_string(seq)
        assert seq[0] == math.gcd(*b) if s > 1 else seq[0] == b[0]
        assert seq[-1] == lcm(*b)
        assert lcm_gcd_seq(seq) == seq


def test_ell_adic_compatibility():
    rng = random.Random(5)
    for _ in range(300):
        b = tuple(rng.randrange(1, 1000) for _ in range(rng.randrange(1, 5)))
        for ell in (2, 3, 5):
            lhs = tuple(ell_parts(x, ell)[0] for x in lcm_gcd_seq(b))
            rhs = lcm_gcd_seq(tuple(ell_parts(x, ell)[0] for x in b))
            assert lhs == rhs


def test_allowable_paths_k2_generators():
    # the four listed k=2 generators reduce to the stated two-term gcds;
    # the remaining allowable paths are multiples of these
    c = (3, 9)
    d = (1, 27)
    ps = allowable_paths(c, d, explicit=True)
    c1, c2 = c
    d1, d2 = d
    for p in [c1 * c2, d1 * c1 * c2, d1 * d2 * c2, c1 * d2 * c2]:
        assert p in ps.paths_c
    for p in [c1 * d2, d1 * c1 * d2, d1 * d2]:
        assert p in ps.paths_d
    assert ps.end_c == math.gcd(c1 * c2, d1 * d2 * c2)
    assert ps.end_d == math.gcd(c1 * d2, d1 * d2)


def test_allowable_paths_k1():
    ps = allowable_paths((6,), (10,), explicit=True)
    assert ps.end_c == 6
    assert ps.end_d == 10
    assert sorted(ps.paths_c) == [6, 60]
    assert sorted(ps.paths_d) == [10]


def test_allowable_paths_gcd_matches_enumeration():
    rng = random.Random(6)
    for _ in range(300):
        k = rng.randrange(1, 5)
        c = tuple(rng.randrange(1, 60) for _ in range(k))
        d = tuple(rng.randrange(1, 60) for _ in range(k))
        ps = allowable_paths(c, d, explicit=True)
        assert ps.end_c == math.gcd(*ps.paths_c)
        assert ps.end_d == math.gcd(*ps.paths_d)


def test_y_examples():
    # k=1 reduces to the colon operation
    for c1, d1 in [(4, 6), (9, 3), (7, 7), (12, 5)]:
        assert y_recursive((c1,), (d1,)) == colon(c1, d1)
    assert y_recursive((1, 4), (2, 6)) == 2
    assert y_path((1, 4), (2, 6)) == 2


def test_y_counterexample_tuple():
    # suffix products for ((l^3,l^3,l^4),(l,l,l^7)) fail condition (1) but
    # the last-two-entries condition holds, so Y = 1
    ell = 3
    c = (ell**3, ell**3, ell**4)
    d = (ell, ell, ell**7)
    assert c[1] * c[2] % (d[1] * d[2]) != 0 or d[1] * d[2] % (c[1] * c[2]) != 0
    assert (d[2] % (c[1] * c[2])) == 0
    assert y_recursive(c, d) == 1
    assert y_path(c, d) == 1


def _random_divisor_string(rng, n, k):
    ds = arith.divisors(n)
    out = []
    cur = 1
    for _ in range(k):
        mult = rng.choice([m for m in ds if (n // cur) % m == 0])
        cur *= mult
        out.append(cur)
    return tuple(out)


def test_y_path_equals_y_recursive():
    rng = random.Random(7)
    for _ in range(1000):
        k = rng.randrange(1, 5)
        c = _random_divisor_string(rng, 105, k)
        d = _random_divisor_string(rng, 105, k)
        assert y_path(c, d) == y_recursive(c, d)
    for _ in range(500):
        k = rng.randrange(1, 4)
        c = tuple(rng.randrange(1, 200) for _ in range(k))
        d = tuple(rng.randrange(1, 200) for _ in range(k))
        assert y_path(c, d) == y_recursive(c, d)


def test_c_equals_d_gives_one():
    rng = random.Random(8)
    for _ in range(200):
        c = _random_divisor_string(rng, 105, rng.randrange(1, 5))
        assert y_recursive(c, c) == 1
        assert y_path(c, c) == 1


def test_m_equals_m_lemma():
    # Y(c,d) = 1 forces c_k | d_k; Y = 1 both ways forces equality
    rng = random.Random(9)
    seen_equal = 0
    for _ in range(1000):
        k = rng.randrange(1, 4)
        c = _random_divisor_string(rng, 105, k)
        d = _random_divisor_string(rng, 105, k)
        if y_recursive(c, d) == 1:
            assert d[-1] % c[-1] == 0
            if y_recursive(d, c) == 1:
                assert c == d
                seen_equal += 1
    assert seen_equal > 0


def test_m_equals_one_conditions():
    rng = random.Random(10)
    for _ in range(2000):
        k = rng.randrange(1, 5)
        c = _random_divisor_string(rng, 105, k)
        d = _random_divisor_string(rng, 105, k)
        cond1 = all(
            math.prod(d[j:]) % math.prod(c[j:]) == 0 for j in range(k)
        )
        cond2 = k >= 2 and d[-1] % (c[-2] * c[-1]) == 0
        if cond1 or cond2:
            assert y_recursive(c, d) == 1


def test_empty_and_mismatch_errors():
    with pytest.raises(ValueError):
        lcm_gcd_seq(())
    with pytest.raises(ValueError):
        y_recursive((1, 2), (3,))
    with pytest.raises(ValueError):
        allowable_paths((1,), (2, 4))
