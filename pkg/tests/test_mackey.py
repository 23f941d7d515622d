import math
import random

import pytest

from bredon import arith, complexes, mackey
from bredon.linalg import AbelianGroup
from bredon.mackey import (
    SpanMorphism,
    bracket,
    box_spans,
    i_pi,
    identity,
    ipi_rpi,
    r_pi,
    recognize,
    rt,
    span_basis,
    special,
)

N = 45
DIVS = [1, 3, 5, 9, 15, 45]


def _rand_span(rng, n, b, c):
    g = math.gcd(b, c)
    return SpanMorphism(n, b, c, tuple(rng.randrange(-4, 5) for _ in range(g)))


def test_span_basis_sizes():
    assert len(span_basis(N, 9, 15)) == 3
    assert len(span_basis(N, 1, 9)) == 1
    assert len(span_basis(N, 9, 9)) == 9
    with pytest.raises(ValueError):
        span_basis(N, 2, 9)


def test_identity_is_basis_zero():
    for d in DIVS:
        e = identity(N, d)
        assert e.coeffs[0] == 1 and all(c == 0 for c in e.coeffs[1:])


def test_vector_roundtrip():
    rng = random.Random(0)
    for b in DIVS:
        for c in DIVS:
            for _ in range(5):
                f = _rand_span(rng, N, b, c)
                assert SpanMorphism.from_vector(N, b, c, f.vector()) == f


def test_compose_identity_neutral():
    rng = random.Random(1)
    for b in DIVS:
        for c in DIVS:
            f = _rand_span(rng, N, b, c)
            assert identity(N, c).compose(f) == f
            assert f.compose(identity(N, b)) == f


def test_compose_associative_bilinear():
    rng = random.Random(2)
    for _ in range(300):
        b, c, d, e = (rng.choice(DIVS) for _ in range(4))
        f = _rand_span(rng, N, b, c)
        g = _rand_span(rng, N, c, d)
        h = _rand_span(rng, N, d, e)
        assert h.compose(g.compose(f)) == h.compose(g).compose(f)
        g2 = _rand_span(rng, N, c, d)
        assert (g + g2).compose(f) == g.compose(f) + g2.compose(f)


def test_compose_matches_level_matrices():
    rng = random.Random(3)
    for _ in range(100):
        b, c, d = (rng.choice(DIVS) for _ in range(3))
        f = _rand_span(rng, N, b, c)
        g = _rand_span(rng, N, c, d)
        for e in (1, 9, 45):
            mf = f.matrix_at_level(e)
            mg = g.matrix_at_level(e)
            mgf = g.compose(f).matrix_at_level(e)
            prod = [
                [sum(mg[i][k] * mf[k][j] for k in range(len(mf))) for j in range(len(mf[0]))]
                for i in range(len(mg))
            ]
            assert prod == mgf


def test_normity_facts():
    assert ipi_rpi(N, 9, 15).normity == 3
    for d in DIVS:
        assert identity(N, d).normity == 1
        for e in DIVS:
            assert ipi_rpi(N, d, e).normity == math.gcd(d, e)
    assert bracket(N, 9, 9, (2, -1, 0, 0, 0, 0, 0, 0, 0)).normity == 1


def test_special_morphisms():
    # transfer then projection through F_d multiplies by d
    for d in DIVS:
        comp = r_pi(N, d).compose(i_pi(N, d))
        assert comp == identity(N, 1).scale(d)
    # IpiRpi is the all-ones bracket
    for b in DIVS:
        for c in DIVS:
            g = math.gcd(b, c)
            assert ipi_rpi(N, b, c) == bracket(N, b, c, (1,) * g)
    assert special(N, "Rt", 9, 9) == rt(N, 9)
    with pytest.raises(ValueError):
        special(N, "Rpi", 9, 3)


def test_rt_has_order_d():
    for d in DIVS:
        f = rt(N, d)
        acc = identity(N, d)
        for _ in range(d):
            acc = f.compose(acc)
        assert acc == identity(N, d)


def test_evaluate_levels():
    assert mackey.FreeModule(N, (9,)).rank_at_level(1) == 1
    assert mackey.FreeModule(N, (9,)).rank_at_level(9) == 9
    assert mackey.FreeModule(N, (9,)).rank_at_level(15) == 3
    assert mackey.evaluate(mackey.FreeModule(N, (9, 15)), 45) == 24


def test_ipi_rpi_composition_factor():
    # through-the-bottom maps compose with a factor of the middle orbit size
    for c in DIVS:
        for d in DIVS:
            for e in DIVS:
                lhs = ipi_rpi(N, d, e).compose(ipi_rpi(N, c, d))
                assert lhs == ipi_rpi(N, c, e).scale(d)


def test_lifting_normity_rules():
    # bracket o IpiRpi and IpiRpi o bracket reduce to multiples of IpiRpi
    rng = random.Random(4)
    for _ in range(200):
        x, y, z = (rng.choice(DIVS) for _ in range(3))
        m = _rand_span(rng, N, y, z)
        s = m.normity
        lhs = m.compose(ipi_rpi(N, x, y))
        assert lhs == ipi_rpi(N, x, z).scale(s * arith.colon(y, z))
        m2 = _rand_span(rng, N, x, y)
        rhs = ipi_rpi(N, y, z).compose(m2)
        assert rhs == ipi_rpi(N, x, z).scale(m2.normity * arith.colon(y, x))


def test_lift_across_one_minus_t():
    # a bracket lifts across id - Rt exactly when its normity vanishes
    rng = random.Random(5)
    for _ in range(200):
        c, d = rng.choice(DIVS), rng.choice(DIVS)
        f = _rand_span(rng, N, c, d)
        one_minus = identity(N, d) - rt(N, d)
        # solve (id - Rt) X = f in the hom lattice
        basis = span_basis(N, c, d)
        cols = [one_minus.compose(b).coeffs for b in basis]
        mat = [[cols[j][i] for j in range(len(basis))] for i in range(len(f.coeffs))]
        from bredon.linalg import solve_integer

        sol = solve_integer(mat, list(f.coeffs))
        assert (sol is not None) == (f.normity == 0)


def test_commuting_square_classification():
    # f commutes with id - Rt on both sides iff f = bracket + w * IpiRpi,
    # i.e. iff f and the bracket part differ by a constant vector
    rng = random.Random(6)
    for _ in range(200):
        c, d = rng.choice(DIVS), rng.choice(DIVS)
        m = _rand_span(rng, N, c, d)
        w = rng.randrange(-3, 4)
        f = m + ipi_rpi(N, c, d).scale(w)
        lhs = (identity(N, d) - rt(N, d)).compose(f)
        rhs = m.compose(identity(N, c) - rt(N, c))
        assert lhs == (identity(N, d) - rt(N, d)).compose(m)
        assert rhs == f.compose(identity(N, c) - rt(N, c))


def test_dual_swaps_induction_restriction():
    assert r_pi(N, 9).dual() == i_pi(N, 9)
    assert i_pi(N, 9).dual() == r_pi(N, 9)
    rng = random.Random(7)
    for _ in range(100):
        b, c = rng.choice(DIVS), rng.choice(DIVS)
        f = _rand_span(rng, N, b, c)
        assert f.dual().dual() == f
        g = _rand_span(rng, N, c, rng.choice(DIVS))
        assert g.compose(f).dual() == f.dual().compose(g.dual())


def test_box_spans_with_unit():
    rng = random.Random(8)
    for _ in range(50):
        b, c = rng.choice(DIVS), rng.choice(DIVS)
        f = _rand_span(rng, N, b, c)
        blocks = box_spans(f, identity(N, 1))
        assert set(blocks) == {(0, 0)}
        assert blocks[(0, 0)] == f
        blocks = box_spans(identity(N, 1), f)
        assert blocks[(0, 0)] == f


def test_box_spans_compose():
    # boxing is functorial: (g o f) box (k o h) = (g box k) o (f box h)
    rng = random.Random(9)
    for _ in range(30):
        b1, b2, b3 = (rng.choice(DIVS) for _ in range(3))
        c1, c2, c3 = (rng.choice(DIVS) for _ in range(3))
        f = _rand_span(rng, N, b1, b2)
        g = _rand_span(rng, N, b2, b3)
        h = _rand_span(rng, N, c1, c2)
        k = _rand_span(rng, N, c2, c3)
        lhs = box_spans(g.compose(f), k.compose(h))
        fh = box_spans(f, h)
        gk = box_spans(g, k)
        comp = {}
        for (j0, j1), s1 in fh.items():
            for (j1b, j2), s2 in gk.items():
                if j1 == j1b:
                    t = s2.compose(s1)
                    key = (j0, j2)
                    comp[key] = comp[key] + t if key in comp else t
        comp = {k2: v for k2, v in comp.items() if not v.is_zero()}
        lhs = {k2: v for k2, v in lhs.items() if not v.is_zero()}
        assert lhs == comp


def test_recognize_constant_and_quotients():
    # constant ring from its one-term complex
    c = complexes.constant_complex(N)
    h = complexes.homology(c)
    lw, named = h[0]
    assert named.tag == "Z"

    # Z/I_d as the cokernel of the ideal inclusion, realized in degree 0 of
    # the sphere complex; I_d from the dual sphere
    for d in (3, 9, 45):
        hs = complexes.homology(complexes.sphere(N, d))
        assert hs[0][1] == mackey.NamedMackey("Z/I", (d,))
        assert hs[2][1].tag == "Z"
        hd = complexes.homology(complexes.sphere_dual(N, d))
        assert hd[-2][1] == mackey.NamedMackey("I", (d,))


def test_recognize_zero_and_unrecognized():
    lw = mackey.LevelwiseGroup.from_dict(
        N, {e: AbelianGroup.zero() for e in DIVS}
    )
    assert recognize(lw, None).tag == "DirectSum"
    weird = mackey.LevelwiseGroup.from_dict(
        N, {e: AbelianGroup(0, (4,)) for e in DIVS}
    )
    assert recognize(weird, None).tag == "Unrecognized"


def test_recognize_extension_module():
    # knight-move groups are the nontrivial extensions Z(b;(b,c))
    x = complexes.box(complexes.sphere(N, 15), complexes.sphere_dual(N, 9))
    h = complexes.homology(x)
    lw, named = h[0]
    assert named == mackey.NamedMackey("Z(e;d)", (9, 3))
