import random
from math import gcd

import pytest

from maxcurve.curve import CurveError, FunctionFieldElement, KummerCurve, Place, local_expand, hasse_coeff
from maxcurve.family import family_genus, make_family_curve, make_hermitian
from maxcurve.ff import field_of_size, prime_power
from maxcurve import poly
from maxcurve.places import InsufficientExtension, places_of_degree, places_over


def test_genus_examples(curves):
    assert curves["E2"].genus == 2
    assert curves["E4"].genus == 1
    assert curves["H3"].genus == 3


def test_genus_double_derivation():
    # tame Riemann-Hurwitz against (m - gcd(m, q-1)) / 2 on every family instance with q <= 16
    count = 0
    for q in range(2, 17):
        if prime_power(q) is None:
            continue
        for m in range(2, q * q):
            if (q * q - 1) % m:
                continue
            c = make_family_curve(m, q)
            assert c.genus == family_genus(m, q)
            count += 1
    assert count > 50
    for q in (2, 3, 4):
        assert make_hermitian(q).genus == q * (q - 1) // 2


def test_construction_errors():
    with pytest.raises(CurveError):
        make_family_curve(7, 5)
    with pytest.raises(CurveError):
        KummerCurve(5, 6, [(0, 6)])
    with pytest.raises(CurveError):
        KummerCurve(6, 5, [(0, 1)])


def test_defining_relation(curves):
    for c in curves.values():
        w = c.w()
        assert w * w ** (c.m - 1) == FunctionFieldElement.from_poly(c, c.f)


def test_e4_identity(E4):
    w, z, one = E4.w(), E4.z(), E4.one()
    assert w * w * w == z * (z + one)
    assert (w * w ** 2) / (z + one) == z


@pytest.mark.parametrize("name", ["E4", "H2", "H3", "E2", "E3", "H4"])
def test_inverses(curves, name):
    c = curves[name]
    rng = random.Random(f"inv:{name}")
    for _ in range(100 if name != "H4" else 30):
        a = c.random_element(rng)
        assert a * a.inverse() == c.one()


def test_ring_axioms(E2):
    rng = random.Random(3)
    for _ in range(20):
        a, b, c = (E2.random_element(rng) for _ in range(3))
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert a - a == E2.const(0)


def test_division_by_zero(E2):
    with pytest.raises(ZeroDivisionError):
        E2.one() / E2.const(0)


def test_e2_local_expansions(E2):
    P0 = E2.base_place()
    assert (P0.center, P0.ram_index, P0.degree) == (0, 6, 1)
    exp = local_expand([E2.z(), E2.w()], P0, 12)
    assert exp.series[0].v == 6 and exp.series[1].v == 1
    (Pinf,) = places_over(E2, None)
    exp = local_expand([E2.z(), E2.w()], Pinf, 12)
    assert exp.series[0].v == -6 and exp.series[1].v == -5


@pytest.mark.parametrize("name", ["E4", "H2", "H3", "H4", "E2", "E3"])
def test_chart_residuals(curves, name):
    c = curves[name]
    pls = places_of_degree(c, 1) + places_of_degree(c, 2)[:20]
    for P in pls:
        ch = c.chart(P)
        r = ch.residual(16)
        # zero through 16 terms past the leading order of w^m
        assert r.is_zero_to_precision() and r.prec - c.m * ch.w(16).v >= 16


def test_hasse_coeff_value_and_binomials(E2):
    P = places_of_degree(E2, 1)[5]
    assert P.ram_index == 1
    z = E2.z()
    exp = local_expand([z, z * z * z], P, 10)
    a = P.center
    F = E2.field(1)
    assert hasse_coeff(exp, 0, 0) == a
    # (a + t)^3: t^k coefficient is C(3, k) a^{3-k}
    from math import comb

    for k in range(4):
        assert hasse_coeff(exp, 1, k) == F.mul(comb(3, k) % 5, F.pow(a, 3 - k))


def test_leibniz_consistency_of_expansions(E2):
    rng = random.Random(11)
    P = places_of_degree(E2, 2)[7]
    ch = E2.chart(P)
    for _ in range(5):
        a, b = E2.random_element(rng), E2.random_element(rng)
        lhs = ch.expand(a * b, 12)
        rhs = ch.expand(a, 12) * ch.expand(b, 12)
        top = min(lhs.prec, rhs.prec)
        for k in range(min(lhs.v, rhs.v), top):
            assert lhs.coeff(k) == rhs.coeff(k)


def _fiber_degree(c, a):
    """Residue degree of the places above an unramified rational center: the
    least k with f(a) an m-th power in F_{q^{2k}}."""
    F = c.base
    v = poly.evaluate(F, c.f, a)
    k = 1
    while F.pow(v, (F.order * sum(F.size ** i for i in range(k))) // c.m) != 1:
        k += 1
    return k


def test_fiber_degree_conservation(curves):
    # sum of e * deg over places above a center equals m; fibers needing
    # places of degree > s_max are reported, never truncated
    for c in curves.values():
        F = c.base
        roots = dict(c.factors)
        for a in [None, *F.elements()]:
            if a is not None and a not in roots:
                k = _fiber_degree(c, a)
                if k > 3:
                    with pytest.raises(InsufficientExtension):
                        places_over(c, a, s_max=3)
                    continue
            pl = places_over(c, a, s_max=3)
            assert sum(P.ram_index * P.degree for P in pl) == c.m
            if a is not None and a not in roots:
                assert {P.degree for P in pl} == {k}


def test_branch_data_e2(E2):
    m4 = field_of_size(25).neg(1)
    assert E2.branch_data() == [(0, 1, 1, 6), (m4, 4, 2, 3), (None, -5, 1, 6)]
    assert len(places_over(E2, m4)) == 2
