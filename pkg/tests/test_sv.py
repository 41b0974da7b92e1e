import json
from collections import Counter
from math import comb

import pytest

from maxcurve.places import nonrational_sample, places_of_degree
from maxcurve.rrspace import semigroup_at
from maxcurve.sv import (
    canonical_system,
    expected_degree_R,
    expected_degree_S,
    frobenius_at,
    order_data,
    orders_at,
    ramification_at,
    system_D,
)

NAMES = ["E4", "H2", "H3", "H4", "E2", "E3"]


def _leading(u, P):
    chart = u.curve.chart(P)
    n = 16
    while True:
        s = chart.expand(u, n)
        if s.c:
            return s.v, s.c[0]
        n *= 2


def _orders_by_valuations(L, P):
    """Orders at a rational P by valuation echelon on the functions
    themselves: repeatedly cancel leading terms until all valuations differ."""
    F = L.curve.base
    fns = list(L.basis)
    done = []
    while fns:
        data = [(_leading(u, P), u) for u in fns]
        data.sort(key=lambda x: x[0][0])
        (v, c), u = data[0]
        done.append(v)
        rest = []
        for (v2, c2), u2 in data[1:]:
            if v2 == v:
                u2 = u2 - u.scale(F.div(c2, c))
            if not u2.is_zero():
                rest.append(u2)
        fns = rest
    shift = min(done)
    return tuple(sorted(x - shift for x in done))


def test_e2_orders_at_rational_places(E2):
    D = system_D(E2)
    hist = Counter(orders_at(D, P) for P in places_of_degree(E2, 1))
    assert hist == {(0, 1, 2, 3, 6): 40, (0, 1, 2, 4, 6): 6}


@pytest.mark.parametrize("name", ["E4", "H2", "H3", "E2", "E3"])
def test_orders_match_valuation_echelon(curves, name):
    c = curves[name]
    D = system_D(c)
    for P in places_of_degree(c, 1):
        assert orders_at(D, P) == _orders_by_valuations(D, P)


def test_orders_match_valuation_echelon_h4(curves):
    c = curves["H4"]
    D = system_D(c)
    for P in places_of_degree(c, 1)[::8]:
        assert orders_at(D, P) == _orders_by_valuations(D, P)


@pytest.mark.parametrize(
    "name, eps, nu, degR, degS",
    [
        ("E4", (0, 1, 2), (0, 2), 9, 18),
        ("H2", (0, 1, 2), (0, 2), 9, 18),
        ("H3", (0, 1, 3), (0, 3), 28, 56),
        ("H4", (0, 1, 4), (0, 4), 65, 130),
        ("E2", (0, 1, 2, 3, 5), (0, 1, 2, 5), 52, 190),
        ("E3", (0, 1, 2, 4), (0, 1, 4), 34, 105),
    ],
)
def test_system_d_invariants(curves, name, eps, nu, degR, degS):
    od = order_data(system_D(curves[name]))
    assert od.epsilon == eps
    assert od.nu == nu
    assert od.degR == degR
    assert od.degS == degS


@pytest.mark.parametrize(
    "name, eps, degR",
    [("E2", (0, 1), 6), ("E3", (0, 1), 6), ("H3", (0, 1, 3), 28), ("H4", (0, 1, 2, 4, 5, 8), 260)],
)
def test_canonical_invariants(curves, name, eps, degR):
    od = order_data(canonical_system(curves[name]))
    assert od.epsilon == eps
    assert od.degR == degR


def test_e2_divisors(E2):
    D, K = order_data(system_D(E2)), order_data(canonical_system(E2))
    rational = set(places_of_degree(E2, 1))
    assert set(D.R.support()) == rational
    assert set(D.S.support()) == rational
    W = set(K.R.support())
    assert len(W) == 6 and W <= rational
    assert all(K.R[P] == 1 for P in W)
    for P in rational:
        assert D.R[P] == (2 if P in W else 1)
        assert D.S[P] == (5 if P in W else 4)


def test_e3_divisors(E3):
    D, K = order_data(system_D(E3)), order_data(canonical_system(E3))
    W = K.R.support()
    assert len(W) == 1
    Q = W[0]
    rational = set(places_of_degree(E3, 1))
    assert set(D.S.support()) == rational | {Q}
    assert sum(D.S[P] == 3 for P in rational) >= 32


@pytest.mark.parametrize("name", NAMES)
def test_closed_form_degrees(curves, name):
    c = curves[name]
    systems = [system_D(c)] + ([canonical_system(c)] if c.genus > 1 else [])
    for L in systems:
        od = order_data(L)
        g, N, d, qq = c.genus, L.N, L.degree, c.q ** 2
        assert od.degR == sum(od.epsilon) * (2 * g - 2) + (N + 1) * d == expected_degree_R(L, od.epsilon)
        assert od.degS == sum(od.nu) * (2 * g - 2) + (qq + N) * d == expected_degree_S(L, od.nu)
        assert od.R.is_effective() and od.S.is_effective()
        assert od.R.degree() == od.degR and od.S.degree() == od.degS


@pytest.mark.parametrize("name", NAMES)
def test_nu_drops_one_order(curves, name):
    od = order_data(system_D(curves[name]))
    assert len(od.nu) == len(od.epsilon) - 1
    assert set(od.nu) < set(od.epsilon)
    assert od.epsilon[:2] == (0, 1)


def _det_mod_p(rows, p):
    M = [[x % p for x in r] for r in rows]
    n = len(M)
    det = 1
    for i in range(n):
        piv = next((r for r in range(i, n) if M[r][i]), None)
        if piv is None:
            return 0
        M[i], M[piv] = M[piv], M[i]
        det = det * M[i][i] % p
        inv = pow(M[i][i], -1, p)
        for r in range(i + 1, n):
            f = M[r][i] * inv % p
            M[r] = [(a - f * b) % p for a, b in zip(M[r], M[i])]
    return det


@pytest.mark.parametrize("name", NAMES)
def test_ramification_weight_bound(curves, name):
    c = curves[name]
    D = system_D(c)
    eps = order_data(D).epsilon
    places = places_of_degree(c, 1) + nonrational_sample(c, 6, seed=3)
    for P in places:
        j = orders_at(D, P)
        assert all(a >= b for a, b in zip(j, eps))
        weight = sum(a - b for a, b in zip(j, eps))
        v = ramification_at(D, P, eps)
        assert v >= weight
        if _det_mod_p([[comb(a, b) for b in eps] for a in j], c.base.p):
            assert v == weight


@pytest.mark.parametrize("name", NAMES)
def test_frobenius_inequality_at_rational_places(curves, name):
    c = curves[name]
    D = system_D(c)
    nu = order_data(D).nu
    for P in places_of_degree(c, 1):
        j = orders_at(D, P)
        assert frobenius_at(D, P, nu) >= sum(j[i] - nu[i - 1] for i in range(1, len(j)))


@pytest.mark.parametrize("name", NAMES)
def test_orders_and_semigroup_at_rational_places(curves, name):
    # for D the orders at a rational P are q+1 - (non-gaps up to q+1)
    c = curves[name]
    D = system_D(c)
    for P in places_of_degree(c, 1)[:10]:
        ng = [k for k in semigroup_at(c, P).nongaps if k <= c.q + 1]
        assert orders_at(D, P) == tuple(sorted(c.q + 1 - k for k in ng))
        assert orders_at(D, P)[-1] == c.q + 1


def test_order_data_json(E2):
    d = order_data(system_D(E2)).to_dict()
    text = json.dumps(d, sort_keys=True)
    back = json.loads(text)
    assert back["epsilon"] == [0, 1, 2, 3, 5]
    assert sum(r["coeff"] * r["degree"] for r in back["S"]) == 190
