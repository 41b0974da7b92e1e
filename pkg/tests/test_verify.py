import json

import pytest

from maxcurve.places import Divisor, places_of_degree, principal_divisor
from maxcurve.verify import CHECKS, Context, fundamental_witness, run_all, run_check
from maxcurve.rrspace import rr_basis

NAMES = ["E4", "H2", "H3", "H4", "E2", "E3"]


@pytest.fixture(scope="module")
def reports(curves):
    return {name: {r.name: r for r in run_all(Context(c, seed=7))} for name, c in curves.items()}


@pytest.mark.parametrize("name", NAMES)
def test_no_check_fails(reports, name):
    failed = [k for k, r in reports[name].items() if r.status == "fail"]
    assert failed == []


def test_all_checks_ran(reports):
    for rep in reports.values():
        assert list(rep) == list(CHECKS)


@pytest.mark.parametrize("name", ["H3", "H4"])
def test_nonclassical_hermitian_is_inapplicable(reports, name):
    assert reports[name]["eq3"].status == "inapplicable"
    assert reports[name]["q21"].status == "inapplicable"


@pytest.mark.parametrize("name", ["E2", "E3", "E4"])
def test_eq3_and_q21_pass(reports, name):
    assert reports[name]["eq3"].status == "pass"
    assert reports[name]["q21"].status == "pass"


def test_eq3_ledgers(reports):
    e2 = reports["E2"]["eq3"].ledger
    assert (e2["degS_D"], e2["n+1"], e2["rational_points"], e2["degR_K"]) == (190, 4, 46, 6)
    e3 = reports["E3"]["eq3"].ledger
    assert (e3["degS_D"], e3["n+1"], e3["rational_points"], e3["degR_K"]) == (105, 3, 33, 6)
    e4 = reports["E4"]["eq3"].ledger
    assert e4["degR_K"] == 0


def test_thm21_ledger_e2(reports):
    led = reports["E2"]["thm21"].ledger
    assert led["support"] == 46 and led["weierstrass"] == 6


def test_witness_for_rational_place_by_divisor(E2):
    # independent check: div(u) = (q+1)P - (q+1)P0
    q = E2.q
    P0 = E2.base_place()
    B = rr_basis(E2, P0, q + 1)
    for P in places_of_degree(E2, 1)[1:6]:
        w = fundamental_witness(E2, P)
        u = E2.const(0)
        for a, b in zip(w["coefficients"], B.elements):
            if a:
                u = u + b.scale(a)
        expected = Divisor.from_place(P, q + 1) - Divisor.from_place(P0, q + 1)
        assert principal_divisor(u) == expected


def test_witness_at_base_place_is_constant(E2):
    w = fundamental_witness(E2, E2.base_place())
    assert w["coefficients"][0] == 1 and not any(w["coefficients"][1:])


def test_witness_degree_two(E2):
    P = places_of_degree(E2, 2)[0]
    w = fundamental_witness(E2, P)
    assert w["valuations"] == {"P": 5, "FrP": 1, "P0": -6}


def test_e4_witnesses(reports):
    led = reports["E4"]["fundamental_equivalence"].ledger
    assert led["by_degree"]["1"] == 9
    assert led["witnesses"] == led["places"]


def test_reports_reproducible(E3):
    a = [r.to_dict() for r in run_all(Context(E3, seed=11))]
    b = [r.to_dict() for r in run_all(Context(E3, seed=11))]
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_unknown_check(E2):
    with pytest.raises(KeyError):
        run_check("nope", Context(E2))


def test_thm31_e3_single_weierstrass_place(reports):
    rep = reports["E3"]["thm31"]
    assert rep.status == "pass"
    assert rep.ledger["weierstrass"] == 1


def test_rational_point_invariants(reports):
    for rep in reports.values():
        assert rep["rational_point_invariants"].status == "pass"
