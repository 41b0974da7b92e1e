import itertools

import pytest
from hypothesis import given, settings, strategies as st

from maxcurve.ff import FieldElement, FieldSpec, field_of_size, get_field, prime_power

SMALL = [2, 3, 4, 5, 7, 8, 9, 16, 25]
LARGE = [64, 81, 625, 729, 4096, 15625]

# F4 = {0, 1, a, a+1} with codes 0, 1, 2, 3; table written out by hand from a^2 = a + 1
F4_MUL = [
    [0, 0, 0, 0],
    [0, 1, 2, 3],
    [0, 2, 3, 1],
    [0, 3, 1, 2],
]


def test_f4_against_hand_table():
    F = get_field(2, 2)
    assert F.modulus == (1, 1, 1)
    for a, b in itertools.product(range(4), repeat=2):
        assert F.mul(a, b) == F4_MUL[a][b]
        assert F.add(a, b) == a ^ b


def test_f4_examples():
    F = get_field(2, 2)
    a = F.gen() if F.generator == 2 else F(2)
    assert a * a == a + 1
    assert a ** 3 == F.one()
    assert a.frobenius(2) == a + 1
    assert F.zero().frobenius(2) == F.zero() and F.one().frobenius(2) == F.one()


@pytest.mark.parametrize("size", SMALL)
def test_field_axioms_exhaustive(size):
    F = field_of_size(size)
    els = list(F.elements())
    for a in els:
        assert F.add(a, 0) == a and F.mul(a, 1) == a
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
        assert F.pow(a, F.size) == a
    for a, b, c in itertools.product(els, repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
    for a, b in itertools.product(els, repeat=2):
        assert F.mul(a, b) == F.mul(b, a) and F.add(a, b) == F.add(b, a)


@pytest.mark.parametrize("size", SMALL + LARGE)
def test_generator_has_full_order(size):
    F = field_of_size(size)
    g = F.generator
    seen = {F.pow(g, k) for k in range(F.order)}
    assert len(seen) == F.order and 0 not in seen


@pytest.mark.parametrize("size", LARGE)
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_field_axioms_sampled(size, data):
    F = field_of_size(size)
    el = st.integers(0, F.size - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.sub(F.add(a, b), b) == a
    if b:
        assert F.mul(F.div(a, b), b) == a


def _first_rootless(p, k):
    # for k <= 3 irreducible means no root in F_p
    for vec in itertools.product(range(p), repeat=k):
        poly = list(vec) + [1]
        if all(sum(c * x ** i for i, c in enumerate(poly)) % p for x in range(p)):
            return tuple(poly)


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (3, 2), (5, 2), (3, 3), (7, 2)])
def test_moduli_are_smallest_irreducibles(p, k):
    # lexicographic on the coefficient vector, constant term first
    assert get_field(p, k).modulus == _first_rootless(p, k)


def test_reducible_modulus_rejected():
    with pytest.raises(ValueError):
        FieldSpec(2, 2, modulus=(1, 0, 1))


def test_enumerate():
    assert [e.code for e in get_field(2, 1).enumerate()] == [0, 1]
    assert len(list(get_field(2, 2).enumerate())) == 4
    codes = [e.code for e in field_of_size(25).enumerate()]
    assert len(codes) == len(set(codes)) == 25


def test_mth_power_test():
    F = get_field(2, 2)
    a = F(2)
    assert not a.is_mth_power(3)
    assert F.one().is_mth_power(3)
    F25 = field_of_size(25)
    assert (F25.gen() ** 6).is_mth_power(6)
    assert not F25.gen().is_mth_power(6)
    with pytest.raises(ValueError):
        F25.one().is_mth_power(5)


def test_mth_roots_match_bruteforce():
    F = field_of_size(25)
    for a in range(1, 25):
        for m in (2, 3, 4, 6, 8, 12):
            brute = sorted(y for y in F.elements() if F.pow(y, m) == a)
            assert F.mth_roots(a, m) == brute


def test_errors():
    F, G = get_field(2, 2), get_field(3, 1)
    with pytest.raises(ZeroDivisionError):
        F.one() / F.zero()
    with pytest.raises(ValueError):
        F.one() + G.one()
    with pytest.raises(ValueError):
        F(2).frobenius(3)


@pytest.mark.parametrize("p,k,s", [(2, 2, 2), (2, 2, 3), (5, 2, 2), (3, 2, 3), (2, 4, 2)])
def test_embedding_is_homomorphism(p, k, s):
    sub, big = get_field(p, k), get_field(p, k * s)
    emb = big.embedding(sub)
    assert len(set(emb)) == sub.size
    q = sub.size
    for a, b in itertools.product(sub.elements(), repeat=2):
        assert emb[sub.add(a, b)] == big.add(emb[a], emb[b])
        assert emb[sub.mul(a, b)] == big.mul(emb[a], emb[b])
    for a in sub.elements():
        # the image is fixed by x -> x^{|sub|} and the embedding commutes with Frobenius
        assert big.pow(emb[a], q) == emb[a]
        assert emb[sub.frob(a, p)] == big.frob(emb[a], p)


def test_frobenius_q_squared_is_identity_on_base():
    for q in (2, 3, 4, 5):
        F = field_of_size(q * q)
        for x in F.enumerate():
            assert x.frobenius(q).frobenius(q) == x


def test_prime_power():
    assert prime_power(16) == (2, 4)
    assert prime_power(25) == (5, 2)
    assert prime_power(12) is None
    assert prime_power(1) is None
