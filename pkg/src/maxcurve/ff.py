"""Finite fields F_{p^k} with table-driven arithmetic.

Elements are handled internally as integer codes: the coefficient vector
``(c_0, ..., c_{k-1})`` of ``c_0 + c_1 a + ... + c_{k-1} a^{k-1}`` is packed
as ``sum c_i p^i``.  Multiplication goes through discrete log tables, addition
through XOR (p = 2), a full table (small fields) or Zech logarithms.

The hot paths elsewhere in the package call the code-level methods
(``F.mul(a, b)`` and friends) directly; :class:`FieldElement` is the
user-facing wrapper with operator overloading.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

import numpy as np

__all__ = [
    "FieldSpec",
    "FieldElement",
    "get_field",
    "field_of_size",
    "is_prime",
    "prime_power",
]

_ADD_TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(n: int) -> tuple[int, int] | None:
    """Return ``(p, k)`` with ``n == p**k`` or None if n is not a prime power."""
    if n < 2:
        return None
    p = 2
    while n % p:
        p += 1
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return (p, k) if n == 1 else None


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over Z_p as coefficient lists (low degree first) -----------

def _zp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _zp_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = list(a)
    db = len(b) - 1
    inv = pow(b[-1], p - 2, p)
    while len(_zp_trim(a)) - 1 >= db:
        shift = len(a) - 1 - db
        f = a[-1] * inv % p
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - f * c) % p
    return a


def _is_irreducible(mod: Sequence[int], p: int) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= k/2."""
    k = len(mod) - 1
    if k == 1:
        return True
    for d in range(1, k // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _zp_trim(_zp_mod(mod, list(low) + [1], p)):
                return False
    return True


def _smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    # lexicographic on (c_0, ..., c_{k-1}), leading coefficient fixed to 1
    for low in product(range(p), repeat=k):
        mod = list(low) + [1]
        if k > 1 and mod[0] == 0:
            continue
        if _is_irreducible(mod, p):
            return tuple(mod)
    raise ValueError(f"no irreducible polynomial of degree {k} over F_{p}")


class FieldSpec:
    """The field Z_p[a]/(modulus) with ``p**k`` elements.

    The modulus defaults to the lexicographically smallest monic irreducible
    polynomial of degree k.  Immutable after construction.
    """

    def __init__(self, p: int, k: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be positive")
        if modulus is None:
            modulus = _smallest_irreducible(p, k)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != k + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree k")
        if not _is_irreducible(list(modulus), p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.k = k
        self.modulus = modulus
        self.size = p ** k
        self.order = self.size - 1
        self._build_tables()

    # -- construction ------------------------------------------------------

    def _vec(self, code: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.k):
            out.append(code % p)
            code //= p
        return out

    def _code(self, vec: Sequence[int]) -> int:
        code = 0
        for c in reversed(vec):
            code = code * self.p + (c % self.p)
        return code

    def _polymul_code(self, a: int, b: int) -> int:
        p, k = self.p, self.k
        va, vb = self._vec(a), self._vec(b)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(va):
            if x:
                for j, y in enumerate(vb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        return self._code(_zp_mod(prod, self.modulus, p)[:k] + [0] * k)

    def _build_tables(self) -> None:
        n = self.order
        if self.size == 2:
            gen = 1
        else:
            factors = _prime_factors(n)
            gen = None
            for cand in range(2, self.size):
                ok = True
                for r in factors:
                    x, e, acc = cand, n // r, 1
                    while e:
                        if e & 1:
                            acc = self._polymul_code(acc, x)
                        x = self._polymul_code(x, x)
                        e >>= 1
                    if acc == 1:
                        ok = False
                        break
                if ok:
                    gen = cand
                    break
            assert gen is not None
        self.generator = gen
        exp = [0] * (2 * n)
        log = [-1] * self.size
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = self._polymul_code(x, gen)
        assert x == 1 and -1 not in log[1:], "generator search failed"
        exp[n:] = exp[:n]
        self._exp = exp
        self._log = log

        p = self.p
        neg = [self._code([(-c) % p for c in self._vec(x)]) for x in range(self.size)]
        self._neg = neg
        self._add_table = None
        self._zech = None
        if p != 2:
            if self.size <= _ADD_TABLE_LIMIT:
                codes = np.arange(self.size)
                tab = np.zeros((self.size, self.size), dtype=np.int64)
                place = 1
                for _ in range(self.k):
                    digit = (codes // place) % p
                    tab += ((digit[:, None] + digit[None, :]) % p) * place
                    place *= p
                self._add_table = tab.ravel().tolist()
            else:
                # zech[j] = log(1 + g^j), or -1 when 1 + g^j = 0
                zech = [0] * n
                for j in range(n):
                    v = self._vec(exp[j])
                    v[0] = (v[0] + 1) % p
                    s = self._code(v)
                    zech[j] = log[s] if s else -1
                self._zech = zech

    # -- code-level arithmetic --------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a * self.size + b]
        if a == 0:
            return b
        if b == 0:
            return a
        la = self._log[a]
        z = self._zech[(self._log[b] - la) % self.order]
        return 0 if z < 0 else self._exp[la + z]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self._exp[(self.order - self._log[a]) % self.order]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in " + repr(self))
        if a == 0:
            return 0
        return self._exp[(self._log[a] - self._log[b]) % self.order]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if a == 0:
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % self.order]

    def log(self, a: int) -> int:
        if a == 0:
            raise ValueError("log of zero")
        return self._log[a]

    def exp(self, e: int) -> int:
        return self._exp[e % self.order]

    def frob(self, a: int, r: int) -> int:
        """``a**r`` for r a power of p."""
        return self.pow(a, r)

    def from_int(self, n: int) -> int:
        return n % self.p

    def is_mth_power(self, a: int, m: int) -> bool:
        if self.order % m:
            raise ValueError(f"{m} does not divide |F|-1 = {self.order}")
        if a == 0:
            return True
        return self._log[a] % m == 0

    def mth_roots(self, a: int, m: int) -> list[int]:
        """All y in this field with y**m == a (a != 0), sorted by code."""
        if a == 0:
            return [0]
        n, la = self.order, self._log[a]
        from math import gcd

        g = gcd(m, n)
        if la % g:
            return []
        # solve m*y = la (mod n)
        m2, la2, n2 = m // g, la // g, n // g
        y0 = la2 * pow(m2, -1, n2) % n2 if n2 > 1 else 0
        return sorted(self._exp[y0 + i * n2] for i in range(g))

    def roots_of_unity(self, m: int) -> list[int]:
        if self.order % m:
            raise ValueError(f"{m} does not divide |F|-1")
        step = self.order // m
        return [self._exp[i * step] for i in range(m)]

    def elements(self) -> range:
        return range(self.size)

    def coeffs(self, a: int) -> tuple[int, ...]:
        return tuple(self._vec(a))

    def from_coeffs(self, vec: Sequence[int]) -> int:
        if len(vec) > self.k:
            raise ValueError("coefficient vector longer than extension degree")
        return self._code(list(vec))

    # -- element wrappers --------------------------------------------------

    def __call__(self, value: int | Sequence[int]) -> "FieldElement":
        if isinstance(value, int):
            if not 0 <= value < self.size:
                value = value % self.p
            return FieldElement(self, value)
        return FieldElement(self, self.from_coeffs(value))

    def enumerate(self) -> Iterator["FieldElement"]:
        for code in range(self.size):
            yield FieldElement(self, code)

    def zero(self) -> "FieldElement":
        return FieldElement(self, 0)

    def one(self) -> "FieldElement":
        return FieldElement(self, 1)

    def gen(self) -> "FieldElement":
        """The primitive element used for the log tables."""
        return FieldElement(self, self.generator)

    # -- towers ------------------------------------------------------------

    def contains(self, sub: "FieldSpec") -> bool:
        return sub.p == self.p and self.k % sub.k == 0

    def embedding(self, sub: "FieldSpec") -> list[int]:
        """Table mapping codes of ``sub`` to codes of this field.

        The image of the defining root of ``sub`` is the smallest root of
        ``sub.modulus`` found in this field.
        """
        return list(_embedding(sub, self))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.k})"

    def __reduce__(self):
        return (get_field, (self.p, self.k))


@lru_cache(maxsize=None)
def get_field(p: int, k: int = 1) -> FieldSpec:
    """Shared FieldSpec for F_{p^k} with the default modulus."""
    return FieldSpec(p, k)


def field_of_size(size: int) -> FieldSpec:
    pk = prime_power(size)
    if pk is None:
        raise ValueError(f"{size} is not a prime power")
    return get_field(*pk)


@lru_cache(maxsize=None)
def _embedding(sub: FieldSpec, big: FieldSpec) -> tuple[int, ...]:
    if not big.contains(sub):
        raise ValueError(f"{sub!r} is not a subfield of {big!r}")
    step = big.order // sub.order
    candidates = sorted({0} | {big.exp(i * step) for i in range(sub.order)})
    beta = None
    for x in candidates:
        acc = 0
        for c in reversed(sub.modulus):
            acc = big.add(big.mul(acc, x), big.from_int(c))
        if acc == 0:
            beta = x
            break
    assert beta is not None
    powers = [1]
    for _ in range(sub.k - 1):
        powers.append(big.mul(powers[-1], beta))
    table = []
    for code in range(sub.size):
        acc = 0
        for c, pw in zip(sub.coeffs(code), powers):
            if c:
                acc = big.add(acc, big.mul(big.from_int(c), pw))
        table.append(acc)
    return tuple(table)


class FieldElement:
    """An element of a :class:`FieldSpec`, with the usual operators."""

    __slots__ = ("spec", "code")

    def __init__(self, spec: FieldSpec, code: int):
        self.spec = spec
        self.code = code

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.spec.coeffs(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec is not self.spec:
                raise ValueError(f"mismatched fields {self.spec!r} and {other.spec!r}")
            return other.code
        if isinstance(other, int):
            return other % self.spec.p
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.sub(b, self.code))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.code))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.div(self.code, b))

    def __rtruediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.spec, self.spec.div(b, self.code))

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        # square-and-multiply on codes (the log table would do it in O(1),
        # this keeps pow independent of the table construction)
        spec = self.spec
        if e < 0:
            base, e = spec.inv(self.code), -e
        else:
            base = self.code
        acc = 1
        while e:
            if e & 1:
                acc = spec.mul(acc, base)
            base = spec.mul(base, base)
            e >>= 1
        return FieldElement(spec, acc)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.spec, self.spec.inv(self.code))

    def frobenius(self, r: int) -> "FieldElement":
        pk = prime_power(r)
        if r != 1 and (pk is None or pk[0] != self.spec.p):
            raise ValueError(f"{r} is not a power of p = {self.spec.p}")
        return self ** r

    def is_mth_power(self, m: int) -> bool:
        if self.code == 0:
            raise ValueError("mth-power test is defined for nonzero elements")
        if self.spec.order % m:
            raise ValueError(f"{m} does not divide |F|-1 = {self.spec.order}")
        return (self ** (self.spec.order // m)).code == 1

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.spec is other.spec and self.code == other.code
        if isinstance(other, int):
            return self.code == other % self.spec.p and self.code < self.spec.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.spec.p, self.spec.k, self.code))

    def __bool__(self) -> bool:
        return self.code != 0

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
                if not mono:
                    terms.append(str(c))
                else:
                    terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(reversed(terms)) or "0"
