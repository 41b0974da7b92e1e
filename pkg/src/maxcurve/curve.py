"""Kummer covers w^m = f(z) over F_{q^2} with f split into linear factors.

Besides the curve model this module holds the function field arithmetic
(elements ``sum_{c<m} r_c(z) w^c`` with rational coefficients) and the local
parametrizations used for Hasse derivative data at any place.

Local coordinates.  Around a center a (or infinity) write f = x^v h(x) with
x = z - a (or x = 1/z) and h(0) != 0.  With d = gcd(m, v), e = m/d and
v1 = v/d, the function gamma = w^e / x^{v1} satisfies gamma^d = h, so the d
branches above the center are told apart by the d-th root gamma(P) of h(0).
Picking integers alpha*e + beta*v1 = 1, the substitution

    x = c t^e,  w = t^{v1} u(t),  c = gamma(P)^{-beta},  u(0) = gamma(P)^alpha

turns the curve equation into u^m = c^v h(c t^e), solved by Newton iteration.
For an unbranched center this reduces to x = t, u(0) = w(P).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence

from . import poly
from .ff import FieldSpec, get_field, prime_power
from .series import Laurent, PrecisionError, ps_mth_root

__all__ = [
    "KummerCurve",
    "FunctionFieldElement",
    "Place",
    "LocalChart",
    "LocalExpansion",
    "local_expand",
    "hasse_coeff",
    "CurveError",
]

DEFAULT_PRECISION_CAP = 4096


class CurveError(ValueError):
    """Invalid curve data."""


def _ext_gcd(a: int, b: int) -> tuple[int, int]:
    """Integers (x, y) with a*x + b*y = gcd(a, b) (> 0)."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    r0, r1 = a, b
    while r1:
        k = r0 // r1
        r0, r1 = r1, r0 - k * r1
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    if r0 < 0:
        x0, y0 = -x0, -y0
    return x0, y0


@dataclass(frozen=True)
class Place:
    """A geometric point of the smooth model, stored over F_{q^{2*degree}}.

    ``center`` is the code of the z-coordinate in that field (None above
    infinity) and ``branch`` the code of the branch invariant gamma(P), which
    is the w-value for unbranched centers.  A closed point of degree s is the
    Frobenius orbit of such a representative; the enumeration in
    :mod:`maxcurve.places` always returns the smallest representative.
    """

    degree: int
    center: int | None
    branch: int
    ram_index: int

    @property
    def at_infinity(self) -> bool:
        return self.center is None

    def sort_key(self) -> tuple[int, int, int]:
        return (self.degree, -1 if self.center is None else self.center, self.branch)

    def __lt__(self, other: "Place") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        c = "inf" if self.center is None else self.center
        return f"Place(deg={self.degree}, z={c}, branch={self.branch}, e={self.ram_index})"


class KummerCurve:
    """The smooth projective model of w^m = prod (z - a_i)^{e_i} over F_{q^2}.

    ``factors`` are (root code in F_{q^2}, multiplicity) pairs.  The curve is
    immutable after construction.
    """

    def __init__(
        self,
        q: int,
        m: int,
        factors: Iterable[tuple[int, int]],
        kind: str = "custom",
        name: str | None = None,
    ):
        pk = prime_power(q)
        if pk is None:
            raise CurveError(f"q = {q} is not a prime power")
        self.q = q
        self.p = pk[0]
        self._k = 2 * pk[1]
        self.base = get_field(self.p, self._k)
        if m < 1 or (q * q - 1) % m:
            raise CurveError(f"m = {m} does not divide q^2 - 1 = {q * q - 1}")
        merged: dict[int, int] = {}
        for a, e in factors:
            a = int(a)
            if not 0 <= a < self.base.size:
                raise CurveError(f"root code {a} is not an element of F_{q * q}")
            if e < 0:
                raise CurveError("multiplicities must be non-negative")
            if e:
                merged[a] = merged.get(a, 0) + int(e)
        if not merged:
            raise CurveError("f must be non-constant")
        self.m = m
        self.factors: tuple[tuple[int, int], ...] = tuple(sorted(merged.items()))
        g_all = m
        for _, e in self.factors:
            g_all = gcd(g_all, e)
        if g_all != 1:
            raise CurveError("gcd(m, e_1, ..., e_r) != 1: w^m - f(z) is reducible")
        self.kind = kind
        self.name = name or f"custom(m={m},q={q})"
        self.f = poly.from_roots(self.base, self.factors)
        self.deg_f = poly.deg(self.f)
        self.zeta = self.base.exp(self.base.order // m)  # primitive m-th root of unity
        self.genus = self._riemann_hurwitz()
        self._charts: dict = {}

    # -- invariants --------------------------------------------------------

    def branch_data(self) -> list[tuple[int | None, int, int, int]]:
        """(center, v, number of branches d, ramification index e) for every
        center with e > 1; center None is infinity."""
        out = []
        for a, v in self.factors:
            d = gcd(self.m, v)
            if d != self.m:
                out.append((a, v, d, self.m // d))
        d = gcd(self.m, self.deg_f)
        if d != self.m:
            out.append((None, -self.deg_f, d, self.m // d))
        return out

    def _riemann_hurwitz(self) -> int:
        total = -2 * self.m
        for _, _, d, e in self.branch_data():
            if e % self.p == 0:
                raise CurveError("wild ramification (p divides a ramification index)")
            total += d * (e - 1)
        if total % 2:
            raise CurveError("Riemann-Hurwitz sum is odd")
        return total // 2 + 1

    def hasse_weil_max(self) -> int:
        return self.q * self.q + 1 + 2 * self.genus * self.q

    # -- field tower -------------------------------------------------------

    def field(self, s: int = 1) -> FieldSpec:
        return get_field(self.p, self._k * s)

    def embedding(self, s_from: int, s_to: int) -> list[int]:
        if s_to % s_from:
            raise ValueError(f"level {s_from} is not a subfield of level {s_to}")
        return _embed_table(self.p, self._k * s_from, self._k * s_to)

    def descend(self, code: int, s_from: int, s_to: int) -> int:
        """Preimage of a level-s_from code in the subfield of level s_to."""
        table = _descend_table(self.p, self._k * s_to, self._k * s_from)
        try:
            return table[code]
        except KeyError:
            raise ValueError(f"element {code} does not lie in level {s_to}") from None

    def frob(self, code: int | None, s: int) -> int | None:
        """x -> x^{q^2} at level s."""
        if code is None:
            return None
        return self.field(s).pow(code, self.q * self.q)

    # -- local structure ---------------------------------------------------

    def center_data(self, s: int, a: int | None) -> tuple[int, list[int]]:
        """(v, h) with f = x^v h(x) around the level-s center a; h over level s."""
        F = self.field(s)
        emb = self.embedding(1, s)
        h: list[int] = [1]
        if a is None:
            for r, e in self.factors:
                h = poly.mul(F, h, poly.power(F, [1, F.neg(emb[r])], e))
            return -self.deg_f, h
        v = 0
        for r, e in self.factors:
            rr = emb[r]
            if rr == a:
                v += e
            else:
                h = poly.mul(F, h, poly.power(F, [F.sub(a, rr), 1], e))
        return v, h

    def points_above(self, s: int, a: int | None) -> list[Place]:
        """Geometric points above a level-s center whose branch invariant lies
        in level s, stored at level s (degree field = s)."""
        F = self.field(s)
        v, h = self.center_data(s, a)
        d = gcd(self.m, v)
        e = self.m // d
        return [Place(s, a, g, e) for g in F.mth_roots(h[0], d)]

    def orbit(self, P: Place) -> list[Place]:
        out = [P]
        Q = self.frobenius_point(P)
        while Q != P:
            out.append(Q)
            Q = self.frobenius_point(Q)
        return out

    def frobenius_point(self, P: Place) -> Place:
        s = P.degree
        return Place(s, self.frob(P.center, s), self.frob(P.branch, s), P.ram_index)

    def canonical(self, P: Place) -> Place:
        return min(self.orbit(P), key=Place.sort_key)

    def normalize_point(self, P: Place) -> Place:
        """Rewrite a point stored at a higher level at its true degree."""
        size = len(self.orbit(P))
        if size == P.degree:
            return self.canonical(P)
        if P.degree % size:
            raise AssertionError("orbit size must divide the storage level")
        c = None if P.center is None else self.descend(P.center, P.degree, size)
        b = self.descend(P.branch, P.degree, size)
        return self.canonical(Place(size, c, b, P.ram_index))

    def lift_point(self, P: Place, s: int) -> Place:
        """Store a point at a higher level s (a multiple of its degree)."""
        if s == P.degree:
            return P
        emb = self.embedding(P.degree, s)
        c = None if P.center is None else emb[P.center]
        return Place(s, c, emb[P.branch], P.ram_index)

    def chart(self, P: Place) -> "LocalChart":
        ch = self._charts.get(P)
        if ch is None:
            ch = LocalChart(self, P)
            self._charts[P] = ch
        return ch

    def base_place(self) -> Place:
        """The rational totally ramified base point P0.

        Over z = 0 for the family curves, over infinity for the Hermitian
        model; otherwise infinity if totally ramified, else the first totally
        ramified finite root.
        """
        candidates: list[int | None]
        if self.kind == "family":
            candidates = [0]
        elif self.kind == "hermitian":
            candidates = [None]
        else:
            candidates = [None] + [a for a, _ in self.factors]
        for a in candidates:
            pts = self.points_above(1, a)
            if len(pts) == 1 and pts[0].ram_index == self.m:
                return pts[0]
        raise CurveError("no rational totally ramified place available for P0")

    # -- function field constructors ---------------------------------------

    def z(self) -> "FunctionFieldElement":
        return FunctionFieldElement.from_poly(self, [0, 1])

    def w(self) -> "FunctionFieldElement":
        return FunctionFieldElement.monomial(self, 1)

    def const(self, c: int) -> "FunctionFieldElement":
        return FunctionFieldElement.from_poly(self, [c] if c else [])

    def one(self) -> "FunctionFieldElement":
        return self.const(1)

    def random_element(self, rng: random.Random, max_deg: int = 2, nonzero: bool = True) -> "FunctionFieldElement":
        F = self.base
        while True:
            nums = []
            for _ in range(self.m):
                if rng.random() < 0.5:
                    nums.append([])
                else:
                    nums.append([rng.randrange(F.size) for _ in range(rng.randint(1, max_deg + 1))])
            den = poly.trim([rng.randrange(F.size) for _ in range(rng.randint(1, max_deg + 1))]) or [1]
            el = FunctionFieldElement(self, nums, den)
            if not nonzero or not el.is_zero():
                return el

    def describe(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "q": self.q,
            "m": self.m,
            "field": f"F_{self.q * self.q}",
            "factors": [[a, e] for a, e in self.factors],
            "f": poly.to_str(self.base, self.f),
            "genus": self.genus,
        }

    def __repr__(self) -> str:
        return f"KummerCurve({self.name}: w^{self.m} = {poly.to_str(self.base, self.f)} over F_{self.q ** 2})"


@lru_cache(maxsize=None)
def _embed_table(p: int, k_small: int, k_big: int) -> list[int]:
    return get_field(p, k_big).embedding(get_field(p, k_small))


@lru_cache(maxsize=None)
def _descend_table(p: int, k_small: int, k_big: int) -> dict[int, int]:
    return {b: a for a, b in enumerate(_embed_table(p, k_small, k_big))}


class FunctionFieldElement:
    """``sum_{c<m} n_c(z) w^c / den(z)`` over F_{q^2}.

    The denominator is monic and coprime to the gcd of the numerators, which
    makes the representation unique.
    """

    __slots__ = ("curve", "nums", "den", "label")

    def __init__(self, curve: KummerCurve, nums: Sequence[Sequence[int]], den: Sequence[int] = (1,), label: str | None = None):
        F = curve.base
        if len(nums) != curve.m:
            raise ValueError("need one numerator per power of w")
        nums = [poly.trim(list(n)) for n in nums]
        den = poly.trim(list(den))
        if not den:
            raise ZeroDivisionError("zero denominator")
        if any(nums):
            g = den
            for n in nums:
                if n:
                    g = poly.gcd(F, g, n)
                    if len(g) == 1:
                        break
            if len(g) > 1:
                nums = [poly.divmod_(F, n, g)[0] if n else [] for n in nums]
                den = poly.divmod_(F, den, g)[0]
            lc = den[-1]
            if lc != 1:
                inv = F.inv(lc)
                nums = [poly.scale(F, n, inv) for n in nums]
                den = poly.scale(F, den, inv)
        else:
            den = [1]
        self.curve = curve
        self.nums = nums
        self.den = den
        self.label = label

    @classmethod
    def from_poly(cls, curve: KummerCurve, num: Sequence[int], den: Sequence[int] = (1,)) -> "FunctionFieldElement":
        nums = [[] for _ in range(curve.m)]
        nums[0] = list(num)
        return cls(curve, nums, den)

    @classmethod
    def monomial(cls, curve: KummerCurve, c: int, exps: dict[int, int] | None = None, label: str | None = None) -> "FunctionFieldElement":
        """w^c * prod (z - a)^{b_a} for a dict {a: b_a}, c >= 0."""
        F = curve.base
        num: list[int] = [1]
        den: list[int] = [1]
        for a, b in sorted((exps or {}).items()):
            lin = [F.neg(a), 1]
            if b > 0:
                num = poly.mul(F, num, poly.power(F, lin, b))
            elif b < 0:
                den = poly.mul(F, den, poly.power(F, lin, -b))
        if c >= curve.m:
            num = poly.mul(F, num, poly.power(F, curve.f, c // curve.m))
        nums = [[] for _ in range(curve.m)]
        nums[c % curve.m] = num
        return cls(curve, nums, den, label)

    @property
    def comps(self) -> list:
        """Per-power coefficients as reduced (num, den) pairs or None."""
        F = self.curve.base
        out = []
        for n in self.nums:
            if not n:
                out.append(None)
                continue
            g = poly.gcd(F, n, self.den)
            out.append((poly.divmod_(F, n, g)[0], poly.divmod_(F, self.den, g)[0]))
        return out

    # -- ring structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.nums)

    def _check(self, other: "FunctionFieldElement") -> None:
        if other.curve is not self.curve:
            raise ValueError("elements of different function fields")

    def __add__(self, other: "FunctionFieldElement") -> "FunctionFieldElement":
        self._check(other)
        F = self.curve.base
        if self.den == other.den:
            nums = [poly.add(F, a, b) for a, b in zip(self.nums, other.nums)]
            return FunctionFieldElement(self.curve, nums, self.den)
        nums = [
            poly.add(F, poly.mul(F, a, other.den), poly.mul(F, b, self.den))
            for a, b in zip(self.nums, other.nums)
        ]
        return FunctionFieldElement(self.curve, nums, poly.mul(F, self.den, other.den))

    def __neg__(self) -> "FunctionFieldElement":
        F = self.curve.base
        return FunctionFieldElement(self.curve, [poly.neg(F, n) for n in self.nums], self.den)

    def __sub__(self, other: "FunctionFieldElement") -> "FunctionFieldElement":
        return self + (-other)

    @staticmethod
    def _mul_nums(curve: KummerCurve, A, B) -> list:
        F, m, f = curve.base, curve.m, curve.f
        low = [[] for _ in range(m)]
        high = [[] for _ in range(m)]
        for i, a in enumerate(A):
            if not a:
                continue
            for j, b in enumerate(B):
                if not b:
                    continue
                k = i + j
                if k >= m:
                    high[k - m] = poly.add(F, high[k - m], poly.mul(F, a, b))
                else:
                    low[k] = poly.add(F, low[k], poly.mul(F, a, b))
        return [poly.add(F, lo, poly.mul(F, hi, f)) if hi else lo for lo, hi in zip(low, high)]

    def __mul__(self, other: "FunctionFieldElement") -> "FunctionFieldElement":
        self._check(other)
        nums = self._mul_nums(self.curve, self.nums, other.nums)
        return FunctionFieldElement(self.curve, nums, poly.mul(self.curve.base, self.den, other.den))

    def scale(self, c: int) -> "FunctionFieldElement":
        F = self.curve.base
        return FunctionFieldElement(self.curve, [poly.scale(F, n, c) for n in self.nums], self.den)

    def _conj_nums(self, k: int) -> list:
        F, zeta = self.curve.base, self.curve.zeta
        return [poly.scale(F, n, F.pow(zeta, k * c)) for c, n in enumerate(self.nums)]

    def conjugate(self, k: int) -> "FunctionFieldElement":
        """Image under the automorphism w -> zeta^k w."""
        return FunctionFieldElement(self.curve, self._conj_nums(k), self.den)

    def _cofactor(self) -> tuple[list, list[int]]:
        """(B, N) with (sum nums) * B = N, N a polynomial in z."""
        curve = self.curve
        B = [[1]] + [[] for _ in range(curve.m - 1)]
        for k in range(1, curve.m):
            B = self._mul_nums(curve, B, self._conj_nums(k))
        prod = self._mul_nums(curve, self.nums, B)
        if any(prod[1:]):
            raise AssertionError("norm did not land in the rational function field")
        return B, prod[0]

    def norm(self) -> tuple[list[int], list[int]]:
        """Norm to F_{q^2}(z) as a reduced (num, den) pair."""
        if self.is_zero():
            raise ZeroDivisionError("norm of zero")
        F = self.curve.base
        _, N = self._cofactor()
        el = FunctionFieldElement.from_poly(self.curve, N, poly.power(F, self.den, self.curve.m))
        return el.nums[0], el.den

    def inverse(self) -> "FunctionFieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero function")
        F = self.curve.base
        B, N = self._cofactor()
        return FunctionFieldElement(self.curve, [poly.mul(F, b, self.den) for b in B], N)

    def __truediv__(self, other: "FunctionFieldElement") -> "FunctionFieldElement":
        return self * other.inverse()

    def __pow__(self, e: int) -> "FunctionFieldElement":
        if e < 0:
            return self.inverse() ** (-e)
        acc = self.curve.one()
        base = self
        while e:
            if e & 1:
                acc = acc * base
            e >>= 1
            if e:
                base = base * base
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, FunctionFieldElement):
            return NotImplemented
        return self.curve is other.curve and self.nums == other.nums and self.den == other.den

    def __hash__(self) -> int:
        return hash((tuple(tuple(n) for n in self.nums), tuple(self.den)))

    def __str__(self) -> str:
        if self.label:
            return self.label
        F = self.curve.base
        parts = []
        for c, n in enumerate(self.nums):
            if not n:
                continue
            mono = "" if c == 0 else ("w" if c == 1 else f"w^{c}")
            parts.append(f"({poly.to_str(F, n)})" + (f"*{mono}" if mono else ""))
        s = " + ".join(parts) or "0"
        if self.den != [1]:
            s = f"[{s}] / ({poly.to_str(F, self.den)})"
        return s

    __repr__ = __str__


class LocalChart:
    """Local parametrization (z(t), w(t)) of the curve at a geometric point."""

    def __init__(self, curve: KummerCurve, P: Place):
        self.curve = curve
        self.place = P
        s = P.degree
        F = curve.field(s)
        self.F = F
        self.emb = curve.embedding(1, s)
        v, h = curve.center_data(s, P.center)
        m = curve.m
        d = gcd(m, v)
        e = m // d
        v1 = v // d
        if e != P.ram_index:
            raise ValueError(f"{P} has wrong ramification index (expected {e})")
        if F.pow(P.branch, d) != h[0]:
            raise ValueError(f"{P} is not a point of the curve")
        alpha, beta = _ext_gcd(e, v1)
        assert alpha * e + beta * v1 == 1
        self.v, self.d, self.e, self.v1 = v, d, e, v1
        self.h = h
        self.c = F.pow(P.branch, -beta)
        self.u0 = F.pow(P.branch, alpha)
        if P.center is None:
            self.z = Laurent(F, -e, [F.inv(self.c)], None)
        else:
            coeffs = [0] * (e + 1)
            coeffs[0] = P.center
            coeffs[e] = F.add(coeffs[e], self.c)
            self.z = Laurent.exact(F, coeffs)
        self._w: dict[int, Laurent] = {}
        self._wpow: dict[tuple[int, int], Laurent] = {}

    def w(self, n: int) -> Laurent:
        """w(t) to relative precision n."""
        got = self._w.get(n)
        if got is not None:
            return got
        F, e = self.F, self.e
        # g(t) = c^v h(c t^e)
        cv = F.pow(self.c, self.v)
        g = [0] * n
        ck = cv
        for k, hk in enumerate(self.h):
            if k * e >= n:
                break
            g[k * e] = F.mul(hk, ck)
            ck = F.mul(ck, self.c)
        u = ps_mth_root(F, g, self.curve.m, self.u0, n)
        out = Laurent(F, self.v1, u, self.v1 + n)
        self._w[n] = out
        return out

    def poly_at(self, a: Sequence[int]) -> Laurent:
        """A polynomial in z over F_{q^2}, evaluated exactly at z(t)."""
        F = self.F
        acc = Laurent(F, 0, [], None)
        for coef in reversed(a):
            acc = acc * self.z + Laurent.const(F, self.emb[coef])
        return acc

    def expand(self, fn: FunctionFieldElement, n: int) -> Laurent:
        """Laurent expansion of fn in t, to about n terms of relative precision."""
        if fn.curve is not self.curve:
            raise ValueError("function of a different curve")
        F = self.F
        total = Laurent(F, 0, [], None)
        for c, num in enumerate(fn.nums):
            if not num:
                continue
            term = self.poly_at(num)
            if c:
                term = term * self.w_power(c, n)
            total = total + term
        if fn.den != [1]:
            total = total.div(self.poly_at(fn.den), n)
        return total

    def w_power(self, c: int, n: int) -> Laurent:
        key = (c, n)
        got = self._wpow.get(key)
        if got is None:
            got = self.w(n).pow(c, n)
            self._wpow[key] = got
        return got

    def residual(self, n: int) -> Laurent:
        """w(t)^m - f(z(t)); zero to precision for a correct chart."""
        w = self.w(n)
        return w.pow(self.curve.m, n) - self.poly_at(self.curve.f)


@dataclass
class LocalExpansion:
    place: Place
    precision: int
    series: list[Laurent]

    def hasse_coeff(self, index: int, k: int) -> int:
        return hasse_coeff(self, index, k)


def local_expand(fns: Sequence[FunctionFieldElement], P: Place, N: int) -> LocalExpansion:
    if N <= 0:
        raise ValueError("precision must be positive")
    if not fns:
        raise ValueError("no functions to expand")
    chart = fns[0].curve.chart(P)
    return LocalExpansion(P, N, [chart.expand(fn, N) for fn in fns])


def hasse_coeff(exp: LocalExpansion, index: int, k: int) -> int:
    """The t^k coefficient of the stored series, i.e. (D_t^{(k)} fn)(P)."""
    series = exp.series[index]
    if series.prec is not None and k >= series.prec:
        raise PrecisionError(f"k = {k} beyond precision {series.prec}")
    return series.coeff(k)
