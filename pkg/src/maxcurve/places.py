"""Places as Frobenius orbits, divisors, valuations and point counts."""

from __future__ import annotations

import json
import random
from collections import Counter
from typing import Iterable, Iterator, Mapping

from . import poly
from .curve import DEFAULT_PRECISION_CAP, FunctionFieldElement, KummerCurve, Place
from .series import PrecisionError

__all__ = [
    "Place",
    "Divisor",
    "InsufficientExtension",
    "places_over",
    "places_of_degree",
    "sample_places",
    "random_places",
    "nonrational_sample",
    "count_rational_points",
    "count_rational_points_bruteforce",
    "is_maximal",
    "valuation",
    "principal_divisor",
    "place_frobenius",
    "poly_roots",
]

DEFAULT_SMAX = 3


class InsufficientExtension(RuntimeError):
    """Support of a divisor not resolvable within the extension degree cap."""


class Divisor:
    """Finite formal sum of closed places with integer coefficients."""

    __slots__ = ("_d",)

    def __init__(self, coeffs: Mapping[Place, int] | Iterable[tuple[Place, int]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        d: dict[Place, int] = {}
        for P, k in items:
            if k:
                d[P] = d.get(P, 0) + k
        self._d = {P: k for P, k in d.items() if k}

    @classmethod
    def from_place(cls, P: Place, k: int = 1) -> "Divisor":
        return cls({P: k})

    def __getitem__(self, P: Place) -> int:
        return self._d.get(P, 0)

    def items(self):
        return sorted(self._d.items(), key=lambda kv: kv[0].sort_key())

    def support(self) -> list[Place]:
        return sorted(self._d, key=Place.sort_key)

    def degree(self) -> int:
        return sum(k * P.degree for P, k in self._d.items())

    def is_effective(self) -> bool:
        return all(k > 0 for k in self._d.values())

    def __add__(self, other: "Divisor") -> "Divisor":
        out = dict(self._d)
        for P, k in other._d.items():
            out[P] = out.get(P, 0) + k
        return Divisor(out)

    def __neg__(self) -> "Divisor":
        return Divisor({P: -k for P, k in self._d.items()})

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __mul__(self, n: int) -> "Divisor":
        return Divisor({P: n * k for P, k in self._d.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Divisor):
            return NotImplemented
        return self._d == other._d

    def __hash__(self) -> int:
        return hash(frozenset(self._d.items()))

    def __len__(self) -> int:
        return len(self._d)

    def __bool__(self) -> bool:
        return bool(self._d)

    def to_records(self) -> list[dict]:
        return [
            {
                "center": "inf" if P.center is None else P.center,
                "branch_id": P.branch,
                "degree": P.degree,
                "coeff": k,
            }
            for P, k in self.items()
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_records(), sort_keys=True)

    def __repr__(self) -> str:
        if not self._d:
            return "Divisor(0)"
        mult = Counter(self._d.values())
        summary = ", ".join(f"{n} places x {k}" for k, n in sorted(mult.items()))
        return f"Divisor(deg={self.degree()}: {summary})"


# -- enumeration -------------------------------------------------------------

def _cache(curve: KummerCurve) -> dict:
    c = getattr(curve, "_places_cache", None)
    if c is None:
        c = {}
        curve._places_cache = c
    return c


def _fiber_points(curve: KummerCurve, s: int, a: int | None, f_emb: list[int] | None = None) -> list[Place]:
    """Geometric points above the level-s center a with coordinates in level s."""
    if a is not None and f_emb is not None:
        F = curve.field(s)
        fa = poly.evaluate(F, f_emb, a)
        if fa:
            return [Place(s, a, b, 1) for b in F.mth_roots(fa, curve.m)]
    return curve.points_above(s, a)


def places_of_degree(curve: KummerCurve, s: int) -> list[Place]:
    """All closed places of degree exactly s, as sorted canonical representatives."""
    cache = _cache(curve)
    key = ("deg", s)
    if key in cache:
        return cache[key]
    F = curve.field(s)
    f_emb = poly.embed(curve.embedding(1, s), curve.f)
    found: set[Place] = set()
    for a in [None, *F.elements()]:
        if a is not None and s > 1 and _in_proper_subfield(curve, a, s):
            continue
        for P in _fiber_points(curve, s, a, f_emb):
            if s == 1:
                found.add(P)
                continue
            orb = curve.orbit(P)
            if len(orb) == s:
                found.add(min(orb, key=Place.sort_key))
    if s > 1:
        # centers in proper subfields can still carry degree-s places
        for s0 in range(1, s):
            if s % s0:
                continue
            Fs0 = curve.field(s0)
            emb = curve.embedding(s0, s)
            for a0 in [None, *Fs0.elements()]:
                if a0 is not None and s0 > 1 and _in_proper_subfield(curve, a0, s0):
                    continue
                a = None if a0 is None else emb[a0]
                for P in _fiber_points(curve, s, a, f_emb):
                    orb = curve.orbit(P)
                    if len(orb) == s:
                        found.add(min(orb, key=Place.sort_key))
    out = sorted(found, key=Place.sort_key)
    cache[key] = out
    return out


def _in_proper_subfield(curve: KummerCurve, a: int, s: int) -> bool:
    F = curve.field(s)
    qq = curve.q * curve.q
    for s0 in range(1, s):
        if s % s0 == 0 and F.pow(a, qq ** s0) == a:
            return True
    return False


def places_over(curve: KummerCurve, center: int | None, s_max: int = DEFAULT_SMAX, level: int = 1) -> list[Place]:
    """Closed places above a center given as a level-``level`` code (None = infinity).

    Raises InsufficientExtension when the fiber is not resolved by places of
    degree <= s_max.
    """
    if level > s_max:
        raise InsufficientExtension(f"center lives at level {level} > s_max = {s_max}")
    # true degree of the center
    if center is None:
        s_c, a_c = 1, None
    else:
        s_c = level
        a_c = center
        F = curve.field(level)
        qq = curve.q * curve.q
        for s0 in range(1, level + 1):
            if level % s0 == 0 and F.pow(center, qq ** s0) == center:
                s_c = s0
                a_c = curve.descend(center, level, s0) if s0 < level else center
                break
    found: set[Place] = set()
    for s in range(s_c, s_max + 1, s_c):
        a = None if a_c is None else curve.embedding(s_c, s)[a_c]
        for P in curve.points_above(s, a):
            found.add(curve.normalize_point(P))
        if sum(P.ram_index * P.degree for P in found) == curve.m * s_c:
            break
    total = sum(P.ram_index * P.degree for P in found)
    if total != curve.m * s_c:
        raise InsufficientExtension(
            f"fiber above center resolved only to {total}/{curve.m * s_c} within s_max = {s_max}"
        )
    return sorted(found, key=Place.sort_key)


def random_places(curve: KummerCurve, s: int, k: int, seed: int, tries: int = 100000) -> list[Place]:
    """k distinct places of degree exactly s found from random centers."""
    F = curve.field(s)
    rng = random.Random(f"{curve.name}:{s}:{seed}")
    found: set[Place] = set()
    for _ in range(tries):
        if len(found) >= k:
            break
        a = rng.randrange(F.size)
        if s > 1 and _in_proper_subfield(curve, a, s):
            continue
        for P in curve.points_above(s, a):
            orb = curve.orbit(P)
            if len(orb) == s:
                found.add(min(orb, key=Place.sort_key))
    out = sorted(found, key=Place.sort_key)
    if len(out) > k:
        out = sorted(rng.sample(out, k), key=Place.sort_key)
    return out


def sample_places(curve: KummerCurve, s: int, k: int, seed: int) -> list[Place]:
    """All places of degree s when there are at most k, else a seeded sample.

    Degrees s <= 2 are enumerated in full; higher degrees are searched from
    random centers.
    """
    if s > 2:
        return random_places(curve, s, k, seed)
    allp = places_of_degree(curve, s)
    if len(allp) <= k:
        return list(allp)
    rng = random.Random(f"{curve.name}:{s}:{seed}")
    return sorted(rng.sample(allp, k), key=Place.sort_key)


def nonrational_sample(curve: KummerCurve, k: int, seed: int, s_max: int = DEFAULT_SMAX) -> list[Place]:
    """Sampled places of the smallest degree > 1 that has any places."""
    for s in range(2, s_max + 1):
        out = sample_places(curve, s, k, seed)
        if out:
            return out
    raise InsufficientExtension(f"no places of degree 2..{s_max} found")


def place_frobenius(curve: KummerCurve, P: Place) -> Place:
    """Image of a geometric point under x -> x^{q^2}."""
    return curve.frobenius_point(P)


# -- counting ----------------------------------------------------------------

def count_rational_points(curve: KummerCurve) -> int:
    """Degree-one places, fiber by fiber: an unbranched fiber contributes m or 0
    by the m-th power test, a branched one the rational d-th roots of h(0)."""
    F = curve.base
    n = 0
    for a in F.elements():
        fa = poly.evaluate(F, curve.f, a)
        if fa:
            n += curve.m if F.is_mth_power(fa, curve.m) else 0
        else:
            n += len(curve.points_above(1, a))
    n += len(curve.points_above(1, None))
    return n


def count_rational_points_bruteforce(curve: KummerCurve) -> int:
    """Independent route: enumerate all affine (a, b) with b^m = f(a); singular
    points b = 0 are replaced by their branches (rational d-th roots)."""
    F = curve.base
    pows = [F.pow(b, curve.m) for b in F.elements()]
    n = 0
    for a in F.elements():
        fa = poly.evaluate(F, curve.f, a)
        if fa == 0:
            v, h = curve.center_data(1, a)
            from math import gcd

            d = gcd(curve.m, v)
            n += sum(1 for g in F.elements() if g and F.pow(g, d) == h[0])
        else:
            n += sum(1 for x in pows if x == fa)
    from math import gcd

    d = gcd(curve.m, curve.deg_f)
    n += sum(1 for g in F.elements() if g and F.pow(g, d) == 1)
    return n


def is_maximal(curve: KummerCurve) -> tuple[bool, dict]:
    q, g = curve.q, curve.genus
    n = count_rational_points(curve)
    bound = curve.hasse_weil_max()
    if 4 * g <= (q - 1) ** 2:
        branch = "lower"
    elif 2 * g == q * (q - 1):
        branch = "upper"
    else:
        branch = "violated"
    report = {
        "points": n,
        "hasse_weil_bound": bound,
        "genus": g,
        "q": q,
        "genus_spectrum": branch,
    }
    return n == bound, report


# -- valuations and divisors ---------------------------------------------------

def valuation(fn: FunctionFieldElement, P: Place, start: int = 8, cap: int = DEFAULT_PRECISION_CAP) -> int:
    """v_P(fn) from the local expansion, doubling precision until determined."""
    if fn.is_zero():
        raise ValueError("valuation of the zero function")
    chart = fn.curve.chart(P)
    n = start
    while True:
        s = chart.expand(fn, n)
        if s.c:
            return s.v
        if n >= cap:
            raise PrecisionError(f"valuation at {P} not determined at precision {cap}")
        n = min(2 * n, cap)


def poly_roots(curve: KummerCurve, a: list[int], s_max: int = DEFAULT_SMAX) -> list[tuple[int, int, int]]:
    """Roots of a polynomial over F_{q^2} as (level, canonical code, multiplicity),
    one entry per Frobenius orbit.  Raises InsufficientExtension if some roots
    lie beyond level s_max.

    At each level s the factor gcd(a, z^{q^{2s}} - z) is split off and, when it
    carries new roots, split into linear factors over the level-s field.
    """
    a = poly.trim(list(a))
    if not a:
        raise ValueError("zero polynomial")
    F1 = curve.base
    a = poly.monic(F1, a)
    remaining = poly.deg(a)
    out = []
    qq = curve.q * curve.q
    h = [0, 1]  # z^{q^{2s}} mod a
    for s in range(1, s_max + 1):
        if remaining == 0:
            break
        if poly.deg(a) < 1:
            break
        h = poly.powmod(F1, h, qq, a)
        g = poly.gcd(F1, a, poly.sub(F1, h, [0, 1]))
        # distinct roots in levels dividing s already accounted for
        known = sum(len_orbit for lev, _, _, len_orbit in out if s % lev == 0)
        if poly.deg(g) == known:
            continue
        F = curve.field(s)
        ge = poly.embed(curve.embedding(1, s), g)
        ae = poly.embed(curve.embedding(1, s), a)
        seen = set()
        for x in poly.split_roots(F, ge):
            if x in seen or (s > 1 and _in_proper_subfield(curve, x, s)):
                continue
            orbit = [x]
            y = F.pow(x, qq)
            while y != x:
                orbit.append(y)
                y = F.pow(y, qq)
            seen.update(orbit)
            k = poly.valuation_at(F, ae, x)
            out.append((s, min(orbit), k, len(orbit)))
            remaining -= k * len(orbit)
    if remaining:
        raise InsufficientExtension(f"{remaining} roots beyond degree s_max = {s_max}")
    return [(s, x, k) for s, x, k, _ in out]


def principal_divisor(fn: FunctionFieldElement, s_max: int = DEFAULT_SMAX) -> Divisor:
    if fn.is_zero():
        raise ValueError("divisor of the zero function")
    curve = fn.curve
    num, den = fn.norm()
    centers: set[tuple[int, int]] = set()
    for pol in (num, den, fn.den, curve.f):
        if poly.deg(pol) > 0:
            for s, x, _ in poly_roots(curve, pol, s_max):
                centers.add((s, x))
    places: list[Place] = list(places_over(curve, None, s_max))
    for s, x in sorted(centers):
        places.extend(places_over(curve, x, s_max, level=s))
    div = {}
    for P in places:
        v = valuation(fn, P)
        if v:
            div[P] = v
    D = Divisor(div)
    if D.degree() != 0:
        raise AssertionError(f"principal divisor of nonzero degree {D.degree()}")
    return D


def iter_places(curve: KummerCurve, s_max: int) -> Iterator[Place]:
    for s in range(1, s_max + 1):
        yield from places_of_degree(curve, s)
