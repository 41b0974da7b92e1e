"""Riemann-Roch spaces of divisors invariant under w -> zeta w, Weierstrass
semigroups and the canonical space.

For a divisor that is the same above every place of a center, L(D) splits into
eigenspaces w^c * g(z), and each eigenspace is a Riemann-Roch space on the
z-line.  That space has the explicit basis

    w^c * prod (z - a_i)^{lo_i} * (z - a_f)^k,   k = 0, ..., U - sum lo_i,

with lo_i the smallest exponent allowed at the root a_i, U the largest total
degree allowed at infinity and a_f one fixed root.  This is the monomial sieve.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

from . import poly
from .curve import CurveError, FunctionFieldElement, KummerCurve, Place
from .linalg import nullspace
from .places import Divisor, places_over
from .series import Laurent, PrecisionError

__all__ = [
    "RRBasis",
    "SemigroupData",
    "SieveIncomplete",
    "rr_basis",
    "canonical_space",
    "div_dz",
    "semigroup_at",
    "vanishing_combinations",
    "combination_series",
]


class SieveIncomplete(RuntimeError):
    """The monomial sieve did not produce a space of the Riemann-Roch dimension."""


@dataclass
class RRBasis:
    """A basis of L(D); for D = r*P0 the elements have strictly increasing pole
    orders at P0."""

    curve: KummerCurve
    base_place: Place | None
    bound: int | None
    elements: list[FunctionFieldElement]
    pole_orders: list[int] | None = None
    kind: str = "multiple"

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def dimension(self) -> int:
        return len(self.elements)

    def labels(self) -> list[str]:
        return [str(u) for u in self.elements]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "bound": self.bound,
            "dimension": self.dimension,
            "pole_orders": self.pole_orders,
            "elements": self.labels(),
        }


@dataclass
class SemigroupData:
    place: Place
    nongaps: list[int]
    gaps: list[int]
    bound: int
    route: str = "canonical"
    extra: dict = field(default_factory=dict)

    def m(self, i: int) -> int:
        """The i-th non-gap (m_0 = 0)."""
        if i >= len(self.nongaps):
            raise IndexError(f"non-gap index {i} beyond the bound {self.bound}")
        return self.nongaps[i]

    def to_dict(self) -> dict:
        return {"gaps": self.gaps, "nongaps": self.nongaps, "bound": self.bound, "route": self.route}


# -- the sieve -----------------------------------------------------------------

def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _label(curve: KummerCurve, c: int, exps: dict[int, int]) -> str:
    F = curve.base
    parts = []
    if c:
        parts.append("w" if c == 1 else f"w^{c}")
    for a, b in sorted(exps.items()):
        if b == 0:
            continue
        lin = "z" if a == 0 else f"({poly.to_str(F, [F.neg(a), 1])})"
        parts.append(lin if b == 1 else f"{lin}^{b}")
    return "*".join(parts) or "1"


def _invariant_space(curve: KummerCurve, allow: dict[int | None, int], free: int) -> list[tuple[int, dict[int, int]]]:
    """Monomials spanning {u : v_P(u) >= -allow[center(P)] for all P}.

    ``allow`` maps factor roots (and None for infinity) to the allowed pole
    order at each place above; unlisted centers allow no pole.  ``free`` is
    the root whose exponent varies.
    """
    m, D = curve.m, curve.deg_f
    d_inf = gcd(m, D)
    E_inf = m // d_inf
    out = []
    for c in range(m):
        lo: dict[int, int] = {}
        for a, v in curve.factors:
            d = gcd(m, v)
            E = m // d
            lo[a] = _ceil_div(-allow.get(a, 0) - c * (v // d), E)
        upper = (allow.get(None, 0) - c * (D // d_inf)) // E_inf
        slack = upper - sum(lo.values())
        for k in range(slack + 1):
            exps = dict(lo)
            exps[free] += k
            out.append((c, exps))
    return out


def _check_base_place(curve: KummerCurve, P0: Place) -> None:
    if P0.degree != 1 or P0.ram_index != curve.m:
        raise CurveError(f"{P0} is not a rational totally ramified place")
    if P0.center is not None and P0.center not in dict(curve.factors):
        raise CurveError(f"{P0} does not lie over a root of f")


def rr_basis(curve: KummerCurve, P0: Place | None = None, r: int = 0) -> RRBasis:
    """Basis of L(r*P0) ordered by pole order at P0."""
    if P0 is None:
        P0 = curve.base_place()
    _check_base_place(curve, P0)
    if r < 0:
        return RRBasis(curve, P0, r, [], [])
    m, D = curve.m, curve.deg_f
    allow = {P0.center: r}
    free = P0.center if P0.center is not None else curve.factors[0][0]
    mons = _invariant_space(curve, allow, free)
    items = []
    for c, exps in mons:
        if P0.center is None:
            pole = m * sum(exps.values()) + c * D
        else:
            v0 = dict(curve.factors)[P0.center]
            pole = -(c * v0 + m * exps[P0.center])
        items.append((pole, c, exps))
    items.sort(key=lambda x: x[0])
    poles = [x[0] for x in items]
    if len(set(poles)) != len(poles):
        raise AssertionError("sieve produced repeated pole orders")
    elements = [FunctionFieldElement.monomial(curve, c, e, label=_label(curve, c, e)) for _, c, e in items]
    out = RRBasis(curve, P0, r, elements, poles)
    if r >= 2 * curve.genus - 1 and len(out) != r + 1 - curve.genus:
        raise SieveIncomplete(f"dim L({r}P0) = {len(out)}, Riemann-Roch requires {r + 1 - curve.genus}")
    return out


def _dz_orders(curve: KummerCurve) -> dict[int | None, int]:
    """v_P(dz) at the places above each factor root and above infinity."""
    m = curve.m
    out: dict[int | None, int] = {}
    for a, v in curve.factors:
        out[a] = m // gcd(m, v) - 1
    out[None] = -(m // gcd(m, curve.deg_f)) - 1
    return out


def div_dz(curve: KummerCurve) -> Divisor:
    """div(dz): e-1 at finite ramified places, -e-1 above infinity."""
    out = {}
    for a, k in _dz_orders(curve).items():
        if k:
            for P in places_over(curve, a, s_max=curve.m):
                out[P] = k
    return Divisor(out)


def canonical_space(curve: KummerCurve) -> RRBasis:
    """Basis of L(div dz), i.e. the holomorphic differentials u*dz."""
    if curve.genus < 1:
        raise CurveError("canonical space needs genus >= 1")
    allow = _dz_orders(curve)
    mons = _invariant_space(curve, allow, curve.factors[0][0])
    elements = [FunctionFieldElement.monomial(curve, c, e, label=_label(curve, c, e)) for c, e in mons]
    if len(elements) != curve.genus:
        raise SieveIncomplete(f"canonical space has dimension {len(elements)} != g = {curve.genus}")
    return RRBasis(curve, None, None, elements, None, kind="canonical")


# -- semigroups ------------------------------------------------------------------

def semigroup_at(curve: KummerCurve, P: Place, bound: int | None = None) -> SemigroupData:
    """Weierstrass semigroup at P up to ``bound`` (default max(2g, q+1)).

    Gaps are read off the canonical orders (k is a gap iff k-1 is an order);
    at the base place the sieve's pole orders give a second route and the two
    must agree.
    """
    g = curve.genus
    if bound is None:
        bound = max(2 * g, curve.q + 1)
    if bound < 2 * g:
        raise ValueError("bound must be at least 2g")
    if g == 0:
        gaps: list[int] = []
    else:
        from .sv import canonical_system, orders_at

        gaps = [j + 1 for j in orders_at(canonical_system(curve), P)]
    nongaps = [k for k in range(bound + 1) if k not in gaps]
    route = "canonical"
    if P == curve.base_place():
        sieve = [k for k in rr_basis(curve, P, bound).pole_orders if k <= bound]
        if sieve != nongaps:
            raise AssertionError(f"semigroup routes disagree at {P}: {sieve} vs {nongaps}")
        route = "canonical+sieve"
    if len(gaps) != g or any(x > 2 * g - 1 for x in gaps):
        raise AssertionError(f"gap sequence {gaps} violates the genus bound")
    return SemigroupData(P, nongaps, gaps, bound, route)


# -- linear conditions -------------------------------------------------------------

def combination_series(series: Sequence[Laurent], coeffs: Sequence[int], F) -> Laurent:
    acc = Laurent(F, 0, [], None)
    for s, x in zip(series, coeffs):
        if x:
            acc = acc + s.scale(x)
    return acc


def lifted_expansions(basis: RRBasis, P: Place, n: int, level: int) -> list[Laurent]:
    """Expansions of the basis at the geometric point P (stored at a level
    dividing ``level``) with coefficients moved to that level."""
    curve = basis.curve
    chart = curve.chart(P)
    out = [chart.expand(u, n) for u in basis.elements]
    if P.degree != level:
        emb = curve.embedding(P.degree, level)
        F = curve.field(level)
        out = [s.map_coeffs(emb, F) for s in out]
    return out


def vanishing_combinations(basis: RRBasis, conditions: Sequence[tuple[Place, int]], level: int) -> list[list[int]]:
    """Coefficient vectors over level ``level`` of the combinations of the
    basis vanishing to order >= k at each (P, k)."""
    F = basis.curve.field(level)
    rows: list[list[int]] = []
    for P, k in conditions:
        n = k + 4
        while True:
            try:
                ser = lifted_expansions(basis, P, n, level)
                lo = min(s.v for s in ser if s.c or s.prec is None)
                rows.extend([s.coeff(i) for s in ser] for i in range(min(lo, k), k))
                break
            except (PrecisionError, ValueError):
                if n > 4096:
                    raise
                n *= 2
    return nullspace(F, rows, len(basis))
