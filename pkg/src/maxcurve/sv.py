"""Order sequences, ramification divisors and Frobenius divisors of linear
systems (Stohr-Voloch theory) from local expansions.

At a place P the coordinates are expanded in a local parameter t and shifted
by the smallest valuation, which leaves regular series not all vanishing at P.
Orders come from the rank profile of their Hasse-derivative coefficient rows;
divisor multiplicities are t-orders of determinants of series matrices.  The
global degree formulas certify every divisor: effective mass is accumulated
over places of degree 1, 2, ... until it equals the closed form, at which point
every remaining place is known to carry multiplicity zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .curve import DEFAULT_PRECISION_CAP, FunctionFieldElement, KummerCurve, Place
from .linalg import rank
from .places import DEFAULT_SMAX, Divisor, nonrational_sample, places_of_degree
from .rrspace import RRBasis, canonical_space, rr_basis
from .series import Laurent, PrecisionError

__all__ = [
    "LinearSystem",
    "OrderData",
    "CertificationError",
    "system_D",
    "canonical_system",
    "normalized_expansion",
    "orders_at",
    "generic_orders",
    "frobenius_orders",
    "ramification_divisor",
    "frobenius_divisor",
    "ramification_at",
    "frobenius_at",
    "det_order",
    "order_data",
]

PRECISION_CAP = DEFAULT_PRECISION_CAP
GENERIC_SAMPLE = 30


class CertificationError(RuntimeError):
    """A computed divisor does not match its closed-form degree."""


class LinearSystem:
    """The morphism given by basis functions, with the degree d of the
    defining divisor and projective dimension N = len(basis) - 1."""

    def __init__(self, curve: KummerCurve, basis: Sequence[FunctionFieldElement], degree: int, name: str = "L"):
        if not basis:
            raise ValueError("empty linear system")
        self.curve = curve
        self.basis = list(basis)
        self.degree = degree
        self.name = name
        self.N = len(self.basis) - 1
        self._cache: dict = {}

    @classmethod
    def from_rr(cls, rr: RRBasis, degree: int, name: str) -> "LinearSystem":
        return cls(rr.curve, rr.elements, degree, name)

    def check_independent(self, P: Place | None = None) -> bool:
        """Rank of the coefficient matrix at a place equals N+1."""
        P = P or self.curve.base_place()
        n = max(self.degree, 1) * 2 + 8
        ser = [self.curve.chart(P).expand(u, n) for u in self.basis]
        lo = min(s.v for s in ser)
        hi = min(s.prec if s.prec is not None else s.v + len(s.c) for s in ser)
        rows = [[s.coeff(k) for k in range(lo, hi)] for s in ser]
        return rank(self.curve.field(P.degree), rows) == self.N + 1

    def __repr__(self) -> str:
        return f"LinearSystem({self.name}: N={self.N}, d={self.degree} on {self.curve.name})"


def _sv_cache(curve: KummerCurve) -> dict:
    c = getattr(curve, "_sv_cache", None)
    if c is None:
        c = {}
        curve._sv_cache = c
    return c


def system_D(curve: KummerCurve) -> LinearSystem:
    """The system |(q+1)P0| with basis of L((q+1)P0)."""
    cache = _sv_cache(curve)
    if "D" not in cache:
        q = curve.q
        cache["D"] = LinearSystem.from_rr(rr_basis(curve, curve.base_place(), q + 1), q + 1, "D")
    return cache["D"]


def canonical_system(curve: KummerCurve) -> LinearSystem:
    cache = _sv_cache(curve)
    if "K" not in cache:
        cache["K"] = LinearSystem.from_rr(canonical_space(curve), 2 * curve.genus - 2, "K")
    return cache["K"]


# -- local data ------------------------------------------------------------------

def normalized_expansion(L: LinearSystem, P: Place, n: int) -> list[Laurent]:
    """Basis expansions at P divided by t^{min valuation}; regular series with
    at least n terms of precision each."""
    chart = L.curve.chart(P)
    ser = [chart.expand(u, n) for u in L.basis]
    det = [s for s in ser if s.c]
    if not det:
        raise PrecisionError(f"all coordinates vanish to precision at {P}")
    vmin = min(s.v for s in det)
    for s in ser:
        if not s.c and s.prec is not None and s.prec <= vmin:
            raise PrecisionError("undetermined coordinate below the minimal valuation")
    out = []
    for s in ser:
        prec = None if s.prec is None else s.prec - vmin
        out.append(Laurent(s.F, s.v - vmin, s.c, prec))
    return out


def orders_at(L: LinearSystem, P: Place, n: int | None = None) -> tuple[int, ...]:
    """(L, P)-orders j_0 < ... < j_N: greedy rank increase of the coefficient
    rows k = 0, 1, ..."""
    key = ("orders", P)
    if key in L._cache:
        return L._cache[key]
    F = L.curve.field(P.degree)
    n = n or L.degree + 2
    while True:
        try:
            psi = normalized_expansion(L, P, n)
            orders = _rank_profile(F, psi, L.N + 1)
            break
        except PrecisionError:
            if n >= PRECISION_CAP:
                raise
            n *= 2
    L._cache[key] = orders
    return orders


def _rank_profile(F, psi: Sequence[Laurent], target: int) -> tuple[int, ...]:
    pivots: list[tuple[int, list[int]]] = []
    orders = []
    k = 0
    while len(orders) < target:
        row = [s.coeff(k) for s in psi]  # raises PrecisionError when exhausted
        for col, prow in pivots:
            if row[col]:
                f = row[col]
                row = [F.sub(x, F.mul(f, y)) for x, y in zip(row, prow)]
        lead = next((i for i, x in enumerate(row) if x), None)
        if lead is not None:
            inv = F.inv(row[lead])
            row = [F.mul(x, inv) for x in row]
            pivots.append((lead, row))
            orders.append(k)
        k += 1
    return tuple(orders)


def det_order(M: list[list[Laurent]], rel: int) -> int:
    """t-order of the determinant of a square matrix of power series.

    Full pivoting on the entry of least valuation keeps every multiplier
    integral, so the order is the sum of pivot valuations.  Raises
    PrecisionError when the pivot cannot be certified.
    """
    M = [list(r) for r in M]
    total = 0
    while M:
        best = None
        lowest_unknown = None
        for i, r in enumerate(M):
            for j, x in enumerate(r):
                if x.c:
                    if best is None or x.v < best[0]:
                        best = (x.v, i, j)
                elif x.prec is not None:
                    if lowest_unknown is None or x.prec < lowest_unknown:
                        lowest_unknown = x.prec
        if best is None:
            raise PrecisionError("determinant vanishes to working precision")
        v, i, j = best
        if lowest_unknown is not None and lowest_unknown <= v:
            raise PrecisionError("pivot not certified at working precision")
        total += v
        prow = M.pop(i)
        piv = prow.pop(j)
        pinv = piv.inverse(rel)
        for r in M:
            x = r.pop(j)
            if x.is_exact_zero():
                continue
            f = x * pinv
            for k in range(len(r)):
                r[k] = r[k] - f * prow[k]
    return total


def _wronskian_rows(psi: Sequence[Laurent], orders: Sequence[int]) -> list[list[Laurent]]:
    return [[s.hasse(k) for s in psi] for k in orders]


def _frobenius_rows(curve: KummerCurve, psi: Sequence[Laurent], nu: Sequence[int]) -> list[list[Laurent]]:
    qq = curve.q * curve.q
    return [[s.frobenius(qq) for s in psi]] + _wronskian_rows(psi, nu)


def _local_det(L: LinearSystem, P: Place, build: Callable, n0: int, cap: int = PRECISION_CAP) -> int:
    n = n0
    while True:
        try:
            psi = normalized_expansion(L, P, n)
            return det_order(build(psi), n)
        except PrecisionError:
            if n >= cap:
                raise
            n *= 2


def ramification_at(L: LinearSystem, P: Place, eps: Sequence[int] | None = None) -> int:
    eps = tuple(eps if eps is not None else generic_orders(L))
    key = ("R", P, eps)
    if key not in L._cache:
        L._cache[key] = _local_det(L, P, lambda psi: _wronskian_rows(psi, eps), L.degree + 4)
    return L._cache[key]


def frobenius_at(L: LinearSystem, P: Place, nu: Sequence[int] | None = None, cap: int = PRECISION_CAP) -> int:
    nu = tuple(nu if nu is not None else frobenius_orders(L))
    key = ("S", P, nu)
    if key not in L._cache:
        L._cache[key] = _local_det(L, P, lambda psi: _frobenius_rows(L.curve, psi, nu), L.degree + 4, cap)
    return L._cache[key]


# -- generic orders -----------------------------------------------------------------

def _sample(L: LinearSystem, seed: int = 0) -> list[Place]:
    curve = L.curve
    rational = places_of_degree(curve, 1)
    others = nonrational_sample(curve, max(GENERIC_SAMPLE - 10, 10), seed)
    return rational[:10] + others


def generic_orders(L: LinearSystem, seed: int = 0) -> tuple[int, ...]:
    """Smallest order sequence over a sample of places; certified later by the
    degree of the ramification divisor."""
    if "eps" not in L._cache:
        seqs = [orders_at(L, P) for P in _sample(L, seed)]
        L._cache["eps"] = min(seqs)
    return L._cache["eps"]


def _identically_zero(L: LinearSystem, places: Sequence[Place], nu: Sequence[int]) -> bool:
    """True when the Frobenius determinant vanishes to precision at every
    given place, after one doubling of precision."""
    n0 = L.degree + 4
    for P in places:
        try:
            _local_det(L, P, lambda psi: _frobenius_rows(L.curve, psi, nu), n0, cap=2 * n0)
            return False
        except PrecisionError:
            continue
    return True


def frobenius_orders(L: LinearSystem, seed: int = 0) -> tuple[int, ...]:
    """The epsilon sequence with one term removed, choosing the smallest
    result whose Frobenius determinant is not identically zero."""
    if "nu" not in L._cache:
        eps = generic_orders(L, seed)
        places = nonrational_sample(L.curve, 5, seed + 1)
        for i in range(len(eps) - 1, -1, -1):
            nu = eps[:i] + eps[i + 1:]
            if not _identically_zero(L, places, nu):
                L._cache["nu"] = nu
                break
        else:
            raise CertificationError("every removal gives an identically vanishing determinant")
    return L._cache["nu"]


# -- divisors ---------------------------------------------------------------------------

def expected_degree_R(L: LinearSystem, eps: Sequence[int]) -> int:
    g = L.curve.genus
    return sum(eps) * (2 * g - 2) + (L.N + 1) * L.degree


def expected_degree_S(L: LinearSystem, nu: Sequence[int]) -> int:
    g, q = L.curve.genus, L.curve.q
    return sum(nu) * (2 * g - 2) + (q * q + L.N) * L.degree


@dataclass
class LedgerResult:
    divisor: Divisor
    expected: int
    closed_at: int
    scanned: dict[int, int] = field(default_factory=dict)


def _ledger(L: LinearSystem, local: Callable[[Place], int], expected: int, s_max: int, what: str) -> LedgerResult:
    coeffs: dict[Place, int] = {}
    mass = 0
    scanned: dict[int, int] = {}
    for s in range(1, s_max + 1):
        if mass == expected:
            return LedgerResult(Divisor(coeffs), expected, s - 1, scanned)
        pl = places_of_degree(L.curve, s)
        scanned[s] = len(pl)
        for P in pl:
            v = local(P)
            if v < 0:
                raise CertificationError(f"negative multiplicity {v} of {what} at {P}")
            if v:
                coeffs[P] = v
                mass += v * s
        if mass > expected:
            raise CertificationError(f"{what}: mass {mass} exceeds the closed form {expected}")
    if mass != expected:
        raise CertificationError(
            f"{what}: mass {mass} at degree <= {s_max} short of the closed form {expected} "
            f"(residual {expected - mass})"
        )
    return LedgerResult(Divisor(coeffs), expected, s_max, scanned)


def ramification_divisor(L: LinearSystem, s_max: int = DEFAULT_SMAX) -> Divisor:
    return _ramification_ledger(L, s_max).divisor


def _ramification_ledger(L: LinearSystem, s_max: int = DEFAULT_SMAX) -> LedgerResult:
    if "Rledger" not in L._cache:
        eps = generic_orders(L)
        L._cache["Rledger"] = _ledger(L, lambda P: ramification_at(L, P, eps), expected_degree_R(L, eps), s_max, f"R^{L.name}")
    return L._cache["Rledger"]


def frobenius_divisor(L: LinearSystem, s_max: int = DEFAULT_SMAX) -> Divisor:
    return _frobenius_ledger(L, s_max).divisor


def _frobenius_ledger(L: LinearSystem, s_max: int = DEFAULT_SMAX) -> LedgerResult:
    if "Sledger" not in L._cache:
        nu = frobenius_orders(L)
        L._cache["Sledger"] = _ledger(L, lambda P: frobenius_at(L, P, nu), expected_degree_S(L, nu), s_max, f"S^{L.name}")
    return L._cache["Sledger"]


@dataclass
class OrderData:
    system: str
    epsilon: tuple[int, ...]
    nu: tuple[int, ...]
    R: Divisor
    S: Divisor
    degR: int
    degS: int
    R_closed_at: int
    S_closed_at: int

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "epsilon": list(self.epsilon),
            "nu": list(self.nu),
            "R": self.R.to_records(),
            "S": self.S.to_records(),
            "degR": self.degR,
            "degS": self.degS,
            "ledger_closed_at_degree": {"R": self.R_closed_at, "S": self.S_closed_at},
        }


def order_data(L: LinearSystem, s_max: int = DEFAULT_SMAX) -> OrderData:
    """All Stohr-Voloch data of L, each divisor certified by its degree."""
    eps = generic_orders(L)
    nu = frobenius_orders(L)
    R = _ramification_ledger(L, s_max)
    S = _frobenius_ledger(L, s_max)
    return OrderData(L.name, eps, nu, R.divisor, S.divisor, R.divisor.degree(), S.divisor.degree(), R.closed_at, S.closed_at)
