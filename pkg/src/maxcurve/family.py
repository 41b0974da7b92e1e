"""The maximal family W^m = Z (Z+1)^{q-1}, the Hermitian curve, and the
genus / congruence table for the family."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from math import gcd

from .curve import CurveError, KummerCurve
from .ff import field_of_size, prime_power

__all__ = [
    "FamilyRow",
    "make_family_curve",
    "make_hermitian",
    "admissible_congruences",
    "reproduce_table",
    "REFERENCE_TABLE",
    "match_reference_table",
    "table_text",
    "table_csv",
    "family_genus",
    "sample_curves",
]


def family_genus(m: int, q: int) -> int:
    """(m - gcd(m, q-1)) / 2."""
    return (m - gcd(m, q - 1)) // 2


def make_family_curve(m: int, q: int) -> KummerCurve:
    if prime_power(q) is None:
        raise CurveError(f"q = {q} is not a prime power")
    if (q * q - 1) % m:
        raise CurveError(f"m = {m} does not divide q^2 - 1")
    F = field_of_size(q * q)
    factors = [(0, 1), (F.neg(1), q - 1)]
    return KummerCurve(q, m, factors, kind="family", name=f"family(m={m},q={q})")


def make_hermitian(q: int) -> KummerCurve:
    """x^{q+1} = y (y^{q-1} + 1), i.e. m = q+1 and f = y prod (y - c) over the
    q-1 roots of c^{q-1} = -1."""
    if prime_power(q) is None:
        raise CurveError(f"q = {q} is not a prime power")
    F = field_of_size(q * q)
    roots = F.mth_roots(F.neg(1), q - 1) if q > 2 else [F.neg(1)]
    factors = [(0, 1)] + [(c, 1) for c in roots]
    return KummerCurve(q, q + 1, factors, kind="hermitian", name=f"hermitian(q={q})")


def sample_curves() -> dict[str, KummerCurve]:
    """The six curves used throughout the test and acceptance suites."""
    return {
        "E4": make_family_curve(3, 2),
        "H2": make_hermitian(2),
        "H3": make_hermitian(3),
        "H4": make_hermitian(4),
        "E2": make_family_curve(6, 5),
        "E3": make_family_curve(5, 4),
    }


@dataclass(frozen=True)
class FamilyRow:
    """Genus g curves W^m = Z(Z+1)^{q-1} for q = residue (mod modulus)."""

    genus: int
    m: int
    residue: int
    modulus: int
    smallest_q: int | None = None
    certified: bool | None = field(default=None, compare=False)

    def residues_mod(self, n: int) -> set[int]:
        """The class q = residue (mod modulus) as a set of residues mod n."""
        if n % self.modulus:
            raise ValueError("n must be a multiple of the row modulus")
        return {(self.residue + k * self.modulus) % n for k in range(n // self.modulus)}


def admissible_congruences(m: int, g: int) -> list[FamilyRow]:
    """All q mod m giving genus g: r^2 = 1 (mod m) and gcd(m, r-1) = m - 2g."""
    delta = m - 2 * g
    if delta <= 0 or m % delta:
        return []
    rows = []
    for r in range(m):
        if (r * r - 1) % m == 0 and gcd(m, r - 1) == delta:
            rows.append(FamilyRow(g, m, r, m))
    return rows


def _smallest_prime_power(r: int, n: int, bound: int = 1000) -> int | None:
    for q in range(2, bound + 1):
        if q % n == r % n and prime_power(q) is not None:
            return q
    return None


def reproduce_table(g_max: int = 7, certify_up_to: int = 16) -> list[FamilyRow]:
    """Every (g, m, q mod m) with 1 <= g <= g_max.

    The smallest prime power in each class is attached; when it is at most
    ``certify_up_to`` the curve is built and its point count checked against
    the Hasse-Weil bound.
    """
    from .places import count_rational_points

    out = []
    for g in range(1, g_max + 1):
        for delta in range(1, 2 * g + 1):
            if (2 * g) % delta:
                continue
            m = 2 * g + delta
            for row in admissible_congruences(m, g):
                q = _smallest_prime_power(row.residue, m)
                certified = None
                if q is not None and q <= certify_up_to:
                    curve = make_family_curve(m, q)
                    certified = curve.genus == g and count_rational_points(curve) == curve.hasse_weil_max()
                out.append(FamilyRow(g, m, row.residue, m, q, certified))
    return out


# (genus, m, residue, modulus) reference rows, negative residues kept
REFERENCE_TABLE: list[tuple[int, int, int, int]] = [
    (1, 3, -1, 3), (1, 4, -1, 4),
    (2, 5, -1, 5), (2, 6, -1, 6), (2, 8, 5, 8),
    (3, 7, -1, 7), (3, 8, -1, 4), (3, 12, 7, 12),
    (4, 9, -1, 9), (4, 10, -1, 10), (4, 12, 5, 12), (4, 16, 9, 16),
    (5, 11, -1, 11), (5, 12, -1, 12), (5, 15, -4, 15), (5, 20, 11, 20),
    (6, 13, -1, 13), (6, 14, -1, 14), (6, 15, 4, 15), (6, 24, 13, 24),
    (7, 15, -1, 15), (7, 16, -1, 8), (7, 21, 8, 21), (7, 28, 15, 28),
]


def match_reference_table(rows: list[FamilyRow]) -> list[tuple[tuple[int, int, int, int], bool]]:
    """Match each reference row against the computed rows with the same (g, m).

    A reference congruence q = r (mod M) with M | m matches when the union of the
    computed classes mod m equals its lift to residues mod m.
    """
    out = []
    for g, m, r, M in REFERENCE_TABLE:
        computed = set()
        for row in rows:
            if row.genus == g and row.m == m:
                computed |= row.residues_mod(m)
        lifted = FamilyRow(g, m, r % M, M).residues_mod(m) if m % M == 0 else None
        out.append(((g, m, r, M), lifted is not None and computed == lifted))
    return out


def table_text(rows: list[FamilyRow]) -> str:
    lines = [f"{'g':>3} {'m':>4} {'q mod m':>10} {'smallest q':>11} {'certified':>10}"]
    for r in rows:
        cert = "-" if r.certified is None else ("yes" if r.certified else "NO")
        sq = "-" if r.smallest_q is None else str(r.smallest_q)
        cls_ = f"{r.residue} (mod {r.modulus})"
        lines.append(f"{r.genus:>3} {r.m:>4} {cls_:>10} {sq:>11} {cert:>10}")
    return "\n".join(lines)


def table_csv(rows: list[FamilyRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["g", "m", "residue", "modulus", "smallest_q", "certified"])
    for r in rows:
        w.writerow([r.genus, r.m, r.residue, r.modulus,
                    "" if r.smallest_q is None else r.smallest_q,
                    "" if r.certified is None else str(r.certified).lower()])
    return buf.getvalue()
