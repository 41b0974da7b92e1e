"""Truncated Laurent series over a finite field with absolute precision.

A :class:`Laurent` stores ``sum_{i >= v} c_i t^i + O(t^prec)``; ``prec`` is
None for exact (finitely supported) series.  Arithmetic propagates precision
the same way p-adic numbers do, so a coefficient is only ever reported when it
is actually determined; asking for anything beyond that raises
:class:`PrecisionError`, and callers retry with more terms.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .ff import FieldSpec

__all__ = ["Laurent", "PrecisionError", "binom_mod_p", "ps_mul", "ps_inv", "ps_mth_root"]


class PrecisionError(ArithmeticError):
    """Result not determined at the working precision."""


@lru_cache(maxsize=None)
def binom_mod_p(n: int, k: int, p: int) -> int:
    """C(n, k) mod p, with C(n, k) = (-1)^k C(k-n-1, k) for negative n."""
    if k < 0:
        return 0
    if n < 0:
        r = binom_mod_p(k - n - 1, k, p)
        return r if k % 2 == 0 else (-r) % p
    if k > n:
        return 0
    out = 1
    while n or k:
        a, b = n % p, k % p
        if b > a:
            return 0
        num = den = 1
        for i in range(b):
            num = num * (a - i) % p
            den = den * (i + 1) % p
        out = out * num * pow(den, p - 2, p) % p
        n //= p
        k //= p
    return out


def _conv(F: FieldSpec, a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    """First n coefficients of the product of two coefficient lists."""
    out = [0] * n
    if n <= 0:
        return out
    exp, log = F._exp, F._log
    la = [log[x] for x in a[:n]]
    lb = [log[x] for x in b[:n]]
    if F.p == 2:
        for i, x in enumerate(la):
            if x < 0:
                continue
            for j in range(min(len(lb), n - i)):
                y = lb[j]
                if y >= 0:
                    out[i + j] ^= exp[x + y]
        return out
    tab = F._add_table
    if tab is not None:
        Q = F.size
        for i, x in enumerate(la):
            if x < 0:
                continue
            for j in range(min(len(lb), n - i)):
                y = lb[j]
                if y >= 0:
                    k = i + j
                    out[k] = tab[out[k] * Q + exp[x + y]]
        return out
    add = F.add
    for i, x in enumerate(la):
        if x < 0:
            continue
        for j in range(min(len(lb), n - i)):
            y = lb[j]
            if y >= 0:
                out[i + j] = add(out[i + j], exp[x + y])
    return out


def ps_mul(F: FieldSpec, a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    return _conv(F, a, b, n)


def ps_inv(F: FieldSpec, a: Sequence[int], n: int) -> list[int]:
    """Inverse of a power series with a[0] != 0, to n terms (Newton)."""
    if not a or a[0] == 0:
        raise ZeroDivisionError("power series with zero constant term")
    x = [F.inv(a[0])]
    k = 1
    while k < n:
        k = min(2 * k, n)
        # x <- x (2 - a x)
        ax = _conv(F, a, x, k)
        ax = [F.neg(c) for c in ax]
        ax[0] = F.add(ax[0], F.from_int(2))
        x = _conv(F, x, ax, k)
    return x[:n] + [0] * (n - len(x))


def _ps_pow(F: FieldSpec, a: Sequence[int], e: int, n: int) -> list[int]:
    acc = [1] + [0] * (n - 1)
    base = list(a[:n])
    while e:
        if e & 1:
            acc = _conv(F, acc, base, n)
        e >>= 1
        if e:
            base = _conv(F, base, base, n)
    return acc


def ps_mth_root(F: FieldSpec, g: Sequence[int], m: int, u0: int, n: int) -> list[int]:
    """The series u with u^m = g and u(0) = u0, to n terms.

    Newton iteration u <- u - (u^m - g) / (m u^{m-1}); requires p not dividing
    m and u0^m = g(0).
    """
    if m % F.p == 0:
        raise ValueError("m-th root iteration needs p not dividing m")
    if F.pow(u0, m) != (g[0] if g else 0):
        raise ValueError("starting value is not an m-th root of g(0)")
    inv_m = F.inv(F.from_int(m))
    u = [u0]
    k = 1
    while k < n:
        k = min(2 * k, n)
        um1 = _ps_pow(F, u + [0] * (k - len(u)), m - 1, k)
        um = _conv(F, um1, u, k)
        gk = list(g[:k]) + [0] * (k - len(g[:k]))
        resid = [F.sub(x, y) for x, y in zip(um, gk)]
        step = _conv(F, resid, ps_inv(F, um1, k), k)
        u = [F.sub(x, F.mul(inv_m, y)) for x, y in zip(u + [0] * (k - len(u)), step)]
    return u[:n]


class Laurent:
    """``t^v (c_0 + c_1 t + ...) + O(t^prec)`` over a finite field."""

    __slots__ = ("F", "v", "c", "prec")

    def __init__(self, F: FieldSpec, v: int, coeffs: Sequence[int], prec: int | None):
        c = list(coeffs)
        if prec is not None and len(c) > prec - v:
            del c[max(prec - v, 0):]
        i = 0
        while i < len(c) and c[i] == 0:
            i += 1
        if i:
            del c[:i]
            v += i
        if prec is None:
            while c and c[-1] == 0:
                c.pop()
            if not c:
                v = 0
        elif not c:
            v = prec
        self.F = F
        self.v = v
        self.c = c
        self.prec = prec

    # -- constructors ------------------------------------------------------

    @classmethod
    def exact(cls, F: FieldSpec, coeffs: Sequence[int], shift: int = 0) -> "Laurent":
        return cls(F, shift, coeffs, None)

    @classmethod
    def const(cls, F: FieldSpec, c: int) -> "Laurent":
        return cls(F, 0, [c], None)

    @classmethod
    def monomial(cls, F: FieldSpec, k: int, c: int = 1) -> "Laurent":
        return cls(F, k, [c], None)

    # -- inspection --------------------------------------------------------

    def is_exact_zero(self) -> bool:
        return self.prec is None and not self.c

    def is_zero_to_precision(self) -> bool:
        return not self.c

    def valuation(self) -> int:
        if not self.c:
            if self.prec is None:
                raise ValueError("valuation of the zero series")
            raise PrecisionError(f"series is O(t^{self.prec})")
        return self.v

    def rel_prec(self) -> int | None:
        return None if self.prec is None else self.prec - self.v

    def coeff(self, k: int) -> int:
        if self.prec is not None and k >= self.prec:
            raise PrecisionError(f"coefficient t^{k} beyond precision {self.prec}")
        if k < self.v:
            return 0
        i = k - self.v
        return self.c[i] if i < len(self.c) else 0

    def leading(self) -> int:
        self.valuation()
        return self.c[0]

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "Laurent") -> "Laurent":
        F = self.F
        if other.is_exact_zero():
            return self
        if self.is_exact_zero():
            return other
        if self.prec is None:
            prec = other.prec
        elif other.prec is None:
            prec = self.prec
        else:
            prec = min(self.prec, other.prec)
        lo = min(self.v, other.v)
        hi_a = self.v + len(self.c)
        hi_b = other.v + len(other.c)
        hi = max(hi_a, hi_b) if prec is None else prec
        if hi <= lo:
            return Laurent(F, prec, [], prec)
        out = [0] * (hi - lo)
        for i, x in enumerate(self.c):
            k = self.v + i - lo
            if k < len(out):
                out[k] = x
        for i, y in enumerate(other.c):
            k = other.v + i - lo
            if k < len(out):
                out[k] = F.add(out[k], y)
        return Laurent(F, lo, out, prec)

    def __neg__(self) -> "Laurent":
        return Laurent(self.F, self.v, [self.F.neg(x) for x in self.c], self.prec)

    def __sub__(self, other: "Laurent") -> "Laurent":
        return self + (-other)

    def scale(self, k: int) -> "Laurent":
        if k == 0:
            return Laurent(self.F, 0, [], None)
        return Laurent(self.F, self.v, [self.F.mul(x, k) for x in self.c], self.prec)

    def __mul__(self, other: "Laurent") -> "Laurent":
        F = self.F
        if self.is_exact_zero() or other.is_exact_zero():
            return Laurent(F, 0, [], None)
        v = self.v + other.v
        if self.prec is None and other.prec is None:
            n = len(self.c) + len(other.c) - 1
            return Laurent(F, v, _conv(F, self.c, other.c, n), None)
        cand = []
        if self.prec is not None:
            cand.append(self.prec + other.v)
        if other.prec is not None:
            cand.append(other.prec + self.v)
        prec = min(cand)
        n = prec - v
        if n <= 0 or not self.c or not other.c:
            return Laurent(F, prec, [], prec)
        return Laurent(F, v, _conv(F, self.c, other.c, n), prec)

    def inverse(self, rel: int) -> "Laurent":
        """1/self; exact non-monomial inputs are expanded to ``rel`` terms."""
        F = self.F
        if not self.c:
            if self.prec is None:
                raise ZeroDivisionError("inverse of zero series")
            raise PrecisionError("inverse of a series that is zero to precision")
        if self.prec is None:
            if len(self.c) == 1:
                return Laurent(F, -self.v, [F.inv(self.c[0])], None)
            n = rel
        else:
            n = self.prec - self.v
        return Laurent(F, -self.v, ps_inv(F, self.c, n), -self.v + n)

    def div(self, other: "Laurent", rel: int) -> "Laurent":
        return self * other.inverse(rel)

    def pow(self, e: int, rel: int) -> "Laurent":
        if e < 0:
            return self.inverse(rel).pow(-e, rel)
        F = self.F
        acc = Laurent.const(F, 1)
        base = self
        while e:
            if e & 1:
                acc = acc * base
            e >>= 1
            if e:
                base = base * base
        return acc

    def truncate(self, prec: int) -> "Laurent":
        if self.prec is not None and self.prec <= prec:
            return self
        return Laurent(self.F, self.v, self.c[: max(prec - self.v, 0)], prec)

    def hasse(self, k: int) -> "Laurent":
        """The k-th Hasse derivative D^{(k)} with respect to t."""
        if k == 0:
            return self
        F, p = self.F, self.F.p
        out = []
        for i, x in enumerate(self.c):
            b = binom_mod_p(self.v + i, k, p)
            out.append(F.mul(x, F.from_int(b)) if b and x else 0)
        prec = None if self.prec is None else self.prec - k
        return Laurent(F, self.v - k, out, prec)

    def frobenius(self, r: int) -> "Laurent":
        """The series raised to the p-power r: coefficients to the r-th power,
        exponents multiplied by r."""
        F = self.F
        out = [0] * ((len(self.c) - 1) * r + 1) if self.c else []
        for i, x in enumerate(self.c):
            out[i * r] = F.pow(x, r)
        prec = None if self.prec is None else self.prec * r
        return Laurent(F, self.v * r, out, prec)

    def map_coeffs(self, table: Sequence[int], F: FieldSpec) -> "Laurent":
        return Laurent(F, self.v, [table[x] for x in self.c], self.prec)

    def __repr__(self) -> str:
        terms = [f"[{x}]t^{self.v + i}" for i, x in enumerate(self.c) if x]
        tail = "" if self.prec is None else f" + O(t^{self.prec})"
        return (" + ".join(terms) or "0") + tail
