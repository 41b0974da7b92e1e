"""Dense univariate polynomials over a FieldSpec.

A polynomial is a list of element codes, lowest degree first, with no
trailing zeros; ``[]`` is the zero polynomial.
"""

from __future__ import annotations

from typing import Sequence

from .ff import FieldSpec

Poly = list


def trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a: Sequence[int]) -> int:
    return len(a) - 1 if a else -1


def add(F: FieldSpec, a: Sequence[int], b: Sequence[int]) -> list[int]:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] = F.add(out[i], y)
    return trim(out)


def neg(F: FieldSpec, a: Sequence[int]) -> list[int]:
    return [F.neg(x) for x in a]


def sub(F: FieldSpec, a: Sequence[int], b: Sequence[int]) -> list[int]:
    return add(F, a, neg(F, b))


def scale(F: FieldSpec, a: Sequence[int], c: int) -> list[int]:
    if c == 0:
        return []
    return [F.mul(x, c) for x in a]


def mul(F: FieldSpec, a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    fmul, fadd = F.mul, F.add
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = fadd(out[i + j], fmul(x, y))
    return trim(out)


def power(F: FieldSpec, a: Sequence[int], e: int) -> list[int]:
    if e < 0:
        raise ValueError("negative polynomial power")
    acc: list[int] = [1]
    base = list(a)
    while e:
        if e & 1:
            acc = mul(F, acc, base)
        e >>= 1
        if e:
            base = mul(F, base, base)
    return acc


def divmod_(F: FieldSpec, a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], trim(r)
    inv = F.inv(b[-1])
    qt = [0] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        if c == 0:
            continue
        f = F.mul(c, inv)
        qt[k - db] = f
        for i, y in enumerate(b):
            if y:
                r[k - db + i] = F.sub(r[k - db + i], F.mul(f, y))
    return trim(qt), trim(r[:db])


def monic(F: FieldSpec, a: Sequence[int]) -> list[int]:
    if not a:
        return []
    return scale(F, a, F.inv(a[-1]))


def gcd(F: FieldSpec, a: Sequence[int], b: Sequence[int]) -> list[int]:
    a, b = trim(list(a)), trim(list(b))
    while b:
        a, b = b, divmod_(F, a, b)[1]
    return monic(F, a)


def evaluate(F: FieldSpec, a: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def from_roots(F: FieldSpec, factors: Sequence[tuple[int, int]]) -> list[int]:
    """``prod (z - a)^e`` for (a, e) pairs."""
    out: list[int] = [1]
    for a, e in factors:
        out = mul(F, out, power(F, [F.neg(a), 1], e))
    return out


def embed(table: Sequence[int], a: Sequence[int]) -> list[int]:
    return [table[c] for c in a]


def valuation_at(F: FieldSpec, a: Sequence[int], root: int) -> int:
    """Multiplicity of ``root`` as a zero of a nonzero polynomial."""
    if not a:
        raise ValueError("zero polynomial")
    k = 0
    lin = [F.neg(root), 1]
    while True:
        q, r = divmod_(F, a, lin)
        if r:
            return k
        a = q
        k += 1


def to_str(F: FieldSpec, a: Sequence[int], var: str = "z") -> str:
    if not a:
        return "0"
    terms = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        coef = "" if (c == 1 and mono) else f"[{c}]" if F.k > 1 else str(c)
        terms.append(f"{coef}*{mono}" if coef and mono else coef or mono)
    return " + ".join(terms)


def mulmod(F: FieldSpec, a: Sequence[int], b: Sequence[int], mod: Sequence[int]) -> list[int]:
    return divmod_(F, mul(F, a, b), mod)[1]


def powmod(F: FieldSpec, a: Sequence[int], e: int, mod: Sequence[int]) -> list[int]:
    acc: list[int] = divmod_(F, [1], mod)[1]
    base = divmod_(F, list(a), mod)[1]
    while e:
        if e & 1:
            acc = mulmod(F, acc, base, mod)
        e >>= 1
        if e:
            base = mulmod(F, base, base, mod)
    return acc


def split_roots(F: FieldSpec, a: Sequence[int], seed: int = 0) -> list[int]:
    """Roots of a squarefree polynomial that splits into linear factors over F
    (equal-degree splitting with random shifts)."""
    import random

    rng = random.Random(seed)
    out: list[int] = []
    stack = [monic(F, trim(list(a)))]
    while stack:
        g = stack.pop()
        n = deg(g)
        if n < 1:
            continue
        if n == 1:
            out.append(F.neg(g[0]))
            continue
        if F.size <= 64:
            out.extend(x for x in F.elements() if evaluate(F, g, x) == 0)
            continue
        while True:
            d = rng.randrange(1, F.size)
            if F.p == 2:
                t = [0, d]
                acc = list(t)
                for _ in range(F.k - 1):
                    t = mulmod(F, t, t, g)
                    acc = add(F, acc, t)
                h = acc
            else:
                h = sub(F, powmod(F, [d, 1], F.order // 2, g), [1])
            f = gcd(F, g, h)
            if 0 < deg(f) < n:
                stack.append(f)
                stack.append(divmod_(F, g, f)[0])
                break
    return sorted(out)
