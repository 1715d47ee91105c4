"""Dense univariate polynomials as coefficient lists, lowest degree first.

Coefficients may live in any commutative ring whose elements support +, -, *
and comparison with 0 (ints, Fractions, FieldElement, AlphaBeta)."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def trim(p: Sequence) -> list:
    out = list(p)
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(p: Sequence) -> int:
    return len(trim(p)) - 1


def add(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out.append(x + y)
    return trim(out)


def neg(a: Sequence) -> list:
    return [-x for x in a]


def sub(a: Sequence, b: Sequence) -> list:
    return add(a, neg(b))


def scale(a: Sequence, c) -> list:
    return trim([c * x for x in a])


def mul(a: Sequence, b: Sequence, zero=0) -> list:
    if not a or not b:
        return []
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return trim(out)


def mul_trunc(a: Sequence, b: Sequence, n: int, zero=0) -> list:
    """Product truncated to degree < n."""
    out = [zero] * n
    for i, x in enumerate(a[:n]):
        if x == 0:
            continue
        for j in range(min(len(b), n - i)):
            out[i + j] = out[i + j] + x * b[j]
    return out


def evaluate(p: Sequence, x, one=1):
    acc = one * 0
    for c in reversed(list(p)):
        acc = acc * x + c
    return acc


def from_roots(roots: Sequence, one=1) -> list:
    """prod (Y - r), lowest degree first."""
    out = [one]
    for r in roots:
        out = mul(out, [-r, one])
    return out


def divmod_field(a: Sequence, b: Sequence) -> tuple[list, list]:
    """Division with remainder over a field (coefficients support /)."""
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [0] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] / lead
        q[shift] = c
        for i, y in enumerate(b):
            r[i + shift] = r[i + shift] - c * y
        r = trim(r)
    return trim(q), r


def gcdex(a: Sequence, b: Sequence) -> tuple[list, list, list]:
    """(g, s, t) with s*a + t*b = g over a field, g monic."""
    r0, r1 = trim(a), trim(b)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = divmod_field(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1))
        t0, t1 = t1, sub(t0, mul(q, t1))
    if not r0:
        return [], s0, t0
    lead = r0[-1]
    return [c / lead for c in r0], [c / lead for c in s0], [c / lead for c in t0]


def resultant(f: Sequence, g: Sequence) -> Fraction:
    """Res(f, g) over the rationals by the Euclidean recurrence."""
    f = [Fraction(c) for c in trim(f)]
    g = [Fraction(c) for c in trim(g)]
    if not f or not g:
        return Fraction(0)
    res = Fraction(1)
    while True:
        df, dg = len(f) - 1, len(g) - 1
        if dg == 0:
            return res * g[0] ** df
        if df < dg:
            if (df * dg) % 2:
                res = -res
            f, g = g, f
            continue
        _, r = divmod_field(f, g)
        if not r:
            return Fraction(0)
        dr = len(r) - 1
        # Res(f, g) = (-1)^{df dg} lc(g)^{df - dr} Res(g, r)
        if (df * dg) % 2:
            res = -res
        res *= g[-1] ** (df - dr)
        f, g = g, r


def derivative(p: Sequence) -> list:
    return trim([i * c for i, c in enumerate(p)][1:])


def to_str(p: Sequence, var: str = "X") -> str:
    terms = []
    for i, c in enumerate(p):
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and c == 1:
            terms.append(mono)
        elif mono and c == -1:
            terms.append("-" + mono)
        else:
            terms.append(f"{c}*{mono}" if mono else str(c))
    if not terms:
        return "0"
    return " + ".join(terms).replace("+ -", "- ")
