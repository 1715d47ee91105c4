"""Exact integer and rational arithmetic: characters, arithmetic functions,
discriminants, Bernoulli numbers and L-values at non-positive integers."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

Rational = Fraction


class ParityError(ValueError):
    pass


class DiscriminantError(ValueError):
    pass


# Kronecker symbol (d/m), total extension:
#   m = 0        -> 1 if d in {1, -1} else 0
#   m = -1       -> 1 if d >= 0 else -1
#   m = 2        -> 0 if d even, 1 if d = +-1 mod 8, -1 if d = +-3 mod 8
#   odd prime q  -> Legendre symbol
# and complete multiplicativity in m elsewhere.
def kronecker(d: int, m: int) -> int:
    if m == 0:
        return 1 if d in (1, -1) else 0
    sign = 1
    if m < 0:
        m = -m
        if d < 0:
            sign = -1
    if d % 2 == 0 and m % 2 == 0:
        return 0
    tz = (m & -m).bit_length() - 1
    m >>= tz
    if tz & 1 and d % 8 in (3, 5):
        sign = -sign
    # m odd positive now: Jacobi symbol (d/m)
    a = d % m
    n = m
    result = sign
    while a:
        tz = (a & -a).bit_length() - 1
        a >>= tz
        if tz & 1 and n % 8 in (3, 5):
            result = -result
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a, n = n % a, a
    return result if n == 1 else 0


def moebius(n: int) -> int:
    if n < 1:
        raise ValueError("moebius needs n >= 1")
    result = 1
    for _, e in factor_integer(n).factors.items():
        if e > 1:
            return 0
        result = -result
    return result


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factor_integer(n).factors.items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def divisor_power_sum(m: int, e: int) -> int:
    if m < 1:
        raise ValueError("divisor_power_sum needs m >= 1")
    total = 1
    for p, a in factor_integer(m).factors.items():
        total *= sum(p ** (e * i) for i in range(a + 1))
    return total


def valuation(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def rational_valuation(x: Fraction, p: int) -> int | float:
    x = Fraction(x)
    if x == 0:
        return math.inf
    return valuation(x.numerator, p) - valuation(x.denominator, p)


def is_p_integral(x: Fraction, p: int) -> bool:
    return Fraction(x).denominator % p != 0


def congruent_mod(x: Fraction, y: Fraction, p: int, m: int) -> bool:
    """x = y mod p^m for p-integral rationals."""
    diff = Fraction(x) - Fraction(y)
    return rational_valuation(diff, p) >= m


# ---------------------------------------------------------------- factoring

_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
# primes up to 41 are a deterministic witness set below this bound
_DET_WITNESSES = _SMALL_PRIMES[:13]
_DET_LIMIT = 3_317_044_064_679_887_385_961_981


def _miller_rabin(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x in (1, n - 1):
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _lucas_probable_prime(n: int) -> bool:
    # strong Lucas test with Selfridge parameters
    if math.isqrt(n) ** 2 == n:
        return False
    D = 5
    while kronecker(D, n) != -1:
        D = -D - 2 if D > 0 else -D + 2
    P, Q = 1, (1 - D) // 4
    d, s = n + 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    U, V, Qk = 1, P, Q % n
    inv2 = pow(2, -1, n)
    for bit in bin(d)[3:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (P * U + V) * inv2 % n, (D * U + P * V) * inv2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if V == 0:
            return True
    return False


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < _DET_LIMIT:
        return all(_miller_rabin(n, a) for a in _DET_WITNESSES)
    rng = random.Random(n)
    if not all(_miller_rabin(n, rng.randrange(2, n - 1)) for _ in range(8)):
        return False
    return _miller_rabin(n, 2) and _lucas_probable_prime(n)


def _pollard_brent(n: int, seed: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(seed)
    y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
    g = r = q = 1
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
        r *= 2
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
            if g > 1:
                break
    return g


@dataclass(frozen=True)
class FactoredInteger:
    sign: int
    factors: dict = field(default_factory=dict)

    def value(self) -> int:
        out = self.sign
        for p, e in self.factors.items():
            out *= p**e
        return out

    def __str__(self) -> str:
        parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in sorted(self.factors.items())]
        body = "*".join(parts) if parts else "1"
        return ("-" if self.sign < 0 else "") + body


@lru_cache(maxsize=65536)
def _factor_cached(n: int) -> tuple:
    out: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 53
    while p * p <= n and p < 20000:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 2
    stack = [n] if n > 1 else []
    seed = 1
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        g = m
        while g in (1, m):
            g = _pollard_brent(m, seed)
            seed += 1
        stack += [g, m // g]
    return tuple(sorted(out.items()))


def factor_integer(n: int) -> FactoredInteger:
    if n == 0:
        raise ValueError("cannot factor zero")
    return FactoredInteger(1 if n > 0 else -1, dict(_factor_cached(abs(n))))


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, b in enumerate(sieve) if b]


# ------------------------------------------------------------ discriminants

def is_fundamental(d: int) -> bool:
    """1 counts as fundamental (the trivial character)."""
    if d == 1:
        return True
    if d == 0:
        return False
    if d % 4 == 1:
        return _squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factor_integer(n).factors.values())


@dataclass(frozen=True)
class Discriminant:
    value: int
    fundamental: int
    conductor: int


def fundamental_decomposition(D: int) -> Discriminant:
    if D == 0 or D % 4 not in (0, 1):
        raise DiscriminantError(f"{D} is not a discriminant (need D = 0, 1 mod 4, D != 0)")
    fac = factor_integer(D)
    s, g = fac.sign, 1
    for p, e in fac.factors.items():
        s *= p ** (e % 2)
        g *= p ** (e // 2)
    if s % 4 == 1:
        return Discriminant(D, s, g)
    return Discriminant(D, 4 * s, g // 2)


# ---------------------------------------------------------------- Bernoulli

@lru_cache(maxsize=None)
def _bernoulli_table(n: int) -> tuple:
    # B_0..B_n with B_1 = -1/2, from sum_{j<=m} C(m+1, j) B_j = 0
    B = [Fraction(1)]
    for m in range(1, n + 1):
        s = sum(math.comb(m + 1, j) * B[j] for j in range(m))
        B.append(-s / (m + 1))
    return tuple(B)


def bernoulli(k: int) -> Fraction:
    if k < 0:
        raise ValueError("k must be non-negative")
    size = max(k, 16)
    size = 1 << (size - 1).bit_length()
    return _bernoulli_table(size)[k]


def bernoulli_poly(k: int, x: Fraction) -> Fraction:
    x = Fraction(x)
    return sum(math.comb(k, j) * bernoulli(j) * x ** (k - j) for j in range(k + 1))


def generalized_bernoulli(k: int, d: int) -> Fraction:
    if not is_fundamental(d):
        raise DiscriminantError(f"{d} is not fundamental")
    if d == 1:
        return bernoulli_poly(k, Fraction(1))
    f = abs(d)
    chi_minus_one = 1 if d > 0 else -1
    if chi_minus_one != (-1) ** k:
        return Fraction(0)
    total = sum(kronecker(d, a) * bernoulli_poly(k, Fraction(a, f)) for a in range(1, f + 1))
    return f ** (k - 1) * total


def l_value_neg(k: int, d: int = 1, remove_euler_at: int | None = None) -> Fraction:
    """L(1-k, chi_d), optionally with the Euler factor at one prime removed."""
    if k < 1:
        raise ValueError("k must be positive")
    if d == 1:
        if k % 2:
            raise ParityError(f"zeta(1-k) needs even k, got k={k}")
    elif (1 if d > 0 else -1) != (-1) ** k:
        raise ParityError(f"chi_{d}(-1) != (-1)^{k}")
    value = -generalized_bernoulli(k, d) / k
    if remove_euler_at is not None:
        p = remove_euler_at
        value *= 1 - kronecker(d, p) * Fraction(p) ** (k - 1)
    return value


def zeta_neg(k: int, remove_euler_at: int | None = None) -> Fraction:
    """zeta(1-k) for even k >= 2."""
    return l_value_neg(k, 1, remove_euler_at)
