"""Truncated q-expansions of level one elliptic modular forms, Hecke
operators, eigenform extraction over Hecke fields and p-stabilization."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import sympy

from . import poly
from .exact_math import divisor_power_sum, factor_integer, is_prime, zeta_neg
from .ring_ext import (
    AlphaBetaRing,
    FieldElement,
    NonOrdinaryError,
    QuotientField,
)


class TruncationError(ValueError):
    pass


class RepeatedFactorError(ArithmeticError):
    pass


@dataclass(frozen=True)
class QExp:
    """a_0 + a_1 q + ... + a_N q^N."""

    weight: int
    coeffs: tuple

    @property
    def prec(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int):
        return self.coeffs[n]

    def __add__(self, other: "QExp") -> "QExp":
        n = min(len(self.coeffs), len(other.coeffs))
        return QExp(self.weight, tuple(a + b for a, b in zip(self.coeffs[:n], other.coeffs[:n])))

    def __sub__(self, other: "QExp") -> "QExp":
        n = min(len(self.coeffs), len(other.coeffs))
        return QExp(self.weight, tuple(a - b for a, b in zip(self.coeffs[:n], other.coeffs[:n])))

    def scale(self, c) -> "QExp":
        return QExp(self.weight, tuple(c * a for a in self.coeffs))

    def __mul__(self, other: "QExp") -> "QExp":
        n = min(len(self.coeffs), len(other.coeffs))
        zero = self.coeffs[0] * 0
        return QExp(self.weight + other.weight,
                    tuple(poly.mul_trunc(self.coeffs, other.coeffs, n, zero)))

    def truncate(self, n: int) -> "QExp":
        if n > self.prec:
            raise TruncationError(f"need precision {n}, have {self.prec}")
        return QExp(self.weight, self.coeffs[: n + 1])


def eisenstein_qexp(weight: int, prec: int) -> QExp:
    """zeta(1-2k)/2 + sum sigma_{2k-1}(m) q^m."""
    if weight < 4 or weight % 2:
        raise ValueError(f"weight must be even and >= 4, got {weight}")
    a0 = zeta_neg(weight) / 2
    return QExp(weight, (a0,) + tuple(Fraction(divisor_power_sum(m, weight - 1)) for m in range(1, prec + 1)))


def _eta_cubed(prec: int) -> list[int]:
    # prod (1 - q^n)^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}
    out = [0] * (prec + 1)
    k = 0
    while k * (k + 1) // 2 <= prec:
        out[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return out


def _int_mul_trunc(a: list[int], b: list[int], n: int) -> list[int]:
    out = [0] * n
    nz = [(i, x) for i, x in enumerate(a[:n]) if x]
    for i, x in nz:
        lim = n - i
        bi = b[:lim]
        for j, y in enumerate(bi):
            if y:
                out[i + j] += x * y
    return out


@lru_cache(maxsize=8)
def _tau_table(prec: int) -> tuple[int, ...]:
    # Delta = q prod (1-q^n)^24 = q (eta^3)^8
    n = prec  # coefficients of prod up to q^(prec-1)
    e3 = _eta_cubed(n)
    e6 = _int_mul_trunc(e3, e3, n)
    e12 = _int_mul_trunc(e6, e6, n)
    e24 = _int_mul_trunc(e12, e12, n)
    return (0,) + tuple(e24[: prec])


def delta_qexp(prec: int) -> QExp:
    taus = _tau_table(prec)
    return QExp(12, tuple(Fraction(t) for t in taus))


def ramanujan_tau(m: int) -> int:
    size = 64
    while size < m:
        size *= 2
    return _tau_table(size)[m]


def _monomial(a: int, b: int, c: int, prec: int) -> QExp:
    out = QExp(0, tuple([Fraction(1)] + [Fraction(0)] * prec))
    e4 = _normalized_eis(4, prec)
    e6 = _normalized_eis(6, prec)
    d = delta_qexp(prec)
    for _ in range(a):
        out = out * e4
    for _ in range(b):
        out = out * e6
    for _ in range(c):
        out = out * d
    return out


@lru_cache(maxsize=16)
def _normalized_eis(weight: int, prec: int) -> QExp:
    e = eisenstein_qexp(weight, prec)
    return e.scale(1 / e[0])


def cusp_form_dimension(weight: int) -> int:
    if weight % 2 or weight < 12:
        return 0
    d = weight // 12 - (1 if weight % 12 == 2 else 0)
    return d


def cusp_basis(weight: int, prec: int) -> list[QExp]:
    """Echelon basis of S_weight(SL2(Z)) from E4^a E6^b Delta^c, c >= 1."""
    if weight % 2:
        raise ValueError("weight must be even")
    monos = []
    for c in range(1, weight // 12 + 1):
        rest = weight - 12 * c
        for b in range(rest // 6 + 1):
            if (rest - 6 * b) % 4 == 0:
                monos.append(_monomial((rest - 6 * b) // 4, b, c, prec))
    rows = [list(m.coeffs) for m in monos]
    basis = _echelon(rows)
    if len(basis) != cusp_form_dimension(weight):
        raise ArithmeticError("cusp basis has unexpected dimension")
    return [QExp(weight, tuple(r)) for r in basis]


def _echelon(rows: list[list]) -> list[list]:
    # fully reduced row echelon form with pivot 1
    rows = [list(r) for r in rows]
    out = []
    col = 0
    ncols = len(rows[0]) if rows else 0
    while rows and col < ncols:
        piv = next((r for r in rows if r[col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows.remove(piv)
        lead = piv[col]
        piv = [x / lead for x in piv]
        rows = [[x - r[col] * y for x, y in zip(r, piv)] for r in rows]
        out = [[x - r[col] * y for x, y in zip(r, piv)] for r in out]
        out.append(piv)
        rows = [r for r in rows if any(r)]
        col += 1
    return out


def hecke_Tm(F: QExp, m: int, weight: int | None = None, prec: int | None = None) -> QExp:
    """a_n(T_m F) = sum_{d | gcd(m, n)} d^{k-1} a_{mn/d^2}(F) for n >= 1."""
    k = F.weight if weight is None else weight
    if prec is None:
        prec = F.prec // m
    if m * prec > F.prec:
        raise TruncationError(f"T_{m} to precision {prec} needs input precision {m * prec}")
    zero = F.coeffs[0] * 0
    out = [zero]
    for n in range(1, prec + 1):
        acc = zero
        for d in _common_divisors(m, n):
            acc = acc + d ** (k - 1) * F.coeffs[m * n // (d * d)]
        out.append(acc)
    return QExp(k, tuple(out))


def _common_divisors(m: int, n: int) -> list[int]:
    from math import gcd

    g = gcd(m, n)
    return [d for d in range(1, g + 1) if g % d == 0]


# ------------------------------------------------------------- eigenforms

@dataclass
class EigenformData:
    weight: int
    field: QuotientField
    coeffs: dict = field(default_factory=dict)  # m -> FieldElement, 1 <= m <= prec
    label: str = ""

    @property
    def prec(self) -> int:
        return max(self.coeffs)

    def coeff(self, m: int) -> FieldElement:
        """a_m, extended past the stored range by multiplicativity."""
        if m in self.coeffs:
            return self.coeffs[m]
        out = self.field.one
        for p, e in factor_integer(m).factors.items():
            out = out * self._prime_power(p, e)
        return out

    def _prime_power(self, p: int, e: int) -> FieldElement:
        if p ** e in self.coeffs:
            return self.coeffs[p**e]
        if p not in self.coeffs:
            raise TruncationError(f"a_{p} is not stored (precision {self.prec})")
        ap = self.coeffs[p]
        c = Fraction(p) ** (self.weight - 1)
        prev, cur = self.field.one, ap
        for _ in range(e - 1):
            prev, cur = cur, ap * cur - c * prev
        return cur

    def qexp(self) -> QExp:
        return QExp(self.weight, (self.field.zero,) + tuple(self.coeffs[m] for m in range(1, self.prec + 1)))


class _EisensteinMarker:
    """Normalized elliptic Eisenstein series E_{2k} viewed as an eigenform."""

    def __init__(self, weight: int):
        self.weight = weight
        self.field = QuotientField.rationals()
        self.label = f"E_{weight}"

    def coeff(self, m: int) -> FieldElement:
        return self.field(divisor_power_sum(m, self.weight - 1))

    def __eq__(self, other):
        return isinstance(other, _EisensteinMarker) and other.weight == self.weight

    def __hash__(self):
        return hash(("eis", self.weight))

    def __repr__(self):
        return f"EisensteinMarker({self.weight})"


def eisenstein_marker(weight: int) -> _EisensteinMarker:
    return _EisensteinMarker(weight)


def is_eisenstein(f) -> bool:
    return isinstance(f, _EisensteinMarker)


def _hecke_matrix(basis: list[QExp], m: int) -> list[list[Fraction]]:
    """Matrix of T_m in the echelon basis (columns are images)."""
    d = len(basis)
    pivots = [next(i for i, c in enumerate(b.coeffs) if c != 0) for b in basis]
    cols = []
    for b in basis:
        img = hecke_Tm(b, m, prec=max(pivots))
        cols.append([img.coeffs[p] for p in pivots])
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def _factor_charpoly(cp: list[Fraction]) -> list[tuple[list[int], int]]:
    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(cp))
    _, facs = sympy.factor_list(expr, x)
    out = []
    for fac, mult in facs:
        coeffs = sympy.Poly(fac, x).all_coeffs()[::-1]
        lead = coeffs[-1]
        out.append(([int(c / lead) for c in coeffs], int(mult)))
    return out


def eigenform_split(weight: int, prec: int = 30) -> list[EigenformData]:
    """Newforms of level one, one per Galois orbit, over their Hecke fields."""
    from .ring_ext import _charpoly

    basis = cusp_basis(weight, 2 * prec)
    if not basis:
        return []
    d = len(basis)
    T2 = _hecke_matrix(basis, 2)
    op = T2
    factors = _factor_charpoly(_charpoly(op))
    c = 0
    while any(m > 1 for _, m in factors):
        c += 1
        if c > 20:
            raise RepeatedFactorError(f"no squarefree split found in weight {weight}")
        T3 = _hecke_matrix(basis, 3)
        op = [[T2[i][j] + c * T3[i][j] for j in range(d)] for i in range(d)]
        factors = _factor_charpoly(_charpoly(op))
    out = []
    for g, _ in sorted(factors, key=lambda t: (len(t[0]), t[0])):
        K = QuotientField(g)
        vec = _kernel_vector(op, K.gen)
        coeffs = []
        for n in range(prec + 1):
            acc = K.zero
            for j, b in enumerate(basis):
                acc = acc + vec[j] * b.coeffs[n]
            coeffs.append(acc)
        a1 = coeffs[1]
        coeffs = [c / a1 for c in coeffs]
        f = EigenformData(weight, K, {m: coeffs[m] for m in range(1, prec + 1)})
        if K.degree == 1 and c == 0:
            # rational field: record a_2 as the generator value
            pass
        out.append(f)
    for f in out:
        f.label = f"f_{weight}" if len(out) == 1 else f"f_{weight}[{f.field.poly_str()}]"
    return out


def _kernel_vector(mat: list[list[Fraction]], lam: FieldElement) -> list[FieldElement]:
    """A nonzero v over K with (mat - lam) v = 0."""
    K = lam.parent
    d = len(mat)
    rows = [[K(mat[i][j]) - (lam if i == j else K.zero) for j in range(d)] for i in range(d)]
    # Gaussian elimination over K
    pivcols = []
    r = 0
    for col in range(d):
        piv = next((i for i in range(r, d) if not rows[i][col].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col].inverse()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(d):
            if i != r and not rows[i][col].is_zero():
                fct = rows[i][col]
                rows[i] = [x - fct * y for x, y in zip(rows[i], rows[r])]
        pivcols.append(col)
        r += 1
    free = [c for c in range(d) if c not in pivcols]
    if not free:
        raise ArithmeticError("eigenvalue has trivial kernel")
    fc = free[0]
    v = [K.zero] * d
    v[fc] = K.one
    for i, pc in enumerate(pivcols):
        v[pc] = -rows[i][fc]
    return v


def delta_eigenform(prec: int = 30) -> EigenformData:
    return eigenform_split(12, prec)[0]


def is_ordinary(f, p: int) -> bool:
    """Some root of the char poly of a_p, reduced mod p, is nonzero."""
    ap = f.coeff(p)
    cp = ap.charpoly()
    if any(c.denominator % p == 0 for c in cp):
        raise ValueError(f"a_{p} is not p-integral")
    h = [int(c) % p for c in cp]
    # strip factors of X
    while h and h[0] == 0:
        h = h[1:]
    h = poly.trim(h)
    if len(h) <= 1:
        return False
    return _has_root_mod_p(h, p)


def _has_root_mod_p(h: list[int], p: int) -> bool:
    # gcd(h, X^p - X) over F_p is nontrivial
    if p < 50:
        return any(sum(c * pow(x, i, p) for i, c in enumerate(h)) % p == 0 for x in range(p))
    xp = _powmod_poly([0, 1], p, h, p)
    diff = _sub_mod(xp, [0, 1], p)
    g = _gcd_mod(h, diff, p)
    return len(g) > 1


def _polymod(a, m, p):
    a = [x % p for x in a]
    inv = pow(m[-1], -1, p)
    while len(a) >= len(m):
        c = a[-1] * inv % p
        s = len(a) - len(m)
        for i, y in enumerate(m):
            a[s + i] = (a[s + i] - c * y) % p
        while a and a[-1] == 0:
            a.pop()
    return a


def _powmod_poly(base, e, m, p):
    out = [1]
    b = _polymod(base, m, p)
    while e:
        if e & 1:
            out = _polymod(poly.mul(out, b), m, p)
        b = _polymod(poly.mul(b, b), m, p)
        e >>= 1
    return out


def _sub_mod(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return out


def _gcd_mod(a, b, p):
    a = [x % p for x in a]
    while a and a[-1] == 0:
        a.pop()
    while b:
        a, b = b, _polymod(a, b, p)
    return a


def ordinary_p_stabilize(f: EigenformData, p: int) -> tuple[AlphaBetaRing, QExp]:
    """f*(q) = f(q) - beta f(q^p), as a q-expansion over the alpha/beta ring."""
    if not is_ordinary(f, p):
        raise NonOrdinaryError(f"{f.label} is not ordinary at {p}")
    ring = AlphaBetaRing(f.field, f.coeff(p), p, f.weight)
    coeffs = [ring.zero]
    for m in range(1, f.prec + 1):
        val = ring.scalar(f.coeff(m))
        if m % p == 0:
            val = val - ring.beta * f.coeff(m // p)
        coeffs.append(val)
    return ring, QExp(f.weight, tuple(coeffs))


def eisenstein_p_stabilize(weight: int, p: int, prec: int) -> QExp:
    """E(q) - p^{2k-1} E(q^p); constant term zeta^{(p)}(1-2k)/2."""
    if weight < 4 or weight % 2:
        raise ValueError("weight must be even and >= 4")
    c = p ** (weight - 1)
    coeffs = [zeta_neg(weight, remove_euler_at=p) / 2]
    for m in range(1, prec + 1):
        v = divisor_power_sum(m, weight - 1)
        if m % p == 0:
            v -= c * divisor_power_sum(m // p, weight - 1)
        coeffs.append(Fraction(v))
    return QExp(weight, tuple(coeffs))


def ordinary_primes(f, lo: int, hi: int) -> list[int]:
    return [p for p in range(lo, hi + 1) if is_prime(p) and is_ordinary(f, p)]
