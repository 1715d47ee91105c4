"""Number fields as quotients Q[x]/(g), fixed-precision p-adic roots, and the
ring E = K[y]/(y^2 - a_p y + p^(2k-1)) carrying both roots alpha = y and
beta = a_p - y of a Hecke polynomial."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Union

from . import poly


class ReducibleModulusError(ArithmeticError):
    """Raised when division exposes a zero divisor, i.e. g is reducible."""


class NonOrdinaryError(ValueError):
    pass


Scalar = Union[int, Fraction]


class QuotientField:
    """Q[x]/(g) for a monic integer polynomial g (lowest degree first)."""

    __slots__ = ("g", "var", "__dict__")

    def __init__(self, g, var: str = "x"):
        g = [int(c) for c in poly.trim(g)]
        if len(g) < 2 or g[-1] != 1:
            raise ValueError("defining polynomial must be monic of degree >= 1")
        self.g = tuple(g)
        self.var = var

    @classmethod
    def rationals(cls) -> "QuotientField":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.g) - 1

    def __eq__(self, other):
        return isinstance(other, QuotientField) and self.g == other.g

    def __hash__(self):
        return hash(self.g)

    def __repr__(self):
        return f"QuotientField({self.poly_str()})"

    def poly_str(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.g[i]
            if c == 0:
                continue
            mono = "" if i == 0 else (self.var if i == 1 else f"{self.var}^{i}")
            if mono:
                coef = "" if c == 1 else ("-" if c == -1 else f"{c}*")
                terms.append(f"{coef}{mono}")
            else:
                terms.append(str(c))
        return "+".join(terms).replace("+-", "-")

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            if value.parent != self:
                raise ValueError("parent mismatch")
            return value
        return FieldElement(self, [Fraction(value)])

    def from_coeffs(self, coeffs) -> "FieldElement":
        return FieldElement(self, coeffs)

    @cached_property
    def gen(self) -> "FieldElement":
        return FieldElement(self, [0, 1])

    @cached_property
    def zero(self) -> "FieldElement":
        return FieldElement(self, [])

    @cached_property
    def one(self) -> "FieldElement":
        return FieldElement(self, [1])

    def parse(self, text: str) -> "FieldElement":
        return self.from_coeffs(parse_poly(text, self.var))


class FieldElement:
    __slots__ = ("parent", "c")

    def __init__(self, parent: QuotientField, coeffs):
        coeffs = [Fraction(c) for c in coeffs]
        d = parent.degree
        if len(coeffs) > d:
            _, coeffs = poly.divmod_field(coeffs, [Fraction(c) for c in parent.g])
        coeffs = list(coeffs) + [Fraction(0)] * (d - len(coeffs))
        self.parent = parent
        self.c = tuple(coeffs)

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.parent != self.parent:
                raise ValueError("parent mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.parent, [other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.parent, [a + b for a, b in zip(self.c, other.c)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.parent, [-a for a in self.c])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return FieldElement(self.parent, [a - b for a, b in zip(self.c, other.c)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.parent, [a * other for a in self.c])
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.parent.degree == 1:
            return FieldElement(self.parent, [self.c[0] * other.c[0]])
        return FieldElement(self.parent, poly.mul(self.c, other.c, Fraction(0)))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in number field")
        if self.parent.degree == 1:
            return FieldElement(self.parent, [1 / self.c[0]])
        g, s, _ = poly.gcdex(list(self.c), [Fraction(c) for c in self.parent.g])
        if len(g) != 1:
            raise ReducibleModulusError(
                f"{self} is a zero divisor; {self.parent.poly_str()} is reducible"
            )
        return FieldElement(self.parent, s)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return FieldElement(self.parent, [a / other for a in self.c])
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out, base = self.parent.one, self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_zero(self) -> bool:
        return not any(self.c)

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.c[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.c[0] == other
        if isinstance(other, FieldElement):
            return self.parent == other.parent and self.c == other.c
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.c[0])
        return hash((self.parent, self.c))

    def norm(self) -> Fraction:
        return field_norm(self)

    def trace(self) -> Fraction:
        m = self.matrix()
        return sum(m[i][i] for i in range(len(m)))

    def matrix(self) -> list[list[Fraction]]:
        """Multiplication-by-self in the power basis (columns = images)."""
        d = self.parent.degree
        cols = []
        for i in range(d):
            basis = FieldElement(self.parent, [0] * i + [1])
            cols.append((self * basis).c)
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def charpoly(self) -> list[Fraction]:
        """Characteristic polynomial of multiplication, lowest degree first."""
        return _charpoly(self.matrix())

    def __repr__(self):
        return f"FieldElement({self})"

    def __str__(self):
        if self.parent.degree == 1:
            return str(self.c[0])
        return poly.to_str(self.c, self.parent.var)


def field_norm(a: FieldElement) -> Fraction:
    """Norm to Q as the resultant Res(g, a(x)) (g monic)."""
    if a.parent.degree == 1:
        return a.c[0]
    return poly.resultant(list(a.parent.g), list(a.c))


def _charpoly(m: list[list[Fraction]]) -> list[Fraction]:
    # Faddeev-LeVerrier, exact over the rationals
    n = len(m)
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        prod = _matmul(m, mk) if k > 1 else [[Fraction(0)] * n for _ in range(n)]
        mk = [[prod[i][j] + coeffs[n - k + 1] * ident[i][j] for j in range(n)] for i in range(n)]
        amk = _matmul(m, mk)
        coeffs[n - k] = -sum(amk[i][i] for i in range(n)) / k
    return coeffs


def _matmul(a, b):
    n, p, q = len(a), len(b), len(b[0])
    return [[sum(a[i][k] * b[k][j] for k in range(p)) for j in range(q)] for i in range(n)]


_TERM = re.compile(r"([+-]?)\s*(\d+(?:/\d+)?)?\s*\*?\s*(?:([a-zA-Z])(?:\^(\d+))?)?")


def parse_poly(text: str, var: str = "x") -> list[Fraction]:
    """Parse a sum of terms like '-2916*x^2+3/4*x-7', optionally '-( ... )'."""
    s = text.replace(" ", "")
    sign = 1
    m = re.fullmatch(r"([+-]?)\((.*)\)", s)
    if m:
        sign = -1 if m.group(1) == "-" else 1
        s = m.group(2)
    if not s:
        raise ValueError("empty polynomial")
    coeffs: dict[int, Fraction] = {}
    pos = 0
    while pos < len(s):
        t = _TERM.match(s, pos)
        if not t or t.end() == pos or not (t.group(2) or t.group(3)):
            raise ValueError(f"cannot parse polynomial term at {s[pos:]!r}")
        sgn, num, v, exp = t.groups()
        if v is not None and v != var:
            raise ValueError(f"unexpected variable {v!r} (expected {var!r})")
        c = Fraction(num) if num else Fraction(1)
        if sgn == "-":
            c = -c
        e = 0 if v is None else int(exp or 1)
        coeffs[e] = coeffs.get(e, Fraction(0)) + sign * c
        pos = t.end()
        if pos < len(s) and s[pos] not in "+-":
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
    deg = max(coeffs) if coeffs else 0
    return [coeffs.get(i, Fraction(0)) for i in range(deg + 1)]


# ------------------------------------------------------------------ p-adics

@dataclass(frozen=True)
class PadicNumber:
    p: int
    prec: int
    val: int
    unit: int

    def residue(self, m: int) -> int:
        """The value modulo p^m (requires val >= 0 and m <= prec + val)."""
        if self.val < 0:
            raise ValueError("not integral")
        return self.p**self.val * self.unit % self.p**m


def padic_unit_root(a_p: int, p: int, weight: int, prec: int = 30) -> tuple[PadicNumber, PadicNumber]:
    """Unit root alpha and non-unit root beta of X^2 - a_p X + p^(weight-1)."""
    if a_p % p == 0:
        raise NonOrdinaryError(f"p={p} divides a_p={a_p}: non-ordinary")
    mod = p**prec
    c = p ** (weight - 1)
    alpha = a_p % p
    # Newton/Hensel: f'(alpha) = 2 alpha - a_p is a unit
    m = p
    while m < mod:
        m = min(m * m, mod)
        f = alpha * alpha - a_p * alpha + c
        df = 2 * alpha - a_p
        alpha = (alpha - f * pow(df, -1, m)) % m
    assert (alpha * alpha - a_p * alpha + c) % mod == 0
    beta_unit = pow(alpha, -1, mod)
    return PadicNumber(p, prec, 0, alpha), PadicNumber(p, prec, weight - 1, beta_unit)


# -------------------------------------------------------- alpha/beta ring

class AlphaBetaRing:
    """E = K[y]/(y^2 - a_p y + p^(2k-1)); alpha = y, beta = a_p - y."""

    def __init__(self, base: QuotientField, a_p, p: int, weight: int):
        self.base = base
        self.a_p = base(a_p)
        self.p = p
        self.weight = weight
        self.norm_const = Fraction(p) ** (weight - 1)
        assert self.alpha + self.beta == self.scalar(self.a_p)
        assert self.alpha * self.beta == self.scalar(self.norm_const)

    def __repr__(self):
        return f"AlphaBetaRing(p={self.p}, weight={self.weight}, a_p={self.a_p})"

    def __eq__(self, other):
        return isinstance(other, AlphaBetaRing) and (self.base, self.a_p, self.p, self.weight) == (
            other.base, other.a_p, other.p, other.weight)

    def __hash__(self):
        return hash((self.base, self.p, self.weight))

    def element(self, c0, c1=0) -> "AlphaBeta":
        return AlphaBeta(self, self.base(c0), self.base(c1))

    def scalar(self, c) -> "AlphaBeta":
        return AlphaBeta(self, self.base(c), self.base.zero)

    @cached_property
    def alpha(self) -> "AlphaBeta":
        return AlphaBeta(self, self.base.zero, self.base.one)

    @cached_property
    def beta(self) -> "AlphaBeta":
        return AlphaBeta(self, self.a_p, -self.base.one)

    @cached_property
    def one(self) -> "AlphaBeta":
        return self.scalar(1)

    @cached_property
    def zero(self) -> "AlphaBeta":
        return self.scalar(0)

    def is_symmetric(self, x: "AlphaBeta") -> bool:
        return x.c1.is_zero()

    def descend(self, x: "AlphaBeta") -> FieldElement:
        if not self.is_symmetric(x):
            raise ValueError(f"{x} is not fixed by alpha <-> beta")
        return x.c0


class AlphaBeta:
    __slots__ = ("ring", "c0", "c1")

    def __init__(self, ring: AlphaBetaRing, c0: FieldElement, c1: FieldElement):
        self.ring = ring
        self.c0 = c0
        self.c1 = c1

    def _coerce(self, other):
        if isinstance(other, AlphaBeta):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("ring mismatch")
            return other
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.ring.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return AlphaBeta(self.ring, self.c0 + other.c0, self.c1 + other.c1)

    __radd__ = __add__

    def __neg__(self):
        return AlphaBeta(self.ring, -self.c0, -self.c1)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return AlphaBeta(self.ring, self.c0 - other.c0, self.c1 - other.c1)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            return AlphaBeta(self.ring, self.c0 * other, self.c1 * other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        # y^2 = a_p y - P
        r = self.ring
        cc = self.c1 * other.c1
        c0 = self.c0 * other.c0 - cc * r.norm_const
        c1 = self.c0 * other.c1 + self.c1 * other.c0 + cc * r.a_p
        return AlphaBeta(r, c0, c1)

    __rmul__ = __mul__

    def conjugate(self) -> "AlphaBeta":
        """Image under alpha <-> beta."""
        return AlphaBeta(self.ring, self.c0 + self.c1 * self.ring.a_p, -self.c1)

    def base_norm(self) -> FieldElement:
        return (self * self.conjugate()).c0

    def inverse(self) -> "AlphaBeta":
        n = self.base_norm()
        if n.is_zero():
            raise ZeroDivisionError(f"{self} is a zero divisor in {self.ring}")
        return self.conjugate() * n.inverse()

    def __truediv__(self, other):
        if isinstance(other, AlphaBeta):
            return self * other.inverse()
        return self * self.ring.base(other).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out, base = self.ring.one, self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.c0 == other.c0 and self.c1 == other.c1

    def __hash__(self):
        return hash((self.c0, self.c1))

    def is_zero(self) -> bool:
        return self.c0.is_zero() and self.c1.is_zero()

    def __repr__(self):
        return f"({self.c0}) + ({self.c1})*alpha"


def make_alpha_beta_ring(f, p: int) -> AlphaBetaRing:
    """Ring for an EigenformData f (or the Eisenstein marker via modforms1)."""
    return AlphaBetaRing(f.field, f.coeff(p), p, f.weight)

