"""Plus-space forms of weight k + 1/2, stored as fundamental coefficients
and extended through the Shimura-correspondent eigenform."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable

from .exact_math import (
    DiscriminantError,
    divisor_power_sum,
    divisors,
    fundamental_decomposition,
    is_fundamental,
    kronecker,
    l_value_neg,
    moebius,
)
from .modforms1 import eisenstein_marker, is_eisenstein
from .ring_ext import QuotientField, parse_poly


class UnsupportedDiscriminant(KeyError):
    """The fundamental coefficient c_|d| is not known."""

    def __init__(self, d: int):
        super().__init__(d)
        self.discriminant = d

    def __str__(self):
        return f"unsupported discriminant {self.discriminant}: c_{abs(self.discriminant)} not in table"


class PlusTableError(ValueError):
    pass


def plus_support(k: int, m: int) -> bool:
    return ((-1) ** k * m) % 4 in (0, 1)


@dataclass
class PlusFormData:
    k: int
    field: QuotientField
    coeffs: dict = field(default_factory=dict)  # |d| -> FieldElement
    eigenform: object = None
    fundamental_rule: Callable | None = None  # |d| -> value, for closed-form families

    def fundamental(self, d: int):
        """c_|d| for a fundamental discriminant d of sign (-1)^k."""
        key = abs(d)
        if key in self.coeffs:
            return self.coeffs[key]
        if self.fundamental_rule is not None:
            return self.field(self.fundamental_rule(d))
        raise UnsupportedDiscriminant(d)

    def coefficient(self, m: int):
        return propagate_eq2(self, m)


def _split(k: int, m: int) -> tuple[int, int]:
    disc = fundamental_decomposition((-1) ** k * m)
    return disc.fundamental, disc.conductor


def propagate_eq2(h: PlusFormData, m: int):
    """c_m = c_|d| sum_{e | f} mu(e) (d/e) e^{k-1} a_{f/e}, for m = |d| f^2."""
    if m < 1:
        raise ValueError("m must be positive")
    if not plus_support(h.k, m):
        return h.field.zero
    d, f = _split(h.k, m)
    base = h.fundamental(d)
    if f == 1:
        return base
    if h.eigenform is None:
        raise ValueError("propagation past fundamental indices needs the eigenform")
    total = h.field.zero
    for e in divisors(f):
        mu = moebius(e)
        if mu == 0:
            continue
        sym = kronecker(d, e)
        if sym == 0:
            continue
        total = total + mu * sym * e ** (h.k - 1) * _eigenvalue(h, f // e)
    return base * total


def _eigenvalue(h: PlusFormData, m: int):
    f = h.eigenform
    if is_eisenstein(f):
        return h.field(divisor_power_sum(m, 2 * h.k - 1))
    val = f.coeff(m)
    if val.parent != h.field:
        if val.parent.degree == 1 and h.field.degree == 1:
            return h.field(val.c[0])
        raise ValueError("plus form and eigenform live over different fields")
    return val


def cohen_eisenstein_plus(k: int) -> PlusFormData:
    """Plus form whose fundamental coefficients are L(1-k, chi_d)."""
    if k < 2:
        raise ValueError("k must be at least 2")
    return PlusFormData(
        k=k,
        field=QuotientField.rationals(),
        eigenform=eisenstein_marker(2 * k),
        fundamental_rule=lambda d: l_value_neg(k, d),
    )


def cohen_eisenstein_coeff(k: int, m: int) -> Fraction:
    if not plus_support(k, m):
        raise ValueError(f"m={m} is outside the plus support for k={k}")
    return propagate_eq2(cohen_eisenstein_plus(k), m).to_rational()


def hecke_l2_sides(h: PlusFormData, m: int, l: int):
    """Both sides of T_{l^2}: c_{l^2 m} + (D/l) l^{k-1} c_m + l^{2k-1} c_{m/l^2}
    against a_l c_m, with D = (-1)^k m."""
    D = (-1) ** h.k * m
    lhs = propagate_eq2(h, l * l * m) + kronecker(D, l) * Fraction(l) ** (h.k - 1) * propagate_eq2(h, m)
    if m % (l * l) == 0:
        lhs = lhs + Fraction(l) ** (2 * h.k - 1) * propagate_eq2(h, m // (l * l))
    rhs = _eigenvalue(h, l) * propagate_eq2(h, m)
    return lhs, rhs


# -------------------------------------------------------------- ingestion

def ingest_plus_table(path, eigenform=None) -> PlusFormData:
    text = Path(path).read_text(encoding="utf-8")
    return parse_plus_table(text, eigenform, source=str(path))


def parse_plus_table(text: str, eigenform=None, source: str = "<string>") -> PlusFormData:
    k = None
    K = None
    entries: dict[int, object] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" in line:
            key, val = (s.strip() for s in line.split(":", 1))
            if key == "k":
                k = int(val)
            elif key == "field":
                K = QuotientField([int(c) for c in parse_poly(val)])
            else:
                raise PlusTableError(f"{source}:{lineno}: unknown header {key!r}")
            continue
        parts = line.split(None, 1)
        if len(parts) != 2:
            raise PlusTableError(f"{source}:{lineno}: malformed line {raw!r}")
        try:
            m = int(parts[0])
        except ValueError:
            raise PlusTableError(f"{source}:{lineno}: bad index {parts[0]!r}") from None
        if k is None:
            raise PlusTableError(f"{source}:{lineno}: 'k:' header must precede entries")
        if K is None:
            K = QuotientField.rationals()
        d = (-1) ** k * m
        if not is_fundamental(d):
            raise PlusTableError(f"{source}:{lineno}: {d} is not a fundamental discriminant")
        if m == 1 and k % 2:
            raise PlusTableError(f"{source}:{lineno}: sign mismatch, index 1 needs even k")
        try:
            entries[m] = K.parse(parts[1])
        except (ValueError, ZeroDivisionError) as exc:
            raise PlusTableError(f"{source}:{lineno}: bad coefficient {parts[1]!r}: {exc}") from None
    if not entries:
        raise PlusTableError(f"{source}: no coefficients")
    if eigenform is not None and not is_eisenstein(eigenform) and eigenform.weight != 2 * k:
        raise PlusTableError(f"{source}: eigenform weight {eigenform.weight} != 2k = {2 * k}")
    return PlusFormData(k=k, field=K, coeffs=entries, eigenform=eigenform)


def builtin_table(name: str, eigenform=None) -> PlusFormData:
    """Shipped tables: 'h13_2' (attached to Delta) and 'h33_2' (weight 32)."""
    text = resources.files("siegel_lab").joinpath("data", f"{name}.txt").read_text(encoding="utf-8")
    return parse_plus_table(text, eigenform, source=name)


__all__ = [
    "DiscriminantError",
    "PlusFormData",
    "PlusTableError",
    "UnsupportedDiscriminant",
    "builtin_table",
    "cohen_eisenstein_coeff",
    "cohen_eisenstein_plus",
    "hecke_l2_sides",
    "ingest_plus_table",
    "parse_plus_table",
    "plus_support",
    "propagate_eq2",
]
