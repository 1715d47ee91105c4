"""Fourier coefficients of Siegel Eisenstein series of genus 2n and weight
k + n, with and without the Euler factor at a prime p removed."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

from . import poly
from .exact_math import congruent_mod, factor_integer, is_p_integral, l_value_neg, zeta_neg
from .ikeda import IdentityCheck
from .siegel_series import HalfIntegralMatrix, integer_det, invariants, local_F, rank1_F


class UnsupportedRank(ValueError):
    pass


@dataclass(frozen=True)
class EisensteinContext:
    n: int
    k: int
    p: int | None = None

    def __post_init__(self):
        if self.n < 1 or self.k <= self.n + 1:
            raise ValueError(f"need k > n + 1 >= 2, got n={self.n}, k={self.k}")
        if (self.k - self.n) % 2:
            raise ValueError(f"k={self.k} and n={self.n} must have the same parity")

    @property
    def genus(self) -> int:
        return 2 * self.n

    @property
    def weight(self) -> int:
        return self.k + self.n


def matrix_rank(T: HalfIntegralMatrix) -> int:
    A = [[Fraction(x) for x in row] for row in T.doubled]
    g, r = len(A), 0
    for c in range(g):
        piv = next((i for i in range(r, g) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(g):
            if i != r and A[i][c] != 0:
                m = A[i][c] / A[r][c]
                A[i] = [x - m * y for x, y in zip(A[i], A[r])]
        r += 1
    return r


def _is_semidefinite(T: HalfIntegralMatrix) -> bool:
    # principal minors of every size are non-negative
    A = T.doubled
    g = T.genus
    return all(
        integer_det([[A[i][j] for j in idx] for i in idx]) >= 0
        for r in range(1, g + 1)
        for idx in combinations(range(g), r)
    )


def _coefficient(ctx: EisensteinContext, T: HalfIntegralMatrix, p: int | None) -> Fraction:
    if T.genus != ctx.genus:
        raise ValueError(f"matrix has genus {T.genus}, series has genus {ctx.genus}")
    n, k = ctx.n, ctx.k
    rank = matrix_rank(T)
    if rank == 0:
        value = Fraction(1, 2**n) * zeta_neg(k + n, p)
        for i in range(1, n + 1):
            value *= zeta_neg(2 * k + 2 * n - 2 * i, p)
        return value
    if not _is_semidefinite(T):
        raise ValueError(f"{T} is not positive semidefinite")
    if rank == 2 * n:
        inv = invariants(T)
        value = l_value_neg(k, inv.fundamental, p)
        if inv.conductor > 1:
            for l in sorted(factor_integer(inv.conductor).factors):
                if l != p:
                    value *= local_F(T, l)(Fraction(l) ** (k - n - 1))
        return value
    if rank == 1 and T.genus == 2:
        m = T.content()
        value = zeta_neg(2 * k, p)
        for l in sorted(factor_integer(m).factors) if m > 1 else ():
            if l != p:
                value *= poly.evaluate(rank1_F(m, l), Fraction(l) ** (k - 1))
        return value
    raise UnsupportedRank(f"rank {rank} coefficients are out of scope at genus {T.genus}")


def eisenstein_coeff(ctx: EisensteinContext, T: HalfIntegralMatrix) -> Fraction:
    return _coefficient(ctx, T, None)


def stabilized_eisenstein_coeff(ctx: EisensteinContext, T: HalfIntegralMatrix) -> Fraction:
    if ctx.p is None:
        raise ValueError("context has no stabilization prime")
    return _coefficient(ctx, T, ctx.p)


def zero_matrix(genus: int) -> HalfIntegralMatrix:
    return HalfIntegralMatrix(tuple((0,) * genus for _ in range(genus)))


# ------------------------------------------------------------ identities

def telescoping_sides(p: int, m: int) -> tuple[list, list]:
    """F1(p^2m; pX) - (p^2X + p^3X^2)F1(pm; pX) + p^5X^3 F1(m; pX) against 1 - p^3X^2."""

    def at_pX(b: int) -> list:
        return [c * p**i for i, c in enumerate(rank1_F(b, p))]

    lhs = poly.add(at_pX(p * p * m), poly.mul([0, 0, 0, p**5], at_pX(m)))
    lhs = poly.sub(lhs, poly.mul([0, p**2, p**3], at_pX(p * m)))
    return lhs, [1, 0, -(p**3)]


def telescoping_check(p: int, ms: Iterable[int]) -> IdentityCheck:
    bad = []
    for m in ms:
        lhs, rhs = telescoping_sides(p, m)
        if lhs != rhs:
            bad.append(f"m={m}: {lhs}")
    return IdentityCheck(not bad, detail="; ".join(bad))


def up0_eisenstein_check(ctx: EisensteinContext, Ts: Iterable[HalfIntegralMatrix]) -> IdentityCheck:
    """Stabilized coefficients are unchanged under T -> pT."""
    bad = []
    for T in Ts:
        a = stabilized_eisenstein_coeff(ctx, T)
        b = stabilized_eisenstein_coeff(ctx, T.scale(ctx.p))
        if a != b:
            bad.append(f"{T}: {a} vs {b}")
    return IdentityCheck(not bad, detail="; ".join(bad))


@dataclass(frozen=True)
class KummerResult:
    ok: bool
    values: tuple
    integral: bool
    detail: str = ""

    def __bool__(self):
        return self.ok


def kummer_check(T: HalfIntegralMatrix, p: int, n: int, weights: tuple[int, int], m: int = 1) -> KummerResult:
    k1, k2 = weights
    period = (p - 1) * p ** (m - 1)
    if (k1 - k2) % period:
        raise ValueError(f"weights {k1}, {k2} are not congruent mod {period}")
    vals = tuple(stabilized_eisenstein_coeff(EisensteinContext(n, k, p), T) for k in weights)
    integral = all(is_p_integral(v, p) for v in vals)
    if not integral:
        return KummerResult(False, vals, False, f"not {p}-integral: excluded branch")
    ok = congruent_mod(vals[0], vals[1], p, m)
    return KummerResult(ok, vals, True, "" if ok else f"{vals[0]} != {vals[1]} mod {p}^{m}")


__all__ = [
    "EisensteinContext",
    "KummerResult",
    "UnsupportedRank",
    "eisenstein_coeff",
    "kummer_check",
    "matrix_rank",
    "stabilized_eisenstein_coeff",
    "telescoping_check",
    "telescoping_sides",
    "up0_eisenstein_check",
    "zero_matrix",
]
