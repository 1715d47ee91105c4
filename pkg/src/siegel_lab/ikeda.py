"""Fourier coefficients of the genus-2n lift of an elliptic eigenform.

A coefficient is c_{|d_T|}(h) times, for every prime l of the conductor,
alpha_l^v F_l(T; l^(-k-n) beta_l).  Each local factor is evaluated in the
quadratic ring generated by alpha_l over the Hecke field and descended once
it is seen to be fixed by alpha <-> beta."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import poly
from .exact_math import factor_integer
from .kohnen_plus import PlusFormData, cohen_eisenstein_plus
from .modforms1 import eisenstein_marker
from .ring_ext import AlphaBeta, AlphaBetaRing, FieldElement, make_alpha_beta_ring
from .siegel_series import HalfIntegralMatrix, SiegelSeriesPoly, invariants, local_F


class LiftContextError(ValueError):
    pass


class InconsistentSiegelSeries(ArithmeticError):
    """F does not satisfy the functional equation needed for a phi expansion."""


@dataclass(frozen=True)
class LiftContext:
    n: int
    k: int
    f: object  # EigenformData or Eisenstein marker of weight 2k
    h: PlusFormData

    def __post_init__(self):
        if self.n < 1:
            raise LiftContextError(f"n must be positive, got {self.n}")
        if (self.k - self.n) % 2:
            raise LiftContextError(f"k={self.k} and n={self.n} must have the same parity")
        if self.k <= self.n + 1:
            raise LiftContextError(f"k={self.k} must exceed n + 1 = {self.n + 1}")
        if self.f.weight != 2 * self.k:
            raise LiftContextError(f"eigenform weight {self.f.weight} != 2k = {2 * self.k}")
        if self.h.k != self.k:
            raise LiftContextError(f"plus form has k={self.h.k}, expected {self.k}")

    @property
    def genus(self) -> int:
        return 2 * self.n

    @property
    def weight(self) -> int:
        return self.k + self.n

    def ring(self, l: int) -> AlphaBetaRing:
        return make_alpha_beta_ring(self.f, l)


def eisenstein_context(n: int, k: int) -> LiftContext:
    return LiftContext(n, k, eisenstein_marker(2 * k), cohen_eisenstein_plus(k))


# ------------------------------------------------------------ Satake data

@dataclass(frozen=True)
class SatakeParams:
    l: int
    n: int
    k: int
    ring: AlphaBetaRing
    psi: tuple  # psi_0, psi_1, ..., psi_2n

    def fundamental_equation(self) -> bool:
        prod = self.psi[0] * self.psi[0]
        for x in self.psi[1:]:
            prod = prod * x
        n, k = self.n, self.k
        return prod == self.ring.scalar(Fraction(self.l) ** (2 * n * (k + n) - n * (2 * n + 1)))

    def unit_root_product(self) -> AlphaBeta:
        out = self.psi[0]
        for x in self.psi[1 : self.n + 1]:
            out = out * x
        return out


def satake_params(ctx: LiftContext, l: int, ring: AlphaBetaRing | None = None) -> SatakeParams:
    ring = ring or ctx.ring(l)
    n, k = ctx.n, ctx.k
    lp = Fraction(l)
    psi0 = ring.scalar(lp ** (n * k - n * (n + 1) // 2))
    head = [ring.alpha * lp ** (i - k) for i in range(1, n + 1)]
    tail = [ring.beta * lp ** (i - k) for i in range(1, n + 1)]
    return SatakeParams(l, n, k, ring, (psi0, *head, *tail))


# ------------------------------------------------------------ coefficients

def local_factor(ring: AlphaBetaRing, F: SiegelSeriesPoly, k: int, n: int) -> AlphaBeta:
    """alpha^v F(l^(-k-n) beta) in the alpha/beta ring."""
    step = ring.beta * Fraction(F.l) ** (-k - n)
    return ring.alpha ** F.v * poly.evaluate(list(F.coeffs), step, one=ring.one)


def lift_coefficient(ctx: LiftContext, T: HalfIntegralMatrix, budget: int | None = None) -> FieldElement:
    if T.genus != ctx.genus:
        raise ValueError(f"matrix has genus {T.genus}, lift has genus {ctx.genus}")
    inv = invariants(T)
    value = ctx.h.fundamental(inv.fundamental)
    if inv.conductor == 1:
        return value
    for l in sorted(factor_integer(inv.conductor).factors):
        ring = ctx.ring(l)
        x = local_factor(ring, local_F(T, l, budget), ctx.k, ctx.n)
        value = value * ring.descend(x)
    return value


def eisenstein_as_lift(T: HalfIntegralMatrix, k: int, n: int) -> Fraction:
    """The lift formula fed with E_2k and the Cohen Eisenstein series."""
    return lift_coefficient(eisenstein_context(n, k), T).to_rational()


@dataclass
class LiftTable:
    """Memoized T -> A_T; entries are shared by forms with the same local data."""

    ctx: LiftContext
    values: dict = field(default_factory=dict)
    _by_key: dict = field(default_factory=dict, repr=False)

    def key(self, T: HalfIntegralMatrix) -> tuple:
        inv = invariants(T)
        local = ()
        if inv.conductor > 1:
            local = tuple((l, local_F(T, l).coeffs) for l in sorted(factor_integer(inv.conductor).factors))
        return inv.fundamental, inv.conductor, local

    def __getitem__(self, T: HalfIntegralMatrix) -> FieldElement:
        if T not in self.values:
            key = self.key(T)
            if key not in self._by_key:
                self._by_key[key] = lift_coefficient(self.ctx, T)
            self.values[T] = self._by_key[key]
        return self.values[T]


# ------------------------------------------------------------ phi_T(l^i)

def _reduce_monomial(i: int, j: int, P: Fraction) -> tuple[int, Fraction]:
    """alpha^i beta^j with alpha*beta = P, as (signed exponent, scalar)."""
    m = min(i, j)
    return i - j, P**m


def phi_extract(F: SiegelSeriesPoly, l: int, k: int, n: int) -> dict[int, int]:
    """phi(l^e) for e = 0..v, keyed by l^e.

    Both sides are compared in the basis alpha^m (m > 0), 1, beta^m (m > 0)
    of the generic ring with alpha*beta = l^(2k-1); a key m < 0 stands for
    beta^(-m)."""
    v = F.v
    P = Fraction(l) ** (2 * k - 1)
    lhs: dict[int, Fraction] = {}
    for j, a in enumerate(F.coeffs):
        e, s = _reduce_monomial(v, j, P)
        lhs[e] = lhs.get(e, 0) + a * s * Fraction(l) ** (-(k + n) * j)

    def hecke_power(i: int) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for t in range(i + 1):
            e, s = _reduce_monomial(i - t, t, P)
            out[e] = out.get(e, 0) + s
        return out

    basis = {i: hecke_power(i) for i in range(v + 1)}
    phi: dict[int, Fraction] = {}
    residual = dict(lhs)
    for i in range(v, -1, -1):
        # only a_{l^i} and higher reach alpha^i
        c = residual.get(i, Fraction(0))
        weight = Fraction(l) ** ((k - 1) * (v - i))
        phi[v - i] = c / weight
        for e, s in basis[i].items():
            residual[e] = residual.get(e, 0) - phi[v - i] * weight * s
    leftover = {e: c for e, c in residual.items() if c != 0}
    if leftover:
        raise InconsistentSiegelSeries(f"F = {F} leaves {leftover} after the phi expansion")
    out = {}
    for e, c in phi.items():
        if c.denominator != 1:
            raise InconsistentSiegelSeries(f"phi({l}^{e}) = {c} is not integral")
        out[l**e] = int(c)
    return out


def phi_reconstruct(phi: dict[int, int], ring: AlphaBetaRing, k: int, v: int) -> AlphaBeta:
    """sum_i phi(l^(v-i)) l^((k-1)(v-i)) a_{l^i}, with a_{l^i} = sum alpha^(i-t) beta^t."""
    l = ring.p
    total = ring.zero
    for i in range(v + 1):
        a = ring.zero
        for t in range(i + 1):
            a = a + ring.alpha ** (i - t) * ring.beta**t
        total = total + a * (phi[l ** (v - i)] * Fraction(l) ** ((k - 1) * (v - i)))
    return total


# ------------------------------------------------------------ Euler factors

@dataclass
class IdentityCheck:
    ok: bool
    lhs: object = None
    rhs: object = None
    detail: str = ""

    def __bool__(self):
        return self.ok


def standard_euler_factor(params: SatakeParams) -> list:
    """(1 - Y) prod_i (1 - psi_i Y)(1 - psi_i^-1 Y), Y = l^-s."""
    r = params.ring
    out = [r.one, -r.one]
    for x in params.psi[1:]:
        out = poly.mul(out, [r.one, -x], zero=r.zero)
        out = poly.mul(out, [r.one, -x.inverse()], zero=r.zero)
    return out


def hecke_euler_product(ctx: LiftContext, ring: AlphaBetaRing) -> list:
    """(1 - Y) prod_{i=1}^{2n} (1 - a_l l^(i-k-n) Y + l^(2k-1+2(i-k-n)) Y^2)."""
    l = Fraction(ring.p)
    k, n = ctx.k, ctx.n
    out = [ring.one, -ring.one]
    for i in range(1, 2 * n + 1):
        s = i - k - n
        quad = [ring.one, -ring.scalar(ring.a_p) * l**s, ring.scalar(l ** (2 * k - 1 + 2 * s))]
        out = poly.mul(out, quad, zero=ring.zero)
    return out


def euler_factor_check(ctx: LiftContext, l: int, ring: AlphaBetaRing | None = None) -> IdentityCheck:
    ring = ring or ctx.ring(l)
    params = satake_params(ctx, l, ring)
    lhs = standard_euler_factor(params)
    rhs = hecke_euler_product(ctx, ring)
    diff = poly.sub(lhs, rhs)
    return IdentityCheck(not diff, lhs, rhs, "" if not diff else f"difference {diff}")


__all__ = [
    "IdentityCheck",
    "InconsistentSiegelSeries",
    "LiftContext",
    "LiftContextError",
    "LiftTable",
    "SatakeParams",
    "eisenstein_as_lift",
    "eisenstein_context",
    "euler_factor_check",
    "lift_coefficient",
    "local_factor",
    "phi_extract",
    "phi_reconstruct",
    "satake_params",
    "standard_euler_factor",
]
