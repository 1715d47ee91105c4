"""Semi-ordinary p-stabilization of lifts.

The operator U_{p,0} sends A_T to A_{pT}.  Applying the polynomial Phi*(U)
to a lift and rescaling by Psi*(alpha^n)/Phi*(alpha^n) gives a form whose
U_{p,0}-eigenvalue is alpha^n; its coefficients also have a closed form
which the checks below compare against the operator route."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable

from . import poly
from .exact_math import factor_integer, kronecker, valuation
from .ikeda import IdentityCheck, LiftContext, lift_coefficient, local_factor, satake_params, SatakeParams
from .kohnen_plus import PlusFormData
from .modforms1 import is_eisenstein, is_ordinary
from .ring_ext import AlphaBeta, NonOrdinaryError
from .siegel_series import HalfIntegralMatrix, invariants, kaufhold_F, local_F


class OperatorRouteUnavailable(NotImplementedError):
    pass


# ------------------------------------------------------------ polynomials

@dataclass(frozen=True)
class HeckePolys:
    params: SatakeParams
    phi: list  # coefficient lists in Y, lowest degree first
    phi_star: list
    psi_star: list

    def at_unit_root(self, which: str) -> AlphaBeta:
        r = self.params.ring
        return poly.evaluate(getattr(self, which), r.alpha ** self.params.n, one=r.one)

    def ratio(self) -> AlphaBeta:
        """Psi*(alpha^n) / Phi*(alpha^n)."""
        return self.at_unit_root("psi_star") / self.at_unit_root("phi_star")


def _linear_product(roots, ring) -> list:
    out = [ring.one]
    for r in roots:
        out = poly.mul(out, [-r, ring.one], zero=ring.zero)
    return out


def hecke_polys(params: SatakeParams) -> HeckePolys:
    ring, n, k, p = params.ring, params.n, params.k, params.l
    psi = params.psi
    full_roots, star_roots = [psi[0]], []
    unit_tuple = tuple(range(1, n + 1))
    for r in range(1, 2 * n + 1):
        for idx in combinations(range(1, 2 * n + 1), r):
            root = psi[0]
            for i in idx:
                root = root * psi[i]
            full_roots.append(root)
            if idx != unit_tuple:
                star_roots.append(root)
    a_pow = ring.alpha ** (n - 1)
    psi_roots = [a_pow * Fraction(p) ** (k + n - 1)]
    psi_roots += [a_pow * ring.beta * Fraction(p) ** (2 * i - 2) for i in range(1, n + 1)]
    return HeckePolys(
        params,
        _linear_product(full_roots, ring),
        _linear_product(star_roots, ring),
        _linear_product(psi_roots, ring),
    )


def divides(a: list, b: list) -> bool:
    _, r = poly.divmod_field(b, a)
    return not r


# ------------------------------------------------------------ coefficient tables

@dataclass
class CoefficientTable:
    genus: int
    weight: int
    values: dict = field(default_factory=dict)  # HalfIntegralMatrix -> value
    provenance: str = "lift"

    def __getitem__(self, T):
        return self.values[T]

    def __contains__(self, T):
        return T in self.values

    def __len__(self):
        return len(self.values)

    def scale(self, c) -> "CoefficientTable":
        return CoefficientTable(self.genus, self.weight, {T: v * c for T, v in self.values.items()}, self.provenance)


def p_closure(Ts: Iterable[HalfIntegralMatrix], p: int, depth: int) -> list[HalfIntegralMatrix]:
    out = []
    for T in Ts:
        out.extend(T.scale(p**j) for j in range(depth + 1))
    return list(dict.fromkeys(out))


def apply_up0(tbl: CoefficientTable, p: int, oracle: Callable | None = None) -> CoefficientTable:
    """A_T(F|U_{p,0}) = A_{pT}(F).  Without an oracle, pT must be in the table."""
    out = {}
    for T in tbl.values:
        pT = T.scale(p)
        out[T] = oracle(pT) if oracle is not None else tbl.values[pT]
    return CoefficientTable(tbl.genus, tbl.weight, out, tbl.provenance)


def lift_table(ctx: LiftContext, Ts: Iterable[HalfIntegralMatrix], ring=None) -> CoefficientTable:
    """Lift coefficients, promoted into an alpha/beta ring when one is given."""
    vals = {}
    for T in Ts:
        a = lift_coefficient(ctx, T)
        vals[T] = ring.scalar(a) if ring is not None else a
    return CoefficientTable(ctx.genus, ctx.weight, vals, "lift")


# ------------------------------------------------------------ stabilization

def _operator_combination(ctx: LiftContext, T: HalfIntegralMatrix, p: int, coeffs: list, ring) -> AlphaBeta:
    total = ring.zero
    for j, c in enumerate(coeffs):
        if c == 0:
            continue
        total = total + c * lift_coefficient(ctx, T.scale(p**j))
    return total


def _require_operator_route(ctx: LiftContext):
    if ctx.n != 1:
        raise OperatorRouteUnavailable(
            f"operator route needs A at p^j T for j <= {2 ** (2 * ctx.n) - 2}; only n = 1 is supported"
        )


def stabilize_operator(ctx: LiftContext, Ts: Iterable[HalfIntegralMatrix], p: int) -> CoefficientTable:
    _require_operator_route(ctx)
    polys = hecke_polys(satake_params(ctx, p))
    ring = polys.params.ring
    ratio = polys.ratio()
    vals = {T: ratio * _operator_combination(ctx, T, p, polys.phi_star, ring) for T in Ts}
    return CoefficientTable(ctx.genus, ctx.weight, vals, "stabilized")


def _check_ordinary(ctx: LiftContext, p: int):
    if not is_eisenstein(ctx.f) and not is_ordinary(ctx.f, p):
        raise NonOrdinaryError(f"{ctx.f.label or 'eigenform'} is not ordinary at {p}")


def stabilize_closed(ctx: LiftContext, T: HalfIntegralMatrix, p: int, check_ordinary: bool = True,
                     budget: int | None = None) -> AlphaBeta:
    if check_ordinary:
        _check_ordinary(ctx, p)
    ring = ctx.ring(p)
    inv = invariants(T)
    value = ring.scalar(ctx.h.fundamental(inv.fundamental))
    for l in sorted(factor_integer(inv.conductor).factors) if inv.conductor > 1 else ():
        if l == p:
            continue
        ring_l = ctx.ring(l)
        value = value * ring_l.descend(local_factor(ring_l, local_F(T, l, budget), ctx.k, ctx.n))
    unit = ring.one - ring.beta * (kronecker(inv.fundamental, p) * Fraction(p) ** (-ctx.k))
    n = ctx.n
    return value * unit * ring.alpha ** (valuation(inv.conductor, p) + n * (n + 1))


def up0_eigen_check(ctx: LiftContext, Ts: Iterable[HalfIntegralMatrix], p: int,
                    check_ordinary: bool = True) -> IdentityCheck:
    ring = ctx.ring(p)
    eigen = ring.alpha**ctx.n
    bad = []
    for T in Ts:
        here = stabilize_closed(ctx, T, p, check_ordinary)
        there = stabilize_closed(ctx, T.scale(p), p, check_ordinary)
        if there != eigen * here:
            bad.append((str(T), there, eigen * here))
    return IdentityCheck(not bad, detail="; ".join(f"{t}: {a} != {b}" for t, a, b in bad))


def dagger_stabilize(ctx: LiftContext, Ts: Iterable[HalfIntegralMatrix], p: int) -> CoefficientTable:
    """Lift | (U - psi_0) Phi*(U)."""
    _require_operator_route(ctx)
    polys = hecke_polys(satake_params(ctx, p))
    ring = polys.params.ring
    coeffs = poly.mul([-polys.params.psi[0], ring.one], polys.phi_star, zero=ring.zero)
    vals = {T: _operator_combination(ctx, T, p, coeffs, ring) for T in Ts}
    return CoefficientTable(ctx.genus, ctx.weight, vals, "dagger")


def dagger_scalar(ctx: LiftContext, p: int, literal: bool = False) -> AlphaBeta:
    """Scalar relating the dagger and star stabilizations.

    The derived value is alpha^n - psi_0; ``literal=True`` returns 1 - psi_0,
    which agrees only when alpha = 1 (the Eisenstein case)."""
    ring = ctx.ring(p)
    psi0 = Fraction(p) ** (ctx.n * ctx.k - ctx.n * (ctx.n + 1) // 2)
    head = ring.one if literal else ring.alpha**ctx.n
    return head - psi0


def dagger_relation_check(ctx: LiftContext, Ts: Iterable[HalfIntegralMatrix], p: int,
                          literal: bool = False) -> IdentityCheck:
    Ts = list(Ts)
    polys = hecke_polys(satake_params(ctx, p))
    ratio = polys.ratio()
    dag = dagger_stabilize(ctx, Ts, p)
    star = stabilize_operator(ctx, Ts, p)
    c = dagger_scalar(ctx, p, literal)
    bad = [str(T) for T in Ts if ratio * dag[T] != c * star[T]]
    return IdentityCheck(not bad, detail="mismatch at " + ", ".join(bad) if bad else "")


# ------------------------------------------------------------ genus-2 identity

def master_identity_sides(p: int, T: HalfIntegralMatrix) -> tuple[list, list]:
    """F(p^2T) - (p^2X + p^3X^2)F(pT) + p^5X^3F(T) against 1 - (d/p)pX."""
    f0 = list(kaufhold_F(T, p).coeffs)
    f1 = list(kaufhold_F(T.scale(p), p).coeffs)
    f2 = list(kaufhold_F(T.scale(p * p), p).coeffs)
    lhs = poly.sub(poly.add(f2, poly.mul([0, 0, 0, p**5], f0)), poly.mul([0, p**2, p**3], f1))
    chi = kronecker(invariants(T).fundamental, p)
    return lhs, poly.trim([1, -chi * p])


def master_identity_check(p: int, Ts: Iterable[HalfIntegralMatrix]) -> IdentityCheck:
    bad = []
    for T in Ts:
        lhs, rhs = master_identity_sides(p, T)
        if lhs != rhs:
            bad.append(f"{T}: {lhs} != {rhs}")
    return IdentityCheck(not bad, detail="; ".join(bad))


# ------------------------------------------------------------ test data

def synthetic_plus(k: int, field, eigenform, seed: int = 0, spread: int = 10**6) -> PlusFormData:
    """Plus form with arbitrary integer fundamental coefficients.

    Every stabilization identity is linear in these values, so random ones
    exercise it as well as genuine ones do."""

    def rule(d: int) -> int:
        return random.Random(f"{seed}:{d}").randint(-spread, spread)

    return PlusFormData(k=k, field=field, eigenform=eigenform, fundamental_rule=rule)


__all__ = [
    "CoefficientTable",
    "HeckePolys",
    "OperatorRouteUnavailable",
    "apply_up0",
    "dagger_relation_check",
    "dagger_scalar",
    "dagger_stabilize",
    "divides",
    "hecke_polys",
    "lift_table",
    "master_identity_check",
    "master_identity_sides",
    "p_closure",
    "stabilize_closed",
    "stabilize_operator",
    "synthetic_plus",
    "up0_eigen_check",
]
