"""Local Siegel series of positive definite half-integral matrices.

b_l(T; X) = sum over R in Sym_g(Q_l)/Sym_g(Z_l) of e(tr(TR)) X^{v_l(nu_R)}
is computed coefficient by coefficient from matrices S mod l^j (R = S/l^j),
then divided by its rational prefactor and completed by the functional
equation to the polynomial F_l(T; X)."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from . import poly
from .exact_math import fundamental_decomposition, kronecker, valuation

DEFAULT_BUDGET = 2**31


class SiegelSeriesBoundError(RuntimeError):
    def __init__(self, l: int, v: int, genus: int, detail: str = ""):
        self.l, self.v, self.genus = l, v, genus
        super().__init__(f"siegel-series bound exceeded (l={l}, v={v}, genus={genus}){': ' + detail if detail else ''}")


class NotPositiveDefinite(ValueError):
    pass


class ContractionError(ArithmeticError):
    """Root-of-unity contraction did not land in the integers."""


def enumeration_budget() -> int:
    env = os.environ.get("SIEGEL_LAB_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


# ----------------------------------------------------------------- matrices

def _offdiag_positions(g: int) -> list[tuple[int, int]]:
    return [(i, j) for j in range(1, g) for i in range(j)]


@dataclass(frozen=True)
class HalfIntegralMatrix:
    """Stored as the even integral matrix 2T (integer diagonal t_ii doubled)."""

    doubled: tuple  # tuple of row tuples

    def __post_init__(self):
        A = self.doubled
        g = len(A)
        for i in range(g):
            if len(A[i]) != g:
                raise ValueError("matrix must be square")
            if A[i][i] % 2:
                raise ValueError(f"diagonal entry 2t_{i + 1}{i + 1} = {A[i][i]} must be even")
            for j in range(i):
                if A[i][j] != A[j][i]:
                    raise ValueError("matrix must be symmetric")

    @classmethod
    def from_bracket(cls, entries) -> "HalfIntegralMatrix":
        """[t11, ..., tgg, 2t12, 2t13, 2t23, 2t14, ...] (off-diagonals doubled)."""
        entries = [int(e) for e in entries]
        g = (math.isqrt(8 * len(entries) + 1) - 1) // 2
        if g * (g + 1) // 2 != len(entries) or g < 1:
            raise ValueError(f"{len(entries)} entries do not describe a symmetric matrix")
        A = [[0] * g for _ in range(g)]
        for i in range(g):
            A[i][i] = 2 * entries[i]
        for (i, j), val in zip(_offdiag_positions(g), entries[g:]):
            A[i][j] = A[j][i] = val
        return cls(tuple(map(tuple, A)))

    @classmethod
    def diagonal(cls, *diag: int) -> "HalfIntegralMatrix":
        return cls.from_bracket(list(diag) + [0] * (len(diag) * (len(diag) - 1) // 2))

    @property
    def genus(self) -> int:
        return len(self.doubled)

    def bracket(self) -> tuple:
        g = self.genus
        A = self.doubled
        return tuple(A[i][i] // 2 for i in range(g)) + tuple(A[i][j] for i, j in _offdiag_positions(g))

    def __str__(self):
        return "[" + ",".join(map(str, self.bracket())) + "]"

    def scale(self, u: int) -> "HalfIntegralMatrix":
        return HalfIntegralMatrix(tuple(tuple(u * x for x in row) for row in self.doubled))

    def transform(self, U) -> "HalfIntegralMatrix":
        """U^t T U."""
        g = self.genus
        A = self.doubled
        AU = [[sum(A[i][k] * U[k][j] for k in range(g)) for j in range(g)] for i in range(g)]
        out = [[sum(U[k][i] * AU[k][j] for k in range(g)) for j in range(g)] for i in range(g)]
        return HalfIntegralMatrix(tuple(map(tuple, out)))

    def quadratic_value(self, x) -> int:
        """x^t T x."""
        A = self.doubled
        g = self.genus
        return sum(A[i][i] // 2 * x[i] * x[i] for i in range(g)) + sum(
            A[i][j] * x[i] * x[j] for i, j in _offdiag_positions(g)
        )

    def trace_pairing(self, S) -> int:
        """tr(T S) for an integral symmetric S."""
        A = self.doubled
        g = self.genus
        return sum(A[i][i] // 2 * S[i][i] for i in range(g)) + sum(
            A[i][j] * S[i][j] for i, j in _offdiag_positions(g)
        )

    def det_doubled(self) -> int:
        return integer_det(self.doubled)

    def is_positive_definite(self) -> bool:
        A = self.doubled
        return all(integer_det([row[:r] for row in A[:r]]) > 0 for r in range(1, self.genus + 1))

    def content(self) -> int:
        """Largest m with T/m half-integral."""
        return math.gcd(*self.bracket())


def integer_det(A) -> int:
    """Bareiss fraction-free determinant."""
    M = [list(row) for row in A]
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if M[r][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


@dataclass(frozen=True)
class SiegelInvariants:
    disc: int  # (-1)^n det(2T)
    fundamental: int
    conductor: int
    content: int | None = None  # genus 2 only


def invariants(T: HalfIntegralMatrix) -> SiegelInvariants:
    g = T.genus
    if g % 2:
        raise ValueError(f"discriminant invariants need even genus, got {g}")
    if not T.is_positive_definite():
        raise NotPositiveDefinite(f"{T} is not positive definite")
    D = (-1) ** (g // 2) * T.det_doubled()
    dec = fundamental_decomposition(D)
    return SiegelInvariants(D, dec.fundamental, dec.conductor, T.content() if g == 2 else None)


# ------------------------------------------------------------ closed forms

@dataclass(frozen=True)
class SiegelSeriesPoly:
    l: int
    genus: int
    coeffs: tuple  # a_0 .. a_{2v}

    @property
    def v(self) -> int:
        return (len(self.coeffs) - 1) // 2

    def pairing_holds(self) -> bool:
        n = self.genus // 2
        v = self.v
        a = self.coeffs
        return len(a) == 2 * v + 1 and a[0] == 1 and all(
            a[2 * v - j] == self.l ** ((2 * n + 1) * (v - j)) * a[j] for j in range(v + 1)
        )

    def __call__(self, x):
        return poly.evaluate(self.coeffs, x)

    def __str__(self):
        return poly.to_str(self.coeffs)


def kaufhold_F(T: HalfIntegralMatrix, p: int) -> SiegelSeriesPoly:
    """Genus-2 closed form in terms of content, conductor and (d/p)."""
    if T.genus != 2:
        raise ValueError(f"closed form is for genus 2, got genus {T.genus}")
    inv = invariants(T)
    vf = valuation(inv.conductor, p)
    vm = valuation(inv.content, p)
    chi = kronecker(inv.fundamental, p)
    out: list = [0]
    for i in range(vm + 1):
        inner = [0] * (2 * (vf - i) + 1)
        for j in range(vf - i + 1):
            inner[2 * j] += p ** (3 * j)
        for j in range(vf - i):
            inner[2 * j + 1] -= chi * p * p ** (3 * j)
        out = poly.add(out, [0] * i + [c * p ** (2 * i) for c in inner])
    coeffs = tuple(out) + (0,) * (2 * vf + 1 - len(out))
    return SiegelSeriesPoly(p, 2, coeffs)


def rank1_F(b: int, l: int) -> list[int]:
    """sum_{i <= v_l(b)} (l X)^i."""
    return [l**i for i in range(valuation(b, l) + 1)]


# ---------------------------------------------------- elementary divisors

def elementary_valuations(S, l: int, m: int) -> list[int]:
    """l-valuations of the elementary divisors of S mod l^m, capped at m."""
    mod = l**m
    M = [[x % mod for x in row] for row in S]
    g = len(M)
    out = []
    rows = list(range(g))
    cols = list(range(g))
    while rows:
        best, bi, bj = m, None, None
        for i in rows:
            for j in cols:
                x = M[i][j]
                if x:
                    v = _val_capped(x, l, m)
                    if v < best:
                        best, bi, bj = v, i, j
                        if v == 0:
                            break
            if best == 0:
                break
        if bi is None:
            out += [m] * len(rows)
            break
        out.append(best)
        piv_unit_inv = pow(M[bi][bj] // l**best, -1, mod)
        for i in rows:
            if i == bi or not M[i][bj]:
                continue
            f = (M[i][bj] // l**best) * piv_unit_inv % mod
            for j in cols:
                M[i][j] = (M[i][j] - f * M[bi][j]) % mod
        rows.remove(bi)
        cols.remove(bj)
    return out


def _val_capped(x: int, l: int, m: int) -> int:
    v = 0
    while x % l == 0 and v < m:
        x //= l
        v += 1
    return v


def exponent_of(S, l: int, m: int) -> int:
    """v_l(nu_R) for R = S / l^m."""
    return sum(m - e for e in elementary_valuations(S, l, m))


# ------------------------------------------------ cyclotomic contraction

def contract_histogram(hist: dict, l: int, m: int) -> int:
    """sum_t hist[t] zeta^t for a primitive l^m-th root zeta, as an integer."""
    if m == 0:
        return sum(hist.values())
    N = l**m
    c = [0] * N
    for t, n in hist.items():
        c[t % N] += n
    step = l ** (m - 1)
    # Phi_{l^m}(x) = sum_{q<l} x^{q step}: eliminate the top block
    for r in range(step):
        top = c[(l - 1) * step + r]
        if top:
            for q in range(l - 1):
                c[q * step + r] -= top
            c[(l - 1) * step + r] = 0
    if any(c[1:]):
        raise ContractionError(f"character sum is not rational (l={l}, m={m}): {c}")
    return c[0]


# ----------------------------------------------------------- enumeration

class _Budget:
    def __init__(self, limit: int, l: int, v: int, genus: int):
        self.left = limit
        self.args = (l, v, genus)

    def spend(self, n: int = 1) -> None:
        self.left -= n
        if self.left < 0:
            raise SiegelSeriesBoundError(*self.args, detail="visit budget exhausted")


def _canonical_pivot(S, l: int):
    g = len(S)
    for i in range(g):
        if S[i][i] % l:
            return ("unit-diagonal", i)
    for i, j in _offdiag_positions_lex(g):
        if S[i][j] % l:
            return ("unit-block", i, j)
    return ("divisible",)


@lru_cache(maxsize=None)
def _offdiag_positions_lex(g: int) -> tuple:
    return tuple((i, j) for i in range(g) for j in range(i + 1, g))


def _strata(g: int, m: int, E: int, l: int, even_diag: bool, budget: _Budget):
    """Every symmetric S mod l^m (g x g) with exponent E, exactly once.

    Canonical pivot: first unit diagonal entry; else first unit off-diagonal
    entry (a 2 x 2 block); else S = l S1."""
    if E < 0:
        return
    if g == 0:
        if E == 0:
            yield ()
        return
    if m == 0:
        if E == 0:
            yield tuple((0,) * g for _ in range(g))
        return
    mod = l**m
    # S divisible by l
    for S1 in _strata(g, m - 1, E, l, False, budget):
        yield tuple(tuple(l * x for x in row) for row in S1)
    # unit diagonal pivot
    if not even_diag and E >= m:
        units = [u for u in range(1, mod) if u % l]
        for S2 in _strata(g - 1, m, E - m, l, False, budget):
            for u in units:
                uinv = pow(u, -1, mod)
                for b in product(range(mod), repeat=g - 1):
                    budget.spend()
                    C = [[(S2[r][s] + b[r] * uinv * b[s]) % mod for s in range(g - 1)] for r in range(g - 1)]
                    for i in range(g):
                        # pivot at index i: earlier diagonals must be nonunits
                        if i and C[i - 1][i - 1] % l:
                            break
                        yield _assemble_single(C, b, u, i, g)
    # unit off-diagonal block pivot
    if g >= 2 and E >= 2 * m:
        sub_even = l == 2
        for S2 in _strata(g - 2, m, E - 2 * m, l, sub_even, budget):
            for a, d in product(range(0, mod, l), repeat=2):
                for c in range(1, mod):
                    if c % l == 0:
                        continue
                    det = (a * d - c * c) % mod
                    dinv = pow(det, -1, mod)
                    inv = ((d * dinv) % mod, (-c * dinv) % mod, (a * dinv) % mod)
                    for B in product(range(mod), repeat=2 * (g - 2)):
                        budget.spend()
                        B0, B1 = B[: g - 2], B[g - 2 :]
                        C = [
                            [
                                (S2[r][s] + B0[r] * inv[0] * B0[s] + B0[r] * inv[1] * B1[s]
                                 + B1[r] * inv[1] * B0[s] + B1[r] * inv[2] * B1[s]) % mod
                                for s in range(g - 2)
                            ]
                            for r in range(g - 2)
                        ]
                        if any(C[r][r] % l for r in range(g - 2)):
                            continue
                        for i, j in _offdiag_positions_lex(g):
                            S = _assemble_block(C, B0, B1, a, c, d, i, j, g)
                            if _canonical_pivot(S, l) == ("unit-block", i, j):
                                yield S


def _assemble_single(C, b, u, i, g):
    others = [r for r in range(g) if r != i]
    S = [[0] * g for _ in range(g)]
    S[i][i] = u
    for r, orow in enumerate(others):
        S[i][orow] = S[orow][i] = b[r]
        for s, ocol in enumerate(others):
            S[orow][ocol] = C[r][s]
    return tuple(map(tuple, S))


def _assemble_block(C, B0, B1, a, c, d, i, j, g):
    others = [r for r in range(g) if r not in (i, j)]
    S = [[0] * g for _ in range(g)]
    S[i][i], S[j][j], S[i][j], S[j][i] = a, d, c, c
    for r, orow in enumerate(others):
        S[i][orow] = S[orow][i] = B0[r]
        S[j][orow] = S[orow][j] = B1[r]
        for s, ocol in enumerate(others):
            S[orow][ocol] = C[r][s]
    return tuple(map(tuple, S))


def _b_coefficient_stratified(T: HalfIntegralMatrix, l: int, j: int, budget: _Budget) -> int:
    hist: dict[int, int] = {}
    mod = l**j
    for S in _strata(T.genus, j, j, l, False, budget):
        t = T.trace_pairing(S) % mod
        hist[t] = hist.get(t, 0) + 1
    return contract_histogram(hist, l, j)


def _b_rank1(T: HalfIntegralMatrix, l: int) -> int:
    """b_1 from R = lambda x x^t / l: (l N_0 - (l^g - 1)) / (l - 1)."""
    g = T.genus
    zeros = sum(1 for x in product(range(l), repeat=g) if any(x) and T.quadratic_value(x) % l == 0)
    num = l * zeros - (l**g - 1)
    assert num % (l - 1) == 0
    return num // (l - 1)


def _b_full(T: HalfIntegralMatrix, l: int, v: int, budget: _Budget) -> list[int]:
    g = T.genus
    mod = l**v
    size = g * (g + 1) // 2
    budget.spend(mod**size)
    hists = [dict() for _ in range(v + 1)]
    pos = [(i, i) for i in range(g)] + _offdiag_positions(g)
    for entries in product(range(mod), repeat=size):
        S = [[0] * g for _ in range(g)]
        for (i, j), x in zip(pos, entries):
            S[i][j] = S[j][i] = x
        e = exponent_of(S, l, v)
        if e <= v:
            t = T.trace_pairing(S) % mod
            h = hists[e]
            h[t] = h.get(t, 0) + 1
    return [contract_histogram(h, l, v) for h in hists]


def bounded_b_coefficients(T: HalfIntegralMatrix, l: int, v: int, method: str = "auto",
                           budget: int | None = None) -> list[int]:
    """b_0 .. b_v of the local Siegel series.

    method: 'stratified' builds only the matrices with the wanted exponent,
    'full' enumerates all of Sym_g(Z/l^v), 'rank1' handles v = 1 by counting
    isotropic lines; 'auto' uses rank1 for v = 1 and stratified otherwise."""
    limit = enumeration_budget() if budget is None else budget
    g = T.genus
    bud = _Budget(limit, l, v, g)
    if v == 0:
        return [1]
    if method == "full":
        if l ** (v * g * (g + 1) // 2) > limit:
            raise SiegelSeriesBoundError(l, v, g, "full enumeration exceeds budget")
        return _b_full(T, l, v, bud)
    if method == "rank1" or (method == "auto" and v == 1):
        if v != 1:
            raise ValueError("rank1 shortcut needs v = 1")
        return [1, _b_rank1(T, l)]
    if method not in ("auto", "stratified"):
        raise ValueError(f"unknown method {method!r}")
    return [1] + [_b_coefficient_stratified(T, l, j, bud) for j in range(1, v + 1)]


def prefactor(inv: SiegelInvariants, l: int, genus: int) -> tuple[list[int], list[int]]:
    """(numerator, denominator) of b / F."""
    n = genus // 2
    num = [1, -1]
    for i in range(1, n + 1):
        num = poly.mul(num, [1, 0, -(l ** (2 * i))])
    den = [1, -kronecker(inv.fundamental, l) * l**n]
    return num, den


def complete_F(b: list[int], inv: SiegelInvariants, l: int, genus: int) -> SiegelSeriesPoly:
    v = valuation(inv.conductor, l)
    if len(b) != v + 1:
        raise ValueError(f"need b_0..b_{v}, got {len(b)} values")
    num, den = prefactor(inv, l, genus)
    # F = b * den / num, as power series to degree v
    inv_num = _series_inverse(num, v + 1)
    low = poly.mul_trunc(poly.mul(b, den), inv_num, v + 1)
    low = low + [0] * (v + 1 - len(low))
    if any(Fraction(x).denominator != 1 for x in low):
        raise ArithmeticError(f"non-integral Siegel series coefficients {low}")
    low = [int(x) for x in low]
    if low[0] != 1:
        raise ArithmeticError(f"constant term {low[0]} != 1")
    n = genus // 2
    full = low + [0] * v
    for j in range(v):
        full[2 * v - j] = l ** ((2 * n + 1) * (v - j)) * low[j]
    return SiegelSeriesPoly(l, genus, tuple(full))


def _series_inverse(a: list[int], n: int) -> list[int]:
    # a[0] = 1
    out = [1] + [0] * (n - 1)
    for k in range(1, n):
        out[k] = -sum(a[i] * out[k - i] for i in range(1, min(k, len(a) - 1) + 1))
    return out


def siegel_F(T: HalfIntegralMatrix, l: int, method: str = "auto", budget: int | None = None) -> SiegelSeriesPoly:
    """F_l(T; X) from the enumeration oracle."""
    inv = invariants(T)
    v = valuation(inv.conductor, l)
    if v == 0:
        return SiegelSeriesPoly(l, T.genus, (1,))
    b = bounded_b_coefficients(T, l, v, method, budget)
    return complete_F(b, inv, l, T.genus)


@lru_cache(maxsize=8192)
def local_F(T: HalfIntegralMatrix, l: int, budget: int | None = None) -> SiegelSeriesPoly:
    """F_l(T; X): closed form at genus 2, enumeration otherwise (memoized)."""
    if T.genus == 2:
        return kaufhold_F(T, l)
    return siegel_F(T, l, budget=budget)


def feasible(inv: SiegelInvariants, bounds: dict | None = None) -> list[tuple[int, int]]:
    """Primes of the conductor whose valuation exceeds the per-prime depth bound."""
    from .exact_math import factor_integer

    bounds = bounds or DEFAULT_DEPTH
    over = []
    if inv.conductor == 1:
        return over
    for l, v in factor_integer(inv.conductor).factors.items():
        if v > bounds.get(l, bounds.get("default", 1)):
            over.append((l, v))
    return over


DEFAULT_DEPTH = {2: 3, 3: 2, "default": 1}
