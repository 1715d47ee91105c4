"""Positive definite integral binary quadratic forms [a, b, c] = ax^2 + bxy + cy^2:
class sets under SL2(Z) and Gamma_0(p), the four level-p correspondences,
genus characters and the linear Legendre sum."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import count, product

from .exact_math import is_fundamental, kronecker


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class BQF:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def content(self) -> int:
        return math.gcd(self.a, math.gcd(self.b, self.c))

    def is_primitive(self) -> bool:
        return self.content == 1

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __str__(self):
        return f"[{self.a},{self.b},{self.c}]"


Matrix = tuple  # ((m11, m12), (m21, m22))

IDENTITY: Matrix = ((1, 0), (0, 1))


def _det(m: Matrix) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def _matmul(x: Matrix, y: Matrix) -> Matrix:
    return (
        (x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]),
        (x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]),
    )


def _inverse(m: Matrix) -> Matrix:
    return ((m[1][1], -m[0][1]), (-m[1][0], m[0][0]))


def bqf_act(Q: BQF, M: Matrix) -> BQF:
    """Q o M = M^t Q M, i.e. (x, y) -> Q(M (x, y))."""
    if _det(M) != 1:
        raise PreconditionError(f"det {M} = {_det(M)} != 1")
    (p, q), (r, s) = M
    return BQF(Q(p, r), 2 * Q.a * p * q + Q.b * (p * s + q * r) + 2 * Q.c * r * s, Q(q, s))


def reduce_form(Q: BQF) -> tuple[BQF, Matrix]:
    """Reduced form R and M in SL2(Z) with R = Q o M."""
    if Q.disc >= 0 or Q.a <= 0:
        raise PreconditionError(f"{Q} is not positive definite")
    M = IDENTITY
    while True:
        a, b, c = Q.a, Q.b, Q.c
        if not (-a < b <= a):
            # translate b into (-a, a]
            t = (a - b) // (2 * a)
            T = ((1, t), (0, 1))
            Q, M = bqf_act(Q, T), _matmul(M, T)
            continue
        if a > c or (a == c and b < 0):
            S = ((0, -1), (1, 0))
            Q, M = bqf_act(Q, S), _matmul(M, S)
            continue
        return Q, M


def is_reduced(Q: BQF) -> bool:
    return -Q.a < Q.b <= Q.a <= Q.c and not (Q.a == Q.c and Q.b < 0)


def _check_disc(D: int) -> None:
    if D >= 0:
        raise PreconditionError(f"discriminant {D} is not negative (indefinite forms are out of scope)")
    if D % 4 not in (0, 1):
        raise PreconditionError(f"{D} is not a discriminant")


def reduced_forms(D: int) -> list[BQF]:
    """Primitive reduced forms of discriminant D < 0."""
    _check_disc(D)
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            Q = BQF(a, b, c)
            if c >= a and is_reduced(Q) and Q.is_primitive():
                out.append(Q)
        a += 1
    return out


def automorphs(Q: BQF) -> list[Matrix]:
    """SL2(Z) stabilizer of a reduced form (entries of such automorphs are in {-1, 0, 1})."""
    if not is_reduced(Q):
        raise PreconditionError(f"{Q} is not reduced")
    return _automorphs(Q)


@lru_cache(maxsize=4096)
def _automorphs(Q: BQF) -> list[Matrix]:
    out = []
    for m in product((-1, 0, 1), repeat=4):
        M = ((m[0], m[1]), (m[2], m[3]))
        if _det(M) == 1 and bqf_act(Q, M) == Q:
            out.append(M)
    return out


# --------------------------------------------------------------- level p

def _p1_point(col: tuple[int, int], p: int) -> tuple[int, int]:
    """Normalized point of P^1(F_p): (x : 1) or (1 : 0)."""
    x, y = col[0] % p, col[1] % p
    if y:
        return (x * pow(y, -1, p) % p, 1)
    return (1, 0)


def _p1_section(pt: tuple[int, int]) -> Matrix:
    # SL2 matrix whose first column reduces to pt
    if pt == (1, 0):
        return IDENTITY
    return ((pt[0], -1), (1, 0))


def gamma0_label(Q: BQF, p: int) -> tuple[BQF, tuple[int, int]]:
    """Complete Gamma_0(p) invariant of a form with p | a."""
    if Q.a % p:
        raise PreconditionError(f"{Q} is not in L_{p}: p does not divide a")
    R, M = reduce_form(Q)
    # Q = R o M^{-1}; the coset M^{-1} Gamma_0(p) is its first column in P^1(F_p)
    inv = _inverse(M)
    candidates = []
    for A in automorphs(R):
        g = _matmul(A, inv)
        candidates.append(_p1_point((g[0][0], g[1][0]), p))
    return R, min(candidates)


def gamma0_canonical(Q: BQF, p: int) -> BQF:
    R, pt = gamma0_label(Q, p)
    return bqf_act(R, _p1_section(pt))


@dataclass(frozen=True)
class ClassSet:
    disc: int
    level: int
    forms: tuple

    def __len__(self):
        return len(self.forms)


def class_set(D: int, N: int = 1) -> ClassSet:
    """L_N(D)/Gamma_0(N) for N = 1 or a prime, as canonical representatives."""
    _check_disc(D)
    base = reduced_forms(D)
    if N == 1:
        return ClassSet(D, 1, tuple(base))
    p = N
    reps = []
    for R in base:
        pts = {_p1_point((x, 1), p) for x in range(p) if R(x, 1) % p == 0}
        if R.a % p == 0:
            pts.add((1, 0))
        seen = set()
        for pt in sorted(pts):
            if pt in seen:
                continue
            orbit = set()
            for A in automorphs(R):
                col = _matmul(A, _p1_section(pt))
                orbit.add(_p1_point((col[0][0], col[1][0]), p))
            seen |= orbit
            reps.append(bqf_act(R, _p1_section(min(orbit))))
    return ClassSet(D, p, tuple(reps))


def level_p_forms(D: int, p: int, a_max: int) -> list[BQF]:
    """All primitive forms of L_p(D) with a <= a_max and -a < b <= a."""
    _check_disc(D)
    out = []
    for a in range(p, a_max + 1, p):
        for b in range(-a + 1, a + 1):
            num = b * b - D
            if num % (4 * a) == 0:
                Q = BQF(a, b, num // (4 * a))
                if Q.is_primitive():
                    out.append(Q)
    return out


# -------------------------------------------------- level-p correspondences

def _solve_unit(u: int, m: int) -> int:
    return pow(u, -1, m)


def move_to_level(Q: BQF, p: int) -> tuple[BQF, Matrix]:
    """Part (i): an SL2(Z)-equivalent form with p | a (needs p | disc)."""
    if Q.disc % p:
        raise PreconditionError(f"part (i) needs p | D; D={Q.disc}, p={p}")
    M = IDENTITY
    if Q.a % p == 0:
        return Q, M
    if Q.b % p:
        # b' = 2 a beta + b = 0 mod p
        if p == 2:
            raise PreconditionError("p = 2 with odd b cannot have p | D")
        beta = (-Q.b * _solve_unit(2 * Q.a, p)) % p
        T = ((1, beta), (0, 1))
        Q, M = bqf_act(Q, T), _matmul(M, T)
    # now p | b, p | D, p does not divide a, so p | c
    S = ((p, p - 1), (1, 1))
    return bqf_act(Q, S), _matmul(M, S)


def deepen_level(Q: BQF, p: int) -> tuple[BQF, Matrix]:
    """Part (ii): a Gamma_0(p)-equivalent form with p^3 | a."""
    D = Q.disc
    if Q.a % p:
        raise PreconditionError(f"part (ii) needs Q in L_{p}(D)")
    if D % (p * p):
        raise PreconditionError(f"part (ii) needs p^2 | D; D={D}")
    if kronecker(D // (p * p), p) != 1:
        raise PreconditionError(f"part (ii) needs (D/p^2 over p) = 1; got {kronecker(D // (p * p), p)}")
    if Q.a % p**3 == 0:
        return Q, IDENTITY
    a2, b1 = Q.a // (p * p), Q.b // p
    # [a2, b1, c](alpha, 1) = 0 mod p has a root with alpha prime to p
    for alpha in range(1, p):
        if (a2 * alpha * alpha + b1 * alpha + Q.c) % p == 0:
            break
    else:
        raise ArithmeticError(f"no root found for {Q} at p={p}")
    # complete (alpha, p) to a Gamma_0(p) matrix
    g, x, y = _egcd(alpha, p)
    M = ((alpha, -y), (p, x))
    out = bqf_act(Q, M)
    assert out.a % p**3 == 0
    return out, M


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return a, 1, 0
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def forget_level_map(D: int, p: int) -> dict:
    """Part (iii): Gamma_0(p)-class -> SL2-class (reduced form)."""
    if D % p:
        raise PreconditionError(f"part (iii) needs p | D; D={D}")
    return {Q: reduce_form(Q)[0] for Q in class_set(D, p).forms}


def atkin_lehner_map(D: int, p: int) -> dict:
    """Part (iv): [a, b, c] -> [a/p, b, pc] on classes (needs p || D)."""
    if D % p:
        raise PreconditionError(f"part (iv) needs p | D; D={D}")
    if D % (p * p) == 0:
        raise PreconditionError(f"part (iv) needs p^2 not dividing D; D={D}")
    return {Q: reduce_form(BQF(Q.a // p, Q.b, p * Q.c))[0] for Q in class_set(D, p).forms}


def is_class_bijection(mapping: dict, target: ClassSet) -> bool:
    images = list(mapping.values())
    return len(set(images)) == len(images) and set(images) == set(target.forms)


def lemma36_map(part: str, Q: BQF | None, p: int, D: int | None = None):
    """Dispatch for the four correspondences; (iii) and (iv) return a
    (mapping, is_bijection) witness for discriminant D (default disc(Q))."""
    if part == "i":
        return move_to_level(Q, p)[0]
    if part == "ii":
        return deepen_level(Q, p)[0]
    D = Q.disc if D is None else D
    if part == "iii":
        m = forget_level_map(D, p)
        return m, is_class_bijection(m, class_set(D, 1))
    if part == "iv":
        m = atkin_lehner_map(D, p)
        return m, is_class_bijection(m, class_set(D, 1))
    raise ValueError(f"unknown part {part!r}")


# ------------------------------------------------------- genus characters

def genus_character(d: int, Q: BQF, search_limit: int = 60) -> int:
    """(d/r) for an integer r represented by Q and prime to d; 0 if none."""
    D = Q.disc
    if not is_fundamental(d):
        raise PreconditionError(f"{d} is not a fundamental discriminant")
    if D % d or (D // d) % 4 not in (0, 1):
        raise PreconditionError(f"{d} * {D // d if D % d == 0 else '?'} is not a valid splitting of {D}")
    if d == 1:
        return 1
    if math.gcd(Q.content, d) > 1:
        return 0
    for r in _represented_values(Q, search_limit):
        if math.gcd(r, d) == 1:
            return kronecker(d, r)
    return 0


def _represented_values(Q: BQF, limit: int):
    # shells |x| + |y| = s, small values first-ish
    for s in range(1, limit + 1):
        for x in range(-s, s + 1):
            for y in {s - abs(x), abs(x) - s}:
                r = Q(x, y)
                if r:
                    yield r


def represented_values(Q: BQF, bound: int) -> set[int]:
    """Every nonzero value Q(x, y) <= bound (Q positive definite)."""
    out = set()
    ymax = math.isqrt(4 * Q.a * bound // -Q.disc) + 1
    for y in range(-ymax, ymax + 1):
        # a x^2 + b y x + c y^2 <= bound
        disc = Q.b * Q.b * y * y - 4 * Q.a * (Q.c * y * y - bound)
        if disc < 0:
            continue
        r = math.isqrt(disc)
        lo = (-Q.b * y - r) // (2 * Q.a) - 1
        hi = (-Q.b * y + r) // (2 * Q.a) + 1
        for x in range(lo, hi + 1):
            v = Q(x, y)
            if 0 < v <= bound:
                out.add(v)
    return out


# -------------------------------------------------- linear Legendre sums

@dataclass(frozen=True)
class CharacterSum:
    value: int
    degenerate: bool


def legendre_linear_sum(p: int, u: int, c: int) -> CharacterSum:
    """sum over s mod p of ((u s + c) / p)."""
    total = sum(kronecker(u * s + c, p) for s in range(p))
    if u % p == 0:
        assert total == p * kronecker(c, p)
        return CharacterSum(total, True)
    assert total == 0, f"character sum {total} != 0 for p={p}, u={u}, c={c}"
    return CharacterSum(total, False)


def translation_character_sum(Q: BQF, d0: int, p: int) -> int:
    """sum_s chi_{d0}(Q o [[1, s/p], [0, 1]]) for Q with p^2 | a, p | b."""
    a, b, c = Q.a, Q.b, Q.c
    if a % (p * p) or b % p:
        raise PreconditionError(f"{Q} needs p^2 | a and p | b")
    total = 0
    for s in range(p):
        total += genus_character(d0, BQF(a, 2 * (a // p) * s + b, (a // (p * p)) * s * s + (b // p) * s + c))
    return total


def eq12_cases(D: int, d0: int, p: int) -> list[tuple[BQF, int]]:
    """For every Gamma_0(p)-class of L_p(D), the translation sum at a
    representative with p^3 | a."""
    out = []
    for Q in class_set(D, p).forms:
        R, _ = deepen_level(Q, p)
        out.append((R, translation_character_sum(R, d0, p)))
    return out


def iter_negative_discriminants(limit: int):
    for n in count(3):
        if n > limit:
            return
        if (-n) % 4 in (0, 1):
            yield -n
