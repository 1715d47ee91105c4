"""Classes of positive definite even quaternary lattices of bounded
determinant.

Candidates are Gram matrices A = 2T in Minkowski-reduced shape: for rank
at most 4 the reduction conditions only involve vectors with entries in
{-1, 0, 1}.  Sign changes of the basis make the first row non-negative.
Reduced forms of one class share their diagonal (the successive minima),
so the remaining duplicates are removed by an isometry search inside each
(det, diagonal) bucket."""

from __future__ import annotations

import math
from collections import defaultdict
from itertools import product

from .siegel_series import HalfIntegralMatrix, integer_det


def _det3(M) -> int:
    return (
        M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
        - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
        + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])
    )


def _reduced_extension_ok(A, col: tuple, m: int) -> bool:
    """Q(x) >= a_m for x in {-1,0,1}^(m+1) with x_m = 1, given the new column.

    Q(x) = Q_m(x') + 2 x'.col + a_m, so the test does not involve a_m."""
    for xs in product((-1, 0, 1), repeat=m):
        if not any(xs):
            continue
        q = 0
        for i in range(m):
            if xs[i]:
                q += A[i][i] * xs[i] * xs[i]
                for j in range(i + 1, m):
                    q += 2 * A[i][j] * xs[i] * xs[j]
        q += 2 * sum(x * c for x, c in zip(xs, col))
        if q < 0:
            return False
    return True


def reduced_candidates(max_det: int, min_det: int = 1):
    """Yield Gram matrices (tuples of rows) of reduced even quaternary forms."""
    bound = 4 * max_det  # a11 a22 a33 a44 <= 4 det for reduced rank-4 forms
    a0 = 2
    while a0**4 <= bound:
        a1 = a0
        while a0 * a1**3 <= bound:
            for b01 in range(0, a0 // 2 + 1):
                A2 = [[a0, b01], [b01, a1]]
                d2 = a0 * a1 - b01 * b01
                if d2 <= 0:
                    continue
                a2 = a1
                while a0 * a1 * a2 * a2 <= bound:
                    for b02 in range(0, a0 // 2 + 1):
                        for b12 in range(-(a1 // 2), a1 // 2 + 1):
                            if not _reduced_extension_ok(A2, (b02, b12), 2):
                                continue
                            A3 = [[a0, b01, b02], [b01, a1, b12], [b02, b12, a2]]
                            d3 = _det3(A3)
                            if d3 <= 0:
                                continue
                            yield from _last_row(A3, d3, a2, max_det, min_det)
                    a2 += 2
            a1 += 2
        a0 += 2


def _last_row(A3, d3: int, a2: int, max_det: int, min_det: int):
    a0, a1 = A3[0][0], A3[1][1]
    for b03 in range(0, a0 // 2 + 1):
        for b13 in range(-(a1 // 2), a1 // 2 + 1):
            for b23 in range(-(a2 // 2), a2 // 2 + 1):
                col = (b03, b13, b23)
                if not _reduced_extension_ok(A3, col, 3):
                    continue
                # det is linear in a3: det = a3 * d3 + rest
                rest = integer_det([row + [c] for row, c in zip(A3, col)] + [list(col) + [0]])
                hi = (max_det - rest) // d3
                lo = max(a2, -(-(min_det - rest) // d3))
                a3 = lo + (lo % 2)
                while a3 <= hi:
                    yield (
                        (A3[0][0], A3[0][1], A3[0][2], b03),
                        (A3[1][0], A3[1][1], A3[1][2], b13),
                        (A3[2][0], A3[2][1], A3[2][2], b23),
                        (b03, b13, b23, a3),
                    )
                    a3 += 2


# ------------------------------------------------------------ isometry

def _cholesky(A) -> list[list[float]]:
    """q[i][i] and q[i][j] of the Fincke-Pohst decomposition Q(x) = sum q_ii (x_i + sum q_ij x_j)^2."""
    n = len(A)
    q = [[float(A[i][j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def short_vectors(A, bound: int) -> list[tuple[tuple, int]]:
    """All nonzero x with x^t A x <= bound (both signs), with their norms."""
    n = len(A)
    q = _cholesky(A)
    out = []
    x = [0] * n
    eps = 1e-9

    def norm(v):
        return sum(A[i][j] * v[i] * v[j] for i in range(n) for j in range(n))

    def rec(i: int, remaining: float):
        centre = -sum(q[i][j] * x[j] for j in range(i + 1, n))
        radius = math.sqrt(max(remaining, 0.0) / q[i][i]) + eps
        for xi in range(math.ceil(centre - radius), math.floor(centre + radius) + 1):
            x[i] = xi
            used = q[i][i] * (xi - centre) ** 2
            if used > remaining + eps:
                continue
            if i == 0:
                if any(x):
                    v = tuple(x)
                    nv = norm(v)
                    if nv <= bound:
                        out.append((v, nv))
            else:
                rec(i - 1, remaining - used)
        x[i] = 0

    rec(n - 1, float(bound))
    return out


def isometry(A, B):
    """U with U^t A U = B, or None."""
    n = len(A)
    if integer_det(A) != integer_det(B):
        return None
    target = max(B[i][i] for i in range(n))
    vecs = short_vectors(A, target)
    by_norm = defaultdict(list)
    for v, nv in vecs:
        by_norm[nv].append(v)
    Av = {v: tuple(sum(A[i][j] * v[j] for j in range(n)) for i in range(n)) for v, _ in vecs}
    chosen: list[tuple] = []

    def rec(i: int):
        if i == n:
            return True
        for v in by_norm.get(B[i][i], ()):
            w = Av[v]
            if all(sum(a * b for a, b in zip(w, chosen[j])) == B[i][j] for j in range(i)):
                chosen.append(v)
                if rec(i + 1):
                    return True
                chosen.pop()
        return False

    if not rec(0):
        return None
    return tuple(tuple(chosen[j][i] for j in range(n)) for i in range(n))


def classify(candidates) -> list[tuple]:
    """One representative per isometry class, in first-seen order."""
    buckets: dict = defaultdict(list)
    reps = []
    for A in candidates:
        key = (integer_det(A), tuple(A[i][i] for i in range(len(A))))
        if any(isometry(B, A) is not None for B in buckets[key]):
            continue
        buckets[key].append(A)
        reps.append(A)
    return reps


def quaternary_classes(max_det: int, min_det: int = 1) -> list[HalfIntegralMatrix]:
    reps = classify(reduced_candidates(max_det, min_det))
    mats = [HalfIntegralMatrix(A) for A in reps]
    return sorted(mats, key=lambda T: (T.det_doubled(), T.bracket()))


__all__ = ["classify", "isometry", "quaternary_classes", "reduced_candidates", "short_vectors"]
