"""Kummer-type congruences for p-stabilized genus-2 Eisenstein coefficients.

For each T and each pair of weights k = k' mod (p-1)p^(m-1), prints whether
the two coefficients agree mod p^m, or that they are not p-integral."""

import argparse
import random

from siegel_lab.acceptance import random_genus2
from siegel_lab.eis_siegel import kummer_check, zero_matrix


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--p", type=int, default=7)
    ap.add_argument("--forms", type=int, default=8)
    ap.add_argument("--base-weights", default="3,5,7")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    p = args.p
    forms = [zero_matrix(2)] + random_genus2(random.Random(args.seed), args.forms, bound=15)
    tally = {"ok": 0, "fail": 0, "excluded": 0}
    for T in forms:
        for k in (int(w) for w in args.base_weights.split(",")):
            for m in (1, 2):
                k2 = k + (p - 1) * p ** (m - 1)
                r = kummer_check(T, p, 1, (k, k2), m)
                status = "excluded" if not r.integral else ("ok" if r.ok else "fail")
                tally[status] += 1
                print(f"{str(T):>14}  k={k:>2} vs {k2:>3} mod {p}^{m}: {status}")
    print(tally)


if __name__ == "__main__":
    main()
