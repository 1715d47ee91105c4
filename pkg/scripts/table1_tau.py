"""Primes p below a bound at which Delta fails to be ordinary (p | tau(p)),
and the maximal runs of ordinary primes between them."""

import argparse

from siegel_lab.exact_math import primes_up_to
from siegel_lab.modforms1 import ramanujan_tau


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--limit", type=int, default=20000)
    ap.add_argument("--start", type=int, default=11)
    args = ap.parse_args()

    primes = [p for p in primes_up_to(args.limit) if p >= args.start]
    bad = [p for p in primes if ramanujan_tau(p) % p == 0]
    print(f"non-ordinary primes in [{args.start}, {args.limit}]: {bad}")
    runs, lo, prev = [], None, None
    for p in primes:
        if p in bad:
            if lo is not None:
                runs.append((lo, prev))
            lo = None
        elif lo is None:
            lo = p
        prev = p
    if lo is not None:
        runs.append((lo, prev))
    for a, b in runs:
        print(f"  ordinary for {a} <= p <= {b}")


if __name__ == "__main__":
    main()
