"""Mod-11 congruence between the genus-4 lifts of f_12 and f_32 over the
shipped corpus, with a per-discriminant summary.

    python3 scripts/congruence_sweep.py --bound 2=4 --out sweep.tsv"""

import argparse
import time
from collections import Counter
from pathlib import Path

from siegel_lab.acceptance import lift_contexts
from siegel_lab.lab_cli import builtin_corpus, congruence_sweep, ingest_nipp
from siegel_lab.siegel_series import DEFAULT_DEPTH


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--corpus", type=Path, default=None)
    ap.add_argument("--bound", action="append", default=[], help="depth override l=v")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", type=Path, default=None, help="write the TSV report here")
    args = ap.parse_args()

    bounds = dict(DEFAULT_DEPTH)
    for item in args.bound:
        l, v = item.split("=")
        bounds[int(l)] = int(v)
    corpus = ingest_nipp(args.corpus) if args.corpus else builtin_corpus()
    t0 = time.time()
    report = congruence_sweep(corpus, 11, lift_contexts(), bounds, workers=args.workers)
    elapsed = time.time() - t0

    print(corpus.summary())
    print(f"depth bounds {bounds}; {elapsed:.1f}s")
    print(f"counts {report.counts()}")
    by_fund = Counter((r.fundamental, r.status) for r in report.rows)
    for d in sorted({d for d, _ in by_fund}):
        ok = by_fund[(d, "ok")]
        if ok:
            print(f"  d={d:>4}: {ok} processed, {by_fund[(d, 'skipped-siegel-bound')]} over bound")
    for r in report.rows:
        if r.factorization:
            print(f"  {r.form}: Norm = {r.factorization}")
    if args.out:
        args.out.write_text(report.to_tsv(), encoding="utf-8")
        print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
