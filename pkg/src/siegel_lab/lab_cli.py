"""Corpus ingestion, congruence sweeps and the ``siegel-lab`` command line."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

from .exact_math import factor_integer, primes_up_to
from .ikeda import LiftContext, lift_coefficient
from .kohnen_plus import PlusFormData, PlusTableError, UnsupportedDiscriminant, builtin_table, ingest_plus_table
from .modforms1 import eigenform_split
from .siegel_series import (
    DEFAULT_DEPTH,
    HalfIntegralMatrix,
    SiegelInvariants,
    SiegelSeriesBoundError,
    feasible,
    invariants,
    local_F,
)

STATUSES = ("ok", "skipped-h-support", "skipped-siegel-bound")
BUILTIN_CORPUS = "quaternary_457"


class CorpusError(ValueError):
    def __init__(self, source: str, lineno: int, message: str):
        super().__init__(f"{source}:{lineno}: {message}")
        self.lineno = lineno


# ------------------------------------------------------------ corpus

@dataclass
class FormCorpus:
    forms: list = field(default_factory=list)  # HalfIntegralMatrix
    invariants: list = field(default_factory=list)  # SiegelInvariants, parallel to forms
    source: str = ""
    duplicates: int = 0

    def __len__(self):
        return len(self.forms)

    def disc_range(self) -> tuple[int, int] | None:
        if not self.invariants:
            return None
        discs = [inv.disc for inv in self.invariants]
        return min(discs), max(discs)

    def summary(self) -> str:
        rng = self.disc_range()
        span = f"{rng[0]}..{rng[1]}" if rng else "empty"
        return f"{len(self)} forms, discriminants {span}, {self.duplicates} duplicates dropped ({self.source})"


def parse_corpus(text: str, source: str = "<string>") -> FormCorpus:
    corpus = FormCorpus(source=source)
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 10:
            raise CorpusError(source, lineno, f"expected 10 integers, got {len(parts)}")
        try:
            entries = [int(x) for x in parts]
        except ValueError:
            if any("/" in x or "." in x for x in parts[4:]):
                raise CorpusError(source, lineno, "off-diagonal slots hold the doubled entries 2t_ij (integers)") from None
            raise CorpusError(source, lineno, f"non-integer entry in {line!r}") from None
        T = HalfIntegralMatrix.from_bracket(entries)
        if not T.is_positive_definite():
            raise CorpusError(source, lineno, f"{T} is not positive definite")
        if T in seen:
            corpus.duplicates += 1
            continue
        seen.add(T)
        corpus.forms.append(T)
        corpus.invariants.append(invariants(T))
    return corpus


def ingest_nipp(path) -> FormCorpus:
    """Read a corpus file: ten integers per line, t11 t22 t33 t44 2t12 2t13 2t23 2t14 2t24 2t34."""
    return parse_corpus(Path(path).read_text(encoding="utf-8"), source=str(path))


def builtin_corpus(name: str = BUILTIN_CORPUS) -> FormCorpus:
    text = resources.files("siegel_lab").joinpath("data", f"{name}.txt").read_text(encoding="utf-8")
    return parse_corpus(text, source=name)


# ------------------------------------------------------------ sweep

@dataclass
class SweepRow:
    form: str
    disc: int
    fundamental: int
    conductor: int
    status: str
    values: list = field(default_factory=list)  # str, one per weight
    difference: str = ""
    norm: str = ""
    divisible: bool | None = None
    factorization: str = ""


@dataclass
class SweepReport:
    p: int
    weights: tuple
    rows: list = field(default_factory=list)
    precondition: dict = field(default_factory=dict)  # l -> p | Norm(a_l difference)

    def counts(self) -> dict:
        out = {s: 0 for s in STATUSES}
        for r in self.rows:
            out[r.status] += 1
        out["total"] = len(self.rows)
        out["divisible"] = sum(1 for r in self.rows if r.status == "ok" and r.divisible)
        out["exceptions"] = sum(1 for r in self.rows if r.status == "ok" and not r.divisible)
        return out

    # -- emission

    COLUMNS = ("form", "disc", "fundamental", "conductor", "status", "values", "difference", "norm",
               "divisible", "factorization")

    def to_json(self) -> str:
        return json.dumps(
            {
                "p": self.p,
                "weights": list(self.weights),
                "precondition": {str(k): v for k, v in self.precondition.items()},
                "counts": self.counts(),
                "rows": [asdict(r) for r in self.rows],
            },
            indent=1,
        )

    @classmethod
    def from_json(cls, text: str) -> "SweepReport":
        data = json.loads(text)
        rows = [SweepRow(**r) for r in data["rows"]]
        pre = {int(k): v for k, v in data["precondition"].items()}
        return cls(data["p"], tuple(data["weights"]), rows, pre)

    def to_tsv(self) -> str:
        lines = [f"# p={self.p} weights={','.join(map(str, self.weights))}"]
        lines.append("# precondition " + " ".join(f"{l}:{int(v)}" for l, v in sorted(self.precondition.items())))
        lines.append("\t".join(self.COLUMNS))
        for r in self.rows:
            div = "" if r.divisible is None else str(int(r.divisible))
            cells = [r.form, str(r.disc), str(r.fundamental), str(r.conductor), r.status, ";".join(r.values),
                     r.difference, r.norm, div, r.factorization]
            lines.append("\t".join(cells))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_tsv(cls, text: str) -> "SweepReport":
        lines = text.splitlines()
        head = dict(kv.split("=") for kv in lines[0][2:].split())
        pre = {}
        for item in lines[1].split()[2:]:
            l, v = item.split(":")
            pre[int(l)] = bool(int(v))
        rows = []
        for line in lines[3:]:
            c = line.split("\t")
            rows.append(SweepRow(c[0], int(c[1]), int(c[2]), int(c[3]), c[4], c[5].split(";") if c[5] else [],
                                 c[6], c[7], None if c[8] == "" else bool(int(c[8])), c[9]))
        return cls(int(head["p"]), tuple(int(w) for w in head["weights"].split(",")), rows, pre)


def _common_field(a, b):
    if a.parent == b.parent:
        return a, b
    if a.parent.degree == 1:
        return b.parent(a.to_rational()), b
    if b.parent.degree == 1:
        return a, a.parent(b.to_rational())
    raise ValueError("coefficients live in unrelated number fields")


def congruence_precondition(f1, f2, p: int, bound: int = 11) -> dict:
    out = {}
    for l in primes_up_to(bound):
        if l == p:
            continue
        a, b = _common_field(f1.coeff(l), f2.coeff(l))
        out[l] = (a - b).norm().numerator % p == 0
    return out


def _sweep_row(ctxs, T: HalfIntegralMatrix, inv: SiegelInvariants, p: int, bounds, showcase) -> SweepRow:
    row = SweepRow(str(T), inv.disc, inv.fundamental, inv.conductor, "ok")
    try:
        for ctx in ctxs:
            ctx.h.fundamental(inv.fundamental)
    except UnsupportedDiscriminant:
        row.status = "skipped-h-support"
        return row
    if feasible(inv, bounds):
        row.status = "skipped-siegel-bound"
        return row
    try:
        vals = [lift_coefficient(ctx, T) for ctx in ctxs]
    except SiegelSeriesBoundError:
        row.status = "skipped-siegel-bound"
        return row
    row.values = [str(v) for v in vals]
    a, b = _common_field(vals[0], vals[1])
    diff = a - b
    norm = diff.norm()
    row.difference = str(diff)
    row.norm = str(norm)
    row.divisible = norm.denominator % p != 0 and norm.numerator % p == 0
    if inv.disc in showcase and norm != 0:
        row.factorization = str(factor_integer(abs(norm.numerator)))
    return row


def _row_job(args):
    return _sweep_row(*args)


def congruence_sweep(corpus: FormCorpus, p: int, ctxs: tuple[LiftContext, LiftContext], bounds: dict | None = None,
                     showcase: tuple = (121,), workers: int = 1) -> SweepReport:
    bounds = bounds or DEFAULT_DEPTH
    report = SweepReport(p, tuple(c.f.weight for c in ctxs))
    report.precondition = congruence_precondition(ctxs[0].f, ctxs[1].f, p)
    jobs = [(ctxs, T, inv, p, bounds, showcase) for T, inv in zip(corpus.forms, corpus.invariants)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            report.rows = list(pool.map(_row_job, jobs, chunksize=16))
    else:
        report.rows = [_row_job(j) for j in jobs]
    return report


# ------------------------------------------------------------ CLI

class UsageError(Exception):
    pass


def parse_form(text: str) -> HalfIntegralMatrix:
    try:
        entries = [int(x) for x in text.replace(",", " ").split()]
        return HalfIntegralMatrix.from_bracket(entries)
    except ValueError as exc:
        raise UsageError(f"bad --form {text!r}: {exc}") from None


def _pick_eigenform(weight: int, index: int = 0, prec: int = 30):
    forms = eigenform_split(weight, prec)
    if not forms:
        raise UsageError(f"no cusp forms of weight {weight}")
    if index >= len(forms):
        raise UsageError(f"weight {weight} has {len(forms)} Galois orbits; index {index} is out of range")
    return forms[index]


def _load_h(spec: str, f) -> PlusFormData:
    path = Path(spec)
    if path.exists():
        return ingest_plus_table(path, f)
    try:
        return builtin_table(spec, f)
    except FileNotFoundError:
        raise UsageError(f"no h-table {spec!r} (neither a file nor a shipped table)") from None


def _emit(args, record: dict):
    if args.format == "json":
        print(json.dumps(record, indent=1, default=str))
    else:
        for k, v in record.items():
            print(f"{k}\t{v}")


def _cmd_eigenform(args) -> int:
    forms = eigenform_split(args.weight, max(args.prec, 12))
    out = []
    for f in forms:
        out.append({"label": f.label, "field": f.field.poly_str(),
                    "coefficients": {m: str(f.coeff(m)) for m in range(1, args.prec + 1)}})
    if args.format == "json":
        print(json.dumps(out, indent=1))
    else:
        for rec in out:
            print(f"# {rec['label']}\tfield {rec['field']}")
            for m, c in rec["coefficients"].items():
                print(f"{m}\t{c}")
    return 0


def _lift_ctx(args) -> LiftContext:
    f = _pick_eigenform(args.f_weight, args.index)
    h = _load_h(args.h_table, f)
    return LiftContext(args.n, args.f_weight // 2, f, h)


def _cmd_lift(args) -> int:
    ctx = _lift_ctx(args)
    T = parse_form(args.form)
    inv = invariants(T)
    _emit(args, {"form": str(T), "disc": inv.disc, "fundamental": inv.fundamental, "conductor": inv.conductor,
                 "coefficient": str(lift_coefficient(ctx, T))})
    return 0


def _cmd_stabilize(args) -> int:
    from .stabilize import stabilize_closed, stabilize_operator

    ctx = _lift_ctx(args)
    T = parse_form(args.form)
    closed = stabilize_closed(ctx, T, args.p)
    rec = {"form": str(T), "p": args.p, "closed_form": repr(closed)}
    if ctx.n == 1:
        op = stabilize_operator(ctx, [T], args.p)[T]
        rec["operator"] = repr(op)
        rec["agree"] = op == closed
    _emit(args, rec)
    return 0 if rec.get("agree", True) else 1


def _cmd_eisenstein(args) -> int:
    from .eis_siegel import EisensteinContext, eisenstein_coeff, stabilized_eisenstein_coeff

    if args.genus % 2:
        raise UsageError("genus must be even")
    n = args.genus // 2
    ctx = EisensteinContext(n, args.weight - n, args.p)
    T = parse_form(args.form)
    value = stabilized_eisenstein_coeff(ctx, T) if args.p else eisenstein_coeff(ctx, T)
    _emit(args, {"form": str(T), "weight": args.weight, "p": args.p or "", "coefficient": str(value)})
    return 0


def _cmd_siegel_series(args) -> int:
    T = parse_form(args.form)
    F = local_F(T, args.l)
    _emit(args, {"form": str(T), "l": args.l, "F": str(F), "coefficients": list(F.coeffs),
                 "functional_equation": F.pairing_holds()})
    return 0


def _cmd_sweep(args) -> int:
    weights = [int(w) for w in args.weights.split(",")]
    tables = args.h_tables.split(",")
    if len(weights) != 2 or len(tables) != 2:
        raise UsageError("--weights and --h-tables take two comma-separated entries")
    ctxs = []
    for w, spec in zip(weights, tables):
        f = _pick_eigenform(w)
        ctxs.append(LiftContext(args.n, w // 2, f, _load_h(spec, f)))
    corpus = ingest_nipp(args.corpus) if args.corpus else builtin_corpus()
    bounds = dict(DEFAULT_DEPTH)
    for item in args.bounds or []:
        l, v = item.split("=")
        bounds[int(l)] = int(v)
    report = congruence_sweep(corpus, args.p, tuple(ctxs), bounds, workers=args.workers)
    print(report.to_json() if args.format == "json" else report.to_tsv(), end="")
    counts = report.counts()
    print(f"# {corpus.summary()}; counts {counts}", file=sys.stderr)
    return 0 if counts["exceptions"] == 0 else 1


def _cmd_verify(args) -> int:
    from .acceptance import SUITES, verify_run

    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    results = verify_run(args.suite)
    if args.format == "json":
        print(json.dumps([asdict(r) for r in results], indent=1))
    else:
        for r in results:
            print(f"{r.name}\t{'PASS' if r.ok else 'FAIL'}\t{r.seconds:.2f}s\t{r.detail}")
    return 0 if all(r.ok for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="siegel-lab", description="Lift and Eisenstein coefficient laboratory")
    ap.add_argument("--format", choices=("tsv", "json"), default="tsv")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("eigenform", help="level-one Hecke eigenforms of a weight")
    s.add_argument("--weight", type=int, required=True)
    s.add_argument("--prec", type=int, default=12)
    s.set_defaults(func=_cmd_eigenform)

    def lift_args(s):
        s.add_argument("--n", type=int, default=2)
        s.add_argument("--f-weight", type=int, required=True)
        s.add_argument("--index", type=int, default=0, help="Galois orbit index")
        s.add_argument("--h-table", required=True, help="path, or a shipped table name such as h13_2")
        s.add_argument("--form", required=True, help="bracket entries, off-diagonals doubled")

    s = sub.add_parser("lift", help="one Fourier coefficient of a lift")
    lift_args(s)
    s.set_defaults(func=_cmd_lift)

    s = sub.add_parser("stabilize", help="semi-ordinary p-stabilized lift coefficient")
    s.add_argument("--p", type=int, required=True)
    lift_args(s)
    s.set_defaults(func=_cmd_stabilize)

    s = sub.add_parser("eisenstein", help="Siegel Eisenstein coefficient")
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("--weight", type=int, required=True, help="weight k + n of the Siegel form")
    s.add_argument("--p", type=int, default=None)
    s.add_argument("--form", required=True)
    s.set_defaults(func=_cmd_eisenstein)

    s = sub.add_parser("siegel-series", help="local Siegel series F_l(T; X)")
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--form", required=True)
    s.set_defaults(func=_cmd_siegel_series)

    s = sub.add_parser("sweep", help="mod-p congruence sweep over a corpus")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--weights", required=True, help="e.g. 12,32")
    s.add_argument("--h-tables", required=True, help="e.g. h13_2,h33_2")
    s.add_argument("--corpus", default=None, help="corpus file (default: shipped det <= 457 corpus)")
    s.add_argument("--bound", dest="bounds", action="append", help="depth override l=v, repeatable")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=_cmd_sweep)

    s = sub.add_parser("verify", help="run an acceptance suite")
    s.add_argument("--suite", required=True, help="paper | properties | all")
    s.set_defaults(func=_cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, CorpusError, PlusTableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UnsupportedDiscriminant, SiegelSeriesBoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


__all__ = [
    "CorpusError",
    "FormCorpus",
    "SweepReport",
    "SweepRow",
    "builtin_corpus",
    "congruence_precondition",
    "congruence_sweep",
    "ingest_nipp",
    "main",
    "parse_corpus",
]
