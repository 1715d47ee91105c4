import json
import random

import pytest

from siegel_lab.acceptance import SHOWCASE
from siegel_lab.lab_cli import (
    CorpusError,
    FormCorpus,
    SweepReport,
    builtin_corpus,
    congruence_sweep,
    ingest_nipp,
    main,
    parse_corpus,
)
from siegel_lab.siegel_series import invariants


def _line(bracket):
    return " ".join(map(str, bracket))


@pytest.fixture(scope="module")
def corpus():
    return builtin_corpus()


@pytest.fixture(scope="module")
def small_corpus(corpus):
    picks = corpus.forms[:40] + [f for f in corpus.forms if f.det_doubled() == 121]
    return parse_corpus("\n".join(_line(T.bracket()) for T in picks), source="small")


@pytest.fixture(scope="module")
def small_report(small_corpus, lift_ctxs):
    return congruence_sweep(small_corpus, 11, lift_ctxs)


def test_parse_showcase_line():
    c = parse_corpus("# comment\n1 1 3 3 0 1 0 0 1 0\n\n")
    assert len(c) == 1
    assert c.forms[0].det_doubled() == 121


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("1 1 3 3 0 1 0 0 1\n", "expected 10"),
        ("1 1 3 3 0 1/2 0 0 1 0\n", "doubled"),
        ("1 1 3 3 0 x 0 0 1 0\n", "non-integer"),
        ("1 1 1 1 4 0 0 0 0 0\n", "positive definite"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(CorpusError, match=fragment) as info:
        parse_corpus(text, source="t")
    assert info.value.lineno == 1


def test_duplicates_dropped():
    line = "1 1 3 3 0 1 0 0 1 0"
    c = parse_corpus(f"{line}\n{line}\n")
    assert len(c) == 1 and c.duplicates == 1


def test_shipped_corpus(corpus):
    assert len(corpus) == 4475
    assert corpus.disc_range() == (4, 457)
    assert all(T.content() == 1 for T in corpus.forms)
    at_121 = {T.bracket() for T in corpus.forms if T.det_doubled() == 121}
    assert len(at_121) == 3


def test_ingest_file(tmp_path):
    path = tmp_path / "c.txt"
    path.write_text("\n".join(_line(b) for b in SHOWCASE.values()) + "\n")
    c = ingest_nipp(path)
    assert len(c) == 3
    assert {inv.disc for inv in c.invariants} == {121}


def test_empty_corpus(lift_ctxs):
    report = congruence_sweep(FormCorpus(), 11, lift_ctxs)
    counts = report.counts()
    assert report.rows == []
    assert counts["total"] == counts["ok"] == counts["exceptions"] == 0


def test_showcase_rows(small_report):
    rows = [r for r in small_report.rows if r.disc == 121]
    assert len(rows) == 3
    expected = "2^8*3^4*5^5*11*171449*680531*35058959130397"
    for r in rows:
        assert r.status == "ok" and r.divisible
        assert r.factorization == expected


def test_counts_account_for_every_form(small_report, small_corpus):
    c = small_report.counts()
    assert c["ok"] + c["skipped-h-support"] + c["skipped-siegel-bound"] == len(small_corpus)
    assert all(r.divisible for r in small_report.rows if r.status == "ok")
    assert all(small_report.precondition.values())


def test_report_round_trips(small_report):
    assert SweepReport.from_json(small_report.to_json()) == small_report
    assert SweepReport.from_tsv(small_report.to_tsv()) == small_report


def test_shuffled_corpus_is_deterministic(small_corpus, small_report, lift_ctxs):
    lines = [_line(T.bracket()) for T in small_corpus.forms]
    random.Random(5).shuffle(lines)
    again = congruence_sweep(parse_corpus("\n".join(lines)), 11, lift_ctxs)
    key = lambda r: r.form  # noqa: E731
    assert sorted(again.rows, key=key) == sorted(small_report.rows, key=key)


def test_cli_siegel_series(capsys):
    assert main(["siegel-series", "--l", "11", "--form", _line(SHOWCASE["T2"])]) == 0
    out = capsys.readouterr().out
    assert "1 - 1452*X + 161051*X^2" in out


def test_cli_lift_json(capsys):
    code = main(["--format", "json", "lift", "--f-weight", "12", "--h-table", "h13_2", "--form", _line(SHOWCASE["T1"])])
    assert code == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["coefficient"] == "-1398000" and rec["disc"] == 121


def test_cli_eisenstein(capsys):
    assert main(["eisenstein", "--genus", "2", "--weight", "4", "--form", "1 1 1"]) == 0
    assert "coefficient\t-2/9" in capsys.readouterr().out


def test_cli_stabilize_genus2(capsys):
    code = main(["stabilize", "--p", "17", "--n", "1", "--f-weight", "18", "--h-table", "h13_2", "--form", "1 1 1"])
    assert code == 2  # weight mismatch between table and eigenform is a usage error
    capsys.readouterr()


def test_cli_eigenform(capsys):
    assert main(["eigenform", "--weight", "32", "--prec", "3"]) == 0
    out = capsys.readouterr().out
    assert "x^2-39960*x-2235350016" in out
    assert "432*x" in out


def test_cli_errors(capsys):
    assert main(["verify", "--suite", "nonsense"]) == 2
    assert main(["lift", "--f-weight", "12", "--h-table", "no_such_table", "--form", "1 1 1"]) == 2
    assert main(["lift", "--f-weight", "12", "--h-table", "h13_2", "--form", "1 1 q"]) == 2
    assert main(["lift", "--f-weight", "12", "--h-table", "h13_2", "--form", "1 1 1 2 0 1 -1 0 -1 0"]) == 1  # c_13 unknown
    capsys.readouterr()
    with pytest.raises(SystemExit) as info:
        main(["sweep"])
    assert info.value.code == 2


def test_cli_sweep_on_file(tmp_path, capsys):
    path = tmp_path / "c.txt"
    path.write_text("\n".join(_line(b) for b in SHOWCASE.values()) + "\n")
    code = main(["sweep", "--p", "11", "--weights", "12,32", "--h-tables", "h13_2,h33_2", "--corpus", str(path)])
    assert code == 0
    report = SweepReport.from_tsv(capsys.readouterr().out)
    assert report.counts()["ok"] == 3
