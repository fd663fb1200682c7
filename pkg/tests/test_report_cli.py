import io
import json
from functools import lru_cache

import pytest

from kummerlab.cli import main
from kummerlab.report import (
    CRITERIA,
    CheckRecord,
    Config,
    UnknownSuite,
    UnsupportedPrime,
    criterion_records,
    emit_report,
    render_json,
    render_text,
    run_suite,
)


def rec(id, status="pass", observed="1"):
    return CheckRecord(id, f"check {id}", status, "1", observed, 0)


@lru_cache(maxsize=None)
def all_records():
    return tuple(run_suite("all"))


def test_groups_suite_has_sp4_order():
    r = next(x for x in run_suite("groups") if x.id == "sp4f2.order")
    assert (r.expected, r.observed, r.status) == ("720", "720", "pass")


def test_desmic_suite_singular_count():
    r = next(x for x in run_suite("desmic", Config(prime=11, cd=(1, 2))) if x.id == "desmic.singular.count")
    assert (r.expected, r.observed, r.status) == ("12", "12", "pass")


def test_unknown_suite():
    with pytest.raises(UnknownSuite, match="unknown suite"):
        run_suite("nope")


@pytest.mark.parametrize("p", [2, 5, 9, 103])
def test_unsupported_prime(p):
    with pytest.raises(UnsupportedPrime):
        run_suite("desmic", Config(prime=p))


def test_bad_status_rejected():
    with pytest.raises(ValueError):
        CheckRecord("x", "", "maybe", "", "", 0)


def test_exit_all_pass():
    out = io.StringIO()
    assert emit_report([rec("a"), rec("b")], stream=out) == 0
    assert "fail" not in out.getvalue().splitlines()[-1] or "0 fail" in out.getvalue()


def test_exit_one_fail_printed_last():
    out = io.StringIO()
    code = emit_report([rec("a"), rec("bad", "fail", "2"), rec("c")], stream=out)
    assert code == 1
    last = out.getvalue().rstrip("\n").splitlines()[-1]
    assert last == "failed: bad"


def test_anomaly_only():
    out = io.StringIO()
    code = emit_report([rec("a"), rec("odd", "anomaly", "extra point")], stream=out)
    text = out.getvalue()
    assert code == 0
    assert "anomalies (reported, not failing):" in text and "odd: extra point" in text


def test_json_schema_and_order():
    records = [rec("a"), rec("b", "fail", "2")]
    doc = json.loads(render_json(records, "demo", Config()))
    assert list(doc) == ["suite", "config", "checks"]
    assert list(doc["checks"][0]) == ["id", "description", "status", "expected", "observed", "millis"]
    assert [c["id"] for c in doc["checks"]] == ["a", "b"]


def test_unwritable_path(tmp_path):
    with pytest.raises(OSError, match="cannot write"):
        emit_report([rec("a")], path=tmp_path / "missing" / "r.txt")


def test_write_to_path(tmp_path):
    p = tmp_path / "r.json"
    assert emit_report([rec("a")], "json", p, suite="s") == 0
    assert json.loads(p.read_text())["suite"] == "s"


def test_one_record_per_criterion():
    ids = [r.id for r in all_records()]
    for k in CRITERIA:
        assert ids.count(f"criterion.{k}") == 1
    assert len(ids) == len(set(ids))


def test_criteria_rollup():
    recs = [rec("heisenberg.order"), rec("jinv.s3", "fail", "0")]
    out = {r.id: r.status for r in criterion_records(recs)}
    assert out["criterion.1"] == "pass" and out["criterion.4"] == "fail"
    assert out["criterion.7"] == "fail"  # no checks at all is not a pass


def test_reports_deterministic():
    cfg = Config()
    a = render_text(list(all_records()), "all", cfg)
    b = render_text(run_suite("all", cfg, parallel=True), "all", cfg)
    assert a == b
    assert render_json(run_suite("groups"), "groups", cfg) == render_json(run_suite("groups"), "groups", cfg)


def test_thread_count_independent(monkeypatch):
    monkeypatch.setenv("KUMMERLAB_THREADS", "1")
    one = render_json(run_suite("nieto", Config(threads=1)), "nieto", Config())
    four = render_json(run_suite("nieto", Config(threads=4)), "nieto", Config())
    assert one == four


def test_cli_verify(capsys):
    assert main(["verify", "jinv"]) == 0
    assert "PASS     jinv.harmonic" in capsys.readouterr().out


def test_cli_check_and_json(capsys, tmp_path):
    p = tmp_path / "out.json"
    assert main(["verify", "groups", "--check", "sp4f2.order", "--json", str(p)]) == 0
    doc = json.loads(p.read_text())
    assert [c["id"] for c in doc["checks"]] == ["sp4f2.order"]


def test_cli_errors(capsys):
    assert main(["verify", "nope"]) == 2
    assert "unknown suite" in capsys.readouterr().err
    assert main(["verify", "groups", "--primes", "7,9"]) == 2
    assert main(["verify", "groups", "--check", "no.such.id"]) == 2


def test_cli_bad_env(monkeypatch, capsys):
    monkeypatch.setenv("KUMMERLAB_THREADS", "many")
    assert main(["verify", "jinv"]) == 2


def test_cli_fit_dictionary(capsys, tmp_path):
    p = tmp_path / "map.txt"
    assert main(["fit-dictionary", "--out", str(p)]) == 0
    out = capsys.readouterr().out
    assert "B -1/2 -1/2 1/2 1/2 0 0" in out
    assert p.read_text().startswith("# rows A..E")


def test_cli_report_all_fails_on_known_items(capsys):
    assert main(["report", "--all"]) == 1
    last = capsys.readouterr().out.rstrip().splitlines()[-1]
    assert last.startswith("failed: ") and "criterion.7" in last
