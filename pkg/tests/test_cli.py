import json

import pytest

from demi import cli
from demi.errors import NoConvergence


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv,expected", [
    (("eval", "psi", "0", "--digits", "40"), "0.4978320563327170496523360244563039078292"),
    (("eval", "f", "1", "--digits", "40"), "1.412285352568903527683522667997937322133"),
    (("eval", "A", "1", "--digits", "20"), "0.00000000000000000000"),
])
def test_eval_examples(capsys, argv, expected):
    code, out, err = run(capsys, *argv)
    assert code == 0
    assert out == expected + "\n"
    assert err == ""


def test_eval_json(capsys):
    code, out, _ = run(capsys, "eval", "h", "0", "--digits", "25", "--format", "json")
    record = json.loads(out)
    assert code == 0
    assert record["value"] == "0.8459977040656470559451146"
    assert record["config"]["k"] == 13 and record["config"]["N"] == 10**4
    assert set(record) == {"function", "input", "value", "digits", "config", "ms"}


def test_eval_csv(capsys):
    code, out, _ = run(capsys, "eval", "A", "1", "--digits", "12", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["function,input,value,digits", "A,1,0.000000000000,12"]


def test_eval_explicit_series_config(capsys):
    code, out, _ = run(capsys, "eval", "C", "1", "--digits", "30", "--k", "7", "--N", "1000000")
    assert code == 0
    assert out.startswith("2.25696115887251231897468847")


@pytest.mark.parametrize("argv,code", [
    (("eval", "psi", "abc"), 2),
    (("eval", "C", "1", "--digits", "30", "--k", "2", "--N", "100"), 2),
    (("eval", "A", "0"), 3),
    (("eval", "ln-half", "-1", "--digits", "20"), 3),
    (("eval", "h-inverse-missing", "1"), None),
])
def test_exit_codes(capsys, argv, code):
    if code is None:
        with pytest.raises(SystemExit) as exc:
            cli.main(list(argv))
        assert exc.value.code == 2
        return
    got, out, err = run(capsys, *argv)
    assert got == code
    assert out == ""
    assert err.split(":")[0] in {"ParseError", "DomainError"}


def test_digits_out_of_range():
    with pytest.raises(SystemExit) as exc:
        cli.main(["eval", "psi", "0", "--digits", "5"])
    assert exc.value.code == 2


def test_no_convergence_exit_code(capsys, monkeypatch):
    def fail(x, ctx):
        raise NoConvergence("stub")
    monkeypatch.setattr(cli.quad, "f_limit", fail)
    code, out, err = run(capsys, "eval", "f", "1")
    assert code == 4
    assert err.startswith("NoConvergence")


def test_table_rows(capsys):
    code, out, _ = run(capsys, "table", "psi-positive", "--digits", "30")
    rows = out.splitlines()
    assert code == 0 and len(rows) == 8
    assert rows[0].startswith("3\t5.99202197295132031000615674")
    code, out, _ = run(capsys, "table", "psi-negative", "--digits", "30")
    assert out.splitlines()[-1].startswith("-10\t-0.69741268978905283798978761")


def test_special_table(capsys):
    code, out, _ = run(capsys, "table", "special", "--digits", "20", "--format", "json")
    rows = json.loads(out)
    assert [r["label"] for r in rows][:2] == ["-inf", "ln(kappa)"]
    by = {r["label"]: r for r in rows}
    assert by["kappa"]["exp_half"] == "1.0000000000000000000"
    assert by["kappa"]["ln_half"] == "0." + "0" * 20
    assert by["-inf"]["ln_half"] == "."
    assert by["ln(kappa)"]["ln_half"] == "-inf"


def test_verify_subset(capsys):
    code, out, err = run(capsys, "verify", "--only", "f*")
    report = json.loads(out)
    assert code == 0 and report["passed"]
    assert {r["name"] for r in report["records"]} == {"f(0)", "f(1)", "f'(1)", "f''(0)", "f''''(0)"}
    assert err == ""


def test_verify_tampered_corpus(capsys, tmp_path):
    path = tmp_path / "tampered.tsv"
    path.write_text("f(1)\tquad\t30\t1.412285352568903527693522667997937322133\n")
    code, out, err = run(capsys, "verify", "--corpus", str(path), "--format", "text")
    assert code == 1
    assert out.startswith("FAIL\tf(1)")
    assert "mismatch: f(1)" in err


def test_verify_malformed_corpus(capsys, tmp_path):
    path = tmp_path / "broken.tsv"
    path.write_text("f(1)\tquad\tthirty\t1.41\n")
    code, _, err = run(capsys, "verify", "--corpus", str(path))
    assert code == 5
    assert err.startswith("CorpusError")


def test_text_output_deterministic(capsys):
    argv = ("table", "ln-half", "--digits", "25")
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second
    assert first[0] == 0
