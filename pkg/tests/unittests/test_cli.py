import json

from pytest import fixture, mark, raises

from hydrobracket.frontend import main


@fixture
def run(capsys):
    def ret(*argv):
        code = main(list(argv))
        out, err = capsys.readouterr()
        return code, out, err

    return ret


@mark.parametrize(
    ("argv", "code"),
    [
        (["verify-wdvv", "fixtures/trivial"], 0),
        (["verify-wdvv", "fixtures/dubrovin1"], 0),
        (["verify-wdvv", "fixtures/cubic"], 1),
        (["verify-operator", "fixtures/dubrovin1"], 0),
        (["verify-operator", "fixtures/ricci-breaker"], 1),
        (["verify-operator", "fixtures/flat-chart"], 0),
        (["verify-operator", "fixtures/bad-connection"], 1),
        (["hierarchy", "fixtures/hopf", "--steps", "2"], 0),
        (["hierarchy", "fixtures/ricci-breaker"], 1),
        (["localize", "fixtures/hopf-density"], 0),
        (["localize", "fixtures/hopf", "--density", "u1^4"], 0),
        (["involution", "fixtures/dubrovin1"], 0),
        (["involution", "fixtures/ricci-breaker"], 1),
        (["commute", "fixtures/scalar-flows"], 0),
        (["commute", "fixtures/shear-flows"], 1),
        (["commute", "fixtures/trivial"], 0),
        (["fixtures", "list"], 0),
        (["fixtures", "show", "hopf"], 0),
    ],
)
def test_exit_codes(run, argv, code):
    assert run(*argv)[0] == code


@mark.parametrize(
    "argv",
    [
        ["verify-wdvv", "fixtures/hopf"],
        ["verify-wdvv", "fixtures/no-such-fixture"],
        ["verify-wdvv", "no/such/file.json"],
        ["localize", "fixtures/hopf"],
        ["localize", "fixtures/hopf", "--density", "2 u1"],
        ["fixtures", "show"],
        ["fixtures", "show", "nope"],
    ],
)
def test_input_errors(run, argv):
    code, _, err = run(*argv)
    assert code == 2
    assert err


def test_malformed_files(run, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"kind": "wdvv", "N": 3, "eta": "0,0,1;0,1,0;1,0,0", "f": "u3^^2"}')
    code, _, err = run("verify-wdvv", str(path))
    assert code == 2
    assert err.startswith("error:")
    path.write_text('{"kind": "wdvv"')
    assert run("verify-wdvv", str(path))[0] == 2


def test_hierarchy_output(run):
    code, out, _ = run("hierarchy", "fixtures/hopf", "--steps", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "hierarchy fixtures/hopf: pass"
    assert "  h2 = 1/90*u1^6" in lines
    assert "  F1^(1) = 1/3*u1^3" in lines
    assert "  A^(1) = [1/3*u1^4]" in lines


def test_json_report(run, tmp_path):
    out = tmp_path / "report.json"
    code, _, _ = run("--out", str(out), "--residual-limit", "1", "verify-wdvv", "fixtures/cubic")
    assert code == 1
    doc = json.loads(out.read_text())
    assert doc["command"] == "verify-wdvv"
    assert doc["input"] == "fixtures/cubic"
    assert doc["verdict"] == "fail"
    assert len(doc["input_digest"]) == 64
    assert "elapsed_seconds" not in doc
    checks = {c["name"]: c for c in doc["checks"]}
    assert checks["Dubrovin equation"]["residuals"] == [{"indices": [], "value": "6"}]
    associativity = checks["associativity equations"]
    assert associativity["verdict"] == "fail"
    assert len(associativity["residuals"]) == 1
    assert associativity["residual_count"] > 1


def test_reports_are_reproducible(run, tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    run("--out", str(first), "verify-operator", "fixtures/dubrovin1")
    run("--out", str(second), "verify-operator", "fixtures/dubrovin1")
    assert first.read_bytes() == second.read_bytes()


def test_timing(run, tmp_path):
    out = tmp_path / "report.json"
    run("--timing", "--out", str(out), "commute", "fixtures/scalar-flows")
    assert json.loads(out.read_text())["elapsed_seconds"] >= 0


def test_wdvv_outputs(run):
    code, out, _ = run("verify-wdvv", "fixtures/dubrovin1")
    assert code == 0
    assert "  [pass] a_u3 = b_u2" in out
    assert "  w2 = [0, u3, u2; 1, 0, u3; 0, 1, 0]" in out
    assert "reduced potential:" in out


def test_precondition_reported(run):
    code, out, _ = run("hierarchy", "fixtures/ricci-breaker")
    assert code == 1
    assert "[fail] Ricci equations" in out
    assert "error:" in out


def test_fixtures_list(run):
    _, out, _ = run("fixtures", "list")
    assert "dubrovin1" in out.split()


def test_residual_limit_flag(run):
    _, out, _ = run("--residual-limit", "0", "verify-wdvv", "fixtures/cubic")
    assert "... and" in out
    assert run("--residual-limit", "2", "verify-wdvv", "fixtures/cubic")[0] == 1


def test_report_ignores_environment(run, monkeypatch, tmp_path):
    plain, configured = tmp_path / "plain.json", tmp_path / "configured.json"
    run("--out", str(plain), "verify-wdvv", "fixtures/cubic")
    monkeypatch.setenv("HYDROBRACKET_RESIDUAL_LIMIT", "1")
    monkeypatch.setenv("HYDROBRACKET_REPORT_WIDTH", "40")
    monkeypatch.setenv("HYDROBRACKET_LOG_LEVEL", "error")
    run("--out", str(configured), "verify-wdvv", "fixtures/cubic")
    assert plain.read_bytes() == configured.read_bytes()


def test_invalid_environment(run, monkeypatch):
    monkeypatch.setenv("HYDROBRACKET_REPORT_WIDTH", "12")
    code, _, err = run("verify-wdvv", "fixtures/cubic")
    assert code == 2
    assert "invalid configuration" in err
    assert run("--width", "60", "verify-wdvv", "fixtures/cubic")[0] == 2


@mark.parametrize(
    "argv",
    [
        ["hierarchy", "fixtures/hopf", "--steps", "-1"],
        ["hierarchy", "fixtures/hopf", "--steps", "two"],
        ["--width", "0", "verify-wdvv", "fixtures/cubic"],
        ["--width", "39", "verify-wdvv", "fixtures/cubic"],
        ["--residual-limit", "-1", "verify-wdvv", "fixtures/cubic"],
    ],
)
def test_bad_flags(capsys, argv):
    with raises(SystemExit) as e:
        main(argv)
    assert e.value.code == 2
    assert "error: argument" in capsys.readouterr().err


def test_help_lists_env_vars(capsys):
    with raises(SystemExit) as e:
        main(["--help"])
    assert e.value.code == 0
    assert "HYDROBRACKET_REPORT_WIDTH" in capsys.readouterr().out


def test_usage_error():
    with raises(SystemExit) as e:
        main(["no-such-command"])
    assert e.value.code == 2
