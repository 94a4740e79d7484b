import json

from hydrobracket import VerificationReport
from hydrobracket.frontend import build_report, describe_report, parse_poly
from hydrobracket.frontend.report import Report, write_report
from hydrobracket.verification import relation_from_residuals


def failing_report():
    residuals = [((0, i), parse_poly(f"u1^{i} + 1", 1)) for i in range(1, 5)]
    return VerificationReport(
        "demo",
        (relation_from_residuals("first", residuals), relation_from_residuals("second", [((0,), parse_poly("0", 1))])),
    )


def test_build_report():
    report = build_report("demo", "fixtures/x", "ab" * 32, [failing_report()], {"out": ["u1"]}, limit=2)
    assert report.verdict == "fail"
    assert not report.passed
    first, second = report.checks
    assert first.verdict == "fail"
    assert first.residual_count == 4
    assert [r.indices for r in first.residuals] == [[1, 2], [1, 3]]
    assert first.residuals[0].value == "u1 + 1"
    assert second.verdict == "pass"
    assert second.residuals == []


def test_passing_report():
    report = build_report("demo", "x", "0" * 64, [VerificationReport("empty")], limit=10)
    assert report.passed
    assert report.checks == []
    assert report.outputs == {}


def test_json(tmp_path):
    report = build_report("demo", "fixtures/x", "ab" * 32, [failing_report()], limit=1)
    doc = json.loads(report.to_json())
    assert doc["command"] == "demo"
    assert doc["input_digest"] == "ab" * 32
    assert "elapsed_seconds" not in doc
    assert doc["checks"][0]["residuals"] == [{"indices": [1, 2], "value": "u1 + 1"}]
    path = tmp_path / "report.json"
    write_report(report, path)
    assert Report.model_validate_json(path.read_text()) == report


def test_timing():
    report = build_report("demo", "x", "0" * 64, [], limit=1, elapsed_seconds=0.5)
    assert json.loads(report.to_json())["elapsed_seconds"] == 0.5
    assert describe_report(report)[-1] == "elapsed: 0.500s"


def test_describe():
    report = build_report("demo", "fixtures/x", "ab" * 32, [failing_report()], {"out": ["u1"]}, limit=2)
    assert describe_report(report) == [
        "demo fixtures/x: fail",
        "  [fail] first (4 nonzero residuals)",
        "    (1, 2): u1 + 1",
        "    (1, 3): u1^2 + 1",
        "    ... and 2 more",
        "  [pass] second",
        "out:",
        "  u1",
    ]


def test_describe_wraps():
    value = " + ".join(f"u1^{i}" for i in range(30, 0, -1))
    residuals = [((0,), parse_poly(value, 1))]
    report = build_report("demo", "x", "0" * 64, [VerificationReport("w", (relation_from_residuals("r", residuals),))], limit=1)
    lines = describe_report(report, width=40)
    assert all(len(line) <= 40 for line in lines)
    assert lines[2].startswith("    (1): u1^30")
    assert lines[3].startswith("         ")

