import json

from pydantic import ValidationError
from pytest import fixture, mark, raises

from hydrobracket import ConstSymMatrix, PolyParseError, ProblemFileError
from hydrobracket.frontend import list_fixtures, load_problem, parse_poly
from hydrobracket.frontend.fixtures import fixture_bytes
from hydrobracket.frontend.problem import (
    ConstantFormFile,
    DensityFile,
    FlowFile,
    GeneralFormFile,
    WdvvFile,
    problem_adapter,
)


@fixture
def write(tmp_path):
    def ret(doc, name="problem.json"):
        path = tmp_path / name
        path.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
        return str(path)

    return ret


def test_fixture_listing():
    names = list_fixtures()
    for expected in ("trivial", "dubrovin1", "dubrovin2", "dubrovin3", "cubic", "hopf", "ricci-breaker"):
        assert expected in names
    assert names == sorted(names)


@mark.parametrize("name", ["trivial", "dubrovin1", "hopf", "flat-chart", "shear-flows", "hopf-density"])
def test_fixtures_load(name):
    loaded = load_problem(f"fixtures/{name}")
    assert loaded.source == f"fixtures/{name}"
    assert len(loaded.digest) == 64
    assert loaded.problem.name == name


def test_unknown_fixture():
    with raises(ProblemFileError):
        fixture_bytes("fixtures/no-such-fixture")


def test_wdvv_file():
    loaded = load_problem("fixtures/dubrovin1")
    assert isinstance(loaded.problem, WdvvFile)
    prob = loaded.problem.to_spec()
    assert prob.eta == ConstSymMatrix.antidiagonal(3)
    assert prob.reduced_potential() == parse_poly("1/4*u2^2*u3^2 + 1/60*u3^5", 3)


def test_digest_is_stable(write):
    doc = {"kind": "wdvv", "N": 3, "eta": "0,0,1;0,1,0;1,0,0", "f": "u3^4"}
    first = load_problem(write(doc, "a.json"))
    second = load_problem(write(doc, "b.json"))
    assert first.digest == second.digest
    third = load_problem(write({**doc, "f": "u3^5"}, "c.json"))
    assert third.digest != first.digest


def test_wdvv_phi(write):
    doc = {"kind": "wdvv", "N": 2, "eta": [[1, 0], [0, 1]], "phi": "u1^3 + u2^3"}
    prob = load_problem(write(doc)).problem.to_spec()
    assert prob.dim == 2
    assert prob.reduced_potential() is None


@mark.parametrize(
    "doc",
    [
        {"kind": "wdvv", "N": 3, "eta": "0,0,1;0,1,0;1,0,0"},
        {"kind": "wdvv", "N": 3, "eta": "0,0,1;0,1,0;1,0,0", "f": "0", "phi": "0"},
        {"kind": "wdvv", "N": 2, "eta": "1,0;0,1", "f": "0"},
        {"kind": "wdvv", "N": 0, "eta": "1", "phi": "0"},
        {"kind": "wdvv", "N": 3, "eta": "0,0,1;0,1,0;1,0,0", "f": "0", "extra": 1},
        {"kind": "nonsense", "N": 1},
        {"kind": "constant-form", "N": 1, "eta": [[1]], "psis": ["u1"]},
        {"kind": "constant-form", "N": 1, "eta": [[1]], "mu": [[1]], "psis": []},
        {"kind": "constant-form", "N": 1, "eta": [[1]], "mu": [[1]], "psis": ["u1"], "L": 2},
        {"kind": "general-form", "N": 1, "g": [["1"]], "ws": [[["u1"]]]},
        {"kind": "flow", "N": 1, "flows": []},
    ],
)
def test_invalid_documents(doc):
    with raises(ValidationError):
        problem_adapter.validate_json(json.dumps(doc))


def test_malformed_json():
    with raises(ValidationError):
        problem_adapter.validate_json("{")


def test_bad_expression_location():
    doc = {"kind": "wdvv", "N": 3, "eta": "0,0,1;0,1,0;1,0,0", "f": "u3^2 +\n 2 u2"}
    problem = problem_adapter.validate_json(json.dumps(doc))
    with raises(PolyParseError) as e:
        problem.to_spec()
    assert e.value.message.startswith("f: ")
    assert (e.value.line, e.value.column) == (2, 4)


@mark.parametrize(
    ("eta", "message"),
    [
        ("1, 2; 3, 1", "eta"),
        ("1, 1; 1, 1", "eta"),
        ("1, 0, 0; 0, 1, 0; 0, 0, 1", "2x2"),
        ([[1, 0], [0, "x"]], "eta"),
    ],
)
def test_bad_eta(eta, message):
    doc = {"kind": "wdvv", "N": 2, "eta": eta, "phi": "u1^3"}
    problem = problem_adapter.validate_json(json.dumps(doc))
    with raises(ProblemFileError) as e:
        problem.to_spec()
    assert message in str(e.value)


def test_ansatz_requires_reduced_f():
    doc = {"kind": "wdvv", "N": 3, "eta": "0,0,1;0,1,0;1,0,0", "f": "u1*u3"}
    with raises(ProblemFileError):
        problem_adapter.validate_json(json.dumps(doc)).to_spec()


def test_constant_form_file():
    problem = load_problem("fixtures/ricci-breaker").problem
    assert isinstance(problem, ConstantFormFile)
    spec = problem.to_spec()
    assert spec.size == 2
    assert spec.psis[1] == parse_poly("1/2*u1*u2^2", 2)


def test_constant_form_from_phi():
    doc = {"kind": "constant-form", "N": 3, "eta": "0,0,1;0,1,0;1,0,0", "phi": "1/2*u1^2*u3 + 1/2*u1*u2^2"}
    spec = problem_adapter.validate_json(json.dumps(doc)).to_spec()
    assert spec.size == 3
    assert spec.mu == spec.eta


def test_density_file():
    problem = load_problem("fixtures/hopf-density").problem
    assert isinstance(problem, DensityFile)
    assert problem.to_functional().density == parse_poly("1/2*u1^2", 1)


def test_general_form_file():
    problem = load_problem("fixtures/flat-chart").problem
    assert isinstance(problem, GeneralFormFile)
    spec = problem.to_spec()
    assert spec.b.count_nonzero() == 2
    assert spec.b[1, 0, 1] == parse_poly("2", 2)
    bad = problem_adapter.validate_json(json.dumps({"kind": "general-form", "N": 2, "g": [["1", "0"]]}))
    with raises(ProblemFileError):
        bad.to_spec()


def test_flow_file():
    problem = load_problem("fixtures/shear-flows").problem
    assert isinstance(problem, FlowFile)
    flows = problem.to_flows()
    assert len(flows) == 2
    assert flows[1].a[0, 0] == parse_poly("u1", 2)


def test_kind_filter():
    with raises(ProblemFileError):
        load_problem("fixtures/hopf", kinds=("wdvv",))


def test_missing_file(tmp_path):
    with raises(OSError):
        load_problem(str(tmp_path / "missing.json"))
