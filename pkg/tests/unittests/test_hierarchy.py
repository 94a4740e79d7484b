from hypothesis import given, settings, strategies as st
from pytest import fixture, mark, raises

from hydrobracket import (
    ConstantFormSpec,
    ConstSymMatrix,
    FlowSpec,
    Functional,
    IntegrationFailed,
    JetPoly,
    Poly,
    PolyMatrix,
    PreconditionFailed,
    WdvvProblem,
    flows_commute,
    locality_residual,
    run_hierarchy,
    structural_flows,
)
from hydrobracket.frontend import parse_poly
from hydrobracket.hierarchy import (
    HierarchyState,
    commutation_report,
    f_from_psi,
    initial_state,
    next_step,
    quadratic_density,
    step_potentials,
)
from tests.strategies import DUBROVIN, homogeneous_polys, nonzero_coefficients


def p(src, dim=1):
    return parse_poly(src, dim)


def one_component(psi):
    one = ConstSymMatrix.identity(1)
    return ConstantFormSpec(one, one, (p(psi),))


@fixture
def hopf():
    return one_component("1/6*u1^3")


def test_hopf(hopf):
    state = run_hierarchy(hopf, 2)
    assert state.densities[0] == p("1/2*u1^2")
    assert state.steps[0].potentials == (p("1/3*u1^3"),)
    assert str(state.densities[1]) == "1/90*u1^6"
    assert state.flows[0].a == PolyMatrix([[p("1/3*u1^4")]])
    assert state.steps[0].hessian_flow == state.steps[0].flow
    assert state.densities[2].degree == 10


def test_zero_steps(hopf):
    state = run_hierarchy(hopf, 0)
    assert state.densities == (p("1/2*u1^2"),)
    assert state.steps == ()
    with raises(ValueError):
        run_hierarchy(hopf, -1)


def test_state_invariant(hopf):
    with raises(ValueError):
        HierarchyState(hopf, ())


def test_quadratic_psi():
    # a quadratic potential still yields a quartic second density
    state = run_hierarchy(one_component("u1^2"), 1)
    assert state.densities[1].degree == 4


def test_two_component_quadratic_psis():
    identity = ConstSymMatrix.identity(2)
    spec = ConstantFormSpec(identity, identity, (parse_poly("1/2*u1^2", 2), parse_poly("1/2*u2^2", 2)))
    state = run_hierarchy(spec, 1)
    assert state.densities[1] == parse_poly("1/24*u1^4 + 1/24*u2^4", 2)


def test_antidiagonal_quadratic_density():
    spec = ConstantFormSpec.from_wdvv(WdvvProblem.from_ansatz(parse_poly("0", 3)))
    assert quadratic_density(spec) == parse_poly("u1*u3 + 1/2*u2^2", 3)


def test_not_hamiltonian():
    identity = ConstSymMatrix.identity(2)
    spec = ConstantFormSpec(identity, identity, (parse_poly("1/6*u1^3", 2), parse_poly("1/2*u1*u2^2", 2)))
    with raises(PreconditionFailed) as e:
        run_hierarchy(spec, 1)
    assert not e.value.report.passed


def test_integration_failure_is_chained():
    identity = ConstSymMatrix.identity(2)
    spec = ConstantFormSpec(identity, identity, (parse_poly("1/6*u1^3", 2), parse_poly("1/2*u1*u2^2", 2)))
    with raises(IntegrationFailed) as e:
        next_step(initial_state(spec))
    assert e.value.__cause__ is not None


@mark.parametrize(
    "f",
    ["0", "1/4*u2^2*u3^2 + 1/60*u3^5"],
)
def test_wdvv_hierarchy(f):
    spec = ConstantFormSpec.from_wdvv(WdvvProblem.from_ansatz(parse_poly(f, 3)))
    state = run_hierarchy(spec, 1)
    assert state.steps[0].potentials == tuple(f_from_psi(psi) for psi in spec.psis)
    assert commutation_report(structural_flows(spec)).passed


def test_flows_commute():
    n = 2
    shear = FlowSpec(PolyMatrix.from_constants(n, [[0, 1], [0, 0]]))
    stretch = FlowSpec(PolyMatrix([[parse_poly("u1", 2), parse_poly("0", 2)], [parse_poly("0", 2)] * 2]))
    first, second = flows_commute(shear, stretch)
    assert first == JetPoly.u_x(n, 0) * JetPoly.u_x(n, 1) + JetPoly.u(n, 0) * JetPoly.u_xx(n, 1)
    assert second == JetPoly.zero(n)
    report = commutation_report([shear, stretch, shear])
    assert [r.indices for r in report.relations[0].residuals] == [(0, 1, 0), (1, 2, 0)]


def test_scalar_flows_commute():
    flows = [FlowSpec(PolyMatrix([[p(a)]])) for a in ("u1", "u1^2", "1 + u1^3")]
    assert commutation_report(flows).passed


def test_f_from_psi():
    assert f_from_psi(p("1/6*u1^3")) == p("1/3*u1^3")
    assert f_from_psi(parse_poly("u1*u2^2 + 3", 2)) == parse_poly("2*u1*u2^2 - 3", 2)


@settings(max_examples=1000, deadline=None)
@given(st.integers(2, 5), nonzero_coefficients)
def test_one_component_degrees(d, c):
    one = ConstSymMatrix.identity(1)
    spec = ConstantFormSpec(one, one, (Poly.monomial(1, (d,), c),))
    state = run_hierarchy(spec, 2)
    degrees = [h.degree for h in state.densities]
    assert degrees == [2, 2 * d, 4 * d - 2]


@settings(max_examples=1000, deadline=None)
@given(st.data())
def test_first_potentials(data):
    dim = data.draw(st.integers(1, 3))
    psi = data.draw(homogeneous_polys(dim, data.draw(st.integers(2, 4))))
    eta = data.draw(st.sampled_from([ConstSymMatrix.identity(dim), ConstSymMatrix.antidiagonal(dim)]))
    spec = ConstantFormSpec(eta, ConstSymMatrix.identity(1), (psi,))
    assert step_potentials(spec, quadratic_density(spec)) == (f_from_psi(psi),)


@settings(max_examples=1000, deadline=None)
@given(st.data())
def test_homogeneous_f_from_psi(data):
    dim = data.draw(st.integers(1, 3))
    d = data.draw(st.integers(1, 5))
    psi = data.draw(homogeneous_polys(dim, d))
    assert f_from_psi(psi) == psi * (d - 1)


@fixture(params=sorted(DUBROVIN), scope="module")
def dubrovin_state(request):
    spec = ConstantFormSpec.from_wdvv(WdvvProblem.from_ansatz(parse_poly(DUBROVIN[request.param], 3)))
    return run_hierarchy(spec, 3)


def test_dubrovin_hierarchy(dubrovin_state):
    assert len(dubrovin_state.densities) == 4
    assert len(dubrovin_state.flows) == 3
    degrees = [h.degree for h in dubrovin_state.densities]
    assert degrees[0] == 2
    assert degrees == sorted(set(degrees))


def test_dubrovin_densities_are_local(dubrovin_state):
    spec = dubrovin_state.spec
    for h in dubrovin_state.densities:
        assert locality_residual(spec, Functional(h)).is_zero()


def test_dubrovin_flows_commute(dubrovin_state):
    flows = [*structural_flows(dubrovin_state.spec), *dubrovin_state.flows[:2]]
    assert commutation_report(flows).passed
