from hypothesis import given, settings, strategies as st
from pytest import raises

from hydrobracket import DimensionMismatch, NotClosed, NotSymmetric, Poly, PolyMatrix
from hydrobracket.algebra import (
    closedness_defects,
    gradient,
    hessian,
    integrate_gradient,
    integrate_hessian,
    third_derivatives,
)
from hydrobracket.frontend import parse_poly
from tests.strategies import polys


def p(src, dim=2):
    return parse_poly(src, dim)


def test_gradient_and_hessian():
    f = p("u1^2*u2 + u2^3")
    assert gradient(f) == (p("2*u1*u2"), p("u1^2 + 3*u2^2"))
    assert hessian(f) == PolyMatrix([[p("2*u2"), p("2*u1")], [p("2*u1"), p("6*u2")]])


def test_third_derivatives():
    f = parse_poly("u1*u2*u3 + u3^3", 3)
    t = third_derivatives(f)
    assert t.count_nonzero() == 7
    assert t[2, 2, 2] == Poly.constant(3, 6)
    assert t[0, 1, 2] == t[2, 1, 0] == Poly.one(3)


def test_integrate_gradient():
    assert integrate_gradient((p("2*u1*u2"), p("u1^2 + 1"))) == p("u1^2*u2 + u2")


def test_not_closed():
    v = (p("u2"), p("0"))
    assert list(closedness_defects(v)) == [(0, 1, p("1"))]
    with raises(NotClosed) as e:
        integrate_gradient(v)
    assert (e.value.i, e.value.j) == (0, 1)
    assert e.value.residual == p("1")
    assert e.value.stage is None


def test_bad_covector():
    with raises(DimensionMismatch):
        integrate_gradient((p("u1"),))
    with raises(DimensionMismatch):
        integrate_gradient(())


def test_integrate_hessian():
    m = PolyMatrix([[p("2*u2"), p("2*u1")], [p("2*u1"), p("6*u2")]])
    assert integrate_hessian(m) == p("u1^2*u2 + u2^3")


def test_integrate_hessian_not_symmetric():
    m = PolyMatrix([[p("0"), p("u1")], [p("0"), p("0")]])
    with raises(NotSymmetric) as e:
        integrate_hessian(m)
    assert (e.value.i, e.value.j) == (0, 1)


def test_integrate_hessian_stage_one():
    # symmetric, but the first column is not closed
    m = PolyMatrix([[p("u2"), p("u2")], [p("u2"), p("0")]])
    with raises(NotClosed) as e:
        integrate_hessian(m)
    assert e.value.stage == 1


def test_integrate_hessian_constant():
    m = PolyMatrix([[p("0"), p("1")], [p("1"), p("0")]])
    assert integrate_hessian(m) == p("u1*u2")
    m = PolyMatrix([[p("1"), p("1")], [p("1"), p("0")]])
    assert integrate_hessian(m) == p("1/2*u1^2 + u1*u2")


@settings(max_examples=1000)
@given(st.data())
def test_gradient_round_trip(data):
    dim = data.draw(st.integers(1, 3))
    f = data.draw(polys(dim, max_degree=4))
    assert integrate_gradient(gradient(f)) == f - f.constant_term()


@settings(max_examples=1000)
@given(st.data())
def test_hessian_round_trip(data):
    dim = data.draw(st.integers(1, 3))
    f = data.draw(polys(dim, max_degree=4))
    affine = Poly.constant(dim, f.constant_term())
    for i, d in enumerate(gradient(f)):
        affine += Poly.variable(dim, i) * d.constant_term()
    assert integrate_hessian(hessian(f)) == f - affine


@settings(max_examples=1000)
@given(st.data())
def test_gradients_are_closed(data):
    dim = data.draw(st.integers(1, 3))
    f = data.draw(polys(dim, max_degree=4))
    assert next(closedness_defects(gradient(f)), None) is None
    assert hessian(f).is_symmetric()
