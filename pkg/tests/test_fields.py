import pytest

from varseq import expr as ex
from varseq.bundle import Bundle
from varseq.expr import Expr
from varseq.fields import (VectorField, horizontal_part, interior_product,
                           lie_bracket, lie_derivative, prolong, split_HV,
                           vertical_part)
from varseq.forms import Form, exterior_derivative, wedge
from varseq.multiindex import mi_append

from conftest import (random_contact_form, random_poly, random_projectable,
                      random_vertical)


def test_component_validation():
    b = Bundle(1, 1, 4)
    with pytest.raises(ValueError):
        VectorField(b, xi={1: b.y(1)})        # base component depends on y
    with pytest.raises(ValueError):
        VectorField(b, eta={1: b.y(1, (1,))})  # fibre component on a jet


def test_prolongation_recurrence(rng):
    """Components satisfy Xi^s_{Jt} = d_t Xi^s_J - y^s_{Ji} d_t xi^i."""
    for _ in range(10):
        b = Bundle(2, 2, 8)
        Xi = random_projectable(b, rng)
        pr = prolong(Xi, 3)
        for (s, J), v in pr.comp.items():
            if len(J) >= 3:
                continue
            for t in (1, 2):
                expect = ex.total_derivative(v, t, b.r_max)
                for i in (1, 2):
                    expect = expect - ex.y(s, mi_append(J, i)) \
                        * ex.partial(Xi.xi[i], ("x", t))
                assert pr.component(s, mi_append(J, t)) == expect


def test_vertical_prolongation_is_total_derivative(rng):
    # for a vertical field the recurrence collapses to Xi^s_J = d_J Xi^s
    b = Bundle(2, 1, 8)
    Xi = random_vertical(b, rng)
    pr = prolong(Xi, 3)
    for (s, J), v in pr.comp.items():
        assert v == ex.d_multi(Xi.eta[s], J, b.r_max)


def test_split_into_horizontal_and_vertical(rng):
    for _ in range(8):
        b = Bundle(2, 2, 8)
        Xi = random_projectable(b, rng)
        H, V = split_HV(Xi, 2)
        pr = prolong(Xi, 2)
        for key in pr.comp:
            assert pr.comp[key] == H.comp[key] + V.comp[key]
        # the horizontal part annihilates every contact form
        for (s, I) in b.jet_coords(2):
            assert H.pairing(s, I).is_zero


def test_interior_product_antiderivation(rng):
    for _ in range(10):
        b = Bundle(2, 2, 6)
        Xi = random_projectable(b, rng)
        Phi = prolong(Xi, 3)
        a = Form.dx(b, 1) * random_poly(b, rng, 1, 2)
        c = Form.omega(b, rng.randint(1, 2), ()) * random_poly(b, rng, 1, 2)
        lhs = interior_product(Phi, wedge(a, c))
        rhs = wedge(interior_product(Phi, a), c) \
            - wedge(a, interior_product(Phi, c))
        assert lhs == rhs


def test_contraction_of_contact_form_on_prolongation():
    # omega^s_I evaluates prolonged components against the jet drag term
    b = Bundle(1, 1, 6)
    Xi = VectorField(b, xi={1: Expr.const(1)}, eta={1: b.y(1)})
    pr = prolong(Xi, 2)
    # omega = dy - y_1 dx: pairing is eta - y_1 * xi
    assert pr.pairing(1, ()) == b.y(1) - b.y(1, (1,))


def test_lie_derivative_on_scalars_is_the_derivation(rng):
    for _ in range(8):
        b = Bundle(2, 1, 8)
        Xi = random_projectable(b, rng)
        f = random_poly(b, rng, 1, 3)
        pr = prolong(Xi, f.jet_order() + 1)
        lhs = lie_derivative(Xi, Form.scalar(b, f))
        rhs = Form.scalar(b, pr.apply(f))
        assert lhs == rhs


def test_lie_derivative_commutes_with_d(rng):
    for _ in range(6):
        b = Bundle(2, 1, 8)
        Xi = random_projectable(b, rng)
        rho = random_contact_form(b, rng, 1, max_order=1, n_terms=2)
        lhs = lie_derivative(Xi, exterior_derivative(rho))
        rhs = exterior_derivative(lie_derivative(Xi, rho))
        assert lhs == rhs


def test_lie_bracket_against_commutator_of_derivations(rng):
    for _ in range(8):
        b = Bundle(2, 2, 8)
        X1 = random_vertical(b, rng)
        X2 = random_vertical(b, rng)
        Br = lie_bracket(X1, X2)
        f = random_poly(b, rng, 0, 3)
        p1, p2, pb = prolong(X1, 1), prolong(X2, 1), prolong(Br, 1)
        lhs = p1.apply(p2.apply(f)) - p2.apply(p1.apply(f))
        assert lhs == pb.apply(f)


def test_bracket_antisymmetry_and_jacobi(rng):
    b = Bundle(1, 2, 8)
    X1, X2, X3 = (random_vertical(b, rng) for _ in range(3))

    def vf_eq(A, B):
        return all(A.xi[i] == B.xi[i] for i in A.xi) \
            and all(A.eta[s] == B.eta[s] for s in A.eta)

    Z = VectorField(b)
    assert vf_eq(lie_bracket(X1, X1), Z)
    s = lie_bracket(lie_bracket(X1, X2), X3)
    s2 = lie_bracket(lie_bracket(X2, X3), X1)
    s3 = lie_bracket(lie_bracket(X3, X1), X2)
    total = VectorField(
        b,
        xi={i: s.xi[i] + s2.xi[i] + s3.xi[i] for i in s.xi},
        eta={t: s.eta[t] + s2.eta[t] + s3.eta[t] for t in s.eta})
    assert vf_eq(total, Z)
