import random

import pytest

from varseq import expr as ex
from varseq.bundle import Bundle
from varseq.expr import Expr
from varseq.forms import (Form, contact_part, contact_split, ds, ds_i,
                          exterior_derivative, form_total_derivative,
                          horizontal_differential, horizontalize,
                          vertical_differential, wedge, wedge_all)

from conftest import random_contact_form, random_lagrangian, random_poly


def test_wedge_anticommutes_on_one_forms():
    b = Bundle(2, 2, 4)
    a = Form.dx(b, 1)
    c = Form.omega(b, 1, (2,))
    assert wedge(a, c) == -wedge(c, a)
    assert wedge(a, a).is_zero
    assert wedge(c, c).is_zero


def test_wedge_associative_random(rng):
    for _ in range(20):
        b = Bundle(2, 2, 4)
        f1 = random_contact_form(b, rng, 1, max_order=1, n_terms=1)
        f2 = Form.dx(b, rng.randint(1, 2)) * random_poly(b, rng, 1, 2)
        f3 = Form.omega(b, rng.randint(1, 2)) * random_poly(b, rng, 1, 2)
        assert wedge(wedge(f2, f3), f1) == wedge(f2, wedge(f3, f1))


def test_ds_and_ds_i():
    b = Bundle(3, 1, 4)
    assert ds(b).terms == {((1, 2, 3), ()): Expr.const(1)}
    # dx^i ^ ds_i = ds with the interior-product sign convention
    for i in range(1, 4):
        assert wedge(Form.dx(b, i), ds_i(b, i)) == ds(b)


def test_exterior_derivative_squares_to_zero(rng):
    for _ in range(15):
        b = Bundle(2, 2, 6)
        rho = random_contact_form(b, rng, 1, max_order=2, n_terms=2)
        assert exterior_derivative(exterior_derivative(rho)).is_zero


def test_d_of_scalar_contact_decomposition():
    # df = (d_i f) dx^i + (df/dy^s_I) w^s_I, checked on a hand example
    b = Bundle(1, 1, 4)
    f = b.y(1, (1,)) ** 2
    df = exterior_derivative(Form.scalar(b, f))
    expect = (Form.dx(b, 1) * (2 * b.y(1, (1,)) * b.y(1, (1, 1)))
              + Form.omega(b, 1, (1,)) * (2 * b.y(1, (1,))))
    assert df == expect


def test_d_omega_is_dx_wedge_next_contact():
    b = Bundle(2, 1, 4)
    d = exterior_derivative(Form.omega(b, 1, (1,)))
    expect = (wedge(Form.dx(b, 1), Form.omega(b, 1, (1, 1)))
              + wedge(Form.dx(b, 2), Form.omega(b, 1, (1, 2))))
    assert d == expect


def test_contact_split_is_a_partition(rng):
    for _ in range(15):
        b = Bundle(2, 2, 6)
        rho = random_contact_form(b, rng, 1, max_order=2, n_terms=2)
        pieces = contact_split(rho)
        total = Form.zero(b)
        for k, p in enumerate(pieces):
            assert p == contact_part(rho, k)
            assert p.contact_degrees() <= {k}
            total = total + p
        assert total == rho


def test_d_splits_into_horizontal_plus_vertical(rng):
    for _ in range(15):
        b = Bundle(2, 2, 6)
        rho = random_contact_form(b, rng, 1, max_order=2, n_terms=2)
        d = exterior_derivative(rho)
        assert d == horizontal_differential(rho) + vertical_differential(rho)


def test_horizontal_differential_squares_to_zero(rng):
    for _ in range(15):
        b = Bundle(2, 2, 6)
        rho = random_contact_form(b, rng, 1, max_order=2, n_terms=2)
        assert horizontal_differential(horizontal_differential(rho)).is_zero


def test_horizontal_differential_on_scalar_matches_total_derivative():
    b = Bundle(2, 1, 4)
    f = random_poly(b, random.Random(3), 2, 3)
    dh = horizontal_differential(Form.scalar(b, f))
    expect = (Form.dx(b, 1) * ex.total_derivative(f, 1)
              + Form.dx(b, 2) * ex.total_derivative(f, 2))
    assert dh == expect


def test_form_total_derivative_leibniz_wedge(rng):
    # d_i (a ^ b) = (d_i a) ^ b + a ^ (d_i b)
    for _ in range(15):
        b = Bundle(2, 2, 6)
        f1 = Form.omega(b, 1, (rng.randint(1, 2),)) * random_poly(b, rng, 1, 2)
        f2 = Form.omega(b, 2, ()) * random_poly(b, rng, 1, 2)
        lhs = form_total_derivative(wedge(f1, f2), 1)
        rhs = (wedge(form_total_derivative(f1, 1), f2)
               + wedge(f1, form_total_derivative(f2, 1)))
        assert lhs == rhs


def test_horizontalize_drops_contact_terms():
    b = Bundle(1, 1, 4)
    rho = Form.dx(b, 1) * b.y(1) + Form.omega(b, 1) * b.x(1)
    assert horizontalize(rho) == Form.dx(b, 1) * b.y(1)


def test_total_derivative_restricts_to_sections(rng):
    """Substituting the jets of a polynomial section x -> (x, s(x))
    intertwines the formal total derivative with the plain coordinate
    derivative of the restricted function."""
    for _ in range(10):
        b = Bundle(2, 1, 8)
        section = random_poly(b, rng, 0, 2, 2)
        # keep the section a function of x only
        section = Expr({m: c for m, c in section.terms.items()
                        if all(g[0] == "x" for g, _ in m)})
        sub = {("y", 1, tuple(I)): ex.d_multi(section, I)
               for (s, I) in b.jet_coords(5)}

        def pullback(e):
            return e.substitute(sub)

        f = random_poly(b, rng, 2, 3, 2)
        for i in (1, 2):
            lhs = pullback(ex.total_derivative(f, i))
            rhs = ex.total_derivative(pullback(f), i)
            assert lhs == rhs
