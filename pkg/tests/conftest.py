"""Shared fixture builders for randomized property tests.

All randomness is driven by explicitly seeded random.Random instances so
every run exercises the same fixtures.
"""

import random
from fractions import Fraction

import pytest

from varseq import expr as ex
from varseq.bundle import Bundle
from varseq.expr import Expr
from varseq.fields import VectorField
from varseq.forms import Form, ds, ds_i, wedge, wedge_all


def small_bundle(rng, r_max=8):
    return Bundle(rng.randint(1, 2), rng.randint(1, 2), r_max)


def random_poly(b, rng, max_order=2, n_terms=3, max_deg=2):
    """A nonzero random polynomial in the chart coordinates."""
    for _ in range(20):
        e = b.random_expr(rng, max_order=max_order, n_terms=n_terms,
                          max_deg=max_deg)
        if not e.is_zero:
            return e
    return b.y(1) + 1


def random_lagrangian(b, rng, max_order=2):
    return wedge(Form.scalar(b, random_poly(b, rng, max_order)), ds(b))


def random_vertical(b, rng, max_deg=2):
    """A vertical field with polynomial components in (x, y)."""
    eta = {}
    for s in range(1, b.m + 1):
        eta[s] = b.random_expr(rng, max_order=0, n_terms=2, max_deg=max_deg)
    return VectorField(b, eta=eta)


def random_projectable(b, rng):
    """A projectable field: base components polynomial in x only."""
    gens = [("x", i) for i in range(1, b.n + 1)]
    xi = {}
    for i in range(1, b.n + 1):
        e = Expr()
        for _ in range(2):
            t = Expr.const(Fraction(rng.randint(-3, 3), rng.randint(1, 2)))
            for _ in range(rng.randint(0, 1)):
                t = t * Expr.gen(gens[rng.randrange(len(gens))])
            e = e + t
        xi[i] = e
    return VectorField(b, xi=xi, eta=random_vertical(b, rng).eta)


def random_contact_form(b, rng, k, max_order=2, n_terms=3):
    """A random (n+k)-form with nontrivial k-contact part (plus noise terms
    of other contact degrees so the projections matter)."""
    jets = b.jet_coords(max_order)
    out = Form.zero(b)
    for _ in range(n_terms):
        c = Form.scalar(b, random_poly(b, rng, max_order, n_terms=2))
        oms = [Form.omega(b, *jets[rng.randrange(len(jets))])
               for _ in range(k)]
        out = out + wedge_all(c, *oms, ds(b))
    # noise: a (k+1)-contact, (n-1)-horizontal term
    if b.n >= 1:
        c = Form.scalar(b, random_poly(b, rng, max_order, n_terms=1))
        oms = [Form.omega(b, *jets[rng.randrange(len(jets))])
               for _ in range(k + 1)]
        out = out + wedge_all(c, *oms, ds_i(b, rng.randint(1, b.n)))
    return out


def assert_zero_form(rho, msg=""):
    assert rho.is_zero, f"{msg}: nonzero residual {rho!r}"


def assert_zero_expr(e, msg=""):
    assert e.is_zero, f"{msg}: nonzero residual {ex.render_plain(e)}"


@pytest.fixture
def rng():
    return random.Random(20260825)
