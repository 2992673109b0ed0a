from fractions import Fraction
from itertools import product

import pytest

from varseq import expr as ex
from varseq.expr import Expr
from varseq.gauge import (GaugeTheory, LieAlgebraData, MetricSpec,
                          validate_algebra)


def maxwell(mostly_minus=True):
    return GaugeTheory(LieAlgebraData.abelian(1),
                       MetricSpec.minkowski(4, mostly_minus), r_max=8)


def su2(mostly_minus=True):
    return GaugeTheory(LieAlgebraData.su2(),
                       MetricSpec.minkowski(4, mostly_minus), r_max=8)


def test_su2_structure_constants():
    eps = LieAlgebraData.su2().structure_constants
    assert eps[(1, 2, 3)] == 1
    assert eps[(2, 1, 3)] == -1
    assert eps[(3, 1, 2)] == 1
    assert len(eps) == 6


def test_validate_algebra():
    ok = validate_algebra(LieAlgebraData.su2())
    assert not ok["antisymmetry"] and not ok["jacobi"]
    bad = LieAlgebraData(2, {(1, 1, 2): Fraction(1)})
    rep = validate_algebra(bad)
    assert rep["antisymmetry"]


def test_metric_signatures():
    assert MetricSpec.minkowski(4).diag == (1, -1, -1, -1)
    assert MetricSpec.minkowski(4, mostly_minus=False).diag == (-1, 1, 1, 1)


def test_field_strength_antisymmetric():
    gt = su2()
    for A in gt.alg_range:
        for mu, nu in product(gt.base_range, repeat=2):
            assert gt.field_strength(A, mu, nu) \
                == -gt.field_strength(A, nu, mu)


def test_lagrangian_size():
    # frozen monomial counts of the expanded densities
    from varseq.variational import lagrangian_density
    assert len(lagrangian_density(maxwell().lagrangian()).terms) == 18
    assert len(lagrangian_density(su2().lagrangian()).terms) == 180


@pytest.mark.parametrize("mostly_minus", [True, False])
def test_maxwell_field_equations_closed_form(mostly_minus):
    # E^nu = eta^{alpha mu} eta^{beta nu} (w_{beta,alpha mu} - w_{alpha,beta mu})
    gt = maxwell(mostly_minus)
    for nu in gt.base_range:
        expect = Expr()
        for a, b_, mu in product(gt.base_range, repeat=3):
            coeff = gt.eta(a, mu) * gt.eta(b_, nu)
            if not coeff.is_zero:
                expect = expect + coeff * (gt.w(1, b_, (a, mu))
                                           - gt.w(1, a, (b_, mu)))
        assert gt.el_coeff(nu, 1) == expect


@pytest.mark.parametrize("mostly_minus", [True, False])
def test_maxwell_jacobi_closed_form(mostly_minus):
    gt = maxwell(mostly_minus)
    for nu in gt.base_range:
        assert gt.jacobi_raw_coeff(nu, 1) == gt.jacobi_maxwell_coeff(nu)


def test_ym_field_equations_closed_form():
    gt = su2()
    for nu in gt.base_range:
        for B in gt.alg_range:
            assert gt.el_coeff(nu, B) == gt.el_display(nu, B)


def _three_term_sum(gt, nu, B, fam="Xi"):
    """The linearized field equations assembled from their three blocks:
    the zeroth-, first- and second-derivative contractions with the field."""
    R, G = gt.base_range, gt.alg_range
    t1 = Expr()
    for Z in G:
        for a in R:
            br = Expr()
            for A, C in product(G, repeat=2):
                for l, mu in product(R, repeat=2):
                    br = br + gt.delta(B, A) * gt.c(A, C, Z) \
                        * gt.w(C, l, (mu,)) * gt.eta(l, mu) * gt.eta(a, nu)
            for A, D in product(G, repeat=2):
                for s, mu in product(R, repeat=2):
                    br = br + gt.delta(B, A) * gt.c(A, Z, D) \
                        * gt.w(D, s, (mu,)) * gt.eta(a, mu) * gt.eta(s, nu)
            for A, C, D, F in product(G, repeat=4):
                for s, mu in product(R, repeat=2):
                    br = br + gt.eta(a, mu) * gt.eta(s, nu) \
                        * gt.c(D, Z, F) * gt.w(F, s) * gt.c(A, B, C) \
                        * gt.w(C, mu) * gt.delta(D, A)
            for A, C, D, E in product(G, repeat=4):
                for l, mu in product(R, repeat=2):
                    br = br + gt.eta(l, mu) * gt.eta(a, nu) \
                        * gt.c(D, E, Z) * gt.w(E, l) * gt.c(A, B, C) \
                        * gt.w(C, mu) * gt.delta(D, A)
            for A, D in product(G, repeat=2):
                for l, s in product(R, repeat=2):
                    br = br + gt.eta(l, a) * gt.eta(s, nu) \
                        * gt.field_strength(D, l, s) * gt.c(A, B, Z) \
                        * gt.delta(D, A)
            t1 = t1 + gt.xi(fam, Z, a) * br

    t2 = Expr()
    for Z in G:
        for a, b_ in product(R, repeat=2):
            br = Expr()
            for A, D in product(G, repeat=2):
                for s in R:
                    br = br + gt.delta(B, A) * gt.eta(a, b_) * gt.eta(s, nu) \
                        * gt.c(A, Z, D) * gt.w(D, s)
            for A, C in product(G, repeat=2):
                for l in R:
                    br = br + gt.delta(B, A) * gt.eta(l, b_) * gt.eta(a, nu) \
                        * gt.c(A, C, Z) * gt.w(C, l)
            for A, C in product(G, repeat=2):
                for mu in R:
                    br = br + (gt.eta(b_, mu) * gt.eta(a, nu)
                               - gt.eta(a, mu) * gt.eta(b_, nu)) \
                        * gt.delta(Z, A) * gt.c(A, B, C) * gt.w(C, mu)
            t2 = t2 + gt.xi(fam, Z, a, (b_,)) * br

    t3 = Expr()
    for Z in G:
        dBZ = gt.delta(B, Z)
        if dBZ.is_zero:
            continue
        for s, k, t in product(R, repeat=3):
            t3 = t3 + dBZ * gt.eta(s, nu) * gt.eta(k, t) \
                * (gt.xi(fam, Z, s, (t, k)) - gt.xi(fam, Z, t, (s, k)))
    return t1 + t2 + t3


def test_ym_jacobi_three_blocks_sum_to_raw():
    gt = su2()
    for (nu, B) in [(1, 1), (2, 3), (4, 2)]:
        assert gt.jacobi_raw_coeff(nu, B) == _three_term_sum(gt, nu, B)


def test_ym_covariant_jacobi_reduces_to_raw():
    gt = su2()
    for (nu, B) in [(1, 1), (3, 2)]:
        assert gt.covariant_matches_raw(nu, B)


@pytest.mark.parametrize("mostly_minus", [True, False])
def test_two_field_current_matches_closed_form(mostly_minus):
    gt = su2(mostly_minus)
    assert gt.jacobi_current() == gt.jacobi_current_display()


def test_two_field_current_vanishes_on_the_diagonal():
    gt = su2()
    assert gt.jacobi_current("Xi", "Xi").is_zero


def test_abelian_covariant_derivative_is_plain():
    gt = maxwell()
    assert gt.nabla_xi("Xi", 1, 2, 3) == gt.xi("Xi", 1, 3, (2,))
