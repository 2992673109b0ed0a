"""Exact finite-order variational calculus in fixed jet-bundle coordinates.

The package computes Euler-Lagrange forms, Helmholtz expressions, Lepage
equivalents, Noether currents, variation decompositions of any order, and
Jacobi (linearized) equations for polynomial Lagrangians, all over exact
rational arithmetic.  A small expression DSL and the ``varseq`` command-line
tool expose the same operations on TOML problem files.
"""

from .multiindex import (all_multiindices, mi, mi_append, mi_concat,
                         mi_sym_factor, mi_weight)
from .expr import (Expr, MissingAssignmentError, OrderOverflowError, d_multi,
                   equal, eval_numeric, normalize, partial, total_derivative,
                   ufunc)
from .bundle import Bundle, ConstantFamily
from .forms import (Form, contact_part, contact_split, ds, ds_i,
                    exterior_derivative, form_d_multi, form_total_derivative,
                    horizontal_differential, horizontalize,
                    vertical_differential, wedge, wedge_all)
from .fields import (ProlongedField, VectorField, horizontal_part,
                     interior_product, lie_bracket, lie_derivative, prolong,
                     split_HV, vertical_part)
from .variational import (SourceForm, VariationDecomposition, contract_source,
                          euler_lagrange, extract_E_linear,
                          extract_E_linear_form, first_variation, helmholtz,
                          hessian_density, higher_variation, identity_suite,
                          interior_euler, is_zero_onshell, jacobi_morphism,
                          jacobi_onshell, lagrangian_density, momentum,
                          nabla_pair, noether_current, principal_lepage,
                          residual, second_variation)
from .gauge import GaugeTheory, LieAlgebraData, MetricSpec, validate_algebra
from .dsl import (ParseError, expr_from_json, expr_to_json, parse_expr,
                  render_expr, render_form)

__version__ = "0.1.0"
