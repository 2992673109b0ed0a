"""Command-line interface.

Problems are TOML files describing one fibered chart, an optional set of
indexed constants and function symbols, a Lagrangian density in the
expression DSL, and named vector fields:

    [bundle]
    n = 1
    m = 1
    order = 8            # maximum jet order (default 8)
    base = ["t"]         # optional coordinate names
    fibre = ["q"]

    [constants.eta]
    arity = 2
    sym = [[1, 2]]       # 1-based index positions
    values = [[1, 1, "1"], [2, 2, "-1"]]   # omit for an opaque symbol

    [functions.f]
    arity = 2            # f[i,j] with formal total derivatives

    [lagrangian]
    density = "1/2*q_1^2"

    [fields.V]
    xi = ["0"]           # n entries, may be omitted (vertical field)
    eta = ["1"]          # m entries

    [ym]                 # used by the `ym` subcommand only
    algebra = "su2"      # or "abelian"
    dim = 3              # algebra dimension (abelian only; su2 fixes 3)
    n = 4
    signature = "mostly-minus"   # or "mostly-plus"

Exit status: 0 on success, 1 on a derivation error, 2 on a problem-file or
expression parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import expr as ex
from .bundle import Bundle, ConstantFamily
from .dsl import ParseError, parse_expr, render_expr, render_form
from .fields import VectorField, lie_bracket
from .forms import exterior_derivative, horizontalize
from .gauge import GaugeTheory, LieAlgebraData, MetricSpec, validate_algebra
from .variational import (euler_lagrange, helmholtz, higher_variation,
                          interior_euler, jacobi_morphism, lagrangian_density,
                          momentum, noether_current, principal_lepage,
                          residual)


class ProblemError(Exception):
    """A malformed problem file (reported with exit status 2)."""


class Problem:
    def __init__(self, bundle, functions, lagrangian, fields, raw):
        self.bundle = bundle
        self.functions = functions
        self.lagrangian = lagrangian     # Form or None
        self.fields = fields             # name -> VectorField, insertion order
        self.raw = raw

    def field(self, name):
        if name not in self.fields:
            raise ProblemError(
                f"field {name!r} is not declared; available: "
                + (", ".join(self.fields) or "none"))
        return self.fields[name]


def _require(table, key, where):
    if key not in table:
        raise ProblemError(f"missing key {key!r} in [{where}]")
    return table[key]


def load_problem(path: str) -> Problem:
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as err:
        raise ProblemError(f"cannot read {path}: {err}")
    except tomllib.TOMLDecodeError as err:
        raise ProblemError(f"invalid TOML in {path}: {err}")

    bsec = raw.get("bundle")
    if bsec is None and "ym" in raw:
        # pure gauge problem: the bundle is implied by the [ym] section
        gt = build_gauge(raw["ym"])
        bundle = gt.bundle
    elif bsec is None:
        raise ProblemError("missing [bundle] section")
    else:
        n = _require(bsec, "n", "bundle")
        m = _require(bsec, "m", "bundle")
        order = bsec.get("order", 8)
        try:
            bundle = Bundle(n, m, order,
                            base_names=bsec.get("base"),
                            fibre_names=bsec.get("fibre"))
        except ValueError as err:
            raise ProblemError(str(err))

    for name, sec in raw.get("constants", {}).items():
        arity = _require(sec, "arity", f"constants.{name}")
        syms = tuple(("sym", tuple(p - 1 for p in grp))
                     for grp in sec.get("sym", []))
        syms += tuple(("anti", tuple(p - 1 for p in grp))
                      for grp in sec.get("anti", []))
        values = None
        if "values" in sec:
            values = {}
            for row in sec["values"]:
                if len(row) != arity + 1:
                    raise ProblemError(
                        f"constants.{name}: each values row needs "
                        f"{arity} indices and a value")
                values[tuple(row[:-1])] = Fraction(str(row[-1]))
        try:
            bundle.add_family(ConstantFamily(name, arity, syms, values))
        except ValueError as err:
            raise ProblemError(str(err))

    functions = {}
    for name, sec in raw.get("functions", {}).items():
        functions[name] = _require(sec, "arity", f"functions.{name}")

    def parse(text, where):
        try:
            return parse_expr(text, bundle, functions)
        except ParseError as err:
            raise ProblemError(f"in {where}: {err}")

    lagrangian = None
    if "lagrangian" in raw:
        from .forms import Form, ds, wedge
        L = parse(_require(raw["lagrangian"], "density", "lagrangian"),
                  "lagrangian.density")
        lagrangian = wedge(Form.scalar(bundle, L), ds(bundle))

    fields = {}
    for name, sec in raw.get("fields", {}).items():
        xi_rows = sec.get("xi", ["0"] * bundle.n)
        eta_rows = sec.get("eta", ["0"] * bundle.m)
        if len(xi_rows) != bundle.n or len(eta_rows) != bundle.m:
            raise ProblemError(
                f"fields.{name}: xi needs {bundle.n} entries and eta "
                f"{bundle.m}")
        xi = {i + 1: parse(s, f"fields.{name}.xi[{i}]")
              for i, s in enumerate(xi_rows)}
        eta = {s + 1: parse(t, f"fields.{name}.eta[{s}]")
               for s, t in enumerate(eta_rows)}
        try:
            fields[name] = VectorField(bundle, xi, eta)
        except ValueError as err:
            raise ProblemError(f"fields.{name}: {err}")

    return Problem(bundle, functions, lagrangian, fields, raw)


def build_gauge(sec: dict) -> GaugeTheory:
    algebra = sec.get("algebra", "abelian")
    n = sec.get("n", 4)
    signature = sec.get("signature", "mostly-minus")
    if signature not in ("mostly-minus", "mostly-plus"):
        raise ProblemError("signature must be 'mostly-minus' or 'mostly-plus'")
    metric = MetricSpec.minkowski(n, mostly_minus=(signature == "mostly-minus"))
    if algebra == "abelian":
        alg = LieAlgebraData.abelian(sec.get("dim", 1))
    elif algebra == "su2":
        alg = LieAlgebraData.su2()
    else:
        raise ProblemError(f"unknown algebra {algebra!r}")
    bad = validate_algebra(alg)
    if bad["antisymmetry"] or bad["jacobi"]:
        raise ProblemError(f"inconsistent structure constants: {bad}")
    return GaugeTheory(alg, metric, r_max=sec.get("order", 8))


# -- output helpers --------------------------------------------------------

def emit_exprs(named, bundle, fmt):
    """Print a list of (label, Expr) pairs in the requested format."""
    if fmt == "json":
        payload = {"schema_version": 1,
                   "exprs": {label: render_expr(e, bundle, "plain")
                             for label, e in named}}
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for label, e in named:
            print(f"{label} = {render_expr(e, bundle, fmt)}")


def emit_form(label, rho, bundle, fmt):
    if fmt == "json":
        print(json.dumps({"schema_version": 1, "label": label,
                          "form": json.loads(render_form(rho, bundle, "json"))},
                         sort_keys=True, indent=2))
    else:
        print(f"{label} = {render_form(rho, bundle, fmt)}")


def _need_lagrangian(prob):
    if prob.lagrangian is None:
        raise ProblemError("this command needs a [lagrangian] section")
    return prob.lagrangian


def _fibre_label(bundle, s):
    return bundle.fibre_names[s - 1]


# -- subcommands -----------------------------------------------------------

def cmd_el(prob, args):
    sf = euler_lagrange(_need_lagrangian(prob))
    emit_exprs([(f"E[{_fibre_label(prob.bundle, s)}]", sf.coeff(s))
                for s in range(1, prob.bundle.m + 1)],
               prob.bundle, args.format)


def cmd_helmholtz(prob, args):
    sf = euler_lagrange(_need_lagrangian(prob))
    H = helmholtz(sf)
    if H.is_zero:
        emit_form("H", H.form, prob.bundle, args.format)
        print("locally variational: yes")
    else:
        emit_form("H", H.form, prob.bundle, args.format)
        print("locally variational: no")


def cmd_residual(prob, args):
    lam = _need_lagrangian(prob)
    emit_form("R[d lambda]", residual(exterior_derivative(lam)),
              prob.bundle, args.format)


def cmd_lepage(prob, args):
    emit_form("Theta", principal_lepage(_need_lagrangian(prob)),
              prob.bundle, args.format)


def cmd_momentum(prob, args):
    emit_form("p", momentum(_need_lagrangian(prob)), prob.bundle, args.format)


def cmd_noether(prob, args):
    if not args.field:
        raise ProblemError("noether requires --field NAME")
    cur = noether_current(_need_lagrangian(prob), prob.field(args.field[0]))
    emit_form(f"eps[{args.field[0]}]", cur, prob.bundle, args.format)


def _variation_fields(prob, args):
    if args.field:
        return [prob.field(f) for f in args.field], list(args.field)
    L = args.order or 1
    names = list(prob.fields)[:L]
    if len(names) < L:
        raise ProblemError(f"--order {L} needs {L} declared fields")
    return [prob.fields[f] for f in names], names


def cmd_variation(prob, args):
    lam = _need_lagrangian(prob)
    fields, names = _variation_fields(prob, args)
    dec = higher_variation(lam, fields)
    emit_form("total", dec.total, prob.bundle, args.format)
    emit_form("boundary_free", dec.boundary_free, prob.bundle, args.format)
    for i, dterm in enumerate(dec.divergences, 1):
        emit_form(f"divergence[{i}]", dterm, prob.bundle, args.format)
    print(f"order: {len(names)} ({', '.join(names)})")
    print(f"decomposition exact: {'yes' if dec.is_exact else 'no'}")
    if not dec.is_exact:
        raise ProblemError("variation decomposition failed to close")


def cmd_jacobi(prob, args):
    lam = _need_lagrangian(prob)
    if not args.field:
        raise ProblemError("jacobi requires --field NAME")
    Xi = prob.field(args.field[0])
    sf = jacobi_morphism(lam, Xi)
    emit_exprs([(f"J[{_fibre_label(prob.bundle, s)}]", sf.coeff(s))
                for s in range(1, prob.bundle.m + 1)],
               prob.bundle, args.format)


def cmd_ym(prob, args):
    sec = prob.raw.get("ym")
    if sec is None:
        raise ProblemError("this command needs a [ym] section")
    gt = build_gauge(sec)
    rows = [(f"E[{A},{nu}]", gt.el_coeff(nu, A))
            for A in gt.alg_range for nu in gt.base_range]
    emit_exprs(rows, gt.bundle, args.format)


def cmd_check(prob, args):
    lam = _need_lagrangian(prob)
    b = prob.bundle
    rng = random.Random(args.seed)
    failures = 0

    def report(name, ok):
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'}  {name}")
        if not ok:
            failures += 1

    def zero_expr(e):
        return ex.equal(e, ex.Expr(), rng=rng)

    def zero_form(rho):
        return all(zero_expr(c) for c in rho.terms.values())

    sf = euler_lagrange(lam)
    report("euler-lagrange source form computed", True)
    report("helmholtz of the field equations vanishes",
           zero_form(helmholtz(sf).form))

    theta = principal_lepage(lam)
    report("lepage equivalent projects back onto the lagrangian",
           zero_form(horizontalize(theta) - lam))
    from .forms import contact_part
    report("one-contact part of d(lepage) is the field equation form",
           zero_form(contact_part(exterior_derivative(theta), 1) - sf.form))

    dlam = exterior_derivative(lam)
    lhs = contact_part(dlam, 1)
    rhs = interior_euler(dlam).form + contact_part(
        exterior_derivative(contact_part(residual(dlam), 1)), 1)
    report("interior-euler decomposition of d lambda is exact",
           zero_form(lhs - rhs))

    for name, Xi in prob.fields.items():
        dec = higher_variation(lam, [Xi])
        report(f"first variation along {name} splits exactly",
               zero_form(dec.defect))

    vertical = [(n, X) for n, X in prob.fields.items() if X.is_vertical]
    from .variational import identity_suite
    for i, (n1, X1) in enumerate(vertical):
        for n2, X2 in vertical[i:]:
            rep = identity_suite(lam, X1, X2)
            for key, resid in rep.items():
                report(f"{key} [{n1}, {n2}]", zero_form(resid))

    if failures:
        raise DerivationFailure(f"{failures} check(s) failed")
    print("all checks passed")


class DerivationFailure(Exception):
    pass


COMMANDS = {
    "el": cmd_el,
    "helmholtz": cmd_helmholtz,
    "residual": cmd_residual,
    "lepage": cmd_lepage,
    "momentum": cmd_momentum,
    "noether": cmd_noether,
    "variation": cmd_variation,
    "jacobi": cmd_jacobi,
    "ym": cmd_ym,
    "check": cmd_check,
}


def build_parser():
    ap = argparse.ArgumentParser(
        prog="varseq",
        description="finite-order variational calculus on jet coordinates")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        p = sub.add_parser(name, help=fn.__doc__)
        p.add_argument("file", help="problem file (TOML)")
        p.add_argument("--field", action="append", default=[],
                       help="name of a declared vector field (repeatable)")
        p.add_argument("--order", type=int, default=None,
                       help="variation order (number of fields to apply)")
        p.add_argument("--format", choices=("plain", "latex", "json"),
                       default="plain")
        p.add_argument("--seed", type=int,
                       default=int(os.environ.get("VARSEQ_SEED", "0")),
                       help="seed for randomized cross-checks "
                            "(or VARSEQ_SEED)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        prob = load_problem(args.file)
        COMMANDS[args.command](prob, args)
    except (ProblemError, ParseError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (DerivationFailure, ex.OrderOverflowError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
