"""Differential forms in the contact basis {dx^i, omega^sigma_I}.

A Form is a finite sum of terms

    coefficient * dx^{i_1} ^ ... ^ dx^{i_p} ^ omega^{s_1}_{I_1} ^ ... ^ omega^{s_k}_{I_k}

with Expr coefficients.  Basis factors are kept in a fixed canonical order
(all dx factors first, ascending; then omega factors ascending by fibre
index and multi-index) with the sign absorbed into the coefficient, so a
form has one normal form and equality is term-by-term.

The holonomic dy basis never appears in stored terms; exterior_derivative
expands dy^sigma_I = omega^sigma_I + y^sigma_{Ii} dx^i on the fly.
"""

from __future__ import annotations

from fractions import Fraction

from . import expr as ex
from .expr import Expr


def omega_key(om):
    s, I = om
    return (s, len(I), I)


def _merge_factors(f1, f2, keyfn):
    """Merge two sorted factor tuples; (sign, merged) or (0, None) on repeat."""
    out = []
    sign = 1
    i = j = 0
    while i < len(f1) and j < len(f2):
        k1, k2 = keyfn(f1[i]), keyfn(f2[j])
        if k1 == k2:
            return 0, None
        if k1 < k2:
            out.append(f1[i])
            i += 1
        else:
            # f2[j] jumps over the remaining factors of f1
            if (len(f1) - i) % 2:
                sign = -sign
            out.append(f2[j])
            j += 1
    out.extend(f1[i:])
    out.extend(f2[j:])
    return sign, tuple(out)


class Form:
    """Exterior form over a fixed bundle chart, stored in contact basis."""

    __slots__ = ("bundle", "terms")

    def __init__(self, bundle, terms: dict | None = None):
        self.bundle = bundle
        self.terms = terms or {}

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(bundle) -> "Form":
        return Form(bundle)

    @staticmethod
    def scalar(bundle, e) -> "Form":
        if not isinstance(e, Expr):
            e = Expr.const(e)
        return Form(bundle, {((), ()): e} if not e.is_zero else {})

    @staticmethod
    def dx(bundle, i: int) -> "Form":
        return Form(bundle, {((i,), ()): Expr.const(1)})

    @staticmethod
    def omega(bundle, sigma: int, I=()) -> "Form":
        I = tuple(sorted(I))
        return Form(bundle, {((), ((sigma, I),)): Expr.const(1)})

    @staticmethod
    def from_terms(bundle, items) -> "Form":
        """items: iterable of (dx_tuple, om_tuple, Expr); keys must be canonical."""
        d: dict = {}
        for dxs, oms, c in items:
            key = (tuple(dxs), tuple(oms))
            v = d.get(key, Expr()) + c
            if v.is_zero:
                d.pop(key, None)
            else:
                d[key] = v
        return Form(bundle, d)

    # -- basic structure ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {len(k[0]) + len(k[1]) for k in self.terms}

    def degree(self) -> int:
        degs = self.degrees()
        if not degs:
            return 0
        if len(degs) > 1:
            raise ValueError("form is not homogeneous")
        return degs.pop()

    def contact_degrees(self) -> set:
        return {len(k[1]) for k in self.terms}

    def jet_order(self) -> int:
        r = 0
        for (dxs, oms), c in self.terms.items():
            r = max(r, c.jet_order())
            for (_, I) in oms:
                r = max(r, len(I))
        return r

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        return f"Form({render_form_plain(self)})"

    # -- linear operations -------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        d = dict(self.terms)
        for k, c in other.terms.items():
            v = d.get(k, Expr()) + c
            if v.is_zero:
                d.pop(k, None)
            else:
                d[k] = v
        return Form(self.bundle, d)

    def __neg__(self):
        return Form(self.bundle, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def __mul__(self, e):
        """Multiplication by a scalar (Expr or rational)."""
        if not isinstance(e, Expr):
            e = Expr.const(e)
        d: dict = {}
        for k, c in self.terms.items():
            v = c * e
            if not v.is_zero:
                d[k] = v
        return Form(self.bundle, d)

    __rmul__ = __mul__

    def map_coeffs(self, f) -> "Form":
        d: dict = {}
        for k, c in self.terms.items():
            v = f(c)
            if not v.is_zero:
                d[k] = v
        return Form(self.bundle, d)

    def substitute(self, mapping: dict) -> "Form":
        return self.map_coeffs(lambda c: c.substitute(mapping))


def wedge(a: Form, b: Form) -> Form:
    d: dict = {}
    for (dx1, om1), c1 in a.terms.items():
        for (dx2, om2), c2 in b.terms.items():
            # dx2 crosses om1; then merge the dx and omega blocks separately
            sign = -1 if (len(om1) * len(dx2)) % 2 else 1
            s1, dxs = _merge_factors(dx1, dx2, lambda i: i)
            if s1 == 0:
                continue
            s2, oms = _merge_factors(om1, om2, omega_key)
            if s2 == 0:
                continue
            key = (dxs, oms)
            v = d.get(key, Expr()) + c1 * c2 * (sign * s1 * s2)
            if v.is_zero:
                d.pop(key, None)
            else:
                d[key] = v
    return Form(a.bundle, d)


def wedge_all(*forms: Form) -> Form:
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def ds(bundle) -> Form:
    """The base volume element dx^1 ^ ... ^ dx^n."""
    return Form(bundle, {(tuple(range(1, bundle.n + 1)), ()): Expr.const(1)})


def ds_i(bundle, i: int) -> Form:
    """Contraction of the volume element with the i-th coordinate direction."""
    dxs = tuple(j for j in range(1, bundle.n + 1) if j != i)
    sign = 1 if (i - 1) % 2 == 0 else -1
    return Form(bundle, {(dxs, ()): Expr.const(sign)})


def _coeff_differential(bundle, c: Expr) -> Form:
    """d of a scalar, in the contact basis:
    dc = (d_i c) dx^i + (partial c / partial y^sigma_I) omega^sigma_I."""
    out: dict = {}
    for i in range(1, bundle.n + 1):
        v = ex.total_derivative(c, i, bundle.r_max)
        if not v.is_zero:
            out[((i,), ())] = v
    for g in c.free_gens():
        if g[0] == "y":
            v = ex.partial(c, g)
            if not v.is_zero:
                out[((), ((g[1], g[2]),))] = v
    return Form(bundle, out)


def exterior_derivative(rho: Form) -> Form:
    b = rho.bundle
    out = Form.zero(b)
    for (dxs, oms), c in rho.terms.items():
        basis = Form(b, {(dxs, oms): Expr.const(1)})
        out = out + wedge(_coeff_differential(b, c), basis)
        # d omega^s_I = dx^i ^ omega^s_{Ii}; d dx^i = 0
        for pos, (s, I) in enumerate(oms):
            if len(I) + 1 > b.r_max:
                raise ex.OrderOverflowError(len(I) + 1)
            sign = Expr.const(-1 if (len(dxs) + pos) % 2 else 1) * c
            rest = Form(b, {(dxs, oms[:pos] + oms[pos + 1:]): sign})
            for i in range(1, b.n + 1):
                dfac = wedge(Form.dx(b, i),
                             Form.omega(b, s, I + (i,)))
                # insert the two new factors where the old omega stood
                out = out + wedge(dfac, rest) * 1
    return out


def form_total_derivative(rho: Form, i: int) -> Form:
    """The formal derivative d_i acting on a contact-basis form:
    derives coefficients and shifts omega indices; dx factors are inert."""
    b = rho.bundle
    d: dict = {}

    def acc(key, v):
        w = d.get(key, Expr()) + v
        if w.is_zero:
            d.pop(key, None)
        else:
            d[key] = w

    for (dxs, oms), c in rho.terms.items():
        acc((dxs, oms), ex.total_derivative(c, i, b.r_max))
        for pos, (s, I) in enumerate(oms):
            if len(I) + 1 > b.r_max:
                raise ex.OrderOverflowError(len(I) + 1)
            new_om = (s, tuple(sorted(I + (i,))))
            rest = oms[:pos] + oms[pos + 1:]
            sign, merged = _merge_factors(rest, (new_om,), omega_key)
            if sign == 0:
                continue
            # the merge assumes the new factor starts at the end of the
            # tuple; it actually starts at position pos
            if (len(rest) - pos) % 2:
                sign = -sign
            acc((dxs, merged), c * sign)
    return Form(b, d)


def form_d_multi(rho: Form, I) -> Form:
    for i in I:
        rho = form_total_derivative(rho, i)
    return rho


def contact_part(rho: Form, k: int) -> Form:
    return Form(rho.bundle,
                {key: c for key, c in rho.terms.items() if len(key[1]) == k})


def contact_split(rho: Form) -> list:
    """[p_0 rho, p_1 rho, ..., p_q rho]; entries sum back to rho."""
    q = max(rho.degrees(), default=0)
    return [contact_part(rho, k) for k in range(q + 1)]


def horizontalize(rho: Form) -> Form:
    return contact_part(rho, 0)


def horizontal_differential(rho: Form) -> Form:
    """d_H: the dx-raising part of d in the contact basis."""
    b = rho.bundle
    out = Form.zero(b)
    for (dxs, oms), c in rho.terms.items():
        basis = Form(b, {(dxs, oms): Expr.const(1)})
        for i in range(1, b.n + 1):
            v = ex.total_derivative(c, i, b.r_max)
            if not v.is_zero:
                out = out + wedge(Form(b, {((i,), ()): v}), basis)
        for pos, (s, I) in enumerate(oms):
            if len(I) + 1 > b.r_max:
                raise ex.OrderOverflowError(len(I) + 1)
            sign = Expr.const(-1 if (len(dxs) + pos) % 2 else 1) * c
            rest = Form(b, {(dxs, oms[:pos] + oms[pos + 1:]): sign})
            for i in range(1, b.n + 1):
                out = out + wedge(wedge(Form.dx(b, i),
                                        Form.omega(b, s, I + (i,))), rest)
    return out


def vertical_differential(rho: Form) -> Form:
    """d_V: the contact-raising part of d in the contact basis."""
    b = rho.bundle
    out = Form.zero(b)
    for (dxs, oms), c in rho.terms.items():
        basis = Form(b, {(dxs, oms): Expr.const(1)})
        for g in c.free_gens():
            if g[0] == "y":
                v = ex.partial(c, g)
                if not v.is_zero:
                    out = out + wedge(Form(b, {((), ((g[1], g[2]),)): v}), basis)
    return out


# -- rendering -------------------------------------------------------------

def _factor_plain(f, is_dx):
    if is_dx:
        return f"dx{f}"
    s, I = f
    return f"w{s}" + ("_" + "".join(map(str, I)) if I else "")


def render_form_plain(rho: Form) -> str:
    if rho.is_zero:
        return "0"
    parts = []
    for (dxs, oms), c in sorted(rho.terms.items()):
        factors = [_factor_plain(i, True) for i in dxs]
        factors += [_factor_plain(om, False) for om in oms]
        cs = ex.render_plain(c)
        if "+" in cs or "- " in cs.strip()[1:]:
            cs = f"({cs})"
        parts.append(("^".join(factors) and cs + "*" + "^".join(factors)) or cs)
    return " + ".join(parts)
