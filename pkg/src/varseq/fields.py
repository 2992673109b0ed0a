"""Projectable vector fields, jet prolongation, contractions, Lie derivatives."""

from __future__ import annotations

from . import expr as ex
from .expr import Expr
from .forms import Form, wedge
from .multiindex import all_multiindices, mi_append


class VectorField:
    """A projectable vector field xi^i d/dx^i + eta^sigma d/dy^sigma.

    Base components may depend on the base coordinates only; fibre
    components on base and fibre coordinates (plus opaque constants and
    unknown-function symbols).
    """

    def __init__(self, bundle, xi=None, eta=None):
        self.bundle = bundle
        self.xi = {i: self._coerce(xi.get(i) if xi else None)
                   for i in range(1, bundle.n + 1)}
        self.eta = {s: self._coerce(eta.get(s) if eta else None)
                    for s in range(1, bundle.m + 1)}
        for i, e in self.xi.items():
            if not e.depends_only_on({"x", "k", "u"}):
                raise ValueError("base components must not depend on fibre coordinates")
        for s, e in self.eta.items():
            if not e.depends_only_on({"x", "y", "k", "u"}, max_jet=0):
                raise ValueError("fibre components may depend on (x, y) only")

    @staticmethod
    def _coerce(e):
        if e is None:
            return Expr()
        if not isinstance(e, Expr):
            return Expr.const(e)
        return e

    @property
    def is_vertical(self) -> bool:
        return all(e.is_zero for e in self.xi.values())

    def __repr__(self):
        parts = [f"{ex.render_plain(e)}*d/dx{i}" for i, e in self.xi.items() if not e.is_zero]
        parts += [f"{ex.render_plain(e)}*d/dy{s}" for s, e in self.eta.items() if not e.is_zero]
        return "VectorField(" + (" + ".join(parts) or "0") + ")"


class ProlongedField:
    """A vector field on a jet chart:
    xi^i d/dx^i + sum_{|J| <= k} comp[s, J] d/dy^s_J."""

    def __init__(self, bundle, order, xi, comp):
        self.bundle = bundle
        self.order = order
        self.xi = xi          # dict i -> Expr
        self.comp = comp      # dict (sigma, J) -> Expr

    def component(self, sigma, J=()):
        return self.comp.get((sigma, tuple(sorted(J))), Expr())

    def pairing(self, sigma, I):
        """Value of the contact form omega^sigma_I on this field."""
        v = self.component(sigma, I)
        for i in range(1, self.bundle.n + 1):
            xi_i = self.xi.get(i, Expr())
            if not xi_i.is_zero:
                v = v - ex.y(sigma, mi_append(I, i)) * xi_i
        return v

    def apply(self, e: Expr) -> Expr:
        """Act as a derivation on a scalar expression."""
        out = Expr()
        for g in e.free_gens():
            if g[0] == "x":
                v = self.xi.get(g[1], Expr())
            elif g[0] == "y":
                v = self.component(g[1], g[2])
            else:
                continue
            if not v.is_zero:
                out = out + v * ex.partial(e, g)
        return out


def prolong(Xi: VectorField, k: int) -> ProlongedField:
    """Order-k prolongation via the recurrence
    Xi^s_{Jt} = d_t Xi^s_J - y^s_{Ji} * (partial xi^i / partial x^t)."""
    b = Xi.bundle
    if k > b.r_max:
        raise ex.OrderOverflowError(k)
    comp = {}
    for s in range(1, b.m + 1):
        comp[(s, ())] = Xi.eta[s]
    for J in all_multiindices(b.n, k):
        if not J:
            continue
        t, head = J[-1], J[:-1]
        for s in range(1, b.m + 1):
            v = ex.total_derivative(comp[(s, head)], t, b.r_max)
            for i in range(1, b.n + 1):
                dxi = ex.partial(Xi.xi[i], ("x", t))
                if not dxi.is_zero:
                    v = v - ex.y(s, mi_append(head, i)) * dxi
            comp[(s, J)] = v
    return ProlongedField(b, k, dict(Xi.xi), comp)


def horizontal_part(Xi: VectorField, k: int) -> ProlongedField:
    """xi^i d_i truncated at order k (annihilates every contact form)."""
    b = Xi.bundle
    comp = {}
    for J in all_multiindices(b.n, k):
        for s in range(1, b.m + 1):
            v = Expr()
            for i in range(1, b.n + 1):
                if not Xi.xi[i].is_zero:
                    v = v + ex.y(s, mi_append(J, i)) * Xi.xi[i]
            comp[(s, J)] = v
    return ProlongedField(b, k, dict(Xi.xi), comp)


def vertical_part(Xi: VectorField, k: int) -> ProlongedField:
    """The evolutionary part: components Xi^s_J - y^s_{Ji} xi^i."""
    b = Xi.bundle
    pr = prolong(Xi, k)
    comp = {}
    for (s, J), v in pr.comp.items():
        for i in range(1, b.n + 1):
            if not Xi.xi[i].is_zero:
                v = v - ex.y(s, mi_append(J, i)) * Xi.xi[i]
        comp[(s, J)] = v
    return ProlongedField(b, k, {i: Expr() for i in range(1, b.n + 1)}, comp)


def split_HV(Xi: VectorField, k: int):
    return horizontal_part(Xi, k), vertical_part(Xi, k)


def interior_product(Phi: ProlongedField, rho: Form) -> Form:
    """Contraction of a form with a prolonged field (degree -1 antiderivation)."""
    b = rho.bundle
    d: dict = {}

    def acc(key, v):
        w = d.get(key, Expr()) + v
        if w.is_zero:
            d.pop(key, None)
        else:
            d[key] = w

    for (dxs, oms), c in rho.terms.items():
        for pos, i in enumerate(dxs):
            xi_i = Phi.xi.get(i, Expr())
            if xi_i.is_zero:
                continue
            sign = -1 if pos % 2 else 1
            acc((dxs[:pos] + dxs[pos + 1:], oms), c * xi_i * sign)
        for pos, (s, I) in enumerate(oms):
            v = Phi.pairing(s, I)
            if v.is_zero:
                continue
            sign = -1 if (len(dxs) + pos) % 2 else 1
            acc((dxs, oms[:pos] + oms[pos + 1:]), c * v * sign)
    return Form(b, d)


def lie_derivative(Xi: VectorField, rho: Form) -> Form:
    """Lie derivative along the prolongation of Xi, by the Cartan formula."""
    from .forms import exterior_derivative

    k = rho.jet_order() + 1
    Phi = prolong(Xi, k)
    return (interior_product(Phi, exterior_derivative(rho))
            + exterior_derivative(interior_product(Phi, rho)))


def lie_bracket(X1: VectorField, X2: VectorField) -> VectorField:
    b = X1.bundle

    def act(X, e):
        out = Expr()
        for g in e.free_gens():
            if g[0] == "x":
                v = X.xi[g[1]]
            elif g[0] == "y" and g[2] == ():
                v = X.eta[g[1]]
            else:
                continue
            out = out + v * ex.partial(e, g)
        return out

    xi = {i: act(X1, X2.xi[i]) - act(X2, X1.xi[i]) for i in range(1, b.n + 1)}
    eta = {s: act(X1, X2.eta[s]) - act(X2, X1.eta[s]) for s in range(1, b.m + 1)}
    return VectorField(b, xi, eta)
