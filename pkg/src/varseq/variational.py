"""Variational operators on jet-bundle forms.

Implements the interior Euler operator (an intrinsic integration by parts
projecting onto source forms), its residual complement, Euler-Lagrange and
Helmholtz mappings, the principal Lepage equivalent, generalized momenta and
Noether currents, variation decompositions of arbitrary order, and the
Jacobi morphism with its adjointness identities.

All multi-index sums run over sorted representatives; where a classical
formula sums over unrestricted index tuples, the multinomial weight of the
sorted representative restores the count.
"""

from __future__ import annotations

from fractions import Fraction

from . import expr as ex
from .expr import Expr
from .forms import (Form, contact_part, contact_split, ds, ds_i,
                    exterior_derivative, form_d_multi, form_total_derivative,
                    horizontal_differential, horizontalize,
                    vertical_differential, wedge)
from .fields import (VectorField, ProlongedField, horizontal_part,
                     interior_product, lie_derivative, vertical_part)
from .multiindex import (all_multiindices, binom, mi_concat, mi_sym_factor,
                         mi_weight)


def basis_contract(rho: Form, sigma: int, I=()) -> Form:
    """Contraction with the coordinate vertical vector d/dy^sigma_I."""
    I = tuple(sorted(I))
    d: dict = {}
    for (dxs, oms), c in rho.terms.items():
        for pos, om in enumerate(oms):
            if om == (sigma, I):
                sign = -1 if (len(dxs) + pos) % 2 else 1
                key = (dxs, oms[:pos] + oms[pos + 1:])
                v = d.get(key, Expr()) + c * sign
                if v.is_zero:
                    d.pop(key, None)
                else:
                    d[key] = v
                break
    return Form(rho.bundle, d)


class SourceForm:
    """A k-contact (n+k)-form generated by undifferentiated omega^sigma
    factors, stored with its coefficient table."""

    def __init__(self, bundle, k: int, form: Form):
        self.bundle = bundle
        self.k = k
        self.form = form

    @staticmethod
    def from_coeffs(bundle, coeffs: dict) -> "SourceForm":
        """1-contact source form sum_sigma E_sigma omega^sigma ^ ds."""
        vol = ds(bundle)
        out = Form.zero(bundle)
        for s, E in coeffs.items():
            out = out + wedge(Form.omega(bundle, s) * E, vol)
        return SourceForm(bundle, 1, out)

    def coeff(self, sigma: int) -> Expr:
        """E_sigma for a 1-contact source form."""
        if self.k != 1:
            raise ValueError("coefficients per fibre index exist only for k = 1")
        fulldx = tuple(range(1, self.bundle.n + 1))
        c = self.form.terms.get((fulldx, ((sigma, ()),)), Expr())
        return c * ((-1) ** self.bundle.n)

    def coeffs(self) -> dict:
        return {s: self.coeff(s) for s in range(1, self.bundle.m + 1)}

    def kernel_table(self) -> dict:
        """For a 2-contact source form, the table A[(tau, J, sigma)] with
        form = sum A^J_{tau sigma} omega^tau_J ^ omega^sigma ^ ds; the
        zeroth-order block is returned antisymmetrized."""
        if self.k != 2:
            raise ValueError("kernel table exists only for k = 2")
        fulldx = tuple(range(1, self.bundle.n + 1))
        A: dict = {}

        def acc(key, v):
            w = A.get(key, Expr()) + v
            if w.is_zero:
                A.pop(key, None)
            else:
                A[key] = w

        for (dxs, oms), c in self.form.terms.items():
            if dxs != fulldx or len(oms) != 2:
                raise ValueError("not a canonical 2-contact source form term")
            (a, Ia), (b, Ib) = oms
            if Ia == () and Ib == ():
                acc((a, (), b), c / 2)
                acc((b, (), a), -c / 2)
            elif Ib == ():
                acc((a, Ia, b), c)
            elif Ia == ():
                acc((b, Ib, a), -c)
            else:
                raise ValueError("term lacks an undifferentiated contact factor")
        return A

    def __eq__(self, other):
        if not isinstance(other, SourceForm):
            return NotImplemented
        return self.form == other.form

    @property
    def is_zero(self):
        return self.form.is_zero

    def __repr__(self):
        return f"SourceForm(k={self.k}, {self.form!r})"


def interior_euler(rho: Form) -> SourceForm:
    """I(rho) = (1/k) omega^sigma ^ sum_I (-1)^|I| d_I(d/dy^sigma_I | p_k rho)."""
    b = rho.bundle
    if rho.is_zero:
        return SourceForm(b, 1, rho)
    k = rho.degree() - b.n
    if k <= 0:
        raise ValueError("input must be an (n+k)-form with k >= 1")
    p = contact_part(rho, k)
    r = max((len(I) for (_, oms) in p.terms for (_, I) in oms), default=0)
    out = Form.zero(b)
    for s in range(1, b.m + 1):
        acc = Form.zero(b)
        for I in all_multiindices(b.n, r):
            t = basis_contract(p, s, I)
            if t.is_zero:
                continue
            acc = acc + form_d_multi(t, I) * ((-1) ** len(I))
        out = out + wedge(Form.omega(b, s), acc)
    return SourceForm(b, k, out * Fraction(1, k))


def residual(rho: Form) -> Form:
    """The complement of the interior Euler operator:
    p_k rho = I(rho) + p_k d p_k R(rho), R built from weighted contractions."""
    b = rho.bundle
    if rho.is_zero:
        return rho
    k = rho.degree() - b.n
    if k <= 0:
        raise ValueError("input must be an (n+k)-form with k >= 1")
    p = contact_part(rho, k)
    r = max((len(I) for (_, oms) in p.terms for (_, I) in oms), default=0)
    if r == 0:
        return Form.zero(b)

    # per-tuple coefficient forms of p_k rho, normalized so that summing the
    # unrestricted index tuples reproduces the sorted-storage coefficients
    eta = {}
    for s in range(1, b.m + 1):
        for I in all_multiindices(b.n, r):
            if not I:
                continue
            t = basis_contract(p, s, I)
            if not t.is_zero:
                eta[(s, I)] = t * Fraction(1, k * mi_weight(I))

    zeta = {}
    for s in range(1, b.m + 1):
        for I in all_multiindices(b.n, r):
            if not I:
                continue
            acc = Form.zero(b)
            for J in all_multiindices(b.n, r - len(I)):
                e = eta.get((s, mi_concat(J, I)))
                if e is None:
                    continue
                coeff = mi_weight(J) * binom(len(I) + len(J), len(J)) * ((-1) ** len(J))
                acc = acc + form_d_multi(e, J) * coeff
            if not acc.is_zero:
                zeta[(s, I)] = acc

    # strip the volume factor: omega^s ^ zeta = chi ^ ds with chi pure contact
    fulldx = tuple(range(1, b.n + 1))
    strip_sign = (-1) ** (k * b.n)
    chi = {}
    for (s, I), z in zeta.items():
        w = wedge(Form.omega(b, s), z)
        for (dxs, oms), c in w.terms.items():
            if dxs != fulldx:
                raise ValueError("residual intermediate lost its volume factor")
            key = I
            cf = chi.setdefault(key, Form.zero(b))
            chi[key] = cf + Form(b, {((), oms): c * strip_sign})

    out = Form.zero(b)
    for j in range(1, b.n + 1):
        dsj = ds_i(b, j)
        for I in all_multiindices(b.n, r - 1):
            ch = chi.get(tuple(sorted(I + (j,))))
            if ch is None:
                continue
            out = out + wedge(form_d_multi(ch, I), dsj) * mi_weight(I)
    return out * ((-1) ** k)


def lagrangian_density(lam: Form) -> Expr:
    """The coefficient L of a horizontal n-form L ds."""
    b = lam.bundle
    if lam.contact_degrees() - {0}:
        raise ValueError("Lagrangian must be horizontal")
    fulldx = tuple(range(1, b.n + 1))
    for key in lam.terms:
        if key != (fulldx, ()):
            raise ValueError("Lagrangian must be an n-form L ds")
    return lam.terms.get((fulldx, ()), Expr())


def euler_lagrange(lam: Form) -> SourceForm:
    """E_sigma = sum_I (-1)^|I| d_I (partial L / partial y^sigma_I)."""
    b = lam.bundle
    L = lagrangian_density(lam)
    r = L.jet_order()
    coeffs = {}
    for s in range(1, b.m + 1):
        E = Expr()
        for I in all_multiindices(b.n, r):
            p = ex.partial(L, ("y", s, I))
            if not p.is_zero:
                E = E + ex.d_multi(p, I, b.r_max) * ((-1) ** len(I))
        coeffs[s] = E
    return SourceForm.from_coeffs(b, coeffs)


def helmholtz(eps: SourceForm) -> SourceForm:
    """I(d eps): vanishes exactly when eps is locally variational."""
    return interior_euler(exterior_derivative(eps.form))


def principal_lepage(lam: Form) -> Form:
    """The Lepage equivalent with h(Theta) = lam and p_1 d Theta = E_lam."""
    b = lam.bundle
    L = lagrangian_density(lam)
    r = L.jet_order()
    out = Form(b, dict(lam.terms))
    for s in range(1, b.m + 1):
        for K in all_multiindices(b.n, max(r - 1, 0)):
            wK = mi_weight(K)
            for i in range(1, b.n + 1):
                coeff = Expr()
                for P in all_multiindices(b.n, r - 1 - len(K)):
                    M = tuple(sorted(K + P + (i,)))
                    p = ex.partial(L, ("y", s, M))
                    if p.is_zero:
                        continue
                    coeff = coeff + ex.d_multi(p * mi_sym_factor(M), P, b.r_max) \
                        * (mi_weight(P) * ((-1) ** len(P)))
                if not coeff.is_zero:
                    out = out + wedge(Form.omega(b, s, K) * (coeff * wK),
                                      ds_i(b, i))
    return out


def momentum(lam: Form) -> Form:
    """Generalized momentum: -p_1 R(d lam), a 1-contact (n-1)-horizontal form."""
    return -contact_part(residual(exterior_derivative(lam)), 1)


def _vertical_order_for(rho: Form) -> int:
    return max((len(I) for (_, oms) in rho.terms for (_, I) in oms), default=0)


def noether_current(lam: Form, Xi: VectorField) -> Form:
    """epsilon_Xi(lam) = J Xi_V | p_{d_V lam} + Xi_H | lam."""
    p = momentum(lam)
    kv = _vertical_order_for(p)
    cur = interior_product(vertical_part(Xi, kv), p)
    if not Xi.is_vertical:
        cur = cur + interior_product(horizontal_part(Xi, 0), lam)
    return cur


class VariationDecomposition:
    """total = boundary_free + sum(divergences), exactly."""

    def __init__(self, total: Form, boundary_free: Form, divergences: list):
        self.total = total
        self.boundary_free = boundary_free
        self.divergences = list(divergences)

    @property
    def defect(self) -> Form:
        acc = self.total - self.boundary_free
        for dterm in self.divergences:
            acc = acc - dterm
        return acc

    @property
    def is_exact(self) -> bool:
        return self.defect.is_zero


def contract_source(Xi: VectorField, sf: SourceForm) -> Form:
    """Xi_V | sf for a source form (prolonged to the needed jet order)."""
    kv = _vertical_order_for(sf.form)
    return interior_product(vertical_part(Xi, kv), sf.form)


def first_variation(lam: Form, Xi: VectorField) -> VariationDecomposition:
    total = horizontalize(lie_derivative(Xi, lam))
    bf = contract_source(Xi, euler_lagrange(lam))
    div = horizontal_differential(noether_current(lam, Xi))
    return VariationDecomposition(total, bf, [div])


def higher_variation(lam: Form, fields: list) -> VariationDecomposition:
    """Iterated variation of the Lagrangian by the given projectable fields.

    At each step the boundary-free piece is varied again through the
    Euler-Lagrange contraction while every piece contributes the divergence
    of its Noether current, so l fields produce l+1 pieces."""
    total = lam
    pieces = [lam]
    for Xi in fields:
        total = horizontalize(lie_derivative(Xi, total))
        new_pieces = [contract_source(Xi, euler_lagrange(pieces[0]))]
        new_pieces += [horizontal_differential(noether_current(q, Xi))
                       for q in pieces]
        pieces = new_pieces
    return VariationDecomposition(total, pieces[0], pieces[1:])


def second_variation(lam: Form, Xi1: VectorField, Xi2: VectorField):
    return higher_variation(lam, [Xi1, Xi2])


def jacobi_morphism(lam: Form, Xi: VectorField) -> SourceForm:
    """E_n(Xi | E_n(lam)) for a vertical field."""
    if not Xi.is_vertical:
        raise ValueError("Jacobi morphism requires a vertical field")
    deformed = contract_source(Xi, euler_lagrange(lam))
    return euler_lagrange(deformed)


def jacobi_onshell(lam: Form, Xi: VectorField):
    """The two coordinate expressions of the Jacobi source form.

    Returns (adjoint_form, direct_form): the first has coefficients
    sum_J (-1)^|J| d_J(Xi^rho * dE_rho/dy^sigma_J) on omega^sigma, the
    second sum_J d_J Xi^sigma * dE_rho/dy^sigma_J on omega^rho.  They are
    equal by the self-adjointness of the linearized operator."""
    if not Xi.is_vertical:
        raise ValueError("requires a vertical field")
    for s, e in Xi.eta.items():
        if not e.depends_only_on({"x", "y", "k", "u"}, max_jet=0):
            raise ValueError("components must depend on (x, y) only")
    b = lam.bundle
    E = euler_lagrange(lam).coeffs()
    rE = max((e.jet_order() for e in E.values()), default=0)

    adjoint = {}
    for s in range(1, b.m + 1):
        v = Expr()
        for rho in range(1, b.m + 1):
            for J in all_multiindices(b.n, rE):
                p = ex.partial(E[rho], ("y", s, J))
                if p.is_zero:
                    continue
                v = v + ex.d_multi(Xi.eta[rho] * p, J, None) * ((-1) ** len(J))
        adjoint[s] = v

    direct = {}
    for rho in range(1, b.m + 1):
        v = Expr()
        for s in range(1, b.m + 1):
            for J in all_multiindices(b.n, rE):
                p = ex.partial(E[rho], ("y", s, J))
                if p.is_zero:
                    continue
                v = v + ex.d_multi(Xi.eta[s], J, None) * p
        direct[rho] = v

    return (SourceForm.from_coeffs(b, adjoint),
            SourceForm.from_coeffs(b, direct))


def nabla_pair(omega2: SourceForm):
    """The pair of formal differential operators attached to a 2-contact
    source form with kernel A^J_{tau sigma}:

        nabla(Xi)_sigma  = sum A^J_{tau sigma} d_J Xi^tau
        nabla*(Xi)_tau   = sum (-1)^|J| d_J(A^J_{tau sigma} Xi^sigma)

    Each returned callable maps a vertical VectorField to a coefficient
    table indexed by the fibre index."""
    b = omega2.bundle
    A = omega2.kernel_table()

    def nabla(Xi: VectorField) -> dict:
        out = {s: Expr() for s in range(1, b.m + 1)}
        for (tau, J, sigma), a in A.items():
            out[sigma] = out[sigma] + a * ex.d_multi(Xi.eta[tau], J, None)
        return out

    def nabla_star(Xi: VectorField) -> dict:
        out = {s: Expr() for s in range(1, b.m + 1)}
        for (tau, J, sigma), a in A.items():
            out[tau] = out[tau] + ex.d_multi(a * Xi.eta[sigma], J, None) \
                * ((-1) ** len(J))
        return out

    return nabla, nabla_star


def hessian_density(lam: Form, Xi1: VectorField, Xi2: VectorField) -> Form:
    """The bilinear integrand Xi1 | E_n(Xi2 | E_n(lam))."""
    if not (Xi1.is_vertical and Xi2.is_vertical):
        raise ValueError("both fields must be vertical")
    return contract_source(Xi1, jacobi_morphism(lam, Xi2))


# -- syntactic on-shell reduction ------------------------------------------

def _mono_key(m):
    parts = []
    for g, e in m:
        parts.extend([ex.gen_sort_key(g)] * e)
    parts.sort(reverse=True)
    return parts


def _leading(e: Expr):
    best = None
    for m in e.terms:
        if best is None or _mono_key(m) > _mono_key(best):
            best = m
    return best


def _mono_divide(m, lead):
    """Quotient monomial m / lead, or None."""
    md = dict(m)
    for g, e in lead:
        if md.get(g, 0) < e:
            return None
        md[g] -= e
    return tuple(sorted(((g, e) for g, e in md.items() if e),
                        key=lambda p: ex.gen_sort_key(p[0])))


def extract_E_linear(e: Expr, lam: Form, max_order: int | None = None):
    """Rewrite e = sum C^{sigma,J} d_J E_sigma(lam) + remainder by greedy
    division against the expanded d_J E_sigma patterns, highest |J| first.

    Returns (table {(sigma, J): Expr}, remainder Expr)."""
    b = lam.bundle
    E = euler_lagrange(lam).coeffs()
    rE = max((v.jet_order() for v in E.values()), default=0)
    if max_order is None:
        max_order = max(e.jet_order() - rE, 0)

    patterns = []
    for J in all_multiindices(b.n, max_order):
        for s in range(1, b.m + 1):
            if E[s].is_zero:
                continue
            patterns.append((s, J, ex.d_multi(E[s], J, None)))
    patterns.sort(key=lambda t: -len(t[1]))

    table: dict = {}
    for (s, J, P) in patterns:
        lead = _leading(P)
        if lead is None:
            continue
        c_lead = P.terms[lead]
        guard = 0
        while True:
            # reduce the largest monomial of e divisible by the leader
            cand = None
            for m in e.terms:
                q = _mono_divide(m, lead)
                if q is not None and (cand is None or _mono_key(m) > _mono_key(cand[0])):
                    cand = (m, q)
            if cand is None:
                break
            m, q = cand
            factor = Expr({q: e.terms[m] / c_lead})
            table[(s, J)] = table.get((s, J), Expr()) + factor
            e = e - factor * P
            guard += 1
            if guard > 10000:
                raise RuntimeError("on-shell extraction did not terminate")
    return table, e


def extract_E_linear_form(rho: Form, lam: Form):
    """Apply the on-shell extraction to every coefficient of a form.

    Returns (tables keyed by basis term, remainder Form)."""
    tables = {}
    rem_terms = {}
    for key, c in rho.terms.items():
        t, r = extract_E_linear(c, lam)
        if t:
            tables[key] = t
        if not r.is_zero:
            rem_terms[key] = r
    return tables, Form(rho.bundle, rem_terms)


def is_zero_onshell(rho: Form, lam: Form) -> bool:
    _, rem = extract_E_linear_form(rho, lam)
    return rem.is_zero


# -- identity report -------------------------------------------------------

def identity_suite(lam: Form, Xi1: VectorField, Xi2: VectorField) -> dict:
    """Evaluate the structural identities tying variations, currents and
    brackets for a Lagrangian and two vertical fields.  Each entry maps an
    identity name to the residual form (zero means the identity holds)."""
    from .fields import lie_bracket

    if not (Xi1.is_vertical and Xi2.is_vertical):
        raise ValueError("the identity suite expects vertical fields")
    b = lam.bundle
    report = {}

    # commutation of iterated contractions against the bracket correction
    def deformed(Xi):
        return contract_source(Xi, euler_lagrange(lam))

    lhs = contract_source(Xi1, euler_lagrange(deformed(Xi2))) \
        + contract_source(lie_bracket(Xi2, Xi1), euler_lagrange(lam))
    rhs = contract_source(Xi2, euler_lagrange(deformed(Xi1))) \
        + horizontal_differential(noether_current(deformed(Xi1), Xi2))
    report["second_variation_commutation"] = lhs - rhs

    # antisymmetry of the crossed current divergences
    report["current_antisymmetry"] = (
        horizontal_differential(noether_current(deformed(Xi1), Xi2))
        + horizontal_differential(noether_current(deformed(Xi2), Xi1)))

    # two routes to the divergence of the iterated current
    p1 = momentum(lam)
    kv = _vertical_order_for(p1)
    eps1 = interior_product(vertical_part(Xi1, kv), p1)
    inner = horizontal_differential(eps1)
    p2 = momentum(inner)
    kv2 = _vertical_order_for(p2)
    lhs = horizontal_differential(
        interior_product(vertical_part(Xi2, kv2), p2))
    dv = vertical_differential(eps1)
    kv3 = _vertical_order_for(dv)
    rhs = horizontal_differential(
        horizontalize(interior_product(vertical_part(Xi2, kv3), dv)))
    report["momentum_of_divergence"] = lhs - rhs

    return report
