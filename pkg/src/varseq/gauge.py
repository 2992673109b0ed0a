"""Gauge field theory on a flat diagonal background.

Sets up the bundle of principal-connection components w^A_mu over an
n-dimensional base with a diagonal +/-1 metric, builds the quadratic
curvature Lagrangian, and provides its Euler-Lagrange expressions, the
linearized (Jacobi) equation in raw and covariant form, and the conserved
current attached to a pair of Jacobi fields -- both as closed-form
coordinate expressions and through the generic variational pipeline.

Fibre indexing: the connection component w^A_mu is the fibre coordinate
with index sigma = (A-1)*n + mu.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

from . import expr as ex
from .expr import Expr
from .bundle import Bundle, ConstantFamily
from .forms import Form, ds, ds_i, wedge
from .fields import VectorField
from .variational import (SourceForm, contract_source, euler_lagrange,
                          extract_E_linear, jacobi_onshell, noether_current)


@dataclass(frozen=True)
class LieAlgebraData:
    """Structure constants c^A_{BC} of the gauge algebra, with the pairing
    delta_{AB} taken as the identity (orthonormal basis)."""

    dim: int
    structure_constants: dict | None = None  # (A,B,C) -> rational; None = opaque

    @staticmethod
    def abelian(dim: int = 1) -> "LieAlgebraData":
        return LieAlgebraData(dim, {})

    @staticmethod
    def su2() -> "LieAlgebraData":
        """c^A_{BC} = epsilon_{ABC} (the three-dimensional cross-product algebra)."""
        eps = {}
        for p in permutations((1, 2, 3)):
            sign = 1
            a, b, c = p
            # parity of the permutation (a, b, c) of (1, 2, 3)
            inv = sum(1 for i in range(3) for j in range(i + 1, 3)
                      if p[i] > p[j])
            eps[p] = Fraction(-1 if inv % 2 else 1)
        return LieAlgebraData(3, eps)


@dataclass(frozen=True)
class MetricSpec:
    """Diagonal constant metric; entries are +1 or -1."""

    diag: tuple

    @staticmethod
    def minkowski(n: int = 4, mostly_minus: bool = True) -> "MetricSpec":
        if mostly_minus:
            return MetricSpec((1,) + (-1,) * (n - 1))
        return MetricSpec((-1,) + (1,) * (n - 1))

    @property
    def n(self) -> int:
        return len(self.diag)


def validate_algebra(alg: LieAlgebraData) -> dict:
    """Check antisymmetry and the Jacobi identity of numeric constants."""
    report = {"antisymmetry": [], "jacobi": []}
    if alg.structure_constants is None:
        return report
    c = lambda a, b, d: Fraction(alg.structure_constants.get((a, b, d), 0))
    rng = range(1, alg.dim + 1)
    for a, b, d in product(rng, repeat=3):
        if c(a, b, d) + c(a, d, b) != 0:
            report["antisymmetry"].append((a, b, d))
    for e, a, b, d in product(rng, repeat=4):
        s = sum(c(e, a, x) * c(x, b, d) + c(e, b, x) * c(x, d, a)
                + c(e, d, x) * c(x, a, b) for x in rng)
        if s != 0:
            report["jacobi"].append((e, a, b, d))
    return report


class GaugeTheory:
    """The curvature-squared field theory for one algebra and metric."""

    def __init__(self, alg: LieAlgebraData, metric: MetricSpec, r_max: int = 8):
        self.alg = alg
        self.metric = metric
        n = metric.n
        m = alg.dim * n
        names = [f"w{A}{mu}" for A in range(1, alg.dim + 1)
                 for mu in range(1, n + 1)]
        self.bundle = Bundle(n, m, r_max, fibre_names=names)
        self.bundle.add_family(ConstantFamily(
            "eta", 2, symmetries=((("sym"), (0, 1)),),
            values={(i, i): Fraction(metric.diag[i - 1]) for i in range(1, n + 1)}))
        self.bundle.add_family(ConstantFamily(
            "delta", 2, symmetries=((("sym"), (0, 1)),),
            values={(i, i): Fraction(1) for i in range(1, alg.dim + 1)}))
        self.bundle.add_family(ConstantFamily(
            "c", 3, symmetries=((("anti"), (1, 2)),),
            values=alg.structure_constants))

    # -- index plumbing ----------------------------------------------------

    def sigma(self, A: int, mu: int) -> int:
        return (A - 1) * self.metric.n + mu

    def w(self, A: int, mu: int, I=()) -> Expr:
        return self.bundle.y(self.sigma(A, mu), I)

    def eta(self, mu: int, nu: int) -> Expr:
        return self.bundle.const("eta", mu, nu)

    def delta(self, A: int, B: int) -> Expr:
        return self.bundle.const("delta", A, B)

    def c(self, A: int, B: int, C: int) -> Expr:
        return self.bundle.const("c", A, B, C)

    @property
    def base_range(self):
        return range(1, self.metric.n + 1)

    @property
    def alg_range(self):
        return range(1, self.alg.dim + 1)

    # -- Lagrangian and field equations -------------------------------------

    def field_strength(self, A: int, mu: int, nu: int) -> Expr:
        F = self.w(A, nu, (mu,)) - self.w(A, mu, (nu,))
        for B in self.alg_range:
            for C in self.alg_range:
                cc = self.c(A, B, C)
                if not cc.is_zero:
                    F = F + cc * self.w(B, mu) * self.w(C, nu)
        return F

    def lagrangian(self) -> Form:
        L = Expr()
        for A in self.alg_range:
            for B in self.alg_range:
                dAB = self.delta(A, B)
                if dAB.is_zero:
                    continue
                for mu, nu, rho, sig in product(self.base_range, repeat=4):
                    coeff = self.eta(mu, rho) * self.eta(nu, sig) * dAB
                    if coeff.is_zero:
                        continue
                    L = L + coeff * self.field_strength(A, mu, nu) \
                        * self.field_strength(B, rho, sig)
        return wedge(Form.scalar(self.bundle, L * Fraction(-1, 4)), ds(self.bundle))

    def euler_lagrange(self) -> SourceForm:
        return euler_lagrange(self.lagrangian())

    def el_coeff(self, nu: int, B: int) -> Expr:
        """E^nu_B from the generic operator."""
        return self.euler_lagrange().coeff(self.sigma(B, nu))

    def el_display(self, nu: int, B: int) -> Expr:
        """The closed-form field equations:
        E^nu_B = d_mu F^{mu nu}_B + F^{mu nu}_A c^A_{BC} w^C_mu, expanded."""
        out = Expr()
        for A in self.alg_range:
            dBA = self.delta(B, A)
            if not dBA.is_zero:
                for lam, mu, sig in product(self.base_range, repeat=3):
                    coeff = dBA * self.eta(lam, mu) * self.eta(sig, nu)
                    if coeff.is_zero:
                        continue
                    t = self.w(A, sig, (lam, mu)) - self.w(A, lam, (sig, mu))
                    for C in self.alg_range:
                        for D in self.alg_range:
                            cc = self.c(A, C, D)
                            if not cc.is_zero:
                                t = t + cc * (self.w(C, lam, (mu,)) * self.w(D, sig)
                                              + self.w(C, lam) * self.w(D, sig, (mu,)))
                    out = out + coeff * t
        for A in self.alg_range:
            for D in self.alg_range:
                dDA = self.delta(D, A)
                if dDA.is_zero:
                    continue
                for lam, mu, sig in product(self.base_range, repeat=3):
                    coeff = self.eta(lam, mu) * self.eta(sig, nu) * dDA
                    if coeff.is_zero:
                        continue
                    for C in self.alg_range:
                        cc = self.c(A, B, C)
                        if cc.is_zero:
                            continue
                        out = out + coeff * cc * self.w(C, mu) \
                            * self.field_strength(D, lam, sig)
        return out

    # -- linearization (Jacobi equation) ------------------------------------

    def jacobi_field(self, family: str = "Xi") -> VectorField:
        """A vertical field whose components Xi^Z_alpha are opaque functions
        with formal total derivatives."""
        eta = {self.sigma(Z, a): ex.ufunc(family, (Z, a))
               for Z in self.alg_range for a in self.base_range}
        return VectorField(self.bundle, eta=eta)

    def xi(self, family: str, Z: int, alpha: int, I=()) -> Expr:
        return ex.ufunc(family, (Z, alpha), I)

    def jacobi_raw(self, family: str = "Xi") -> SourceForm:
        """The linearized field equations along solutions, in coordinates:
        the direct form  sum_J d_J Xi^Z_alpha * dE^nu_B/dw^Z_{alpha,J}."""
        _, direct = jacobi_onshell(self.lagrangian(), self.jacobi_field(family))
        return direct

    def jacobi_raw_coeff(self, nu: int, B: int, family: str = "Xi") -> Expr:
        return self.jacobi_raw(family).coeff(self.sigma(B, nu))

    def nabla_xi(self, family: str, A: int, alpha: int, sig: int) -> Expr:
        """Covariant derivative of a Jacobi field component:
        nabla_alpha Xi^A_sig = d_alpha Xi^A_sig + c^A_{CZ} w^C_alpha Xi^Z_sig."""
        v = self.xi(family, A, sig, (alpha,))
        for C in self.alg_range:
            for Z in self.alg_range:
                cc = self.c(A, C, Z)
                if not cc.is_zero:
                    v = v + cc * self.w(C, alpha) * self.xi(family, Z, sig)
        return v

    def jacobi_covariant_coeff(self, nu: int, B: int, family: str = "Xi") -> Expr:
        """The covariant form of the linearized equations:

        eta^{nu sig} eta^{beta alpha} { nabla_beta[(nabla_alpha Xi^A_sig
        - nabla_sig Xi^A_alpha) delta_{BA}] + F^D_{beta sig} c^A_{BZ}
        Xi^Z_alpha delta_{AD} },

        with the outer derivative acting on the lower algebra index as
        nabla_beta M_B = d_beta M_B + c^A_{BC} w^C_beta M_A."""
        out = Expr()
        for sig, beta, alpha in product(self.base_range, repeat=3):
            coeff = self.eta(nu, sig) * self.eta(beta, alpha)
            if coeff.is_zero:
                continue
            # M_B = (nabla_alpha Xi^A_sig - nabla_sig Xi^A_alpha) delta_{BA}
            def M(Bidx):
                v = Expr()
                for A in self.alg_range:
                    dBA = self.delta(Bidx, A)
                    if not dBA.is_zero:
                        v = v + dBA * (self.nabla_xi(family, A, alpha, sig)
                                       - self.nabla_xi(family, A, sig, alpha))
                return v

            t = ex.total_derivative(M(B), beta)
            for A in self.alg_range:
                for C in self.alg_range:
                    cc = self.c(A, B, C)
                    if not cc.is_zero:
                        t = t + cc * self.w(C, beta) * M(A)
            for A in self.alg_range:
                for D in self.alg_range:
                    dAD = self.delta(A, D)
                    if dAD.is_zero:
                        continue
                    for Z in self.alg_range:
                        cc = self.c(A, B, Z)
                        if not cc.is_zero:
                            t = t + self.field_strength(D, beta, sig) * cc \
                                * self.xi(family, Z, alpha) * dAD
            out = out + coeff * t
        return out

    def jacobi_maxwell_coeff(self, nu: int, family: str = "Xi") -> Expr:
        """Abelian linearized equations:
        eta^{sig nu} eta^{tau kap} d_kap(d_tau Xi_sig - d_sig Xi_tau)."""
        out = Expr()
        for sig, tau, kap in product(self.base_range, repeat=3):
            coeff = self.eta(sig, nu) * self.eta(tau, kap)
            if coeff.is_zero:
                continue
            out = out + coeff * (self.xi(family, 1, sig, (tau, kap))
                                 - self.xi(family, 1, tau, (sig, kap)))
        return out

    # -- the two-Jacobi-field current ---------------------------------------

    def jacobi_current(self, family: str = "Xi", family2: str = "Xit") -> Form:
        """Current attached to a pair of vertical fields through the generic
        residual pipeline: J Xi~ | p_{d_V (Xi | E(lambda))}."""
        lam = self.lagrangian()
        deformed = contract_source(self.jacobi_field(family), euler_lagrange(lam))
        return noether_current(deformed, self.jacobi_field(family2))

    def jacobi_current_display(self, family: str = "Xi",
                               family2: str = "Xit") -> Form:
        """Closed form of the same current:

        [ eta^{rho[xi} eta^{sig]nu} delta_{BA} c^A_{ZD} w^D_sig
            (Xi^B_nu Xit^Z_rho - Xi^Z_rho Xit^B_nu)
          + (eta^{xi sig} eta^{rho nu} - eta^{rho(sig} eta^{xi)nu})
            (Xi^B_nu nabla_sig(Xit^Z_rho delta_{ZB})
             - Xit^Z_rho nabla_sig(Xi^B_nu delta_{BZ})) ] ds_xi,

        brackets denoting (anti)symmetrization with the 1/2 convention."""
        b = self.bundle
        out = Form.zero(b)
        half = Fraction(1, 2)
        for xi_idx in self.base_range:
            coeff = Expr()
            for rho, sig, nu in product(self.base_range, repeat=3):
                anti = (self.eta(rho, xi_idx) * self.eta(sig, nu)
                        - self.eta(rho, sig) * self.eta(xi_idx, nu)) * half
                if not anti.is_zero:
                    for B, A, Z, D in product(self.alg_range, repeat=4):
                        v = self.delta(B, A) * self.c(A, Z, D)
                        if v.is_zero:
                            continue
                        coeff = coeff + anti * v * self.w(D, sig) * (
                            self.xi(family, B, nu) * self.xi(family2, Z, rho)
                            - self.xi(family, Z, rho) * self.xi(family2, B, nu))
                sym = (self.eta(xi_idx, sig) * self.eta(rho, nu)
                       - (self.eta(rho, sig) * self.eta(xi_idx, nu)
                          + self.eta(rho, xi_idx) * self.eta(sig, nu)) * half)
                if sym.is_zero:
                    continue
                for B in self.alg_range:
                    for Z in self.alg_range:
                        dZB = self.delta(Z, B)
                        if dZB.is_zero:
                            continue
                        coeff = coeff + sym * dZB * (
                            self.xi(family, B, nu)
                            * self.nabla_xi(family2, Z, sig, rho)
                            - self.xi(family2, Z, rho)
                            * self.nabla_xi(family, B, sig, nu))
            out = out + wedge(Form.scalar(b, coeff), ds_i(b, xi_idx))
        return out

    # -- residues ------------------------------------------------------------

    def covariant_matches_raw(self, nu: int, B: int,
                              family: str = "Xi") -> bool:
        """The covariant rewrite minus the raw linearization reduces to an
        exact combination of derivatives of the field equations."""
        diff = self.jacobi_covariant_coeff(nu, B, family) \
            - self.jacobi_raw_coeff(nu, B, family)
        _, rem = extract_E_linear(diff, self.lagrangian())
        return rem.is_zero
