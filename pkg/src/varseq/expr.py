"""Exact polynomial expressions over jet-bundle coordinates.

An Expr is a normal-form sum of monomials: each monomial is a product of
powers of generators with an exact rational coefficient.  Generators are
plain tuples:

    ('x', i)                 base coordinate x^i
    ('y', sigma, I)          jet coordinate y^sigma_I, I a sorted multi-index
    ('k', family, idx)       opaque indexed constant (eta, delta, c, ...)
    ('u', family, idx, I)    formal derivative d_I of an unknown function
                             of the base coordinates (vector-field components)

Monomials are kept sorted by a fixed total order on generators; zero
coefficients are dropped and like monomials merged, so two Exprs are equal
iff their term dictionaries coincide.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .multiindex import mi_append


Gen = tuple
Monomial = tuple  # tuple of (Gen, exponent) pairs, sorted by gen_sort_key


class OrderOverflowError(Exception):
    """A derivative would exceed the bundle's maximum jet order."""

    def __init__(self, needed: int):
        self.needed = needed
        super().__init__(f"jet order overflow: would need order {needed}")


class MissingAssignmentError(KeyError):
    pass


def gen_sort_key(g: Gen):
    kind = g[0]
    if kind == "x":
        return (0, g[1], (), 0)
    if kind == "k":
        return (1, g[1], g[2], 0)
    if kind == "u":
        I = g[3]
        return (2, (len(I),) + I, g[1], g[2])
    # 'y': rank by jet order first so the leading generator of a monomial
    # is its highest derivative coordinate
    I = g[2]
    return (3, (len(I),) + I, g[1], 0)


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    d = {}
    for g, e in m1:
        d[g] = d.get(g, 0) + e
    for g, e in m2:
        d[g] = d.get(g, 0) + e
    return tuple(sorted(d.items(), key=lambda p: gen_sort_key(p[0])))


class Expr:
    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        # terms must already be clean (no zero coefficients, sorted monomials)
        self.terms = terms or {}

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_dict(d: dict) -> "Expr":
        return Expr({m: c for m, c in d.items() if c != 0})

    @staticmethod
    def const(q) -> "Expr":
        q = Fraction(q)
        if q == 0:
            return Expr()
        return Expr({(): q})

    @staticmethod
    def gen(g: Gen) -> "Expr":
        return Expr({((g, 1),): Fraction(1)})

    # -- predicates --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def as_constant(self):
        """The rational value if this Expr is constant, else None."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1 and () in self.terms:
            return self.terms[()]
        return None

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Expr.const(other)
        if not isinstance(other, Expr):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Expr.const(other)
        if not isinstance(other, Expr):
            return NotImplemented
        d = dict(self.terms)
        for m, c in other.terms.items():
            v = d.get(m, 0) + c
            if v == 0:
                d.pop(m, None)
            else:
                d[m] = v
        return Expr(d)

    __radd__ = __add__

    def __neg__(self):
        return Expr({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Expr.const(other)
        if not isinstance(other, Expr):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                return Expr()
            return Expr({m: c * q for m, c in self.terms.items()})
        if not isinstance(other, Expr):
            return NotImplemented
        d: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = d.get(m, 0) + c1 * c2
                if v == 0:
                    d.pop(m, None)
                else:
                    d[m] = v
        return Expr(d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomial")
        out = Expr.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __repr__(self):
        return f"Expr({render_plain(self)})"

    # -- structure ---------------------------------------------------------

    def free_gens(self) -> set:
        out = set()
        for m in self.terms:
            for g, _ in m:
                out.add(g)
        return out

    def jet_order(self) -> int:
        """Highest |I| among the jet coordinates occurring in the expression."""
        r = 0
        for m in self.terms:
            for g, _ in m:
                if g[0] == "y":
                    r = max(r, len(g[2]))
        return r

    def depends_only_on(self, kinds: Iterable[str], max_jet: int | None = None) -> bool:
        for g in self.free_gens():
            if g[0] not in kinds:
                return False
            if g[0] == "y" and max_jet is not None and len(g[2]) > max_jet:
                return False
        return True

    def substitute(self, mapping: dict) -> "Expr":
        """Replace generators by Exprs; generators not in the mapping are kept."""
        out = Expr()
        for m, c in self.terms.items():
            term = Expr.const(c)
            for g, e in m:
                rep = mapping.get(g)
                if rep is None:
                    rep = Expr.gen(g)
                elif not isinstance(rep, Expr):
                    rep = Expr.const(rep)
                term = term * (rep ** e)
            out = out + term
        return out


# convenience generator constructors

def x(i: int) -> Expr:
    return Expr.gen(("x", i))


def y(sigma: int, I=()) -> Expr:
    return Expr.gen(("y", sigma, tuple(sorted(I))))


def ufunc(family: str, idx=(), I=()) -> Expr:
    return Expr.gen(("u", family, tuple(idx), tuple(sorted(I))))


def normalize(e: Expr) -> Expr:
    """Rebuild the canonical form (idempotent; Exprs are already normalized)."""
    d: dict = {}
    for m, c in e.terms.items():
        mm = tuple(sorted(m, key=lambda p: gen_sort_key(p[0])))
        d[mm] = d.get(mm, 0) + c
    return Expr.from_dict(d)


def partial(e: Expr, g: Gen) -> Expr:
    """Partial derivative with respect to a single stored generator."""
    d: dict = {}
    for m, c in e.terms.items():
        for pos, (gg, exp) in enumerate(m):
            if gg == g:
                rest = m[:pos] + ((gg, exp - 1),) + m[pos + 1:]
                rest = tuple(p for p in rest if p[1] != 0)
                v = d.get(rest, 0) + c * exp
                if v == 0:
                    d.pop(rest, None)
                else:
                    d[rest] = v
                break
    return Expr(d)


def _d_gen(g: Gen, i: int, r_max: int | None):
    """Total derivative of a single generator: list of (coeff, Gen|None)."""
    kind = g[0]
    if kind == "x":
        return Expr.const(1) if g[1] == i else Expr()
    if kind == "k":
        return Expr()
    if kind == "u":
        return Expr.gen(("u", g[1], g[2], mi_append(g[3], i)))
    # 'y'
    I = mi_append(g[2], i)
    if r_max is not None and len(I) > r_max:
        raise OrderOverflowError(len(I))
    return Expr.gen(("y", g[1], I))


def total_derivative(e: Expr, i: int, r_max: int | None = None) -> Expr:
    """Formal total derivative d_i (Leibniz over each monomial factor)."""
    out = Expr()
    for m, c in e.terms.items():
        for pos, (g, exp) in enumerate(m):
            dg = _d_gen(g, i, r_max)
            if dg.is_zero:
                continue
            rest = m[:pos] + ((g, exp - 1),) + m[pos + 1:]
            rest = tuple(p for p in rest if p[1] != 0)
            out = out + Expr({rest: c * exp}) * dg
    return out


def d_multi(e: Expr, I, r_max: int | None = None) -> Expr:
    for i in I:
        e = total_derivative(e, i, r_max)
    return e


def eval_numeric(e: Expr, point: dict) -> Fraction:
    """Exact rational evaluation; every free generator must be assigned."""
    total = Fraction(0)
    for m, c in e.terms.items():
        v = Fraction(c)
        for g, exp in m:
            if g not in point:
                raise MissingAssignmentError(g)
            v *= Fraction(point[g]) ** exp
        total += v
    return total


def random_point(gens, rng) -> dict:
    """A random rational assignment for the given generators."""
    return {
        g: Fraction(rng.randint(-12, 12), rng.randint(1, 5))
        for g in gens
    }


def equal(e1: Expr, e2: Expr, rng=None, samples: int = 8) -> bool:
    """Normal-form equality, cross-checked by random rational evaluation.

    The two criteria must agree; a mismatch signals a canonicalization bug
    and raises RuntimeError.
    """
    import random

    diff = e1 - e2
    by_normal_form = diff.is_zero
    if rng is None:
        rng = random.Random(0)
    gens = sorted(diff.free_gens(), key=gen_sort_key)
    sampled_zero = True
    for _ in range(samples):
        if eval_numeric(diff, random_point(gens, rng)) != 0:
            sampled_zero = False
            break
    if by_normal_form and not sampled_zero:
        raise RuntimeError("normal form says zero but evaluation does not")
    return by_normal_form


# -- rendering ------------------------------------------------------------

def _gen_plain(g: Gen) -> str:
    kind = g[0]
    if kind == "x":
        return f"x{g[1]}"
    if kind == "y":
        sigma, I = g[1], g[2]
        return f"y{sigma}" + ("_" + "".join(map(str, I)) if I else "")
    if kind == "k":
        return f"{g[1]}[{','.join(map(str, g[2]))}]"
    fam, idx, I = g[1], g[2], g[3]
    s = fam
    if idx:
        s += "[" + ",".join(map(str, idx)) + "]"
    if I:
        s += "_" + "".join(map(str, I))
    return s


def render_plain(e: Expr) -> str:
    if e.is_zero:
        return "0"
    parts = []
    for m, c in sorted(e.terms.items(), key=lambda p: [gen_sort_key(g) + (x,) for g, x in p[0]]):
        factors = []
        if c != 1 or not m:
            factors.append(str(c) if c.denominator == 1 else f"{c.numerator}/{c.denominator}")
        for g, exp in m:
            factors.append(_gen_plain(g) + (f"^{exp}" if exp > 1 else ""))
        parts.append("*".join(factors))
    return " + ".join(parts).replace("+ -", "- ")
