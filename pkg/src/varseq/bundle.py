"""Bundle descriptions: chart dimensions, jet order cap, and indexed constants.

A Bundle fixes one fibered chart: n base coordinates, m fibre coordinates,
a maximum jet order, and a registry of indexed constant families (metric
entries, structure constants, Kronecker deltas, ...).  Constant families
carry declared index symmetries, applied at construction time so that the
generator set stays canonical, and may be bound to numeric tables.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import expr as ex
from .expr import Expr
from .multiindex import all_multiindices


@dataclass(frozen=True)
class ConstantFamily:
    """An indexed constant symbol family like eta[i,j] or c[a,b,c].

    symmetries is a tuple of ('sym', positions) / ('anti', positions)
    entries; positions are 0-based slots of the index tuple.  values, if
    given, maps canonical index tuples to exact rationals (missing entries
    are zero) and makes the family fully numeric.
    """

    name: str
    arity: int
    symmetries: tuple = ()
    values: dict | None = None

    def canonicalize(self, idx: tuple):
        """Return (sign, canonical index tuple); sign 0 means the entry
        vanishes identically (repeated index in an antisymmetric slot)."""
        idx = list(idx)
        if len(idx) != self.arity:
            raise ValueError(f"{self.name} expects {self.arity} indices, got {len(idx)}")
        sign = 1
        for kind, positions in self.symmetries:
            sub = [idx[p] for p in positions]
            if kind == "anti":
                if len(set(sub)) != len(sub):
                    return 0, None
                # count inversions to get the permutation sign
                inv = sum(
                    1
                    for a in range(len(sub))
                    for b in range(a + 1, len(sub))
                    if sub[a] > sub[b]
                )
                if inv % 2:
                    sign = -sign
            sorted_sub = sorted(sub)
            for p, v in zip(positions, sorted_sub):
                idx[p] = v
        return sign, tuple(idx)

    def entry(self, *idx) -> Expr:
        sign, cidx = self.canonicalize(tuple(idx))
        if sign == 0:
            return Expr()
        if self.values is not None:
            v = self.values.get(cidx, Fraction(0))
            return Expr.const(sign * Fraction(v))
        return Expr.gen(("k", self.name, cidx)) * sign


class Bundle:
    """One fibered chart: (x^1..x^n, y^1..y^m) with jets up to order r_max."""

    def __init__(self, n: int, m: int, r_max: int,
                 base_names=None, fibre_names=None):
        if n < 1 or m < 1 or r_max < 0:
            raise ValueError("need n >= 1, m >= 1, r_max >= 0")
        self.n = n
        self.m = m
        self.r_max = r_max
        self.base_names = tuple(base_names or (f"x{i}" for i in range(1, n + 1)))
        self.fibre_names = tuple(fibre_names or (f"y{s}" for s in range(1, m + 1)))
        if len(self.base_names) != n or len(self.fibre_names) != m:
            raise ValueError("name count does not match dimensions")
        if len(set(self.base_names) | set(self.fibre_names)) != n + m:
            raise ValueError("coordinate names must be unique")
        self.families: dict[str, ConstantFamily] = {}

    # -- constant registry -------------------------------------------------

    def add_family(self, fam: ConstantFamily) -> ConstantFamily:
        if fam.name in self.families:
            raise ValueError(f"constant family {fam.name!r} already declared")
        self.families[fam.name] = fam
        return fam

    def const(self, name: str, *idx) -> Expr:
        return self.families[name].entry(*idx)

    # -- coordinate expressions -------------------------------------------

    def x(self, i: int) -> Expr:
        if not 1 <= i <= self.n:
            raise ValueError(f"base index {i} out of range 1..{self.n}")
        return ex.x(i)

    def y(self, sigma: int, I=()) -> Expr:
        if not 1 <= sigma <= self.m:
            raise ValueError(f"fibre index {sigma} out of range 1..{self.m}")
        I = tuple(sorted(I))
        if len(I) > self.r_max:
            raise ex.OrderOverflowError(len(I))
        if any(not 1 <= i <= self.n for i in I):
            raise ValueError(f"multi-index {I} out of range 1..{self.n}")
        return ex.y(sigma, I)

    def dt(self, e: Expr, i: int) -> Expr:
        return ex.total_derivative(e, i, self.r_max)

    def d_I(self, e: Expr, I) -> Expr:
        return ex.d_multi(e, I, self.r_max)

    def jet_coords(self, max_order: int | None = None):
        """All (sigma, I) pairs up to the given jet order."""
        r = self.r_max if max_order is None else max_order
        return [
            (s, I)
            for I in all_multiindices(self.n, r)
            for s in range(1, self.m + 1)
        ]

    # -- equality oracle ---------------------------------------------------

    def equal(self, e1: Expr, e2: Expr, seed: int = 0, samples: int = 8) -> bool:
        return ex.equal(e1, e2, rng=random.Random(seed), samples=samples)

    def random_expr(self, rng, max_order=None, n_terms=4, max_deg=2,
                    extra_gens=()):
        """A random polynomial in the chart coordinates (test fixtures)."""
        r = self.r_max if max_order is None else max_order
        gens = [("x", i) for i in range(1, self.n + 1)]
        gens += [("y", s, I) for (s, I) in self.jet_coords(r)]
        gens += list(extra_gens)
        out = Expr()
        for _ in range(n_terms):
            coeff = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
            mono = Expr.const(coeff)
            for _ in range(rng.randint(0, max_deg)):
                mono = mono * Expr.gen(gens[rng.randrange(len(gens))])
            out = out + mono
        return out
