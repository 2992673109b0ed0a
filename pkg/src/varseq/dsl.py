"""Expression DSL: parser and renderers.

Grammar (whitespace-insensitive):

    expr   := ["-"] term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*      # "/" only before integers
    factor := rational | atom ["^" uint] | "(" expr ")" ["^" uint]
    atom   := ident                             # coordinate
            | ident "_" digits                  # jet coordinate, e.g. y1_12
            | ident "[" ints "]" ["_" digits]   # constant or function symbol
            | "y[" int ";" ints "]"             # bracketed jet for n > 9

Jet suffix digits are single base indices (valid for n <= 9) and are sorted
automatically.  Identifiers resolve against a bundle's declared names: base
coordinates, fibre coordinates, constant families, and function-symbol
families; anything else is an error with a line/column diagnostic.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from . import expr as ex
from .expr import Expr

SCHEMA_VERSION = 1


class ParseError(ValueError):
    def __init__(self, msg, line, col):
        super().__init__(f"{msg} (line {line}, column {col})")
        self.line = line
        self.col = col


_TOKEN = re.compile(r"""
    (?P<num>\d+)
  | (?P<ident>[A-Za-z][A-Za-z0-9]*)
  | (?P<op>[-+*/^()\[\],;_])
  | (?P<ws>\s+)
""", re.VERBOSE)


def _tokenize(text):
    toks = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        val = m.group()
        if kind != "ws":
            toks.append((kind, val, line, col))
        for ch in val:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
        pos = m.end()
    toks.append(("eof", "", line, col))
    return toks


class Parser:
    """Recursive-descent parser producing Expr values over a bundle chart."""

    def __init__(self, text, bundle, functions=None):
        self.toks = _tokenize(text)
        self.i = 0
        self.bundle = bundle
        self.functions = functions or {}

    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, val):
        kind, v, line, col = self.next()
        if v != val:
            raise ParseError(f"expected {val!r}, found {v or 'end of input'!r}",
                             line, col)

    def error(self, msg):
        _, v, line, col = self.peek()
        raise ParseError(msg, line, col)

    def parse(self) -> Expr:
        e = self.expr()
        kind, v, line, col = self.peek()
        if kind != "eof":
            raise ParseError(f"unexpected trailing input {v!r}", line, col)
        return e

    def expr(self) -> Expr:
        neg = False
        if self.peek()[1] == "-":
            self.next()
            neg = True
        e = self.term()
        if neg:
            e = -e
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            t = self.term()
            e = e + t if op == "+" else e - t
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.peek()[1] in ("*", "/"):
            op = self.next()[1]
            if op == "/":
                kind, v, line, col = self.next()
                if kind != "num":
                    raise ParseError("division is only defined by integers",
                                     line, col)
                e = e * Fraction(1, int(v))
            else:
                e = e * self.factor()
        return e

    def factor(self) -> Expr:
        kind, v, line, col = self.peek()
        if v == "(":
            self.next()
            e = self.expr()
            self.expect(")")
        elif kind == "num":
            self.next()
            e = Expr.const(int(v))
        elif kind == "ident":
            e = self.atom()
        else:
            raise ParseError(f"expected a factor, found {v or 'end of input'!r}",
                             line, col)
        if self.peek()[1] == "^":
            self.next()
            kind, v, line, col = self.next()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer",
                                 line, col)
            e = e ** int(v)
        return e

    def _int_list(self, closing):
        out = []
        while True:
            kind, v, line, col = self.next()
            if kind != "num":
                raise ParseError("expected an integer index", line, col)
            out.append(int(v))
            kind, v, line, col = self.next()
            if v == closing:
                return out
            if v != ",":
                raise ParseError(f"expected ',' or {closing!r}", line, col)

    def _jet_suffix(self):
        """Optional _digits suffix; returns a sorted multi-index."""
        if self.peek()[1] != "_":
            return ()
        self.next()
        kind, v, line, col = self.next()
        if kind != "num":
            raise ParseError("expected base indices after '_'", line, col)
        I = tuple(sorted(int(ch) for ch in v))
        if any(not 1 <= i <= self.bundle.n for i in I):
            raise ParseError(f"base index out of range in {v!r}", line, col)
        return I

    def atom(self) -> Expr:
        b = self.bundle
        kind, name, line, col = self.next()
        # bracketed jet coordinate: y[sigma; i, j, ...]
        if name == "y" and self.peek()[1] == "[" and "y" not in b.fibre_names \
                and "y" not in b.families and "y" not in self.functions:
            self.next()
            kind2, v2, l2, c2 = self.next()
            if kind2 != "num":
                raise ParseError("expected a fibre index", l2, c2)
            sigma = int(v2)
            self.expect(";")
            I = tuple(sorted(self._int_list("]")))
            return b.y(sigma, I)
        if self.peek()[1] == "[":
            self.next()
            if name in b.fibre_names:
                # explicit jet multi-index, e.g. a1[1,13] (works for n > 9)
                sigma = b.fibre_names.index(name) + 1
                I = tuple(sorted(self._int_list("]")))
                try:
                    return b.y(sigma, I)
                except ValueError as err:
                    raise ParseError(str(err), line, col)
            idx = tuple(self._int_list("]"))
            if name in b.families:
                if self.peek()[1] == "_":
                    raise ParseError("constants take no jet suffix", line, col)
                try:
                    return b.const(name, *idx)
                except ValueError as err:
                    raise ParseError(str(err), line, col)
            if name in self.functions:
                arity = self.functions[name]
                if len(idx) != arity:
                    raise ParseError(
                        f"{name} expects {arity} indices, got {len(idx)}",
                        line, col)
                return ex.ufunc(name, idx, self._jet_suffix())
            raise ParseError(f"undeclared indexed symbol {name!r}", line, col)
        if name in b.base_names:
            return b.x(b.base_names.index(name) + 1)
        if name in b.fibre_names:
            sigma = b.fibre_names.index(name) + 1
            return b.y(sigma, self._jet_suffix())
        if name in self.functions:
            if self.functions[name] != 0:
                raise ParseError(f"{name} requires bracketed indices", line, col)
            return ex.ufunc(name, (), self._jet_suffix())
        raise ParseError(f"undeclared identifier {name!r}", line, col)


def parse_expr(text, bundle, functions=None) -> Expr:
    return Parser(text, bundle, functions).parse()


# -- rendering -------------------------------------------------------------

def _gen_str(g, bundle, fmt):
    kind = g[0]
    if kind == "x":
        name = bundle.base_names[g[1] - 1]
        return name if fmt == "plain" else f"x^{{{g[1]}}}"
    if kind == "y":
        sigma, I = g[1], g[2]
        if fmt == "latex":
            sub = ",".join(map(str, I))
            return f"y^{{{sigma}}}" + (f"_{{{sub}}}" if I else "")
        name = bundle.fibre_names[sigma - 1]
        if any(i > 9 for i in I):
            return name + f"[{','.join(map(str, I))}]"
        return name + ("_" + "".join(map(str, I)) if I else "")
    if kind == "k":
        fam, idx = g[1], g[2]
        if fmt == "latex":
            return f"{fam}^{{{','.join(map(str, idx))}}}"
        return f"{fam}[{','.join(map(str, idx))}]"
    fam, idx, I = g[1], g[2], g[3]
    if fmt == "latex":
        s = fam
        if idx:
            s += f"^{{{','.join(map(str, idx))}}}"
        if I:
            s += f"_{{,{','.join(map(str, I))}}}"
        return s
    s = fam
    if idx:
        s += f"[{','.join(map(str, idx))}]"
    if I:
        s += "_" + "".join(map(str, I))
    return s


def _mono_sort_key(item):
    m, _ = item
    return [ex.gen_sort_key(g) + (e,) for g, e in m]


def render_expr(e: Expr, bundle, fmt: str = "plain") -> str:
    """Deterministic rendering; the plain form re-parses to the same Expr."""
    if fmt == "json":
        return json.dumps(expr_to_json(e, bundle), sort_keys=True)
    if e.is_zero:
        return "0"
    chunks = []
    for m, c in sorted(e.terms.items(), key=_mono_sort_key):
        sign = "-" if c < 0 else "+"
        c = abs(c)
        factors = []
        if c != 1 or not m:
            if fmt == "latex" and c.denominator != 1:
                factors.append(f"\\frac{{{c.numerator}}}{{{c.denominator}}}")
            else:
                factors.append(str(c) if c.denominator == 1
                               else f"{c.numerator}/{c.denominator}")
        for g, exp in m:
            s = _gen_str(g, bundle, fmt)
            if exp > 1:
                s += f"^{exp}" if fmt == "plain" else f"^{{{exp}}}"
            factors.append(s)
        sep = "*" if fmt == "plain" else " "
        chunks.append((sign, sep.join(factors)))
    out = chunks[0][1] if chunks[0][0] == "+" else "-" + chunks[0][1]
    for sign, body in chunks[1:]:
        out += f" {sign} {body}"
    return out


def expr_to_json(e: Expr, bundle) -> dict:
    terms = []
    for m, c in sorted(e.terms.items(), key=_mono_sort_key):
        terms.append({
            "coeff": str(c),
            "factors": [{"gen": list(_json_gen(g)), "exp": exp} for g, exp in m],
        })
    return {"schema_version": SCHEMA_VERSION, "terms": terms}


def _json_gen(g):
    if g[0] in ("x", "k"):
        return g
    if g[0] == "y":
        return (g[0], g[1], list(g[2]))
    return (g[0], g[1], list(g[2]), list(g[3]))


def expr_from_json(data: dict, bundle) -> Expr:
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError("unsupported schema version")
    out = Expr()
    for t in data["terms"]:
        mono = Expr.const(Fraction(t["coeff"]))
        for f in t["factors"]:
            g = f["gen"]
            kind = g[0]
            if kind == "x":
                gen = ("x", g[1])
            elif kind == "y":
                gen = ("y", g[1], tuple(g[2]))
            elif kind == "k":
                gen = ("k", g[1], tuple(g[2]))
            else:
                gen = ("u", g[1], tuple(g[2]), tuple(g[3]))
            mono = mono * Expr.gen(gen) ** f["exp"]
        out = out + mono
    return out


def render_form(rho, bundle, fmt: str = "plain") -> str:
    """Render a Form as a sum of coefficient * basis-factor products."""
    if fmt == "json":
        payload = {
            "schema_version": SCHEMA_VERSION,
            "terms": [
                {"dx": list(dxs),
                 "omega": [[s, list(I)] for (s, I) in oms],
                 "coeff": expr_to_json(c, bundle)["terms"]}
                for (dxs, oms), c in sorted(rho.terms.items())
            ],
        }
        return json.dumps(payload, sort_keys=True)
    if rho.is_zero:
        return "0"
    parts = []
    for (dxs, oms), c in sorted(rho.terms.items()):
        factors = []
        for i in dxs:
            factors.append(f"dx{i}" if fmt == "plain" else f"dx^{{{i}}}")
        for (s, I) in oms:
            if fmt == "latex":
                sub = ",".join(map(str, I))
                factors.append(f"\\omega^{{{s}}}" + (f"_{{{sub}}}" if I else ""))
            else:
                factors.append(f"w{s}" + ("_" + "".join(map(str, I)) if I else ""))
        cs = render_expr(c, bundle, fmt)
        if " " in cs.strip() or cs.startswith("-"):
            cs = f"({cs})"
        sep = "^" if fmt == "plain" else r" \wedge "
        parts.append(cs + ("*" if fmt == "plain" else " ") + sep.join(factors)
                     if factors else cs)
    return " + ".join(parts)
