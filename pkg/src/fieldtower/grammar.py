"""Recursive-descent parsers for the textual front end.

One tokenizer feeds four small grammars: series expressions in t1..tn with
per-level O-markers, polynomials in the affine coordinate t, divisor
literals, and operator literals.  Precedence is explicit (sign < sum <
product < power) and errors carry the offending position plus the expected
token set; nothing is left to host-language eval.
"""

from __future__ import annotations

import re
from fractions import Fraction

from . import polys
from .adeles import ClosedPoint, Divisor
from .errors import KernelError
from .fields import RationalField
from .operators import BandedOperator, compose, counterexample_map, interleave_embed, scalar_mult, shift_op
from .series import INF, Series


class ParseError(KernelError):
    def __init__(self, message, pos, expected=()):
        self.pos = pos
        self.expected = tuple(expected)
        tail = f" (expected one of: {', '.join(expected)})" if expected else ""
        super().__init__(f"{message} at position {pos}{tail}")


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<sym>[-+*/^():,;\[\]])
    """,
    re.VERBOSE,
)


class Tokens:
    def __init__(self, text):
        self.text = text
        self.items = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise ParseError(f"unexpected character {text[pos]!r}", pos)
            if m.lastgroup != "ws":
                self.items.append((m.lastgroup, m.group(), pos))
            pos = m.end()
        self.items.append(("eof", "", len(text)))
        self.at = 0

    def peek(self):
        return self.items[self.at]

    def next(self):
        tok = self.items[self.at]
        self.at += 1
        return tok

    def expect(self, text):
        kind, val, pos = self.peek()
        if val != text:
            raise ParseError(f"unexpected {val or 'end of input'!r}", pos, (text,))
        return self.next()

    def accept(self, text):
        if self.peek()[1] == text:
            self.next()
            return True
        return False

    def done(self):
        return self.peek()[0] == "eof"

    def expect_int(self):
        sign = 1
        if self.accept("-"):
            sign = -1
        elif self.accept("+"):
            sign = 1
        kind, val, pos = self.peek()
        if kind != "num":
            raise ParseError(f"unexpected {val!r}", pos, ("integer",))
        self.next()
        return sign * int(val)


def _var_level(name, pos, depth):
    m = re.fullmatch(r"t(\d+)", name)
    if not m:
        raise ParseError(f"unknown name {name!r}", pos, ("t<level>",))
    level = int(m.group(1))
    if not (1 <= level <= depth):
        raise ParseError(
            f"variable {name} is outside this session (depth {depth})", pos
        )
    return level


# ------------------------------------------------------------------ series


def parse_series(text, field, depth) -> Series:
    """Parse a signed sum of monomial terms with per-level O-markers."""
    toks = Tokens(text)
    terms, precs = _series_expression(toks, field, depth)
    if not toks.done():
        raise ParseError(f"trailing input {toks.peek()[1]!r}", toks.peek()[2])
    return _build_series(field, depth, terms, precs)


def _series_expression(toks, field, depth):
    terms = []
    precs = {}
    sign = -1 if toks.accept("-") else 1
    if toks.accept("+"):
        pass
    _series_element(toks, field, depth, sign, terms, precs)
    while True:
        if toks.accept("+"):
            sign = 1
        elif toks.accept("-"):
            sign = -1
        else:
            break
        _series_element(toks, field, depth, sign, terms, precs)
    return terms, precs


def _series_element(toks, field, depth, sign, terms, precs):
    kind, val, pos = toks.peek()
    if kind == "name" and val == "O":
        toks.next()
        toks.expect("(")
        _, vname, vpos = toks.next()
        level = _var_level(vname, vpos, depth)
        toks.expect("^")
        exp = toks.expect_int()
        toks.expect(")")
        precs[level] = min(precs.get(level, exp), exp)
        return
    coeff, exps = _series_term(toks, field, depth)
    if sign < 0:
        coeff = field.neg(coeff)
    terms.append((exps, coeff))


def _series_term(toks, field, depth):
    coeff = field.one
    exps = [0] * depth
    saw_factor = False
    while True:
        kind, val, pos = toks.peek()
        if kind == "num":
            toks.next()
            scalar = _scalar(toks, field, int(val))
            coeff = field.mul(coeff, scalar)
            saw_factor = True
        elif kind == "name" and val != "O":
            level = _var_level(val, pos, depth)
            toks.next()
            exp = 1
            if toks.accept("^"):
                exp = toks.expect_int()
            exps[level - 1] += exp
            saw_factor = True
        else:
            if not saw_factor:
                raise ParseError(
                    f"unexpected {val or 'end of input'!r}", pos,
                    ("number", "t<level>"),
                )
            break
        if toks.accept("*"):
            continue
        # the * between factors is optional
        kind2, val2, _ = toks.peek()
        if kind2 == "num" or (kind2 == "name" and val2 != "O"):
            continue
        break
    return coeff, tuple(exps)


def _scalar(toks, field, numerator):
    if toks.accept("/"):
        kind, val, pos = toks.peek()
        if kind != "num":
            raise ParseError(f"unexpected {val!r}", pos, ("integer",))
        toks.next()
        den = int(val)
        if isinstance(field, RationalField):
            return Fraction(numerator, den)
        return field.mul(field.from_int(numerator), field.inv(field.from_int(den)))
    return field.from_int(numerator)


def _build_series(field, depth, terms, precs):
    if depth == 0:
        total = field.zero
        for _, c in terms:
            total = field.add(total, c)
        return Series.scalar(field, total)
    level_prec = precs.get(1, INF)
    groups = {}
    for exps, c in terms:
        groups.setdefault(exps[0], []).append((exps[1:], c))
    kept = {e: g for e, g in groups.items() if level_prec == INF or e < level_prec}
    inner_precs = {l - 1: p for l, p in precs.items() if l >= 2}
    if not kept:
        return Series.zero(field, depth, prec=level_prec)
    lo = min(kept)
    hi = max(kept)
    coeffs = []
    for e in range(lo, hi + 1):
        sub = kept.get(e, [])
        coeffs.append(_build_series(field, depth - 1, sub, dict(inner_precs)))
    return Series.from_coeffs(field, depth, lo, coeffs, prec=level_prec)


# -------------------------------------------------------------- polynomials


def parse_poly(text_or_tokens, field):
    """A polynomial in the affine coordinate t with nonnegative exponents."""
    toks = text_or_tokens if isinstance(text_or_tokens, Tokens) else Tokens(text_or_tokens)
    acc = ()
    sign = -1 if toks.accept("-") else 1
    toks.accept("+")
    acc = polys.add(field, acc, _poly_term(toks, field, sign))
    while True:
        if toks.accept("+"):
            sign = 1
        elif toks.accept("-"):
            sign = -1
        else:
            break
        acc = polys.add(field, acc, _poly_term(toks, field, sign))
    if isinstance(text_or_tokens, str) and not toks.done():
        raise ParseError(f"trailing input {toks.peek()[1]!r}", toks.peek()[2])
    return acc


def _poly_term(toks, field, sign):
    coeff = 1
    exp_total = 0
    saw = False
    while True:
        kind, val, pos = toks.peek()
        if kind == "num":
            toks.next()
            coeff *= int(val)
            saw = True
        elif kind == "name" and val == "t":
            toks.next()
            exp = 1
            if toks.accept("^"):
                exp = toks.expect_int()
                if exp < 0:
                    raise ParseError("polynomials need nonnegative exponents", pos)
            exp_total += exp
            saw = True
        else:
            if not saw:
                raise ParseError(
                    f"unexpected {val or 'end of input'!r}", pos, ("number", "t")
                )
            break
        if toks.accept("*"):
            continue
        kind2, val2, _ = toks.peek()
        if kind2 == "num" or (kind2 == "name" and val2 == "t"):
            continue
        break
    c = field.from_int(sign * coeff)
    out = [field.zero] * exp_total + [c]
    return polys.normalize(field, out)


def parse_rational_function(text, field):
    """num or num/den, with optional parentheses on either side."""
    toks = Tokens(text)
    num = _paren_poly(toks, field)
    den = (1,)
    if toks.accept("/"):
        den = _paren_poly(toks, field)
    if not toks.done():
        raise ParseError(f"trailing input {toks.peek()[1]!r}", toks.peek()[2])
    return num, den


def _paren_poly(toks, field):
    if toks.accept("("):
        p = parse_poly(toks, field)
        toks.expect(")")
        return p
    return parse_poly(toks, field)


# ---------------------------------------------------------------- divisors


def parse_divisor(text, field) -> Divisor:
    """`[(t^2+t+1):3, inf:-1]`; `[]` is the zero divisor."""
    toks = Tokens(text)
    toks.expect("[")
    items = {}
    if not toks.accept("]"):
        while True:
            P = _parse_point(toks, field)
            toks.expect(":")
            mult = toks.expect_int()
            items[P] = items.get(P, 0) + mult
            if toks.accept("]"):
                break
            toks.expect(",")
    if not toks.done():
        raise ParseError(f"trailing input {toks.peek()[1]!r}", toks.peek()[2])
    return Divisor(field, items)


def _parse_point(toks, field) -> ClosedPoint:
    kind, val, pos = toks.peek()
    if kind == "name" and val == "inf":
        toks.next()
        return ClosedPoint.infinity(field)
    if toks.accept("("):
        p = parse_poly(toks, field)
        toks.expect(")")
        return ClosedPoint(field, p)
    if kind == "name" and val == "t":
        p = parse_poly(toks, field)
        return ClosedPoint(field, p)
    raise ParseError(f"unexpected {val!r}", pos, ("inf", "(poly)"))


# ---------------------------------------------------------------- operators


def parse_operator(text, field, depth) -> BandedOperator:
    toks = Tokens(text)
    op = _parse_operator(toks, field, depth)
    if not toks.done():
        raise ParseError(f"trailing input {toks.peek()[1]!r}", toks.peek()[2])
    return op


def _parse_operator(toks, field, depth):
    kind, val, pos = toks.peek()
    if kind == "name" and val == "id":
        toks.next()
        return BandedOperator.identity(field, depth)
    if kind == "name" and val == "zero":
        toks.next()
        return BandedOperator.zero(field, depth)
    if kind == "name" and val == "counterexample":
        toks.next()
        if depth != 2:
            raise ParseError("the counterexample lives at depth 2", pos)
        return counterexample_map(field)
    if kind == "name" and val == "mul":
        toks.next()
        toks.expect("(")
        inner = _collect_until_balanced(toks)
        toks.expect(")")
        return scalar_mult(parse_series(inner, field, depth))
    if kind == "name" and val == "shift":
        toks.next()
        toks.expect("(")
        k = toks.expect_int()
        toks.expect(")")
        return shift_op(field, depth, k)
    if kind == "name" and val == "compose":
        toks.next()
        toks.expect("(")
        a = _parse_operator(toks, field, depth)
        toks.expect(",")
        b = _parse_operator(toks, field, depth)
        toks.expect(")")
        if not (isinstance(a, BandedOperator) and isinstance(b, BandedOperator)):
            raise ParseError("compose needs banded operators", pos)
        return compose(a, b)
    if kind == "name" and val == "embed":
        toks.next()
        toks.expect("(")
        m = toks.expect_int()
        toks.expect(";")
        grid = _parse_operator_matrix(toks, field, depth, m)
        toks.expect(")")
        return interleave_embed(grid, m)
    raise ParseError(
        f"unexpected {val or 'end of input'!r}", pos,
        ("id", "zero", "mul", "shift", "embed", "compose"),
    )


def _parse_operator_matrix(toks, field, depth, m):
    toks.expect("[")
    rows = []
    while True:
        toks.expect("[")
        row = []
        while True:
            row.append(_parse_operator_entry(toks, field, depth))
            if toks.accept("]"):
                break
            toks.expect(",")
        rows.append(row)
        if toks.accept("]"):
            break
        toks.expect(",")
    if len(rows) != m or any(len(r) != m for r in rows):
        raise ParseError(f"embed needs an {m}x{m} matrix", toks.peek()[2])
    return rows


def _parse_operator_entry(toks, field, depth):
    kind, val, _ = toks.peek()
    if kind == "name" and val in ("id", "zero", "mul", "shift", "embed", "compose"):
        return _parse_operator(toks, field, depth)
    # otherwise a bare series entry, meaning multiplication by it
    inner = _collect_until_delim(toks)
    series = parse_series(inner, field, depth)
    if series.is_exact_zero():
        return BandedOperator.zero(field, depth)
    return scalar_mult(series)


def _collect_until_balanced(toks):
    """Raw text of a parenthesized argument, for sub-parsing."""
    parts = []
    level = 0
    start = None
    while True:
        kind, val, pos = toks.peek()
        if kind == "eof":
            raise ParseError("unbalanced parentheses", pos)
        if val == "(":
            level += 1
        if val == ")":
            if level == 0:
                break
            level -= 1
        if start is None:
            start = pos
        toks.next()
        parts.append((pos, val))
    if not parts:
        raise ParseError("empty argument", toks.peek()[2])
    end = parts[-1][0] + len(parts[-1][1])
    return toks.text[parts[0][0]:end]


def _collect_until_delim(toks):
    parts = []
    while True:
        kind, val, pos = toks.peek()
        if kind == "eof" or val in (",", "]", ";"):
            break
        toks.next()
        parts.append((pos, val))
    if not parts:
        raise ParseError("empty matrix entry", toks.peek()[2])
    end = parts[-1][0] + len(parts[-1][1])
    return toks.text[parts[0][0]:end]
