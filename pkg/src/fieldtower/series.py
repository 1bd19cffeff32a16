"""Truncated iterated Laurent series with exact window bookkeeping.

A depth-n series lives in k((t_n))...((t_1)) with t_1 outermost: the series
is a Laurent series in t_1 whose coefficients are depth-(n-1) series in
t_2,...,t_n.  Each level carries a window (lo, prec):

* coefficients at exponents below ``lo`` are exactly zero,
* coefficients in ``[lo, prec)`` are known exactly (absent storage entries
  inside the window mean exact zero),
* coefficients at or above ``prec`` are unknown.

``prec`` may be the infinity sentinel, meaning the series is known exactly
everywhere (a Laurent polynomial at that level).  Operations propagate the
windows conservatively, so a coefficient is only ever reported when the
inputs determine it; everything else raises :class:`PrecisionError`.

A series whose known coefficients all vanish is *possibly zero*, never
certified zero, unless its window is infinite.  Operations that need a
nonzero input (inversion, valuation) demand an in-window nonzero
certificate and refuse to guess.

Values are immutable and safe to share between threads.
"""

from __future__ import annotations

from typing import NamedTuple

from .errors import KernelError, PrecisionError

INF = float("inf")


class Window(NamedTuple):
    lo: int
    prec: object  # int or INF


class Series:
    __slots__ = ("field", "depth", "value", "lo", "prec", "coeffs")

    def __init__(self, field, depth, value=None, lo=0, prec=INF, coeffs=()):
        self.field = field
        self.depth = depth
        if depth == 0:
            self.value = field.zero if value is None else value
            self.lo = 0
            self.prec = INF
            self.coeffs = ()
            return
        self.value = None
        coeffs = tuple(coeffs)
        for c in coeffs:
            if not isinstance(c, Series) or c.depth != depth - 1:
                raise KernelError("coefficient depth mismatch")
        # canonical form: no exactly-zero coefficients at either end
        start, end = 0, len(coeffs)
        while start < end and coeffs[start].is_exact_zero():
            start += 1
        while end > start and coeffs[end - 1].is_exact_zero():
            end -= 1
        lo = lo + start
        coeffs = coeffs[start:end]
        if not coeffs:
            lo = 0 if prec == INF else prec
        if prec != INF and lo + len(coeffs) > prec:
            raise KernelError("stored coefficients exceed the knowledge bound")
        if lo > prec:
            raise KernelError("window lower bound above knowledge bound")
        self.lo = lo
        self.prec = prec
        self.coeffs = coeffs

    # ---------------------------------------------------------------- basics

    @classmethod
    def scalar(cls, field, value):
        return cls(field, 0, value=value)

    @classmethod
    def zero(cls, field, depth, prec=INF):
        if depth == 0:
            return cls.scalar(field, field.zero)
        return cls(field, depth, lo=0, prec=prec, coeffs=())

    @classmethod
    def one(cls, field, depth):
        if depth == 0:
            return cls.scalar(field, field.one)
        return cls(field, depth, lo=0, coeffs=(cls.one(field, depth - 1),))

    @classmethod
    def monomial(cls, field, depth, exps, scalar=None):
        """scalar * t_1^exps[0] * ... * t_n^exps[-1], known exactly."""
        if len(exps) != depth:
            raise KernelError("exponent tuple length must equal depth")
        if scalar is None:
            scalar = field.one
        if depth == 0:
            return cls.scalar(field, scalar)
        inner = cls.monomial(field, depth - 1, exps[1:], scalar)
        return cls(field, depth, lo=exps[0], coeffs=(inner,))

    @classmethod
    def from_coeffs(cls, field, depth, lo, coeffs, prec=INF):
        return cls(field, depth, lo=lo, prec=prec, coeffs=coeffs)

    @property
    def window(self):
        return Window(self.lo, self.prec)

    def is_exact_zero(self):
        if self.depth == 0:
            return self.value == self.field.zero
        return not self.coeffs and self.prec == INF

    def coeff_known(self, e):
        """Coefficient at outer exponent e, or None when unknown."""
        if self.depth == 0:
            raise KernelError("depth-0 series has no outer coefficients")
        if e >= self.prec:
            return None
        if e < self.lo or e >= self.lo + len(self.coeffs):
            return Series.zero(self.field, self.depth - 1)
        return self.coeffs[e - self.lo]

    def coeff(self, e):
        c = self.coeff_known(e)
        if c is None:
            raise PrecisionError(
                f"coefficient at exponent {e} is outside the known window"
            )
        return c

    def coefficient(self, exps):
        """The exact scalar at the monomial with the given exponent tuple."""
        if len(exps) != self.depth:
            raise KernelError("exponent tuple length must equal depth")
        if self.depth == 0:
            return self.value
        return self.coeff(exps[0]).coefficient(exps[1:])

    def leading_term(self):
        """(exponent, coefficient) of the first certified-nonzero coefficient.

        Returns None when the series is exactly zero; raises PrecisionError
        when the window cannot certify either answer.
        """
        if self.depth == 0:
            if self.value == self.field.zero:
                return None
            return ((), self)
        for i, c in enumerate(self.coeffs):
            if c.is_exact_zero():
                continue
            if c.is_certified_nonzero():
                return (self.lo + i, c)
            raise PrecisionError(
                f"coefficient at exponent {self.lo + i} is not decided "
                "(all known entries vanish but its window is finite)"
            )
        if self.prec == INF:
            return None
        raise PrecisionError(
            "series may be zero: no nonzero coefficient inside the window"
        )

    def is_certified_nonzero(self):
        try:
            return self.leading_term() is not None
        except PrecisionError:
            return False

    def valuation(self):
        """Lexicographic valuation vector (v_1, ..., v_n)."""
        if self.depth == 0:
            if self.value == self.field.zero:
                raise KernelError("valuation of the exact zero")
            return ()
        lead = self.leading_term()
        if lead is None:
            raise KernelError("valuation of the exact zero")
        e, c = lead
        return (e,) + c.valuation()

    # ------------------------------------------------------------ arithmetic

    def _require_compatible(self, other):
        if not isinstance(other, Series):
            raise KernelError("expected a Series")
        if other.depth != self.depth:
            raise KernelError(
                f"depth mismatch: {self.depth} vs {other.depth}"
            )
        if other.field != self.field:
            raise KernelError("field mismatch")

    def add(self, other):
        self._require_compatible(other)
        if self.depth == 0:
            return Series.scalar(self.field, self.field.add(self.value, other.value))
        if self.is_exact_zero():
            return other
        if other.is_exact_zero():
            return self
        prec = min(self.prec, other.prec)
        lo = min(self.lo, other.lo)
        hi = min(prec, max(self.lo + len(self.coeffs), other.lo + len(other.coeffs)))
        out = []
        e = lo
        while e < hi:
            a = self.coeff_known(e)
            b = other.coeff_known(e)
            out.append(a.add(b))
            e += 1
        return Series(self.field, self.depth, lo=lo, prec=prec, coeffs=out)

    def neg(self):
        if self.depth == 0:
            return Series.scalar(self.field, self.field.neg(self.value))
        return Series(
            self.field,
            self.depth,
            lo=self.lo,
            prec=self.prec,
            coeffs=[c.neg() for c in self.coeffs],
        )

    def sub(self, other):
        return self.add(other.neg())

    def scale(self, scalar):
        """Multiply by a base-field scalar."""
        if scalar == self.field.zero:
            return Series.zero(self.field, self.depth)
        if self.depth == 0:
            return Series.scalar(self.field, self.field.mul(self.value, scalar))
        return Series(
            self.field,
            self.depth,
            lo=self.lo,
            prec=self.prec,
            coeffs=[c.scale(scalar) for c in self.coeffs],
        )

    def shift_outer(self, k):
        """Multiply by t_1^k."""
        if self.depth == 0:
            raise KernelError("cannot shift a depth-0 series")
        if self.is_exact_zero():
            return self
        return Series(
            self.field,
            self.depth,
            lo=self.lo + k,
            prec=self.prec + k,
            coeffs=self.coeffs,
        )

    def mul(self, other):
        self._require_compatible(other)
        if self.depth == 0:
            return Series.scalar(self.field, self.field.mul(self.value, other.value))
        if self.is_exact_zero() or other.is_exact_zero():
            return Series.zero(self.field, self.depth)
        lo = self.lo + other.lo
        prec = min(self.lo + other.prec, other.lo + self.prec)
        hi = min(prec, self.lo + len(self.coeffs) + other.lo + len(other.coeffs) - 1)
        out = []
        e = lo
        while e < hi:
            acc = Series.zero(self.field, self.depth - 1)
            i_lo = max(self.lo, e - (other.lo + len(other.coeffs) - 1))
            i_hi = min(self.lo + len(self.coeffs) - 1, e - other.lo)
            for i in range(i_lo, i_hi + 1):
                a = self.coeffs[i - self.lo]
                b = other.coeffs[e - i - other.lo]
                acc = acc.add(a.mul(b))
            out.append(acc)
            e += 1
        return Series(self.field, self.depth, lo=lo, prec=prec, coeffs=out)

    def invert(self, length=None):
        """Multiplicative inverse, certified by the leading coefficient.

        ``length`` bounds the number of known outer coefficients of the
        result; it defaults to the known length of the input.  A series with
        an infinite window needs an explicit length unless it is a monomial
        tower (whose inverse is again exact).
        """
        if self.depth == 0:
            if self.value == self.field.zero:
                raise ZeroDivisionError("inverse of the exact zero")
            return Series.scalar(self.field, self.field.inv(self.value))
        lead = self.leading_term()
        if lead is None:
            raise ZeroDivisionError("inverse of the exact zero")
        e, c = lead
        if self.prec != INF:
            # never fabricate digits the input window cannot certify
            known = self.prec - e
            length = known if length is None else min(length, known)
        if length is None:
            if len(self.coeffs) == 1:
                inner = c.invert()
                return Series(
                    self.field, self.depth, lo=-e, coeffs=(inner,)
                )
            raise PrecisionError(
                "series is known exactly with several terms: "
                "pass an inversion length"
            )
        if length < 1:
            raise KernelError("inversion length must be positive")
        cinv = c.invert() if (c.depth == 0 or c.prec != INF or len(c.coeffs) == 1) else c.invert(length)
        ys = [cinv]
        for j in range(1, length):
            acc = Series.zero(self.field, self.depth - 1)
            for k in range(1, j + 1):
                r = self.coeff_known(e + k)
                if r is None:
                    raise PrecisionError(
                        "inversion asked beyond the certified window"
                    )
                acc = acc.add(r.mul(ys[j - k]))
            ys.append(acc.mul(cinv).neg())
        return Series(self.field, self.depth, lo=-e, prec=-e + length, coeffs=ys)

    # ---------------------------------------------------------- comparisons

    def agrees_with(self, other):
        """Equal on the intersection of the known regions (recursively)."""
        self._require_compatible(other)
        if self.depth == 0:
            return self.value == other.value
        prec = min(self.prec, other.prec)
        lo = min(self.lo, other.lo)
        hi = min(
            prec, max(self.lo + len(self.coeffs), other.lo + len(other.coeffs))
        )
        e = lo
        while e < hi:
            a = self.coeff_known(e)
            b = other.coeff_known(e)
            if not a.agrees_with(b):
                return False
            e += 1
        return True

    def known_overlap(self, other):
        """Width of the shared outer knowledge window (can be 0)."""
        prec = min(self.prec, other.prec)
        if prec == INF:
            return INF
        return max(0, prec - min(self.lo, other.lo))

    def truncate(self, prec):
        """Forget outer coefficients at exponents >= prec."""
        if self.depth == 0:
            return self
        new_prec = min(self.prec, prec)
        kept = [c for i, c in enumerate(self.coeffs) if self.lo + i < new_prec]
        return Series(self.field, self.depth, lo=self.lo, prec=new_prec, coeffs=kept)

    def truncate_tower(self, precs):
        """Apply per-level knowledge bounds, outermost first."""
        if self.depth == 0 or not precs:
            return self
        head = self.truncate(precs[0]) if precs[0] is not None else self
        if len(precs) == 1:
            return head
        return Series(
            self.field,
            self.depth,
            lo=head.lo,
            prec=head.prec,
            coeffs=[c.truncate_tower(precs[1:]) for c in head.coeffs],
        )

    def __eq__(self, other):
        return (
            isinstance(other, Series)
            and other.field == self.field
            and other.depth == self.depth
            and other.value == self.value
            and other.lo == self.lo
            and other.prec == self.prec
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.depth, self.value, self.lo, self.prec, self.coeffs))

    # ------------------------------------------------------------- printing

    def level_prec(self, level):
        """Minimum knowledge bound among all windows at the given level."""
        if self.depth == 0:
            return INF
        if level == 1:
            return self.prec
        best = INF
        for c in self.coeffs:
            best = min(best, c.level_prec(level - 1))
        return best

    def _terms(self, prefix=()):
        if self.depth == 0:
            if self.value != self.field.zero:
                yield (prefix, self.value)
            return
        for i, c in enumerate(self.coeffs):
            yield from c._terms(prefix + (self.lo + i,))

    def __str__(self):
        return self.to_text()

    def to_text(self, names=None):
        def var(level):
            if names and level in names:
                return names[level]
            return f"t{level}"

        parts = []
        for exps, scalar in sorted(self._terms(), key=lambda t: t[0]):
            factors = []
            # innermost variable first, matching the canonical display order
            for level in range(len(exps), 0, -1):
                e = exps[level - 1]
                if e == 0:
                    continue
                factors.append(var(level) + (f"^{e}" if e != 1 else ""))
            coeff_txt = self.field.fmt(scalar)
            if factors and (
                "+" in coeff_txt or " " in coeff_txt or "-" in coeff_txt[1:]
            ):
                coeff_txt = f"({coeff_txt})"
            if not factors:
                parts.append(coeff_txt)
            elif scalar == self.field.one:
                parts.append("*".join(factors))
            else:
                parts.append(coeff_txt + "*" + "*".join(factors))
        if not parts:
            parts = ["0"]
        for level in range(1, self.depth + 1):
            p = self.level_prec(level)
            if p != INF:
                parts.append(f"O({var(level)}^{p})")
        out = parts[0]
        for part in parts[1:]:
            if part.startswith("-"):
                out += " - " + part[1:]
            else:
                out += " + " + part
        return out

    def __repr__(self):
        return f"Series({self})"


def agree_on_known(x: Series, y: Series) -> bool:
    return x.agrees_with(y)
