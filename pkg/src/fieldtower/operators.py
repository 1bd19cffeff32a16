"""Banded endomorphisms of iterated Laurent fields.

An operator on the depth-n field is an infinite matrix over the
endomorphisms of the depth-(n-1) field, indexed by outer exponents, with a
nondecreasing divergent band function a: entries (i, j) vanish for
j < a(i).  The divergence index d(k) = min{ j : a(j) > k } is stored
alongside a because composition needs this generalized inverse and a scan
alone cannot certify divergence; d(k) may be the -infinity sentinel when a
exceeds k everywhere.

Rows are demand-driven: only entries inside requested windows are ever
materialized, and the per-operator cache is lock-protected so concurrent
readers observe consistent values.  Operator equality is never decided;
comparisons are window-restricted.
"""

from __future__ import annotations

import threading

from .errors import CertificationError, KernelError, PrecisionError
from .report import Report
from .series import INF, Series
from .spaces import SamplePolicy

NEG_INF = float("-inf")


class Band:
    """A nondecreasing divergent band with its divergence index."""

    __slots__ = ("a", "d")

    def __init__(self, a, d):
        self.a = a
        self.d = d

    @staticmethod
    def shift(v):
        return Band(lambda i: i + v, lambda k: k - v + 1)

    @staticmethod
    def affine(slope, offset):
        if slope < 1:
            raise KernelError("affine band needs slope >= 1 to diverge")

        def d(k):
            # min j with slope*j + offset > k
            return (k - offset) // slope + 1

        return Band(lambda i: slope * i + offset, d)

    @staticmethod
    def floor_shift(v, floor):
        """a(i) = max(i + v, floor); d hits -inf below the floor."""

        def d(k):
            if k < floor:
                return NEG_INF
            return k - v + 1

        return Band(lambda i: max(i + v, floor), d)

    @staticmethod
    def compose(outer, inner):
        """Band of outer∘inner as operators (inner applied first)."""

        def a(i):
            return outer.a(inner.a(i))

        def d(k):
            db = outer.d(k)
            if db == NEG_INF:
                return NEG_INF
            return inner.d(db - 1)

        return Band(a, d)

    @staticmethod
    def union(b1, b2):
        """Band of a sum of operators: pointwise min, divergence max."""
        return Band(
            lambda i: min(b1.a(i), b2.a(i)),
            lambda k: max(b1.d(k), b2.d(k)),
        )


def divergence_scan(band, k, lo=-32, hi=32) -> bool:
    """Brute-force check of d(k) against a scan of a on [lo, hi]."""
    brute = None
    for j in range(lo, hi + 1):
        if band.a(j) > k:
            brute = j
            break
    stored = band.d(k)
    if stored == NEG_INF or stored < lo:
        return brute == lo and band.a(lo) > k
    if stored > hi:
        return brute is None
    return brute == stored and band.a(stored) > k and (
        stored <= lo or band.a(stored - 1) <= k
    )


class BandedOperator:
    """A banded infinite matrix acting on depth-n series.

    ``rule(i, j)`` yields the entry: a field scalar at depth 1, a
    depth-(n-1) BandedOperator above.  ``col_bound(i)`` is the exclusive
    bound of the known columns in row i (INF for exactly-known operators);
    application never claims output coefficients that unknown entries could
    touch.
    """

    def __init__(self, field, depth, band, rule, col_bound=None, zero_flag=False,
                 name=""):
        if depth < 1:
            raise KernelError("operators act on series of depth >= 1")
        self.field = field
        self.depth = depth
        self.band = band
        self._rule = rule
        self.col_bound = col_bound or (lambda i: INF)
        self.zero_flag = zero_flag
        self.name = name
        self._cache = {}
        self._lock = threading.Lock()

    # ------------------------------------------------------------- entries

    def zero_entry(self):
        if self.depth == 1:
            return self.field.zero
        return BandedOperator.zero(self.field, self.depth - 1)

    def raw_entry(self, i, j):
        """The rule value, including below the band (for band audits)."""
        key = (i, j)
        with self._lock:
            hit = self._cache.get(key)
        if hit is not None:
            return hit
        val = self._rule(i, j)
        with self._lock:
            self._cache.setdefault(key, val)
        return val

    def entry(self, i, j):
        if j < self.band.a(i):
            return self.zero_entry()
        return self.raw_entry(i, j)

    # ------------------------------------------------------------- algebra

    @classmethod
    def zero(cls, field, depth):
        def rule(i, j):
            return field.zero if depth == 1 else cls.zero(field, depth - 1)

        return cls(field, depth, Band.shift(0), rule, zero_flag=True, name="0")

    @classmethod
    def identity(cls, field, depth):
        def rule(i, j):
            if depth == 1:
                return field.one if i == j else field.zero
            return (
                cls.identity(field, depth - 1)
                if i == j
                else cls.zero(field, depth - 1)
            )

        return cls(field, depth, Band.shift(0), rule, name="id")

    def add(self, other):
        if other.depth != self.depth or other.field != self.field:
            raise KernelError("operator sum needs matching depth and field")
        band = Band.union(self.band, other.band)

        def rule(i, j):
            a, b = self.entry(i, j), other.entry(i, j)
            if self.depth == 1:
                return self.field.add(a, b)
            return a.add(b)

        def col(i):
            return min(self.col_bound(i), other.col_bound(i))

        return BandedOperator(
            self.field, self.depth, band, rule, col_bound=col,
            zero_flag=self.zero_flag and other.zero_flag,
        )

    def scale(self, c):
        def rule(i, j):
            e = self.entry(i, j)
            if self.depth == 1:
                return self.field.mul(c, e)
            return e.scale(c)

        return BandedOperator(
            self.field, self.depth, self.band, rule, col_bound=self.col_bound,
            zero_flag=self.zero_flag or c == self.field.zero,
        )

    def apply(self, x: Series, prec=None) -> Series:
        """Apply to a series; the output window is the band image of the
        input window, capped by what the known entries can determine."""
        if not isinstance(x, Series) or x.depth != self.depth:
            raise KernelError("operator/series depth mismatch")
        if x.field != self.field:
            raise KernelError("operator/series field mismatch")
        if x.is_exact_zero():
            return Series.zero(self.field, self.depth)
        a = self.band.a
        lo_out = a(x.lo)
        if x.prec != INF:
            out_prec = a(x.prec)
        elif prec is not None:
            out_prec = prec
        else:
            out_prec = a(x.lo + max(len(x.coeffs), 1))
        if prec is not None:
            out_prec = min(out_prec, prec)
        rows = [
            (x.lo + off, c)
            for off, c in enumerate(x.coeffs)
            if not c.is_exact_zero()
        ]
        for i, _ in rows:
            out_prec = min(out_prec, self.col_bound(i))
        coeffs = []
        j = lo_out
        while j < out_prec:
            if self.depth == 1:
                acc = self.field.zero
                for i, c in rows:
                    if j >= a(i):
                        acc = self.field.add(
                            acc, self.field.mul(self.entry(i, j), c.value)
                        )
                coeffs.append(Series.scalar(self.field, acc))
            else:
                acc = Series.zero(self.field, self.depth - 1)
                for i, c in rows:
                    if j >= a(i):
                        acc = acc.add(self.entry(i, j).apply(c))
                coeffs.append(acc)
            j += 1
        return Series.from_coeffs(
            self.field, self.depth, lo_out, coeffs, prec=out_prec
        )

    def __repr__(self):
        return f"BandedOperator(depth={self.depth}{', ' + self.name if self.name else ''})"


def compose(B: BandedOperator, A: BandedOperator) -> BandedOperator:
    """The operator B∘A (A applied first), with the composed band."""
    if B.depth != A.depth or B.field != A.field:
        raise KernelError("compose needs matching depth and field")
    field, depth = A.field, A.depth
    band = Band.compose(B.band, A.band)

    def rule(i, k):
        top = B.band.d(k)
        if top == NEG_INF:
            return field.zero if depth == 1 else BandedOperator.zero(field, depth - 1)
        lo = A.band.a(i)
        if depth == 1:
            acc = field.zero
            for j in range(lo, top):
                acc = field.add(acc, field.mul(B.entry(j, k), A.entry(i, j)))
            return acc
        acc = BandedOperator.zero(field, depth - 1)
        for j in range(lo, top):
            acc = acc.add(compose(B.entry(j, k), A.entry(i, j)))
        return acc

    def col(i):
        ca = A.col_bound(i)
        bound = B.col_bound(A.band.a(i))
        if ca != INF:
            bound = min(bound, B.band.a(ca))
        return bound

    return BandedOperator(
        field, depth, band, rule, col_bound=col,
        zero_flag=A.zero_flag or B.zero_flag,
    )


def operator_zero_on_window(op: BandedOperator, window=range(-3, 4)) -> bool:
    """Window-restricted zero test; equality of operators is never decided
    beyond this."""
    if op.zero_flag:
        return True
    for i in window:
        for j in window:
            v = op.raw_entry(i, j)
            if op.depth == 1:
                if v != op.field.zero:
                    return False
            elif not operator_zero_on_window(v, window):
                return False
    return True


def check_band(A: BandedOperator, window=range(-8, 9), policy=None) -> Report:
    """Audit the band certificate: monotonicity and divergence of a,
    consistency of d, vanishing below the band, and sampled entries."""
    policy = policy or SamplePolicy()
    rep = Report()
    idx = list(window)
    a = A.band.a
    rep.add("a nondecreasing", all(a(i) <= a(i + 1) for i in idx[:-1]))
    for k in idx:
        rep.add(
            f"divergence at {k}",
            divergence_scan(A.band, k, lo=idx[0] - 8, hi=idx[-1] + 8),
        )
    probe = 3
    for i in idx:
        for j in range(a(i) - probe, a(i)):
            val = A.raw_entry(i, j)
            rep.add(
                f"vanishes below band ({i},{j})",
                _entry_zero_quick(val, A),
            )
    if A.depth >= 2:
        for i in idx[:: max(1, len(idx) // 3)]:
            j = a(i)
            try:
                inner = A.raw_entry(i, j)
            except PrecisionError:
                continue
            if not inner.zero_flag:
                sub = check_band(inner, range(idx[0] // 2, idx[-1] // 2 + 1), policy)
                rep.merge(sub, prefix=f"entry({i},{j}) ")
    return rep


def _entry_zero_quick(val, op: BandedOperator):
    if op.depth == 1:
        return val == op.field.zero
    return operator_zero_on_window(val)


# ----------------------------------------------------- concrete operators


def scalar_mult(u: Series) -> BandedOperator:
    """The multiplication operator by a certified-nonzero series u."""
    if u.depth < 1:
        raise KernelError("multiplication operators need depth >= 1 series")
    lead = u.leading_term()
    if lead is None:
        raise CertificationError("multiplication by the exact zero: use the zero operator")
    v = lead[0]
    field, depth = u.field, u.depth

    def rule(i, j):
        c = u.coeff_known(j - i)
        if c is None:
            raise PrecisionError(
                f"entry ({i},{j}) is outside the known window of the multiplier"
            )
        if depth == 1:
            return c.value
        if c.is_exact_zero():
            return BandedOperator.zero(field, depth - 1)
        return _mult_entry(c)

    def col(i):
        return i + u.prec

    return BandedOperator(
        field, depth, Band.shift(v), rule, col_bound=col, name=f"mul({u})"
    )


def _mult_entry(c: Series) -> BandedOperator:
    """Multiplication by an inner coefficient, using its support bound as
    band (no nonzero certificate needed below the top level)."""
    field, depth = c.field, c.depth

    def rule(i, j):
        cc = c.coeff_known(j - i)
        if cc is None:
            raise PrecisionError("entry outside the multiplier window")
        if depth == 1:
            return cc.value
        if cc.is_exact_zero():
            return BandedOperator.zero(field, depth - 1)
        return _mult_entry(cc)

    return BandedOperator(
        field, depth, Band.shift(c.lo), rule,
        col_bound=lambda i: i + c.prec, name=f"mul({c})",
    )


def shift_op(field, depth, k) -> BandedOperator:
    return scalar_mult(Series.monomial(field, depth, (k,) + (0,) * (depth - 1)))


def interleave_embed(grid, m) -> BandedOperator:
    """Conjugate an m-by-m matrix of operators into one operator.

    Exponent e on the target encodes (slot, index) by e = m*j + i - 1 with
    1 <= i <= m; the matrix acts on the m interleaved copies.
    """
    if m < 1 or len(grid) != m or any(len(row) != m for row in grid):
        raise KernelError("embed needs an m-by-m grid")
    first = grid[0][0]
    field, depth = first.field, first.depth
    if all(op.zero_flag for row in grid for op in row):
        return BandedOperator.zero(field, depth)

    def decode(e):
        return e // m, e % m + 1  # (j, i)

    def class_band(i):  # 1-based class; zero entries impose nothing
        def b(j):
            vals = [
                m * grid[c][i - 1].band.a(j) + c
                for c in range(m)
                if not grid[c][i - 1].zero_flag
            ]
            return min(vals) if vals else None
        return b

    def a_env(e):
        best = None
        for cls in range(1, m + 1):
            jj = -((-(e - cls + 1)) // m)  # smallest j with m*j + cls-1 >= e
            val = class_band(cls)(jj)
            if val is None:
                continue
            best = val if best is None else min(best, val)
        if best is None:
            raise KernelError("embed of the zero grid has no band")
        return best

    def d_env(k):
        worst = NEG_INF
        for cls in range(1, m + 1):
            dcls = NEG_INF
            for c in range(m):
                if grid[c][cls - 1].zero_flag:
                    continue
                dv = grid[c][cls - 1].band.d((k - c) // m)
                dcls = max(dcls, dv)
            if dcls == NEG_INF:
                continue
            worst = max(worst, m * (dcls - 1) + cls)
        return worst

    def rule(e, e2):
        j, i = decode(e)
        j2, c1 = decode(e2)
        return grid[c1 - 1][i - 1].entry(j, j2)

    def col(e):
        j, i = decode(e)
        best = INF
        for c in range(m):
            cb = grid[c][i - 1].col_bound(j)
            if cb == INF:
                continue
            best = min(best, m * cb + c)
        return best

    zero_all = all(op.zero_flag for row in grid for op in row)
    return BandedOperator(
        field, depth, Band(a_env, d_env), rule, col_bound=col,
        zero_flag=zero_all, name=f"embed({m})",
    )


def direct_sum_embed(ops) -> BandedOperator:
    """The diagonal embedding of a tuple of operators."""
    m = len(ops)
    if m < 1:
        raise KernelError("direct sum needs at least one operator")
    field, depth = ops[0].field, ops[0].depth
    zero = BandedOperator.zero(field, depth)
    grid = [
        [ops[c] if c == i else zero for i in range(m)] for c in range(m)
    ]
    return interleave_embed(grid, m)


def is_exact_polynomial(x: Series) -> bool:
    if x.depth == 0:
        return True
    return x.prec == INF and all(is_exact_polynomial(c) for c in x.coeffs)


def toroidal_element(field, m, entries) -> BandedOperator:
    """Embed a matrix of Laurent polynomials as a single operator."""
    if len(entries) != m or any(len(row) != m for row in entries):
        raise KernelError("toroidal element needs an m-by-m matrix")
    grid = []
    for row in entries:
        ops = []
        for u in row:
            if not is_exact_polynomial(u):
                raise KernelError("toroidal entries must be exact Laurent polynomials")
            if u.is_exact_zero():
                ops.append(BandedOperator.zero(field, u.depth if u.depth else 1))
            else:
                ops.append(scalar_mult(u))
        grid.append(ops)
    return interleave_embed(grid, m)


# --------------------------------------------- the unbanded continuous map


def counterexample_apply(x: Series) -> Series:
    """The depth-2 continuous map that no band accommodates.

    Kills every monomial with a nonnegative exponent in either variable;
    sends t2^l t1^-1 (l < 0) to t2^l t1^(l-1).
    """
    if x.depth != 2:
        raise KernelError("the counterexample acts on depth-2 series")
    field = x.field
    c = x.coeff_known(-1)
    if c is None:
        raise PrecisionError(
            "the coefficient of t1^-1 is entirely unknown at this precision"
        )
    top = min(c.prec, 0)
    terms = {}
    for l in range(c.lo, top):
        s = c.coeff(l)
        if s.value != field.zero:
            terms[l - 1] = Series.monomial(field, 1, (l,), s.value)
    prec = INF if c.prec >= 0 else c.prec - 1
    if not terms:
        return Series.zero(field, 2, prec=prec)
    lo = min(terms)
    width = max(terms) - lo + 1
    coeffs = [
        terms.get(lo + off, Series.zero(field, 1)) for off in range(width)
    ]
    return Series.from_coeffs(field, 2, lo, coeffs, prec=prec)


def counterexample_witness(field, j: int):
    """A monomial in E_{-1} whose image escapes E_j.

    Returns (x, image) with x = t2^l t1^-1 for l = min(j, -1) - 1; the image
    has outer exponent l - 1 < j, defeating any claimed band value at -1.
    """
    l = min(j, -1) - 1
    x = Series.monomial(field, 2, (-1, l))
    image = Series.monomial(field, 2, (l - 1, l))
    return x, image


class RawKMap:
    """An arbitrary window-respecting linear rule on series (not banded)."""

    def __init__(self, field, depth, fn, name=""):
        self.field = field
        self.depth = depth
        self.fn = fn
        self.name = name

    def apply(self, x: Series, prec=None) -> Series:
        if x.depth != self.depth:
            raise KernelError("map/series depth mismatch")
        y = self.fn(x)
        return y if prec is None else y.truncate(prec)


def counterexample_map(field) -> RawKMap:
    return RawKMap(field, 2, counterexample_apply, name="counterexample")


# ------------------------------------------------------------ basic opens

ALL = "all"
ZERO = "zero"


class BasicOpen:
    """A basic open subspace: per-exponent opens below a tail index.

    Membership constrains coefficients at exponents below ``tail``: each
    must lie in the depth-(n-1) open given by ``opens`` (falling back to
    ``default``); ALL imposes nothing, ZERO demands exact vanishing.
    """

    def __init__(self, depth, tail, opens=None, default=ALL, name=""):
        self.depth = depth
        self.tail = tail
        self.opens = dict(opens or {})
        self.default = default
        self.name = name

    def open_at(self, e):
        return self.opens.get(e, self.default)

    def contains(self, x: Series) -> bool:
        if x.depth != self.depth:
            raise KernelError("open/series depth mismatch")
        if x.prec < self.tail:
            raise PrecisionError("series window too short to test the open")
        for off, c in enumerate(x.coeffs):
            e = x.lo + off
            if e >= self.tail:
                break
            constraint = self.open_at(e)
            if constraint == ALL:
                continue
            if constraint == ZERO:
                if not c.is_exact_zero():
                    return False
            else:
                if not constraint.contains(c):
                    return False
        return True

    def __repr__(self):
        return self.name or f"BasicOpen(tail={self.tail})"


def integral_part_open(field, depth) -> BasicOpen:
    """t^0 k[[t]] one level down, used as the per-exponent open."""
    if depth == 1:
        return BasicOpen(1, 0, default=ZERO, name="k[[t]]")
    return BasicOpen(
        depth, 0, default=integral_part_open(field, depth - 1),
        name="O" * depth,
    )


def counterexample_kernel_open(field) -> BasicOpen:
    """The kill-space of the counterexample as a basic open: every
    coefficient below exponent 0 must be integral one level down."""
    return BasicOpen(2, 0, default=integral_part_open(field, 1), name="U")


def monomials_in_box(field, depth, bound):
    import itertools

    for exps in itertools.product(range(-bound, bound + 1), repeat=depth):
        yield Series.monomial(field, depth, exps)


def continuity_check(f, preimage: BasicOpen, target: BasicOpen, bound=4,
                     require_zero=False) -> Report:
    """Verify on all monomials within the exponent box that members of the
    candidate preimage open map into the target open."""
    rep = Report()
    tested = 0
    for mono in monomials_in_box(f.field, f.depth, bound):
        if not preimage.contains(mono):
            continue
        image = f.apply(mono) if hasattr(f, "apply") else f(mono)
        tested += 1
        try:
            inside = target.contains(image)
        except PrecisionError:
            inside = False
        if require_zero and not image.is_exact_zero():
            rep.add(f"image of {mono} vanishes", False, str(image))
            continue
        if not inside:
            rep.add(f"image of {mono} inside target", False, str(image))
    rep.add(f"all {tested} preimage monomials map into the target", True)
    return rep


# --------------------------------------------- morphism certificates on K


class SeriesMap:
    """A matrix of banded operators as a morphism certificate between
    series tuple spaces, with witnesses derived from the bands."""

    def __init__(self, field, depth, grid):
        self.field = field
        self.depth = depth
        self.grid = [list(row) for row in grid]
        self.out_width = len(self.grid)
        self.in_width = len(self.grid[0]) if self.grid else 0
        for row in self.grid:
            if len(row) != self.in_width:
                raise KernelError("ragged certificate grid")
            for op in row:
                if op.depth != depth:
                    raise KernelError("certificate entry depth mismatch")

    @classmethod
    def from_operator(cls, A: BandedOperator):
        return cls(A.field, A.depth, [[A]])

    def apply(self, xs):
        if isinstance(xs, Series):
            xs = (xs,)
        if len(xs) != self.in_width:
            raise KernelError("certificate width mismatch")
        out = []
        for row in self.grid:
            total = None
            for op, x in zip(row, xs):
                y = op.apply(x)
                total = y if total is None else total.add(y)
            out.append(total)
        return tuple(out)

    def up(self, i):
        vals = []
        for row in self.grid:
            for op in row:
                vals.append(-op.band.a(-i))
        return max(vals)

    def down(self, j):
        # the binding constraint over all entries; entries whose band
        # already clears the level impose nothing.  The all-unconstrained
        # fallback grows with j so the witness stays order-preserving
        # (sound for bands displacing less than the 64 margin).
        finite = []
        for row in self.grid:
            for op in row:
                dv = op.band.d(-j - 1)
                if dv != NEG_INF:
                    finite.append(dv)
        if not finite:
            return j + 64
        return -max(finite)

    def graded_cert(self, i1, i2, j1, j2):
        """The induced certificate between graded pieces, one depth down."""
        from .localfield import SeriesSpace

        if self.depth < 2:
            raise KernelError("graded certificates need depth >= 2")
        src_exps = list(range(-i2, -i1))
        dst_exps = list(range(-j2, -j1))
        new_grid = []
        for c2 in range(self.out_width):
            for e2 in dst_exps:
                row = []
                for c1 in range(self.in_width):
                    for e1 in src_exps:
                        row.append(self.grid[c2][c1].entry(e1, e2))
                new_grid.append(row)
        cert = SeriesMap(self.field, self.depth - 1, new_grid)
        G1 = SeriesSpace(self.field, self.depth - 1, self.in_width * len(src_exps))
        G2 = SeriesSpace(self.field, self.depth - 1, self.out_width * len(dst_exps))
        return cert, G1, G2

    def compose_after(self, g: "SeriesMap") -> "SeriesMap":
        """The certificate of g∘self (self applied first)."""
        if g.in_width != self.out_width:
            raise KernelError("certificate widths do not compose")
        grid = []
        for c in range(g.out_width):
            row = []
            for k in range(self.in_width):
                acc = None
                for j in range(self.out_width):
                    term = compose(g.grid[c][j], self.grid[j][k])
                    acc = term if acc is None else acc.add(term)
                row.append(acc)
            grid.append(row)
        return SeriesMap(self.field, self.depth, grid)


class RawCertificate:
    """A raw map plus claimed witnesses; exists to be refuted."""

    def __init__(self, raw: RawKMap, up, down):
        self.raw = raw
        self.field = raw.field
        self.depth = raw.depth
        self._up = up
        self._down = down

    def apply(self, xs):
        if isinstance(xs, Series):
            return (self.raw.apply(xs),)
        return tuple(self.raw.apply(x) for x in xs)

    def up(self, i):
        return self._up(i)

    def down(self, j):
        return self._down(j)

    def graded_cert(self, i1, i2, j1, j2):
        raise KernelError("raw maps carry no graded structure")
