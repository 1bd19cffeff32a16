"""Adeles on the projective line over a prime field.

Closed points are monic irreducible polynomials in the affine coordinate t
plus the point at infinity (uniformizer 1/t).  Rank-one torsion-free
subsheaves of the function field are exactly the divisor twists here, so
the coherent-subsheaf filtration is indexed by divisors: F(D) = the adeles
with pole bounded by D.  Every graded piece is finite-dimensional over the
base field, with an explicit local monomial basis; all dimension claims
are settled by exact row reduction over that basis, and separately by
degree bookkeeping on polynomials, giving two independent routes.

An adele holds finitely many local expansions plus a tail certificate:
components off the support are either exactly zero or merely known
integral; queries the windows cannot settle raise PrecisionError.
"""

from __future__ import annotations

from . import polys
from .errors import KernelError, PrecisionError
from .fields import PrimeField, ResidueField
from .linalg import Matrix, Subspace, matrix_rank, nullspace, subspace_meet_join
from .report import Report
from .series import INF, Series
from .spaces import ChainPresentation, SamplePolicy, TriplePresentation


class ClosedPoint:
    """A monic irreducible polynomial in t, or the point at infinity."""

    __slots__ = ("field", "poly", "degree", "_residue")

    def __init__(self, field: PrimeField, poly=None):
        self.field = field
        if poly is None:
            self.poly = None
            self.degree = 1
        else:
            poly = polys.normalize(field, poly)
            if not polys.is_monic(field, poly):
                raise KernelError("closed points need monic polynomials")
            if not polys.is_irreducible(field, poly):
                raise KernelError(f"{polys.fmt(field, poly)} is not irreducible")
            self.poly = poly
            self.degree = polys.degree(poly)
        self._residue = None

    @classmethod
    def infinity(cls, field):
        return cls(field, None)

    @property
    def is_infinity(self):
        return self.poly is None

    def residue_field(self) -> ResidueField:
        if self._residue is None:
            modulus = (0, 1) if self.is_infinity else self.poly
            self._residue = ResidueField(self.field, modulus)
        return self._residue

    def sort_key(self):
        if self.is_infinity:
            return (1, ())
        return (0, (self.degree,) + self.poly)

    def __eq__(self, other):
        return (
            isinstance(other, ClosedPoint)
            and other.field == self.field
            and other.poly == self.poly
        )

    def __hash__(self):
        return hash((self.field, self.poly))

    def __repr__(self):
        return self.fmt()

    def fmt(self):
        if self.is_infinity:
            return "inf"
        return f"({polys.fmt(self.field, self.poly)})"


def enumerate_points(field, max_degree):
    """All closed points of degree <= max_degree, infinity last."""
    pts = [ClosedPoint(field, f) for f in polys.monic_irreducibles(field, max_degree)]
    pts.append(ClosedPoint.infinity(field))
    return sorted(pts, key=ClosedPoint.sort_key)


class Divisor:
    """A finite formal integer combination of closed points."""

    __slots__ = ("field", "items")

    def __init__(self, field, items=None):
        self.field = field
        self.items = {P: m for P, m in (items or {}).items() if m != 0}

    @classmethod
    def of_point(cls, P, mult=1):
        return cls(P.field, {P: mult})

    @classmethod
    def zero(cls, field):
        return cls(field)

    def mult(self, P):
        return self.items.get(P, 0)

    def support(self):
        return sorted(self.items, key=ClosedPoint.sort_key)

    def degree(self):
        return sum(P.degree * m for P, m in self.items.items())

    def add(self, other):
        out = dict(self.items)
        for P, m in other.items.items():
            out[P] = out.get(P, 0) + m
        return Divisor(self.field, out)

    def neg(self):
        return Divisor(self.field, {P: -m for P, m in self.items.items()})

    def sub(self, other):
        return self.add(other.neg())

    def meet(self, other):
        pts = set(self.items) | set(other.items)
        return Divisor(
            self.field, {P: min(self.mult(P), other.mult(P)) for P in pts}
        )

    def join(self, other):
        pts = set(self.items) | set(other.items)
        return Divisor(
            self.field, {P: max(self.mult(P), other.mult(P)) for P in pts}
        )

    def leq(self, other):
        pts = set(self.items) | set(other.items)
        return all(self.mult(P) <= other.mult(P) for P in pts)

    def __eq__(self, other):
        return (
            isinstance(other, Divisor)
            and other.field == self.field
            and other.items == self.items
        )

    def __hash__(self):
        return hash((self.field, frozenset(self.items.items())))

    def fmt(self):
        if not self.items:
            return "[]"
        parts = [f"{P.fmt()}:{m}" for P, m in sorted(
            self.items.items(), key=lambda kv: kv[0].sort_key()
        )]
        return "[" + ", ".join(parts) + "]"

    def __repr__(self):
        return self.fmt()


# ------------------------------------------------------- local expansions


def _expand_ratio(res: ResidueField, pi, num, den, v, lo_prec, prec):
    """Digits of num/den in the pi-adic completion, starting at valuation v."""
    F = res.base
    digits = []
    n, d = num, den
    d_res = res.from_poly(d)
    d_inv = res.inv(d_res)
    for _ in range(lo_prec, prec):
        a = res.mul(res.from_poly(n), d_inv)
        digits.append(Series.scalar(res, a))
        lift = tuple(a)
        n = polys.sub(F, n, polys.mul(F, lift, d))
        q, r = polys.divmod_(F, n, pi)
        if r:
            raise KernelError("digit extraction failed to clear the uniformizer")
        n = q
    return digits


def local_expansion(field, num, den, P: ClosedPoint, prec) -> Series:
    """The Laurent expansion of num/den at P over its residue field.

    The window is [valuation, prec); f = 0 yields the exact zero.
    """
    num = polys.normalize(field, num)
    den = polys.normalize(field, den)
    if not den:
        raise ZeroDivisionError("zero denominator")
    res = P.residue_field()
    if not num:
        return Series.zero(res, 1)
    if P.is_infinity:
        pi = (0, 1)
        v = polys.degree(den) - polys.degree(num)
        n1 = polys.normalize(field, tuple(reversed(num)))
        d1 = polys.normalize(field, tuple(reversed(den)))
    else:
        pi = P.poly
        vn = polys.ord_at(field, num, pi)
        vd = polys.ord_at(field, den, pi)
        v = vn - vd
        n1 = num
        for _ in range(vn):
            n1 = polys.divmod_(field, n1, pi)[0]
        d1 = den
        for _ in range(vd):
            d1 = polys.divmod_(field, d1, pi)[0]
    if prec <= v:
        return Series.zero(res, 1, prec=prec)
    digits = _expand_ratio(res, pi, n1, d1, v, v, prec)
    return Series.from_coeffs(res, 1, v, digits, prec=prec)


def function_valuation(field, num, den, P: ClosedPoint) -> int:
    """ord_P(num/den), exactly, without expanding."""
    num = polys.normalize(field, num)
    den = polys.normalize(field, den)
    if not num:
        raise ZeroDivisionError("valuation of the zero function")
    if P.is_infinity:
        return polys.degree(den) - polys.degree(num)
    return polys.ord_at(field, num, P.poly) - polys.ord_at(field, den, P.poly)


def function_divisor(field, num, den) -> Divisor:
    """div(num/den) as a divisor (zeros positive, poles negative)."""
    num = polys.normalize(field, num)
    den = polys.normalize(field, den)
    if not num:
        raise ZeroDivisionError("divisor of the zero function")
    items = {}
    top = max(polys.degree(num), polys.degree(den), 1)
    for f in polys.monic_irreducibles(field, top):
        P = ClosedPoint(field, f)
        v = function_valuation(field, num, den, P)
        if v:
            items[P] = v
    v_inf = polys.degree(den) - polys.degree(num)
    if v_inf:
        items[ClosedPoint.infinity(field)] = v_inf
    return Divisor(field, items)


def pole_divisor(field, num, den) -> Divisor:
    d = function_divisor(field, num, den)
    return Divisor(field, {P: -m for P, m in d.items.items() if m < 0})


# ----------------------------------------------------------------- adeles

TAIL_ZERO = "zero"
TAIL_INTEGRAL = "integral"


class Adele:
    """Finitely many local expansions plus a tail certificate.

    Components off the support set are exactly zero (tail \"zero\") or only
    known to be integral (tail \"integral\").  Rational backing makes every
    component computable on demand.
    """

    def __init__(self, field, components=None, tail=TAIL_ZERO, backing=None):
        self.field = field
        self.components = dict(components or {})
        self.tail = tail
        self.backing = backing

    @classmethod
    def diagonal(cls, field, num, den):
        num = polys.normalize(field, num)
        den = polys.normalize(field, den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        return cls(field, {}, tail=TAIL_ZERO, backing=(num, den))

    @classmethod
    def monomial(cls, field, P, exponent, residue_coeff=None):
        res = P.residue_field()
        if residue_coeff is None:
            residue_coeff = res.one
        series = Series.monomial(res, 1, (exponent,), residue_coeff)
        return cls(field, {P: series}, tail=TAIL_ZERO)

    def support(self):
        pts = set(self.components)
        if self.backing is not None:
            pts |= set(pole_divisor(self.field, *self.backing).items)
        return sorted(pts, key=ClosedPoint.sort_key)

    def component(self, P, prec=8) -> Series:
        stored = self.components.get(P)
        if stored is not None:
            return stored
        if self.backing is not None:
            return local_expansion(self.field, self.backing[0], self.backing[1], P, prec)
        if self.tail == TAIL_ZERO:
            return Series.zero(P.residue_field(), 1)
        return Series.zero(P.residue_field(), 1, prec=0)

    def coefficient_at(self, P, j):
        """The residue-field coefficient of u_P^j, or PrecisionError."""
        stored = self.components.get(P)
        if stored is not None:
            return stored.coeff(j).value
        if self.backing is not None:
            return self.component(P, prec=j + 1).coeff(j).value
        if self.tail == TAIL_ZERO:
            return P.residue_field().zero
        if j < 0:
            return P.residue_field().zero
        raise PrecisionError(
            f"component at {P.fmt()} only certified integral; "
            f"coefficient at {j} unknown"
        )

    def add(self, other):
        if other.field != self.field:
            raise KernelError("adele field mismatch")
        if (
            self.backing is not None
            and other.backing is not None
            and not self.components
            and not other.components
        ):
            n1, d1 = self.backing
            n2, d2 = other.backing
            F = self.field
            num = polys.add(F, polys.mul(F, n1, d2), polys.mul(F, n2, d1))
            return Adele.diagonal(F, num, polys.mul(F, d1, d2))
        pts = set(self.components) | set(other.components)
        if self.backing is not None or other.backing is not None:
            pts |= set(self.support()) | set(other.support())
        comps = {P: self.component(P).add(other.component(P)) for P in pts}
        tail = (
            TAIL_ZERO
            if self.tail == other.tail == TAIL_ZERO and self.backing is None
            and other.backing is None
            else TAIL_INTEGRAL
        )
        return Adele(self.field, comps, tail=tail)

    def scale_function(self, num, den):
        """Multiply by a rational function."""
        F = self.field
        if self.backing is not None and not self.components:
            n0, d0 = self.backing
            return Adele.diagonal(F, polys.mul(F, n0, num), polys.mul(F, d0, den))
        poles = pole_divisor(F, num, den)
        pts = set(self.components) | set(poles.items)
        comps = {}
        for P in pts:
            mine = self.component(P)
            if mine.is_exact_zero() and self.tail == TAIL_ZERO and P not in self.components:
                comps[P] = mine
                continue
            width = (len(mine.coeffs) + 2) if mine.prec == INF else (mine.prec - mine.lo)
            fP = local_expansion(F, num, den, P, function_valuation(F, num, den, P) + max(width, 1))
            comps[P] = mine.mul(fP)
        return Adele(F, comps, tail=self.tail)


def adele_membership(a: Adele, D: Divisor) -> bool:
    """Is every local valuation bounded below by -D, tail included?"""
    pts = set(a.support()) | set(D.items)
    for P in pts:
        bound = -D.mult(P)
        stored = a.components.get(P)
        if stored is not None:
            if not _series_val_at_least(stored, bound):
                return False
            continue
        if a.backing is not None:
            num, den = a.backing
            if not polys.normalize(a.field, num):
                continue
            if function_valuation(a.field, num, den, P) < bound:
                return False
            continue
        if a.tail == TAIL_ZERO:
            continue
        if bound > 0:
            raise PrecisionError(
                f"tail only certifies integrality at {P.fmt()}, bound {bound} unknown"
            )
    return True


def _series_val_at_least(x: Series, bound) -> bool:
    from .localfield import filtration_member

    return filtration_member(x, bound)


# ------------------------------------------------------ truncation charts


class TruncationChart:
    """Exact coordinates on A(D_hi)/A(D_lo) from local monomial bases."""

    def __init__(self, D_hi: Divisor, D_lo: Divisor):
        if not D_lo.leq(D_hi):
            raise KernelError("chart needs D_lo <= D_hi")
        self.field = D_hi.field
        self.hi = D_hi
        self.lo = D_lo
        self.blocks = []
        for P in D_hi.sub(D_lo).support():
            res = P.residue_field()
            for j in range(-D_hi.mult(P), -D_lo.mult(P)):
                for b in range(P.degree):
                    self.blocks.append((P, j, b))
        self.dim = len(self.blocks)

    def to_coords(self, a: Adele):
        out = []
        cache = {}
        for P, j, b in self.blocks:
            key = (P, j)
            if key not in cache:
                cache[key] = a.coefficient_at(P, j)
            coeff = cache[key]
            out.append(P.residue_field().coords(coeff)[b])
        return tuple(out)

    def basis_adeles(self):
        out = []
        for P, j, b in self.blocks:
            res = P.residue_field()
            coeff = res.from_coords(
                tuple(1 if t == b else 0 for t in range(P.degree))
            )
            out.append(Adele.monomial(self.field, P, j, coeff))
        return out

    def subspace_from_divisor(self, D: Divisor) -> Subspace:
        """The image of A(D ∧ D_hi) in these coordinates."""
        Dc = D.meet(self.hi)
        vecs = []
        for P, j, b in self.blocks:
            if j >= -Dc.mult(P):
                res = P.residue_field()
                coeff = res.from_coords(
                    tuple(1 if t == b else 0 for t in range(P.degree))
                )
                vecs.append(self.to_coords(Adele.monomial(self.field, P, j, coeff)))
        return Subspace.span(self.field, self.dim, vecs)


def quotient_dim(D1: Divisor, D2: Divisor) -> int:
    """dim A(O(D1))/A(O(D2)) by explicit local bases and row reduction."""
    if not D2.leq(D1):
        raise KernelError("quotient_dim needs D2 <= D1")
    chart = TruncationChart(D1, D2)
    vecs = [chart.to_coords(a) for a in chart.basis_adeles()]
    return Subspace.span(chart.field, chart.dim, vecs).dim


def skyscraper_dim(D1: Divisor, D2: Divisor) -> int:
    """The same dimension from polynomial degrees: the sections of the
    torsion quotient sheaf, counted point by point."""
    total = 0
    for P in D1.sub(D2).support():
        k = D1.mult(P) - D2.mult(P)
        if k < 0:
            raise KernelError("quotient needs D2 <= D1")
        if P.is_infinity:
            total += k
        else:
            power = (1,)
            for _ in range(k):
                power = polys.mul(P.field, power, P.poly)
            total += polys.degree(power)
    return total


def check_exactness(D1: Divisor, D2: Divisor) -> Report:
    """Compare the adelic quotient dimension with the independent
    skyscraper-section count."""
    rep = Report()
    adelic = quotient_dim(D1, D2)
    sections = skyscraper_dim(D1, D2)
    rep.add(
        "adelic quotient matches skyscraper sections",
        adelic == sections,
        f"{adelic} vs {sections}",
    )
    rep.add(
        "degree formula",
        adelic == D1.degree() - D2.degree(),
        f"{adelic} vs {D1.degree() - D2.degree()}",
    )
    return rep


def meet_join_identity(D1: Divisor, D2: Divisor, pad: Divisor = None) -> Report:
    """Verify A(D1∧D2) = A(D1) ∩ A(D2) and A(D1∨D2) = A(D1) + A(D2) on a
    truncation, via the subspace lattice."""
    rep = Report()
    lo = D1.meet(D2)
    hi = D1.join(D2)
    if pad is None:
        P = hi.support()[0] if hi.support() else ClosedPoint.infinity(D1.field)
        pad = Divisor.of_point(P, 1)
    floor = lo.sub(pad)
    chart = TruncationChart(hi, floor)
    U1 = chart.subspace_from_divisor(D1)
    U2 = chart.subspace_from_divisor(D2)
    Umeet = chart.subspace_from_divisor(lo)
    Ujoin = chart.subspace_from_divisor(hi)
    meet, join = subspace_meet_join(U1, U2)
    rep.add("intersection is the meet twist", meet == Umeet)
    rep.add("sum is the join twist", join == Ujoin)
    rep.add(
        "diagram dimensions",
        join.dim - U1.dim == U2.dim - meet.dim,
        f"{join.dim}-{U1.dim} vs {U2.dim}-{meet.dim}",
    )
    return rep


# ------------------------------------------------------- the C_1 structure


class AdeleSpace:
    """The adele carrier filtered by divisors: F(D) = A(O(D)).

    ``cap`` restricts the index poset to divisors <= cap (the filtration of
    a subsheaf twist); ``index_filter`` further restricts it (used for
    cofinal-subfamily checks).
    """

    depth = 1

    def __init__(self, field, point_bound=2, cap=None, index_filter=None):
        self.field = field
        self.point_bound = point_bound
        self.points = enumerate_points(field, point_bound)
        self.cap = cap
        self.index_filter = index_filter

    # ------------------------------------------------------------ protocol

    def sample_indices(self, policy=None):
        policy = policy or SamplePolicy()
        P1 = self.points[0]
        P2 = self.points[1] if len(self.points) > 1 else self.points[0]
        base = []
        bound = min(policy.index_bound, 3)
        for k in range(-bound, bound + 1):
            base.append(Divisor(self.field, {P1: k}))
            base.append(Divisor(self.field, {P1: k, P2: abs(k) // 2}))
        base.append(Divisor.zero(self.field))
        out = []
        for D in base:
            if self.cap is not None:
                D = D.meet(self.cap)
            if self.index_filter is not None and not self.index_filter(D):
                continue
            if D not in out:
                out.append(D)
        out.sort(key=lambda D: (D.degree(), D.fmt()))
        return out

    def leq(self, D1, D2):
        return D1.leq(D2)

    def index_meet(self, D1, D2):
        return D1.meet(D2)

    def index_join(self, D1, D2):
        J = D1.join(D2)
        return J if self.cap is None else J.meet(self.cap)

    def member(self, a, D):
        return adele_membership(a, D)

    def generators(self, D, policy=None):
        policy = policy or SamplePolicy()
        out = []
        pts = list(D.support()) + [
            P for P in self.points[:2] if P not in D.items
        ]
        for off in range(policy.gen_extent):
            for P in pts:
                res = P.residue_field()
                for b in range(P.degree):
                    coeff = res.from_coords(
                        tuple(1 if t == b else 0 for t in range(P.degree))
                    )
                    out.append(
                        Adele.monomial(self.field, P, -D.mult(P) + off, coeff)
                    )
                    if len(out) >= policy.generators:
                        return out
        return out

    def sample_elements(self, policy=None):
        out = []
        for P in self.points[:2]:
            for j in (-2, -1, 0, 1):
                out.append(Adele.monomial(self.field, P, j))
        out.append(Adele.diagonal(self.field, (1,), (0, 1)))
        return out

    def find_index_containing(self, a):
        items = {}
        for P in a.support():
            try:
                v = _adele_component_valuation(a, P)
            except PrecisionError:
                return None
            if v is not None and v < 0:
                items[P] = -v
        D = Divisor(self.field, items)
        if self.cap is not None and not D.leq(self.cap):
            return None
        return D

    def find_index_excluding(self, a):
        for P in a.support():
            try:
                v = _adele_component_valuation(a, P)
            except PrecisionError:
                continue
            if v is not None:
                return Divisor(self.field, {P: -v - 1})
        return None

    def graded_is_plain(self):
        return True

    def graded_space(self, D2, D1):
        if not D2.leq(D1):
            raise KernelError("graded space needs increasing divisors")
        chart = TruncationChart(D1, D2)
        return ChainPresentation(self.field, 0, chart.dim)

    def graded_coords(self, D2, D1):
        chart = TruncationChart(D1, D2)
        return chart.to_coords

    def sandwich(self, D):
        """Indices of this space below and above D (cofinality witnesses)."""
        lower = upper = None
        P1 = self.points[0]
        for k in (0, -1, -2, 1, 2):
            cand = D.add(Divisor(self.field, {P1: k}))
            if self.index_filter is not None and not self.index_filter(cand):
                continue
            if self.cap is not None and not cand.leq(self.cap):
                continue
            if lower is None and cand.leq(D):
                lower = cand
            if upper is None and D.leq(cand):
                upper = cand
        if lower is None or upper is None:
            return None
        return lower, upper

    def carrier_key(self):
        cap_key = None if self.cap is None else frozenset(self.cap.items.items())
        return ("adele", self.field, cap_key)

    def is_finite(self):
        return False

    # -------------------------------------------- admissible triple checks

    def check_admissible_triple(self, T: TriplePresentation, policy) -> Report:
        return _check_adelic_triple(T, policy)

    def __repr__(self):
        cap = "" if self.cap is None else f", cap={self.cap.fmt()}"
        return f"AdeleSpace(F{self.field.p}{cap})"


def _adele_component_valuation(a: Adele, P):
    stored = a.components.get(P)
    if stored is not None:
        if stored.is_exact_zero():
            return None
        return stored.valuation()[0]
    if a.backing is not None:
        num, den = a.backing
        if not polys.normalize(a.field, num):
            return None
        return function_valuation(a.field, num, den, P)
    return None if a.tail == TAIL_ZERO else 0


def c1_structure(field, point_bound=2) -> AdeleSpace:
    """The adelic filtered space over divisors, graded by finite pieces."""
    return AdeleSpace(field, point_bound=point_bound)


# --------------------------------------------- multiplication certificates


class FunctionMultiplication:
    """Multiplication by a nonzero rational function as a certificate.

    Witnesses shift by the pole divisor on both sides: poles cost room
    going up, and demanding room at the poles buys membership going down.
    """

    def __init__(self, field, num, den):
        num = polys.normalize(field, num)
        den = polys.normalize(field, den)
        if not num:
            raise KernelError("multiplication by zero is not a certified morphism")
        if not den:
            raise ZeroDivisionError("zero denominator")
        self.field = field
        self.num = num
        self.den = den
        self.poles = pole_divisor(field, num, den)

    def apply(self, a: Adele) -> Adele:
        return a.scale_function(self.num, self.den)

    def up(self, D: Divisor) -> Divisor:
        return D.add(self.poles)

    def down(self, D: Divisor) -> Divisor:
        return D.sub(self.poles)

    def graded_cert(self, i1, i2, j1, j2):
        raise KernelError("adelic graded pieces are plain; no recursion")


def mult_by_function_certificate(field, num, den) -> FunctionMultiplication:
    return FunctionMultiplication(field, num, den)


# ------------------------------------------------- adelic triple checking


def divisor_step_triple(space: AdeleSpace, D: Divisor, P: ClosedPoint):
    """The triple A(D-P) -> A(D) -> skyscraper at P."""
    step = Divisor.of_point(P, 1)
    sub_divisor = D.sub(step)
    E1 = AdeleSpace(space.field, space.point_bound, cap=sub_divisor)
    E2 = AdeleSpace(space.field, space.point_bound, cap=D)
    E3 = ChainPresentation.trivial(space.field, 1, P.degree)
    chart = TruncationChart(D, sub_divisor)

    def inj(a):
        return a

    def surj(a):
        return chart.to_coords(a)

    T = TriplePresentation(E1, E2, E3, inj, surj)
    T.divisor = D
    T.point = P
    return T


def _check_adelic_triple(T: TriplePresentation, policy) -> Report:
    rep = Report()
    E2 = T.E2
    field = E2.field
    D = T.divisor
    P = T.point
    step = Divisor.of_point(P, 1)
    sub_divisor = D.sub(step)
    # the supplied legs must actually present the claimed step
    rep.add(
        "sub index cap matches the step",
        getattr(T.E1, "cap", None) == sub_divisor,
    )
    rep.add(
        "quotient dimension matches the point degree",
        getattr(T.E3, "dim", None) == P.degree,
    )
    if not rep.passed:
        return rep
    pad = Divisor.of_point(P, 1).add(
        Divisor.of_point(E2.points[0], 1)
    )
    floor = sub_divisor.sub(pad)
    chart = TruncationChart(D, floor)
    # (a) exactness of carriers on the truncation, using the supplied maps
    U1 = chart.subspace_from_divisor(sub_divisor)
    full = chart.subspace_from_divisor(D)
    rep.add("middle truncation is full", full.dim == chart.dim)
    surj_cols = [tuple(T.surj(T.inj(a))) for a in chart.basis_adeles()]
    quot_dim = len(surj_cols[0]) if surj_cols else 0
    rep.add("surjection lands in the quotient leg", quot_dim == T.E3.dim)
    S = Matrix(
        field,
        [tuple(c[r] for c in surj_cols) for r in range(quot_dim)],
        ncols=len(surj_cols),
    )
    rep.add("surjection is onto the skyscraper", matrix_rank(S) == P.degree)
    kernel = nullspace(S)
    rep.add(
        "kernel of the surjection is the sub twist",
        kernel == U1,
        f"dims {kernel.dim} vs {U1.dim}",
    )
    if not rep.passed:
        return rep
    # (b) sub filtration: A(D') ∩ A(D-P) = A(D' ∧ (D-P)) on samples
    samples = E2.sample_indices(policy)
    for Dp in samples[: policy.max_pairs * 2]:
        UD = chart.subspace_from_divisor(Dp)
        meet, _ = subspace_meet_join(UD, U1)
        expected = chart.subspace_from_divisor(Dp.meet(sub_divisor))
        rep.add(
            f"sub filtration at {Dp.fmt()}",
            meet == expected,
        )
    # (c) quotient filtration: image of A(D') is the skyscraper twist
    for Dp in samples[: policy.max_pairs * 2]:
        vecs = [
            tuple(T.surj(a))
            for a in TruncationChart(Dp.meet(D), floor.meet(Dp.meet(D))).basis_adeles()
        ]
        img = Subspace.span(field, T.E3.dim, vecs)
        expect_full = not Dp.meet(D).leq(sub_divisor)
        rep.add(
            f"quotient filtration at {Dp.fmt()}",
            img.dim == (P.degree if expect_full else 0),
        )
    # (d) graded triples are exact, by two independent dimension counts
    for Da in samples[: policy.max_pairs]:
        for Db in samples[: policy.max_pairs]:
            if not Da.leq(Db) or Da == Db:
                continue
            mid = quotient_dim(Db, Da)
            sub_d = quotient_dim(Db.meet(sub_divisor), Da.meet(sub_divisor))
            quot_d = mid - sub_d
            sky = skyscraper_dim(Db, Da) - skyscraper_dim(
                Db.meet(sub_divisor), Da.meet(sub_divisor)
            )
            rep.add(
                f"graded triple {Da.fmt()} <= {Db.fmt()}",
                quot_d == sky and 0 <= quot_d <= P.degree,
            )
    return rep
