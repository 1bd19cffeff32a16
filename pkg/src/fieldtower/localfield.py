"""The filtered-space structure carried by iterated Laurent fields.

The field K of depth-n series is filtered by the tail subspaces
E_l = t_1^l K̄[[t_1]] (everything with outer valuation at least l); we index
increasingly as F(i) = E_{-i}.  Each graded piece E_{l1}/E_{l2} is a tuple
of depth-(n-1) series (one per outer exponent) carrying the same kind of
filtration one variable down, so the whole tower is handled by a single
carrier: width-w tuples of depth-m series under the uniform outer-valuation
bound.  Membership of a truncated series is decided from its window or not
at all.
"""

from __future__ import annotations

from .errors import KernelError, PrecisionError
from .series import Series
from .spaces import ChainPresentation, SamplePolicy


def filtration_member(x: Series, l: int) -> bool:
    """Is x in E_l, i.e. does every nonzero coefficient sit at exponent >= l?

    Decides from the window: True on the support bound, False on a
    certified nonzero coefficient below l, PrecisionError otherwise.
    """
    if x.depth < 1:
        raise KernelError("membership needs a series of depth >= 1")
    if x.lo >= l:
        return True
    top = min(l, x.prec)
    for e in range(x.lo, top):
        c = x.coeff_known(e)
        if c.is_exact_zero():
            continue
        if c.is_certified_nonzero():
            return False
        raise PrecisionError(
            f"coefficient at exponent {e} is not decided at this precision"
        )
    if x.prec >= l:
        return True
    raise PrecisionError(
        f"membership in E_{l} undecidable: window ends at {x.prec}"
    )


def graded_image(x: Series, l1: int, l2: int):
    """The image of x in E_{l1}/E_{l2}: its coefficients at [l1, l2).

    Requires certified membership in E_{l1} and a window covering [l1, l2).
    """
    if l1 >= l2:
        raise KernelError("graded image needs l1 < l2")
    if not filtration_member(x, l1):
        raise KernelError(f"series is not in E_{l1}")
    if x.prec < l2:
        raise PrecisionError(
            f"window ends at {x.prec}, cannot read coefficients up to {l2}"
        )
    return [x.coeff(e) for e in range(l1, l2)]


class SeriesSpace:
    """Width-w tuples of depth-n series with the uniform tail filtration.

    F(i) holds the tuples all of whose components lie in E_{-i}.  The width
    is 1 for the field itself; graded pieces widen by the window length and
    drop one depth, ending in plain finite-dimensional spaces.
    """

    def __init__(self, field, depth, width=1):
        if depth < 1:
            raise KernelError("series spaces need depth >= 1")
        if width < 1:
            raise KernelError("series spaces need width >= 1")
        self.field = field
        self.depth = depth
        self.width = width

    # ------------------------------------------------------------ protocol

    def sample_indices(self, policy=None):
        policy = policy or SamplePolicy()
        return list(range(-policy.index_bound, policy.index_bound + 1))

    def leq(self, i, j):
        return i <= j

    def index_meet(self, i, j):
        return min(i, j)

    def index_join(self, i, j):
        return max(i, j)

    def member(self, xs, i):
        xs = self._as_tuple(xs)
        return all(filtration_member(x, -i) for x in xs)

    def generators(self, i, policy=None):
        """Exactly-known monomial tuples spanning into F(i), deterministic."""
        policy = policy or SamplePolicy()
        out = []
        inner_cycle = [0, 1, -1, 2, -2]
        n = 0
        for e_off in range(policy.gen_extent):
            for c in range(self.width):
                inner = inner_cycle[n % len(inner_cycle)]
                exps = (-i + e_off,) + tuple(
                    (inner + lvl) % 3 - 1 for lvl in range(self.depth - 1)
                )
                mono = Series.monomial(self.field, self.depth, exps)
                out.append(self._unit_tuple(c, mono))
                n += 1
                if n >= policy.generators:
                    return out
        return out

    def sample_elements(self, policy=None):
        policy = policy or SamplePolicy()
        out = []
        for v in range(-2, 3):
            exps = (v,) + tuple(0 for _ in range(self.depth - 1))
            out.append(self._unit_tuple(0, Series.monomial(self.field, self.depth, exps)))
        return out[: max(3, policy.max_pairs)]

    def find_index_containing(self, xs):
        xs = self._as_tuple(xs)
        try:
            return max(-x.valuation()[0] for x in xs if x.is_certified_nonzero())
        except (ValueError, PrecisionError):
            return None

    def find_index_excluding(self, xs):
        i = self.find_index_containing(xs)
        return None if i is None else i - 1

    def graded_is_plain(self):
        return self.depth <= 1

    def graded_space(self, i, j):
        """F(j)/F(i) for i <= j: a narrower-depth, wider tuple space."""
        if i > j:
            raise KernelError("graded space needs i <= j")
        w = self.width * (j - i)
        if self.depth == 1:
            return ChainPresentation(self.field, 0, w)
        if w == 0:
            return ChainPresentation(self.field, 0, 0)
        return SeriesSpace(self.field, self.depth - 1, w)

    def graded_coords(self, i, j):
        """Map a tuple in F(j) to the graded carrier of F(j)/F(i).

        Component order: outer component major, exponent minor, exponents
        running over [-j, -i).
        """

        def to_graded(xs):
            xs = self._as_tuple(xs)
            parts = []
            for x in xs:
                parts.extend(graded_image(x, -j, -i))
            if self.depth == 1:
                return tuple(p.value for p in parts)
            return tuple(parts)

        return to_graded

    def carrier_key(self):
        return ("series", self.field, self.depth, self.width)

    def is_finite(self):
        return False

    # -------------------------------------------------------------- helpers

    def _as_tuple(self, xs):
        if isinstance(xs, Series):
            xs = (xs,)
        xs = tuple(xs)
        if len(xs) != self.width:
            raise KernelError("tuple width mismatch")
        for x in xs:
            if x.depth != self.depth:
                raise KernelError("component depth mismatch")
        return xs

    def _unit_tuple(self, c, x):
        return tuple(
            x if k == c else Series.zero(self.field, self.depth)
            for k in range(self.width)
        )

    def zero_tuple(self):
        return tuple(Series.zero(self.field, self.depth) for _ in range(self.width))

    def __repr__(self):
        return f"SeriesSpace(depth={self.depth}, width={self.width})"

    def __eq__(self, other):
        return (
            isinstance(other, SeriesSpace)
            and other.field == self.field
            and other.depth == self.depth
            and other.width == self.width
        )

    def __hash__(self):
        return hash(("SeriesSpace", self.field, self.depth, self.width))


def as_zfiltered(field, depth) -> SeriesSpace:
    """The depth-n field packaged for the generic filtration checkers."""
    return SeriesSpace(field, depth, width=1)
