"""Finite presentations of iterated filtered spaces and their checkers.

A depth-n presentation is a strictly increasing chain of subspaces
0 = W_0 < W_1 < ... < W_m = k^d together with a depth-(n-1) presentation on
each consecutive quotient, stored in the canonical chart of that step.
Structures on non-consecutive quotients are derived by splicing, never
stored; the compatibility of the derived structures holds by construction
and is exercised by the test suite rather than assumed as an input invariant.

The same module hosts the generic checkers (filtration axioms, domination,
morphisms, admissible triples) used both here and by the rule-given
filtrations on series carriers and adeles: any space object offering the
small sampling protocol (``sample_indices``, ``leq``, ``generators``,
``member``, ``graded_space``) can be checked.

Checkers are pure functions over immutable inputs; reports are values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import KernelError, PrecisionError
from .fields import PrimeField, RationalField
from .linalg import (
    Matrix,
    QuotientChart,
    Subspace,
    annihilator,
    image_contained,
    matrix_inverse,
    matrix_rank,
    preimage_subspace,
    subspace_meet_join,
)
from .report import Report


@dataclass(frozen=True)
class SamplePolicy:
    """Explicit sampling bounds for checks over infinite index sets.

    Defaults follow the documented policy: integer indices range over
    |i| <= index_bound (16) and at least 32 generators are drawn per
    filtration value.  ``max_pairs`` bounds how many index pairs feed the
    graded recursion at each level.
    """

    index_bound: int = 16
    generators: int = 32
    max_pairs: int = 4
    gen_extent: int = 6
    seed: int = 0

    def shrink(self):
        return SamplePolicy(
            index_bound=max(2, self.index_bound // 2),
            generators=max(4, self.generators // 2),
            max_pairs=max(2, self.max_pairs - 1),
            gen_extent=max(2, self.gen_extent - 1),
            seed=self.seed + 1,
        )


LIGHT_POLICY = SamplePolicy(index_bound=3, generators=6, max_pairs=2, gen_extent=3)


class ChainPresentation:
    """Finite nested-chain presentation of a depth-n filtered space."""

    __slots__ = ("field", "depth", "dim", "chain", "graded", "_charts")

    def __init__(self, field, depth, dim, chain=(), graded=()):
        self.field = field
        self.depth = depth
        self.dim = dim
        if depth == 0:
            if chain or graded:
                raise KernelError("depth-0 presentations carry no chain")
            self.chain = ()
            self.graded = ()
            self._charts = {}
            return
        chain = tuple(chain)
        graded = tuple(graded)
        if not chain:
            raise KernelError("depth >= 1 presentations need a chain")
        if len(graded) != len(chain) - 1:
            raise KernelError("one graded structure per consecutive step required")
        if not chain[0].is_zero():
            raise KernelError("chain must start at the zero subspace")
        if not chain[-1].is_full():
            raise KernelError("chain must end at the full space")
        # merge equal consecutive subspaces (keep the left one)
        keep_chain = [chain[0]]
        keep_graded = []
        for step, w in enumerate(chain[1:]):
            if w == keep_chain[-1]:
                continue
            if not w.contains_subspace(keep_chain[-1]) or w.dim <= keep_chain[-1].dim:
                raise KernelError("chain is not increasing")
            keep_chain.append(w)
            keep_graded.append(graded[step])
        for g, (lo, hi) in zip(keep_graded, zip(keep_chain, keep_chain[1:])):
            if g.depth != depth - 1:
                raise KernelError("graded piece depth mismatch")
            if g.dim != hi.dim - lo.dim:
                raise KernelError("graded piece dimension mismatch")
        self.chain = tuple(keep_chain)
        self.graded = tuple(keep_graded)
        self._charts = {}

    # ------------------------------------------------------------- builders

    @classmethod
    def trivial(cls, field, depth, dim):
        """The two-step presentation 0 <= k^dim with trivial graded data."""
        if depth == 0:
            return cls(field, 0, dim)
        if dim == 0:
            return cls(field, depth, 0, chain=(Subspace.zero(field, 0),), graded=())
        return cls(
            field,
            depth,
            dim,
            chain=(Subspace.zero(field, dim), Subspace.full(field, dim)),
            graded=(cls.trivial(field, depth - 1, dim),),
        )

    @classmethod
    def from_chain(cls, field, depth, chain, graded=None):
        chain = tuple(chain)
        if graded is None:
            graded = tuple(
                cls.trivial(field, depth - 1, hi.dim - lo.dim)
                for lo, hi in zip(chain, chain[1:])
                if hi.dim > lo.dim
            )
        return cls(field, depth, chain[-1].ambient, chain=chain, graded=graded)

    # ------------------------------------------------------------ structure

    def steps(self):
        return len(self.chain) - 1

    def step_chart(self, j) -> QuotientChart:
        chart = self._charts.get(j)
        if chart is None:
            chart = QuotientChart(self.chain[j], self.chain[j + 1])
            self._charts[j] = chart
        return chart

    def splice(self, i, j):
        """The induced depth-(n-1) structure on W_j / W_i.

        Its chain is the image of the intermediate subspaces; each of its
        graded pieces is the total depth-(n-2) structure carried by the
        stored consecutive piece (one level peeled off), moved into the
        canonical chart of the splice step.
        """
        if self.depth == 0:
            raise KernelError("cannot splice a depth-0 presentation")
        if not (0 <= i <= j <= self.steps()):
            raise KernelError("splice indices out of range")
        chart = QuotientChart(self.chain[i], self.chain[j])
        q = chart.dim
        if i == j:
            return ChainPresentation.trivial(self.field, self.depth - 1, 0)
        if self.depth == 1:
            return ChainPresentation(self.field, 0, q)
        new_chain = [chart.subspace_to_coords(self.chain[k]) for k in range(i, j + 1)]
        new_graded = []
        for k in range(i, j):
            inner = QuotientChart(new_chain[k - i], new_chain[k - i + 1])
            old_chart = self.step_chart(k)
            # old step-chart coordinates -> coordinates inside the splice
            cols = []
            for c in range(old_chart.dim):
                e = tuple(
                    self.field.one if r == c else self.field.zero
                    for r in range(old_chart.dim)
                )
                v = old_chart.from_coords(e)
                cols.append(inner.to_coords(chart.to_coords(v)))
            T = _matrix_from_cols(self.field, cols, inner.dim)
            piece = self.graded[k]
            collapsed = piece.splice(0, piece.steps())
            new_graded.append(collapsed.transport(T))
        return ChainPresentation(
            self.field, self.depth - 1, q, chain=new_chain, graded=new_graded
        )

    def collapse(self):
        """The total depth-(n-1) structure on the whole carrier."""
        return self.splice(0, self.steps())

    def subquotient(self, i, j):
        """The same-depth presentation induced on W_j / W_i.

        Unlike :meth:`splice` (which produces the one-level-down structure
        carried by the quotient), this restricts the chain and transports
        the stored graded pieces unchanged; it is what the sub and quotient
        legs of an admissible triple carry.
        """
        if self.depth == 0:
            raise KernelError("depth-0 presentations have no subquotients")
        if not (0 <= i <= j <= self.steps()):
            raise KernelError("subquotient indices out of range")
        chart = QuotientChart(self.chain[i], self.chain[j])
        q = chart.dim
        if i == j:
            return ChainPresentation.trivial(self.field, self.depth, 0)
        new_chain = [chart.subspace_to_coords(self.chain[k]) for k in range(i, j + 1)]
        new_graded = []
        for k in range(i, j):
            inner = QuotientChart(new_chain[k - i], new_chain[k - i + 1])
            old_chart = self.step_chart(k)
            cols = []
            for c in range(old_chart.dim):
                e = tuple(
                    self.field.one if r == c else self.field.zero
                    for r in range(old_chart.dim)
                )
                v = old_chart.from_coords(e)
                cols.append(inner.to_coords(chart.to_coords(v)))
            T = _matrix_from_cols(self.field, cols, inner.dim)
            new_graded.append(self.graded[k].transport(T))
        return ChainPresentation(
            self.field, self.depth, q, chain=new_chain, graded=new_graded
        )

    def transport(self, T: Matrix):
        """The same presentation in new coordinates v_new = T v_old."""
        if self.depth == 0:
            return self
        if matrix_rank(T) != self.dim:
            raise KernelError("transport matrix must be invertible")
        new_chain = [w.map_through(T) for w in self.chain]
        new_graded = []
        for k in range(self.steps()):
            old_chart = self.step_chart(k)
            new_chart = QuotientChart(new_chain[k], new_chain[k + 1])
            cols = []
            for c in range(old_chart.dim):
                e = tuple(
                    self.field.one if r == c else self.field.zero
                    for r in range(old_chart.dim)
                )
                cols.append(new_chart.to_coords(T.apply(old_chart.from_coords(e))))
            G = _matrix_from_cols(self.field, cols, new_chart.dim)
            new_graded.append(self.graded[k].transport(G))
        return ChainPresentation(
            self.field, self.depth, self.dim, chain=new_chain, graded=new_graded
        )

    # -------------------------------------------------- checker protocol

    def sample_indices(self, policy=None):
        return list(range(len(self.chain)))

    def leq(self, i, j):
        return i <= j

    def index_meet(self, i, j):
        return min(i, j)

    def index_join(self, i, j):
        return max(i, j)

    def filtration(self, i) -> Subspace:
        return self.chain[i]

    def generators(self, i, policy=None):
        return list(self.chain[i].basis.rows)

    def member(self, vec, i):
        return self.chain[i].contains_vector(vec)

    def graded_space(self, i, j):
        return self.splice(i, j)

    def graded_coords(self, i, j):
        chart = QuotientChart(self.chain[i], self.chain[j])
        return chart.to_coords

    def graded_is_plain(self):
        return self.depth <= 1

    def sample_elements(self, policy=None):
        """Certified-nonzero carrier vectors for union/intersection checks."""
        return [r for r in Subspace.full(self.field, self.dim).basis.rows]

    def find_index_containing(self, x):
        return len(self.chain) - 1

    def find_index_excluding(self, x):
        if self.chain[0].contains_vector(x):
            return None
        return 0

    def carrier_key(self):
        return ("finite", self.field, self.dim)

    def is_finite(self):
        return True

    # ----------------------------------------------------------- equality

    def __eq__(self, other):
        return (
            isinstance(other, ChainPresentation)
            and other.field == self.field
            and other.depth == self.depth
            and other.dim == self.dim
            and other.chain == self.chain
            and other.graded == self.graded
        )

    def __hash__(self):
        return hash((self.depth, self.dim, self.chain, self.graded))

    def __repr__(self):
        return f"ChainPresentation(depth={self.depth}, dim={self.dim}, steps={self.steps() if self.depth else 0})"

    # ------------------------------------------------------- serialization

    def to_json(self) -> dict:
        if isinstance(self.field, PrimeField):
            field_txt = f"F{self.field.p}"
        elif isinstance(self.field, RationalField):
            field_txt = "Q"
        else:
            raise KernelError("only prime and rational fields serialize")
        doc = {"field": field_txt, "depth": self.depth, "dim": self.dim}
        if self.depth >= 1:
            doc["chain"] = [
                [[self.field.fmt(c) for c in row] for row in w.basis.rows]
                for w in self.chain
            ]
            doc["graded"] = [g.to_json() for g in self.graded]
        return doc

    @classmethod
    def from_json(cls, doc, field=None):
        if field is None:
            txt = doc["field"]
            field = RationalField() if txt == "Q" else PrimeField(int(txt[1:]))
        depth, dim = doc["depth"], doc["dim"]
        if depth == 0:
            return cls(field, 0, dim)
        chain = [
            Subspace.span(field, dim, [[_parse_elt(field, c) for c in row] for row in rows])
            for rows in doc["chain"]
        ]
        graded = [cls.from_json(g, field) for g in doc["graded"]]
        return cls(field, depth, dim, chain=chain, graded=graded)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def loads(cls, text: str):
        return cls.from_json(json.loads(text))


def _parse_elt(field, text):
    if isinstance(field, RationalField):
        from fractions import Fraction

        return Fraction(str(text))
    return field.from_int(int(text))


# ---------------------------------------------------------------- functors


def complete(P: ChainPresentation):
    """Completion of a finite presentation: all limits are finite, so this
    is the presentation itself with the identity as canonical isomorphism."""
    return P, Matrix.identity(P.field, P.dim)


def dualize(P: ChainPresentation) -> ChainPresentation:
    """Contragredient presentation: annihilator chain in reversed order,
    graded pieces dualized recursively and moved into the canonical charts
    via the step pairings."""
    if P.depth == 0:
        return P
    m = P.steps()
    new_chain = [annihilator(P.chain[m - j]) for j in range(m + 1)]
    new_graded = []
    F = P.field
    for j in range(m):
        k = m - 1 - j
        old_chart = P.step_chart(k)
        new_chart = QuotientChart(new_chain[j], new_chain[j + 1])
        q = old_chart.dim
        if new_chart.dim != q:
            raise KernelError("dual chart dimension mismatch")
        # pairing of the dual step with the original step
        pairing = []
        for r in range(q):
            beta = new_chart.from_coords(
                tuple(F.one if t == r else F.zero for t in range(q))
            )
            row = []
            for c in range(q):
                b = old_chart.from_coords(
                    tuple(F.one if t == c else F.zero for t in range(q))
                )
                acc = F.zero
                for x, y in zip(beta, b):
                    acc = F.add(acc, F.mul(x, y))
                row.append(acc)
            pairing.append(row)
        G = Matrix(F, pairing)
        T = matrix_inverse(G.transpose())
        new_graded.append(dualize(P.graded[k]).transport(T))
    return ChainPresentation(F, P.depth, P.dim, chain=new_chain, graded=new_graded)


def double_dual_compare(P: ChainPresentation) -> bool:
    """Is the canonical evaluation map an isomorphism of presentations
    between the double contragredient and the completion?

    In standard coordinates the evaluation map is the identity and the
    completion of a finite presentation is the presentation itself, so this
    reduces to literal structural equality, chain by chain and recursively.
    """
    completed, _ = complete(P)
    return dualize(dualize(P)) == completed


# ------------------------------------------------------------- morphisms


class ChainMorphism:
    """A linear map between finite presentations with optional witnesses.

    When ``up``/``down`` are omitted they are derived by search, which is
    always possible on finite chains.
    """

    def __init__(self, matrix: Matrix, source: ChainPresentation,
                 target: ChainPresentation, up=None, down=None):
        if matrix.ncols != source.dim or matrix.nrows != target.dim:
            raise KernelError("morphism matrix shape mismatch")
        self.matrix = matrix
        self.source = source
        self.target = target
        self._up = up
        self._down = down

    def apply(self, vec):
        return self.matrix.apply(vec)

    def up(self, i):
        if self._up is not None:
            return self._up(i)
        W = self.source.chain[i]
        for j in range(len(self.target.chain)):
            if image_contained(self.matrix, W, self.target.chain[j]):
                return j
        raise KernelError("no admissible target index (cannot happen: last is full)")

    def down(self, j):
        if self._down is not None:
            return self._down(j)
        W = self.target.chain[j]
        best = 0
        for i in range(len(self.source.chain)):
            if image_contained(self.matrix, self.source.chain[i], W):
                best = i
            else:
                break
        return best

    def add(self, other):
        if other.source != self.source or other.target != self.target:
            raise KernelError("morphism sum needs equal endpoints")
        return ChainMorphism(
            self.matrix.add(other.matrix), self.source, self.target
        )

    def scale(self, c):
        return ChainMorphism(self.matrix.scale(c), self.source, self.target)

    def graded_cert(self, i1, i2, j1, j2):
        E1, E2 = self.source, self.target
        src_chart = QuotientChart(E1.chain[i1], E1.chain[i2])
        dst_chart = QuotientChart(E2.chain[j1], E2.chain[j2])
        cols = []
        for c in range(src_chart.dim):
            e = tuple(
                E1.field.one if r == c else E1.field.zero
                for r in range(src_chart.dim)
            )
            v = src_chart.from_coords(e)
            cols.append(dst_chart.to_coords(self.matrix.apply(v)))
        B = _matrix_from_cols(E1.field, cols, dst_chart.dim)
        G1 = E1.splice(i1, i2)
        G2 = E2.splice(j1, j2)
        return ChainMorphism(B, G1, G2), G1, G2


def compose_certificates(f, g):
    """The certificate of g after f (f first)."""
    if hasattr(f, "matrix") and hasattr(g, "matrix"):
        if f.target != g.source:
            raise KernelError("compose: codomain of f must be the domain of g")
        up = None
        down = None
        if f._up is not None and g._up is not None:
            up = lambda i: g._up(f._up(i))
        if f._down is not None and g._down is not None:
            down = lambda j: f._down(g._down(j))
        return ChainMorphism(
            g.matrix.matmul(f.matrix), f.source, g.target, up=up, down=down
        )
    return f.compose_after(g)


# ---------------------------------------------------------------- checkers


def check_filtered_axioms(space, policy=None, rng=None) -> Report:
    """Monotonicity, directedness, and union/intersection on samples."""
    policy = policy or SamplePolicy()
    rep = Report()
    idx = space.sample_indices(policy)
    # monotone: F(i) subset F(j) for sampled i <= j, via generators
    for a in idx:
        for b in idx:
            if space.leq(a, b) and a != b:
                ok = all(space.member(g, b) for g in space.generators(a, policy))
                rep.add(f"monotone {a}->{b}", ok)
    # directedness: sampled pairs admit lower and upper bounds in the poset
    for a in idx[: policy.max_pairs * 2]:
        for b in idx[: policy.max_pairs * 2]:
            lo = space.index_meet(a, b)
            hi = space.index_join(a, b)
            rep.add(
                f"directed {a},{b}",
                space.leq(lo, a) and space.leq(lo, b) and space.leq(a, hi) and space.leq(b, hi),
            )
    # union covers sampled carrier elements; intersection excludes them
    elems = space.sample_elements(policy) if hasattr(space, "sample_elements") else []
    for n, x in enumerate(elems):
        above = space.find_index_containing(x)
        below = space.find_index_excluding(x)
        ok_above = above is not None and space.member(x, above)
        ok_below = below is not None and not space.member(x, below)
        rep.add(f"union covers elem {n}", ok_above)
        rep.add(f"intersection avoids elem {n}", ok_below)
    return rep


def check_domination(space1, space2, phi, policy=None) -> bool:
    """Does (I_1, F_1) dominate (I_2, F_2) via the order map phi: I_2 -> I_1?

    Checks F_1(phi(i)) = F_2(i) on sampled indices (mutual generator
    membership) and the two-sided cofinality of the image of phi.
    Both spaces must present filtrations of the same carrier.
    """
    policy = policy or SamplePolicy()
    if getattr(space1, "carrier_key", lambda: None)() != getattr(
        space2, "carrier_key", lambda: None
    )():
        raise KernelError("domination needs a shared carrier")
    idx2 = space2.sample_indices(policy)
    # order preservation of phi on the sample
    for a in idx2:
        for b in idx2:
            if space2.leq(a, b) and not space1.leq(phi(a), phi(b)):
                return False
    # F_1(phi(i)) == F_2(i), checked by mutual generator membership
    for i in idx2:
        j = phi(i)
        if not all(space1.member(g, j) for g in space2.generators(i, policy)):
            return False
        if not all(space2.member(g, i) for g in space1.generators(j, policy)):
            return False
    # cofinality: each sampled j in I_1 is sandwiched by images of phi
    for j in space1.sample_indices(policy):
        lower = any(space1.leq(phi(i), j) for i in idx2)
        upper = any(space1.leq(j, phi(i)) for i in idx2)
        if not (lower and upper) and hasattr(space2, "sandwich"):
            pair = space2.sandwich(j)
            if pair is not None:
                i1, i2 = pair
                lower = space1.leq(phi(i1), j)
                upper = space1.leq(j, phi(i2))
        if not (lower and upper):
            return False
    return True


def _pair_samples(idx, policy, leq=None):
    pairs = []
    n = len(idx)
    for a in range(n):
        for b in range(a, n):
            if leq is None or leq(idx[a], idx[b]):
                pairs.append((idx[a], idx[b]))
    step = max(1, len(pairs) // max(1, policy.max_pairs))
    return pairs[::step][: policy.max_pairs]


def check_morphism(cert, E1, E2, policy=None) -> Report:
    """Verify a morphism certificate between two filtered-space objects.

    Conditions: (1) each sampled source index maps below the witnessed
    target index; (2) each sampled target index is reached from the
    witnessed source index; (3) sampled induced graded maps are recursively
    certified one depth down.  Index samples come back in each space's own
    order; witness monotonicity is checked on comparable pairs.
    """
    policy = policy or SamplePolicy()
    rep = Report()
    idx1 = list(E1.sample_indices(policy))
    idx2 = list(E2.sample_indices(policy))
    ups = {n: cert.up(i) for n, i in enumerate(idx1)}
    rep.add("up is order-preserving", all(
        E2.leq(ups[a], ups[b])
        for a in range(len(idx1))
        for b in range(len(idx1))
        if E1.leq(idx1[a], idx1[b])
    ))
    downs = {n: cert.down(j) for n, j in enumerate(idx2)}
    rep.add("down is order-preserving", all(
        E1.leq(downs[a], downs[b])
        for a in range(len(idx2))
        for b in range(len(idx2))
        if E2.leq(idx2[a], idx2[b])
    ))
    for n, i in enumerate(idx1):
        j = ups[n]
        ok = all(E2.member(cert.apply(g), j) for g in E1.generators(i, policy))
        rep.add(f"cond1 @{i}", ok, f"image of F({i}) not inside F({j})" if not ok else "")
    for n, j in enumerate(idx2):
        i = downs[n]
        ok = all(E2.member(cert.apply(g), j) for g in E1.generators(i, policy))
        rep.add(f"cond2 @{j}", ok, f"image of F({i}) not inside F({j})" if not ok else "")
    if getattr(E1, "graded_is_plain", lambda: E1.depth <= 1)():
        return rep
    if not rep.passed:
        # condition 3 presupposes the containments of conditions 1-2
        return rep
    for i1, i2 in _pair_samples(idx1, policy, leq=E1.leq):
        if i1 == i2:
            continue
        j1, j2 = cert.up(i1), cert.up(i2)
        if not E2.leq(j1, j2) or j1 == j2:
            continue
        try:
            sub_cert, G1, G2 = cert.graded_cert(i1, i2, j1, j2)
        except (PrecisionError, KernelError) as exc:
            rep.add(f"graded[{i1},{i2}] extraction", False, str(exc))
            continue
        sub = check_morphism(sub_cert, G1, G2, policy.shrink())
        rep.merge(sub, prefix=f"graded[{i1},{i2}] ")
    return rep


# ------------------------------------------------------- admissible triples


@dataclass
class TriplePresentation:
    E1: object
    E2: object
    E3: object
    inj: object  # linear map V1 -> V2
    surj: object  # linear map V2 -> V3


def sub_quotient_triple(P: ChainPresentation, idx: int) -> TriplePresentation:
    """The admissible triple 0 -> W_idx -> V -> V/W_idx -> 0 with the
    induced same-depth presentations on the sub and quotient legs."""
    E1 = P.subquotient(0, idx)
    E3 = P.subquotient(idx, P.steps())
    lo_chart = QuotientChart(Subspace.zero(P.field, P.dim), P.chain[idx])
    hi_chart = QuotientChart(P.chain[idx], P.chain[-1])
    inj = lo_chart.lift_matrix()
    surj = hi_chart.proj_matrix()
    return TriplePresentation(E1, P, E3, inj, surj)


def check_admissible_triple(T: TriplePresentation, policy=None) -> Report:
    policy = policy or SamplePolicy()
    if isinstance(T.E2, ChainPresentation):
        return _check_admissible_finite(T, policy)
    return T.E2.check_admissible_triple(T, policy)


def _check_admissible_finite(T: TriplePresentation, policy) -> Report:
    rep = Report()
    E1, E2, E3 = T.E1, T.E2, T.E3
    F = E2.field
    inj, surj = T.inj, T.surj
    # (a) exactness of the carrier sequence
    rep.add("inj is injective", matrix_rank(inj) == E1.dim)
    rep.add("surj is surjective", matrix_rank(surj) == E3.dim)
    comp = surj.matmul(inj)
    rep.add(
        "surj after inj vanishes",
        all(c == F.zero for row in comp.rows for c in row),
    )
    rep.add(
        "kernel of surj is the image of inj",
        matrix_rank(inj) == E2.dim - matrix_rank(surj),
    )
    if not rep.passed:
        return rep
    image = Subspace.span(
        F, E2.dim, [inj.apply(_unit(F, E1.dim, c)) for c in range(E1.dim)]
    )
    # (b) induced sub-filtration values must occur in E1's chain
    phi1 = []
    for i, W in enumerate(E2.chain):
        meet = _intersect(W, image)
        pre = _preimage_through(inj, meet, E1.dim)
        hit = _find_in_chain(E1, pre)
        rep.add(f"sub-filtration value {i} occurs in E1", hit is not None)
        phi1.append(hit)
    # (c) induced quotient-filtration values must occur in E3's chain
    phi3 = []
    for i, W in enumerate(E2.chain):
        img = W.map_through(surj, target_ambient=E3.dim)
        hit = _find_in_chain(E3, img)
        rep.add(f"quotient-filtration value {i} occurs in E3", hit is not None)
        phi3.append(hit)
    if not rep.passed:
        return rep
    rep.add("phi1 order-preserving", all(a <= b for a, b in zip(phi1, phi1[1:])))
    rep.add("phi3 order-preserving", all(a <= b for a, b in zip(phi3, phi3[1:])))
    if E2.depth <= 1:
        # graded triples are plain finite-dimensional: exactness is a rank count
        for (i, j) in _pair_samples(list(range(len(E2.chain))), policy):
            d_mid = E2.chain[j].dim - E2.chain[i].dim
            d_sub = E1.chain[phi1[j]].dim - E1.chain[phi1[i]].dim
            d_quot = E3.chain[phi3[j]].dim - E3.chain[phi3[i]].dim
            rep.add(
                f"graded triple ({i},{j}) exact",
                d_mid == d_sub + d_quot,
            )
        return rep
    for (i, j) in _pair_samples(list(range(len(E2.chain))), policy):
        if i == j:
            continue
        triple = _graded_triple(T, phi1, phi3, i, j)
        sub = _check_admissible_finite(triple, policy.shrink())
        rep.merge(sub, prefix=f"graded({i},{j}) ")
    return rep


def _graded_triple(T, phi1, phi3, i, j) -> TriplePresentation:
    E1, E2, E3 = T.E1, T.E2, T.E3
    F = E2.field
    G1 = E1.splice(phi1[i], phi1[j])
    G2 = E2.splice(i, j)
    G3 = E3.splice(phi3[i], phi3[j])
    c1 = QuotientChart(E1.chain[phi1[i]], E1.chain[phi1[j]])
    c2 = QuotientChart(E2.chain[i], E2.chain[j])
    c3 = QuotientChart(E3.chain[phi3[i]], E3.chain[phi3[j]])
    inj_cols = [
        c2.to_coords(T.inj.apply(c1.from_coords(_unit(F, c1.dim, c))))
        for c in range(c1.dim)
    ]
    surj_cols = [
        c3.to_coords(T.surj.apply(c2.from_coords(_unit(F, c2.dim, c))))
        for c in range(c2.dim)
    ]
    inj = _matrix_from_cols(F, inj_cols, c2.dim)
    surj = _matrix_from_cols(F, surj_cols, c3.dim)
    return TriplePresentation(G1, G2, G3, inj, surj)


def _matrix_from_cols(F, cols, nrows):
    rows = [tuple(c[i] for c in cols) for i in range(nrows)]
    return Matrix(F, rows, ncols=len(cols))


def _unit(F, n, c):
    return tuple(F.one if r == c else F.zero for r in range(n))


def _intersect(U: Subspace, W: Subspace) -> Subspace:
    return subspace_meet_join(U, W)[0]


def _preimage_through(inj: Matrix, W: Subspace, source_dim: int) -> Subspace:
    pre = preimage_subspace(inj, W)
    if pre.ambient != source_dim:
        raise KernelError("preimage dimension mismatch")
    return pre


def _find_in_chain(E: ChainPresentation, W: Subspace):
    for idx, X in enumerate(E.chain):
        if X == W:
            return idx
    return None
