"""Exact dense linear algebra over a configured field.

Matrices are immutable grids of field elements; subspaces are stored by
their reduced-row-echelon basis, so subspace equality is literal equality
of the canonical form.  Everything downstream (filtration checks, duality,
adelic truncations) reduces to the handful of lattice operations here.
"""

from __future__ import annotations

from .errors import KernelError


class Matrix:
    """Immutable matrix over an exact field; rows of canonical elements.

    Degenerate shapes (no rows) keep an explicit column count so that
    compositions with zero-dimensional spaces stay well-typed.
    """

    __slots__ = ("field", "rows", "_ncols")

    def __init__(self, field, rows, ncols=None):
        rows = tuple(tuple(r) for r in rows)
        if rows:
            n = len(rows[0])
            if any(len(r) != n for r in rows):
                raise KernelError("ragged matrix rows")
            if ncols is not None and ncols != n:
                raise KernelError("ncols hint disagrees with rows")
            ncols = n
        self.field = field
        self.rows = rows
        self._ncols = ncols if ncols is not None else 0

    @classmethod
    def from_int_rows(cls, field, rows, ncols=None):
        return cls(
            field, [[field.from_int(c) for c in row] for row in rows], ncols=ncols
        )

    @classmethod
    def zeros(cls, field, nrows, ncols):
        z = field.zero
        return cls(field, [[z] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def identity(cls, field, n):
        z, o = field.zero, field.one
        return cls(
            field,
            [[o if i == j else z for j in range(n)] for i in range(n)],
            ncols=n,
        )

    @property
    def nrows(self):
        return len(self.rows)

    @property
    def ncols(self):
        return self._ncols

    def get(self, i, j):
        return self.rows[i][j]

    def row(self, i):
        return self.rows[i]

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other.rows == self.rows
        )

    def __hash__(self):
        return hash((self.field, self.rows))

    def __repr__(self):
        return f"Matrix({self.rows!r})"

    def add(self, other):
        F = self.field
        self._check_same_shape(other)
        return Matrix(
            F,
            [
                [F.add(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.rows, other.rows)
            ],
            ncols=self.ncols,
        )

    def sub(self, other):
        return self.add(other.scale(self.field.neg(self.field.one)))

    def scale(self, c):
        F = self.field
        return Matrix(
            F, [[F.mul(c, a) for a in row] for row in self.rows], ncols=self.ncols
        )

    def matmul(self, other):
        F = self.field
        if self.ncols != other.nrows:
            raise KernelError("matmul shape mismatch")
        cols = [
            tuple(r[j] for r in other.rows) for j in range(other.ncols)
        ]
        out = []
        for row in self.rows:
            new_row = []
            for col in cols:
                acc = F.zero
                for a, b in zip(row, col):
                    acc = F.add(acc, F.mul(a, b))
                new_row.append(acc)
            out.append(new_row)
        return Matrix(F, out, ncols=other.ncols)

    def apply(self, vec):
        """Matrix times column vector, returned as a tuple."""
        F = self.field
        if len(vec) != self.ncols:
            raise KernelError("apply dimension mismatch")
        out = []
        for row in self.rows:
            acc = F.zero
            for a, b in zip(row, vec):
                acc = F.add(acc, F.mul(a, b))
            out.append(acc)
        return tuple(out)

    def transpose(self):
        cols = [tuple(r[j] for r in self.rows) for j in range(self.ncols)]
        return Matrix(self.field, cols, ncols=self.nrows)

    def vstack(self, other):
        if other.nrows and self.nrows and other.ncols != self.ncols:
            raise KernelError("vstack width mismatch")
        return Matrix(
            self.field, self.rows + other.rows, ncols=max(self.ncols, other.ncols)
        )

    def hstack(self, other):
        if len(self.rows) != len(other.rows):
            raise KernelError("hstack height mismatch")
        return Matrix(
            self.field,
            [ra + rb for ra, rb in zip(self.rows, other.rows)],
            ncols=self.ncols + other.ncols,
        )

    def rref(self):
        """(reduced row echelon form, rank, pivot column tuple)."""
        F = self.field
        rows = [list(r) for r in self.rows]
        nr, nc = len(rows), self.ncols
        pivots = []
        r = 0
        for c in range(nc):
            pivot = None
            for i in range(r, nr):
                if rows[i][c] != F.zero:
                    pivot = i
                    break
            if pivot is None:
                continue
            rows[r], rows[pivot] = rows[pivot], rows[r]
            inv = F.inv(rows[r][c])
            rows[r] = [F.mul(inv, x) for x in rows[r]]
            for i in range(nr):
                if i != r and rows[i][c] != F.zero:
                    f = rows[i][c]
                    rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == nr:
                break
        return Matrix(F, rows, ncols=nc), r, tuple(pivots)

    def _check_same_shape(self, other):
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise KernelError("matrix shape mismatch")


def row_reduce(M):
    """Reduced row-echelon form and rank of M."""
    R, rank, _ = M.rref()
    return R, rank


def matrix_rank(M):
    return M.rref()[1]


def nullspace(M):
    """The kernel of M as a Subspace of k^(ncols)."""
    F = M.field
    R, rank, pivots = M.rref()
    nc = M.ncols
    pivset = set(pivots)
    free = [c for c in range(nc) if c not in pivset]
    basis = []
    for f in free:
        v = [F.zero] * nc
        v[f] = F.one
        for r, c in enumerate(pivots):
            v[c] = F.neg(R.get(r, f))
        basis.append(v)
    return Subspace.span(F, nc, basis)


def matrix_inverse(M):
    F = M.field
    n = M.nrows
    if n != M.ncols:
        raise KernelError("inverse of non-square matrix")
    aug = M.hstack(Matrix.identity(F, n))
    R, rank, _ = aug.rref()
    if rank != n:
        raise KernelError("matrix is singular")
    return Matrix(F, [row[n:] for row in R.rows])


class Subspace:
    """A subspace of k^ambient held by its rref row basis (canonical form)."""

    __slots__ = ("field", "ambient", "basis")

    def __init__(self, field, ambient, basis):
        if basis.ncols != ambient and basis.nrows > 0:
            raise KernelError("basis width disagrees with ambient dimension")
        self.field = field
        self.ambient = ambient
        self.basis = basis

    @classmethod
    def span(cls, field, ambient, vectors):
        M = Matrix(field, [tuple(v) for v in vectors])
        if M.nrows == 0:
            return cls(field, ambient, Matrix(field, []))
        if M.ncols != ambient:
            raise KernelError("vector length disagrees with ambient dimension")
        R, rank, _ = M.rref()
        return cls(field, ambient, Matrix(field, R.rows[:rank]))

    @classmethod
    def span_ints(cls, field, ambient, vectors):
        return cls.span(
            field, ambient, [[field.from_int(c) for c in v] for v in vectors]
        )

    @classmethod
    def zero(cls, field, ambient):
        return cls(field, ambient, Matrix(field, []))

    @classmethod
    def full(cls, field, ambient):
        return cls(field, ambient, Matrix.identity(field, ambient))

    @property
    def dim(self):
        return self.basis.nrows

    def is_zero(self):
        return self.dim == 0

    def is_full(self):
        return self.dim == self.ambient

    def pivots(self):
        return self.basis.rref()[2] if self.dim else ()

    def reduce_mod(self, vec):
        """Canonical representative of vec modulo this subspace.

        Eliminates the pivot coordinates using the rref basis; the result is
        zero exactly when vec lies in the subspace.
        """
        F = self.field
        v = list(vec)
        if len(v) != self.ambient:
            raise KernelError("vector length disagrees with ambient dimension")
        for row in self.basis.rows:
            # leading coordinate of an rref row is its pivot
            p = next(i for i, x in enumerate(row) if x != F.zero)
            c = v[p]
            if c != F.zero:
                v = [F.sub(x, F.mul(c, y)) for x, y in zip(v, row)]
        return tuple(v)

    def contains_vector(self, vec):
        z = self.field.zero
        return all(x == z for x in self.reduce_mod(vec))

    def contains_subspace(self, other):
        if other.ambient != self.ambient:
            raise KernelError("ambient dimension mismatch")
        return all(self.contains_vector(r) for r in other.basis.rows)

    def map_through(self, f, target_ambient=None):
        """Image subspace under a linear map (Matrix or callable on vectors)."""
        if isinstance(f, Matrix):
            images = [f.apply(r) for r in self.basis.rows]
            target = f.nrows
        else:
            images = [tuple(f(r)) for r in self.basis.rows]
            target = target_ambient if target_ambient is not None else self.ambient
        if target_ambient is not None:
            target = target_ambient
        return Subspace.span(self.field, target, images)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and other.field == self.field
            and other.ambient == self.ambient
            and other.basis == self.basis
        )

    def __hash__(self):
        return hash((self.field, self.ambient, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of k^{self.ambient})"


def subspace_meet_join(U, W):
    """(U ∩ W, U + W) by one Zassenhaus double-matrix elimination."""
    if U.ambient != W.ambient or U.field != W.field:
        raise KernelError("subspace ambient/field mismatch")
    F, d = U.field, U.ambient
    z = [F.zero] * d
    block = [list(r) + list(r) for r in U.basis.rows] + [
        list(r) + z for r in W.basis.rows
    ]
    if not block:
        return Subspace.zero(F, d), Subspace.zero(F, d)
    R, rank, _ = Matrix(F, block).rref()
    join_rows, meet_rows = [], []
    for row in R.rows[:rank]:
        left, right = row[:d], row[d:]
        if any(x != F.zero for x in left):
            join_rows.append(left)
        else:
            meet_rows.append(right)
    return Subspace.span(F, d, meet_rows), Subspace.span(F, d, join_rows)


class QuotientChart:
    """Coordinates on W_hi / W_lo for nested subspaces of k^d.

    ``to_coords`` is linear on all of k^d, kills W_lo, and restricts to an
    isomorphism W_hi/W_lo -> k^q; ``from_coords`` is a section landing in
    W_hi, so to_coords(from_coords(c)) == c.
    """

    __slots__ = ("field", "ambient", "lo", "hi", "dim", "_rel_basis", "_rel_pivots")

    def __init__(self, lo: Subspace, hi: Subspace):
        if lo.ambient != hi.ambient or lo.field != hi.field:
            raise KernelError("chart subspaces live in different ambients")
        if not hi.contains_subspace(lo):
            raise KernelError("chart needs nested subspaces lo <= hi")
        F = lo.field
        self.field = F
        self.ambient = lo.ambient
        self.lo = lo
        self.hi = hi
        reduced = [lo.reduce_mod(r) for r in hi.basis.rows]
        rel = Subspace.span(F, lo.ambient, reduced)
        self._rel_basis = rel.basis
        self._rel_pivots = rel.pivots()
        self.dim = rel.dim

    def to_coords(self, vec):
        r = self.lo.reduce_mod(vec)
        return tuple(r[p] for p in self._rel_pivots)

    def from_coords(self, coords):
        F = self.field
        if len(coords) != self.dim:
            raise KernelError("coordinate length mismatch")
        v = [F.zero] * self.ambient
        for c, row in zip(coords, self._rel_basis.rows):
            if c != F.zero:
                v = [F.add(x, F.mul(c, y)) for x, y in zip(v, row)]
        return tuple(v)

    def lift_matrix(self):
        """Columns are the chart basis lifted to the ambient space."""
        cols = [
            self.from_coords(
                tuple(
                    self.field.one if i == j else self.field.zero
                    for i in range(self.dim)
                )
            )
            for j in range(self.dim)
        ]
        rows = [tuple(c[i] for c in cols) for i in range(self.ambient)]
        return Matrix(self.field, rows, ncols=self.dim)

    def proj_matrix(self):
        """Matrix of to_coords on the ambient space."""
        F = self.field
        n = self.ambient
        cols = []
        for j in range(n):
            e = tuple(F.one if i == j else F.zero for i in range(n))
            cols.append(self.to_coords(e))
        rows = [tuple(c[i] for c in cols) for i in range(self.dim)]
        return Matrix(F, rows, ncols=n)

    def subspace_to_coords(self, S: Subspace) -> Subspace:
        imgs = [self.to_coords(r) for r in S.basis.rows]
        return Subspace.span(self.field, self.dim, imgs)


def subquotient_chart(lo: Subspace, hi: Subspace) -> QuotientChart:
    return QuotientChart(lo, hi)


def quotient_structure(V_dim: int, U: Subspace) -> QuotientChart:
    """Chart on k^V_dim / U: projection with kernel exactly U plus a section."""
    if U.ambient != V_dim:
        raise KernelError("ambient dimension mismatch")
    return QuotientChart(U, Subspace.full(U.field, V_dim))


def image_contained(A: Matrix, U: Subspace, W: Subspace) -> bool:
    """Does A map every vector of U into W?  Checked on a basis of U."""
    if A.ncols != U.ambient or (A.nrows != W.ambient):
        raise KernelError("image_contained dimension mismatch")
    return all(W.contains_vector(A.apply(r)) for r in U.basis.rows)


def preimage_subspace(A: Matrix, W: Subspace) -> Subspace:
    """{v : A v in W} as a subspace of the domain."""
    if A.nrows != W.ambient:
        raise KernelError("preimage dimension mismatch")
    chart = quotient_structure(W.ambient, W)
    Q = chart.proj_matrix()
    if Q.nrows == 0:
        return Subspace.full(A.field, A.ncols)
    return nullspace(Q.matmul(A))


def annihilator(U: Subspace) -> Subspace:
    """Functionals vanishing on U, in dual standard coordinates."""
    if U.dim == 0:
        return Subspace.full(U.field, U.ambient)
    return nullspace(U.basis)
