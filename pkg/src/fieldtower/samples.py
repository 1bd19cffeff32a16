"""Deterministic random generators for property tests and CLI --random modes.

Everything takes an explicit ``random.Random`` so identical seeds give
identical objects; nothing here touches global RNG state.
"""

from __future__ import annotations

from .linalg import Matrix, Subspace, matrix_rank
from .series import INF, Series


def random_series(field, depth, rng, lo_range=(-3, 1), length_range=(1, 5),
                  exact=False, inner_exact=True):
    """A random windowed series; with ``exact`` a Laurent polynomial.

    Inner coefficients are exact polynomials by default so that outer
    truncation is the only source of unknowns; set ``inner_exact=False``
    to give inner levels finite windows too.
    """
    if depth == 0:
        return Series.scalar(field, field.sample(rng))
    lo = rng.randint(*lo_range)
    length = rng.randint(*length_range)
    coeffs = []
    for _ in range(length):
        if rng.random() < 0.25:
            coeffs.append(Series.zero(field, depth - 1))
        else:
            coeffs.append(
                random_series(
                    field, depth - 1, rng, lo_range, length_range,
                    exact=inner_exact, inner_exact=inner_exact,
                )
            )
    prec = INF if exact else lo + length + rng.randint(0, 2)
    return Series.from_coeffs(field, depth, lo, coeffs, prec=prec)


def random_unit(field, depth, rng, length_range=(1, 4)):
    """A random certified-invertible series (nonzero monomial head)."""
    x = random_series(field, depth, rng, length_range=length_range)
    head_exp = tuple(rng.randint(-2, 2) for _ in range(depth))
    head = Series.monomial(field, depth, head_exp, field.sample_nonzero(rng))
    shifted = x.shift_outer(head_exp[0] + 1) if depth >= 1 else x
    return head.add(shifted.truncate(head_exp[0] + 4))


def random_laurent_poly(field, depth, rng, lo_range=(-2, 0), length_range=(1, 3)):
    return random_series(field, depth, rng, lo_range, length_range, exact=True)


def random_matrix(field, nrows, ncols, rng):
    return Matrix(field, [[field.sample(rng) for _ in range(ncols)] for _ in range(nrows)])


def random_invertible(field, n, rng):
    while True:
        M = random_matrix(field, n, n, rng)
        if matrix_rank(M) == n:
            return M


def random_subspace(field, ambient, rng, dim=None):
    if dim is None:
        dim = rng.randint(0, ambient)
    vecs = [[field.sample(rng) for _ in range(ambient)] for _ in range(dim + 1)]
    return Subspace.span(field, ambient, vecs[: dim + 1])


def random_presentation(field, depth, dim, rng, max_inner=2):
    """A random chain presentation with random graded structures."""
    from .spaces import ChainPresentation

    if depth == 0:
        return ChainPresentation(field, 0, dim)
    if dim == 0:
        return ChainPresentation.trivial(field, depth, 0)
    basis = random_invertible(field, dim, rng)
    cuts = sorted(rng.sample(range(1, dim), min(rng.randint(0, max_inner), dim - 1)))
    dims = [0] + cuts + [dim]
    chain = [Subspace.span(field, dim, basis.rows[:k]) for k in dims]
    graded = [
        random_presentation(field, depth - 1, hi - lo, rng, max_inner)
        for lo, hi in zip(dims, dims[1:])
    ]
    return ChainPresentation(field, depth, dim, chain=chain, graded=graded)


def random_chain_morphism(E1, E2, rng):
    from .spaces import ChainMorphism

    return ChainMorphism(random_matrix(E1.field, E2.dim, E1.dim, rng), E1, E2)
