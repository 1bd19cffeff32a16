import random

import pytest

from fieldtower.errors import KernelError
from fieldtower.fields import PrimeField, RationalField
from fieldtower.linalg import Matrix, Subspace, annihilator
from fieldtower.samples import (
    random_chain_morphism,
    random_presentation,
)
from fieldtower.spaces import (
    ChainMorphism,
    ChainPresentation,
    LIGHT_POLICY,
    TriplePresentation,
    check_admissible_triple,
    check_domination,
    check_filtered_axioms,
    check_morphism,
    complete,
    compose_certificates,
    double_dual_compare,
    dualize,
    sub_quotient_triple,
)

F2 = PrimeField(2)
F5 = PrimeField(5)
QQ = RationalField()


def chain_e1_in_k2(field):
    return ChainPresentation.from_chain(
        field,
        1,
        [
            Subspace.zero(field, 2),
            Subspace.span_ints(field, 2, [[1, 0]]),
            Subspace.full(field, 2),
        ],
    )


class TestFilteredAxioms:
    def test_simple_chain_passes(self):
        rep = check_filtered_axioms(chain_e1_in_k2(F2))
        assert rep.passed, str(rep)

    def test_depth2_random_passes(self):
        rng = random.Random(0)
        for _ in range(5):
            P = random_presentation(F5, 2, 4, rng)
            rep = check_filtered_axioms(P)
            assert rep.passed, str(rep)


class TestDomination:
    def test_identity_dominates(self):
        P = chain_e1_in_k2(F5)
        assert check_domination(P, P, lambda i: i)

    def test_refinement_dominates_coarse(self):
        fine = chain_e1_in_k2(F2)
        coarse = ChainPresentation.trivial(F2, 1, 2)
        # phi maps coarse indices into the refinement
        assert check_domination(fine, coarse, lambda i: 0 if i == 0 else 2)

    def test_coarse_does_not_dominate_refinement(self):
        fine = chain_e1_in_k2(F2)
        coarse = ChainPresentation.trivial(F2, 1, 2)
        # no index of the coarse chain carries the middle subspace
        for middle in (0, 1):
            phi = lambda i: {0: 0, 1: middle, 2: 1}[i]
            assert not check_domination(coarse, fine, phi)

    def test_carrier_mismatch_rejected(self):
        with pytest.raises(KernelError):
            check_domination(
                chain_e1_in_k2(F2), ChainPresentation.trivial(F2, 1, 3), lambda i: i
            )


class TestSplice:
    def test_empty_splice(self):
        rng = random.Random(1)
        P = random_presentation(F5, 2, 4, rng)
        S = P.splice(1, 1)
        assert S.dim == 0 and S.depth == 1

    def test_full_splice_keeps_chain_shape(self):
        rng = random.Random(2)
        P = random_presentation(F5, 2, 4, rng)
        S = P.collapse()
        assert S.depth == 1
        assert S.dim == 4
        assert [w.dim for w in S.chain] == [w.dim for w in P.chain]

    def test_depth1_splice_is_plain(self):
        P = chain_e1_in_k2(F2)
        S = P.splice(0, 2)
        assert S.depth == 0 and S.dim == 2

    def test_spliced_triples_are_admissible(self):
        # every derived triple E_{i,j} -> E_{i,k} -> E_{j,k}, middle
        # splices included, must come out admissible one depth down
        rng = random.Random(3)
        checked = 0
        for field, depth in ((F2, 2), (F5, 2), (F2, 3)):
            for _ in range(4):
                P = random_presentation(field, depth, 5, rng)
                m = P.steps()
                for i in range(m):
                    for j in range(i + 1, m):
                        for k in range(j + 1, m + 1):
                            T = _splice_triple(P, i, j, k)
                            if T.E2.depth == 0:
                                continue
                            rep = check_admissible_triple(T)
                            assert rep.passed, f"({i},{j},{k}): {rep}"
                            checked += 1
        assert checked >= 6


def _splice_triple(P, i, j, k):
    from fieldtower.linalg import QuotientChart

    F = P.field
    E1, E2, E3 = P.splice(i, j), P.splice(i, k), P.splice(j, k)
    cij = QuotientChart(P.chain[i], P.chain[j])
    cik = QuotientChart(P.chain[i], P.chain[k])
    cjk = QuotientChart(P.chain[j], P.chain[k])

    def unit(n, c):
        return tuple(F.one if r == c else F.zero for r in range(n))

    inj_cols = [
        cik.to_coords(cij.from_coords(unit(cij.dim, c))) for c in range(cij.dim)
    ]
    surj_cols = [
        cjk.to_coords(cik.from_coords(unit(cik.dim, c))) for c in range(cik.dim)
    ]
    inj = Matrix(F, [tuple(col[r] for col in inj_cols) for r in range(cik.dim)],
                 ncols=len(inj_cols))
    surj = Matrix(F, [tuple(col[r] for col in surj_cols) for r in range(cjk.dim)],
                  ncols=len(surj_cols))
    return TriplePresentation(E1, E2, E3, inj, surj)


class TestAdmissibleTriple:
    def test_sub_quotient_triple_passes(self):
        rng = random.Random(4)
        for field in (F2, F5):
            for depth in (1, 2):
                for _ in range(5):
                    P = random_presentation(field, depth, 4, rng)
                    if P.steps() < 2:
                        continue
                    T = sub_quotient_triple(P, 1)
                    rep = check_admissible_triple(T)
                    assert rep.passed, str(rep)

    def test_incomparable_quotient_chain_fails(self):
        # replace E3's chain with one whose values never occur as images
        P = ChainPresentation.from_chain(
            F2,
            1,
            [
                Subspace.zero(F2, 3),
                Subspace.span_ints(F2, 3, [[1, 0, 0]]),
                Subspace.span_ints(F2, 3, [[1, 0, 0], [0, 1, 0]]),
                Subspace.full(F2, 3),
            ],
        )
        T = sub_quotient_triple(P, 1)
        bad_E3 = ChainPresentation.from_chain(
            F2,
            1,
            [
                Subspace.zero(F2, 2),
                Subspace.span_ints(F2, 2, [[1, 1]]),
                Subspace.full(F2, 2),
            ],
        )
        rep = check_admissible_triple(
            TriplePresentation(T.E1, T.E2, bad_E3, T.inj, T.surj)
        )
        assert not rep.passed
        assert any("occurs in E3" in item.label for item in rep.failures())

    def test_depth2_dim4_recursion(self):
        rng = random.Random(5)
        found = 0
        while found < 3:
            P = random_presentation(F2, 2, 4, rng)
            if P.steps() < 3:
                continue
            T = sub_quotient_triple(P, 2)
            rep = check_admissible_triple(T)
            assert rep.passed, str(rep)
            found += 1


class TestMorphism:
    def test_identity_passes(self):
        rng = random.Random(6)
        for depth in (1, 2, 3):
            P = random_presentation(F5, depth, 4, rng)
            cert = ChainMorphism(Matrix.identity(F5, 4), P, P,
                                 up=lambda i: i, down=lambda j: j)
            rep = check_morphism(cert, P, P)
            assert rep.passed, str(rep)

    def test_bad_witness_fails(self):
        P = chain_e1_in_k2(F5)
        swap = Matrix.from_int_rows(F5, [[0, 1], [1, 0]])
        # claiming up(i) = i is wrong: swap moves span{e1} off itself
        cert = ChainMorphism(swap, P, P, up=lambda i: i, down=lambda j: j)
        rep = check_morphism(cert, P, P)
        assert not rep.passed

    def test_derived_witnesses_always_pass_on_finite(self):
        rng = random.Random(7)
        for field in (F2, F5):
            for depth in (1, 2, 3):
                for _ in range(4):
                    E1 = random_presentation(field, depth, rng.randint(1, 5), rng)
                    E2 = random_presentation(field, depth, rng.randint(1, 5), rng)
                    cert = random_chain_morphism(E1, E2, rng)
                    rep = check_morphism(cert, E1, E2, LIGHT_POLICY)
                    assert rep.passed, str(rep)

    def test_linearity_of_certified_morphisms(self):
        rng = random.Random(8)
        for _ in range(5):
            E1 = random_presentation(F5, 2, 4, rng)
            E2 = random_presentation(F5, 2, 4, rng)
            f = random_chain_morphism(E1, E2, rng)
            g = random_chain_morphism(E1, E2, rng)
            assert check_morphism(f.add(g), E1, E2, LIGHT_POLICY).passed
            assert check_morphism(f.scale(F5.from_int(3)), E1, E2, LIGHT_POLICY).passed

    def test_compose_identity(self):
        P = chain_e1_in_k2(F5)
        ident = ChainMorphism(Matrix.identity(F5, 2), P, P,
                              up=lambda i: i, down=lambda j: j)
        comp = compose_certificates(ident, ident)
        assert comp.matrix == ident.matrix
        assert comp.up(1) == 1
        assert comp.down(1) == 1

    def test_composition_closure(self):
        rng = random.Random(9)
        for field in (F2, F5):
            for depth in (1, 2, 3):
                for _ in range(4):
                    E1 = random_presentation(field, depth, 3, rng)
                    E2 = random_presentation(field, depth, 4, rng)
                    E3 = random_presentation(field, depth, 3, rng)
                    f = random_chain_morphism(E1, E2, rng)
                    g = random_chain_morphism(E2, E3, rng)
                    h = compose_certificates(f, g)
                    assert h.matrix == g.matrix.matmul(f.matrix)
                    rep = check_morphism(h, E1, E3, LIGHT_POLICY)
                    assert rep.passed, str(rep)

    def test_pre_post_composition_with_admissible_maps(self):
        rng = random.Random(10)
        for _ in range(4):
            P = random_presentation(F5, 2, 4, rng)
            if P.steps() < 2:
                continue
            T = sub_quotient_triple(P, 1)
            mono = ChainMorphism(T.inj, T.E1, P)
            epi = ChainMorphism(T.surj, P, T.E3)
            E = random_presentation(F5, 2, 3, rng)
            A = random_chain_morphism(P, E, rng)
            assert check_morphism(
                compose_certificates(mono, A), T.E1, E, LIGHT_POLICY
            ).passed
            B = random_chain_morphism(E, P, rng)
            assert check_morphism(
                compose_certificates(B, epi), E, T.E3, LIGHT_POLICY
            ).passed


class TestDominationTransfer:
    def test_check_outcome_transfers_along_domination(self):
        # a refinement presents the same filtered space; morphism checks
        # agree across the dominated pair
        rng = random.Random(21)
        for _ in range(5):
            fine1 = chain_e1_in_k2(F5)
            coarse1 = ChainPresentation.trivial(F5, 1, 2)
            fine2 = chain_e1_in_k2(F5)
            coarse2 = ChainPresentation.trivial(F5, 1, 2)
            A = random_chain_morphism(fine1, fine2, rng)
            got_fine = check_morphism(A, fine1, fine2, LIGHT_POLICY).passed
            B = ChainMorphism(A.matrix, coarse1, coarse2)
            got_coarse = check_morphism(B, coarse1, coarse2, LIGHT_POLICY).passed
            assert got_fine == got_coarse


class TestDuality:
    def test_self_dual_line(self):
        P = ChainPresentation.trivial(F2, 1, 1)
        assert dualize(P) == P

    def test_annihilator_chain(self):
        P = chain_e1_in_k2(F5)
        D = dualize(P)
        mid = D.chain[1]
        assert mid == annihilator(P.chain[1])
        assert mid.dim == 1

    def test_complete_is_identity(self):
        rng = random.Random(11)
        P = random_presentation(F2, 2, 4, rng)
        Q, iso = complete(P)
        assert Q == P
        assert iso == Matrix.identity(F2, 4)

    def test_double_dual_dim1(self):
        assert double_dual_compare(ChainPresentation.trivial(F5, 1, 1))

    def test_double_dual_random(self):
        rng = random.Random(12)
        for field in (F2, F5, QQ):
            for depth in (1, 2, 3):
                for _ in range(4):
                    P = random_presentation(field, depth, rng.randint(1, 6), rng)
                    assert double_dual_compare(P), (field, depth, P)

    def test_corrupted_dual_detected(self):
        rng = random.Random(13)
        hits = 0
        while hits < 8:
            P = random_presentation(F2, 2, 4, rng)
            D = dualize(P)
            mutated = _mutate_chain(D, rng)
            if mutated is None:
                continue
            assert dualize(mutated) != P
            hits += 1

    def test_dualize_preserves_admissibility(self):
        rng = random.Random(14)
        for _ in range(5):
            P = random_presentation(F5, 2, 4, rng)
            if P.steps() < 2:
                continue
            DP = dualize(P)
            T = sub_quotient_triple(DP, 1)
            rep = check_admissible_triple(T)
            assert rep.passed, str(rep)


def _mutate_chain(D, rng):
    """Replace one intermediate chain subspace by a different one of the
    same dimension between its neighbours, fixing graded dims."""
    if D.steps() < 2:
        return None
    j = rng.randrange(1, D.steps())
    lo, here, hi = D.chain[j - 1], D.chain[j], D.chain[j + 1]
    for _ in range(60):
        extra = [
            [D.field.sample(rng) for _ in range(D.dim)]
            for _ in range(here.dim - lo.dim)
        ]
        cand = Subspace.span(
            D.field, D.dim, list(lo.basis.rows) + extra
        )
        if cand.dim != here.dim or cand == here:
            continue
        if not hi.contains_subspace(cand):
            continue
        new_chain = list(D.chain)
        new_chain[j] = cand
        try:
            return ChainPresentation(
                D.field, D.depth, D.dim, chain=new_chain, graded=D.graded
            )
        except KernelError:
            continue
    return None


class TestSerialization:
    def test_round_trip(self):
        rng = random.Random(15)
        for field in (F2, F5, QQ):
            for depth in (1, 2):
                P = random_presentation(field, depth, 4, rng)
                doc = P.dumps()
                Q = ChainPresentation.loads(doc)
                assert Q == P
                assert Q.dumps() == doc
