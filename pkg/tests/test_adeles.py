import random

import pytest

from fieldtower.adeles import (
    Adele,
    AdeleSpace,
    ClosedPoint,
    Divisor,
    TruncationChart,
    adele_membership,
    c1_structure,
    check_exactness,
    divisor_step_triple,
    enumerate_points,
    function_divisor,
    function_valuation,
    local_expansion,
    meet_join_identity,
    mult_by_function_certificate,
    quotient_dim,
)
from fieldtower.errors import KernelError, PrecisionError
from fieldtower.fields import PrimeField
from fieldtower.localfield import filtration_member
from fieldtower.series import Series
from fieldtower.spaces import (
    LIGHT_POLICY,
    check_admissible_triple,
    check_domination,
    check_filtered_axioms,
    check_morphism,
)

F2 = PrimeField(2)
F3 = PrimeField(3)
F5 = PrimeField(5)


def pt(field, *coeffs):
    return ClosedPoint(field, coeffs)


def random_divisor(field, rng, max_deg=3, negative=True):
    points = enumerate_points(field, 2)
    items = {}
    budget = max_deg
    while budget > 0 and rng.random() < 0.8:
        P = rng.choice(points)
        m = rng.randint(-2 if negative else 0, 2)
        if m == 0:
            continue
        items[P] = items.get(P, 0) + m
        budget -= abs(m) * P.degree
    return Divisor(field, items)


class TestPoints:
    def test_irreducible_required(self):
        with pytest.raises(KernelError):
            pt(F2, 1, 0, 1)  # t^2+1 = (t+1)^2

    def test_degrees(self):
        assert pt(F2, 1, 1, 1).degree == 2
        assert ClosedPoint.infinity(F2).degree == 1

    def test_enumerate(self):
        pts = enumerate_points(F2, 2)
        assert len(pts) == 4  # t, t+1, t^2+t+1, inf
        assert pts[-1].is_infinity


class TestLocalExpansion:
    def test_constant(self):
        P = pt(F5, 0, 1)
        x = local_expansion(F5, (1,), (1,), P, 5)
        assert x.lo == 0
        assert x.coefficient((0,)) == P.residue_field().one

    def test_simple_pole_expansion(self):
        # 1/(t-1) at P=(t-1) over F5 expands as u^-1
        P = pt(F5, 4, 1)
        x = local_expansion(F5, (1,), (4, 1), P, 4)
        assert x.valuation() == (-1,)
        assert x.coefficient((-1,)) == P.residue_field().one
        assert x.coefficient((0,)) == P.residue_field().zero

    def test_t_at_infinity(self):
        # t = 1/u at infinity
        P = ClosedPoint.infinity(F5)
        x = local_expansion(F5, (0, 1), (1,), P, 4)
        assert x.valuation() == (-1,)
        assert x.coefficient((-1,)) == P.residue_field().one

    def test_geometric_at_origin(self):
        # 1/(1-t) = 1 + t + t^2 + ... at (t) over F3
        P = pt(F3, 0, 1)
        x = local_expansion(F3, (1,), (1, 2), P, 5)
        for j in range(5):
            assert x.coefficient((j,)) == P.residue_field().one

    def test_degree_two_point(self):
        # 1/(t^2+t+1) over F2 at the degree-2 point
        P = pt(F2, 1, 1, 1)
        x = local_expansion(F2, (1,), (1, 1, 1), P, 3)
        assert x.valuation() == (-1,)
        prod = x.mul(local_expansion(F2, (1, 1, 1), (1,), P, 3))
        assert prod.coefficient((0,)) == P.residue_field().one

    def test_expansion_matches_valuation(self):
        rng = random.Random(0)
        for field in (F2, F3, F5):
            pts = enumerate_points(field, 2)
            for _ in range(15):
                num = tuple(rng.randrange(field.p) for _ in range(4))
                den = tuple(rng.randrange(field.p) for _ in range(3))
                import fieldtower.polys as polys

                if not polys.normalize(field, num) or not polys.normalize(field, den):
                    continue
                P = rng.choice(pts)
                v = function_valuation(field, num, den, P)
                x = local_expansion(field, num, den, P, v + 3)
                assert x.valuation() == (v,)


class TestMembership:
    def test_zero_in_effective(self):
        a = Adele(F2, {})
        D = Divisor.of_point(pt(F2, 0, 1), 2)
        assert adele_membership(a, D)

    def test_diagonal_simple_pole(self):
        a = Adele.diagonal(F5, (1,), (4, 1))  # 1/(t-1)
        P = pt(F5, 4, 1)
        assert adele_membership(a, Divisor.of_point(P, 1))
        assert not adele_membership(a, Divisor.zero(F5))

    def test_pole_at_infinity_bound(self):
        P = ClosedPoint.infinity(F2)
        a = Adele(F2, {P: Series.monomial(P.residue_field(), 1, (-2,))})
        assert not adele_membership(a, Divisor.of_point(P, 1))
        assert adele_membership(a, Divisor.of_point(P, 2))

    def test_adele_sum_respects_bounds(self):
        # carrier is a vector space: sums of diagonals are diagonals
        a = Adele.diagonal(F5, (1,), (4, 1))      # 1/(t-1)
        b = Adele.diagonal(F5, (1,), (0, 1))      # 1/t
        s = a.add(b)
        P1, P0 = pt(F5, 4, 1), pt(F5, 0, 1)
        D = Divisor(F5, {P1: 1, P0: 1})
        assert adele_membership(s, D)
        assert not adele_membership(s, Divisor.of_point(P1, 1))
        mono = Adele.monomial(F5, P0, -2)
        mixed = s.add(mono)
        assert adele_membership(mixed, Divisor(F5, {P1: 1, P0: 2}))

    def test_integral_tail_undecidable(self):
        a = Adele(F2, {}, tail="integral")
        D = Divisor.of_point(pt(F2, 0, 1), -1)
        with pytest.raises(PrecisionError):
            adele_membership(a, D)

    def test_diagonal_membership_iff_divisor_bound(self):
        rng = random.Random(1)
        import fieldtower.polys as polys

        for field in (F2, F3):
            for _ in range(20):
                num = polys.normalize(
                    field, tuple(rng.randrange(field.p) for _ in range(3))
                )
                den = polys.normalize(
                    field, tuple(rng.randrange(field.p) for _ in range(3))
                )
                if not num or not den:
                    continue
                a = Adele.diagonal(field, num, den)
                D = random_divisor(field, rng)
                want = function_divisor(field, num, den).add(D)
                expected = all(m >= 0 for m in want.items.values())
                assert adele_membership(a, D) == expected


class TestQuotients:
    def test_equal_divisors(self):
        D = Divisor.of_point(pt(F2, 0, 1), 1)
        assert quotient_dim(D, D) == 0

    def test_double_point_quotient(self):
        # D1 = 2*(t), D2 = 0 over F2: basis u^-1, u^-2
        D1 = Divisor.of_point(pt(F2, 0, 1), 2)
        assert quotient_dim(D1, Divisor.zero(F2)) == 2

    def test_degree_two_point_quotient(self):
        D1 = Divisor.of_point(pt(F2, 1, 1, 1), 1)
        assert quotient_dim(D1, Divisor.zero(F2)) == 2

    def test_exactness_random(self):
        rng = random.Random(2)
        for field in (F2, F3, F5):
            for _ in range(12):
                D2 = random_divisor(field, rng)
                D1 = D2.add(random_divisor(field, rng, negative=False))
                rep = check_exactness(D1, D2)
                assert rep.passed, str(rep)

    def test_degree_additivity(self):
        rng = random.Random(3)
        for _ in range(10):
            D3 = random_divisor(F2, rng)
            D2 = D3.add(random_divisor(F2, rng, negative=False))
            D1 = D2.add(random_divisor(F2, rng, negative=False))
            assert quotient_dim(D1, D3) == quotient_dim(D1, D2) + quotient_dim(D2, D3)

    def test_functoriality_of_containment(self):
        rng = random.Random(4)
        for _ in range(10):
            D = random_divisor(F3, rng)
            E = D.add(random_divisor(F3, rng, negative=False))
            chart = TruncationChart(E, D.sub(Divisor.of_point(pt(F3, 0, 1), 1)))
            UD = chart.subspace_from_divisor(D)
            UE = chart.subspace_from_divisor(E)
            assert UE.contains_subspace(UD)


class TestMeetJoin:
    def test_equal(self):
        D = Divisor.of_point(pt(F2, 0, 1), 1)
        rep = meet_join_identity(D, D)
        assert rep.passed, str(rep)

    def test_crossed_points(self):
        D1 = Divisor.of_point(pt(F2, 0, 1), 1)
        D2 = Divisor.of_point(ClosedPoint.infinity(F2), 1)
        rep = meet_join_identity(D1, D2)
        assert rep.passed, str(rep)

    def test_random_pairs(self):
        rng = random.Random(5)
        for field in (F2, F3):
            for _ in range(12):
                D1 = random_divisor(field, rng)
                D2 = random_divisor(field, rng)
                rep = meet_join_identity(D1, D2)
                assert rep.passed, str(rep)


class TestC1Structure:
    def test_axioms(self):
        space = c1_structure(F2)
        rep = check_filtered_axioms(space, LIGHT_POLICY)
        assert rep.passed, str(rep)

    def test_divisor_triples(self):
        rng = random.Random(6)
        space = c1_structure(F2)
        pts = enumerate_points(F2, 2)
        for _ in range(4):
            D = random_divisor(F2, rng)
            P = rng.choice(pts)
            T = divisor_step_triple(space, D, P)
            rep = check_admissible_triple(T, LIGHT_POLICY)
            assert rep.passed, str(rep)

    def test_mismatched_step_is_detected(self):
        # a triple whose claimed step point disagrees with the data fails
        space = c1_structure(F2)
        D = Divisor.of_point(pt(F2, 0, 1), 1)
        T = divisor_step_triple(space, D, pt(F2, 0, 1))
        T.point = pt(F2, 1, 1)  # lie about the skyscraper support
        rep = check_admissible_triple(T, LIGHT_POLICY)
        assert not rep.passed

    def test_quotient_dim_requires_nested_divisors(self):
        D1 = Divisor.of_point(pt(F2, 0, 1), 1)
        D2 = Divisor.of_point(ClosedPoint.infinity(F2), 1)
        with pytest.raises(KernelError):
            quotient_dim(D1, D2)

    def test_even_degree_restriction_is_dominated(self):
        space = c1_structure(F2)
        even = AdeleSpace(F2, index_filter=lambda D: D.degree() % 2 == 0)
        assert check_domination(space, even, lambda D: D, LIGHT_POLICY)

    def test_mult_certificates(self):
        space = c1_structure(F2)
        rng = random.Random(7)
        import fieldtower.polys as polys

        ident = mult_by_function_certificate(F2, (1,), (1,))
        rep = check_morphism(ident, space, space, LIGHT_POLICY)
        assert rep.passed, str(rep)
        t_cert = mult_by_function_certificate(F2, (0, 1), (1,))
        assert t_cert.poles.items == {ClosedPoint.infinity(F2): 1}
        rep = check_morphism(t_cert, space, space, LIGHT_POLICY)
        assert rep.passed, str(rep)
        for _ in range(6):
            num = polys.normalize(F2, tuple(rng.randrange(2) for _ in range(3)))
            den = polys.normalize(F2, tuple(rng.randrange(2) for _ in range(3)))
            if not num or not den:
                continue
            cert = mult_by_function_certificate(F2, num, den)
            rep = check_morphism(cert, space, space, LIGHT_POLICY)
            assert rep.passed, str(rep)

    def test_graded_pieces_are_plain_finite_spaces(self):
        space = c1_structure(F2)
        assert space.graded_is_plain()
        D2 = Divisor.zero(F2)
        D1 = Divisor.of_point(pt(F2, 1, 1, 1), 1)
        G = space.graded_space(D2, D1)
        assert G.depth == 0 and G.dim == 2
        to = space.graded_coords(D2, D1)
        a = Adele.diagonal(F2, (1,), (1, 1, 1))
        coords = to(a)
        assert len(coords) == 2 and any(c != F2.zero for c in coords)

    def test_local_levels_match_point_filtration(self):
        # the tail filtration of k((t)) is the divisor filtration at (t),
        # localized: membership answers agree on samples
        P = pt(F5, 0, 1)
        res = P.residue_field()
        for lo in (-2, 0, 1):
            x = Series.monomial(res, 1, (lo,))
            a = Adele(F5, {P: x})
            for l in range(-3, 3):
                D = Divisor.of_point(P, -l)
                assert adele_membership(a, D) == filtration_member(x, l)


class TestCertificateWitnesses:
    def test_pole_shift_formula(self):
        # f = t has its only pole at infinity
        cert = mult_by_function_certificate(F2, (0, 1), (1,))
        D = Divisor.zero(F2)
        up = cert.up(D)
        assert up.items == {ClosedPoint.infinity(F2): 1}
        down = cert.down(D)
        assert down.items == {ClosedPoint.infinity(F2): -1}

    def test_divisor_of_t(self):
        d = function_divisor(F2, (0, 1), (1,))
        assert d.mult(pt(F2, 0, 1)) == 1
        assert d.mult(ClosedPoint.infinity(F2)) == -1
        assert d.degree() == 0

    def test_principal_divisors_have_degree_zero(self):
        rng = random.Random(8)
        import fieldtower.polys as polys

        for field in (F2, F3, F5):
            for _ in range(10):
                num = polys.normalize(
                    field, tuple(rng.randrange(field.p) for _ in range(4))
                )
                den = polys.normalize(
                    field, tuple(rng.randrange(field.p) for _ in range(3))
                )
                if not num or not den:
                    continue
                assert function_divisor(field, num, den).degree() == 0
