import random

import pytest

from fieldtower.errors import KernelError, PrecisionError
from fieldtower.fields import PrimeField
from fieldtower.localfield import (
    SeriesSpace,
    as_zfiltered,
    filtration_member,
    graded_image,
)
from fieldtower.samples import random_series, random_unit
from fieldtower.series import Series
from fieldtower.spaces import (
    LIGHT_POLICY,
    check_filtered_axioms,
)

F2 = PrimeField(2)
F5 = PrimeField(5)


class TestMembership:
    def test_monomial_above_level(self):
        x = Series.monomial(F5, 1, (3,))
        assert filtration_member(x, 2)

    def test_depth2_outer_exponent_below(self):
        x = Series.monomial(F5, 2, (2, -5))
        assert not filtration_member(x, 3)

    def test_zero_in_every_level(self):
        z = Series.zero(F5, 1)
        for l in (-3, 0, 5):
            assert filtration_member(z, l)

    def test_undecidable_window(self):
        x = Series.zero(F5, 1, prec=2)
        with pytest.raises(PrecisionError):
            filtration_member(x, 5)

    def test_unit_multiplication_preserves_levels(self):
        rng = random.Random(0)
        for _ in range(20):
            u = random_unit(F5, 1, rng)
            if not u.is_certified_nonzero() or u.valuation()[0] != 0:
                continue
            for l in (-2, 0, 3):
                x = Series.monomial(F5, 1, (l,))
                y = u.mul(x)
                assert filtration_member(y, l)


class TestGradedImage:
    def test_deep_element_has_zero_image(self):
        x = Series.monomial(F5, 2, (5, 0))
        img = graded_image(x, 1, 3)
        assert all(c.is_exact_zero() for c in img)

    def test_read_off_coefficient(self):
        # x = t2^-1 * t1^0 + t1^1; image in E_0/E_1 is the single
        # coefficient t2^-1
        x = Series.monomial(F5, 2, (0, -1)).add(Series.monomial(F5, 2, (1, 0)))
        img = graded_image(x, 0, 1)
        assert len(img) == 1
        assert img[0] == Series.monomial(F5, 1, (-1,))

    def test_insufficient_precision(self):
        x = Series.from_coeffs(
            F5, 2, 0, [Series.one(F5, 1)], prec=1
        )
        with pytest.raises(PrecisionError):
            graded_image(x, 0, 3)

    def test_additivity(self):
        rng = random.Random(1)
        for _ in range(20):
            x = random_series(F5, 2, rng, lo_range=(0, 1), exact=True)
            y = random_series(F5, 2, rng, lo_range=(0, 1), exact=True)
            ix = graded_image(x, 0, 3)
            iy = graded_image(y, 0, 3)
            ixy = graded_image(x.add(y), 0, 3)
            for a, b, c in zip(ix, iy, ixy):
                assert a.add(b) == c


class TestSeriesSpace:
    def test_axioms_depth1(self):
        rep = check_filtered_axioms(as_zfiltered(F2, 1), LIGHT_POLICY)
        assert rep.passed, str(rep)

    def test_axioms_depth2(self):
        rep = check_filtered_axioms(as_zfiltered(F5, 2), LIGHT_POLICY)
        assert rep.passed, str(rep)

    def test_graded_dimension_count(self):
        # dim E_l / E_m = m - l at depth 1
        K = as_zfiltered(F2, 1)
        for l, m in ((0, 3), (-2, 1), (5, 9)):
            G = K.graded_space(-m, -l)
            assert G.depth == 0
            assert G.dim == m - l

    def test_graded_space_depth2_is_tuple_space(self):
        K = as_zfiltered(F5, 2)
        G = K.graded_space(0, 3)
        assert isinstance(G, SeriesSpace)
        assert G.depth == 1 and G.width == 3

    def test_graded_coords_order(self):
        K = as_zfiltered(F5, 2)
        to = K.graded_coords(0, 2)
        x = Series.monomial(F5, 2, (-2, 7)).add(Series.monomial(F5, 2, (-1, 4)))
        parts = to((x,))
        assert len(parts) == 2
        assert parts[0] == Series.monomial(F5, 1, (7,))
        assert parts[1] == Series.monomial(F5, 1, (4,))

    def test_width_mismatch(self):
        K = SeriesSpace(F5, 1, width=2)
        with pytest.raises(KernelError):
            K.member((Series.one(F5, 1),), 0)
