import random

import pytest

from fieldtower import polys
from fieldtower.errors import KernelError
from fieldtower.fields import PrimeField, RationalField, ResidueField, parse_field_flag


F2 = PrimeField(2)
F3 = PrimeField(3)
F5 = PrimeField(5)


def test_prime_validation():
    with pytest.raises(KernelError):
        PrimeField(6)
    with pytest.raises(KernelError):
        PrimeField(1)
    with pytest.raises(KernelError):
        PrimeField(2**31 + 11)
    PrimeField(2**31 - 1)  # Mersenne prime, at the size cap


def test_field_axioms_random():
    rng = random.Random(1)
    for F in (F2, F5, RationalField()):
        for _ in range(50):
            a, b, c = F.sample(rng), F.sample(rng), F.sample(rng)
            assert F.add(a, F.add(b, c)) == F.add(F.add(a, b), c)
            assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
            assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
            if a != F.zero:
                assert F.mul(a, F.inv(a)) == F.one


def test_poly_divmod_roundtrip():
    rng = random.Random(2)
    for F in (F2, F3, F5):
        for _ in range(40):
            a = polys.normalize(F, tuple(rng.randrange(F.p) for _ in range(6)))
            b = polys.normalize(F, tuple(rng.randrange(F.p) for _ in range(3)))
            if not b:
                continue
            q, r = polys.divmod_(F, a, b)
            assert polys.add(F, polys.mul(F, q, b), r) == a
            assert polys.degree(r) < polys.degree(b)


def test_irreducibles_f2():
    # oracle: the monic irreducibles over F_2 up to degree 3 are known by
    # exhaustive root/factor search
    found = set(polys.monic_irreducibles(F2, 3))
    expected = {
        (0, 1),          # t
        (1, 1),          # t + 1
        (1, 1, 1),       # t^2 + t + 1
        (1, 1, 0, 1),    # t^3 + t + 1
        (1, 0, 1, 1),    # t^3 + t^2 + 1
    }
    assert found == expected


def test_irreducible_counts():
    # number of monic irreducibles of degree d over F_p (necklace counts)
    assert sum(1 for _ in polys.monic_irreducibles(F3, 2)) == 3 + 3
    assert sum(1 for f in polys.monic_irreducibles(F5, 2) if len(f) == 3) == 10


def test_residue_field_f4():
    K = ResidueField(F2, (1, 1, 1))
    x = K.gen()
    assert K.mul(x, x) == K.add(x, K.one)  # x^2 = x + 1 mod x^2+x+1
    rng = random.Random(3)
    for _ in range(30):
        a = K.sample(rng)
        if a != K.zero:
            assert K.mul(a, K.inv(a)) == K.one
    # F_4 has 3 nonzero elements, all cubes of x
    assert K.mul(K.mul(x, x), x) == K.one


def test_residue_field_rejects_reducible():
    with pytest.raises(KernelError):
        ResidueField(F2, (1, 0, 1))  # t^2+1 = (t+1)^2 over F_2


def test_ord_at():
    # (t-1)^2 * (t^2+t+1) over F5: ord at t-1 is 2
    F = F5
    tm1 = (4, 1)
    f = polys.mul(F, polys.mul(F, tm1, tm1), (1, 1, 1))
    assert polys.ord_at(F, f, tm1) == 2
    assert polys.ord_at(F, f, (1, 1, 1)) == 1
    assert polys.ord_at(F, f, (2, 1)) == 0


def test_parse_field_flag():
    assert parse_field_flag("7").p == 7
    assert parse_field_flag("Q") == RationalField()
    with pytest.raises(KernelError):
        parse_field_flag("abc")
