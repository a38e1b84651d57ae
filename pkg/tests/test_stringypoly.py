import random
from fractions import Fraction

import pytest

from stringy.polyring import RationalFunction
from stringy.stringypoly import StringyPolynomial, hd_L_power


def sp(m, d):
    return StringyPolynomial.from_dict(m, {k: RationalFunction.make(v) for k, v in d.items()})


def random_element(rng, m):
    d = {}
    for _ in range(rng.randint(0, 4)):
        a, b = rng.randint(0, 3), rng.randint(0, 3)
        num = tuple(rng.randint(-3, 3) for _ in range(3))
        den = tuple([rng.randint(-2, 2), 1])
        d[(a, b)] = d.get((a, b), RationalFunction.make(())) + RationalFunction.make(num, den)
    return StringyPolynomial.from_dict(m, d)


class TestCanonicalForm:
    def test_uv_reduces_to_tm(self):
        for m in (1, 2, 3):
            x = StringyPolynomial.monomial(m, 1, 1)
            assert x.terms == ((((0, 0)), RationalFunction.t_power(m)),)

    def test_eager_reduction_on_multiply(self):
        m = 2
        u = StringyPolynomial.monomial(m, 1, 0)
        v = StringyPolynomial.monomial(m, 0, 1)
        assert u * v == StringyPolynomial.t_power(m, m)
        # u^2 v = u * t^m
        assert u * u * v == StringyPolynomial.monomial(
            m, 1, 0, RationalFunction.t_power(m))

    def test_zero_coefficients_never_stored(self):
        x = sp(1, {(1, 0): (1,)}) + sp(1, {(1, 0): (-1,)})
        assert x.is_zero() and x.terms == ()

    def test_index_mixing_rejected(self):
        with pytest.raises(ValueError):
            sp(1, {(0, 0): (1,)}) + sp(2, {(0, 0): (1,)})

    def test_reindex(self):
        x = StringyPolynomial.t_power(1, 2)  # (uv)^2 at m=1
        y = x.reindex(3)
        assert y == StringyPolynomial.t_power(3, 6)
        with pytest.raises(ValueError):
            y.reindex(2)


class TestRingAxioms:
    def test_random_associativity_distributivity(self):
        rng = random.Random(23)
        for m in (1, 3):
            for _ in range(25):
                x, y, z = (random_element(rng, m) for _ in range(3))
                assert (x + y) + z == x + (y + z)
                assert x * (y + z) == x * y + x * z
                assert x * StringyPolynomial.one(m) == x
                assert (x * y) * z == x * (y * z)


class TestHdLPower:
    def test_L_is_uv(self):
        assert hd_L_power(Fraction(1), 1) == StringyPolynomial.monomial(1, 1, 1)

    def test_identity(self):
        assert hd_L_power(Fraction(0), 3) == StringyPolynomial.one(3)

    def test_inverse_L(self):
        x = hd_L_power(Fraction(-1), 1)
        ((key, coeff),) = x.terms
        assert key == (0, 0) and coeff == RationalFunction.t_power(-1)

    def test_non_integral_rejected(self):
        with pytest.raises(ValueError):
            hd_L_power(Fraction(1, 2), 1)


class TestSpecializeCount:
    def test_direct_evaluation(self):
        x = sp(1, {(0, 0): (0, 1, 1)})  # uv + (uv)^2 at t=3
        assert x.specialize_count(Fraction(3)) == 12
        assert StringyPolynomial.one(4).specialize_count(Fraction(11)) == 1

    def test_reduces_before_evaluating(self):
        # ((uv)^2 - 1)/(uv - 1) at t=5 equals 6
        x = StringyPolynomial.from_dict(
            1, {(0, 0): RationalFunction.make((-1, 0, 1), (-1, 1))})
        assert x.specialize_count(Fraction(5)) == 6

    def test_mixed_terms_rejected(self):
        with pytest.raises(ValueError, match="not count-specializable"):
            sp(1, {(1, 0): (1,)}).specialize_count(Fraction(3))

    def test_multiplicative_on_random_pure_elements(self):
        rng = random.Random(9)
        primes = [2, 3, 5, 7, 11, 13, 97]
        for _ in range(30):
            m = rng.choice((1, 2))
            x = sp(m, {(0, 0): tuple(rng.randint(-4, 4) for _ in range(4))})
            y = sp(m, {(0, 0): tuple(rng.randint(-4, 4) for _ in range(4))})
            q = Fraction(rng.choice(primes))
            assert (x * y).specialize_count(q) == \
                x.specialize_count(q) * y.specialize_count(q)


class TestExtractHpq:
    def test_a1_table(self):
        x = sp(1, {(0, 0): (0, 1, 1)})  # (uv)^2 + uv
        assert x.extract_hpq() == {
            (Fraction(2), Fraction(2)): 1, (Fraction(1), Fraction(1)): 1}

    def test_zero(self):
        assert StringyPolynomial.zero(2).extract_hpq() == {}

    def test_fractional_exponents(self):
        x = sp(3, {(0, 0): (0, 0, 1, 0, 1, 0, 1)})  # t^2 + t^4 + t^6 at m=3
        assert x.extract_hpq() == {
            (Fraction(2), Fraction(2)): 1,
            (Fraction(4, 3), Fraction(4, 3)): 1,
            (Fraction(2, 3), Fraction(2, 3)): 1}

    def test_sign_correction(self):
        # E(smooth projective curve of genus g): uv - g u - g v + 1
        g = 4
        x = StringyPolynomial.from_dict(1, {
            (1, 1): RationalFunction.const(1),
            (1, 0): RationalFunction.const(-g),
            (0, 1): RationalFunction.const(-g),
            (0, 0): RationalFunction.const(1)})
        table = x.extract_hpq()
        assert table[(Fraction(1), Fraction(0))] == g
        assert table[(Fraction(0), Fraction(1))] == g
        assert table[(Fraction(1), Fraction(1))] == 1

    def test_genuine_denominator_rejected(self):
        x = StringyPolynomial.from_dict(
            1, {(0, 0): RationalFunction.make((1,), (1, 1))})
        with pytest.raises(ValueError, match="not a stringy polynomial"):
            x.extract_hpq()


class TestSerialization:
    def test_round_trip_is_identity(self):
        rng = random.Random(41)
        for _ in range(40):
            x = random_element(rng, rng.choice((1, 2, 3)))
            assert StringyPolynomial.from_obj(x.to_obj()) == x

    def test_schema_shape(self):
        x = sp(2, {(1, 0): (0, 1)})
        obj = x.to_obj()
        assert obj["m"] == 2
        assert obj["terms"] == [{"u": 1, "v": 0, "num": [0, 1], "den": [1]}]
