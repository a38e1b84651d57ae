import random
from fractions import Fraction

import pytest

from stringy.arcs import (OrderBound, SectorDatum, TwistedArc, all_sectors,
                          omega_on_model, ord_ideal_ambient, ord_ideal_on_model,
                          sample_arc, sectors, untwist)
from stringy.fields import QQ, PrimeField
from stringy.quotient import CyclicQuotientStack, hypersurface_model

F7 = PrimeField(7)


def arc_qq(stack, a, series, prec):
    sec = SectorDatum.for_mu(stack, a)
    return TwistedArc(sec, QQ, tuple({e: Fraction(c) for e, c in s.items()}
                                     for s in series), prec)


class TestSectors:
    def test_a1_twisted(self):
        st = CyclicQuotientStack.mu(2, (1, 1))
        (sec,) = sectors(st, 2)
        assert sec.a == 1 and sec.eigen_exponents == (1, 1) and sec.age == 1

    def test_untwisted_sector(self):
        for st in (CyclicQuotientStack.mu(4, (1, 3)), CyclicQuotientStack.gm((1, -1))):
            (sec,) = sectors(st, 1)
            assert sec.age == 0 and sec.ell == 1

    def test_mu5_ages(self):
        st = CyclicQuotientStack.mu(5, (1, 2))
        ages = sorted(s.age for s in sectors(st, 5))
        assert ages == sorted(
            [Fraction(3, 5), Fraction(6, 5), Fraction(4, 5), Fraction(7, 5)])

    def test_non_divisor_gives_empty(self):
        assert sectors(CyclicQuotientStack.mu(4, (1, 3)), 3) == []

    def test_all_sectors_count(self):
        st = CyclicQuotientStack.mu(6, (1, 5))
        assert len(all_sectors(st)) == 6  # one per group element

    def test_permutation_equivariance(self):
        rng = random.Random(10)
        for _ in range(20):
            N = rng.randint(2, 8)
            w = [rng.randrange(N) for _ in range(3)]
            try:
                st = CyclicQuotientStack.mu(N, w)
            except ValueError:
                continue
            perm = list(range(3))
            rng.shuffle(perm)
            st2 = CyclicQuotientStack.mu(N, [w[p] for p in perm])
            for ell in range(1, N + 1):
                s1 = sectors(st, ell)
                s2 = sectors(st2, ell)
                assert [s.a for s in s1] == [s.a for s in s2]
                for x, y in zip(s1, s2):
                    assert tuple(x.eigen_exponents[p] for p in perm) == \
                        y.eigen_exponents
                    assert x.age == y.age

    def test_inversion_symmetry(self):
        # age(a) + age(-a) = number of non-fixed coordinates
        for N, w in [(5, (1, 2)), (6, (1, 5)), (7, (1, 3)), (4, (1, 2, 3))]:
            st = CyclicQuotientStack.mu(N, w)
            for sec in all_sectors(st):
                inv = SectorDatum.for_mu(st, (-sec.a) % N)
                nonfixed = st.n - len(sec.fixed_coords)
                assert sec.age + inv.age == nonfixed

    def test_gm_sectors_are_units(self):
        st = CyclicQuotientStack.gm((1, -1))
        assert [s.a for s in sectors(st, 6)] == [1, 5]
        with pytest.raises(ValueError):
            SectorDatum.for_gm(st, 6, 2)

    def test_gm_collision_signature(self):
        # degenerate weights make distinct banding exponents share their
        # fixed-locus/eigenvalue data; they are kept and flag as collisions
        st = CyclicQuotientStack.gm((2, -2))
        s2, = sectors(st, 2)[:1]
        assert s2.fixed_coords == frozenset({0, 1})
        sigs = [s.signature() for s in sectors(st, 4)]
        assert len(sigs) == 2 and sigs[0] == sigs[1]
        # nondegenerate weights keep the signatures apart
        nd = [s.signature() for s in sectors(CyclicQuotientStack.gm((1, -1)), 4)]
        assert nd[0] != nd[1]


class TestTwistedArc:
    def test_support_congruence_enforced(self):
        st = CyclicQuotientStack.mu(2, (1, 1))
        with pytest.raises(ValueError, match="congruence"):
            arc_qq(st, 1, ({2: 1}, {1: 1}), 8)

    def test_precision_whole_t_levels(self):
        st = CyclicQuotientStack.mu(2, (1, 1))
        with pytest.raises(ValueError, match="whole t-level"):
            arc_qq(st, 1, ({1: 1}, {1: 1}), 7)

    def test_truncate(self):
        st = CyclicQuotientStack.mu(2, (1, 1))
        arc = arc_qq(st, 1, ({1: 1, 5: 2}, {3: 1}), 8)
        tr = arc.truncate(4)
        assert tr.series == ({1: 1}, {3: 1}) and tr.t_precision == 2

    def test_sampler_respects_sector(self):
        rng = random.Random(0)
        st = CyclicQuotientStack.mu(4, (1, 3))
        for sec in all_sectors(st):
            arc = sample_arc(st, sec, 16, F7, rng)
            for ki, s in zip(sec.eigen_exponents, arc.series):
                assert all(e % sec.ell == ki for e in s)
                assert s[ki] != 0  # generic leading coefficient


class TestOmega:
    def test_a1_diagonal_arc(self):
        st = CyclicQuotientStack.mu(2, (1, 1))
        ym = hypersurface_model(st)
        arc = arc_qq(st, 1, ({1: 1}, {1: 1}), 8)
        x, y, z = omega_on_model(arc, ym)
        assert x == {1: 1} and y == {1: 1} and z == {1: 1}  # all equal t

    def test_zero_series(self):
        st = CyclicQuotientStack.mu(2, (1, 1))
        ym = hypersurface_model(st)
        arc = arc_qq(st, 1, ({}, {}), 8)
        assert omega_on_model(arc, ym) == [{}, {}, {}]

    def test_untwisted_is_plain_composition(self):
        st = CyclicQuotientStack.mu(2, (1, 1))
        ym = hypersurface_model(st)
        arc = arc_qq(st, 0, ({0: 2, 1: 1}, {1: 3}), 8)
        x, y, z = omega_on_model(arc, ym)
        # x = (2 + t)^2, z = (2 + t) * 3t
        assert x == {0: 4, 1: 4, 2: 1}
        assert z == {1: 6, 2: 3}

    def test_respects_truncation(self):
        rng = random.Random(21)
        st = CyclicQuotientStack.mu(3, (1, 2))
        ym = hypersurface_model(st)
        sec = sectors(st, 3)[0]
        for _ in range(20):
            arc = sample_arc(st, sec, 18, F7, rng)
            full = omega_on_model(arc, ym)
            small = omega_on_model(arc.truncate(9), ym)
            for a, b in zip(full, small):
                assert {e: c for e, c in a.items() if e < 3} == b


class TestOrderFunctions:
    def setup_method(self):
        self.st = CyclicQuotientStack.mu(2, (1, 1))
        self.ym = hypersurface_model(self.st)
        self.arc = arc_qq(self.st, 1, ({1: 1}, {1: 1}), 24)

    def test_jacobian_pullback_order_one(self):
        assert ord_ideal_on_model(self.arc, self.ym,
                                  list(self.ym.jacobian_ideal)) == 1

    def test_unit_ideal(self):
        assert ord_ideal_ambient(self.arc, [{(0, 0): 1}]) == 0

    def test_sentinel_on_vanishing(self):
        arc = arc_qq(self.st, 1, ({}, {1: 1}), 12)
        out = ord_ideal_ambient(arc, [{(1, 0): 1}])  # ideal (x1)
        assert isinstance(out, OrderBound) and out.at_least == 6

    def test_min_over_generators(self):
        arc = arc_qq(self.st, 1, ({3: 1}, {1: 2}), 24)
        assert ord_ideal_ambient(arc, [{(1, 0): 1}, {(0, 1): 1}]) == Fraction(1, 2)

    def test_additive_on_principal_products(self):
        rng = random.Random(6)
        st = CyclicQuotientStack.mu(3, (1, 2))
        sec = sectors(st, 3)[0]
        from stringy.quotient import MPoly

        def mp_mul(p: MPoly, q: MPoly) -> MPoly:
            out: MPoly = {}
            for e1, c1 in p.items():
                for e2, c2 in q.items():
                    k = tuple(a + b for a, b in zip(e1, e2))
                    out[k] = out.get(k, 0) + c1 * c2
            return {k: c for k, c in out.items() if c}

        for _ in range(20):
            arc = sample_arc(st, sec, 36, F7, rng)
            f: MPoly = {(1, 0): 1, (0, 3): rng.randint(1, 6)}
            g: MPoly = {(2, 1): 1}
            of, og = ord_ideal_ambient(arc, [f]), ord_ideal_ambient(arc, [g])
            ofg = ord_ideal_ambient(arc, [mp_mul(f, g)])
            assert ofg == of + og

    def test_untwist_renames_s_to_t(self):
        assert untwist(self.arc) == [{1: 1}, {1: 1}]
