import random

import pytest

from stringy.fields import PrimeField
from stringy.quotient import (AffineModelY, CyclicQuotientStack,
                              binomial_relations, hypersurface_model,
                              hypersurface_vanishes_on_generators,
                              invariant_generators, model_for)


class TestStackValidation:
    def test_faithful_required(self):
        with pytest.raises(ValueError, match="not faithful"):
            CyclicQuotientStack.mu(4, (2, 2))

    def test_gm_nonzero_weights(self):
        with pytest.raises(ValueError):
            CyclicQuotientStack.gm((0, 0))
        assert CyclicQuotientStack.gm((1, -1)).dim_x == 1

    def test_weights_normalized(self):
        st = CyclicQuotientStack.mu(3, (4, -1))
        assert st.weights == (1, 2)

    def test_json_round_trip(self):
        for st in (CyclicQuotientStack.mu(5, (1, 2)), CyclicQuotientStack.gm((2, -3))):
            assert CyclicQuotientStack.from_json(st.to_json()) == st


class TestGorensteinIndex:
    def test_a_type_is_one(self):
        for N in (2, 3, 4, 5):
            assert CyclicQuotientStack.mu(N, (1, N - 1)).gorenstein_index == 1

    def test_one_third_one_one(self):
        assert CyclicQuotientStack.mu(3, (1, 1)).gorenstein_index == 3

    def test_minimality(self):
        rng = random.Random(19)
        for _ in range(40):
            N = rng.randint(1, 12)
            w = [rng.randrange(N) if N > 1 else 0 for _ in range(rng.randint(1, 3))]
            try:
                st = CyclicQuotientStack.mu(N, w)
            except ValueError:
                continue
            m = st.gorenstein_index
            assert m * sum(st.weights) % N == 0
            assert all((k * sum(st.weights)) % N for k in range(1, m))


class TestInvariantGenerators:
    def test_a1(self):
        st = CyclicQuotientStack.mu(2, (1, 1))
        assert invariant_generators(st) == [(0, 2), (1, 1), (2, 0)]

    def test_trivial_group_gives_coordinates(self):
        st = CyclicQuotientStack.mu(1, (0, 0, 0))
        assert invariant_generators(st, degree_bound=3) == [
            (0, 0, 1), (0, 1, 0), (1, 0, 0)]

    def test_twisted_cubic_cone(self):
        st = CyclicQuotientStack.mu(3, (1, 1))
        assert invariant_generators(st) == [(0, 3), (1, 2), (2, 1), (3, 0)]

    def test_exhaustive_oracle(self):
        # minimality: no generator dominates another; completeness: every
        # invariant exponent vector up to the bound is a sum of generators
        rng = random.Random(4)
        for _ in range(10):
            N = rng.randint(2, 6)
            w = (1, rng.randrange(N))
            st = CyclicQuotientStack.mu(N, w)
            gens = invariant_generators(st)
            for g in gens:
                assert sum(wi * ei for wi, ei in zip(st.weights, g)) % N == 0
            reachable = {(0, 0)}
            bound = N * st.n
            for _ in range(bound):
                new = set()
                for r in reachable:
                    for g in gens:
                        s = (r[0] + g[0], r[1] + g[1])
                        if sum(s) <= bound:
                            new.add(s)
                reachable |= new
            for e0 in range(bound + 1):
                for e1 in range(bound + 1 - e0):
                    if (st.weights[0] * e0 + st.weights[1] * e1) % N == 0:
                        assert (e0, e1) in reachable, (N, w, (e0, e1))

    def test_gm_unsupported(self):
        with pytest.raises(ValueError, match="G_m"):
            invariant_generators(CyclicQuotientStack.gm((1, -1)))

    def test_degree_bound_precondition(self):
        with pytest.raises(ValueError):
            invariant_generators(CyclicQuotientStack.mu(4, (1, 3)), degree_bound=2)


class TestHypersurfaceModel:
    def test_a1(self):
        st = CyclicQuotientStack.mu(2, (1, 1))
        ym = hypersurface_model(st)
        assert ym.hypersurface == {(1, 1, 0): 1, (0, 0, 2): -1}
        assert ym.jacobian_ideal == ({(0, 1, 0): 1}, {(1, 0, 0): 1}, {(0, 0, 1): -2})
        assert hypersurface_vanishes_on_generators(ym)

    def test_a3(self):
        ym = hypersurface_model(CyclicQuotientStack.mu(4, (1, 3)))
        assert ym.hypersurface == {(1, 1, 0): 1, (0, 0, 4): -1}
        assert hypersurface_vanishes_on_generators(ym)

    def test_absent_for_non_hypersurface(self):
        assert hypersurface_model(CyclicQuotientStack.mu(3, (1, 1))) is None

    def test_weights_only_matter_mod_group_change(self):
        # (2, 3) mod 5 is an A_4 singularity in disguise
        ym = hypersurface_model(CyclicQuotientStack.mu(5, (2, 3)))
        assert ym is not None and ym.hypersurface[(0, 0, 5)] == -1

    def test_model_json_round_trip(self):
        ym = hypersurface_model(CyclicQuotientStack.mu(3, (1, 2)))
        assert AffineModelY.from_json(ym.to_json()) == ym

    def test_model_for_fallbacks(self):
        assert model_for(CyclicQuotientStack.mu(1, (0,))).hypersurface is None
        m = model_for(CyclicQuotientStack.mu(3, (1, 1)))
        assert len(m.generators) == 4 and m.relations == ()


class TestRelations:
    def test_binomials_vanish_on_parametrized_points(self):
        rng = random.Random(99)
        F101 = PrimeField(101)
        for N, w in [(2, (1, 1)), (3, (1, 1)), (4, (1, 3)), (5, (1, 2))]:
            st = CyclicQuotientStack.mu(N, w)
            gens = invariant_generators(st)
            # the A-type relation x*y = z^N needs multiplicity N on the z side
            rels = binomial_relations(gens, max_multiplicity=N)
            assert rels, (N, w)
            for _ in range(100):
                pt = [F101.random(rng) for _ in range(st.n)]

                def mono(e):
                    out = F101.one
                    for xi, ei in zip(pt, e):
                        for _ in range(ei):
                            out = F101.mul(out, xi)
                    return out

                for alpha, beta in rels:
                    lhs = F101.one
                    for a, g in zip(alpha, gens):
                        for _ in range(a):
                            lhs = F101.mul(lhs, mono(g))
                    rhs = F101.one
                    for b, g in zip(beta, gens):
                        for _ in range(b):
                            rhs = F101.mul(rhs, mono(g))
                    assert lhs == rhs

    def test_hypersurface_relation_is_binomial_relation(self):
        # x*y = z^N matches the additive coincidence (N,0)+(0,N) = N*(1,1)
        st = CyclicQuotientStack.mu(3, (1, 2))
        gens = invariant_generators(st)
        rels = binomial_relations(gens, max_multiplicity=3)
        target = False
        for alpha, beta in rels:
            used = sorted((g, a) for g, a in zip(gens, alpha) if a) + \
                sorted((g, -b) for g, b in zip(gens, beta) if b)
            degs = sorted(abs(x[1]) for x in used)
            if degs in ([1, 1, 3], [1, 3, 1], [3, 1, 1]):
                target = True
        assert target
