"""Presentations of the implemented geometries [A^n/mu_N] and [A^n/G_m] (diagonal).

Multivariate monomial data is kept as plain dicts {exponent tuple: int
coefficient}; the affine model of the good moduli space stores invariant
monomial generators plus, for the A-type surface family, the explicit
hypersurface x*y = z^N with its Jacobian ideal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

MPoly = dict[tuple[int, ...], int]


def mp_diff(p: MPoly, i: int) -> MPoly:
    out: MPoly = {}
    for exps, c in p.items():
        if exps[i] == 0:
            continue
        e = list(exps)
        coeff = c * e[i]
        e[i] -= 1
        key = tuple(e)
        out[key] = out.get(key, 0) + coeff
        if out[key] == 0:
            del out[key]
    return out


def _mp_to_json(p: MPoly) -> list:
    return [[list(exps), c] for exps, c in sorted(p.items())]


def _mp_from_json(terms: list) -> MPoly:
    return {tuple(exps): int(c) for exps, c in terms}


@dataclass(frozen=True)
class CyclicQuotientStack:
    kind: str  # "mu" or "gm"
    order: int  # N for mu_N; 0 for G_m
    weights: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ("mu", "gm"):
            raise ValueError("group must be mu_N or G_m")
        if not self.weights:
            raise ValueError("need at least one coordinate")
        if self.kind == "mu":
            if self.order < 1:
                raise ValueError("N must be >= 1")
            g = self.order
            for w in self.weights:
                g = math.gcd(g, w)
            if g != 1:
                raise ValueError(
                    f"action not faithful: gcd(N, weights) = {g}; divide it out first")
            if any(not 0 <= w < self.order for w in self.weights) and self.order > 1:
                raise ValueError("mu_N weights must be stored normalized mod N")
        else:
            if all(w == 0 for w in self.weights):
                raise ValueError("G_m weights must not all vanish")

    @staticmethod
    def mu(N: int, weights) -> "CyclicQuotientStack":
        if N < 1:
            raise ValueError("N must be >= 1")
        return CyclicQuotientStack("mu", N, tuple(w % N if N > 1 else 0 for w in weights))

    @staticmethod
    def gm(weights) -> "CyclicQuotientStack":
        return CyclicQuotientStack("gm", 0, tuple(int(w) for w in weights))

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def dim_x(self) -> int:
        return self.n if self.kind == "mu" else self.n - 1

    @property
    def gorenstein_index(self) -> int:
        """Smallest m with m * sum(weights) = 0 mod N (mu_N quotients only)."""
        if self.kind != "mu":
            raise ValueError("Gorenstein index implemented for mu_N quotients only")
        s = sum(self.weights) % self.order
        return self.order // math.gcd(self.order, s) if s else 1

    def to_json(self) -> dict:
        group = {"mu": self.order} if self.kind == "mu" else "Gm"
        return {"group": group, "weights": list(self.weights)}

    @staticmethod
    def from_json(obj: dict) -> "CyclicQuotientStack":
        group = obj["group"]
        if group == "Gm":
            return CyclicQuotientStack.gm(obj["weights"])
        if isinstance(group, dict) and "mu" in group:
            return CyclicQuotientStack.mu(int(group["mu"]), obj["weights"])
        raise ValueError(f"unknown group spec {group!r}")

    def __str__(self):
        g = f"mu_{self.order}" if self.kind == "mu" else "G_m"
        return f"[A^{self.n}/{g}]{self.weights}"


@dataclass(frozen=True)
class AffineModelY:
    """Affine model of the good moduli space Y: invariant generators and relations.

    `generators[a]` is the ambient exponent vector of the a-th invariant
    monomial; `relations` (polynomials in the model variables) present the
    ideal of Y, and for hypersurface models the single equation and its
    Jacobian ideal are spelled out.
    """

    var_names: tuple[str, ...]
    generators: tuple[tuple[int, ...], ...]
    relations: tuple[MPoly, ...] = ()
    hypersurface: MPoly | None = None
    jacobian_ideal: tuple[MPoly, ...] = field(default=())

    @property
    def dim(self) -> int:
        return len(self.generators[0]) if self.generators else len(self.var_names)

    @staticmethod
    def affine_space(dim: int) -> "AffineModelY":
        """Smooth model Y = A^dim: coordinates as generators, unit Jacobian ideal."""
        names = tuple(f"y{i}" for i in range(dim))
        gens = tuple(tuple(1 if j == i else 0 for j in range(dim)) for i in range(dim))
        unit: MPoly = {(0,) * dim: 1}
        return AffineModelY(names, gens, (), None, (unit,))

    def to_json(self) -> dict:
        return {
            "var_names": list(self.var_names),
            "generators": [list(g) for g in self.generators],
            "relations": [_mp_to_json(r) for r in self.relations],
            "hypersurface": (_mp_to_json(self.hypersurface)
                             if self.hypersurface is not None else None),
            "jacobian_ideal": [_mp_to_json(g) for g in self.jacobian_ideal],
        }

    @staticmethod
    def from_json(obj: dict) -> "AffineModelY":
        return AffineModelY(
            var_names=tuple(obj["var_names"]),
            generators=tuple(tuple(g) for g in obj["generators"]),
            relations=tuple(_mp_from_json(r) for r in obj.get("relations", [])),
            hypersurface=(_mp_from_json(obj["hypersurface"])
                          if obj.get("hypersurface") is not None else None),
            jacobian_ideal=tuple(_mp_from_json(g)
                                 for g in obj.get("jacobian_ideal", [])))


def invariant_generators(stack: CyclicQuotientStack, degree_bound: int | None = None):
    """Hilbert basis of the invariant-monomial monoid up to the degree bound.

    Complete whenever degree_bound >= N * n; minimality is componentwise
    (an invariant exponent vector is reducible exactly when a smaller
    nonzero invariant vector sits below it).
    """
    if stack.kind != "mu":
        raise ValueError("invariant generators unsupported for G_m (Y not implemented)")
    N, n, w = stack.order, stack.n, stack.weights
    if degree_bound is None:
        degree_bound = N * n
    if degree_bound < N:
        raise ValueError(f"degree bound {degree_bound} < N = {N}")
    basis: list[tuple[int, ...]] = []
    for total in range(1, degree_bound + 1):
        for e in _compositions(total, n):
            if sum(wi * ei for wi, ei in zip(w, e)) % N:
                continue
            if any(all(bi <= ei for bi, ei in zip(b, e)) for b in basis):
                continue
            basis.append(e)
    return sorted(basis)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def hypersurface_model(stack: CyclicQuotientStack) -> AffineModelY | None:
    """The A-type surface model x*y - z^N for two-variable quotients with sum(w) = 0 mod N.

    Returns None when Y is not such a hypersurface (absence is a value).
    """
    if stack.kind != "mu" or stack.n != 2 or stack.order < 2:
        return None
    N = stack.order
    if sum(stack.weights) % N:
        return None
    f: MPoly = {(1, 1, 0): 1, (0, 0, N): -1}
    jac = (
        {(0, 1, 0): 1},          # d/dx -> y
        {(1, 0, 0): 1},          # d/dy -> x
        {(0, 0, N - 1): -N},     # d/dz -> -N z^(N-1)
    )
    return AffineModelY(
        var_names=("x", "y", "z"),
        generators=((N, 0), (0, N), (1, 1)),
        relations=(f,),
        hypersurface=f,
        jacobian_ideal=jac,
    )


def model_for(stack: CyclicQuotientStack) -> AffineModelY:
    """Best available affine model: the hypersurface one, else generators only."""
    hs = hypersurface_model(stack)
    if hs is not None:
        return hs
    if stack.kind == "mu" and stack.order == 1:
        return AffineModelY.affine_space(stack.n)
    gens = tuple(invariant_generators(stack))
    names = tuple(f"y{i}" for i in range(len(gens)))
    return AffineModelY(names, gens)


def hypersurface_vanishes_on_generators(model: AffineModelY) -> bool:
    """Substitute the generator monomials into f and check identical vanishing."""
    if model.hypersurface is None:
        return True
    acc: MPoly = {}
    for exps, c in model.hypersurface.items():
        xexp = [0] * len(model.generators[0])
        for a, e in enumerate(exps):
            for i in range(len(xexp)):
                xexp[i] += e * model.generators[a][i]
        key = tuple(xexp)
        acc[key] = acc.get(key, 0) + c
        if acc[key] == 0:
            del acc[key]
    return not acc


def binomial_relations(generators, max_multiplicity: int = 2):
    """Binomial relations from additive coincidences among the exponent vectors.

    Enumerates multiplicity vectors alpha with sum(alpha) <= max_multiplicity
    and groups them by the total ambient exponent; each colliding pair with
    disjoint support yields one binomial.
    """
    gens = list(generators)
    seen: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    n = len(gens[0])
    for alpha in product(range(max_multiplicity + 1), repeat=len(gens)):
        if not 0 < sum(alpha) <= max_multiplicity:
            continue
        total = tuple(sum(a * g[i] for a, g in zip(alpha, gens)) for i in range(n))
        seen.setdefault(total, []).append(alpha)
    rels = []
    for group in seen.values():
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                a, b = group[i], group[j]
                if all(x == 0 or y == 0 for x, y in zip(a, b)):
                    rels.append((a, b))
    return rels
