"""Motivic volumes of twisted-jet cylinders for mu_N quotients, plus count oracles.

A level-n twisted jet in a sector is a tuple of coordinate series mod
s^(ell(n+1)) supported on the sector congruences, so it has exactly n+1
coefficient slots per coordinate.  The groupoid-counting rule for faithful
mu_N quotients over F_q with q = 1 mod N identifies the groupoid cardinality
of the level-n jets with the number of constrained coefficient tuples;
symbolically a cylinder cut out by slotwise free/zero/nonzero conditions is
an affine-space-with-torus stratum of class L^free * (L-1)^nonzero, and its
volume carries the L^(-(n+1) dim X) normalization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .arcs import SectorDatum, all_sectors
from .quotient import CyclicQuotientStack
from .stringypoly import StringyPolynomial, hd_L_power
from .weights import weight_of_sector

Condition = tuple[int, int, str]  # (coordinate, s-exponent, "zero" | "nonzero")


def sector_slots(sector: SectorDatum, n: int) -> list[tuple[int, int]]:
    """Coefficient slots (coordinate, exponent) of a level-n jet in the sector."""
    ell = sector.ell
    out = []
    for i, k in enumerate(sector.eigen_exponents):
        out.extend((i, e) for e in range(k, ell * (n + 1), ell))
    return out


@dataclass(frozen=True)
class CylinderSpec:
    """A cylinder at a finite jet level, cut out by slotwise conditions."""

    sector: SectorDatum
    level: int
    conditions: tuple[Condition, ...] = ()

    def __post_init__(self):
        ell = self.sector.ell
        slots = set(sector_slots(self.sector, self.level))
        seen = set()
        for coord, e, kind in self.conditions:
            if kind not in ("zero", "nonzero"):
                raise ValueError(f"unknown condition kind {kind!r}")
            if (coord, e) not in slots:
                raise ValueError(
                    f"condition on ({coord}, {e}) references no slot below level "
                    f"{self.level} with the congruence {self.sector.eigen_exponents[coord]} "
                    f"mod {ell}")
            if (coord, e) in seen:
                raise ValueError(f"duplicate condition on slot ({coord}, {e})")
            seen.add((coord, e))


@dataclass(frozen=True)
class MotivicVolume:
    value: StringyPolynomial
    level_used: int


def sector_volume(stack: CyclicQuotientStack, sector: SectorDatum,
                  conditions=(), level: int | None = None) -> MotivicVolume:
    """Motivic volume of the cylinder cut out by the conditions in this sector.

    The volume is computed at the smallest covering level and again one level
    higher; the two must agree (the defining limit is constant on cylinders),
    and the stabilized value is returned.
    """
    if stack.kind != "mu":
        raise ValueError("motivic volumes are implemented for faithful mu_N quotients only")
    conditions = tuple(conditions)
    min_level = 0
    for _, e, _ in conditions:
        min_level = max(min_level, e // sector.ell)
    if level is None:
        level = min_level
    if level < min_level:
        raise ValueError(f"level {level} does not cover conditions up to level {min_level}")
    v0 = _volume_at_level(stack, sector, conditions, level)
    v1 = _volume_at_level(stack, sector, conditions, level + 1)
    if v0 != v1:
        raise AssertionError("cylinder volume failed to stabilize across levels")
    return MotivicVolume(v0, level)


def _volume_at_level(stack, sector, conditions, n: int) -> StringyPolynomial:
    CylinderSpec(sector, n, conditions)  # validates
    m = stack.gorenstein_index
    slots = len(sector_slots(sector, n))
    nz = sum(1 for c in conditions if c[2] == "nonzero")
    z = sum(1 for c in conditions if c[2] == "zero")
    free = slots - nz - z
    out = StringyPolynomial.t_power(m, m * (free - (n + 1) * stack.dim_x))
    if nz:
        Lm1 = hd_L_power(Fraction(1), m) - StringyPolynomial.one(m)
        out = out * Lm1 ** nz
    return out


def groupoid_count_oracle(stack: CyclicQuotientStack, sector: SectorDatum, n: int,
                          q: int, conditions=(), method: str = "auto",
                          require_split: bool = True,
                          guard: int = 10 ** 7) -> int:
    """Groupoid cardinality of the level-n twisted jets over F_q in this sector.

    For q = 1 mod N this equals the number of constrained coefficient tuples
    (torsor twists and automorphisms cancel).  With require_split=False the
    tuple count is returned for any q; the fibration ratio tests use that
    mode.  method picks direct enumeration ("enumerate"), the per-slot product
    ("factored"), or whichever fits the guard ("auto").
    """
    if stack.kind != "mu":
        raise ValueError("the groupoid count oracle handles mu_N quotients only")
    if require_split and q % stack.order != 1 % stack.order:
        raise ValueError(f"q = {q} is not 1 mod N = {stack.order}")
    if stack.order % sector.ell:
        return 0
    conditions = tuple(conditions)
    CylinderSpec(sector, n, conditions)
    slots = sector_slots(sector, n)
    kinds = {(c, e): kind for c, e, kind in conditions}
    total = q ** len(slots)
    if method not in ("auto", "enumerate", "factored"):
        raise ValueError(f"unknown method {method!r}")
    if method == "enumerate" and total > guard:
        raise ValueError(f"enumeration of {total} tuples exceeds the guard {guard}")
    if method == "enumerate" or (method == "auto" and total <= guard):
        count = 0
        for tup in product(range(q), repeat=len(slots)):
            ok = True
            for val, slot in zip(tup, slots):
                kind = kinds.get(slot)
                if kind == "zero" and val != 0:
                    ok = False
                    break
                if kind == "nonzero" and val == 0:
                    ok = False
                    break
            count += ok
        return count
    count = 1
    for slot in slots:
        kind = kinds.get(slot)
        count *= 1 if kind == "zero" else (q - 1 if kind == "nonzero" else q)
    return count


def integrate_weight(stack: CyclicQuotientStack, convention: str = "cotangent",
                     level: int | None = None) -> StringyPolynomial:
    """Integral of L^(-wt) over all twisted arcs: sum of L^(-wt) over sectors.

    Each whole sector has volume 1 and the weight function is constant on it,
    so the integral is the finite sum over group elements of all orders
    dividing N.  Passing a level recomputes every sector volume at that jet
    level (with its stabilization probe) instead of trusting the closed form.
    """
    m = stack.gorenstein_index
    total = StringyPolynomial.zero(m)
    for sector in all_sectors(stack):
        wt = weight_of_sector(stack, sector, convention).wt
        term = hd_L_power(-wt, m)
        if level is not None:
            term = term * sector_volume(stack, sector, level=level).value
        total = total + term
    return total


@dataclass(frozen=True)
class DecayRow:
    sector: SectorDatum
    level: int
    volume: StringyPolynomial


def thin_set_decay(stack: CyclicQuotientStack, zero_coords, n_max: int) -> list[DecayRow]:
    """Volumes of twisted jets factoring through the coordinate subspace Z, per level.

    Z is the subspace where the named coordinates vanish; it must be proper.
    The row volume at level n is L^(-(n+1) codim Z) in every sector, so the
    L-degree drops by codim Z with each level.
    """
    zero_coords = sorted(set(zero_coords))
    if not zero_coords:
        raise ValueError("Z = X is not a proper closed substack")
    if any(not 0 <= i < stack.n for i in zero_coords):
        raise ValueError("coordinate index out of range")
    rows = []
    for sector in all_sectors(stack):
        for n in range(n_max + 1):
            conds = tuple((i, e, "zero") for i, e in sector_slots(sector, n)
                          if i in zero_coords)
            vol = sector_volume(stack, sector, conds, level=n)
            # the defining level is n even when the stabilization probe ran higher
            rows.append(DecayRow(sector, n, vol.value))
    return rows
