"""Sectors of cyclotomic inertia, twisted arcs as constrained series, untwisting.

A twisted arc of order ell on [A^n/G] is stored through its equivariant lift:
one truncated series per coordinate in s = t^(1/ell), with coordinate i
supported on exponents congruent to the sector's eigenvalue exponent k_i mod
ell.  The untwisting map renames s to t; order functions carry the 1/ell
scaling and report precision-bounded sentinels instead of asserting infinite
orders.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .quotient import CyclicQuotientStack, AffineModelY, MPoly

Series = dict[int, object]  # sparse exponent -> field element


def sv_add(a: Series, b: Series, fld) -> Series:
    out = dict(a)
    for e, c in b.items():
        s = fld.add(out.get(e, fld.zero), c)
        if s == fld.zero:
            out.pop(e, None)
        else:
            out[e] = s
    return out


def sv_mul(a: Series, b: Series, fld, prec: int) -> Series:
    out: Series = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            if e >= prec:
                continue
            s = fld.add(out.get(e, fld.zero), fld.mul(ca, cb))
            if s == fld.zero:
                out.pop(e, None)
            else:
                out[e] = s
    return out


def sv_pow(a: Series, k: int, fld, prec: int) -> Series:
    out: Series = {0: fld.one}
    for _ in range(k):
        out = sv_mul(out, a, fld, prec)
    return out


def sv_scale(a: Series, c, fld) -> Series:
    if c == fld.zero:
        return {}
    return {e: fld.mul(x, c) for e, x in a.items()}


def sv_val(a: Series) -> int | None:
    return min(a) if a else None


def mp_eval_series(p: MPoly, series: list[Series], fld, prec: int) -> Series:
    """Evaluate an integer-coefficient polynomial on truncated series."""
    total: Series = {}
    for exps, c in p.items():
        term: Series = {0: fld.from_int(c)}
        if term[0] == fld.zero:
            continue
        for i, e in enumerate(exps):
            if e:
                term = sv_mul(term, sv_pow(series[i], e, fld, prec), fld, prec)
        total = sv_add(total, term, fld)
    return total


@dataclass(frozen=True)
class SectorDatum:
    """A connected component of cyclotomic inertia of order ell.

    For mu_N the label `a` is a group element of exact order ell; for G_m it
    is the banding exponent b, a unit mod ell.  k_i are the eigenvalue
    exponents of the label on the coordinates, fixed coordinates are those
    with k_i = 0, and the age is sum(k_i)/ell.
    """

    kind: str
    ell: int
    a: int
    eigen_exponents: tuple[int, ...]
    fixed_coords: frozenset[int] = field(repr=False)
    age: Fraction

    @staticmethod
    def for_mu(stack: CyclicQuotientStack, a: int) -> "SectorDatum":
        N = stack.order
        a %= N if N > 1 else 1
        ell = N // math.gcd(N, a) if a else 1
        k = tuple((a * w % N) * ell // N for w in stack.weights)
        return SectorDatum("mu", ell, a, k,
                           frozenset(i for i, ki in enumerate(k) if ki == 0),
                           Fraction(sum(k), ell))

    @staticmethod
    def for_gm(stack: CyclicQuotientStack, ell: int, b: int) -> "SectorDatum":
        if ell < 1:
            raise ValueError("ell must be >= 1")
        b %= ell if ell > 1 else 1
        if ell > 1 and math.gcd(b, ell) != 1:
            raise ValueError(f"banding exponent {b} is not a unit mod {ell}")
        k = tuple((b * w) % ell for w in stack.weights)
        return SectorDatum("gm", ell, b, k,
                           frozenset(i for i, ki in enumerate(k) if ki == 0),
                           Fraction(sum(k), ell))

    def signature(self):
        """Fixed locus plus eigenvalue data; used to flag coinciding G_m sectors."""
        return (self.fixed_coords, self.eigen_exponents)


def sectors(stack: CyclicQuotientStack, ell: int) -> list[SectorDatum]:
    """All sectors of order exactly ell; empty when ell does not divide N."""
    if ell < 1:
        raise ValueError("ell must be >= 1")
    if stack.kind == "mu":
        N = stack.order
        if N % ell:
            return []
        if ell == 1:
            return [SectorDatum.for_mu(stack, 0)]
        return [SectorDatum.for_mu(stack, a) for a in range(1, N)
                if N // math.gcd(N, a) == ell]
    if ell == 1:
        return [SectorDatum.for_gm(stack, 1, 0)]
    return [SectorDatum.for_gm(stack, ell, b) for b in range(1, ell)
            if math.gcd(b, ell) == 1]


def all_sectors(stack: CyclicQuotientStack) -> list[SectorDatum]:
    """One sector per group element (mu_N only): union over all ell | N."""
    if stack.kind != "mu":
        raise ValueError("the full sector list is finite only for mu_N quotients")
    out = []
    for ell in sorted(d for d in range(1, stack.order + 1) if stack.order % d == 0):
        out.extend(sectors(stack, ell))
    return out


@dataclass(frozen=True)
class OrderBound:
    """Sentinel: the order is >= at_least but vanishes to the stored precision."""

    at_least: Fraction

    def __str__(self):
        return f"order >= {self.at_least}"


@dataclass(frozen=True)
class TwistedArc:
    """Equivariant lift of a twisted arc: constrained coordinate series in s."""

    sector: SectorDatum
    fld: object
    series: tuple[Series, ...]
    s_precision: int

    def __post_init__(self):
        if self.s_precision % self.sector.ell:
            raise ValueError("s-precision must cover whole t-levels (ell | precision)")
        for i, (ser, ki) in enumerate(zip(self.series, self.sector.eigen_exponents)):
            for e, c in ser.items():
                if not 0 <= e < self.s_precision:
                    raise ValueError(f"coordinate {i}: exponent {e} out of range")
                if e % self.sector.ell != ki:
                    raise ValueError(
                        f"coordinate {i}: exponent {e} violates the congruence "
                        f"{ki} mod {self.sector.ell}")
                if c == self.fld.zero:
                    raise ValueError("zero coefficient stored in arc series")

    @property
    def t_precision(self) -> int:
        return self.s_precision // self.sector.ell

    def truncate(self, s_precision: int) -> "TwistedArc":
        if s_precision > self.s_precision or s_precision % self.sector.ell:
            raise ValueError("can only truncate to a smaller whole t-level")
        return TwistedArc(self.sector, self.fld,
                          tuple({e: c for e, c in s.items() if e < s_precision}
                                for s in self.series), s_precision)


def sample_arc(stack: CyclicQuotientStack, sector: SectorDatum, s_precision: int,
               fld, rng, generic: bool = True) -> TwistedArc:
    """Random constrained series; generic arcs get nonzero leading coefficients."""
    series = []
    for ki in sector.eigen_exponents:
        ser: Series = {}
        for e in range(ki, s_precision, sector.ell):
            c = (fld.random_nonzero(rng) if (generic and e == ki)
                 else fld.random(rng))
            if c != fld.zero:
                ser[e] = c
        series.append(ser)
    return TwistedArc(sector, fld, tuple(series), s_precision)


def untwist(arc: TwistedArc) -> list[Series]:
    """The underlying untwisted arc of the ambient space: rename s to t."""
    return [dict(s) for s in arc.series]


def omega_on_model(arc: TwistedArc, model: AffineModelY) -> list[Series]:
    """Untwisted arc of Y: evaluate each invariant generator, substitute s^ell = t.

    Every exponent of the pullback of an invariant monomial is divisible by
    ell; the result is a t-series per generator at precision t_precision.
    """
    ell, prec = arc.sector.ell, arc.s_precision
    out = []
    for gen in model.generators:
        mono: MPoly = {tuple(gen): 1}
        val = mp_eval_series(mono, list(arc.series), arc.fld, prec)
        if any(e % ell for e in val):
            raise ValueError("non-invariant exponent survived the generator pullback")
        out.append({e // ell: c for e, c in val.items()})
    return out


def ord_ideal_ambient(arc: TwistedArc, gens: list[MPoly]):
    """(1/ell) * min s-valuation of the pulled-back generators, or a sentinel."""
    return _ord_from_series(
        [mp_eval_series(g, list(arc.series), arc.fld, arc.s_precision) for g in gens],
        Fraction(1, arc.sector.ell), Fraction(arc.s_precision, arc.sector.ell))


def ord_ideal_on_model(arc: TwistedArc, model: AffineModelY, gens: list[MPoly]):
    """Order along the induced arc of Y (already in t-units) of an ideal on Y."""
    y = omega_on_model(arc, model)
    pulled = [mp_eval_series(g, y, arc.fld, arc.t_precision) for g in gens]
    return _ord_from_series(pulled, Fraction(1), Fraction(arc.t_precision))


def _ord_from_series(pulled: list[Series], scale: Fraction, bound: Fraction):
    vals = [sv_val(p) for p in pulled]
    finite = [v for v in vals if v is not None]
    if not finite:
        return OrderBound(bound)
    return min(finite) * scale
