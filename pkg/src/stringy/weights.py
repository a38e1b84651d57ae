"""The weight function on cyclotomic inertia, from graded cotangent data.

At a point of a sector the restricted cotangent complex is the two-term
complex [Omega -> g^dual] of group representations (the second term vanishes
for finite groups); the weight is

    wt = dim X + (1/ell) * (sum of H^1 weights - sum of H^0 weights)

with weight representatives in {1, ..., ell}.  The sign convention assigning
the cotangent line dx_i the twist class (ell - k_i) (and ell when k_i = 0) is
the default; the opposite reading is kept behind a flag for sensitivity
checks.  Under the default, mu_N sector weights equal ages.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arcs import SectorDatum, TwistedArc, sectors, sv_val
from .fields import QQ
from .gradedsmith import GradedMatrix, two_term_cohomology
from .quotient import CyclicQuotientStack

CONVENTIONS = ("cotangent", "inverse")


def _rep(residue: int, ell: int) -> int:
    """Representative of a residue class in {1, ..., ell}."""
    r = residue % ell
    return r if r else ell


def cotangent_label(k: int, ell: int, convention: str) -> int:
    """Z/ell grading label of the cotangent line dx_i for eigenvalue exponent k."""
    if convention == "cotangent":
        return (-k) % ell
    if convention == "inverse":
        return k % ell
    raise ValueError(f"unknown convention {convention!r}; use one of {CONVENTIONS}")


@dataclass(frozen=True)
class WeightReport:
    sector: SectorDatum
    d_list: tuple[int, ...]  # H^0 weights, representatives in {1..ell}
    c_list: tuple[int, ...]  # H^1 weights
    wt: Fraction
    convention: str

    def to_json(self) -> dict:
        return {
            "ell": self.sector.ell,
            "label": self.sector.a,
            "eigen_exponents": list(self.sector.eigen_exponents),
            "fixed_coords": sorted(self.sector.fixed_coords),
            "age": str(self.sector.age),
            "d_list": list(self.d_list),
            "c_list": list(self.c_list),
            "wt": str(self.wt),
            "convention": self.convention,
        }


def weight_of_sector(stack: CyclicQuotientStack, sector: SectorDatum,
                     convention: str = "cotangent") -> WeightReport:
    """Weight of a sector, evaluated at the distinguished point of its component.

    The distinguished point has every non-fixed coordinate equal to zero (for
    the implemented diagonal actions we take the origin); the weight is
    constant on the component, so nothing is lost.  H^0/H^1 of the restricted
    complex are computed by the graded engine at the reduced closed fiber.
    """
    ell = sector.ell
    col_labels = [cotangent_label(k, ell, convention)
                  for k in sector.eigen_exponents]
    if stack.kind == "mu":
        row_labels: list[int] = []  # finite group: no Lie algebra term
    else:
        row_labels = [0]  # the coadjoint line of G_m carries the trivial twist
    # at the origin the action covector (w_1 y_1, ..., w_n y_n) vanishes
    alpha = GradedMatrix.zeros(QQ, ell, 1, row_labels, col_labels)
    h0, h1 = two_term_cohomology(alpha)
    d_list = tuple(sorted(_rep(a, ell) for a in h0.free_shifts))
    c_list = tuple(sorted(_rep(a, ell) for a in h1.free_shifts))
    wt = stack.dim_x + Fraction(sum(c_list) - sum(d_list), ell)
    return WeightReport(sector, d_list, c_list, wt, convention)


def wt_of_arc(stack: CyclicQuotientStack, arc: TwistedArc,
              convention: str = "cotangent") -> Fraction:
    """Weight of a twisted arc: the sector weight at the component hit by its closed point."""
    sec = _component_of_arc(stack, arc)
    return weight_of_sector(stack, sec, convention).wt


def _component_of_arc(stack: CyclicQuotientStack, arc: TwistedArc) -> SectorDatum:
    # the closed point keeps the sector label; for diagonal actions the fixed
    # locus of each label is a connected coordinate subspace, so the sector
    # datum already determines the inertia component
    for i, ser in enumerate(arc.series):
        v = sv_val(ser)
        if v is not None and v % arc.sector.ell != arc.sector.eigen_exponents[i]:
            raise ValueError("arc support violates its sector congruence")
    return arc.sector


def weight_table(stack: CyclicQuotientStack, ells=None,
                 convention: str = "cotangent") -> list[WeightReport]:
    """Weight reports across sectors; for mu_N over all ell | N by default.

    G_m sectors with coinciding fixed-locus and eigenvalue data are all kept;
    duplicates are detectable through SectorDatum.signature().
    """
    if ells is None:
        if stack.kind != "mu":
            raise ValueError("an explicit ell list is required for G_m quotients")
        ells = [d for d in range(1, stack.order + 1) if stack.order % d == 0]
    out = []
    for ell in ells:
        for sec in sectors(stack, ell):
            out.append(weight_of_sector(stack, sec, convention))
    return out
