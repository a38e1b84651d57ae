"""Pydantic wire formats and converters to/from the core objects.

All exact numbers travel as strings "p/q" (or bare ints where integrality is
structural); polynomials as ascending coefficient lists.  Round trips are
bit-exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Literal, Optional, Union

from pydantic import BaseModel, Field

from ..arcs import SectorDatum, TwistedArc
from ..gradedsmith import GradedMatrix, GradedModuleDecomp, SmithResult
from ..invariants import ResolutionData, StringyReport
from ..quotient import CyclicQuotientStack
from ..stringypoly import StringyPolynomial


def frac_str(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


class StackSpec(BaseModel):
    group: Union[dict, Literal["Gm"]]
    weights: list[int]

    def to_core(self) -> CyclicQuotientStack:
        return CyclicQuotientStack.from_json(self.model_dump())

    @staticmethod
    def from_core(stack: CyclicQuotientStack) -> "StackSpec":
        return StackSpec(**stack.to_json())


class PolyTerm(BaseModel):
    u: int
    v: int
    num: list[int]
    den: list[int]


class StringyPolynomialModel(BaseModel):
    m: int
    terms: list[PolyTerm]

    def to_core(self) -> StringyPolynomial:
        return StringyPolynomial.from_obj(self.model_dump())

    @staticmethod
    def from_core(x: StringyPolynomial) -> "StringyPolynomialModel":
        return StringyPolynomialModel(**x.to_obj())


class GradedMatrixModel(BaseModel):
    field: Union[Literal["Q"], dict]
    ell: int
    precision: int
    row_degrees: list[int]
    col_degrees: list[int]
    entries: list[list[list[Union[int, str]]]]

    def to_core(self) -> GradedMatrix:
        return GradedMatrix.from_json(self.model_dump())

    @staticmethod
    def from_core(A: GradedMatrix) -> "GradedMatrixModel":
        return GradedMatrixModel(**A.to_json())


class DecompositionModel(BaseModel):
    ell: int
    free_shifts: list[int]
    torsion: list[list[int]]  # [n, shift] pairs
    precision: int

    @staticmethod
    def from_core(d: GradedModuleDecomp) -> "DecompositionModel":
        return DecompositionModel(ell=d.ell, free_shifts=list(d.free_shifts),
                                  torsion=[[n, b] for n, b in d.torsion],
                                  precision=d.precision)


class SectorModel(BaseModel):
    ell: int
    label: int
    eigen_exponents: list[int]
    fixed_coords: list[int]
    age: str
    signature_collision: bool = False

    @staticmethod
    def from_core(s: SectorDatum, collision: bool = False) -> "SectorModel":
        return SectorModel(ell=s.ell, label=s.a,
                           eigen_exponents=list(s.eigen_exponents),
                           fixed_coords=sorted(s.fixed_coords),
                           age=frac_str(s.age), signature_collision=collision)


class ArcSeriesTerm(BaseModel):
    exponent: int
    coeff: Union[int, str]


class ArcModel(BaseModel):
    sector: dict  # {"ell": int, "a": int}
    precision: int
    series: list[list[ArcSeriesTerm]]

    def to_core(self, stack: CyclicQuotientStack, fld) -> TwistedArc:
        if stack.kind == "mu":
            sector = SectorDatum.for_mu(stack, int(self.sector["a"]))
            if sector.ell != int(self.sector["ell"]):
                raise ValueError("sector label order disagrees with the declared ell")
        else:
            sector = SectorDatum.for_gm(stack, int(self.sector["ell"]),
                                        int(self.sector["a"]))
        series = tuple(
            {t.exponent: fld.element_from_json(t.coeff) for t in coord}
            for coord in self.series)
        return TwistedArc(sector, fld, series, self.precision)

    @staticmethod
    def from_core(arc: TwistedArc) -> "ArcModel":
        fld = arc.fld
        return ArcModel(
            sector={"ell": arc.sector.ell, "a": arc.sector.a},
            precision=arc.s_precision,
            series=[[ArcSeriesTerm(exponent=e, coeff=fld.element_to_json(c))
                     for e, c in sorted(s.items())] for s in arc.series])


class ResolutionStratum(BaseModel):
    divisors: list[int]
    e_polynomial: StringyPolynomialModel


class ResolutionModel(BaseModel):
    m: int
    discrepancies: list[str]
    strata: list[ResolutionStratum]

    def to_core(self) -> ResolutionData:
        return ResolutionData(
            self.m,
            tuple(Fraction(a) for a in self.discrepancies),
            tuple((frozenset(s.divisors), s.e_polynomial.to_core())
                  for s in self.strata))

    @staticmethod
    def from_core(data: ResolutionData) -> "ResolutionModel":
        return ResolutionModel(
            m=data.m,
            discrepancies=[frac_str(a) for a in data.discrepancies],
            strata=[ResolutionStratum(
                divisors=sorted(s),
                e_polynomial=StringyPolynomialModel.from_core(e))
                for s, e in data.strata])


# -- requests / responses ------------------------------------------------------


class SectorsRequest(BaseModel):
    stack: StackSpec
    ell: Optional[int] = None  # None: all ell | N (mu_N only)


class SectorsResponse(BaseModel):
    sectors: list[SectorModel]


class WeightTableRequest(BaseModel):
    stack: StackSpec
    ells: Optional[list[int]] = None
    convention: str = "cotangent"


class WeightReportModel(BaseModel):
    sector: SectorModel
    d_list: list[int]
    c_list: list[int]
    wt: str
    convention: str


class WeightTableResponse(BaseModel):
    reports: list[WeightReportModel]


class IntegrateRequest(BaseModel):
    stack: StackSpec
    convention: str = "cotangent"
    q: list[int] = Field(default_factory=list)
    level: Optional[int] = None  # recompute sector volumes at this jet level


class Specialization(BaseModel):
    q: int
    value: str


class IntegrateResponse(BaseModel):
    integral: StringyPolynomialModel
    stringy: StringyPolynomialModel  # L^dim times the integral
    specializations: list[Specialization]


class GsnfRequest(BaseModel):
    matrix: GradedMatrixModel
    require_all_pivots: bool = False
    decompose: bool = False


class PivotModel(BaseModel):
    valuation: int
    row_degree: int
    col_degree: int


class GsnfResponse(BaseModel):
    pivots: list[PivotModel]
    valid_precision: int
    unresolved: int
    certified: bool
    U: GradedMatrixModel
    V: GradedMatrixModel
    D: GradedMatrixModel
    cokernel: Optional[DecompositionModel] = None

    @staticmethod
    def from_core(res: SmithResult, A: GradedMatrix,
                  cokernel: Optional[GradedModuleDecomp]) -> "GsnfResponse":
        return GsnfResponse(
            pivots=[PivotModel(valuation=v, row_degree=r, col_degree=c)
                    for v, r, c in res.pivots],
            valid_precision=res.valid_precision,
            unresolved=res.unresolved,
            certified=res.verify(A),
            U=GradedMatrixModel.from_core(res.U),
            V=GradedMatrixModel.from_core(res.V),
            D=GradedMatrixModel.from_core(res.D),
            cokernel=DecompositionModel.from_core(cokernel) if cokernel else None)


class BatyrevRequest(BaseModel):
    resolution: Optional[ResolutionModel] = None
    stack: Optional[StackSpec] = None  # use the built-in fixture
    require_polynomial: bool = False


class BatyrevResponse(BaseModel):
    value: StringyPolynomialModel


class OracleCountRequest(BaseModel):
    stack: StackSpec
    ell: int
    label: int
    n: int
    q: int
    method: str = "auto"
    require_split: bool = True


class OracleCountResponse(BaseModel):
    count: str


class GorensteinOracleRequest(BaseModel):
    stack: StackSpec
    q: int
    n_max: int = 3
    e_max: int = 3


class GorensteinBin(BaseModel):
    e: int
    measure: str
    level: int


class GorensteinOracleResponse(BaseModel):
    q: int
    e_max: int
    partial_sum: str
    tail_bound: str
    bins: list[GorensteinBin]
    method: str


class CompareRequest(BaseModel):
    stack: StackSpec
    q: list[int] = Field(default_factory=lambda: [3, 5, 7])
    n_max: int = 3
    e_max: int = 3
    convention: str = "cotangent"
    resolution: Optional[ResolutionModel] = None


class PointCountModel(BaseModel):
    q: int
    target: str
    oracle: GorensteinOracleResponse
    ok: bool


class HpqEntry(BaseModel):
    p: str
    q: str
    h: str


class CompareResponse(BaseModel):
    stack: StackSpec
    e_sectors: StringyPolynomialModel
    e_batyrev: Optional[StringyPolynomialModel]
    sector_batyrev_agree: Optional[bool]
    pointcounts: list[PointCountModel]
    pointcount_skipped_reason: Optional[str]
    hpq: list[HpqEntry]
    hpq_nonnegative: bool
    all_ok: bool

    @staticmethod
    def from_core(rep: StringyReport) -> "CompareResponse":
        return CompareResponse(
            stack=StackSpec.from_core(rep.stack),
            e_sectors=StringyPolynomialModel.from_core(rep.e_sectors),
            e_batyrev=(StringyPolynomialModel.from_core(rep.e_batyrev)
                       if rep.e_batyrev else None),
            sector_batyrev_agree=rep.sector_batyrev_agree,
            pointcounts=[PointCountModel(
                q=pc.q, target=frac_str(pc.target),
                oracle=GorensteinOracleResponse(**pc.oracle.to_json()),
                ok=pc.ok) for pc in rep.pointcounts],
            pointcount_skipped_reason=rep.pointcount_skipped_reason,
            hpq=[HpqEntry(p=frac_str(p), q=frac_str(qq), h=frac_str(h))
                 for (p, qq), h in sorted(rep.hpq.items())],
            hpq_nonnegative=rep.hpq_nonnegative,
            all_ok=rep.all_ok)


class VerifyRequest(BaseModel):
    identity: Literal["height-weight", "crepancy"] = "height-weight"
    stack: StackSpec
    samples: int = 20
    seed: int = 0
    precision: int = 24
    characteristic: int = 7
    ells: Optional[list[int]] = None


class ArcLedger(BaseModel):
    sector: SectorModel
    arc: ArcModel
    ledger: dict


class VerifyResponse(BaseModel):
    identity: str
    results: list[ArcLedger]
    checked: int
    failures: int
    all_equal: bool
