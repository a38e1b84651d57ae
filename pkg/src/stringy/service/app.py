"""FastAPI application: one endpoint per computation, all pure and stateless.

The handler bodies are plain functions of the request models, so the CLI can
call them in-process; values are exact throughout, serialized as strings.
"""

from __future__ import annotations

import random
from fractions import Fraction

from fastapi import FastAPI, HTTPException

from ..arcs import SectorDatum, sample_arc, sectors, ord_ideal_on_model
from ..fields import PrimeField
from ..gradedsmith import PrecisionError, graded_smith, module_decomposition
from ..heights import (NonGenericArcError, check_height_weight_identity,
                       compute_height_report)
from ..invariants import (StabilizationError, builtin_resolution, compare_all,
                          gorenstein_measure_oracle, stringy_via_batyrev,
                          stringy_via_sectors)
from ..motivic import groupoid_count_oracle, integrate_weight
from ..quotient import hypersurface_model
from ..stringypoly import hd_L_power
from ..weights import weight_table
from . import models as m

app = FastAPI(
    title="stringy",
    description="Exact stringy Hodge-Deligne invariants of cyclic quotient "
                "singularities, with cross-validating oracles.",
    version="0.1.0",
)


def _stack(spec: m.StackSpec):
    try:
        return spec.to_core()
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/sectors", response_model=m.SectorsResponse)
def sectors_endpoint(req: m.SectorsRequest) -> m.SectorsResponse:
    stack = _stack(req.stack)
    try:
        if req.ell is None:
            from ..arcs import all_sectors
            secs = all_sectors(stack)
        else:
            secs = sectors(stack, req.ell)
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))
    seen: dict = {}
    out = []
    for s in secs:
        sig = s.signature()
        out.append(m.SectorModel.from_core(s, collision=sig in seen))
        seen[sig] = True
    return m.SectorsResponse(sectors=out)


@app.post("/weights", response_model=m.WeightTableResponse)
def weights_endpoint(req: m.WeightTableRequest) -> m.WeightTableResponse:
    stack = _stack(req.stack)
    try:
        reports = weight_table(stack, req.ells, req.convention)
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))
    return m.WeightTableResponse(reports=[
        m.WeightReportModel(
            sector=m.SectorModel.from_core(r.sector),
            d_list=list(r.d_list), c_list=list(r.c_list),
            wt=m.frac_str(r.wt), convention=r.convention)
        for r in reports])


@app.post("/integrate", response_model=m.IntegrateResponse)
def integrate_endpoint(req: m.IntegrateRequest) -> m.IntegrateResponse:
    stack = _stack(req.stack)
    try:
        integral = integrate_weight(stack, req.convention, level=req.level)
        stringy = hd_L_power(Fraction(stack.dim_x), stack.gorenstein_index) * integral
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))
    specializations = []
    for q in req.q:
        if stack.gorenstein_index != 1:
            raise HTTPException(
                status_code=422,
                detail="point specializations need Gorenstein index 1")
        specializations.append(m.Specialization(
            q=q, value=m.frac_str(stringy.specialize_count(Fraction(q)))))
    return m.IntegrateResponse(
        integral=m.StringyPolynomialModel.from_core(integral),
        stringy=m.StringyPolynomialModel.from_core(stringy),
        specializations=specializations)


@app.post("/gsnf", response_model=m.GsnfResponse)
def gsnf_endpoint(req: m.GsnfRequest) -> m.GsnfResponse:
    try:
        A = req.matrix.to_core()
        res = graded_smith(A, require_all_pivots=req.require_all_pivots)
        coker = module_decomposition(A) if req.decompose else None
    except PrecisionError as e:
        raise HTTPException(status_code=422,
                            detail=f"{e} (required precision {e.required})")
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))
    return m.GsnfResponse.from_core(res, A, coker)


@app.post("/batyrev", response_model=m.BatyrevResponse)
def batyrev_endpoint(req: m.BatyrevRequest) -> m.BatyrevResponse:
    if req.resolution is not None:
        data = req.resolution.to_core()
    elif req.stack is not None:
        data = builtin_resolution(req.stack.to_core())
        if data is None:
            raise HTTPException(status_code=422,
                                detail="no built-in resolution fixture for this stack")
    else:
        raise HTTPException(status_code=422, detail="need a resolution or a stack")
    try:
        value = stringy_via_batyrev(data, require_polynomial=req.require_polynomial)
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))
    return m.BatyrevResponse(value=m.StringyPolynomialModel.from_core(value))


@app.post("/oracle/groupoid-count", response_model=m.OracleCountResponse)
def oracle_count_endpoint(req: m.OracleCountRequest) -> m.OracleCountResponse:
    stack = _stack(req.stack)
    try:
        if stack.kind == "mu":
            sector = SectorDatum.for_mu(stack, req.label)
            if sector.ell != req.ell:
                if stack.order % req.ell:
                    return m.OracleCountResponse(count="0")
                raise HTTPException(status_code=422,
                                    detail=f"label {req.label} has order {sector.ell}, "
                                           f"not {req.ell}")
        else:
            sector = SectorDatum.for_gm(stack, req.ell, req.label)
        count = groupoid_count_oracle(stack, sector, req.n, req.q,
                                      method=req.method,
                                      require_split=req.require_split)
    except ValueError as e:
        raise HTTPException(status_code=422, detail=str(e))
    return m.OracleCountResponse(count=str(count))


@app.post("/gorenstein-oracle", response_model=m.GorensteinOracleResponse)
def gorenstein_oracle_endpoint(req: m.GorensteinOracleRequest) -> m.GorensteinOracleResponse:
    stack = _stack(req.stack)
    if stack.kind != "mu":
        raise HTTPException(status_code=422, detail="oracle needs a mu_N quotient")
    if stack.gorenstein_index != 1:
        raise HTTPException(status_code=422,
                            detail="oracle needs Gorenstein index 1")
    model = hypersurface_model(stack)
    if model is None:
        if stack.order == 1:
            from ..quotient import AffineModelY
            model = AffineModelY.affine_space(stack.n)
        else:
            raise HTTPException(status_code=422,
                                detail="no hypersurface model for this quotient")
    try:
        res = gorenstein_measure_oracle(model, req.q, req.n_max, req.e_max)
    except (StabilizationError, ValueError) as e:
        raise HTTPException(status_code=422, detail=str(e))
    return m.GorensteinOracleResponse(**res.to_json())


@app.post("/compare", response_model=m.CompareResponse)
def compare_endpoint(req: m.CompareRequest) -> m.CompareResponse:
    stack = _stack(req.stack)
    resolution = req.resolution.to_core() if req.resolution else None
    try:
        rep = compare_all(stack, qs=tuple(req.q), n_max=req.n_max,
                          e_max=req.e_max, resolution=resolution,
                          convention=req.convention)
    except (StabilizationError, ValueError) as e:
        raise HTTPException(status_code=422, detail=str(e))
    return m.CompareResponse.from_core(rep)


@app.post("/verify", response_model=m.VerifyResponse)
def verify_endpoint(req: m.VerifyRequest) -> m.VerifyResponse:
    stack = _stack(req.stack)
    if stack.kind != "mu":
        raise HTTPException(status_code=422,
                            detail="identity checks run on mu_N quotients")
    y_model = hypersurface_model(stack)
    if y_model is None:
        raise HTTPException(status_code=422,
                            detail="identity checks need the hypersurface model of Y")
    fld = PrimeField(req.characteristic)
    rng = random.Random(req.seed)
    ells = req.ells
    if ells is None:
        ells = [d for d in range(2, stack.order + 1) if stack.order % d == 0]
    results = []
    failures = 0
    for ell in ells:
        prec = ell * max(2, req.precision // ell)  # whole t-levels per sector
        for sector in sectors(stack, ell):
            for _ in range(req.samples):
                arc = sample_arc(stack, sector, prec, fld, rng)
                try:
                    if req.identity == "height-weight":
                        led = check_height_weight_identity(stack, y_model, arc)
                        payload = led.to_json()
                        ok = led.equal
                    else:
                        rep = compute_height_report(stack, y_model, arc)
                        o = ord_ideal_on_model(arc, y_model,
                                               list(y_model.jacobian_ideal))
                        mult = stack.gorenstein_index
                        ok = mult * rep.het_xy == o  # sentinel never equals a rational
                        payload = {"het": str(rep.het_xy),
                                   "m_times_het": m.frac_str(mult * rep.het_xy),
                                   "ord_I_Y": str(o), "equal": ok}
                except (NonGenericArcError, PrecisionError) as e:
                    raise HTTPException(status_code=422, detail=str(e))
                failures += not ok
                results.append(m.ArcLedger(
                    sector=m.SectorModel.from_core(sector),
                    arc=m.ArcModel.from_core(arc),
                    ledger=payload))
    return m.VerifyResponse(identity=req.identity, results=results,
                            checked=len(results), failures=failures,
                            all_equal=failures == 0)
