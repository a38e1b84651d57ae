"""Command-line client for the stringy service.

Every subcommand builds the same request model the HTTP API accepts and
either calls the handler in-process (default) or posts it to a running
server (--url).  All numeric output is exact; rationals print as "p/q".

Exit status: 0 when every agreement/identity flag holds, 1 otherwise,
2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import urllib.request

from pydantic import BaseModel


def _load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


def _emit(obj, pretty: bool) -> None:
    print(json.dumps(obj, indent=2 if pretty else None, sort_keys=False))


def _call(endpoint: str, request: BaseModel, response_cls, url: str | None):
    if url is None:
        from fastapi import HTTPException
        from .service import app as _  # noqa: F401  (ensures handlers import cleanly)
        from .service.app import (batyrev_endpoint, compare_endpoint,
                                  gorenstein_oracle_endpoint, gsnf_endpoint,
                                  integrate_endpoint, oracle_count_endpoint,
                                  sectors_endpoint, verify_endpoint,
                                  weights_endpoint)
        handler = {
            "/sectors": sectors_endpoint,
            "/weights": weights_endpoint,
            "/integrate": integrate_endpoint,
            "/gsnf": gsnf_endpoint,
            "/batyrev": batyrev_endpoint,
            "/oracle/groupoid-count": oracle_count_endpoint,
            "/gorenstein-oracle": gorenstein_oracle_endpoint,
            "/compare": compare_endpoint,
            "/verify": verify_endpoint,
        }[endpoint]
        try:
            return handler(request)
        except HTTPException as e:
            print(f"error: {e.detail}", file=sys.stderr)
            raise SystemExit(2)
    data = request.model_dump_json().encode()
    req = urllib.request.Request(url.rstrip("/") + endpoint, data=data,
                                 headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req) as resp:
            return response_cls.model_validate_json(resp.read())
    except urllib.error.HTTPError as e:
        print(f"error: {e.read().decode()}", file=sys.stderr)
        raise SystemExit(2)


def _stack_spec(args):
    from .service.models import StackSpec
    return StackSpec(**_load_json(args.stack))


def _add_common(p, stack_required: bool = True):
    if stack_required:
        p.add_argument("--stack", required=True, help="stack spec JSON file")
    p.add_argument("--url", default=None, help="send to a running server instead")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--json", dest="pretty", action="store_false",
                       help="compact JSON output")
    group.add_argument("--pretty", dest="pretty", action="store_true", default=True)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="stringy",
        description="Exact stringy invariants of cyclic quotient singularities.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sectors", help="list sectors of cyclotomic inertia")
    _add_common(p)
    p.add_argument("--ell", type=int, default=None)

    p = sub.add_parser("wt", help="weight-function table over sectors")
    _add_common(p)
    p.add_argument("--ell", type=int, action="append", default=None,
                   help="restrict to these orders (repeatable)")
    p.add_argument("--convention", default="cotangent",
                   choices=["cotangent", "inverse"])

    p = sub.add_parser("integrate", help="integrate L^(-wt) over twisted arcs")
    _add_common(p)
    p.add_argument("--q", default=None, help="comma-separated primes to specialize at")
    p.add_argument("--level", type=int, default=None,
                   help="recompute sector volumes at this jet level")
    p.add_argument("--convention", default="cotangent",
                   choices=["cotangent", "inverse"])

    p = sub.add_parser("oracle", help="groupoid count of level-n twisted jets")
    _add_common(p)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--a", type=int, required=True, dest="label",
                   help="sector label (group element / banding exponent)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--method", default="auto",
                   choices=["auto", "enumerate", "factored"])
    p.add_argument("--allow-nonsplit", action="store_true",
                   help="count coefficient tuples even when q != 1 mod N")

    p = sub.add_parser("batyrev", help="classical log-resolution formula")
    _add_common(p, stack_required=False)
    p.add_argument("--stack", default=None, help="use the built-in fixture for this stack")
    p.add_argument("--resolution", default=None, help="resolution data JSON file")
    p.add_argument("--require-polynomial", action="store_true")

    p = sub.add_parser("gorenstein-oracle",
                       help="finite-field estimate of the Gorenstein measure")
    _add_common(p)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--level", type=int, default=3, help="base jet level n_max")
    p.add_argument("--emax", type=int, default=3)

    p = sub.add_parser("compare", help="three-way comparison with agreement flags")
    _add_common(p)
    p.add_argument("--q", default="3,5,7")
    p.add_argument("--level", type=int, default=3)
    p.add_argument("--emax", type=int, default=3)
    p.add_argument("--resolution", default=None)
    p.add_argument("--convention", default="cotangent",
                   choices=["cotangent", "inverse"])

    p = sub.add_parser("gsnf", help="graded Smith normal form of a matrix file")
    _add_common(p, stack_required=False)
    p.add_argument("matrix", help="graded matrix JSON file")
    p.add_argument("--decompose", action="store_true",
                   help="also decompose the cokernel")
    p.add_argument("--strict", action="store_true",
                   help="error out on pivots at or beyond the precision")

    p = sub.add_parser("verify", help="randomized identity checks, one ledger per arc")
    _add_common(p)
    p.add_argument("--identity", default="height-weight",
                   choices=["height-weight", "crepancy"])
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--precision", type=int, default=24)
    p.add_argument("--p", type=int, default=7, dest="characteristic",
                   help="prime field characteristic for sampled arcs")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    args = parser.parse_args(argv)
    from .service import models as m

    if args.command == "serve":
        import uvicorn
        from .service import app
        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    if args.command == "sectors":
        req = m.SectorsRequest(stack=_stack_spec(args), ell=args.ell)
        resp = _call("/sectors", req, m.SectorsResponse, args.url)
        _emit(resp.model_dump(), args.pretty)
        return 0

    if args.command == "wt":
        req = m.WeightTableRequest(stack=_stack_spec(args), ells=args.ell,
                                   convention=args.convention)
        resp = _call("/weights", req, m.WeightTableResponse, args.url)
        _emit(resp.model_dump(), args.pretty)
        return 0

    if args.command == "integrate":
        qs = [int(x) for x in args.q.split(",")] if args.q else []
        req = m.IntegrateRequest(stack=_stack_spec(args), q=qs,
                                 level=args.level, convention=args.convention)
        resp = _call("/integrate", req, m.IntegrateResponse, args.url)
        _emit(resp.model_dump(), args.pretty)
        return 0

    if args.command == "oracle":
        req = m.OracleCountRequest(stack=_stack_spec(args), ell=args.ell,
                                   label=args.label, n=args.n, q=args.q,
                                   method=args.method,
                                   require_split=not args.allow_nonsplit)
        resp = _call("/oracle/groupoid-count", req, m.OracleCountResponse, args.url)
        _emit(resp.model_dump(), args.pretty)
        return 0

    if args.command == "batyrev":
        resolution = (m.ResolutionModel(**_load_json(args.resolution))
                      if args.resolution else None)
        stack = m.StackSpec(**_load_json(args.stack)) if args.stack else None
        req = m.BatyrevRequest(resolution=resolution, stack=stack,
                               require_polynomial=args.require_polynomial)
        resp = _call("/batyrev", req, m.BatyrevResponse, args.url)
        _emit(resp.model_dump(), args.pretty)
        return 0

    if args.command == "gorenstein-oracle":
        req = m.GorensteinOracleRequest(stack=_stack_spec(args), q=args.q,
                                        n_max=args.level, e_max=args.emax)
        resp = _call("/gorenstein-oracle", req, m.GorensteinOracleResponse, args.url)
        _emit(resp.model_dump(), args.pretty)
        return 0

    if args.command == "compare":
        qs = [int(x) for x in args.q.split(",")] if args.q else []
        resolution = (m.ResolutionModel(**_load_json(args.resolution))
                      if args.resolution else None)
        req = m.CompareRequest(stack=_stack_spec(args), q=qs, n_max=args.level,
                               e_max=args.emax, resolution=resolution,
                               convention=args.convention)
        resp = _call("/compare", req, m.CompareResponse, args.url)
        _emit(resp.model_dump(), args.pretty)
        return 0 if resp.all_ok else 1

    if args.command == "gsnf":
        req = m.GsnfRequest(matrix=m.GradedMatrixModel(**_load_json(args.matrix)),
                            require_all_pivots=args.strict,
                            decompose=args.decompose)
        resp = _call("/gsnf", req, m.GsnfResponse, args.url)
        _emit(resp.model_dump(), args.pretty)
        return 0 if resp.certified else 1

    if args.command == "verify":
        req = m.VerifyRequest(identity=args.identity, stack=_stack_spec(args),
                              samples=args.samples, seed=args.seed,
                              precision=args.precision,
                              characteristic=args.characteristic)
        resp = _call("/verify", req, m.VerifyResponse, args.url)
        _emit(resp.model_dump(), args.pretty)
        return 0 if resp.all_equal else 1

    parser.error(f"unknown command {args.command}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
