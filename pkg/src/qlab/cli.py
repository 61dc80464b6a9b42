"""Command-line client for the qlab service.

The CLI is a thin HTTP client: by default it drives the FastAPI app
in-process over an ASGI transport, or a remote instance with --server.
JSON goes to stdout, diagnostics to stderr.  Exit codes: 0 success (all
suites passed for verify), 1 verification failures, 2 usage or execution
errors.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys

import httpx


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlab",
        description="Exact q-series laboratory: expansions, root-of-unity "
        "values, radial limits, enumeration tables, identity verification.",
    )
    parser.add_argument("--server", metavar="URL", default=None,
                        help="remote service URL (default: run in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="expand a named series to a given order")
    p.add_argument("series", help="f, b, g3, g3inv, u, utilde, crank, jbracket, triple")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--k", type=int, default=1, help="fold for u/utilde")
    p.add_argument("--form", choices=("EQ1", "FINE"), default="EQ1")

    p = sub.add_parser("eval", help="evaluate a truncated series numerically")
    p.add_argument("series")
    p.add_argument("--q", required=True, help="rational |q| < 1, e.g. 1/5 or 0.3")
    p.add_argument("--z", default=None, help="z-expression (rational, a+bi, zeta(m)^k)")
    p.add_argument("--order", type=int, default=40)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--precision", type=int, default=256)

    p = sub.add_parser("root", help="exact evaluation at a root of unity")
    p.add_argument("series", choices=("g3", "uk", "f"))
    p.add_argument("--m", type=int, required=True, help="root of unity order")
    p.add_argument("--z", default=None)
    p.add_argument("--k", type=int, default=1, help="fold for uk")
    p.add_argument("--form", choices=("EX1", "EX2"), default="EX2")
    p.add_argument("--exact", action="store_true", default=True,
                   help="exact cyclotomic output (default)")
    p.add_argument("--numeric", action="store_true",
                   help="embed the value numerically instead")
    p.add_argument("--precision", type=int, default=256)

    p = sub.add_parser("radial", help="radial limit toward a root of unity")
    p.add_argument("series", choices=("f", "b", "g3", "g3inv", "u", "utilde"))
    p.add_argument("--zeta", type=int, required=True, metavar="M",
                   help="target root of unity zeta_M")
    p.add_argument("--z", default=None)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--rho", default=None,
                   help="comma-separated rho values (default geometric schedule)")
    p.add_argument("--jlo", type=int, default=4)
    p.add_argument("--jhi", type=int, default=16)
    p.add_argument("--precision", type=int, default=256)

    p = sub.add_parser("enumerate", help="unimodal sequence count tables")
    p.add_argument("--max-weight", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--strong", action="store_true")

    p = sub.add_parser("verify", help="run identity verification suites")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--all", action="store_true", dest="run_all")
    g.add_argument("--suite", action="append", dest="suites", metavar="ID")
    p.add_argument("--order", type=int, default=30)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


async def _request_async(server: str | None, path: str, payload: dict | None,
                         method: str = "POST") -> httpx.Response:
    if server:
        async with httpx.AsyncClient(base_url=server, timeout=None) as client:
            return await client.request(method, path, json=payload)
    from .service import create_app

    transport = httpx.ASGITransport(app=create_app())
    async with httpx.AsyncClient(transport=transport, base_url="http://qlab",
                                 timeout=None) as client:
        return await client.request(method, path, json=payload)


def _call(server: str | None, path: str, payload: dict | None,
          method: str = "POST") -> dict:
    response = asyncio.run(_request_async(server, path, payload, method))
    body = response.json()
    if response.status_code == 400:
        raise SystemExit(_fail(body.get("error", "bad request")))
    if response.status_code == 422:
        raise SystemExit(_fail(f"invalid request: {json.dumps(body.get('detail'))}"))
    if response.status_code != 200:
        raise SystemExit(_fail(f"service error {response.status_code}: {body}"))
    return body


def _fail(message: str) -> int:
    print(f"qlab: {message}", file=sys.stderr)
    return 2


def _emit(doc) -> None:
    print(json.dumps(doc, indent=2))


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    server = args.server

    if args.command == "expand":
        doc = _call(server, "/expand", {
            "series": args.series, "order": args.order,
            "k": args.k, "form": args.form,
        })
        _emit(doc)
        return 0

    if args.command == "eval":
        doc = _call(server, "/eval", {
            "series": args.series, "q": args.q, "z": args.z,
            "order": args.order, "k": args.k, "precision_bits": args.precision,
        })
        _emit(doc)
        return 0

    if args.command == "root":
        doc = _call(server, "/root", {
            "series": args.series, "m": args.m, "z": args.z, "k": args.k,
            "form": args.form, "exact": not args.numeric,
            "precision_bits": args.precision,
        })
        _emit(doc)
        return 0

    if args.command == "radial":
        payload = {
            "series": args.series, "m": args.zeta, "z": args.z, "k": args.k,
            "j_lo": args.jlo, "j_hi": args.jhi, "precision_bits": args.precision,
        }
        if args.rho is not None:
            payload["rho"] = [r.strip() for r in args.rho.split(",") if r.strip()]
        doc = _call(server, "/radial", payload)
        _emit(doc)
        return 0

    if args.command == "enumerate":
        doc = _call(server, "/enumerate", {
            "max_weight": args.max_weight, "k": args.k, "strong": args.strong,
        })
        _emit(doc)
        return 0

    if args.command == "verify":
        doc = _call(server, "/verify", {
            "suites": None if args.run_all else args.suites,
            "order": args.order,
        })
        _emit(doc)
        return 0 if doc["all_passed"] else 1

    if args.command == "serve":
        import uvicorn

        from .service import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    return _fail(f"unknown command {args.command!r}")  # pragma: no cover


def entrypoint() -> None:  # pragma: no cover
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
