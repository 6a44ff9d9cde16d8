"""Command-line client for the distlap service.

Every subcommand speaks HTTP to the service: against a remote base URL
when --server (or DISTLAP_SERVER) is set, otherwise against an in-process
instance of the app. Exit codes follow the batch contract: 0 all bounds
hold, 1 usage or input error, 2 proved-bound violation, 3 conjecture-only
finding.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .harness import EXIT_PROVED_VIOLATION, record_sink, write_summary

_EXIT_ERROR = 1


class _InProcessClient:
    """Synchronous facade over the ASGI app, one event loop per request."""

    def __init__(self, app):
        self._app = app

    def post(self, path: str, json=None):
        import asyncio

        import httpx

        async def go():
            transport = httpx.ASGITransport(app=self._app)
            async with httpx.AsyncClient(
                transport=transport, base_url="http://distlap.local"
            ) as client:
                return await client.post(path, json=json)

        return asyncio.run(go())

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def _make_client(server: str | None):
    base = server or os.environ.get("DISTLAP_SERVER")
    if base:
        import httpx

        return httpx.Client(base_url=base, timeout=600.0)
    from .service.app import create_app

    return _InProcessClient(create_app())


def _post(args, path: str, payload: dict) -> dict:
    with _make_client(args.server) as client:
        resp = client.post(path, json=payload)
        if resp.status_code >= 400:
            try:
                detail = resp.json().get("detail", resp.text)
            except Exception:
                detail = resp.text
            raise RuntimeError(f"{path} failed ({resp.status_code}): {detail}")
        return resp.json()


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _graph_payload(args) -> dict:
    sources = [args.edges, args.graph6, getattr(args, "metric", None)]
    if sum(x is not None for x in sources) != 1:
        raise RuntimeError("provide exactly one input source (--edges, --graph6, --metric)")
    if args.edges is not None:
        return {"graph": {"edge_text": _read_input(args.edges)}}
    if args.graph6 is not None:
        return {"graph": {"graph6": args.graph6}}
    return {"metric": {"csv_text": _read_input(args.metric)}}


def _print_checks(checks: list[dict]) -> None:
    print(f"  {'status':6s}  {'check':28s}  {'value':>22s}  {'bound':>22s}  {'margin':>12s}")
    for chk in checks:
        status = "PASS" if chk["passed"] else "FAIL"
        print(
            f"  {status:6s}  {chk['name']:28s}  {chk['value']!r:>22s}  "
            f"{chk['bound']!r:>22s}  {chk['margin']:>+12.3e}"
        )


def _checks_exit(checks: list[dict]) -> int:
    return 0 if all(chk["passed"] for chk in checks) else EXIT_PROVED_VIOLATION


def cmd_spectrum(args) -> int:
    payload = _graph_payload(args)
    payload["tolerance"] = args.tolerance
    out = _post(args, "/spectrum", payload)
    if args.json:
        print(json.dumps(out, sort_keys=True))
    else:
        print(f"n = {out['n']}")
        print(f"eigenvalues = {out['eigenvalues']!r}")
        print(f"spectral gap = {out['spectral_gap']!r}")
        print(f"solver residual = {out['residual']:.3e}")
        print(f"check tolerance = {out['tolerance']!r}")
        _print_checks(out["checks"])
    return _checks_exit(out["checks"])


def cmd_cheeger(args) -> int:
    payload = _graph_payload(args)
    payload["tolerance"] = args.tolerance
    payload["max_n"] = args.cheeger_cap
    out = _post(args, "/cheeger", payload)
    if args.json:
        print(json.dumps(out, sort_keys=True))
    else:
        h = out["h"]
        if h["num"] is not None:
            print(f"h = {h['num']}/{h['den']} = {h['approx']!r}")
        else:
            print(f"h = {h['approx']!r}")
        print(f"optimal cut = {out['cut']['vertices']} (ties over all subsets: {out['ties']})")
        print(f"spectral gap = {out['spectral_gap']!r}")
        print(f"extremal equality: {'yes' if out['equality'] else 'no'}")
        print(f"check tolerance = {out['tolerance']!r}")
        _print_checks(out["checks"])
    return _checks_exit(out["checks"])


def cmd_verify_all(args) -> int:
    payload = _graph_payload(args)
    payload.update(
        tolerance=args.tolerance,
        skip_cheeger=args.skip_cheeger,
        cheeger_cap=args.cheeger_cap,
        seed=args.seed,
    )
    out = _post(args, "/verify-all", payload)
    if args.json:
        print(json.dumps(out, sort_keys=True))
    else:
        print(f"n = {out['n']}")
        print(f"spectral gap = {out['spectral_gap']!r}")
        if out["h"] is not None:
            h = out["h"]
            print(f"h = {h['num']}/{h['den']} = {h['approx']!r}" if h["num"] is not None
                  else f"h = {h['approx']!r}")
            print(f"optimal cut = {out['cut']['vertices']} (ties: {out['ties']})")
            print(f"extremal equality: {'yes' if out['equality'] else 'no'}")
            cls = out["classification"]
            line = f"classification: {cls['kind']}"
            if cls["match"]:
                line += f" ({cls['match']})"
            if cls["edges_in_large"] is not None and cls["kind"] == "odd_bipartite":
                line += (
                    f" [edges in larger part: {cls['edges_in_large']}"
                    f", cap {cls['edge_cap']} (variant {cls['edge_cap_variant']})]"
                )
            print(line)
        if out["certificate"] is not None:
            cert = out["certificate"]
            print(
                f"certificate spot-checks ({cert['trials']} trials, seed {cert['seed']}): "
                f"form min {cert['balanced_form_min']:.3e}, "
                f"scheme {'ok' if cert['weight_scheme_ok'] else 'FAIL'}, "
                f"pair floor {cert['weight_pair_floor']:.3e}, "
                f"rearrangement residual {cert['rearrangement_residual_max']:.3e}"
            )
        print(f"check tolerance = {out['tolerance']!r}")
        _print_checks(out["checks"])
    return out["exit_code"]


def _parse_connection(text: str) -> list[list[int]]:
    """Parse "1,3" or "(1,0),(0,1)" into element tuples."""
    text = text.strip()
    if "(" in text:
        parts = []
        depth = 0
        cur = ""
        for ch in text:
            if ch == "(":
                depth += 1
                cur = ""
            elif ch == ")":
                depth -= 1
                parts.append([int(tok) for tok in cur.split(",") if tok.strip()])
            elif depth > 0:
                cur += ch
        return parts
    return [[int(tok)] for tok in text.split(",") if tok.strip()]


def cmd_cayley(args) -> int:
    payload: dict = {"group": args.group, "tolerance": args.tolerance,
                     "crosscheck_dense": args.crosscheck_dense}
    if args.connection is not None:
        payload["connection"] = _parse_connection(args.connection)
    if args.dvector is not None:
        payload["dvector"] = [float(tok) for tok in args.dvector.split(",")]
    out = _post(args, "/cayley", payload)
    if args.json:
        print(json.dumps(out, sort_keys=True))
    else:
        print(f"group = {out['group']} (order {out['order']}, "
              f"{'odd' if out['odd_order'] else 'even'})")
        print(f"eigenvalues = {out['eigenvalues']!r}")
        print(f"spectral gap = {out['spectral_gap']!r}")
        if out["dense_max_deviation"] is not None:
            print(f"dense cross-check max deviation = {out['dense_max_deviation']:.3e}")
        _print_checks(out["checks"])
    return out["exit_code"]


def cmd_certify(args) -> int:
    payload = {
        "seed": args.seed,
        "metric_trials": args.metric_trials,
        "max_n": args.max_n,
        "dvector_trials": args.dvector_trials,
        "angle_trials": args.angle_trials,
        "cyclic_max": args.cyclic_max,
    }
    out = _post(args, "/certify", payload)
    text = json.dumps(out, sort_keys=True, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    return 0 if out["ok"] else EXIT_PROVED_VIOLATION


def cmd_scan(args) -> int:
    payload = {
        "family": args.family,
        "seed": args.seed,
        "count": args.count,
        "n": args.n,
        "k": args.k,
        "p": args.p,
        "a": args.a,
        "b": args.b,
        "extra": args.extra,
        "path_len": args.path_len,
        "group": args.group,
        "set_size": args.set_size,
        "cheeger_cap": args.cheeger_cap,
        "tolerance": args.tolerance,
        "contrast": args.contrast,
        "workers": args.workers,
    }
    payload = {k: v for k, v in payload.items() if v is not None}
    out = _post(args, "/scan", payload)
    if args.out:
        written, skipped = record_sink(out["records"], args.out)
        print(f"records: {written} written, {skipped} already present -> {args.out}",
              file=sys.stderr)
    if args.summary_out:
        write_summary(out["summary"], args.summary_out)
    if args.json:
        print(json.dumps(out["summary"], sort_keys=True))
    else:
        s = out["summary"]
        print(f"family = {s['family']} seed = {s['seed']} instances = {s['instances']}")
        print(f"min gap = {s['min_gap']!r} at {s['argmin_gap']}")
        if s["min_h"] is not None:
            h = s["min_h"]
            if h["num"] is not None:
                print(f"min h = {h['num']}/{h['den']} = {h['approx']!r} at {s['argmin_h']}")
            else:
                print(f"min h = {h['approx']!r} at {s['argmin_h']}")
        if "contrast" in s:
            print("contrast (instance, classical gap, distance gap):")
            for name, cg, dg in s["contrast"]:
                print(f"  {name:20s}  {cg!r:>22}  {dg!r:>22}")
        for v in s["violations"]:
            print(f"VIOLATION: {v['check']} on {v['instance']}")
        for f in s["findings"]:
            print(f"FINDING (conjecture only): {f['check']} on {f['instance']}")
    return out["exit_code"]


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("distlap.service.app:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="distlap",
        description="Normalized distance Laplacian spectra, Cheeger constants, and bound checks.",
    )
    parser.add_argument("--server", default=None,
                        help="base URL of a running service (default: in-process; "
                             "env DISTLAP_SERVER)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_graph_opts(p, metric=True):
        p.add_argument("--edges", default=None,
                       help="edge-list file ('-' for stdin): lines 'u v', optional 'n <count>' header")
        p.add_argument("--graph6", default=None, help="graph6 string")
        if metric:
            p.add_argument("--metric", default=None, help="metric CSV file ('-' for stdin)")
        p.add_argument("--tolerance", type=float, default=1e-9,
                       help="check tolerance (default 1e-9)")
        p.add_argument("--json", action="store_true", help="emit JSON instead of tables")

    p = sub.add_parser("spectrum", help="eigenvalues, gap, and spectrum bound checks")
    add_graph_opts(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("cheeger", help="exact Cheeger constant and bound checks")
    add_graph_opts(p, metric=False)
    p.add_argument("--cheeger-cap", type=int, default=24,
                   help="exhaustive enumeration cap (default 24)")
    p.set_defaults(func=cmd_cheeger)

    p = sub.add_parser("verify-all", help="one-page report: h, gap, every bound, classification")
    add_graph_opts(p, metric=False)
    p.add_argument("--skip-cheeger", action="store_true")
    p.add_argument("--cheeger-cap", type=int, default=24)
    p.add_argument("--seed", type=int, default=_default_seed(),
                   help="seed for certificate spot-checks (env DISTLAP_SEED)")
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("cayley", help="closed-form Cayley spectrum and floors")
    p.add_argument("--group", required=True, help='group label, e.g. "Z4" or "Z2xZ2"')
    p.add_argument("--connection", default=None,
                   help='connection set: "1,3" or "(1,0),(0,1),(1,1)"')
    p.add_argument("--dvector", default=None,
                   help="comma-separated distance profile over the group (index order)")
    p.add_argument("--crosscheck-dense", action="store_true",
                   help="also run the dense pipeline and report the max deviation")
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_cayley)

    p = sub.add_parser("certify", help="run the certificate suite, emit a JSON report")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--metric-trials", type=int, default=200)
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("--dvector-trials", type=int, default=200)
    p.add_argument("--angle-trials", type=int, default=20)
    p.add_argument("--cyclic-max", type=int, default=12)
    p.add_argument("--out", default=None, help="also write the report to this path")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("scan", help="batch-evaluate a family; JSONL records + summary")
    p.add_argument("--family", required=True,
                   help="path | cycle | complete | complete_bipartite_plus | barbell | "
                        "random_connected | random_cayley | random_metric")
    p.add_argument("--n", default=None, help="size or range, e.g. 8 or 3..20")
    p.add_argument("--k", default=None, help="barbell clique size or range, e.g. 3..8")
    p.add_argument("--p", type=float, default=None, help="edge probability")
    p.add_argument("--a", type=int, default=None)
    p.add_argument("--b", type=int, default=None)
    p.add_argument("--extra", type=int, default=0)
    p.add_argument("--path-len", type=int, default=None)
    p.add_argument("--group", default=None)
    p.add_argument("--set-size", type=int, default=None)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--cheeger-cap", type=int, default=24)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--contrast", action="store_true", default=None,
                   help="also compute the classical normalized-Laplacian gap")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default=None, help="append records to this JSONL file")
    p.add_argument("--summary-out", default=None, help="write the summary JSON here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("serve", help="run the HTTP service with uvicorn")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def _default_seed() -> int:
    try:
        return int(os.environ.get("DISTLAP_SEED", "0"))
    except ValueError:
        return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
