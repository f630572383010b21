"""Command line entry point.

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import urllib.request
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

from . import costmodel, datagen
from .bench import BenchError, emit_dat, emit_report, load_config, prepare_corpora, register_corpus, run_bench
from .costmodel import CostModelError
from .datagen import GenerationError
from .discovery import Query, QueryError, result_payload, search
from .registry import Registry, RegistryError
from .taxonomy import TaxonomyError, parse_classification
from .wsdl import WsdlError, parse_wsdl

DOMAIN_ERRORS = (
    TaxonomyError,
    WsdlError,
    RegistryError,
    QueryError,
    CostModelError,
    GenerationError,
    BenchError,
    OSError,
)

DEFAULT_BIND = "127.0.0.1:8080"


def _weights(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ratio(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid ratio {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="svcdisco", description="Classification-indexed service registry")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    g = sub.add_parser("generate", help="write a synthetic WSDL corpus")
    g.add_argument("--size", type=int, required=True)
    g.add_argument("--seed", type=int, default=42)
    g.add_argument("--out", required=True)
    g.add_argument("--behavior-weights", type=_weights, help="Collective,Notifying,Interactive")
    g.add_argument("--cost-weights", type=_weights, help="FreeUnlimited,FreeLimited,Subscribe,PayPerUse")

    r = sub.add_parser("register", help="register WSDL documents")
    r.add_argument("--registry", required=True)
    src = r.add_mutually_exclusive_group(required=True)
    src.add_argument("--wsdl", help="WSDL file path or http(s) URL")
    src.add_argument("--corpus", help="generated corpus directory (uses manifest classifications)")
    r.add_argument("--class", dest="cls", help="behavior,tier,mode e.g. Notifying,Free,Unlimited")

    s = sub.add_parser("search", help="search a registry")
    s.add_argument("--registry", required=True)
    s.add_argument("--q", required=True, help="space-separated keywords")
    s.add_argument("--select", default="", help="comma-separated category labels")
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--scan", dest="mode", action="store_const", const="scan")
    mode.add_argument("--indexed", dest="mode", action="store_const", const="indexed")
    s.add_argument("--json", action="store_true")
    s.add_argument("--limit", type=int, default=20)

    b = sub.add_parser("bench", help="run the coverage sweep")
    b.add_argument("--config", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--dat", help="also write a gnuplot data file")
    b.add_argument("--corpus-root", help="where to generate missing corpora")

    m = sub.add_parser("model", help="closed-form cost model")
    msub = m.add_subparsers(dest="model_command", required=True, metavar="MODEL_COMMAND")
    mt = msub.add_parser("tsp", help="predicted time saving percentage")
    mt.add_argument("--x", type=int, required=True)
    mt.add_argument("--y", type=int, required=True)
    mt.add_argument("--ratio", type=_ratio, default=Fraction(1))
    mt.add_argument("--json", action="store_true")
    mc = msub.add_parser("curve", help="coverage vs TSP curve as CSV")
    mc.add_argument("--points", type=int, default=21)
    mc.add_argument("--out", help="CSV path (default stdout)")

    sv = sub.add_parser("serve", help="run the HTTP API")
    sv.add_argument("--registry", required=True)
    sv.add_argument("--bind", default=None, help=f"host:port (env SVCDISCO_BIND, default {DEFAULT_BIND})")
    return p


def _read_source(src: str) -> bytes:
    if src.startswith(("http://", "https://")):
        with urllib.request.urlopen(src, timeout=30) as resp:
            return resp.read()
    return Path(src).read_bytes()


def cmd_generate(args) -> int:
    kwargs = {}
    if args.behavior_weights:
        kwargs["behavior_weights"] = args.behavior_weights
    if args.cost_weights:
        kwargs["cost_weights"] = args.cost_weights
    spec = datagen.GenSpec(size=args.size, seed=args.seed, **kwargs)
    manifest = datagen.generate(spec, args.out)
    print(f"wrote {len(manifest.entries)} services to {args.out}")
    for label, frac in manifest.realized_distribution.items():
        print(f"  {label:<14} {frac:6.2%}")
    return 0


def cmd_register(args) -> int:
    reg = Registry.load_or_new(args.registry)
    if args.corpus:
        before = len(reg)
        register_corpus(args.corpus, reg)
        reg.save(args.registry)
        print(f"registered {len(reg) - before} services; registry size {len(reg)}")
        return 0
    if not args.cls:
        raise TaxonomyError("--class is required with --wsdl")
    c = parse_classification(args.cls)
    uri = args.wsdl if "://" in args.wsdl else str(Path(args.wsdl))
    doc = parse_wsdl(_read_source(args.wsdl), source_uri=uri)
    rec = reg.register(doc, c)
    reg.save(args.registry)
    print(f"{rec.record_id} {rec.name} {rec.classification}")
    return 0


def cmd_search(args) -> int:
    reg = Registry.load(args.registry)
    q = Query.parse(args.q, args.select)
    res = search(reg, q, args.mode or "scan")
    payload = result_payload(reg, res)
    if args.json:
        print(json.dumps(payload, indent=1))
        return 0
    for rank, hit in enumerate(payload["hits"][: args.limit], 1):
        print(f"{rank:3d}. {hit['score']:.3f}  {hit['record_id']}  {hit['classification']}  {hit['name']}")
    print(
        f"hits={len(payload['hits'])} x={payload['x']} y={payload['y']} "
        f"nf_ops={payload['nf_ops']} disc_ops={payload['disc_ops']}"
    )
    return 0


def cmd_bench(args) -> int:
    cfg, raw = load_config(args.config)
    corpora = {int(k): Path(v) for k, v in raw.get("corpora", {}).items()}
    missing = [n for n in cfg.sizes if n not in corpora]
    if missing:
        root = args.corpus_root or raw.get("corpus_root") or tempfile.mkdtemp(prefix="svcdisco-corpora-")
        corpora.update(prepare_corpora(replace(cfg, sizes=missing), root))
    rep = run_bench(cfg, corpora)
    emit_report(rep, args.out)
    if args.dat:
        emit_dat(rep, args.dat)
    print(f"backend={rep.backend} ratio={rep.ratio}")
    for row in rep.sorted_rows():
        print(
            f"{row.size:>6} {row.scenario:<16} coverage={float(row.coverage):.4f} "
            f"tsp={float(row.measured_tsp):.4f} predicted={float(row.predicted_tsp):.4f} "
            f"wall_tsp={row.wall_tsp:.4f}"
        )
    return 0


def cmd_model(args) -> int:
    if args.model_command == "tsp":
        p = costmodel.CostModelParams.with_ratio(args.ratio)
        pred = costmodel.predict(args.x, args.y, p)
        if args.json:
            print(json.dumps(pred.to_json()))
        else:
            print(float(pred.tsp))
        return 0
    points = costmodel.coverage_curve(args.points)
    if args.out:
        costmodel.write_curve_csv(points, args.out)
    else:
        print("coverage,tsp")
        for c, t in points:
            print(f"{float(c):.6f},{float(t):.6f}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    bind = args.bind or os.environ.get("SVCDISCO_BIND") or DEFAULT_BIND
    host, _, port = bind.rpartition(":")
    uvicorn.run(create_app(args.registry), host=host or "127.0.0.1", port=int(port))
    return 0


COMMANDS = {
    "generate": cmd_generate,
    "register": cmd_register,
    "search": cmd_search,
    "bench": cmd_bench,
    "model": cmd_model,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except DOMAIN_ERRORS as exc:
        module = "io" if isinstance(exc, OSError) else type(exc).__module__.rsplit(".", 1)[-1]
        print(f"svcdisco: {module}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
