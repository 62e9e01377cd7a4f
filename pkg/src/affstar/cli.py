"""Command-line entry point: census, parsing, audits, associators, certificates.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource
guard.  All runs are deterministic for a fixed configuration; the worker
count only distributes independent jobs.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .census import CENSUS_ROWS, FilterSpec, ResourceGuard, census, format_census, generate
from .factorize import (
    factorize_order,
    factorize_series_order,
    reduce_modulo_leibniz,
    restriction_check,
    save_certificate,
    verify_certificate,
)
from .graphs import GraphError, normal_form, parse_encoding, serialize
from .operators import render_formula
from .poisson import affine_2d, generic_poly, merge_contexts, nambu_3d
from .series import (
    GraphSeries,
    associator,
    bundled_star,
    dumps_star,
    load_star,
    save_star,
)
from .weights import audit

__all__ = ["RunConfig", "run", "main"]

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


@dataclass
class RunConfig:
    subcommand: str
    options: dict = field(default_factory=dict)
    extended_run: bool = False
    workers: int = 1


def _load(name_or_path: str) -> GraphSeries:
    if name_or_path in ("aff", "aff_red"):
        return bundled_star(name_or_path)
    return load_star(Path(name_or_path))


def _structure(name: str):
    if name == "affine2d":
        return affine_2d()
    if name in ("nambu11", "nambu02"):
        degs = (1, 1) if name == "nambu11" else (0, 2)
        rho = generic_poly(degs[0], "r")
        a = generic_poly(degs[1], "a")
        rho, a = merge_contexts(rho, a, coords=("x", "y", "z"))
        return nambu_3d(rho, a)
    raise ValueError(f"unknown structure {name!r}")


def run(config: RunConfig) -> int:
    try:
        return _dispatch(config)
    except ResourceGuard as exc:
        print(f"error: resource-guard: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (GraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _dispatch(config: RunConfig) -> int:
    opt = config.options
    cmd = config.subcommand

    if cmd == "count":
        filt = FilterSpec(
            max_aerial_in_degree=opt.get("in_degree_max"),
            require_nonzero=opt.get("nonzero", False),
            require_positive_differential_order=opt.get("diff_order_positive", False),
            require_connected=opt.get("connected", False),
            prime_only=opt.get("prime", False),
        )
        graphs = generate(
            opt["sinks"], opt["n"], filt, allow_large=config.extended_run
        )
        print(len(graphs))
        return EXIT_OK

    if cmd == "census":
        table = census(
            opt["max_n"], sinks=opt.get("sinks", 2), allow_large=config.extended_run
        )
        print(format_census(table))
        return EXIT_OK

    if cmd == "parse":
        g = parse_encoding(opt["encoding"])
        print(serialize(g))
        return EXIT_OK

    if cmd == "normalize":
        nf = normal_form(parse_encoding(opt["encoding"]))
        print(f"{serialize(nf.graph)}    applied_sign {nf.applied_sign}")
        return EXIT_OK

    if cmd == "load-star":
        series = _load(opt["star"])
        print(f"orders 0..{series.order}, nonzero terms {series.nonzero_count()}")
        failures = 0
        for a in audit(series):
            for line in a.report_lines():
                print(line)
            failures += 0 if a.passed else 1
        return EXIT_VERIFICATION if failures else EXIT_OK

    if cmd == "associator":
        series = _load(opt["star"])
        A = associator(series, opt["order"], affine_filter=opt.get("affine", True))
        for k in range(opt["order"] + 1):
            slices = A[k].tri_differential_slices()
            print(f"h^{k}: {len(A[k])} graphs, {len(slices)} differential orders")
        if opt.get("out"):
            save_star(A, opt["out"])
        return EXIT_OK

    if cmd == "factorize":
        series = _load(opt["star"])
        certs = factorize_series_order(
            series,
            opt["order"],
            max_layers=opt.get("max_layers", 1),
            affine=opt.get("affine", True),
            tri_order=opt.get("tri_order"),
            workers=config.workers,
        )
        print(f"Number of differential orders: {len(certs)}")
        ok = True
        for cert in certs:
            print(cert.trace())
            print(cert.solved)
            ok &= cert.solved
            if opt.get("certificates") and cert.solved:
                base = Path(opt["certificates"])
                base.mkdir(parents=True, exist_ok=True)
                tag = "_".join(str(d) for d in cert.tri_order)
                save_certificate(
                    cert,
                    base / f"order{opt['order']}_{tag}_leibniz.txt",
                    base / f"order{opt['order']}_{tag}_coeffs.txt",
                )
        return EXIT_OK if ok else EXIT_VERIFICATION

    if cmd == "reduce":
        series = _load(opt["star"])
        reduced, used = reduce_modulo_leibniz(
            series,
            max_aerial=opt.get("max_order"),
            max_layers=opt.get("max_layers", 1),
            extended=config.extended_run,
        )
        for k in sorted(used):
            print(f"h^{k}: {used[k].trace()}  residue {len(reduced[k])} graphs")
        if opt.get("out"):
            save_star(reduced, opt["out"])
        return EXIT_OK

    if cmd == "restrict":
        series = _load(opt["star"])
        P = _structure(opt["structure"])
        ok = restriction_check(series, P, opt["order"], opt["degree"])
        print("True" if ok else "False")
        return EXIT_OK if ok else EXIT_VERIFICATION

    if cmd == "render":
        series = _load(opt["star"])
        print(render_formula(series[opt["order"]], latex=opt.get("latex", False)))
        return EXIT_OK

    raise ValueError(f"unknown subcommand {cmd!r}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="affstar",
        description="Exact graph calculus for affine star products.",
    )
    parser.add_argument(
        "--workers",
        type=int,
        default=int(os.environ.get("AFFSTAR_WORKERS", "1")),
        help="worker processes for independent jobs (env AFFSTAR_WORKERS)",
    )
    parser.add_argument(
        "--extended", action="store_true", help="unlock heavy h^6/h^7 jobs"
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("count", help="count graphs passing the filters")
    p.add_argument("--sinks", type=int, default=2)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--in-degree-max", type=int, dest="in_degree_max")
    p.add_argument("--nonzero", action="store_true")
    p.add_argument("--diff-order-positive", action="store_true")
    p.add_argument("--connected", action="store_true")
    p.add_argument("--prime", action="store_true")

    p = sub.add_parser("census", help="print the census table")
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--sinks", type=int, default=2)

    p = sub.add_parser("parse", help="validate one encoding line")
    p.add_argument("encoding")

    p = sub.add_parser("normalize", help="canonical form of one encoding line")
    p.add_argument("encoding")

    p = sub.add_parser("load-star", help="load a series and run all audits")
    p.add_argument("--star", required=True)

    p = sub.add_parser("associator", help="build the 3-sink associator series")
    p.add_argument("--star", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--no-affine-filter", dest="affine", action="store_false")
    p.add_argument("--out")

    p = sub.add_parser("factorize", help="factor associator slices via Leibniz graphs")
    p.add_argument("--star", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--tri-order", type=_tri_order, dest="tri_order")
    p.add_argument("--max-layers", type=int, default=1, dest="max_layers")
    p.add_argument("--no-affine-filter", dest="affine", action="store_false")
    p.add_argument("--certificates")

    p = sub.add_parser("reduce", help="reduce a 2-sink series modulo Leibniz images")
    p.add_argument("--star", required=True)
    p.add_argument("--out")
    p.add_argument("--max-order", type=int, dest="max_order")
    p.add_argument("--max-layers", type=int, default=1, dest="max_layers")

    p = sub.add_parser("restrict", help="check associativity on a concrete bracket")
    p.add_argument("--star", required=True)
    p.add_argument(
        "--structure", choices=["affine2d", "nambu11", "nambu02"], required=True
    )
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--degree", type=int, default=3)

    p = sub.add_parser("render", help="print the analytic formula of one order")
    p.add_argument("--star", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--latex", action="store_true")
    return parser


def _tri_order(text: str) -> tuple[int, int, int]:
    parts = [int(t) for t in text.replace("(", "").replace(")", "").split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("tri-order needs three comma-separated parts")
    return tuple(parts)  # type: ignore[return-value]


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    options = {
        k: v
        for k, v in vars(args).items()
        if k not in ("subcommand", "workers", "extended") and v is not None
    }
    config = RunConfig(
        subcommand=args.subcommand,
        options=options,
        extended_run=args.extended,
        workers=args.workers,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
