"""Command-line surface: preprocess, rank, sweep, verify.

Every command writes its outputs plus a manifest.json into --out; re-running
the same invocation reproduces the outputs byte for byte.  Exit codes:
0 success, 1 usage error, 2 data error, 3 property-verification failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .errors import TwistrankError
from .graph import NegativeInjection, load_graph, preprocess, stats
from .sampling import WalkConfig
from .analysis import sweep
from .centrality import centrality, resolve_theta
from . import io as tio
from .verify import run_checks

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_VERIFY = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; the contract here is 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (TwistrankError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def build_parser() -> _Parser:
    parser = _Parser(prog="twistrank", description=__doc__)
    parser.add_argument("--version", action="version", version=f"twistrank {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("preprocess", help="clean an edge list into a validated graph")
    p.add_argument("--edges", required=True, help="raw edge-list file (u w [sign])")
    p.add_argument("--attrs", help="node-attribute file (u v1 ... vp)")
    p.add_argument("--min-degree", type=int, default=0,
                   help="iteratively drop nodes below this degree")
    p.add_argument("--inject-negative", type=int, default=0, metavar="COUNT",
                   help="number of negative edges to add between partitions")
    p.add_argument("--partition", help="partition-label file (u label), required when injecting")
    p.add_argument("--seed", type=int, default=0, help="seed for negative-edge injection")
    p.add_argument("--out", required=True, help="output directory")
    _common_flags(p)
    p.set_defaults(handler=cmd_preprocess)

    p = sub.add_parser("rank", help="compute a centrality ranking")
    _graph_flags(p)
    p.add_argument("--measure", required=True, choices=["influence", "trust", "ad"],
                   help="centrality kind")
    p.add_argument("--theta", type=float, help="temperature (exclusive with --gamma)")
    p.add_argument("--gamma", type=float, help="target mean path measure (exclusive with --theta)")
    p.add_argument("--ad-vector", action="append", metavar="FILE",
                   help="advertisement score-vector file; repeat to combine "
                        "advertisements by elementwise sum")
    p.add_argument("--out", required=True, help="output directory")
    _common_flags(p)
    p.set_defaults(handler=cmd_rank)

    p = sub.add_parser("sweep", help="rank over a grid of targets and compare to degree baselines")
    _graph_flags(p)
    p.add_argument("--measure", required=True, choices=["influence", "trust", "ad"])
    p.add_argument("--gammas", help="comma-separated gamma targets (exclusive with --thetas)")
    p.add_argument("--thetas", help="comma-separated temperatures (exclusive with --gammas)")
    p.add_argument("--ad-vector", action="append", metavar="FILE")
    p.add_argument("--k", type=int, default=None,
                   help="top-k size (default 100, or 250 for --measure ad)")
    p.add_argument("--out", required=True, help="output directory")
    _common_flags(p)
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("verify", help="run the oracle cross-checks on a graph")
    _graph_flags(p)
    p.add_argument("--ad-vector", action="append", metavar="FILE")
    p.add_argument("--out", help="optional output directory for the JSON report")
    _common_flags(p)
    p.set_defaults(handler=cmd_verify)
    return parser


def _graph_flags(p):
    p.add_argument("--edges", required=True, help="edge-list file (u w [sign])")
    p.add_argument("--attrs", help="node-attribute file (u v1 ... vp)")
    p.add_argument("--beta1", type=float, default=1.0, help="weight of length-1 walks")
    p.add_argument("--beta2", type=float, default=0.0, help="weight of length-2 walks")


def _common_flags(p):
    p.add_argument("--threads", type=int, default=_default_threads(),
                   help="worker bound, recorded in the manifest; the current "
                        "kernels are vectorized single-process")


def _default_threads() -> int:
    env = os.environ.get("TWISTRANK_THREADS")
    if env is not None:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _load(args):
    edges = tio.read_edge_list(args.edges)
    attrs = tio.read_attributes(args.attrs) if args.attrs else None
    return load_graph(edges, attrs)


def _walk(args) -> WalkConfig:
    return WalkConfig(args.beta1, args.beta2)


def _ad_vector(args):
    files = getattr(args, "ad_vector", None)
    if not files:
        return None
    combined = tio.read_vector(files[0])
    for extra in files[1:]:
        vec = tio.read_vector(extra)
        if vec.size != combined.size:
            raise TwistrankError(
                f"advertisement vectors disagree in dimension: {combined.size} vs {vec.size}"
            )
        combined = combined + vec
    return combined


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_preprocess(args) -> int:
    if args.inject_negative and not args.partition:
        raise TwistrankError("--inject-negative requires --partition")
    edges = tio.read_edge_list(args.edges)
    attrs = tio.read_attributes(args.attrs) if args.attrs else None
    inject = None
    if args.inject_negative:
        inject = NegativeInjection(
            count=args.inject_negative,
            seed=args.seed,
            partition=tio.read_partition(args.partition),
        )
    result = preprocess(edges, min_degree=args.min_degree, inject=inject, attr_records=attrs)
    out = _out_dir(args)
    tio.write_edge_list(out / "edges.txt", result.graph)
    if attrs is not None:
        tio.write_attributes(out / "attrs.txt", result.graph)
    tio.write_json(out / "report.json", result.report.to_dict())
    tio.write_manifest(out, tio.RunManifest("preprocess", _manifest_params(args)))
    s = stats(result.graph)
    print(
        f"preprocessed graph: n={result.graph.n} m={s.m} "
        f"(m+={s.m_pos}, m-={s.m_neg}); removed {len(result.report.removed_nodes)} nodes"
    )
    return EXIT_OK


def cmd_rank(args) -> int:
    if (args.theta is None) == (args.gamma is None):
        raise TwistrankError("exactly one of --theta and --gamma must be given")
    g = _load(args)
    walk = _walk(args)
    kind = "advertisement" if args.measure == "ad" else args.measure
    ad = _ad_vector(args)
    if kind == "advertisement" and ad is None:
        raise TwistrankError("--measure ad requires --ad-vector")
    theta = resolve_theta(g, kind, theta=args.theta, gamma=args.gamma, walk=walk, ad_vector=ad)
    ranking = centrality(g, kind, theta=theta, walk=walk, ad_vector=ad)
    out = _out_dir(args)
    tio.write_ranking_csv(out / "ranking.csv", ranking, g.original_ids)
    tio.write_ranking_json(out / "ranking.json", ranking, g.original_ids)
    params = _manifest_params(args)
    params["resolved_theta"] = float(tio.format_score(theta))
    tio.write_manifest(out, tio.RunManifest("rank", params))
    print(f"resolved theta = {tio.format_score(theta)}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    if (args.gammas is None) == (args.thetas is None):
        raise TwistrankError("exactly one of --gammas and --thetas must be given")
    g = _load(args)
    walk = _walk(args)
    kind = "advertisement" if args.measure == "ad" else args.measure
    ad = _ad_vector(args)
    if kind == "advertisement" and ad is None:
        raise TwistrankError("--measure ad requires --ad-vector")
    mode = "gamma" if args.gammas is not None else "theta"
    raw = args.gammas if mode == "gamma" else args.thetas
    try:
        values = [float(v) for v in raw.split(",") if v.strip()] if raw.strip() else []
    except ValueError:
        raise TwistrankError(f"could not parse target list {raw!r}") from None
    k = args.k if args.k is not None else (250 if kind == "advertisement" else 100)
    rows = sweep(g, kind, mode, values, walk=walk, k=k, ad_vector=ad)
    out = _out_dir(args)
    tio.write_sweep_csv(out / "sweep.csv", rows)
    tio.write_sweep_json(out / "sweep.json", rows)
    params = _manifest_params(args)
    params["k"] = k
    tio.write_manifest(out, tio.RunManifest("sweep", params))
    failures = [row for row in rows if row.error is not None]
    for row in failures:
        target = row.gamma if mode == "gamma" else row.theta
        print(f"target {target}: {row.error}", file=sys.stderr)
    print(f"swept {len(rows)} targets, {len(failures)} failed")
    return EXIT_DATA if failures else EXIT_OK


def cmd_verify(args) -> int:
    g = _load(args)
    results = run_checks(g, ad_vector=_ad_vector(args))
    for result in results:
        print(result.line())
    if args.out:
        out = _out_dir(args)
        tio.write_json(
            out / "verify.json",
            {
                "checks": [
                    {
                        "name": r.name,
                        "passed": r.passed,
                        "max_error": r.max_error,
                        "detail": r.detail,
                    }
                    for r in results
                ]
            },
        )
        tio.write_manifest(out, tio.RunManifest("verify", _manifest_params(args)))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def _manifest_params(args) -> dict:
    # The output directory is where results land, not an input to them; keep
    # it out so reruns into different directories stay byte-identical.
    skip = {"handler", "command", "out"}
    params = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        params[key] = value
    return params


if __name__ == "__main__":
    raise SystemExit(main())
