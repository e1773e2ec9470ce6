"""Command-line entry point wiring the library together.

Exit codes: 0 on success or a valid verification, 1 when verification or a
mapping check fails, 2 on usage errors, malformed input, or guard
violations. Every output file embeds the tool version, the full command
configuration, and any seed, so randomized runs are reproducible
byte-for-byte.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys

from . import __version__
from .build import (
    build_steiner_2tc,
    load_spanner,
    path_query,
    save_spanner,
    spanner_ell,
    spanner_to_dot,
)
from .dualbound import certificate_to_dict, certify
from .jumps import (
    MappingError,
    RandomPosetSpec,
    jump_edge_mapping,
    monte_carlo_jumps,
    sample_poset,
)
from .oracle import min_2tc_bruteforce, min_ktc_bruteforce
from .poset import (
    canonicalize_embedding,
    hypergrid,
    iter_comparable_pairs,
    load_poset,
    save_poset,
)
from .verify import is_steiner_ktc


def _meta(args: argparse.Namespace, command: str) -> dict:
    config = {
        k: v
        for k, v in sorted(vars(args).items())
        if k != "func" and v is not None
    }
    return {
        "tool": "tcspan",
        "version": __version__,
        "command": command,
        "config": config,
        "seed": getattr(args, "seed", None),
    }


def _write_json(path: str, data: dict) -> None:
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def cmd_embed(args: argparse.Namespace) -> int:
    p = load_poset(args.infile)
    canon = canonicalize_embedding(p)
    save_poset(canon, args.out, meta=_meta(args, "embed"))
    print(f"canonicalized {canon.n} elements into side-{canon.side} grid")
    return 0


def cmd_build(args: argparse.Namespace) -> int:
    p = load_poset(args.infile)
    s = build_steiner_2tc(p)
    save_spanner(s, args.out, meta=_meta(args, "build"))
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(spanner_to_dot(s))
    bound = p.n * s.ell ** p.dim
    print(
        f"built {len(s.edges)} edges, {len(s.steiner_coords)} relay vertices "
        f"(bound {bound})"
    )
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    g = load_poset(args.poset)
    h = load_spanner(args.spanner, poset=g)
    report = is_steiner_ktc(h, g, args.k)
    if args.report:
        _write_json(
            args.report,
            {
                "is_valid": report.is_valid,
                "violations": [
                    {"kind": v.kind, "pair": list(v.pair), "distance": v.distance}
                    for v in report.violations
                ],
                "meta": _meta(args, "verify"),
            },
        )
    if report.is_valid:
        print(f"valid stretch-{args.k} spanner ({len(h.edges)} edges)")
        return 0
    print(f"INVALID: {len(report.violations)} violations", file=sys.stderr)
    for v in report.violations[:10]:
        print(f"  {v.kind} {v.pair} distance={v.distance}", file=sys.stderr)
    return 1


def cmd_path(args: argparse.Namespace) -> int:
    h = load_spanner(args.spanner)
    path = path_query(h, args.from_id, args.to_id)
    hops = " -> ".join(
        [str(path[0][0])] + [str(e[1]) for e in path]
    )
    print(f"{hops}  ({len(path)} edge{'s' if len(path) > 1 else ''})")
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    g = load_poset(args.poset)
    guard = None if args.unsafe else 40
    if args.k == 2:
        res = min_2tc_bruteforce(g, budget=args.budget, pair_guard=guard)
    else:
        res = min_ktc_bruteforce(g, args.k, budget=args.budget, pair_guard=guard)
    data = {
        "opt_size": res.opt_size,
        "witness": [list(e) for e in res.witness],
        "explored": res.explored,
        "meta": _meta(args, "oracle"),
    }
    if args.out:
        _write_json(args.out, data)
    print(f"optimum {res.opt_size} edges (explored {res.explored} nodes)")
    return 0


def cmd_dualbound(args: argparse.Namespace) -> int:
    guard = None if args.unsafe else 4096
    cert = certify(
        args.m, args.d, sample=args.sample, seed=args.seed, exact_guard=guard
    )
    if args.out:
        _write_json(args.out, certificate_to_dict(cert, meta=_meta(args, "dualbound")))
    print(
        f"{cert.status}: objective {cert.objective_raw} "
        f"bound {cert.certified_bound:.6g} feasible={cert.feasible}"
    )
    return 0


def cmd_jumps(args: argparse.Namespace) -> int:
    n = args.n
    if n & (n - 1):
        n = 1 << (n.bit_length() - 1)
        print(f"warning: n rounded down to the power of two {n}", file=sys.stderr)
    stats = monte_carlo_jumps(n, args.d, args.trials, args.seed, threads=args.threads)
    if args.out:
        from .jumps import enumerate_jumps

        spec = RandomPosetSpec(n, args.d, args.seed)
        per_trial = [
            enumerate_jumps(sample_poset(spec, stream=t)).per_partition()
            for t in range(args.trials)
        ]
        keys = sorted(per_trial[0])
        lines = [f"# meta: {json.dumps(_meta(args, 'jumps'), sort_keys=True)}"]
        lines.append(
            "trial,jumps,"
            + ",".join("bp_" + "_".join(str(i) for i in k) for k in keys)
        )
        for t, per in enumerate(per_trial):
            lines.append(
                f"{t},{stats.counts[t]}," + ",".join(str(per[k]) for k in keys)
            )
        with open(args.out, "w") as fh:
            fh.write("\n".join(lines) + "\n")
    print(
        f"mean {stats.mean:.2f} stddev {stats.stddev:.2f} "
        f"ci95 [{stats.ci95[0]:.2f}, {stats.ci95[1]:.2f}] over {stats.trials} trials"
    )
    return 0


def cmd_jumpmap(args: argparse.Namespace) -> int:
    g = load_poset(args.poset)
    h = load_spanner(args.spanner, poset=g)
    report = jump_edge_mapping(g, h, args.k)
    data = {
        "n_jumps": report.n_jumps,
        "n_edges": report.n_edges,
        "max_multiplicity": report.max_multiplicity,
        "injective": report.injective,
        "selected": [
            {"jump": [j.a, j.b, list(j.ivec), list(j.jvec)], "edge": list(e)}
            for j, e in report.selected
        ],
        "meta": _meta(args, "jumpmap"),
    }
    if args.out:
        _write_json(args.out, data)
    print(
        f"{report.n_jumps} jumps -> {len(report.multiplicities)} edges, "
        f"max multiplicity {report.max_multiplicity}"
    )
    return 0


def report_table(rows: list[dict]) -> str:
    """Fixed-width comparison of built size, bound, optimum, and dual bound."""
    headers = ["instance", "n", "built", "bound", "oracle", "dual"]
    table = [headers] + [
        [
            str(r.get("instance", "")),
            str(r.get("n", "")),
            str(r.get("built", "")),
            str(r.get("bound", "")),
            str(r.get("oracle", "-")),
            r.get("dual", "-"),
        ]
        for r in rows
    ]
    widths = [max(len(row[i]) for row in table) for i in range(len(headers))]
    lines = [
        "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
        for row in table
    ]
    return "\n".join(lines) + "\n"


def cmd_table(args: argparse.Namespace) -> int:
    rows = []
    for spec in args.grid:
        try:
            m_str, d_str = spec.split(":")
            m, d = int(m_str), int(d_str)
        except ValueError:
            raise ValueError(f"--grid takes m:d, got {spec!r}")
        g = hypergrid(m, d)
        canon = g if g.is_canonical else canonicalize_embedding(g)
        s = build_steiner_2tc(canon)
        ell = spanner_ell(g.n)
        row = {
            "instance": f"H_{{{m},{d}}}",
            "n": g.n,
            "built": len(s.edges),
            "bound": g.n * ell**d,
        }
        n_pairs = sum(
            1 for _ in itertools.islice(iter_comparable_pairs(g), 41)
        )
        if n_pairs <= 40:
            row["oracle"] = min_2tc_bruteforce(g).opt_size
        if m**d <= 4096:
            row["dual"] = f"{certify(m, d, tightness=False).certified_bound:.4g}"
        rows.append(row)
    sys.stdout.write(report_table(rows))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tcspan",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument(
            "--threads",
            type=int,
            default=int(os.environ.get("TCSPAN_THREADS", "1")),
            help="worker cap for parallel sections (env TCSPAN_THREADS)",
        )
        sp.add_argument(
            "--unsafe",
            action="store_true",
            help="lift enumeration and search guards",
        )

    sp = sub.add_parser("embed", help="canonicalize a poset embedding")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--out", required=True)
    common(sp)
    sp.set_defaults(func=cmd_embed)

    sp = sub.add_parser("build", help="construct the two-hop spanner")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--dot", help="also write a GraphViz rendering")
    common(sp)
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("verify", help="check a spanner against a poset")
    sp.add_argument("--poset", required=True)
    sp.add_argument("--spanner", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--report", help="write a JSON violation report")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("path", help="answer a two-hop reachability query")
    sp.add_argument("--spanner", required=True)
    sp.add_argument("--from", dest="from_id", type=int, required=True)
    sp.add_argument("--to", dest="to_id", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_path)

    sp = sub.add_parser("oracle", help="exact minimum spanner size")
    sp.add_argument("--poset", required=True)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--budget", type=int, default=10_000_000)
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("dualbound", help="dual lower-bound certificate")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--sample", type=int, help="spot-check this many pairs")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_dualbound)

    sp = sub.add_parser("jumps", help="Monte-Carlo jump statistics")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out", help="CSV: trial, jumps, per-partition counts")
    common(sp)
    sp.set_defaults(func=cmd_jumps)

    sp = sub.add_parser("jumpmap", help="map jumps to spanner edges")
    sp.add_argument("--poset", required=True)
    sp.add_argument("--spanner", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--out")
    common(sp)
    sp.set_defaults(func=cmd_jumpmap)

    sp = sub.add_parser("table", help="size comparison table for grids")
    sp.add_argument(
        "--grid",
        action="append",
        required=True,
        metavar="m:d",
        help="grid instance, repeatable",
    )
    common(sp)
    sp.set_defaults(func=cmd_table)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MappingError as exc:
        print(f"mapping check failed: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError, KeyError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
