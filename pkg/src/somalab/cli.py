"""Command-line entry point.

Every subcommand is seeded, writes its outputs under one directory, and
drops a run manifest (config echo, seed, version, file list, timestamps)
next to them so any result file can be traced back to the run that made
it. The output directory comes from --out-dir or the SOMALAB_OUT_DIR
environment variable, defaulting to the current directory.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import json
import os
import sys
import time

from . import __version__
from .core import SomaError, canonicalize, enumerate_all_solutions, solution_text
from .search import Ordering, StopMode, StrategyConfig, solve

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN_ERROR = 3
EXIT_RESOURCE = 4

_ORDERINGS = {o.value: o for o in Ordering}


def _out_dir(args):
    d = args.out_dir or os.environ.get("SOMALAB_OUT_DIR") or "."
    os.makedirs(d, exist_ok=True)
    return d


def _write_manifest(args, out_dir, outputs, started):
    manifest = {
        "subcommand": args.command,
        "config": {
            k: v for k, v in vars(args).items()
            if k not in ("command", "func") and v is not None
        },
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "outputs": outputs,
        "started": started,
        "finished": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    path = os.path.join(out_dir, f"{args.command.replace(' ', '_')}_manifest.json")
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2)
    return path


def _now():
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def cmd_solve(args):
    out_dir = _out_dir(args)
    started = _now()
    config = StrategyConfig(
        ordering=_ORDERINGS[args.ordering],
        pruning=args.prune,
        seed=args.seed,
        stop_mode=StopMode.EXHAUSTIVE if args.exhaustive else StopMode.FIRST_SOLUTION,
    )
    if args.landmarks_file:
        from .landmarks import load_table, query_solve

        if not os.path.exists(args.landmarks_file):
            print(f"landmark file not found: {args.landmarks_file}",
                  file=sys.stderr)
            return EXIT_USAGE
        table = load_table(args.landmarks_file)
        solution, record = query_solve(table, config)
        solutions = [solution] if solution else []
        stats_payload = {
            "query_nodes": record.query_nodes,
            "query_time": record.query_time,
            "num_landmarks": record.num_landmarks,
            "config": config.describe(),
        }
    else:
        solutions, stats = solve(config)
        stats_payload = stats.to_json()
    if args.exhaustive:
        canonical = {canonicalize(s).canonical_form for s in solutions}
        print(f"{len(solutions)} solutions, {len(canonical)} canonical")
    elif solutions:
        print(solution_text(solutions[0]))
    else:
        print("no solution found")
    stats_path = os.path.join(out_dir, "solve_stats.json")
    with open(stats_path, "w") as fh:
        json.dump(stats_payload, fh, indent=2)
    _write_manifest(args, out_dir, [stats_path], started)
    return EXIT_OK


def cmd_enumerate(args):
    out_dir = _out_dir(args)
    started = _now()
    canonical, raw = enumerate_all_solutions()
    path = os.path.join(out_dir, "solutions.txt")
    with open(path, "w") as fh:
        for sol in canonical:
            fh.write("".join(str(b) for b in sol.canonical_form) + "\n")
    print(f"{len(canonical)} canonical solutions ({raw} raw assemblies)")
    _write_manifest(args, out_dir, [path], started)
    return EXIT_OK


def cmd_sample_bf(args):
    from . import metrics

    out_dir = _out_dir(args)
    started = _now()
    outputs = []
    if args.depth is not None:
        degrees = metrics.sample_branching(
            args.depth, args.samples, args.seed, model=args.model
        )
        hist = {}
        for g in degrees:
            hist[g] = hist.get(g, 0) + 1
        path = os.path.join(out_dir, f"branching_depth{args.depth}.csv")
        _write_csv(path, ("depth", "out_degree", "count"),
                   [(args.depth, deg, hist[deg]) for deg in sorted(hist)])
        outputs.append(path)
        mean = sum(degrees) / len(degrees)
        print(f"depth {args.depth}: mean out-degree {mean:.2f} "
              f"({args.samples} samples)")
    else:
        profile = metrics.branching_profile(
            num_samples=args.samples, seed=args.seed, model=args.model
        )
        rows = []
        for d, obs in profile.per_depth_samples.items():
            hist = {}
            for g in obs:
                hist[g] = hist.get(g, 0) + 1
            rows.extend((d, deg, hist[deg]) for deg in sorted(hist))
        path = os.path.join(out_dir, "branching_profile.csv")
        _write_csv(path, ("depth", "out_degree", "count"), rows)
        meta_path = os.path.join(out_dir, "branching_profile_meta.json")
        with open(meta_path, "w") as fh:
            json.dump({
                "per_depth_mean": profile.per_depth_mean,
                "overall_mean": profile.overall_mean,
                "pooled_mean": profile.pooled_mean,
                "ci95": profile.ci95,
                **profile.metadata,
            }, fh, indent=2)
        outputs += [path, meta_path]
        print(f"overall mean {profile.overall_mean:.2f} "
              f"(95% CI {profile.ci95[0]:.2f}..{profile.ci95[1]:.2f})")
    _write_manifest(args, out_dir, outputs, started)
    return EXIT_OK


def cmd_effective_bf(args):
    from .metrics import effective_bf

    print(f"{effective_bf(args.nodes):.6g}")
    return EXIT_OK


def cmd_encode_cnf(args):
    from . import sat

    out_dir = _out_dir(args)
    started = _now()
    cnf = sat.encode()
    path = args.out or os.path.join(out_dir, "soma.cnf")
    sat.emit_dimacs(cnf, path)
    print(f"{cnf.num_vars} variables, {len(cnf.clauses)} clauses -> {path}")
    _write_manifest(args, out_dir, [path], started)
    return EXIT_OK


def cmd_landmarks(args):
    from . import landmarks as lm

    out_dir = _out_dir(args)
    started = _now()
    base = StrategyConfig(ordering=_ORDERINGS[args.ordering], seed=args.seed)
    if args.action == "build":
        table = lm.build_table(args.depth, base,
                               landmark_count_limit=args.limit)
        path = args.out or os.path.join(out_dir, f"landmarks_d{args.depth}.bin")
        lm.save_table(table, path)
        print(f"{len(table.entries)} entries "
              f"({len(table.anti_landmarks())} dead) -> {path}")
        _write_manifest(args, out_dir, [path], started)
    elif args.action == "sweep":
        depths = [int(d) for d in args.depths.split(",")]
        counts = [int(c) for c in args.counts.split(",")]
        records = lm.tradeoff_sweep(depths, counts, base)
        path = args.out or os.path.join(out_dir, "landmark_sweep.csv")
        _write_csv(path, lm.CSV_HEADER, [r.csv_row() for r in records])
        print(f"{len(records)} records -> {path}")
        _write_manifest(args, out_dir, [path], started)
    else:  # query
        if not os.path.exists(args.table):
            print(f"landmark file not found: {args.table}", file=sys.stderr)
            return EXIT_USAGE
        table = lm.load_table(args.table)
        solution, record = lm.query_solve(table, base)
        print(solution_text(solution) if solution else "no solution found")
        print(f"query nodes: {record.query_nodes}")
        _write_manifest(args, out_dir, [], started)
    return EXIT_OK


def cmd_strategy_matrix(args):
    from . import metrics

    out_dir = _out_dir(args)
    started = _now()
    grid = metrics.strategy_matrix(seeds=range(args.seeds),
                                   landmark_depth=args.landmark_depth,
                                   landmark_count=args.landmark_count)
    rows = []
    for ordering, row in grid.items():
        for (pruning, landmarks), b_star in row.items():
            rows.append((ordering, pruning, landmarks, f"{b_star:.6f}"))
    path = os.path.join(out_dir, "strategy_matrix.csv")
    _write_csv(path, ("ordering", "pruning", "landmarks", "b_star"), rows)
    print(f"{len(rows)} cells -> {path}")
    _write_manifest(args, out_dir, [path], started)
    return EXIT_OK


def cmd_zoo(args):
    from . import zoo

    out_dir = _out_dir(args)
    started = _now()
    spaces = {
        "8-puzzle": lambda: zoo.eight_puzzle_space(non_backtracking=False),
        "8-puzzle-nb": lambda: zoo.eight_puzzle_space(non_backtracking=True),
        "magic-square": zoo.magic_square_space,
        "slothouber-graatsma": zoo.slothouber_graatsma_space,
        "soma": zoo.soma_space,
    }
    space = spaces[args.puzzle]()
    max_depth = args.max_depth
    if max_depth is None and space.max_depth is None:
        max_depth = 30
    profile = zoo.zoo_profile(space, max_depth=max_depth,
                              num_walks=args.walks, seed=args.seed)
    path = os.path.join(out_dir, f"zoo_{args.puzzle}.csv")
    _write_csv(path, ("puzzle", "depth", "mean_branching"),
               [(space.name, d, f"{m:.4f}")
                for d, m in sorted(profile.per_depth_mean.items())])
    print(f"{space.name}: " + ", ".join(
        f"d{d}={m:.2f}" for d, m in sorted(profile.per_depth_mean.items())
    ))
    _write_manifest(args, out_dir, [path], started)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="somalab",
        description="Soma Cube search laboratory: solvers, branching "
                    "statistics, CNF export, landmarks, comparison puzzles.",
    )
    parser.add_argument("--out-dir", default=None,
                        help="output directory (or set SOMALAB_OUT_DIR)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run one solver configuration")
    p.add_argument("--ordering", choices=sorted(_ORDERINGS), default="cell")
    p.add_argument("--prune", action="store_true")
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--landmarks-file", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("enumerate", help="enumerate all canonical solutions")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("sample-bf", help="sample branching factors")
    p.add_argument("--depth", type=int, default=None,
                   help="single target depth; omit for the full profile")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model", choices=("committed", "configuration"),
                   default="committed")
    p.set_defaults(func=cmd_sample_bf)

    p = sub.add_parser("effective-bf", help="effective branching factor")
    p.add_argument("--nodes", type=int, required=True)
    p.set_defaults(func=cmd_effective_bf)

    p = sub.add_parser("encode-cnf", help="emit the DIMACS encoding")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_encode_cnf)

    p = sub.add_parser("landmarks", help="landmark table operations")
    p.add_argument("action", choices=("build", "sweep", "query"))
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--depths", default="2,3")
    p.add_argument("--counts", default="0,10,100,1000")
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--ordering", choices=sorted(_ORDERINGS), default="cell")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--table", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_landmarks)

    p = sub.add_parser("strategy-matrix",
                       help="effective branching factor per strategy variant")
    p.add_argument("--seeds", type=int, default=20,
                   help="number of seeds averaged for the randomized row")
    p.add_argument("--landmark-depth", type=int, default=2)
    p.add_argument("--landmark-count", type=int, default=100)
    p.set_defaults(func=cmd_strategy_matrix)

    p = sub.add_parser("zoo", help="comparison puzzle branching profiles")
    p.add_argument("--puzzle", required=True,
                   choices=("8-puzzle", "8-puzzle-nb", "magic-square",
                            "slothouber-graatsma", "soma"))
    p.add_argument("--walks", type=int, default=2000)
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_zoo)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SomaError as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)},
                  sys.stderr)
        sys.stderr.write("\n")
        return EXIT_DOMAIN_ERROR
    except MemoryError:
        json.dump({"error": "MemoryError"}, sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
