"""Command-line driver: solve, hanan, bench, validate.

Exit codes: 0 success, 2 parse error, 3 infeasible, 4 time limit,
5 memory limit, 1 anything else.  Errors are emitted as one-line JSON
objects so harnesses can triage outcomes.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import (
    DsteinerError,
    Infeasible,
    InvalidTree,
    MemoryLimit,
    StpError,
    TimeLimit,
)
from .graph import validate_tree
from .hanan import build_hanan_grid, generate_random_points, parse_points
from .solver import solve
from .stp import (
    CSV_HEADER,
    parse_stp_file,
    read_solution,
    write_solution,
    write_stp,
)

EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_TIMEOUT = 4
EXIT_MEMORY = 5


@dataclass
class RunConfig:
    bound: str = "onetree"
    prune: str = "full"
    root: str = "last"
    time_limit: float = 7200.0
    mem_limit: int = 4 << 30
    format: str = "json"
    parallel: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.time_limit <= 0:
            raise ValueError("time limit must be positive")
        if self.mem_limit <= 0:
            raise ValueError("memory limit must be positive")


def _emit_error(kind: str, message: str) -> None:
    print(json.dumps({"error": kind, "message": message}))


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        bound=args.bound,
        prune=args.prune,
        root=args.root,
        time_limit=args.time_limit,
        mem_limit=args.mem_limit,
        format=getattr(args, "format", "json"),
        parallel=getattr(args, "parallel", 1),
        seed=getattr(args, "seed", 0),
    )


def _solve_path(path: str, cfg: RunConfig):
    instance = parse_stp_file(path)
    record = solve(
        instance,
        bound=cfg.bound,
        prune=cfg.prune,
        root_rule=cfg.root,
        time_limit=cfg.time_limit,
        mem_limit=cfg.mem_limit,
    )
    # paranoia before emitting: the record must validate against the file
    cost = validate_tree(instance, record.edges)
    if cost != record.opt:
        raise RuntimeError(f"internal: tree cost {cost} != reported opt {record.opt}")
    return record


def cmd_solve(args) -> int:
    cfg = _config_from_args(args)
    try:
        record = _solve_path(args.stp, cfg)
    except StpError as exc:
        _emit_error("parse", str(exc))
        return EXIT_PARSE
    except Infeasible as exc:
        _emit_error("infeasible", str(exc))
        return EXIT_INFEASIBLE
    except TimeLimit as exc:
        _emit_error("timeout", str(exc))
        return EXIT_TIMEOUT
    except MemoryLimit as exc:
        _emit_error("memory", str(exc))
        return EXIT_MEMORY
    text = write_solution(record, cfg.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_hanan(args) -> int:
    if args.points:
        with open(args.points) as fh:
            points = parse_points(fh.read())
    else:
        d, k, coord_max = args.random
        points = generate_random_points(d, k, coord_max, args.seed)
    instance, _ = build_hanan_grid(points)
    name = args.out.rsplit("/", 1)[-1]
    if name.endswith(".stp"):
        name = name[:-4]
    instance.name = name
    with open(args.out, "w") as fh:
        fh.write(write_stp(instance))
    print(f"{instance.n} {instance.m} {instance.k}")
    return 0


def _bench_row(task):
    path, cfg = task
    name = path.rsplit("/", 1)[-1]
    if name.endswith(".stp"):
        name = name[:-4]
    try:
        record = _solve_path(path, cfg)
        return record.summary_row() + [""]
    except (DsteinerError, OSError) as exc:
        return [name, "", "", "", "", "", "", "", f"{type(exc).__name__}: {exc}"]


def cmd_bench(args) -> int:
    cfg = _config_from_args(args)
    with open(args.manifest) as fh:
        paths = [ln.strip() for ln in fh if ln.strip()]
    tasks = [(p, cfg) for p in paths]
    if cfg.parallel > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.parallel) as pool:
            rows = list(pool.map(_bench_row, tasks))
    else:
        rows = [_bench_row(t) for t in tasks]
    out = sys.stdout if not args.output else open(args.output, "w")
    try:
        out.write(",".join(CSV_HEADER + ["error"]) + "\n")
        for row in rows:
            out.write(",".join(str(x) for x in row) + "\n")
    finally:
        if args.output:
            out.close()
    return 0


def cmd_validate(args) -> int:
    try:
        instance = parse_stp_file(args.stp)
    except StpError as exc:
        _emit_error("parse", str(exc))
        return EXIT_PARSE
    with open(args.solution) as fh:
        record = read_solution(fh.read(), "json")
    try:
        cost = validate_tree(instance, [tuple(e) for e in record.edges])
    except (InvalidTree, ValueError) as exc:
        _emit_error(type(exc).__name__, str(exc))
        return 1
    print(cost)
    if cost != record.opt:
        _emit_error("mismatch", f"tree cost {cost} != recorded opt {record.opt}")
        return 1
    return 0


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--bound", default="onetree",
                   help="zero | jterm:<j> | onetree | tsp | max(b1,b2,...)")
    p.add_argument("--prune", default="full", choices=["off", "bound", "full"])
    p.add_argument("--root", default="last",
                   help="last | center | index:<i>")
    p.add_argument("--time-limit", type=float, default=7200.0, metavar="SECONDS")
    p.add_argument("--mem-limit", type=int, default=4 << 30, metavar="BYTES")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dsteiner", description="Exact Steiner tree solver"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one STP instance")
    p_solve.add_argument("stp")
    p_solve.add_argument("-o", "--output", default=None)
    p_solve.add_argument("--format", default="json", choices=["json", "csv"])
    _add_run_options(p_solve)
    p_solve.set_defaults(func=cmd_solve)

    p_hanan = sub.add_parser(
        "hanan", help="build a Hanan-grid STP instance from points"
    )
    p_hanan.add_argument("out", help="output .stp path")
    src = p_hanan.add_mutually_exclusive_group(required=True)
    src.add_argument("--points", default=None, help="point file: 'd k' header")
    src.add_argument("--random", nargs=3, type=int, metavar=("D", "K", "MAX"),
                     help="generate K random D-dim points in {0..MAX}")
    p_hanan.add_argument("--seed", type=int, default=0)
    p_hanan.set_defaults(func=cmd_hanan)

    p_bench = sub.add_parser("bench", help="solve a manifest of instances to CSV")
    p_bench.add_argument("manifest", help="text file with one .stp path per line")
    p_bench.add_argument("-o", "--output", default=None)
    p_bench.add_argument("--parallel", type=int, default=1)
    _add_run_options(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    p_val = sub.add_parser("validate", help="check a solution record")
    p_val.add_argument("stp")
    p_val.add_argument("solution", help="solution JSON file")
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DsteinerError, ValueError) as exc:
        _emit_error(type(exc).__name__, str(exc))
        return 1


if __name__ == "__main__":
    sys.exit(main())
