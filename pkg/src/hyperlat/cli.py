"""Command line entry point: ``hyperlat {gen,cheeger,pairs,perc,bounds,verify}``.

Exit status: 0 success, 1 a theorem-backed check failed, 2 usage error,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

from .errors import BudgetExceeded, HyperlatError
from .planar_map import SCHEMA_VERSION, PlanarMap

DEFAULT_SEED = 20240607

EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _write(path, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def load_patch(path):
    """A saved ball (with layers) or a bare planar map."""
    from .tessellation import LatticeBall

    data = json.loads(Path(path).read_text())
    if "layers" in data and "degree" in data:
        return LatticeBall.from_dict(data)
    return PlanarMap.from_dict(data)


def _patch_from_args(args):
    from .tessellation import build_ball

    triple = (args.degree, args.face_degree, args.radius)
    if args.patch is not None and any(x is not None for x in triple):
        raise UsageError("give either --patch or --degree/--face-degree/--radius, not both")
    if args.patch is not None:
        return load_patch(args.patch)
    if any(x is None for x in triple):
        raise UsageError("need --patch or all of --degree, --face-degree, --radius")
    return build_ball(*triple)


class UsageError(Exception):
    pass


def _add_input(p) -> None:
    p.add_argument("--patch", help="ball or map JSON written by `gen`")
    p.add_argument("--degree", type=int)
    p.add_argument("--face-degree", type=int, choices=(3, 4))
    p.add_argument("--radius", type=int)


# -- subcommands ---------------------------------------------------------------


def cmd_gen(args) -> int:
    from .tessellation import build_ball

    ball = build_ball(args.degree, args.face_degree, args.radius, budget=args.budget)
    _write(args.out, json.dumps(ball.to_dict()) + "\n")
    return 0


def cmd_cheeger(args) -> int:
    from .isoperimetry import cheeger_sequence

    ball = _patch_from_args(args)
    if not hasattr(ball, "layer_sizes"):
        raise UsageError("cheeger needs a lattice ball (saved by `gen`)")
    rows = cheeger_sequence(ball).table()
    if args.format == "json":
        _write(args.out, _json({"schema_version": SCHEMA_VERSION, "rows": rows}))
        return 0
    cols = ["n", "ball", "boundary", "ratio", "target", "abs_err"]
    lines = [",".join(cols)]
    for r in rows:
        lines.append(",".join(repr(r[c]) if isinstance(r[c], float) else str(r[c]) for c in cols))
    _write(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_bounds(args) -> int:
    from .isoperimetry import threshold_bounds

    tc = threshold_bounds(args.degree, args.face_degree, args.beta)
    out = {"schema_version": SCHEMA_VERSION}
    out.update(tc.to_dict())
    _write(args.out, _json(out))
    return 0


def cmd_pairs(args) -> int:
    from .interfaces import census_violations, enumerate_pairs, regime_parameter

    patch = _patch_from_args(args)
    host = patch if isinstance(patch, PlanarMap) else patch.map
    d = regime_parameter(host, args.regime)
    census = enumerate_pairs(patch, args.max_cluster, engine=args.engine)
    violations = census_violations(census, args.regime, d)
    out = census.to_dict(violations)
    out["regime"] = args.regime
    _write(args.out, _json(out))
    return EXIT_VIOLATION if violations else 0


def cmd_perc(args) -> int:
    from .percolation import set_threads, sweep

    set_threads(args.threads)
    ball = _patch_from_args(args)
    res = sweep(ball, sorted(args.p), args.trials, args.seed, args.radius_checkpoints)
    if args.format == "json":
        _write(args.out, _json({**res.meta, "rows": [r.as_dict() for r in res.rows]}))
    else:
        _write(args.out, res.to_csv())
    return 0


def _params(pairs: list[str]) -> dict:
    out = {}
    for item in pairs:
        if "=" not in item:
            raise UsageError(f"--params entries look like key=value, got {item!r}")
        key, value = item.split("=", 1)
        if key == "ps":
            out[key] = tuple(_floats(value))
        elif key == "regime":
            out[key] = value
        else:
            try:
                out[key] = int(value)
            except ValueError:
                raise UsageError(f"parameter {key} expects an integer") from None
    return out


def cmd_verify(args) -> int:
    from . import verify
    from .percolation import set_threads

    set_threads(args.threads)
    params = _params(args.params)
    suites = {"disc": verify.verify_disc, "pairs": verify.verify_pairs, "perc-oracle": verify.verify_perc_oracle}
    if args.suite == "perc-oracle":
        params.setdefault("seed", args.seed)
    try:
        report = suites[args.suite](**params)
    except TypeError as exc:
        raise UsageError(str(exc)) from None
    report["schema_version"] = SCHEMA_VERSION
    text = _json(report)
    _write(args.out, text)
    if report["violations"]:
        if args.dump:
            Path(args.dump).mkdir(parents=True, exist_ok=True)
            (Path(args.dump) / f"violations-{args.suite}.json").write_text(_json(report["violations"]))
        return EXIT_VIOLATION
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hyperlat", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="build a ball of H_{d,3} or H_{d,4}")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--face-degree", type=int, required=True, choices=(3, 4))
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--budget", type=int, help="vertex budget (default: HYPERLAT_BUDGET or 5e6)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("cheeger", help="boundary-to-volume ratios of the balls B_n")
    _add_input(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_cheeger)

    p = sub.add_parser("bounds", help="percolation-threshold bounds")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--face-degree", type=int, required=True, choices=(3, 4))
    p.add_argument("--beta", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("pairs", help="census of outer interfaces and boundaries")
    _add_input(p)
    p.add_argument("--max-cluster", type=int, required=True)
    p.add_argument("--regime", choices=("deg6", "hyper", "quad"), required=True)
    p.add_argument("--engine", choices=("compiled", "python"), default="compiled")
    p.add_argument("--out")
    p.set_defaults(func=cmd_pairs)

    p = sub.add_parser("perc", help="connection-probability sweep")
    _add_input(p)
    p.add_argument("--p", type=_floats, required=True, help="comma-separated intensities")
    p.add_argument("--radius-checkpoints", type=_ints)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_perc)

    p = sub.add_parser("verify", help="run a verification suite; exit 1 on any violation")
    p.add_argument("--suite", choices=("disc", "pairs", "perc-oracle"), required=True)
    p.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--threads", type=int)
    p.add_argument("--dump", help="directory for violation fixtures")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"hyperlat: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, HyperlatError, ValueError, OSError) as exc:
        print(f"hyperlat: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
