"""Command line front end.

Every subcommand shares one flag set. Values come from, in order of
precedence: explicit flags, the --config file, built-in defaults.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .. import __version__
from ..exactnum.rbound import RBound
from .jobs import STATEMENTS, TASKS, JobError, JobSpec, load_map_source, read_config
from .runner import EXIT_ERROR, exit_status, run, write_jsonl

# flag name -> (type, built-in default, help)
FLAGS = {
    "map": (str, None, "map as inline JSON or a JSON file: {\"num\": [...], \"den\": [...]} "
                       "or {\"family\": ..., \"params\": {...}}"),
    "point": (str, None, "point: 'p/q', 'x:y[:...]' or 'inf'"),
    "poly": (str, None, "integer polynomial, comma-separated, constant term first"),
    "place": (str, None, "'inf' (default) or a prime"),
    "statement": (str, None, "inequality to certify: " + ", ".join(STATEMENTS)),
    "family": (str, "milnor2", "family swept by pcf-search: milnor2 or pm"),
    "lam": (str, None, "multiplier for per1-slice and kbound"),
    "lam0": (str, None, "multiplier at 0 in the Milnor family"),
    "lam_inf": (str, None, "multiplier at infinity in the Milnor family"),
    "prec_bits": (int, 128, "working precision in bits"),
    "tol": (float, 1e-6, "target enclosure width"),
    "k": (int, 1, "pushforward / iterate count in the certificates"),
    "n": (int, 1, "iterate for spectrum and iterate-identity"),
    "kmax": (int, 6, "largest k tried by witness searches"),
    "iters_cap": (int, 12, "orbit budget for exact preperiodicity tests"),
    "grid_num_cap": (int, 3, "grid numerator cap |p| <= P"),
    "grid_den_cap": (int, 2, "grid denominator cap 1 <= q <= Q"),
    "jobs": (int, 1, "worker processes for grid tasks"),
    "seed": (int, 0, "seed for randomized sample corpora (recorded, not used by fixed grids)"),
    "out": (str, None, "JSONL output path (default stdout)"),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    for name, (typ, _default, help_) in FLAGS.items():
        common.add_argument("--" + name.replace("_", "-"), dest=name, type=typ, default=None, help=help_)
    common.add_argument("--config", default=None, help="flat key = value file; flags win")
    common.add_argument("--timings", action="store_true", help="add per-record wall time (breaks byte identity)")
    common.add_argument("--tsv", default=None, help="optional TSV summary table path")

    parser = _Parser(prog="critheight", description="Certified canonical and critical heights of rational maps.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="task", required=True, parser_class=_Parser)
    helps = {
        "height": "Weil height of a point or of a map's coefficients",
        "canonical-height": "canonical height of a rational point",
        "green": "local Green's function g_f(z, 0) at one place",
        "crit-height": "critical height of a map",
        "verify": "certify one inequality",
        "sweep-quad": "critical heights and the quadratic bound over a Milnor grid",
        "per1-slice": "critical heights along a fixed-multiplier slice",
        "pcf-search": "exact PCF test over a family grid",
        "spectrum": "multiplier polynomial of the fixed points of f^n",
    }
    for task in TASKS:
        sub.add_parser(task, parents=[common], help=helps[task])
    return parser


def _coerce(name: str, raw: str):
    typ = FLAGS[name][0]
    try:
        return typ(raw)
    except ValueError as exc:
        raise JobError(f"config value for {name}: {exc}") from exc


def job_from_args(args: argparse.Namespace) -> JobSpec:
    cfg = read_config(args.config) if args.config else {}
    unknown = sorted(set(cfg) - set(FLAGS))
    if unknown:
        raise JobError(f"unknown config keys: {', '.join(unknown)}")
    values = {}
    for name, (_typ, default, _help) in FLAGS.items():
        val = getattr(args, name)
        if val is None and name in cfg:
            val = _coerce(name, cfg[name])
        values[name] = default if val is None else val
    if values["map"] is not None:
        values["map"] = load_map_source(values["map"])
    return JobSpec(task=args.task, **values).validate()


def _tsv(path: str, records) -> None:
    with open(path, "w") as fh:
        fh.write("index\tinputs\tverdicts\tfirst_height_lo\tfirst_height_hi\terror\n")
        for r in records:
            lo = hi = ""
            if r.heights:
                b = RBound.from_json(r.heights[0]["value"])
                lo, hi = f"{float(b.lo):.12g}", f"{float(b.hi):.12g}"
            fh.write(f"{r.index}\t{json.dumps(r.inputs, sort_keys=True)}\t{','.join(r.verdicts())}"
                     f"\t{lo}\t{hi}\t{r.error or ''}\n")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        job = job_from_args(args)
    except (JobError, OSError) as exc:
        print(f"critheight: {exc}", file=sys.stderr)
        return EXIT_ERROR
    try:
        if job.out:
            Path(job.out).parent.mkdir(parents=True, exist_ok=True)
            with open(job.out, "w") as fh:
                records = write_jsonl(job, run(job), fh, args.timings)
        else:
            records = write_jsonl(job, run(job), sys.stdout, args.timings)
    except (JobError, ArithmeticError, ValueError) as exc:
        print(f"critheight: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.tsv:
        _tsv(args.tsv, records)
    status = exit_status(records)
    print(f"critheight {job.task}: {len(records)} record(s), exit {status}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
