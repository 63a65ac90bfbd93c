"""Command-line harness.

``bornkit run`` executes every task in a config and writes the JSON
report; the per-kind subcommands execute just their slice of the config
(or a single ad-hoc task built from object references on the command
line).  ``bornkit report`` pretty-prints a report and can render figures
and a CSV summary next to it.

Exit codes: 0 everything succeeded and verified, 1 config or validation
error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ExperimentConfig, Task, load_config
from .errors import BornkitError, ParseError
from .serialize import dumps_canonical
from .tasks import Overrides, report_exit_code, run_tasks

AD_HOC_REFS = {
    "validate": ("state", "measure", "detector", "smatrix"),
    "rates": ("measure", "state"),
    "sample": ("detector", "state"),
    "verify-born": ("detector", "state"),
    "spectral": ("operator",),
    "dilate": ("measure", "state"),
    "tomo": ("calibration",),
    "maxent": ("problem",),
    "scatter": ("smatrix", "psi-in", "psi-out", "projector"),
}


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("config", help="experiment config (JSON)")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--seed", type=int, default=None, help="override every task seed")
    parser.add_argument("--n", type=int, default=None, help="override every sample size")
    parser.add_argument("--tol", type=float, default=None, help="override task tolerances")
    parser.add_argument("--parallel", action="store_true", help="run independent tasks concurrently")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bornkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run all configured tasks and write a report")
    _add_common(run)
    run.add_argument("-o", "--output", default=None, help="report path (default stdout)")

    for kind, refs in AD_HOC_REFS.items():
        p = sub.add_parser(kind, help=f"run {kind} tasks")
        if kind == "verify-born":
            p.add_argument("mode", choices=("povm", "c"), help="frequency or expectation check")
        _add_common(p)
        for ref in refs:
            p.add_argument(f"--{ref}", default=None, help=f"{ref} object name")
        if kind in ("sample", "verify-born"):
            p.add_argument("--k-sigma", type=float, default=None)
        if kind == "dilate":
            p.add_argument("--trim", action="store_true")

    rep = sub.add_parser("report", help="pretty-print a report; optionally render figures")
    rep.add_argument("report", help="report file (JSON)")
    rep.add_argument("--out-dir", default=None, help="write summary.csv and figures here")
    rep.add_argument("--json", action="store_true", help="re-emit canonical JSON")
    return parser


def _select_tasks(config: ExperimentConfig, args) -> list[Task]:
    """Tasks for a per-kind subcommand: ad hoc if refs were given, else from config."""
    kind = args.command
    if kind == "verify-born":
        kind = f"verify-born-{args.mode}"
    given = {}
    for ref in AD_HOC_REFS[args.command]:
        value = getattr(args, ref.replace("-", "_"), None)
        if value is not None:
            given[ref.replace("-", "_")] = value
    if given:
        params = dict(given)
        if getattr(args, "k_sigma", None) is not None:
            params["k_sigma"] = args.k_sigma
        if getattr(args, "trim", False):
            params["trim"] = True
        task = Task(kind=kind, name=f"{kind}-cli", params=params)
        from .config import _check_references

        _check_references(config.objects, [task])
        return [task]
    selected = [t for t in config.tasks if t.kind == kind]
    if not selected:
        raise ParseError(f"config defines no {kind!r} tasks and no object references were given")
    return selected


def _print_pretty(report: dict, stream) -> None:
    print(f"toolkit {report['toolkit_version']}  config {report['config_hash'][:19]}...", file=stream)
    for entry in report["tasks"]:
        status = entry["status"]
        if status == "error":
            line = f"  {entry['name']:<24} {entry['kind']:<18} ERROR {entry['error']['type']}: {entry['error']['message']}"
        else:
            passed = entry.get("passed")
            flag = "" if passed is None else ("  pass" if passed else "  FAIL")
            detail = _detail(entry)
            line = f"  {entry['name']:<24} {entry['kind']:<18} ok{flag}{detail}"
        print(line, file=stream)


def _detail(entry: dict) -> str:
    result = entry.get("result", {})
    if "rates" in result:
        return "  rates=" + _fmt_vector(result["rates"])
    if "distribution" in result:
        return "  p=" + _fmt_vector(result["distribution"])
    if "probability" in result:
        return f"  p={result['probability']:.6g}"
    if "eigenvalues" in result:
        values = [complex(p[0], p[1]) for p in result["eigenvalues"]]
        return "  eigenvalues=[" + ", ".join(_fmt_complex(v) for v in values) + "]"
    if "achieved" in result:
        return "  achieved=" + _fmt_vector(result["achieved"])
    if "fit_residual" in result:
        return f"  residual={result['fit_residual']:.3g}"
    if "event_log" in result:
        return f"  counts={result['event_log']['counts']}"
    return ""


def _fmt_vector(values) -> str:
    return "[" + ", ".join(f"{float(v):.6g}" for v in values) + "]"


def _fmt_complex(z: complex) -> str:
    if abs(z.imag) < 1e-12:
        return f"{z.real:.6g}"
    return f"{z.real:.6g}{z.imag:+.6g}i"


def _cmd_report(args) -> int:
    try:
        text = Path(args.report).read_text(encoding="utf-8")
        report = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read report: {exc}", file=sys.stderr)
        return 1
    if args.out_dir:
        from .figures import render_report

        written = render_report(report, args.out_dir)
        print(f"wrote {', '.join(written)} to {args.out_dir}", file=sys.stderr)
    if args.json:
        sys.stdout.write(dumps_canonical(report))
    else:
        _print_pretty(report, sys.stdout)
    return report_exit_code(report)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "report":
        return _cmd_report(args)

    try:
        config = load_config(args.config)
        if args.command == "run":
            tasks = None
        else:
            tasks = _select_tasks(config, args)
    except BornkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    overrides = Overrides(seed=args.seed, n=args.n, tol=args.tol)
    report = run_tasks(config, overrides, tasks=tasks, parallel=args.parallel)

    if args.command == "run" and args.output:
        Path(args.output).write_text(dumps_canonical(report), encoding="utf-8")
    elif args.json or args.command == "run":
        sys.stdout.write(dumps_canonical(report))
    else:
        _print_pretty(report, sys.stdout)
    return report_exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
