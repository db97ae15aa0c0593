"""Command-line front end.

Exit codes: 0 ok / soliton / classified, 1 usage or config error,
2 not a soliton, 3 borderline, 4 indeterminate, 5 numeric failure
(including a failed identity in ``verify``).
"""

import argparse
import sys
from pathlib import Path

from . import __version__
from .classifier import Family
from .config import load_config
from .corpus import BUILTINS
from .errors import ConfigError, ConfSolitonError
from .report import (
    SOLITON_EXIT,
    check_report,
    classify_report_dict,
    dumps,
    frames_report,
    plotdata_csv,
    verify_report,
)
from .tolerances import Tolerances

EXIT_OK, EXIT_USAGE, EXIT_NOT_SOLITON, EXIT_BORDERLINE, EXIT_INDETERMINATE, EXIT_NUMERIC = range(6)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _kv(text):
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    k, v = text.split("=", 1)
    return k.strip(), v.strip()


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="run configuration file")
    common.add_argument("--builtin", metavar="NAME", action="append",
                        help=f"built-in chart ({', '.join(BUILTINS)})")
    common.add_argument("--param", metavar="K=V", type=_kv, action="append", default=[],
                        help="chart parameter override")
    common.add_argument("--grid", metavar="R[,R...]", help="grid resolution per axis")
    common.add_argument("--tol", metavar="NAME=VALUE", type=_kv, action="append", default=[],
                        help="tolerance override")
    common.add_argument("--out", metavar="PATH", help="write the report (CSV for plotdata) here")
    common.add_argument("--json", action="store_true", help="print the JSON report to stdout")

    p = _Parser(prog="confsoliton", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("frames", parents=[common], help="per-point frame data")
    sub.add_parser("check", parents=[common], help="soliton check and identity battery")
    sub.add_parser("classify", parents=[common], help="decide the model family")
    sub.add_parser("verify", parents=[common], help="run every identity over the built-in corpus")
    sub.add_parser("plotdata", parents=[common], help="CSV of coordinates, lambda, phi, residual")
    return p


def _config(args):
    text = Path(args.config).read_text(encoding="utf-8") if args.config else None
    if args.builtin and len(args.builtin) > 1:
        raise ConfigError(f"'{args.command}' takes a single --builtin")
    builtin = args.builtin[0] if args.builtin else None
    return load_config(text, builtin=builtin, params=dict(args.param), grid=args.grid,
                       tols=dict(args.tol), out=args.out)


def _emit(args, out_path, text, summary):
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    if args.json:
        sys.stdout.write(text)
    else:
        for line in summary:
            print(line)


def _run(args):
    if args.command == "verify":
        tol = Tolerances().with_overrides(dict(args.tol))
        names = args.builtin
        if names:
            for n in names:
                if n not in BUILTINS:
                    raise ConfigError(f"unknown builtin {n!r}")
        rep = verify_report(names, tol)
        summary = [f"{i['status']:7s} {i['name']} ({i['charts_exercised']} charts)"
                   for i in rep["identities"]]
        _emit(args, args.out, dumps(rep), summary)
        return EXIT_OK if rep["passed"] else EXIT_NUMERIC

    cfg = _config(args)
    if args.command == "frames":
        rep = frames_report(cfg)
        summary = [f"{len(rep['records'])} points, {len(rep['excluded'])} excluded"]
        summary += [
            f"{r['point'].tolist()} eps_N={r['eps_N']:+d} alpha={r['alpha']:.6g} "
            f"lambda={r['lambda']:.6g} type={r['shape_type']}"
            for r in rep["records"]
        ]
        _emit(args, cfg.out, dumps(rep), summary)
        return EXIT_OK

    if args.command == "check":
        rep, sol = check_report(cfg)
        s = rep["soliton"]
        summary = [f"{s['verdict']} max residual {s['max_residual']:.3e} "
                   f"phi in [{s['phi_min']:.10g}, {s['phi_max']:.10g}]"
                   + (" (minimal)" if s["minimal"] else "")]
        summary += [f"{o['status']:7s} {o['name']}" for o in rep["oracles"]]
        _emit(args, cfg.out, dumps(rep), summary)
        return SOLITON_EXIT[sol.verdict]

    if args.command == "classify":
        rep, verdict = classify_report_dict(cfg)
        v = rep["verdict"]
        summary = [f"{v['tag']} {v['params']}"]
        summary += [f"  {c['name']} = {c['value']:.3e} (<= {c['threshold']:.1e})"
                    for c in v["certificates"]]
        summary += [f"  {d}" for d in v["diagnostics"]]
        _emit(args, cfg.out, dumps(rep), summary)
        return EXIT_INDETERMINATE if verdict.tag is Family.INDETERMINATE else EXIT_OK

    if args.command == "plotdata":
        text = plotdata_csv(cfg)
        if cfg.out:
            Path(cfg.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
        return EXIT_OK
    raise AssertionError(args.command)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except ConfigError as exc:
        where = f"{args.config}:" if args.config and exc.line is not None else ""
        print(f"confsoliton: config error: {where}{exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"confsoliton: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConfSolitonError as exc:
        print(f"confsoliton: numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
