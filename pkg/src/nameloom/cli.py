"""Command-line entry point.

Subcommands: build-index, recover, minify, evaluate. Machine output (JSON,
CSV, rewritten source) goes to stdout or to -o targets only; diagnostics go
to stderr. Exit codes are stable:

    0   success
    1   runtime failure (unparseable input, unreadable index)
    2   missing input path
    3   empty corpus
    64  usage error (bad flag or flag value)

The default index directory may be supplied via the NAME_LOOM_INDEX
environment variable. Identical invocations on identical inputs produce
byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .errors import BuildError, EmptyTestSet, LoadError, NameloomError, ParseError
from .evaluation import (ablation_csv, cross_validate, evaluate,
                         sensitivity_sweep, sweep_csv, SelfRecovery)
from .index import build_index, load_index, save_index
from .minify import alpha_minify
from .recovery import RecoveryConfig, recover_file

EXIT_RUNTIME = 1
EXIT_MISSING = 2
EXIT_EMPTY = 3
EXIT_USAGE = 64

log = logging.getLogger("nameloom")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    defaults = RecoveryConfig()
    group = parser.add_argument_group("recovery parameters")
    group.add_argument("--phi", type=float, default=defaults.phi,
                       help="graph matching threshold")
    group.add_argument("--beam", type=int, default=defaults.beam_k,
                       help="beam width")
    group.add_argument("--assoc-j", type=int, default=defaults.assoc_j,
                       help="co-occurrence subset size")
    group.add_argument("--alpha", type=float, default=defaults.alpha,
                       help="single-variable score weight")
    group.add_argument("--beta", type=float, default=defaults.beta,
                       help="task score weight")
    group.add_argument("--gamma", type=float, default=defaults.gamma,
                       help="co-occurrence score weight in beam ranking")
    group.add_argument("--theta", type=float, default=defaults.theta,
                       help="mean candidate-score weight in beam ranking")
    group.add_argument("--cmax", type=int, default=defaults.c_max,
                       help="per-variable candidate cap")
    group.add_argument("--tsc", choices=("full", "token"),
                       default=defaults.tsc_mode,
                       help="task context mode: whole function names or tokens")
    group.add_argument("--seed", type=int, default=defaults.seed,
                       help="seed for the deterministic random fallback")


def _config_from(args: argparse.Namespace) -> RecoveryConfig:
    config = RecoveryConfig(
        phi=args.phi, beam_k=args.beam, assoc_j=args.assoc_j,
        alpha=args.alpha, beta=args.beta, gamma=args.gamma, theta=args.theta,
        c_max=args.cmax, tsc_mode=args.tsc, seed=args.seed,
    )
    try:
        config.validate()
    except ValueError as exc:
        print(f"nameloom: error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE) from None
    return config


def _load_index_arg(args: argparse.Namespace):
    index_dir = args.index or os.environ.get("NAME_LOOM_INDEX")
    if not index_dir:
        print("nameloom: error: no index given (--index or NAME_LOOM_INDEX)",
              file=sys.stderr)
        raise SystemExit(EXIT_USAGE)
    if not Path(index_dir).is_dir():
        print(f"nameloom: error: index directory not found: {index_dir}",
              file=sys.stderr)
        raise SystemExit(EXIT_MISSING)
    try:
        return load_index(index_dir)
    except LoadError as exc:
        print(f"nameloom: error: cannot load index: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_RUNTIME) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="nameloom",
        description="Recover meaningful variable names in minified "
                    "JavaScript from a code corpus.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version",
                        version=f"nameloom {__version__}")
    parser.add_argument("--verbose", action="store_true",
                        help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser(
        "build-index", help="index a corpus of .js files",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p_build.add_argument("corpus", help="directory of non-minified .js files")
    p_build.add_argument("-o", "--out", required=True,
                         help="output index directory")
    p_build.add_argument("--jobs", type=int, default=1,
                         help="parallel parser processes")

    p_recover = sub.add_parser(
        "recover", help="recover names in a minified file",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p_recover.add_argument("file", help="minified .js input")
    p_recover.add_argument("--index", help="index directory "
                           "(default: $NAME_LOOM_INDEX)")
    p_recover.add_argument("--emit", choices=("js", "json", "both"),
                           default=None,
                           help="what to write (default: both with -o, "
                                "json otherwise)")
    p_recover.add_argument("-o", "--out",
                           help="output path; with --emit both, writes "
                                "<out> and <out>.report.json")
    _add_config_flags(p_recover)

    p_minify = sub.add_parser(
        "minify", help="alpha-rename locals to short opaque names",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p_minify.add_argument("file", help=".js input")
    p_minify.add_argument("--seed", type=int, default=0,
                          help="rename-order seed")
    p_minify.add_argument("-o", "--out", help="minified output path "
                          "(default: stdout)")
    p_minify.add_argument("--truth", help="write the ground-truth map here")
    p_minify.add_argument("--compact", action="store_true",
                          help="also strip comments and collapse whitespace")

    p_eval = sub.add_parser(
        "evaluate", help="measure recovery accuracy on a corpus",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p_eval.add_argument("corpus", help="corpus directory")
    p_eval.add_argument("--index", help="index directory for self-recovery "
                        "(default: $NAME_LOOM_INDEX, or built on the fly)")
    p_eval.add_argument("--folds", type=int,
                        help="run N-fold cross-validation instead")
    p_eval.add_argument("--ablate", action="store_true",
                        help="also report every context combination")
    p_eval.add_argument("--sweep", nargs=2, metavar=("PARAM", "GRID"),
                        help="sweep one parameter over GRID "
                             "(comma list or start:stop:step)")
    p_eval.add_argument("--all-vars", action="store_true",
                        help="include unminified globals in the denominator")
    p_eval.add_argument("--jobs", type=int, default=1,
                        help="parallel parser processes for index builds")
    p_eval.add_argument("-o", "--out",
                        help="directory for report.json, CSVs and figures")
    _add_config_flags(p_eval)

    return parser


def _cmd_build_index(args) -> int:
    corpus = Path(args.corpus)
    if not corpus.is_dir():
        print(f"nameloom: error: corpus directory not found: {corpus}",
              file=sys.stderr)
        return EXIT_MISSING
    try:
        index = build_index(corpus, jobs=args.jobs)
    except BuildError as exc:
        print(f"nameloom: error: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    save_index(index, args.out)
    meta = index.meta
    print(f"indexed {meta['files_indexed']} files "
          f"({meta['duplicate_files']} duplicates, "
          f"{len(meta['parse_failures'])} parse failures)")
    print(f"functions:            {meta['functions']}")
    print(f"relation graphs:      {meta['graphs']}")
    print(f"unique names:         {meta['unique_variable_names']}")
    print(f"mean edges per graph: {meta['mean_edges_per_graph']}")
    print(f"graphs per function:  {meta['mean_graphs_per_function']}")
    print(f"written to {args.out}")
    return 0


def _cmd_recover(args) -> int:
    src_path = Path(args.file)
    if not src_path.is_file():
        print(f"nameloom: error: input not found: {src_path}", file=sys.stderr)
        return EXIT_MISSING
    config = _config_from(args)
    index = _load_index_arg(args)
    emit = args.emit or ("both" if args.out else "json")
    if emit == "both" and not args.out:
        print("nameloom: error: --emit both requires -o", file=sys.stderr)
        return EXIT_USAGE
    try:
        rewritten, report = recover_file(
            src_path.read_text(encoding="utf-8", errors="replace"),
            index, config, path=str(src_path))
    except ParseError as exc:
        print(f"nameloom: error: {src_path}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    report_json = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if emit == "json":
        _write_or_print(args.out, report_json)
    elif emit == "js":
        _write_or_print(args.out, rewritten)
    else:
        out = Path(args.out)
        out.write_text(rewritten)
        Path(str(out) + ".report.json").write_text(report_json)
        log.info("wrote %s and %s.report.json", out, out)
    return 0


def _write_or_print(out: str | None, text: str) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_minify(args) -> int:
    src_path = Path(args.file)
    if not src_path.is_file():
        print(f"nameloom: error: input not found: {src_path}", file=sys.stderr)
        return EXIT_MISSING
    try:
        minified, truth = alpha_minify(
            src_path.read_text(encoding="utf-8", errors="replace"),
            seed=args.seed, path=str(src_path), compact=args.compact)
    except ParseError as exc:
        print(f"nameloom: error: {src_path}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    _write_or_print(args.out, minified)
    if args.truth:
        Path(args.truth).write_text(
            json.dumps(truth, indent=2, sort_keys=True) + "\n")
    return 0


def _parse_grid(text: str) -> list:
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("grid range must be start:stop:step")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("grid step must be positive")
        out = []
        value = start
        while value <= stop + 1e-9:
            out.append(_normalize(round(value, 10)))
            value += step
        return out
    return [_normalize(float(p)) for p in text.split(",") if p]


def _normalize(value: float):
    return int(value) if float(value).is_integer() else value


def _cmd_evaluate(args) -> int:
    corpus = Path(args.corpus)
    if not corpus.is_dir():
        print(f"nameloom: error: corpus directory not found: {corpus}",
              file=sys.stderr)
        return EXIT_MISSING
    config = _config_from(args)
    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)

    try:
        if args.sweep:
            parameter, grid_text = args.sweep
            try:
                grid = _parse_grid(grid_text)
            except ValueError as exc:
                print(f"nameloom: error: {exc}", file=sys.stderr)
                return EXIT_USAGE
            rows = sensitivity_sweep(corpus, parameter, grid, config)
            csv_text = sweep_csv(rows)
            sys.stdout.write(csv_text)
            if out_dir:
                csv_path = out_dir / f"sweep_{parameter}.csv"
                csv_path.write_text(csv_text)
                from .plots import render_sweep
                render_sweep(rows, out_dir / f"sweep_{parameter}.png")
                log.info("wrote %s and figure", csv_path)
            return 0

        if args.folds:
            reports = cross_validate(corpus, args.folds, config,
                                     jobs=args.jobs, all_vars=args.all_vars)
            total = sum(r.total for r in reports)
            hits = sum(r.hits for r in reports)
            for report in reports:
                print(f"{report.split}: accuracy {report.accuracy:.4f} "
                      f"({report.hits}/{report.total})")
            print(f"mean accuracy: {hits / total:.4f}" if total else "no variables")
            if out_dir:
                payload = [r.payload() for r in reports]
                (out_dir / "report.json").write_text(
                    json.dumps(payload, indent=2, sort_keys=True) + "\n")
            return 0

        if args.index or os.environ.get("NAME_LOOM_INDEX"):
            index = _load_index_arg(args)
        else:
            log.info("no index given; building from the corpus")
            index = build_index(corpus, jobs=args.jobs)
        report = evaluate(corpus, index, config, split=SelfRecovery(),
                          ablate=args.ablate, all_vars=args.all_vars)
        sys.stdout.write(report.to_text())
        if out_dir:
            (out_dir / "report.json").write_text(report.to_json())
            if report.ablation is not None:
                (out_dir / "ablation.csv").write_text(
                    ablation_csv(report.ablation))
                from .plots import render_ablation
                render_ablation(report.ablation, out_dir / "ablation.png")
        return 0
    except BuildError as exc:
        print(f"nameloom: error: {exc}", file=sys.stderr)
        return EXIT_EMPTY
    except EmptyTestSet as exc:
        print(f"nameloom: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


def main(argv: list[str] | None = None) -> int:
    """Run the CLI; always returns an exit code (never raises SystemExit)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:       # --help/--version or usage error
        return int(exc.code or 0)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="nameloom: %(message)s",
    )
    handlers = {
        "build-index": _cmd_build_index,
        "recover": _cmd_recover,
        "minify": _cmd_minify,
        "evaluate": _cmd_evaluate,
    }
    try:
        return handlers[args.command](args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except NameloomError as exc:
        print(f"nameloom: error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
