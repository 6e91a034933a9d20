"""Command-line entry point.

Subcommands expose each pipeline stage over the bundled corpus or a
user-supplied game log.  Exit codes: 0 success, 1 usage error, 2 data
error.  ``--out`` (or the ``RARE_EVENT_OUT`` environment variable)
redirects file-producing commands into a directory; otherwise results
go to stdout.  All randomness flows from ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .compare import anova_oneway, tukey_hsd, tukey_to_csv
from .counting import (
    CountingConfig,
    compute_iats,
    detect_events,
    events_to_csv,
    iats_to_csv,
    load_iats,
)
from .errors import DataError, InsufficientDataError
from .eras import default_eras, era_summary_csv, load_eras, partition_and_fit
from .gof import gof_suite, mc_pvalue
from .ingest import load_bundled_corpus, parse_game_log, validate_schedule
from .model import fit_mle
from .predict import predict as make_prediction
from .report import DEFAULT_SEED, AnalysisConfig, run_full_analysis, write_run


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage failures exit 1 instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_corpus_options(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--corpus",
        metavar="FILE",
        help="game-log CSV (default: the bundled reference corpus)",
    )
    p.add_argument(
        "--threshold",
        type=int,
        default=20,
        metavar="RUNS",
        help="run threshold defining an event (default 20)",
    )
    p.add_argument(
        "--eras",
        dest="era_file",
        metavar="FILE",
        help="era definition CSV name,start_year,end_year (default: built-in)",
    )
    p.add_argument(
        "--out",
        default=os.environ.get("RARE_EVENT_OUT"),
        metavar="DIR",
        help="write results into DIR instead of stdout "
        "(default: $RARE_EVENT_OUT if set)",
    )


def build_parser() -> _Parser:
    parser = _Parser(
        prog="slugfest",
        description="Waiting-time analysis of extreme-offense baseball games.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("ingest", parents=[], help="parse and validate a game log")
    _add_corpus_options(p)

    p = sub.add_parser("events", help="detect events and print their indices")
    _add_corpus_options(p)

    p = sub.add_parser("iat", help="emit the gap series between events")
    _add_corpus_options(p)

    p = sub.add_parser("fit", help="fit the exponential rate")
    _add_corpus_options(p)
    p.add_argument("--era", metavar="NAME", help="fit one era instead of the full stream")
    p.add_argument("--iats", dest="iat_file", metavar="FILE", help="fit a gap CSV directly")

    p = sub.add_parser("gof", help="goodness-of-fit tests against the fit")
    _add_corpus_options(p)
    p.add_argument("--era", metavar="NAME", help="test one era instead of the full stream")
    p.add_argument("--iats", dest="iat_file", metavar="FILE", help="test a gap CSV directly")
    p.add_argument(
        "--test",
        choices=("ks", "ad", "chisq", "all"),
        default="all",
        help="which test to run (default all)",
    )
    p.add_argument("--bins", type=int, default=10, help="chi-squared cell count")
    p.add_argument(
        "--mc",
        type=int,
        default=0,
        metavar="N",
        help="add parametric-bootstrap p-values with N replicates",
    )
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    p = sub.add_parser("eras", help="per-era summary table")
    _add_corpus_options(p)
    p.add_argument(
        "--boundary-gap",
        choices=("later", "drop"),
        default="later",
        help="era owning a gap that spans a boundary (default later)",
    )

    p = sub.add_parser("anova", help="one-way ANOVA of gaps by era")
    _add_corpus_options(p)

    p = sub.add_parser("tukey", help="family-wise pairwise era intervals")
    _add_corpus_options(p)
    p.add_argument("--level", type=float, default=0.95, help="family-wise level")

    p = sub.add_parser("predict", help="probability of an event within a horizon")
    _add_corpus_options(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--rate", type=float, help="rate per game")
    group.add_argument("--era", metavar="NAME", help="use the fitted rate of this era")
    p.add_argument("--horizon", type=float, required=True, metavar="GAMES")
    p.add_argument("--elapsed", type=float, default=0.0, metavar="GAMES")

    p = sub.add_parser("report", help="full analysis run into an output directory")
    _add_corpus_options(p)
    p.add_argument("--bins", type=int, default=10)
    p.add_argument("--mc", type=int, default=0, metavar="N")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument(
        "--boundary-gap", choices=("later", "drop"), default="later",
        help="era owning a gap that spans a boundary (default later)",
    )

    return parser


def _load_records(args):
    if args.corpus:
        return list(parse_game_log(args.corpus))
    return list(load_bundled_corpus())


def _counting_config(args) -> CountingConfig:
    return CountingConfig(threshold=args.threshold)


def _era_list(args):
    return load_eras(args.era_file) if args.era_file else default_eras()


def _events(args):
    return detect_events(_load_records(args), _counting_config(args))


def _era_fit(args, name: str):
    fits = partition_and_fit(_events(args), _era_list(args))
    if name not in fits:
        raise DataError(f"unknown era {name!r}; known: {', '.join(fits)}")
    ef = fits[name]
    if ef.fit is None:
        raise InsufficientDataError(f"era {name!r} has no gaps to fit")
    return ef


def _emit(args, filename: str, text: str) -> None:
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        path = outdir / filename
        path.write_text(text, encoding="utf-8")
        print(path)
    else:
        sys.stdout.write(text)


def _series_for(args):
    """The gap series selected by --iats / --era / the full stream."""
    if getattr(args, "iat_file", None):
        return load_iats(args.iat_file)
    if getattr(args, "era", None):
        return _era_fit(args, args.era).iats
    return compute_iats(_events(args))


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------

def _cmd_ingest(args) -> int:
    records = _load_records(args)
    if args.corpus:
        log = parse_game_log(args.corpus)
        for diag in log.diagnostics:
            print(f"skipped {diag}", file=sys.stderr)
    report = validate_schedule(records)
    lines = ["season,games"]
    lines += [f"{year},{games}" for year, games in report.season_totals]
    text = "\n".join(lines) + "\n"
    if report.anomalies:
        text += "".join(f"anomaly: {a}\n" for a in report.anomalies)
    _emit(args, "schedule.csv", text)
    return 0


def _cmd_events(args) -> int:
    _emit(args, "events.csv", events_to_csv(_events(args)))
    return 0


def _cmd_iat(args) -> int:
    _emit(args, "iats.csv", iats_to_csv(compute_iats(_events(args))))
    return 0


def _cmd_fit(args) -> int:
    fit = fit_mle(_series_for(args))
    sd = "" if fit.sample_sd is None else f"{fit.sample_sd:.9g}"
    _emit(
        args,
        "fit.csv",
        "n,mean,sd,rate\n" f"{fit.n},{fit.sample_mean:.9g},{sd},{fit.rate:.9g}\n",
    )
    return 0


def _cmd_gof(args) -> int:
    series = _series_for(args)
    fit = fit_mle(series)
    reports = gof_suite(series, fit, bins=args.bins)
    if args.test != "all":
        reports = [r for r in reports if r.test_name == args.test]
    lines = [r.to_json_line() for r in reports]
    if args.mc:
        for test in ("ks", "ad") if args.test in ("all",) else [args.test]:
            if test == "chisq":
                continue
            p = mc_pvalue(series, test=test, replications=args.mc, seed=args.seed)
            shown = p if p > 0 else f"< {1 / args.mc:.9g}"
            lines.append(
                json.dumps(
                    {"test": f"{test}-bootstrap", "n": len(series), "p": shown}
                )
            )
    _emit(args, "gof.jsonl", "\n".join(lines) + "\n")
    return 0


def _cmd_eras(args) -> int:
    fits = partition_and_fit(
        _events(args), _era_list(args), boundary_gap=args.boundary_gap
    )
    _emit(args, "era_summary.csv", era_summary_csv(fits))
    return 0


def _groups(args):
    fits = partition_and_fit(_events(args), _era_list(args))
    return {name: ef.iats for name, ef in fits.items() if len(ef.iats) > 0}


def _cmd_anova(args) -> int:
    report = anova_oneway(_groups(args))
    _emit(args, "anova.json", json.dumps(report.to_json_dict(), sort_keys=True) + "\n")
    return 0


def _cmd_tukey(args) -> int:
    intervals = tukey_hsd(_groups(args), family_level=args.level)
    _emit(args, "tukey.csv", tukey_to_csv(intervals))
    return 0


def _cmd_predict(args) -> int:
    rate = args.rate if args.rate is not None else _era_fit(args, args.era).fit.rate
    prediction = make_prediction(rate, args.horizon, args.elapsed)
    print(
        f"P(event within {prediction.horizon:g} games) = "
        f"{prediction.probability:.4g}"
    )
    return 0


def _cmd_report(args) -> int:
    outdir = args.out
    if not outdir:
        raise DataError("report needs --out DIR (or RARE_EVENT_OUT)")
    config = AnalysisConfig(
        threshold=args.threshold,
        eras=load_eras(args.era_file) if args.era_file else None,
        boundary_gap=args.boundary_gap,
        bins=args.bins,
        mc_replications=args.mc,
        seed=args.seed,
    )
    run = run_full_analysis(_load_records(args), config)
    write_run(run, outdir)
    print(Path(outdir) / "manifest.json")
    return 0


_HANDLERS = {
    "ingest": _cmd_ingest,
    "events": _cmd_events,
    "iat": _cmd_iat,
    "fit": _cmd_fit,
    "gof": _cmd_gof,
    "eras": _cmd_eras,
    "anova": _cmd_anova,
    "tukey": _cmd_tukey,
    "predict": _cmd_predict,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except DataError as exc:
        print(f"slugfest: data error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"slugfest: invalid argument: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"slugfest: i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
