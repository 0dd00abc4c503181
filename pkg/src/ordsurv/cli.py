"""``ordsurv`` command line.

Exit codes: 0 success, 1 usage error, 2 data error, 3 statistical degeneracy.
"""

from __future__ import annotations

import argparse
import itertools
import os
import sys
from pathlib import Path

from .agreement import (
    Scale,
    TiePolicy,
    absolute_agreement_curve,
    ordinal_to_observations,
    signed_agreement_groups,
)
from .curves import detect_crossings, km_estimate, prop_at_least, split_by_group
from .dataio import ResultReport, curve_summary, parse_grouped_csv, parse_paired_csv, write_report_json
from .errors import DataError, StatisticalError
from .plot import render_step_svg
from .ranktests import WeightScheme, permutation_pvalue, simulate_null_calibration, weighted_rank_test

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_STAT = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _alpha(text):
    try:
        a = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid alpha {text!r}") from None
    if not 0.0 < a < 1.0:
        raise argparse.ArgumentTypeError("alpha must lie in (0, 1)")
    return a


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("seed must be nonnegative")
    return v


def _scale(text):
    try:
        return Scale.parse(text)
    except DataError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ordsurv", description="Survival-curve comparison of ordinal data.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def outputs(p, svg=True):
        p.add_argument("--json", metavar="PATH", help="write the JSON report here instead of stdout")
        if svg:
            p.add_argument("--svg", metavar="PATH", help="write a step-curve figure")
            p.add_argument("--title", default="", help="figure title")

    def testing(p):
        p.add_argument("--test", default="tarone-ware", choices=[s.value for s in WeightScheme])
        p.add_argument("--alpha", type=_alpha, default=0.05)
        p.add_argument("--permutation", default="none", choices=["none", "exhaustive", "monte-carlo"])
        p.add_argument("--reps", type=_positive, default=10_000, help="Monte Carlo permutations")
        p.add_argument("--seed", type=_seed, default=0)

    km = sub.add_parser("km", help="Kaplan-Meier curve per group")
    km.add_argument("--input", required=True, help="grouped CSV: id,group,score[,event]")
    km.add_argument("--scale", type=_scale, help="ordinal scale bounds MIN:MAX")
    outputs(km)

    cmp_ = sub.add_parser("compare", help="weighted rank test between groups")
    cmp_.add_argument("--input", required=True, help="grouped CSV: id,group,score[,event]")
    cmp_.add_argument("--scale", type=_scale)
    testing(cmp_)
    outputs(cmp_)

    agr = sub.add_parser("agreement", help="survival-agreement analysis of paired scores")
    agr.add_argument("--input", required=True, help="paired CSV: id,a,b")
    agr.add_argument("--mode", default="absolute", choices=["absolute", "signed"])
    agr.add_argument("--ties", default="exclude", choices=[p.value for p in TiePolicy])
    agr.add_argument("--scale", type=_scale)
    testing(agr)
    outputs(agr)

    cal = sub.add_parser("calibrate", help="type-I error of the asymptotic test by simulation")
    cal.add_argument("--n", type=_positive, default=50, help="subjects per group")
    cal.add_argument("--reps", type=_positive, default=10_000)
    cal.add_argument("--test", default="tarone-ware", choices=[s.value for s in WeightScheme])
    cal.add_argument("--alpha", type=_alpha, default=0.05)
    cal.add_argument("--seed", type=_seed, default=1)
    cal.add_argument("--workers", type=_positive, default=1, help="threads; results do not depend on it")
    outputs(cal, svg=False)
    return parser


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise DataError(f"cannot read {path}: {e}") from None


def _emit(report: ResultReport, args, summary: list[str]):
    text = write_report_json(report)
    if args.json:
        Path(args.json).write_text(text, encoding="utf-8")
        print("\n".join(summary))
    else:
        sys.stdout.write(text)


def _maybe_svg(args, curves, xlabel, ylabel):
    if getattr(args, "svg", None):
        svg = render_step_svg(curves, title=args.title, xlabel=xlabel, ylabel=ylabel)
        Path(args.svg).write_text(svg, encoding="utf-8")


def _crossings(curves):
    """Pairwise crossing screen over labeled curves that have at least one jump."""
    entries, cross = [], False
    for (la, ca), (lb, cb) in itertools.combinations(curves, 2):
        if len(ca) == 0 or len(cb) == 0:
            continue
        rep = detect_crossings(ca, cb)
        cross = cross or rep.curves_cross
        for c in rep.crossings:
            entries.append({"groups": [str(la), str(lb)], "start": c.start, "end": c.end, "direction": c.direction})
    return {"curves_cross": cross, "crossings": entries}


def _test_block(args, observations, groups, report, summary):
    result = weighted_rank_test(observations, args.test, groups=groups)
    report.test = result.to_dict()
    summary.append(f"{result.scheme.value}: chi2 = {result.statistic:.5g}, df = {result.df}, p = {result.p_value:.4g}")
    report.test.update(alpha=args.alpha, significant=result.p_value < args.alpha)
    if args.permutation != "none":
        perm = permutation_pvalue(
            observations, args.test, mode=args.permutation, reps=args.reps, seed=args.seed
        )
        report.permutation = perm.to_dict()
        summary.append(f"permutation ({perm.mode}): p = {perm.p_value:.4g}")


def run_km(args) -> int:
    records = parse_grouped_csv(_read(args.input))
    observations = ordinal_to_observations(records, args.scale)
    curves = [(g, km_estimate(obs)) for g, obs in split_by_group(observations).items()]
    report = ResultReport(
        command="km",
        method={"construction": "grouped"},
        dataset={"input": os.path.basename(args.input), "n_per_group": {str(g): c.n_total for g, c in curves}},
        curves=[curve_summary(g, c) for g, c in curves],
    )
    summary = [f"{g}: n = {c.n_total}, events = {sum(c.events)}" for g, c in curves]
    _maybe_svg(args, curves, "Score", "Proportion above score")
    _emit(report, args, summary)
    return EXIT_OK


def run_compare(args) -> int:
    records = parse_grouped_csv(_read(args.input))
    observations = ordinal_to_observations(records, args.scale)
    by_group = split_by_group(observations)
    if len(by_group) < 2:
        raise DataError("need at least two groups")
    curves = [(g, km_estimate(obs)) for g, obs in by_group.items()]
    report = ResultReport(
        command="compare",
        method={"scheme": args.test, "construction": "grouped"},
        dataset={
            "input": os.path.basename(args.input),
            "n_per_group": {str(g): len(obs) for g, obs in by_group.items()},
        },
        curves=[curve_summary(g, c) for g, c in curves],
    )
    summary = []
    report.crossings = _crossings(curves)
    cross = report.crossings["curves_cross"]
    report.notes.append(f"proportional hazards screen: curves cross = {str(cross).lower()}")
    _test_block(args, observations, tuple(by_group), report, summary)
    summary.append(report.notes[-1])
    _maybe_svg(args, curves, "Score", "Proportion above score")
    _emit(report, args, summary)
    return EXIT_OK


def run_agreement(args) -> int:
    sample = parse_paired_csv(_read(args.input), args.scale)
    if not len(sample):
        raise DataError("empty sample")
    ties = sum(1 for d in sample.differences() if d == 0)
    report = ResultReport(
        command="agreement",
        method={"construction": args.mode},
        dataset={"input": os.path.basename(args.input), "n": len(sample), "ties": ties},
    )
    summary = []
    if args.mode == "absolute":
        curve = absolute_agreement_curve(sample)
        entry = curve_summary("|A-B|", curve)
        entry["proportion_at_least"] = [prop_at_least(curve, t) for t in curve.jump_times]
        report.curves = [entry]
        summary.append(f"n = {len(sample)}, ties = {ties}, distinct differences = {len(curve)}")
        _maybe_svg(args, [("|A-B|", curve)], "Absolute difference", "Proportion of discordant pairs")
        _emit(report, args, summary)
        return EXIT_OK

    split = signed_agreement_groups(sample, args.ties)
    report.method.update(scheme=args.test, tie_policy=split.policy.value)
    report.dataset["n_per_group"] = {"A<B": len(split.lower), "A>B": len(split.upper)}
    curves = [("A<B", km_estimate(split.lower)), ("A>B", km_estimate(split.upper))]
    report.curves = [curve_summary(g, c) for g, c in curves]
    report.crossings = _crossings(curves)
    report.notes.append(
        f"proportional hazards screen: curves cross = {str(report.crossings['curves_cross']).lower()}"
    )
    summary.append(f"ties = {split.ties} ({split.policy.value})")
    _test_block(args, split.observations, split.groups, report, summary)
    _maybe_svg(args, curves, "Signed difference magnitude", "Proportion of pairs")
    _emit(report, args, summary)
    return EXIT_OK


def run_calibrate(args) -> int:
    result = simulate_null_calibration(
        args.n, args.reps, args.test, alpha=args.alpha, seed=args.seed, workers=args.workers
    )
    report = ResultReport(
        command="calibrate",
        method={"scheme": args.test, "construction": "null-simulation"},
        calibration=result.to_dict(),
    )
    text = write_report_json(report)
    if args.json:
        Path(args.json).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {"km": run_km, "compare": run_compare, "agreement": run_agreement, "calibrate": run_calibrate}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except StatisticalError as e:
        print(f"ordsurv: {e}", file=sys.stderr)
        return EXIT_STAT
    except DataError as e:
        print(f"ordsurv: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
