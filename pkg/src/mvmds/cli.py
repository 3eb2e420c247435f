"""Command-line entry point.

Subcommands: solve, synth-cities, eval-retrieval, eval-cluster, plot.
Every run is fully determined by its flags (all randomness is seeded),
so identical invocations produce byte-identical outputs.  Diagnostics go
to stderr; exit code is 0 on success and 1 on any failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .core import MultiViewProblem, SolverConfig, stress, validate_view
from .errors import MvmdsError, WrongDimensionError
from .io import (
    load_problem,
    procrustes_align,
    read_manifest,
    read_matrix_csv,
    read_report_json,
    solver_config_from_manifest,
    write_line_svg,
    write_report_json,
    write_scatter_svg,
)
from .metrics import LabeledEmbedding, clustering_scores, kmeans, retrieval_scores
from .solver import initialize, solve, solve_single_view
from .synth import CITY_NAMES, city_noise_specs, lc_mds_baseline, make_city_problem, six_cities

GRAY = "#999999"
ORANGE = "#ff8800"
LINE_COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b")

SUMMARY_GAMMAS = (1.5, 5.0, 10.0)
WEIGHT_SWEEP_GAMMAS = tuple(np.arange(3, 21) * 0.5)  # 1.5, 2.0, ..., 10.0


class CliUsageError(MvmdsError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliUsageError(message)


def _fmt_vec(values) -> str:
    return "[" + ", ".join(repr(float(v)) for v in values) + "]"


def _solver_flags(sub, dim_default=None):
    sub.add_argument("--gamma", type=float, default=None, help="weight controller (>= 1)")
    sub.add_argument("--dim", type=int, default=dim_default, help="embedding dimension")
    sub.add_argument("--tol", type=float, default=None, help="relative decrease threshold")
    sub.add_argument("--max-iter", type=int, default=None, help="iteration cap")
    sub.add_argument("--init", choices=("classical", "random"), default=None)
    sub.add_argument("--seed", type=int, default=None, help="random seed")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mvmds", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    p_solve = subs.add_parser("solve", help="embed a multi-view problem from a manifest")
    p_solve.add_argument("manifest", help="problem manifest (JSON)")
    _solver_flags(p_solve)
    p_solve.add_argument("--out", default="report.json", help="report output path")
    p_solve.set_defaults(func=cmd_solve)

    p_synth = subs.add_parser("synth-cities", help="run the six-cities benchmark")
    p_synth.add_argument("--gamma", type=float, default=5.0,
                         help="gamma for the trial-0 figures")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--trials", type=int, default=100)
    p_synth.add_argument("--out-dir", default="synth-cities-out")
    p_synth.set_defaults(func=cmd_synth_cities)

    p_ret = subs.add_parser("eval-retrieval", help="retrieval metrics per method")
    p_ret.add_argument("manifest", help="manifest with labels_path set")
    _solver_flags(p_ret, dim_default=None)
    p_ret.set_defaults(func=cmd_eval_retrieval)

    p_clu = subs.add_parser("eval-cluster", help="clustering metrics per method")
    p_clu.add_argument("manifest", help="manifest with labels_path set")
    _solver_flags(p_clu, dim_default=None)
    p_clu.add_argument("--repeats", type=int, default=20, help="k-means repetitions")
    p_clu.set_defaults(func=cmd_eval_cluster)

    p_plot = subs.add_parser("plot", help="scatter plot of a 2-d report embedding")
    p_plot.add_argument("report", help="report JSON with a 2-d embedding")
    p_plot.add_argument("--truth-csv", default=None,
                        help="align against classical MDS of this matrix")
    p_plot.add_argument("--out", default="plot.svg")
    p_plot.set_defaults(func=cmd_plot)
    return parser


def _load(args, dim_default=None):
    manifest = read_manifest(args.manifest)
    base = os.path.dirname(os.path.abspath(args.manifest))
    problem, labels = load_problem(manifest, base_dir=base)
    dim = args.dim if args.dim is not None else dim_default
    cfg = solver_config_from_manifest(
        manifest,
        p=dim,
        gamma=args.gamma,
        tol=args.tol,
        max_iter=getattr(args, "max_iter", None),
        init=args.init,
        seed=args.seed,
    )
    return problem, labels, cfg


def cmd_solve(args) -> int:
    problem, _, cfg = _load(args)
    report = solve(problem, cfg)
    write_report_json(report, args.out)
    final = report.trace[-1].objective_value if report.trace else float("nan")
    print(f"objective: {final!r}")
    print(f"iterations: {report.iterations_used} converged: {report.converged}")
    print(f"weights: {_fmt_vec(report.weights_out.alpha)}")
    print(f"report: {args.out}")
    return 0


def _city_method_names():
    names = [f"View {v}" for v in range(1, 5)]
    names.append("LC_MDS")
    names.extend(f"MVMDS (gamma={g:g})" for g in SUMMARY_GAMMAS)
    return names


def cmd_synth_cities(args) -> int:
    if args.trials < 1:
        raise CliUsageError("--trials must be >= 1")
    truth = six_cities()
    base_cfg = dict(p=2, tol=1e-6, max_iter=500, init="classical", seed=0)
    methods = _city_method_names()
    stresses = {name: [] for name in methods}
    os.makedirs(args.out_dir, exist_ok=True)

    for trial in range(args.trials):
        tseed = args.seed + trial
        problem = make_city_problem(city_noise_specs(tseed))
        results = {}
        for v in range(4):
            rep = solve_single_view(problem.views[v], SolverConfig(gamma=5.0, **base_cfg))
            results[f"View {v + 1}"] = rep
        results["LC_MDS"] = lc_mds_baseline(problem, SolverConfig(gamma=5.0, **base_cfg))
        for g in SUMMARY_GAMMAS:
            results[f"MVMDS (gamma={g:g})"] = solve(problem, SolverConfig(gamma=g, **base_cfg))
        for name in methods:
            stresses[name].append(stress(truth, results[name].config_out))
        if trial == 0:
            _write_city_figures(args, problem, results, truth)

    medians = {name: float(np.median(stresses[name])) for name in methods}
    baseline_names = [f"View {v}" for v in range(1, 5)] + ["LC_MDS"]
    win_rates = {}
    for g in SUMMARY_GAMMAS:
        name = f"MVMDS (gamma={g:g})"
        wins = sum(
            1
            for t in range(args.trials)
            if all(stresses[name][t] < stresses[b][t] for b in baseline_names)
        )
        win_rates[name] = wins / args.trials

    summary = {
        "seed": args.seed,
        "trials": args.trials,
        "median_groundtruth_stress": medians,
        "mvmds_win_rate": win_rates,
    }
    with open(os.path.join(args.out_dir, "summary.json"), "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")

    lines = [
        f"six-cities benchmark: {args.trials} trials, seed {args.seed}",
        "groundtruth stress vs the true distance matrix",
        "",
        f"{'method':<20}{'median stress':>18}{'win rate':>12}",
    ]
    for name in methods:
        wr = f"{win_rates[name]:.2f}" if name in win_rates else "-"
        lines.append(f"{name:<20}{medians[name]:>18.2f}{wr:>12}")
    table = "\n".join(lines) + "\n"
    with open(os.path.join(args.out_dir, "summary.txt"), "w", encoding="utf-8") as fh:
        fh.write(table)
    sys.stdout.write(table)
    return 0


def _slug(name: str) -> str:
    return name.lower().replace(" ", "_").replace("(", "").replace(")", "").replace("=", "")


def _write_city_figures(args, problem, results, truth) -> None:
    truth_emb = initialize(
        MultiViewProblem((truth,)), SolverConfig(p=2, gamma=5.0)
    )
    for name, rep in results.items():
        aligned = procrustes_align(rep.config_out, truth_emb)
        write_scatter_svg(
            [(truth_emb, "groundtruth", GRAY), (aligned, name, ORANGE)],
            os.path.join(args.out_dir, f"{_slug(name)}.svg"),
            point_labels=CITY_NAMES,
        )

    weight_curves = np.empty((4, len(WEIGHT_SWEEP_GAMMAS)))
    for gi, g in enumerate(WEIGHT_SWEEP_GAMMAS):
        rep = solve(problem, SolverConfig(p=2, gamma=float(g), tol=1e-6,
                                          max_iter=500, init="classical", seed=0))
        weight_curves[:, gi] = rep.weights_out.alpha
    write_line_svg(
        [
            (list(WEIGHT_SWEEP_GAMMAS), list(weight_curves[v]), f"View {v + 1}", LINE_COLORS[v])
            for v in range(4)
        ],
        os.path.join(args.out_dir, "weights_vs_gamma.svg"),
        x_label="gamma",
        y_label="weight",
    )

    conv = solve(problem, SolverConfig(p=2, gamma=args.gamma, tol=1e-6,
                                       max_iter=500, init="classical", seed=0))
    iters = [rec.iteration for rec in conv.trace]
    objs = [rec.objective_value for rec in conv.trace]
    write_line_svg(
        [(iters, objs, f"objective (gamma={args.gamma:g})", LINE_COLORS[0])],
        os.path.join(args.out_dir, "convergence.svg"),
        x_label="iteration",
        y_label="objective",
    )


def _method_embeddings(problem, cfg):
    """Per-view single-view runs, the equal-weight baseline, and the
    weighted multi-view run, in presentation order."""
    out = []
    for v in range(problem.m):
        rep = solve_single_view(problem.views[v], cfg)
        out.append((f"View {v + 1}", rep))
    out.append(("LC_MDS", lc_mds_baseline(problem, cfg)))
    out.append(("MVMDS", solve(problem, cfg)))
    return out


def cmd_eval_retrieval(args) -> int:
    problem, labels, cfg = _load(args, dim_default=10)
    if labels is None:
        raise CliUsageError("eval-retrieval needs labels_path in the manifest")
    print(f"{'method':<12}{'NN':>8}{'FT':>8}{'ST':>8}{'DCG':>8}")
    for name, rep in _method_embeddings(problem, cfg):
        scores = retrieval_scores(LabeledEmbedding(rep.config_out.x, labels))
        if scores.ft_st_skipped:
            print(
                f"warning: {name}: {scores.ft_st_skipped} singleton-class "
                "queries skipped for FT/ST",
                file=sys.stderr,
            )
        print(
            f"{name:<12}{scores.nn:>8.3f}{scores.ft:>8.3f}"
            f"{scores.st:>8.3f}{scores.dcg:>8.3f}"
        )
    return 0


def cmd_eval_cluster(args) -> int:
    problem, labels, cfg = _load(args, dim_default=10)
    if labels is None:
        raise CliUsageError("eval-cluster needs labels_path in the manifest")
    if args.repeats < 1:
        raise CliUsageError("--repeats must be >= 1")
    k = int(np.unique(labels).size)
    print(f"k-means with k={k}, {args.repeats} repeats")
    print(f"{'method':<12}{'ACC':>14}{'NMI':>14}{'Purity':>14}")
    for name, rep in _method_embeddings(problem, cfg):
        accs, nmis, purs = [], [], []
        for r in range(args.repeats):
            pred = kmeans(rep.config_out.x, k, seed=cfg.seed + r)
            s = clustering_scores(pred, labels)
            accs.append(s.acc)
            nmis.append(s.nmi)
            purs.append(s.purity)
        cells = [
            f"{np.mean(vals) * 100:.1f}±{np.std(vals) * 100:.2f}"
            for vals in (accs, nmis, purs)
        ]
        print(f"{name:<12}{cells[0]:>14}{cells[1]:>14}{cells[2]:>14}")
    return 0


def cmd_plot(args) -> int:
    report = read_report_json(args.report)
    emb = report.config_out
    if emb.p != 2:
        raise WrongDimensionError(f"plot needs a 2-d embedding, got p={emb.p}")
    point_labels = [str(i) for i in range(emb.n)]
    if args.truth_csv is not None:
        truth = validate_view(read_matrix_csv(args.truth_csv))
        truth_emb = initialize(MultiViewProblem((truth,)), SolverConfig(p=2, gamma=5.0))
        aligned = procrustes_align(emb, truth_emb)
        series = [(truth_emb, "groundtruth", GRAY), (aligned, "result", ORANGE)]
    else:
        series = [(emb, "result", ORANGE)]
    write_scatter_svg(series, args.out, point_labels=point_labels)
    print(f"plot: {args.out}")
    return 0


def main(argv=None) -> int:
    try:
        parser = build_parser()
        args = parser.parse_args(argv)
        return args.func(args)
    except CliUsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except MvmdsError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
