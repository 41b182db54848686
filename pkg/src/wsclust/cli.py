"""Command-line front end: fit, tune, and eval subcommands.

Exit codes: 0 on success, 1 for usage or configuration errors, 2 for
data errors.
"""

import argparse
import sys

from . import __version__
from .dataio import (
    load_dataset,
    read_labels,
    write_density_curve,
    write_history_csv,
    write_labels,
)
from .density import KERNELS, estimate_density
from .errors import ConfigurationError, DataError, PipelineError
from .evaluation import adjusted_rand_index, outlier_ratio
from .graph import build_knn_graph, minimum_spanning_forest
from .pipeline import ClusteringParams, fit
from .tuning import SearchSpace, random_search

_METRIC_CLI = {
    "euclidean": "euclidean",
    "manhattan": "manhattan",
    "canberra": "canberra",
    "bray-curtis": "bray_curtis",
    "cosine": "cosine",
}
_MODE_CLI = {"single-pass": "single_pass", "fixpoint": "fixpoint"}
_OUTLIER_CLI = {"one-cluster": "one_cluster", "singletons": "singletons"}


def _to_cli(value: str) -> str:
    return value.replace("_", "-")


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_real_range(text: str, flag: str) -> tuple[float, float, str]:
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise ConfigurationError(f"{flag} expects LOW:HIGH or LOW:HIGH:log, got {text!r}")
    try:
        low, high = float(parts[0]), float(parts[1])
    except ValueError:
        raise ConfigurationError(f"{flag}: bounds must be numeric, got {text!r}") from None
    scale = "linear"
    if len(parts) == 3:
        if parts[2] not in ("log", "linear"):
            raise ConfigurationError(f"{flag}: scale must be 'log' or 'linear'")
        scale = parts[2]
    return low, high, scale


def _parse_int_range(text: str, flag: str) -> tuple[int, int]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ConfigurationError(f"{flag} expects LOW:HIGH, got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise ConfigurationError(f"{flag}: bounds must be integers, got {text!r}") from None


def _add_dataset_flags(parser, label_required: bool) -> None:
    parser.add_argument("--input", required=True, help="CSV dataset to read")
    parser.add_argument(
        "--header", action="store_true", help="skip one header row in the input"
    )
    parser.add_argument(
        "--label-column",
        default=None,
        required=label_required,
        help="column holding ground-truth labels: an index, 'first' or 'last'",
    )


def _add_param_flags(parser) -> None:
    parser.add_argument(
        "--metric",
        choices=sorted(_METRIC_CLI),
        default="euclidean",
        help="distance metric (default: euclidean)",
    )
    parser.add_argument(
        "--grid-size", type=int, default=1024, help="density grid resolution"
    )
    parser.add_argument(
        "--min-cluster-size",
        type=int,
        default=3,
        help="final clusters smaller than this become outliers",
    )
    parser.add_argument(
        "--agglomeration",
        choices=sorted(_MODE_CLI),
        default="single-pass",
        help="merge traversal mode",
    )
    parser.add_argument("--seed", type=int, default=0, help="reproducibility tag")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wsclust", description=__doc__)
    parser.add_argument("--version", action="version", version=f"wsclust {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    fit_parser = commands.add_parser(
        "fit", help="cluster a dataset and write one label per row"
    )
    _add_dataset_flags(fit_parser, label_required=False)
    fit_parser.add_argument("--k", type=int, required=True, help="neighbors per point")
    fit_parser.add_argument(
        "--bandwidth", type=float, required=True, help="density smoothing factor"
    )
    fit_parser.add_argument(
        "--kernel", choices=sorted(KERNELS), default="gaussian", help="density kernel"
    )
    fit_parser.add_argument(
        "--lambda",
        dest="distance_threshold",
        type=float,
        required=True,
        help="max linking-edge distance for a merge",
    )
    fit_parser.add_argument(
        "--alpha",
        dest="wasserstein_threshold",
        type=float,
        required=True,
        help="max Wasserstein distance between merged distance sets",
    )
    _add_param_flags(fit_parser)
    fit_parser.add_argument(
        "--output", required=True, help="labels file to write (one integer per line)"
    )
    fit_parser.add_argument(
        "--emit-density",
        default=None,
        help="also write the density curve as two-column text",
    )

    tune_parser = commands.add_parser(
        "tune", help="random-search hyperparameters against labeled data"
    )
    _add_dataset_flags(tune_parser, label_required=True)
    tune_parser.add_argument(
        "--iterations", type=int, default=1000, help="number of random trials"
    )
    tune_parser.add_argument(
        "--k-range", default=None, help="neighbor count range LOW:HIGH (default 2:30)"
    )
    tune_parser.add_argument(
        "--bandwidth-range",
        default=None,
        help="bandwidth range LOW:HIGH[:log] (default 1e-3:10:log)",
    )
    tune_parser.add_argument(
        "--lambda-range",
        default=None,
        help="linking-distance range LOW:HIGH[:log] (default 1e-3:100:log)",
    )
    tune_parser.add_argument(
        "--alpha-range",
        default=None,
        help="Wasserstein-threshold range LOW:HIGH[:log] (default 1e-4:10:log)",
    )
    tune_parser.add_argument(
        "--kernels",
        default="gaussian",
        help="comma-separated kernels to sample from (default: gaussian)",
    )
    _add_param_flags(tune_parser)
    tune_parser.add_argument(
        "--output", required=True, help="history CSV to write, one row per trial"
    )
    tune_parser.add_argument(
        "--best-params",
        default=None,
        help="file for the best parameters in flag form (default: OUTPUT.best)",
    )

    eval_parser = commands.add_parser(
        "eval", help="score a predicted labeling against ground truth"
    )
    eval_parser.add_argument("predicted", help="labels file produced by fit")
    eval_parser.add_argument("truth", help="ground-truth labels file")
    eval_parser.add_argument(
        "--outlier-mode",
        choices=sorted(_OUTLIER_CLI),
        default="one-cluster",
        help="how the -1 label enters the ARI",
    )
    return parser


def _params_from_args(args) -> ClusteringParams:
    return ClusteringParams(
        n_neighbors=args.k,
        bandwidth=args.bandwidth,
        distance_threshold=args.distance_threshold,
        wasserstein_threshold=args.wasserstein_threshold,
        metric=_METRIC_CLI[args.metric],
        kernel=args.kernel,
        grid_size=args.grid_size,
        min_cluster_size=args.min_cluster_size,
        agglomeration_mode=_MODE_CLI[args.agglomeration],
        seed=args.seed,
    )


def format_params_flags(params: ClusteringParams) -> str:
    """Parameters as a reloadable fit command-line fragment."""
    return (
        f"--metric {_to_cli(params.metric)} "
        f"--k {params.n_neighbors} "
        f"--bandwidth {params.bandwidth:.6g} "
        f"--kernel {params.kernel} "
        f"--lambda {params.distance_threshold:.6g} "
        f"--alpha {params.wasserstein_threshold:.6g} "
        f"--grid-size {params.grid_size} "
        f"--min-cluster-size {params.min_cluster_size} "
        f"--agglomeration {_to_cli(params.agglomeration_mode)} "
        f"--seed {params.seed}"
    )


def _print_params(params: ClusteringParams) -> None:
    print("resolved parameters:")
    print(f"  metric = {_to_cli(params.metric)}")
    print(f"  k = {params.n_neighbors}")
    print(f"  bandwidth = {params.bandwidth:.6g}")
    print(f"  kernel = {params.kernel}")
    print(f"  lambda = {params.distance_threshold:.6g}")
    print(f"  alpha = {params.wasserstein_threshold:.6g}")
    print(f"  grid-size = {params.grid_size}")
    print(f"  min-cluster-size = {params.min_cluster_size}")
    print(f"  agglomeration = {_to_cli(params.agglomeration_mode)}")
    print(f"  seed = {params.seed}")


def _command_fit(args) -> int:
    points, truth = load_dataset(
        args.input, has_header=args.header, label_column=args.label_column
    )
    params = _params_from_args(args)
    print(f"input: {args.input} ({points.shape[0]} points, {points.shape[1]} features)")
    _print_params(params)
    result = fit(points, params)
    write_labels(args.output, result.labels)
    if args.emit_density is not None:
        graph = build_knn_graph(points, params.n_neighbors, params.metric)
        forest = minimum_spanning_forest(graph)
        curve = estimate_density(
            forest.w, params.bandwidth, params.kernel, params.grid_size
        )
        write_density_curve(args.emit_density, curve)
        print(f"density curve written to {args.emit_density}")
    diag = result.diagnostics
    print(f"clusters = {result.cluster_count}")
    print(f"outlier-ratio = {result.outlier_ratio:.6g}")
    thresholds = " ".join(f"{t:.6g}" for t in diag.thresholds)
    print(f"thresholds = [{thresholds}]")
    print(
        f"subclusters = {diag.subclusters_before_merge} -> "
        f"{diag.subclusters_after_merge} ({diag.merge_count} merges)"
    )
    if truth is not None:
        print(f"ari = {adjusted_rand_index(result.labels, truth):.6g}")
    print(f"labels written to {args.output}")
    return 0


def _space_from_args(args) -> SearchSpace:
    defaults = SearchSpace()
    fixed = {
        "metric": _METRIC_CLI[args.metric],
        "grid_size": args.grid_size,
        "min_cluster_size": args.min_cluster_size,
        "agglomeration_mode": _MODE_CLI[args.agglomeration],
        "seed": args.seed,
    }
    kernels = tuple(k.strip() for k in args.kernels.split(",") if k.strip())
    return SearchSpace(
        n_neighbors_range=(
            _parse_int_range(args.k_range, "--k-range")
            if args.k_range is not None
            else defaults.n_neighbors_range
        ),
        bandwidth_range=(
            _parse_real_range(args.bandwidth_range, "--bandwidth-range")
            if args.bandwidth_range is not None
            else defaults.bandwidth_range
        ),
        distance_threshold_range=(
            _parse_real_range(args.lambda_range, "--lambda-range")
            if args.lambda_range is not None
            else defaults.distance_threshold_range
        ),
        wasserstein_threshold_range=(
            _parse_real_range(args.alpha_range, "--alpha-range")
            if args.alpha_range is not None
            else defaults.wasserstein_threshold_range
        ),
        kernel_choices=kernels,
        fixed=fixed,
    )


def _print_space(space: SearchSpace, iterations: int, seed: int) -> None:
    def real(rng_tuple):
        low, high, scale = rng_tuple
        return f"{low:.6g}:{high:.6g}:{scale}"

    print("resolved search space:")
    print(f"  k-range = {space.n_neighbors_range[0]}:{space.n_neighbors_range[1]}")
    print(f"  bandwidth-range = {real(space.bandwidth_range)}")
    print(f"  lambda-range = {real(space.distance_threshold_range)}")
    print(f"  alpha-range = {real(space.wasserstein_threshold_range)}")
    print(f"  kernels = {','.join(space.kernel_choices)}")
    print(f"  metric = {_to_cli(space.fixed['metric'])}")
    print(f"  grid-size = {space.fixed['grid_size']}")
    print(f"  min-cluster-size = {space.fixed['min_cluster_size']}")
    print(f"  agglomeration = {_to_cli(space.fixed['agglomeration_mode'])}")
    print(f"  iterations = {iterations}")
    print(f"  seed = {seed}")


def _command_tune(args) -> int:
    points, truth = load_dataset(
        args.input, has_header=args.header, label_column=args.label_column
    )
    if truth is None:
        raise ConfigurationError("tuning needs ground-truth labels (--label-column)")
    space = _space_from_args(args)
    print(f"input: {args.input} ({points.shape[0]} points, {points.shape[1]} features)")
    _print_space(space, args.iterations, args.seed)
    best, history = random_search(
        points, truth, space, iterations=args.iterations, seed=args.seed
    )
    write_history_csv(args.output, history)
    best_path = args.best_params if args.best_params is not None else f"{args.output}.best"
    with open(best_path, "w", encoding="utf-8") as handle:
        handle.write(format_params_flags(best.params) + "\n")
    print(f"history written to {args.output}")
    print(f"best written to {best_path}")
    print(
        f"best trial {best.trial_index}: ari = {best.ari:.6g}, "
        f"outlier-ratio = {best.outlier_ratio:.6g}"
    )
    print(f"best params: {format_params_flags(best.params)}")
    return 0


def _command_eval(args) -> int:
    predicted = read_labels(args.predicted)
    truth = read_labels(args.truth)
    if predicted.size != truth.size:
        raise ConfigurationError(
            f"label files differ in length: {predicted.size} vs {truth.size}"
        )
    mode = _OUTLIER_CLI[args.outlier_mode]
    print(f"outlier-mode = {args.outlier_mode}")
    print(f"ari = {adjusted_rand_index(predicted, truth, outlier_mode=mode):.6g}")
    print(f"outlier-ratio = {outlier_ratio(predicted):.6g}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"fit": _command_fit, "tune": _command_tune, "eval": _command_eval}
    try:
        return handlers[args.command](args)
    except ConfigurationError as exc:
        print(f"wsclust: error: {exc}", file=sys.stderr)
        return 1
    except (DataError, PipelineError) as exc:
        print(f"wsclust: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
