"""
Command Line Interface for wlan-htnet
"""

import csv
import json
import os
from pathlib import Path
from typing import Any, Dict, List, Sequence

import click
from rich.console import Console
from rich.table import Table

from . import __version__
from .core import ThroughputBenchmark
from .exceptions import ConfigError, WlanHtnetError
from .expressiveness import (
    Encoder,
    LinkedStarGraph,
    embedding_collision_probe,
    exhaustive_check,
    kind_swap_pair,
)
from .graph.batch import build_batch
from .graph.dataset import (
    DATASET_FORMAT_VERSION,
    DatasetSplits,
    dataset_stats,
    read_dataset,
    select_split,
    split_dataset,
    write_dataset,
)
from .graph.model import DeploymentSequence
from .nn.checkpoint import CHECKPOINT_VERSION, load_checkpoint
from .nn.config import FEATURE_GROUPS, AttentionMode, LstmActivation
from .predictors import HtnetPredictor, MeanPredictor, MlpPredictor, SinrPredictor, load_predictor
from .predictors.base import ThroughputPredictor
from .scenarios import generate as generate_deployments
from .scenarios import scenario_config
from .training import TrainConfig, depth_study, evaluate, feature_ablation, train
from .utils.config import (
    build_mlp_config,
    build_train_config,
    get_default_config,
    load_config,
    merge_configs,
    save_config,
    validate_config,
)
from .utils.logging import configure_logging

VERSION_MESSAGE = (
    f"%(prog)s %(version)s (dataset format {DATASET_FORMAT_VERSION}, "
    f"checkpoint format {CHECKPOINT_VERSION})"
)
PREDICTOR_CHOICES = ["htnet", "sinr", "mlp", "mean"]


def _print_table(title: str, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    table = Table(title=title)
    for column in columns:
        table.add_column(column)
    for row in rows:
        table.add_row(*[f"{v:.4f}" if isinstance(v, float) else str(v) for v in row])
    Console().print(table)


def _train_config(ctx: click.Context, **overrides: Any) -> TrainConfig:
    overrides.setdefault("threads", ctx.obj["threads"])
    return build_train_config(ctx.obj["config"], overrides)


def _splits(deployments: List[DeploymentSequence], config: TrainConfig) -> DatasetSplits:
    return split_dataset(deployments, config.split_ratios, config.seed)


def _make_predictor(name: str, ctx: click.Context, config: TrainConfig) -> ThroughputPredictor:
    if name == "htnet":
        return HtnetPredictor(config)
    if name == "sinr":
        return SinrPredictor()
    if name == "mlp":
        return MlpPredictor(build_mlp_config(ctx.obj["config"]))
    return MeanPredictor()


@click.group()
@click.version_option(version=__version__, message=VERSION_MESSAGE)
@click.option(
    "--config",
    type=click.Path(exists=True, path_type=Path),
    help="Path to configuration file",
)
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    help="Overrides logging.level from the config file",
)
@click.option(
    "--threads",
    type=click.IntRange(min=1),
    help="Worker threads for generation and evaluation (default: all cores)",
)
@click.pass_context
def cli(ctx, config, log_level, threads):
    """Per-STA WLAN throughput prediction with HTNet"""
    ctx.ensure_object(dict)

    try:
        config_data = load_config(config) if config else {}
        if not isinstance(config_data, dict):
            raise ConfigError(f"{config}: expected a mapping at the top level")
        is_valid, errors = validate_config(config_data)
        if not is_valid:
            raise ConfigError(f"{config}: " + "; ".join(errors))
    except (ValueError, OSError, ConfigError) as e:
        click.echo(f"Error loading config: {e}", err=True)
        raise click.Abort() from e
    ctx.obj["config"] = merge_configs(get_default_config(), config_data or {})

    logging_cfg = ctx.obj["config"].get("logging", {})
    configure_logging(log_level or logging_cfg.get("level", "INFO"), logging_cfg.get("format"))
    training_cfg = ctx.obj["config"].get("training", {})
    ctx.obj["threads"] = threads or training_cfg.get("threads") or os.cpu_count() or 1


@cli.command()
@click.option("--setup", type=int, required=True, help="Deployment setup 1-6")
@click.option("--count", type=click.IntRange(min=0), default=1, show_default=True)
@click.option("--seed", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--sequence-length", type=click.IntRange(min=1), help="Snapshots per deployment")
@click.option("--stats", is_flag=True, help="Print a summary of the generated dataset")
@click.pass_context
def generate(ctx, setup, count, seed, out, sequence_length, stats):
    """Generate a labelled synthetic dataset"""
    try:
        overrides: Dict[str, Any] = {"seed": seed}
        if sequence_length:
            overrides["sequence_length"] = sequence_length
        config = scenario_config(setup, **overrides)
        result = generate_deployments(config, count=count, threads=ctx.obj["threads"])
        written = write_dataset(out, result.deployments)
    except (WlanHtnetError, OSError) as e:
        click.echo(f"Error generating dataset: {e}", err=True)
        raise click.Abort() from e

    click.echo(f"Wrote {written} setup-{setup} deployments to {out}")
    if stats:
        summary = dataset_stats(
            result.deployments, stopped_fraction=result.summary.stopped_fraction
        )
        click.echo(json.dumps(summary.as_dict(), indent=2))


@cli.command(name="train")
@click.option("--data", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--predictor", type=click.Choice(PREDICTOR_CHOICES), default="htnet", show_default=True)
@click.option("--epochs", type=click.IntRange(min=0))
@click.option("--learning-rate", type=float)
@click.option("--batch-size", type=click.IntRange(min=1))
@click.option("--seed", type=click.IntRange(min=0))
@click.option("--static", is_flag=True, help="Drop the LSTM (static ablation)")
@click.option("--raw-attention", is_flag=True, help="Use unnormalized attention scores")
@click.option("--lstm-tanh", is_flag=True, help="Use tanh for the LSTM candidate and cell output")
@click.option("--history", type=click.Path(dir_okay=False, path_type=Path), help="Training history CSV")
@click.pass_context
def train_cmd(
    ctx, data, out, predictor, epochs, learning_rate, batch_size, seed, static, raw_attention, lstm_tanh, history
):
    """Train a predictor and write a checkpoint"""
    try:
        if static:
            ctx.obj["config"]["model"]["temporal"] = False
        if raw_attention:
            ctx.obj["config"]["model"]["attention"] = AttentionMode.RAW.value
        if lstm_tanh:
            ctx.obj["config"]["model"]["lstm_activation"] = LstmActivation.TANH.value
        config = _train_config(
            ctx, epochs=epochs, learning_rate=learning_rate, batch_size=batch_size, seed=seed
        )
        splits = _splits(read_dataset(data), config)
        if predictor == "htnet":
            result = train(splits, config)
            result.model.save(out)
            if history:
                result.history.to_csv(history)
            best = "n/a" if result.best_val_rmse is None else f"{result.best_val_rmse:.4f}"
            click.echo(f"Trained HTNet for {len(result.history)} epochs; best val RMSE {best}")
        else:
            model = _make_predictor(predictor, ctx, config)
            model.fit(splits.train, splits.val)
            model.save(out)
            click.echo(f"Fitted {predictor} on {len(splits.train)} deployments")
    except (WlanHtnetError, FileNotFoundError) as e:
        click.echo(f"Error training: {e}", err=True)
        raise click.Abort() from e
    click.echo(f"Checkpoint written to {out}")


def _eval_deployments(ctx: click.Context, ckpt: Path, data: Path, split: str) -> List[DeploymentSequence]:
    deployments = read_dataset(data)
    if split == "all":
        return deployments
    recorded = load_checkpoint(ckpt).header.get("split")
    if recorded and recorded.get(split) is not None:
        return select_split(deployments, recorded[split])
    splits = _splits(deployments, _train_config(ctx))
    return getattr(splits, split)


@cli.command(name="eval")
@click.option("--ckpt", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--data", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--split", type=click.Choice(["test", "val", "train", "all"]), default="test", show_default=True)
@click.option("--output", type=click.Choice(["json", "table"]), default="table")
@click.pass_context
def eval_cmd(ctx, ckpt, data, split, output):
    """Evaluate a checkpoint: RMSE, MAE and inference time"""
    try:
        predictor = load_predictor(ckpt)
        deployments = _eval_deployments(ctx, ckpt, data, split)
        report = evaluate(predictor, deployments, threads=ctx.obj["threads"])
    except (WlanHtnetError, FileNotFoundError, ValueError) as e:
        click.echo(f"Error evaluating: {e}", err=True)
        raise click.Abort() from e

    if output == "json":
        click.echo(json.dumps(report.as_dict(), indent=2))
    else:
        click.echo(f"\n=== {report.predictor} on {split} split ({report.deployments} deployments) ===")
        click.echo(f"RMSE: {report.rmse:.4f} Mbps")
        click.echo(f"MAE: {report.mae:.4f} Mbps")
        click.echo(f"Targets: {report.targets}")
        click.echo(f"Inference: {report.inference_ms_per_sequence:.2f} ms/sequence")
        click.echo(f"Parameters: {report.parameter_count}")


@cli.command()
@click.option("--ckpt", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--data", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.pass_context
def predict(ctx, ckpt, data, out):
    """Write per-(STA, snapshot) predictions as CSV"""
    try:
        predictor = load_predictor(ckpt)
        deployments = read_dataset(data)
        batch = build_batch(deployments)
        y_hat = predictor.predict(deployments) if batch.num_targets else []
    except (WlanHtnetError, FileNotFoundError) as e:
        click.echo(f"Error predicting: {e}", err=True)
        raise click.Abort() from e

    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["deployment_id", "t", "sta_id", "y", "y_hat"])
        for (dep_id, t, sta_id, _, y), value in zip(batch.target_table(), y_hat):
            writer.writerow([dep_id, t, sta_id, repr(y), repr(float(value))])
    click.echo(f"Wrote {batch.num_targets} predictions to {out}")


@cli.command(name="depth-study")
@click.option("--data", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--k-max", type=click.IntRange(min=1), default=12, show_default=True)
@click.option("--k-min", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), help="CSV of (K, RMSE, ms)")
@click.pass_context
def depth_study_cmd(ctx, data, k_max, k_min, out):
    """Test RMSE and inference time for HTL depths K_min..K_max"""
    try:
        config = _train_config(ctx)
        rows = depth_study(_splits(read_dataset(data), config), range(k_min, k_max + 1), config)
    except (WlanHtnetError, FileNotFoundError) as e:
        click.echo(f"Error running depth study: {e}", err=True)
        raise click.Abort() from e

    if out:
        out.parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", newline="") as f:
            writer = csv.DictWriter(f, fieldnames=list(rows[0].as_dict()) if rows else ["layers"])
            writer.writeheader()
            for row in rows:
                writer.writerow(row.as_dict())
    _print_table(
        "Depth study",
        ["K", "test RMSE", "test MAE", "ms/sequence", "parameters"],
        [(r.layers, r.test_rmse, r.test_mae, r.inference_ms, r.parameter_count) for r in rows],
    )


@cli.command(name="wl-check")
@click.option("--max-nodes", type=click.IntRange(min=2), default=10, show_default=True)
@click.option("--max-stars", type=click.IntRange(min=1), default=4, show_default=True)
@click.option("--attributed", is_flag=True, help="Colour nodes by kind before refinement")
@click.option("--trials", type=click.IntRange(min=1), default=8, show_default=True)
@click.option("--output", type=click.Choice(["json", "table"]), default="table")
def wl_check(max_nodes, max_stars, attributed, trials, output):
    """Check 1-WL against brute-force isomorphism and run embedding probes"""
    report = exhaustive_check(max_nodes, max_stars, node_attr="kind" if attributed else None)
    swapped = kind_swap_pair()
    probes = {
        "kind_swap_htl": embedding_collision_probe(*swapped, trials=trials, encoder=Encoder.HTL),
        "kind_swap_kind_blind": embedding_collision_probe(
            *swapped, trials=trials, encoder=Encoder.KIND_BLIND
        ),
        "stars_3_3_vs_3_4_htl": embedding_collision_probe(
            LinkedStarGraph((3, 3)), LinkedStarGraph((4, 3)), trials=trials
        ),
    }
    probes_ok = (
        probes["kind_swap_htl"].distinguished_all
        and probes["kind_swap_kind_blind"].collided_all
        and probes["stars_3_3_vs_3_4_htl"].distinguished_all
    )

    if output == "json":
        payload = report.as_dict()
        payload["probes"] = {name: p.as_dict() for name, p in probes.items()}
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(f"\n=== 1-WL on linked star graphs (<= {max_nodes} nodes, <= {max_stars} stars) ===")
        click.echo(f"Graphs: {report.graphs}")
        click.echo(f"Non-isomorphic pairs: {report.non_isomorphic_pairs}")
        click.echo(f"Counterexamples: {len(report.counterexamples)}")
        click.echo(f"Max diameter: {report.max_diameter}")
        for first, second in report.counterexamples[:10]:
            click.echo(f"  {first} vs {second}")
        for name, p in probes.items():
            click.echo(f"{name}: {sum(p.distinguished)}/{p.trials} trials distinguish")
        click.echo("PASS" if report.passed and probes_ok else "FAIL")

    if not (report.passed and probes_ok):
        raise click.exceptions.Exit(1)


@cli.command()
@click.option("--data", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--output", type=click.Choice(["json", "table"]), default="table")
@click.pass_context
def stats(ctx, data, output):
    """Summarize a dataset file"""
    try:
        deployments = read_dataset(data)
        config = _train_config(ctx)
        summary = dataset_stats(deployments, config.split_ratios)
    except (WlanHtnetError, FileNotFoundError) as e:
        click.echo(f"Error reading dataset: {e}", err=True)
        raise click.Abort() from e

    if output == "json":
        click.echo(json.dumps(summary.as_dict(), indent=2))
        return
    _print_table(
        f"Dataset {data.name}",
        ["deployments", "length", "targets", "mean Mbps", "std Mbps", "train/val/test"],
        [
            (
                summary.deployments,
                summary.sequence_length,
                summary.targets,
                summary.mean_throughput,
                summary.std_throughput,
                "/".join(str(n) for n in summary.split_sizes),
            )
        ],
    )


@cli.command()
@click.option("--data", type=click.Path(exists=True, path_type=Path), required=True)
@click.option(
    "--predictors",
    default="htnet,sinr,mlp",
    show_default=True,
    help="Comma-separated predictors to compare",
)
@click.option("--output", type=click.Choice(["json", "table"]), default="table")
@click.pass_context
def compare(ctx, data, predictors, output):
    """Fit several predictors on the train split and compare them on test"""
    names = [p.strip() for p in predictors.split(",") if p.strip()]
    unknown = [n for n in names if n not in PREDICTOR_CHOICES]
    if unknown:
        raise click.UsageError(f"unknown predictors {unknown}; choose from {PREDICTOR_CHOICES}")
    try:
        config = _train_config(ctx)
        benchmark = ThroughputBenchmark(threads=config.threads)
        benchmark.register_dataset(data.name, _splits(read_dataset(data), config))
        for name in names:
            benchmark.register_predictor(name, _make_predictor(name, ctx, config))
        result = benchmark.compare(data.name, names)
    except (WlanHtnetError, FileNotFoundError) as e:
        click.echo(f"Error comparing predictors: {e}", err=True)
        raise click.Abort() from e

    if output == "json":
        click.echo(json.dumps([r.as_dict() for r in result.reports], indent=2))
    else:
        click.echo(result.summary())


@cli.command()
@click.option("--data", type=click.Path(exists=True, path_type=Path), required=True)
@click.option(
    "--groups",
    default="sinr,airtime,rssi,channel,position",
    show_default=True,
    help=f"Comma-separated feature groups from {', '.join(FEATURE_GROUPS)}",
)
@click.pass_context
def ablation(ctx, data, groups):
    """Test RMSE with each input feature group removed"""
    try:
        config = _train_config(ctx)
        rows = feature_ablation(
            _splits(read_dataset(data), config),
            [g.strip() for g in groups.split(",") if g.strip()],
            config,
        )
    except (WlanHtnetError, FileNotFoundError) as e:
        click.echo(f"Error running ablation: {e}", err=True)
        raise click.Abort() from e
    _print_table(
        "Feature ablation",
        ["removed", "test RMSE", "test MAE"],
        [(r.removed, r.test_rmse, r.test_mae) for r in rows],
    )


@cli.group()
def config():
    """Configuration management commands"""
    pass


@config.command()
@click.option("--output", type=click.Path(), help="Output path for sample config")
def init(output):
    """Initialize a sample configuration file"""
    output_path = Path(output) if output else Path("config.yaml")
    try:
        save_config(get_default_config(), output_path)
    except (ValueError, OSError) as e:
        click.echo(f"Error writing config: {e}", err=True)
        raise click.Abort() from e
    click.echo(f"Sample configuration written to {output_path}")


def main() -> None:
    """Entry point for CLI"""
    cli()


if __name__ == "__main__":
    main()
