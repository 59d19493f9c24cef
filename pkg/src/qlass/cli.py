"""Command-line pipeline: preprocess, train, evaluate, compare, bench.

Exit codes: 0 success, 2 config error, 3 data error, 4 training error,
5 missing artifact. Every command writes only below ``--out``.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import statistics
import sys
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from . import learners
from .agent import AgentConfig, DQNAgent, EpisodeLog, FAMILY_CHOICES
from .data import (
    ColumnSpec,
    Dataset,
    generate_synthetic,
    load_csv,
    prepare,
    read_prepared,
    write_prepared,
    write_table,
)
from .env import ClassificationEnv
from .errors import ConfigError, DataError, MissingArtifact, QlassError, TrainingError
from .learners import io as model_io
from .learners.forest import ForestParams
from .learners.tree import TreeParams
from .metrics import Metrics, build_comparison, compute_metrics
from . import plotting, rlcore

EXIT_OK, EXIT_CONFIG, EXIT_DATA, EXIT_TRAINING, EXIT_MISSING = 0, 2, 3, 4, 5
SEED_ENV = "QLASS_SEED"
METRICS_FORMAT = "qlass-metrics"
PREP_FORMAT = "qlass-preprocess"
BENCH_FORMAT = "qlass-bench"


@dataclass
class RunConfig:
    out: str = "runs"
    data: str | None = None
    synthetic: tuple | None = None
    target: str | None = None
    features: list | None = None
    identifiers: list = field(default_factory=list)
    categorical: list = field(default_factory=list)
    include_identifiers: bool = False
    bins: int = 3
    split: float = 0.8
    seed: int = 0
    family: str = "tree"
    criterion: str = "gini"
    max_depth: int | None = None
    min_samples_split: int = 2
    n_trees: int = 10
    features_per_split: str = "sqrt"
    ensemble_size: int = 5
    episodes: int = 50
    epsilon_start: float = 1.0
    epsilon_decay: float = 0.995
    epsilon_min: float = 0.05
    refit_every: int = 1
    target_sync_every: int = 1
    buffer_capacity: int = 10_000
    average: str = "macro"
    name: str | None = None
    model: str | None = None
    runs: list | None = None
    families: list | None = None
    reps: int = 5

    @property
    def out_dir(self) -> Path:
        return Path(self.out)

    @property
    def prep_dir(self) -> Path:
        return self.out_dir / "prep"

    def learner_params(self, family: str | None = None):
        family = family or self.family
        tree = TreeParams(self.criterion, self.max_depth, self.min_samples_split)
        if family == "tree":
            return tree
        if family == "forest":
            fps = self.features_per_split
            fps = int(fps) if str(fps).isdigit() else fps
            return ForestParams(self.n_trees, fps, tree)
        return None

    def agent_config(self, family: str | None = None) -> AgentConfig:
        return AgentConfig(
            family=family or self.family,
            ensemble_size=self.ensemble_size,
            episodes=self.episodes,
            epsilon_start=self.epsilon_start,
            epsilon_decay=self.epsilon_decay,
            epsilon_min=self.epsilon_min,
            buffer_capacity=self.buffer_capacity,
            refit_every=self.refit_every,
            target_sync_every=self.target_sync_every,
            seed=self.seed,
        )

    def validate(self) -> None:
        if not 0.0 < self.split < 1.0:
            raise ConfigError(f"--split must lie in (0, 1), got {self.split}")
        if self.family not in FAMILY_CHOICES:
            raise ConfigError(f"--family must be one of {FAMILY_CHOICES}")
        if self.bins < 0 or self.bins == 1:
            raise ConfigError("--bins must be 0 (use target values as classes) or at least 2")
        if self.reps < 1:
            raise ConfigError("--reps must be positive")
        if self.average not in ("macro", "micro"):
            raise ConfigError("--average must be macro or micro")
        if self.family != "mixed":
            self.learner_params()
        self.agent_config()


# -- argument parsing -----------------------------------------------------------

def _csv_list(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _synthetic(text):
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected n,d,k,sep")
    try:
        return (int(parts[0]), int(parts[1]), int(parts[2]), float(parts[3]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse {text!r} as n,d,k,sep") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("common")
    g.add_argument("--config", help="JSON file of option values; flags override it")
    g.add_argument("--out", help="output directory (default: runs)")
    g.add_argument("--seed", type=int, help=f"random seed (fallback: ${SEED_ENV}, then 0)")

    data = argparse.ArgumentParser(add_help=False)
    g = data.add_argument_group("data")
    g.add_argument("--data", help="input CSV file")
    g.add_argument("--synthetic", type=_synthetic, metavar="N,D,K,SEP", help="generate data instead of reading --data")
    g.add_argument("--target", help="target column name")
    g.add_argument("--features", type=_csv_list, help="comma-separated feature columns (default: all others)")
    g.add_argument("--identifiers", type=_csv_list, help="identifier columns, excluded from features by default")
    g.add_argument("--categorical", type=_csv_list, help="text-valued columns to label-encode")
    g.add_argument("--include-identifiers", action="store_const", const=True,
                   help="use identifier columns as features too")
    g.add_argument("--bins", type=int, help="quantile levels for a numeric target; 0 = target values are classes (default 3)")
    g.add_argument("--split", type=float, help="training fraction (default 0.8)")

    model = argparse.ArgumentParser(add_help=False)
    g = model.add_argument_group("learner")
    g.add_argument("--family", choices=FAMILY_CHOICES, help="learner family (default tree)")
    g.add_argument("--criterion", choices=("gini", "info_gain"))
    g.add_argument("--max-depth", type=int)
    g.add_argument("--min-samples-split", type=int)
    g.add_argument("--n-trees", type=int)
    g.add_argument("--features-per-split", help="sqrt, all, or an integer")
    g.add_argument("--average", choices=("macro", "micro"), help="recall/precision averaging (default macro)")
    g.add_argument("--name", help="run name (default: family, or dqn-<family>)")

    agent = argparse.ArgumentParser(add_help=False)
    g = agent.add_argument_group("agent")
    g.add_argument("--ensemble-size", type=int)
    g.add_argument("--episodes", type=int)
    g.add_argument("--epsilon-start", type=float)
    g.add_argument("--epsilon-decay", type=float)
    g.add_argument("--epsilon-min", type=float)
    g.add_argument("--refit-every", type=int)
    g.add_argument("--target-sync-every", type=int)
    g.add_argument("--buffer-capacity", type=int)

    parser = _Parser(prog="qlass", description="Classifier ensembles as DQN agents, compared with their baselines.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("synth", parents=[common, data], help="write a synthetic CSV")
    sub.add_parser("preprocess", parents=[common, data], help="clean, encode, split and normalize")
    sub.add_parser("train-baseline", parents=[common, model], help="fit a baseline classifier")
    sub.add_parser("train-dqn", parents=[common, model, agent], help="train an ensemble DQN agent")
    p = sub.add_parser("evaluate", parents=[common, model], help="score a saved model on the test split")
    p.add_argument("--model", help="model or agent file")
    p = sub.add_parser("compare", parents=[common], help="comparison table and figures")
    p.add_argument("--runs", type=_csv_list, help="run names in table order (default: all runs)")
    p = sub.add_parser("bench", parents=[common, model, agent], help="time and size baselines against DQN agents")
    p.add_argument("--reps", type=int, help="repetitions per timing (default 5)")
    p.add_argument("--families", type=_csv_list, help="families to bench (default: tree,forest,nb)")
    sub.add_parser("sanity-mdp", parents=[common], help="check tabular Q-learning against value iteration")
    return parser


def resolve_config(args) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        path = Path(args.config)
        try:
            values = json.loads(path.read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
        known = {f.name for f in fields(RunConfig)}
        unknown = set(values) - known
        if unknown:
            raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    if "seed" not in values and getattr(args, "seed", None) is None and os.environ.get(SEED_ENV):
        try:
            values["seed"] = int(os.environ[SEED_ENV])
        except ValueError:
            raise ConfigError(f"${SEED_ENV} must be an integer") from None
    for f in fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            values[f.name] = flag
    if values.get("synthetic") is not None:
        values["synthetic"] = tuple(values["synthetic"])
    try:
        cfg = RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    cfg.validate()
    return cfg


# -- helpers --------------------------------------------------------------------

def _write_json(doc, path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def _read_json(path, fmt):
    if not path.exists():
        raise MissingArtifact(f"missing artifact: {path}")
    return model_io.load(path, fmt)


def _column_spec(cfg: RunConfig) -> list[ColumnSpec]:
    if not cfg.target:
        raise ConfigError("--target is required with --data")
    path = Path(cfg.data)
    if not path.exists():
        raise DataError(f"input file not found: {path}")
    features = cfg.features
    if features is None:
        with path.open(newline="", encoding="utf-8") as fh:
            header = [h.strip() for h in next(csv.reader(fh), [])]
        features = [h for h in header if h != cfg.target and h not in cfg.identifiers]
    categorical = set(cfg.categorical)
    spec = [ColumnSpec(n, "categorical" if n in categorical else "numeric", "identifier") for n in cfg.identifiers]
    spec += [ColumnSpec(n, "categorical" if n in categorical else "numeric", "feature") for n in features]
    target_kind = "numeric" if cfg.bins else "categorical"
    spec.append(ColumnSpec(cfg.target, target_kind, "target"))
    return spec


def _source(cfg: RunConfig) -> Dataset:
    if cfg.synthetic is not None:
        n, d, k, sep = cfg.synthetic
        return generate_synthetic(n, d, k, sep, cfg.seed)
    if cfg.data is None:
        raise ConfigError("one of --data or --synthetic is required")
    return load_csv(cfg.data, _column_spec(cfg))


def _load_prepared(cfg: RunConfig):
    manifest = _read_json(cfg.prep_dir / "manifest.json", PREP_FORMAT)
    for part in ("train.csv", "test.csv"):
        if not (cfg.prep_dir / part).exists():
            raise MissingArtifact(f"missing artifact: {cfg.prep_dir / part}")
    classes = manifest["class_names"]
    return (read_prepared(cfg.prep_dir / "train.csv", classes),
            read_prepared(cfg.prep_dir / "test.csv", classes))


def _metrics_doc(name, display, kind, family, metrics: Metrics, train, test, extra=None):
    doc = {
        "format": METRICS_FORMAT,
        "format_version": model_io.FORMAT_VERSION,
        "name": name,
        "display_name": display,
        "kind": kind,
        "family": family,
        "class_names": test.class_names,
        "n_train": train.n_rows,
        "n_test": test.n_rows,
        "metrics": metrics.to_dict(),
    }
    if extra:
        doc.update(extra)
    return doc


def _display(family: str, dqn: bool = False) -> str:
    base = learners.DISPLAY_NAMES.get(family, "Mixed ensemble")
    return f"{base} with DQN" if dqn else base


def _print_metrics(name, m: Metrics) -> None:
    print(f"{name}: accuracy={m.accuracy:.4f} recall={m.recall:.4f} precision={m.precision:.4f} ({m.average})")
    print("confusion (rows=actual, columns=predicted):")
    for row in m.confusion.counts:
        print("  " + " ".join(f"{v:5d}" for v in row))


# -- commands -------------------------------------------------------------------

def cmd_synth(cfg: RunConfig) -> int:
    if cfg.synthetic is None:
        raise ConfigError("synth needs --synthetic N,D,K,SEP")
    ds = _source(cfg)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.out_dir / "synthetic.csv"
    write_table(ds, path)
    print(f"wrote {path} ({ds.n_rows} rows, {len(ds.feature_names)} features, {ds.n_classes} classes)")
    return EXIT_OK


def cmd_preprocess(cfg: RunConfig) -> int:
    source = _source(cfg)
    split = prepare(source, ratio=cfg.split, seed=cfg.seed, bins=cfg.bins or None,
                    include_identifiers=cfg.include_identifiers)
    train, test = split.train, split.test
    cfg.prep_dir.mkdir(parents=True, exist_ok=True)
    write_prepared(train, cfg.prep_dir / "train.csv")
    write_prepared(test, cfg.prep_dir / "test.csv")
    manifest = {
        "format": PREP_FORMAT,
        "format_version": model_io.FORMAT_VERSION,
        "source": {"data": cfg.data, "synthetic": list(cfg.synthetic) if cfg.synthetic else None},
        "columns": [asdict(c) for c in source.columns],
        "feature_names": train.feature_names,
        "class_names": train.class_names,
        "encoders": train.encoders,
        "thresholds": train.thresholds,
        "norm_params": train.norm_params,
        "seed": cfg.seed,
        "ratio": cfg.split,
        "train_rows": train.rows.tolist(),
        "test_rows": test.rows.tolist(),
    }
    _write_json(manifest, cfg.prep_dir / "manifest.json")
    print(f"train {train.n_rows} rows / test {test.n_rows} rows -> {cfg.prep_dir}")
    return EXIT_OK


def _fit_baseline(cfg, family, train):
    return learners.fit(family, train.features, train.labels, cfg.learner_params(family), cfg.seed,
                        n_classes=train.n_classes)


def _train_dqn(cfg, family, train):
    agent = DQNAgent(train.n_classes, cfg.agent_config(family),
                     None if family == "mixed" else cfg.learner_params(family))
    episodes = agent.train(ClassificationEnv.from_dataset(train, episode_seed=cfg.seed))
    return agent, episodes


def cmd_train_baseline(cfg: RunConfig) -> int:
    if cfg.family == "mixed":
        raise ConfigError("train-baseline needs a single family (tree, forest or nb)")
    train, test = _load_prepared(cfg)
    name = cfg.name or cfg.family
    model = _fit_baseline(cfg, cfg.family, train)
    metrics = compute_metrics(test.labels, model.predict(test.features), test.n_classes, cfg.average)
    model_path = cfg.out_dir / "models" / f"{name}.json"
    model_path.parent.mkdir(parents=True, exist_ok=True)
    model_io.save_model(model, model_path, family=cfg.family, params=cfg.learner_params())
    _write_json(_metrics_doc(name, _display(cfg.family), "baseline", cfg.family, metrics, train, test,
                             {"model": str(model_path.relative_to(cfg.out_dir))}),
                cfg.out_dir / "metrics" / f"{name}.json")
    _print_metrics(name, metrics)
    return EXIT_OK


def cmd_train_dqn(cfg: RunConfig) -> int:
    train, test = _load_prepared(cfg)
    name = cfg.name or f"dqn-{cfg.family}"
    agent, episodes = _train_dqn(cfg, cfg.family, train)
    predictions, _ = agent.evaluate(test.features, test.labels)
    metrics = compute_metrics(test.labels, predictions, test.n_classes, cfg.average)
    for sub in ("models", "curves"):
        (cfg.out_dir / sub).mkdir(parents=True, exist_ok=True)
    agent.save(cfg.out_dir / "models" / f"{name}.json")
    curve = cfg.out_dir / "curves" / f"{name}.csv"
    episodes.write_csv(curve)
    _write_json(_metrics_doc(name, _display(cfg.family, dqn=True), "dqn", cfg.family, metrics, train, test,
                             {"model": f"models/{name}.json", "curve": f"curves/{name}.csv",
                              "supervised_pairs": len(agent.supervised)}),
                cfg.out_dir / "metrics" / f"{name}.json")
    if len(episodes):
        acc = episodes.accuracies
        print(f"episodes {len(acc)}: first train accuracy {acc[0]:.3f}, last {acc[-1]:.3f}")
    _print_metrics(name, metrics)
    return EXIT_OK


def cmd_evaluate(cfg: RunConfig) -> int:
    if not cfg.model:
        raise ConfigError("evaluate needs --model")
    path = Path(cfg.model)
    if not path.exists():
        raise MissingArtifact(f"missing artifact: {path}")
    _, test = _load_prepared(cfg)
    doc = json.loads(path.read_text(encoding="utf-8"))
    if doc.get("format") == "qlass-agent":
        model = DQNAgent.from_dict(model_io.load(path, "qlass-agent"))
        kind, family = "dqn", model.config.family
    else:
        model = model_io.model_from_dict(model_io.load(path)["model"])
        kind, family = "baseline", doc.get("family", model.kind)
    metrics = compute_metrics(test.labels, model.predict(test.features), test.n_classes, cfg.average)
    name = cfg.name or f"eval-{path.stem}"
    try:
        shown = str(path.resolve().relative_to(cfg.out_dir.resolve()))
    except ValueError:
        shown = str(path)
    _write_json(_metrics_doc(name, _display(family, kind == "dqn"), kind, family, metrics, test, test,
                             {"model": shown}),
                cfg.out_dir / "metrics" / f"{name}.json")
    _print_metrics(name, metrics)
    return EXIT_OK


def _run_order(names):
    def key(name):
        family = name.removeprefix("dqn-")
        rank = learners.FAMILIES.index(family) if family in learners.FAMILIES else len(learners.FAMILIES)
        return (rank, name.startswith("dqn-"), name)
    return sorted(names, key=key)


def cmd_compare(cfg: RunConfig) -> int:
    metrics_dir = cfg.out_dir / "metrics"
    names = cfg.runs
    if names is None:
        names = _run_order(p.stem for p in metrics_dir.glob("*.json")) if metrics_dir.is_dir() else []
    if not names:
        raise MissingArtifact("no runs to compare")
    docs = [_read_json(metrics_dir / f"{n}.json", METRICS_FORMAT) for n in names]
    entries = [(d["display_name"], Metrics.from_dict(d["metrics"]), d.get("curve")) for d in docs]
    report = build_comparison(entries)
    table = report.render()
    (cfg.out_dir / "comparison.txt").write_text(table, encoding="utf-8")
    _write_json({"format": "qlass-comparison", "format_version": model_io.FORMAT_VERSION,
                 "runs": names, **report.to_dict()}, cfg.out_dir / "comparison.json")
    plotting.accuracy_bars(report.rows, cfg.out_dir / "accuracy.svg")
    baselines = {d["family"]: d["metrics"]["accuracy"] for d in docs if d["kind"] == "baseline"}
    for doc in docs:
        if not doc.get("curve"):
            continue
        curve = cfg.out_dir / doc["curve"]
        if not curve.exists():
            raise MissingArtifact(f"missing artifact: {curve}")
        plotting.learning_curve(EpisodeLog.read_csv(curve), curve.with_suffix(".svg"),
                                title=doc["display_name"], baseline_accuracy=baselines.get(doc["family"]))
    print(table, end="")
    return EXIT_OK


def _median_ms(fn, reps):
    times = []
    result = None
    for _ in range(reps):
        start = time.perf_counter()
        result = fn()
        times.append((time.perf_counter() - start) * 1000.0)
    return statistics.median(times), result


def bench_family(cfg: RunConfig, family: str, train, test) -> list[dict]:
    """Median fit/predict wall time and analytic size for a baseline and its DQN agent."""
    rows = []
    per_1k = 1000.0 / test.n_rows
    fit_ms, model = _median_ms(lambda: _fit_baseline(cfg, family, train), cfg.reps)
    pred_ms, _ = _median_ms(lambda: model.predict(test.features), cfg.reps)
    rows.append({"name": family, "display_name": _display(family), "kind": "baseline",
                 "fit_ms": fit_ms, "predict_ms_per_1k": pred_ms * per_1k, "size_bytes": model.size_bytes()})
    fit_ms, (agent, _) = _median_ms(lambda: _train_dqn(cfg, family, train), cfg.reps)
    pred_ms, _ = _median_ms(lambda: agent.predict(test.features), cfg.reps)
    rows.append({"name": f"dqn-{family}", "display_name": _display(family, dqn=True), "kind": "dqn",
                 "fit_ms": fit_ms, "predict_ms_per_1k": pred_ms * per_1k, "size_bytes": agent.size_bytes()})
    return rows


def render_bench(rows) -> str:
    header = ("Model", "fit ms", "predict ms/1k", "size bytes")
    body = [(r["display_name"], f"{r['fit_ms']:.1f}", f"{r['predict_ms_per_1k']:.2f}", str(r["size_bytes"]))
            for r in rows]
    widths = [max(len(h), *(len(b[i]) for b in body)) for i, h in enumerate(header)]
    lines = ["  ".join([header[0].ljust(widths[0]), *(h.rjust(w) for h, w in zip(header[1:], widths[1:]))])]
    lines.append("  ".join("-" * w for w in widths))
    for b in body:
        lines.append("  ".join([b[0].ljust(widths[0]), *(c.rjust(w) for c, w in zip(b[1:], widths[1:]))]))
    return "\n".join(lines) + "\n"


def cmd_bench(cfg: RunConfig) -> int:
    train, test = _load_prepared(cfg)
    families = cfg.families or list(learners.FAMILIES)
    unknown = set(families) - set(learners.FAMILIES)
    if unknown:
        raise ConfigError(f"cannot bench families {sorted(unknown)}; choose from {learners.FAMILIES}")
    rows = []
    for family in families:
        rows.extend(bench_family(cfg, family, train, test))
    doc = {"format": BENCH_FORMAT, "format_version": model_io.FORMAT_VERSION, "reps": cfg.reps,
           "n_train": train.n_rows, "n_test": test.n_rows, "models": rows}
    _write_json(doc, cfg.out_dir / "bench.json")
    text = render_bench(rows)
    (cfg.out_dir / "bench.txt").write_text(text, encoding="utf-8")
    print(text, end="")
    return EXIT_OK


def cmd_sanity_mdp(cfg: RunConfig) -> int:
    """Chain (5 states) and 3x3 gridworld: greedy policy and Q against value iteration."""
    out = cfg.out_dir / "sanity"
    out.mkdir(parents=True, exist_ok=True)
    cases = [
        ("chain5", rlcore.chain_mdp(5), rlcore.QLearnParams(alpha=0.1, gamma=0.9, episodes=2000)),
        ("grid3x3", rlcore.gridworld(3, 3, (2, 2), 0.0), rlcore.QLearnParams(alpha=0.1, gamma=0.9, episodes=2000)),
    ]
    ok = True
    for name, env, params in cases:
        run = rlcore.run_tabular_q(env, params, cfg.seed)
        oracle = rlcore.value_iteration(env, params.gamma)
        if name.startswith("grid"):
            # the goal cell is absorbing and never acted in
            live = [s for s in range(env.n_states) if env.coords(s) != env.goal]
        else:
            live = list(range(env.n_states))
        error = float(np.abs(run.q.values[live] - oracle.values[live]).max())
        policy_ok = all(oracle.values[s, run.q.greedy_policy()[s]] == oracle.values[s].max() for s in live)
        passed = policy_ok and error <= 0.05
        ok &= passed
        rlcore.write_returns_csv(run, out / f"{name}_returns.csv")
        print(f"{'PASS' if passed else 'FAIL'} {name}: greedy policy optimal={policy_ok} max |Q - Q*| = {error:.2e}")
    return EXIT_OK if ok else EXIT_TRAINING


COMMANDS = {
    "synth": cmd_synth,
    "preprocess": cmd_preprocess,
    "train-baseline": cmd_train_baseline,
    "train-dqn": cmd_train_dqn,
    "evaluate": cmd_evaluate,
    "compare": cmd_compare,
    "bench": cmd_bench,
    "sanity-mdp": cmd_sanity_mdp,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
        return COMMANDS[args.command](cfg)
    except MissingArtifact as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (TrainingError, QlassError) as exc:
        print(f"training error: {exc}", file=sys.stderr)
        return EXIT_TRAINING


if __name__ == "__main__":
    sys.exit(main())
