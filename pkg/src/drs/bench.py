"""Replicated cross-validation benchmark over datasets, algorithms, and measures.

One run: for each replication, the dataset is re-split into k folds; per
fold a bagged ensemble and an individual tree are fitted on the training
part and every configured (algorithm, measure) pipeline predicts every test
pattern. The per-method replication MSE is the arithmetic mean of the fold
MSEs; results aggregate to mean(std) cells over replications, rendered by
default on the 1e-4 scale. All numbers are a deterministic function of
(config, seed).

Method columns are labeled ``single``, ``mean``, ``median`` for the
baselines and ``ds:m3``-style pairs for the dynamic algorithms.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .datasets import Dataset, apply_normalization, kfold_split, normalize_minmax
from .learners import TreeParams, fit_individual, generate_ensemble
from .measures import MEASURE_IDS, score_all
from .region import build_region
from .rng import derive_seed
from .selection import ds_predict, dw_predict, dw_weights, dws_predict

DEFAULT_SEED = 1729
ALGORITHMS = ("single", "mean", "median", "ds", "dw", "dws")
DYNAMIC_ALGORITHMS = ("ds", "dw", "dws")
NORMALIZATION_MODES = ("global", "fold", "none")
SCALES = ("1e-4", "raw")


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a benchmark run (data paths aside, immutable)."""

    data: tuple[str, ...] = ()
    target_column: int | str = -1
    algorithms: tuple[str, ...] = ALGORITHMS
    measures: tuple[str, ...] = MEASURE_IDS
    k: int = 10
    n_members: int = 100
    folds: int = 10
    replications: int = 3
    seed: int = DEFAULT_SEED
    tree_params: TreeParams = field(default_factory=TreeParams)
    normalization: str = "global"
    scale: str = "1e-4"
    dws_literal_threshold: bool = False
    jobs: int = 1
    out_dir: str = "drs-out"

    def __post_init__(self):
        object.__setattr__(self, "algorithms", tuple(a.lower() for a in self.algorithms))
        object.__setattr__(self, "measures", tuple(m.lower() for m in self.measures))
        if not self.algorithms:
            raise ValueError("at least one algorithm is required")
        for a in self.algorithms:
            if a not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {a!r}; expected one of {ALGORITHMS}")
        for m in self.measures:
            if m not in MEASURE_IDS:
                raise ValueError(f"unknown measure {m!r}; expected one of {MEASURE_IDS}")
        if any(a in DYNAMIC_ALGORITHMS for a in self.algorithms) and not self.measures:
            raise ValueError("dynamic algorithms require at least one measure")
        for name, value in [
            ("k", self.k),
            ("n_members", self.n_members),
            ("replications", self.replications),
            ("jobs", self.jobs),
        ]:
            if value < 1:
                raise ValueError(f"{name} must be >= 1, got {value}")
        if self.folds < 2:
            raise ValueError(f"folds must be >= 2, got {self.folds}")
        if self.normalization not in NORMALIZATION_MODES:
            raise ValueError(
                f"normalization must be one of {NORMALIZATION_MODES}, got {self.normalization!r}"
            )
        if self.scale not in SCALES:
            raise ValueError(f"scale must be one of {SCALES}, got {self.scale!r}")

    def method_keys(self) -> list[tuple[str, str]]:
        """(algorithm, measure) pairs in run order; measure is '' for baselines."""
        keys = []
        for algo in self.algorithms:
            if algo in DYNAMIC_ALGORITHMS:
                keys.extend((algo, m) for m in self.measures)
            else:
                keys.append((algo, ""))
        return keys

    @property
    def tracks_agreement(self) -> bool:
        return "ds" in self.algorithms and {"m3", "m7"} <= set(self.measures)


def method_label(algorithm: str, measure: str = "") -> str:
    return f"{algorithm}:{measure}" if measure else algorithm


@dataclass
class RunResult:
    """Per-replication MSEs for every (dataset, method) cell, plus agreement rates."""

    config: RunConfig
    dataset_names: tuple[str, ...]
    mse: dict  # (dataset, algorithm, measure) -> list of per-replication MSE
    agreement: dict  # dataset -> list of per-replication m3/m7 DS winner agreement

    def mean_std(self, dataset: str, algorithm: str, measure: str = ""):
        return summarize(self.mse[(dataset, algorithm, measure)])


def mse(predictions, targets) -> float:
    """Mean squared error; lengths must match and be nonzero."""
    p = np.asarray(predictions, dtype=float)
    t = np.asarray(targets, dtype=float)
    if p.shape != t.shape or p.ndim != 1:
        raise ValueError(f"length mismatch: {p.shape} vs {t.shape}")
    if p.size == 0:
        raise ValueError("mse of empty vectors")
    return float(np.mean((p - t) ** 2))


def summarize(values) -> tuple[float, float]:
    """Mean and sample standard deviation (0.0 for a single value)."""
    v = np.asarray(values, dtype=float)
    std = float(np.std(v, ddof=1)) if v.size > 1 else 0.0
    return float(np.mean(v)), std


def render_cell(mean: float, std: float, scale: str = "1e-4") -> str:
    if scale == "1e-4":
        return f"{mean * 1e4:.2f}({std * 1e4:.2f})"
    return f"{mean:.6g}({std:.6g})"


def displayed_value(mean: float, scale: str = "1e-4") -> float:
    """The cell mean at the precision the table displays (used for ties)."""
    if scale == "1e-4":
        return round(mean * 1e4, 2)
    return float(f"{mean:.6g}")


def run_replication(config: RunConfig, dataset: Dataset, replication_seed: int):
    """One replication: a fresh k-fold split, everything refitted per fold.

    Returns ({(algorithm, measure): mse}, agreement_rate_or_None) where the
    MSE is the arithmetic mean over the fold MSEs and the agreement rate is
    the fraction of test patterns on which DS under m3 and m7 picks the
    same member (tracked when the config includes ds with both measures).
    """
    data = dataset
    if config.normalization == "global":
        data, _ = normalize_minmax(dataset)
    folds = kfold_split(data.n_instances, config.folds, replication_seed)
    min_train = min(len(f.train_indices) for f in folds)
    if config.k > min_train:
        raise ValueError(
            f"k ({config.k}) exceeds the smallest training fold ({min_train}) "
            f"of dataset {dataset.name!r}"
        )

    keys = config.method_keys()
    dynamic = [a for a in config.algorithms if a in DYNAMIC_ALGORITHMS]
    fold_mses = {key: [] for key in keys}
    agree_hits = 0
    agree_total = 0

    for fold in folds:
        train = data.subset(fold.train_indices)
        test = data.subset(fold.test_indices)
        if config.normalization == "fold":
            _, params = normalize_minmax(train)
            train = apply_normalization(train, params)
            test = apply_normalization(test, params)
        n_test = test.n_instances
        predictions = {key: np.empty(n_test) for key in keys}

        ensemble = None
        if any(a != "single" for a in config.algorithms):
            ens_seed = derive_seed(replication_seed, fold.fold_id)
            ensemble = generate_ensemble(
                train.features, train.targets, config.n_members,
                config.tree_params, ens_seed,
            )
            member_qpreds = ensemble.predict_all(test.features)

        if ("single", "") in predictions:
            individual = fit_individual(train.features, train.targets, config.tree_params)
            predictions[("single", "")] = individual.predict(test.features)
        if ("mean", "") in predictions:
            predictions[("mean", "")] = member_qpreds.mean(axis=0)
        if ("median", "") in predictions:
            predictions[("median", "")] = np.median(member_qpreds, axis=0)

        if dynamic:
            train_preds = ensemble.predict_all(train.features)
            for j in range(n_test):
                region = build_region(
                    test.features[j], train.features, train.targets,
                    ensemble, config.k, reference_predictions=train_preds,
                )
                qp = member_qpreds[:, j]
                scores = {m: score_all(m, region, qp) for m in config.measures}
                for algo in dynamic:
                    for m in config.measures:
                        if algo == "ds":
                            value, _ = ds_predict(scores[m], qp)
                        elif algo == "dw":
                            value = dw_predict(dw_weights(scores[m]), qp)
                        else:
                            value, _ = dws_predict(
                                scores[m], qp, config.dws_literal_threshold
                            )
                        predictions[(algo, m)][j] = value
                if config.tracks_agreement:
                    agree_hits += int(
                        np.argmin(scores["m3"].per_member)
                        == np.argmin(scores["m7"].per_member)
                    )
                    agree_total += 1

        for key in keys:
            fold_mses[key].append(mse(predictions[key], test.targets))

    replication_mse = {key: float(np.mean(vals)) for key, vals in fold_mses.items()}
    agreement = agree_hits / agree_total if agree_total else None
    return replication_mse, agreement


def _replication_task(args):
    config, dataset, dataset_index, rep = args
    rep_seed = derive_seed(config.seed, rep)
    return dataset_index, rep, run_replication(config, dataset, rep_seed)


def run_benchmark(config: RunConfig, datasets: list[Dataset]) -> RunResult:
    """The full protocol: every dataset x replication, merged deterministically.

    Replication r uses seed ``derive_seed(config.seed, r)`` regardless of
    execution order, so jobs > 1 changes wall time only, never a number.
    """
    if not datasets:
        raise ValueError("at least one dataset is required")
    names = [d.name for d in datasets]
    tasks = [
        (config, dataset, i, rep)
        for i, dataset in enumerate(datasets)
        for rep in range(config.replications)
    ]
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(config.jobs, len(tasks))) as pool:
            outcomes = list(pool.map(_replication_task, tasks))
    else:
        outcomes = [_replication_task(t) for t in tasks]

    mse_lists = {
        (name, algo, m): [None] * config.replications
        for name in names
        for algo, m in config.method_keys()
    }
    agreement = {name: [None] * config.replications for name in names}
    for dataset_index, rep, (rep_mse, agree) in outcomes:
        name = names[dataset_index]
        for (algo, m), value in rep_mse.items():
            mse_lists[(name, algo, m)][rep] = value
        agreement[name][rep] = agree
    if not config.tracks_agreement:
        agreement = {}
    return RunResult(config, tuple(names), mse_lists, agreement)


def aggregate(result: RunResult) -> dict:
    """(dataset, algorithm, measure) -> (mse_mean, mse_std) over replications."""
    keys = result.config.method_keys()
    if not keys:
        raise ValueError("no methods to aggregate")
    return {
        (name, algo, m): result.mean_std(name, algo, m)
        for name in result.dataset_names
        for algo, m in keys
    }


def win_tie_loss(result: RunResult) -> dict:
    """Per method column: datasets where it is strictly best / tied for best / worse.

    Comparison happens at the precision the table displays (two decimals on
    the 1e-4 scale), so equal-looking cells count as ties.
    """
    scale = result.config.scale
    columns = result.config.method_keys()
    counts = {method_label(*key): [0, 0, 0] for key in columns}
    for name in result.dataset_names:
        values = [displayed_value(result.mean_std(name, *key)[0], scale) for key in columns]
        best = min(values)
        n_best = values.count(best)
        for key, v in zip(columns, values):
            label = method_label(*key)
            if v == best and n_best == 1:
                counts[label][0] += 1
            elif v == best:
                counts[label][1] += 1
            else:
                counts[label][2] += 1
    return {label: tuple(c) for label, c in counts.items()}


def diff_vs_m7(result: RunResult) -> list[tuple]:
    """Per (dataset, dynamic algorithm): m7's error minus the best measure's error.

    The best measure is the minimum over all configured measures (m7
    included), so differences are never negative. Values are at displayed
    precision on the configured scale. Requires m7 among the measures.
    """
    config = result.config
    if "m7" not in config.measures:
        return []
    rows = []
    for algo in config.algorithms:
        if algo not in DYNAMIC_ALGORITHMS:
            continue
        for name in result.dataset_names:
            values = {
                m: displayed_value(result.mean_std(name, algo, m)[0], config.scale)
                for m in config.measures
            }
            best = min(values.values())
            best_measure = next(m for m in config.measures if values[m] == best)
            rows.append((name, algo, best_measure, round(values["m7"] - best, 10)))
    return rows


def render_table(result: RunResult) -> str:
    """Plain-text results table: datasets as rows, methods as columns,
    mean(std) cells at the configured scale, and a final Win/Tie/Loss row."""
    config = result.config
    columns = config.method_keys()
    labels = [method_label(*key) for key in columns]
    wtl = win_tie_loss(result)
    header = ["Dataset"] + labels
    rows = []
    for name in result.dataset_names:
        cells = [render_cell(*result.mean_std(name, *key), config.scale) for key in columns]
        rows.append([name] + cells)
    rows.append(["Win/Tie/Loss"] + ["/".join(map(str, wtl[label])) for label in labels])
    widths = [max(len(r[i]) for r in [header] + rows) for i in range(len(header))]
    out = io.StringIO()
    scale_note = "errors on the 1e-4 scale" if config.scale == "1e-4" else "raw errors"
    out.write(
        f"MSE mean(std) over {config.replications} replications, {scale_note}\n"
    )
    for r in [header] + rows:
        out.write("  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() + "\n")
    return out.getvalue()


def write_outputs(result: RunResult, out_dir) -> list[Path]:
    """Write results.csv, wtl.csv, diff_m7.csv, table.txt, and (when the run
    tracked it) agreement_m3_m7.csv. Returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    config = result.config
    written = []

    path = out / "results.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dataset", "algorithm", "measure", "mse_mean", "mse_std", "scale"])
        stats = aggregate(result)
        for name in result.dataset_names:
            for algo, m in config.method_keys():
                mean, std = stats[(name, algo, m)]
                writer.writerow([name, algo, m, repr(mean), repr(std), config.scale])
    written.append(path)

    path = out / "wtl.csv"
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "win", "tie", "loss"])
        for label, (w, t, l) in win_tie_loss(result).items():
            writer.writerow([label, w, t, l])
    written.append(path)

    diffs = diff_vs_m7(result)
    if diffs:
        path = out / "diff_m7.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["dataset", "algorithm", "best_measure", "m7_minus_best"])
            for row in diffs:
                writer.writerow(list(row))
        written.append(path)

    if result.agreement:
        path = out / "agreement_m3_m7.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["dataset", "replication", "ds_winner_agreement"])
            for name in result.dataset_names:
                for rep, rate in enumerate(result.agreement[name]):
                    writer.writerow([name, rep, repr(rate)])
        written.append(path)

    path = out / "table.txt"
    path.write_text(render_table(result))
    written.append(path)
    return written
