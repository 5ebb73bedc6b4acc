"""Loading, min-max normalization, and k-fold partitioning of regression data.

A :class:`Dataset` is an immutable (features, targets) pair. The ingestion
format is plain CSV: comma separated, decimal point ``.``, an optional single
header line, no quoting of numeric cells. The target is one column of the
file (by default the last one); every other column is a feature.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .rng import make_rng


class DatasetError(ValueError):
    """Raised for unreadable, malformed, or empty dataset files."""


@dataclass(frozen=True)
class Dataset:
    """An in-memory regression dataset.

    features : (n_instances, n_features) float array
    targets  : (n_instances,) float array
    name     : identifier used in reports (usually the file stem)
    """

    features: np.ndarray
    targets: np.ndarray
    name: str = "dataset"

    def __post_init__(self):
        object.__setattr__(self, "features", np.asarray(self.features, dtype=float))
        object.__setattr__(self, "targets", np.asarray(self.targets, dtype=float))
        if self.features.ndim != 2 or self.targets.ndim != 1:
            raise DatasetError("features must be 2-D and targets 1-D")
        if self.features.shape[0] != self.targets.shape[0]:
            raise DatasetError(
                f"row count mismatch: {self.features.shape[0]} feature rows "
                f"vs {self.targets.shape[0]} targets"
            )
        self.features.setflags(write=False)
        self.targets.setflags(write=False)

    @property
    def n_instances(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def subset(self, indices) -> "Dataset":
        """Dataset restricted to the given row indices (order preserved)."""
        idx = np.asarray(indices, dtype=int)
        return Dataset(self.features[idx], self.targets[idx], self.name)


@dataclass(frozen=True)
class NormalizationParams:
    """Per-column min/max used by :func:`normalize_minmax`.

    Columns are the feature columns in order followed by the target column;
    ``column_names`` labels them ("f0", "f1", ..., "target" by default).
    """

    col_min: np.ndarray
    col_max: np.ndarray
    column_names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "col_min", np.asarray(self.col_min, dtype=float))
        object.__setattr__(self, "col_max", np.asarray(self.col_max, dtype=float))
        if not self.column_names:
            names = tuple(f"f{i}" for i in range(len(self.col_min) - 1)) + ("target",)
            object.__setattr__(self, "column_names", names)

    @property
    def col_range(self) -> np.ndarray:
        return self.col_max - self.col_min

    def save_csv(self, path) -> None:
        """Write one ``column,min,max`` row per column."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["column", "min", "max"])
            for name, lo, hi in zip(self.column_names, self.col_min, self.col_max):
                writer.writerow([name, repr(float(lo)), repr(float(hi))])

    @classmethod
    def load_csv(cls, path) -> "NormalizationParams":
        names, lows, highs = [], [], []
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            next(reader)  # header
            for row in reader:
                names.append(row[0])
                lows.append(float(row[1]))
                highs.append(float(row[2]))
        return cls(np.array(lows), np.array(highs), tuple(names))


@dataclass(frozen=True)
class FoldSplit:
    """One train/test partition of a k-fold split."""

    train_indices: np.ndarray
    test_indices: np.ndarray
    fold_id: int


def _looks_like_header(cells: list[str]) -> bool:
    for cell in cells:
        try:
            float(cell)
        except ValueError:
            return True
    return False


def load_csv(path, target_column: int | str = -1, header: bool | None = None) -> Dataset:
    """Load a regression dataset from a CSV file.

    Parameters
    ----------
    path : file path
    target_column : int or str
        Column holding the target: an index (negative allowed, default is
        the last column) or, when the file has a header, a column name.
    header : bool or None
        True/False to force header handling; None (default) sniffs: the
        first line is treated as a header when any of its cells is not a
        number.

    Raises
    ------
    DatasetError
        For an unreadable file, an empty file, ragged rows, or any cell
        that does not parse as a finite number (the message names the
        offending row and column, 1-based as they appear in the file).
    """
    path = Path(path)
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc
    rows = [r for r in rows if r]  # drop blank lines
    if not rows:
        raise DatasetError(f"{path}: empty dataset")

    column_names = None
    first_data_line = 1
    if header is None:
        header = _looks_like_header(rows[0])
    if header:
        column_names = [c.strip() for c in rows[0]]
        rows = rows[1:]
        first_data_line = 2
        if not rows:
            raise DatasetError(f"{path}: no data rows after header")

    n_cols = len(rows[0])
    if n_cols < 2:
        raise DatasetError(f"{path}: need at least two columns (features and target)")

    values = np.empty((len(rows), n_cols), dtype=float)
    for i, row in enumerate(rows):
        if len(row) != n_cols:
            raise DatasetError(
                f"{path}: ragged row {first_data_line + i}: "
                f"expected {n_cols} cells, found {len(row)}"
            )
        for j, cell in enumerate(row):
            try:
                v = float(cell)
            except ValueError:
                raise DatasetError(
                    f"{path}: non-numeric cell {cell!r} at row "
                    f"{first_data_line + i}, column {j + 1}"
                ) from None
            if not np.isfinite(v):
                raise DatasetError(
                    f"{path}: non-finite cell {cell!r} at row "
                    f"{first_data_line + i}, column {j + 1}"
                )
            values[i, j] = v

    if isinstance(target_column, str):
        if column_names is None:
            raise DatasetError(
                f"{path}: target column {target_column!r} given by name "
                "but the file has no header"
            )
        try:
            t = column_names.index(target_column)
        except ValueError:
            raise DatasetError(
                f"{path}: no column named {target_column!r}; "
                f"columns are {column_names}"
            ) from None
    else:
        t = int(target_column)
        if t < 0:
            t += n_cols
        if not 0 <= t < n_cols:
            raise DatasetError(f"{path}: target column {target_column} out of range")

    features = np.delete(values, t, axis=1)
    targets = values[:, t]
    return Dataset(features, targets, name=path.stem)


def normalize_minmax(d: Dataset) -> tuple[Dataset, NormalizationParams]:
    """Map every column of ``d`` (features and target) into [0, 1].

    Each column c is mapped x -> (x - min_c) / (max_c - min_c). A constant
    column maps to all zeros. Returns the normalized dataset together with
    the per-column parameters, so values can be mapped back with
    :func:`denormalize` or applied to new data with :func:`apply_normalization`.
    """
    if d.n_instances == 0:
        raise DatasetError("cannot normalize an empty dataset")
    cols = np.column_stack([d.features, d.targets])
    lo = cols.min(axis=0)
    hi = cols.max(axis=0)
    params = NormalizationParams(lo, hi)
    normalized = apply_normalization(d, params)
    return normalized, params


def apply_normalization(d: Dataset, params: NormalizationParams) -> Dataset:
    """Apply stored min/max parameters to a dataset.

    Data outside the range the parameters were computed on maps outside
    [0, 1]; only the dataset the parameters came from is guaranteed to land
    inside. Columns that were constant when the parameters were computed
    map to 0.
    """
    cols = np.column_stack([d.features, d.targets])
    rng_ = params.col_range
    scale = np.where(rng_ > 0, rng_, 1.0)
    out = (cols - params.col_min) / scale
    out[:, rng_ == 0] = 0.0
    return Dataset(out[:, :-1], out[:, -1], d.name)


def denormalize(d: Dataset, params: NormalizationParams) -> Dataset:
    """Invert :func:`apply_normalization` (constant columns recover their value)."""
    cols = np.column_stack([d.features, d.targets])
    out = cols * params.col_range + params.col_min
    return Dataset(out[:, :-1], out[:, -1], d.name)


def denormalize_targets(values, params: NormalizationParams) -> np.ndarray:
    """Map normalized target values back to their original scale."""
    values = np.asarray(values, dtype=float)
    return values * params.col_range[-1] + params.col_min[-1]


def kfold_split(n: int, folds: int, seed: int) -> list[FoldSplit]:
    """Randomly deal ``n`` instances into ``folds`` test sets of near-equal size.

    Instances are permuted by a generator seeded with ``seed`` and cut into
    contiguous chunks; fold sizes differ by at most one. Each instance lands
    in exactly one test set; indices within each fold are sorted ascending.
    """
    if folds < 2:
        raise ValueError(f"folds must be >= 2, got {folds}")
    if folds > n:
        raise ValueError(f"folds ({folds}) exceeds instance count ({n})")
    perm = make_rng(seed).permutation(n)
    base, extra = divmod(n, folds)
    splits = []
    start = 0
    for fold_id in range(folds):
        size = base + (1 if fold_id < extra else 0)
        test = np.sort(perm[start : start + size])
        mask = np.ones(n, dtype=bool)
        mask[test] = False
        splits.append(FoldSplit(np.flatnonzero(mask), test, fold_id))
        start += size
    return splits
