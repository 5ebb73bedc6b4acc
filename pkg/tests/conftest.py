"""Shared fixtures and small builders used across the test modules."""

from pathlib import Path

import numpy as np
import pytest

from drs.region import RegionOfCompetence, inverse_distance_weights

DATA_DIR = Path(__file__).resolve().parents[1] / "data"


@pytest.fixture
def two_neighbor_region() -> RegionOfCompetence:
    """K=2 region at distances 1 and 3 (weights 0.75/0.25), observed targets
    [0.5, 0.8], one member predicting [0.4, 1.0] on the neighbors."""
    return RegionOfCompetence(
        neighbor_indices=np.array([0, 1]),
        distances=np.array([1.0, 3.0]),
        d_weights=np.array([0.75, 0.25]),
        observed=np.array([0.5, 0.8]),
        member_predictions=np.array([[0.4, 1.0]]),
    )


def random_region(rng: np.random.Generator, k: int, n_members: int) -> RegionOfCompetence:
    """A structurally valid region with random contents: ascending positive
    distances, weights from the real weight rule, random observations and
    member predictions."""
    distances = np.sort(rng.uniform(0.05, 5.0, size=k))
    return RegionOfCompetence(
        neighbor_indices=np.arange(k),
        distances=distances,
        d_weights=inverse_distance_weights(distances),
        observed=rng.normal(size=k),
        member_predictions=rng.normal(size=(n_members, k)),
    )


def write_csv(path: Path, features: np.ndarray, targets: np.ndarray, header=None) -> Path:
    """Write a feature matrix plus target column as a plain CSV file."""
    rows = []
    if header is not None:
        rows.append(",".join(header))
    for x, y in zip(features, targets):
        rows.append(",".join(f"{float(v)!r}" for v in x) + f",{float(y)!r}")
    path.write_text("\n".join(rows) + "\n")
    return path


def synthetic_dataset(rng: np.random.Generator, n: int, d: int = 4):
    """Smooth nonlinear response with mild noise; returns (features, targets)."""
    X = rng.uniform(-1.0, 1.0, size=(n, d))
    y = (
        X[:, 0] ** 2
        + np.sin(2.0 * X[:, 1 % d])
        + 0.5 * X[:, 2 % d]
        + rng.normal(0.0, 0.05, size=n)
    )
    return X, y
