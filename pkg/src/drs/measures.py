"""The eight competence measures, m1 through m8.

Every measure maps (region of competence, ensemble member) to a nonnegative
score where LOWER means MORE competent. Seven are error functionals over
the region; m1 is the spread of the member's local predictions, oriented
the same way so all eight share one argmin interface.

Notation used below: f(t_k) is the observed target of neighbor k, fh_n(t_k)
is member n's prediction on neighbor k, fh_n(x) its prediction at the query,
and d_k the normalized inverse-distance weight of neighbor k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .region import RegionOfCompetence

MEASURE_IDS = ("m1", "m2", "m3", "m4", "m5", "m6", "m7", "m8")


@dataclass(frozen=True)
class CompetenceScore:
    """Per-member scores for one measure over one region (lower = more competent)."""

    per_member: np.ndarray
    measure_id: str

    def __post_init__(self):
        object.__setattr__(
            self, "per_member", np.asarray(self.per_member, dtype=float)
        )


def m1_variance(region: RegionOfCompetence, member: int) -> float:
    """Sample variance (divisor K-1) of the member's predictions on the neighbors."""
    if region.k < 2:
        raise ValueError("m1 needs at least 2 neighbors")
    return float(np.var(region.member_predictions[member], ddof=1))


def m2_sum_abs_error(region: RegionOfCompetence, member: int) -> float:
    """sum_k |f(t_k) - fh_n(t_k)| * d_k"""
    err = np.abs(region.observed - region.member_predictions[member])
    return float(np.sum(err * region.d_weights))


def m3_sum_sq_error(region: RegionOfCompetence, member: int) -> float:
    """sum_k (f(t_k) - fh_n(t_k))^2 * d_k"""
    err = (region.observed - region.member_predictions[member]) ** 2
    return float(np.sum(err * region.d_weights))


def m4_min_sq_error(region: RegionOfCompetence, member: int) -> float:
    """min_k (f(t_k) - fh_n(t_k))^2 * d_k"""
    err = (region.observed - region.member_predictions[member]) ** 2
    return float(np.min(err * region.d_weights))


def m5_max_sq_error(region: RegionOfCompetence, member: int) -> float:
    """max_k (f(t_k) - fh_n(t_k))^2 * d_k"""
    err = (region.observed - region.member_predictions[member]) ** 2
    return float(np.max(err * region.d_weights))


def m6_neighbor_similarity(
    region: RegionOfCompetence, member: int, query_prediction: float
) -> float:
    """sum_k (f(t_k) - fh_n(x))^2 * d_k

    How far the member's prediction AT THE QUERY sits from the observed
    neighborhood targets; the only measure that uses the query prediction,
    and the only one that ignores the member's neighbor predictions.
    """
    del member
    err = (region.observed - query_prediction) ** 2
    return float(np.sum(err * region.d_weights))


def m7_root_sum_sq_error(region: RegionOfCompetence, member: int) -> float:
    """sum_k sqrt((f(t_k) - fh_n(t_k))^2 * d_k)"""
    err = (region.observed - region.member_predictions[member]) ** 2
    return float(np.sum(np.sqrt(err * region.d_weights)))


def m8_closest_sq_error(region: RegionOfCompetence, member: int) -> float:
    """(f(t_1) - fh_n(t_1))^2 on the nearest neighbor only, unweighted."""
    return float((region.observed[0] - region.member_predictions[member, 0]) ** 2)


def score_all(
    measure_id: str,
    region: RegionOfCompetence,
    query_predictions=None,
) -> CompetenceScore:
    """Evaluate one measure for every ensemble member of a region at once.

    ``query_predictions`` (one prediction per member at the query pattern)
    is required by m6 and ignored by the others. Measure ids are
    case-insensitive.
    """
    mid = measure_id.lower()
    preds = region.member_predictions
    observed = region.observed
    d = region.d_weights
    if mid == "m1":
        if region.k < 2:
            raise ValueError("m1 needs at least 2 neighbors")
        scores = np.var(preds, axis=1, ddof=1)
    elif mid == "m2":
        scores = np.abs(observed - preds) @ d
    elif mid == "m3":
        scores = ((observed - preds) ** 2) @ d
    elif mid == "m4":
        scores = ((observed - preds) ** 2 * d).min(axis=1)
    elif mid == "m5":
        scores = ((observed - preds) ** 2 * d).max(axis=1)
    elif mid == "m6":
        if query_predictions is None:
            raise ValueError("m6 requires query_predictions")
        qp = np.asarray(query_predictions, dtype=float)
        if qp.shape != (region.n_members,):
            raise ValueError(
                f"query_predictions must have one entry per member "
                f"({region.n_members}), got shape {qp.shape}"
            )
        scores = ((observed[None, :] - qp[:, None]) ** 2) @ d
    elif mid == "m7":
        scores = np.sqrt((observed - preds) ** 2 * d).sum(axis=1)
    elif mid == "m8":
        scores = (observed[0] - preds[:, 0]) ** 2
    else:
        raise ValueError(f"unknown measure id {measure_id!r}; expected one of {MEASURE_IDS}")
    return CompetenceScore(scores, mid)
