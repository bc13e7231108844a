"""Core domain types and exact geometric primitives.

A point is a plain 1-D ``numpy.ndarray`` of float64 coordinates; point
sets are (n, d) arrays.  All functions here are pure, operate on
immutable inputs, and use straightforward float64 arithmetic: squared
distances are compared directly (no square roots) wherever only an
ordering is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional

import numpy as np

from .errors import (
    DegenerateBisectorError,
    DimensionMismatchError,
    EmptyClusterError,
)

if TYPE_CHECKING:  # pragma: no cover
    from .perturb import PerturbationMeta

# A point is a (d,) float64 array.
Point = np.ndarray


def as_point_array(points) -> np.ndarray:
    """Coerce to a (n, d) float64 array and validate finiteness."""
    arr = np.asarray(points, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise DimensionMismatchError(f"expected a (n, d) array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionMismatchError("coordinates must be finite (no NaN/inf)")
    return arr


@dataclass
class Instance:
    """A point set of n points in d dimensions, optionally with its
    perturbation metadata (adversarial means, sigma, seed)."""

    points: np.ndarray
    meta: Optional["PerturbationMeta"] = None

    def __post_init__(self):
        self.points = as_point_array(self.points)
        if self.n < 1:
            raise DimensionMismatchError("an instance needs at least one point")
        if self.dim < 1:
            raise DimensionMismatchError("an instance needs dimension >= 1")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass
class ClusteringState:
    """Assignment vector plus the k current center positions.

    ``empty_flags[i]`` marks clusters with zero members under
    ``assignment``; their stale centers are excluded from the minimum
    center distance.  After a center-update step every non-empty
    cluster's center equals the center of mass of its members.
    """

    assignment: np.ndarray
    centers: np.ndarray
    iteration: int = 0
    empty_flags: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        self.assignment = np.asarray(self.assignment, dtype=np.int64)
        self.centers = np.asarray(self.centers, dtype=np.float64)
        k = self.centers.shape[0]
        if self.assignment.min(initial=0) < 0 or self.assignment.max(initial=0) >= k:
            raise DimensionMismatchError("assignment indices must lie in [0, k)")
        if self.empty_flags is None:
            counts = np.bincount(self.assignment, minlength=k)
            self.empty_flags = counts == 0
        else:
            self.empty_flags = np.asarray(self.empty_flags, dtype=bool)

    @property
    def k(self) -> int:
        return self.centers.shape[0]


@dataclass(frozen=True)
class BisectorCrossing:
    """One point's move between clusters, with its distance to the
    bisector of the two pre-step centers it crossed."""

    point_index: int
    from_cluster: int
    to_cluster: int
    distance_to_bisector: float

    def __post_init__(self):
        if self.from_cluster == self.to_cluster:
            raise DimensionMismatchError("a crossing needs two distinct clusters")
        if self.distance_to_bisector < 0:
            raise DimensionMismatchError("bisector distance must be non-negative")


def squared_distances(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """(n, k) matrix of squared Euclidean distances."""
    diff = points[:, None, :] - centers[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def potential(instance: Instance, assignment: np.ndarray, centers: np.ndarray) -> float:
    """Sum of squared distances from each point to its assigned center."""
    assignment = np.asarray(assignment, dtype=np.int64)
    centers = np.asarray(centers, dtype=np.float64)
    if assignment.shape != (instance.n,):
        raise DimensionMismatchError(
            f"assignment length {assignment.shape} != n = {instance.n}"
        )
    if centers.ndim != 2 or centers.shape[1] != instance.dim:
        raise DimensionMismatchError(
            f"centers shape {centers.shape} incompatible with dimension {instance.dim}"
        )
    k = centers.shape[0]
    if assignment.min() < 0 or assignment.max() >= k:
        raise DimensionMismatchError("assignment indices must lie in [0, k)")
    diff = instance.points - centers[assignment]
    return float(np.einsum("nd,nd->", diff, diff))


def center_of_mass(points: np.ndarray) -> np.ndarray:
    """Coordinate-wise mean of a non-empty point set.

    Members are summed in index order, so identical member sets always
    give bit-identical centers.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1)
    if pts.shape[0] == 0:
        raise EmptyClusterError("center of mass of an empty set is undefined")
    return pts.sum(axis=0) / pts.shape[0]


def assign_nearest(point: np.ndarray, centers: np.ndarray, current_index: int) -> int:
    """Nearest-center assignment with the strict-improvement rule.

    The point keeps ``current_index`` unless some other center is
    strictly closer; among strictly closer ties the lowest index wins.
    Comparisons are exact float comparisons of squared distances (ties
    have measure zero under perturbation).
    """
    centers = np.asarray(centers, dtype=np.float64)
    point = np.asarray(point, dtype=np.float64)
    d2 = np.einsum("kd,kd->k", centers - point, centers - point)
    best = int(np.argmin(d2))
    if d2[best] < d2[current_index]:
        return best
    return int(current_index)


def bisector_distance(point: np.ndarray, c_i: np.ndarray, c_j: np.ndarray) -> float:
    """Euclidean distance from a point to the bisector hyperplane of two
    distinct centers: ``|‖x−c_i‖² − ‖x−c_j‖²| / (2‖c_i−c_j‖)``."""
    point = np.asarray(point, dtype=np.float64)
    c_i = np.asarray(c_i, dtype=np.float64)
    c_j = np.asarray(c_j, dtype=np.float64)
    gap = c_i - c_j
    gap_norm = float(np.sqrt(gap @ gap))
    if gap_norm == 0.0:
        raise DegenerateBisectorError("coincident centers have no bisector")
    di = point - c_i
    dj = point - c_j
    return abs(float(di @ di) - float(dj @ dj)) / (2.0 * gap_norm)


def min_center_distance(centers: np.ndarray, include: np.ndarray | None = None):
    """Minimum pairwise distance over the included centers.

    ``include`` masks out empty-flagged clusters.  Returns ``None`` when
    fewer than two centers are included (not applicable).
    """
    centers = np.asarray(centers, dtype=np.float64)
    if include is not None:
        centers = centers[np.asarray(include, dtype=bool)]
    m = centers.shape[0]
    if m < 2:
        return None
    diff = centers[:, None, :] - centers[None, :, :]
    d2 = np.einsum("ijd,ijd->ij", diff, diff)
    iu = np.triu_indices(m, k=1)
    return float(np.sqrt(d2[iu].min()))
