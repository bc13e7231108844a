"""The instrumented Lloyd iteration.

One iteration = one reassignment of all points to their nearest center
(strict-improvement rule) followed by one center-of-mass update.  Every
iteration is recorded with full telemetry: potential before/after,
bisector distances of all crossings, active-cluster count, per-center
movement, the minimum center distance before the step, and empty-cluster
events.  A run terminates when an iteration reassigns no point and moves
no center (that final no-op iteration is itself recorded) or when the
iteration cap is hit.

Empty clusters retain their stale center unchanged; the cluster may
repopulate later.  This preserves potential monotonicity.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import DimensionMismatchError, InfeasibleInitError
from .geometry import (
    BisectorCrossing,
    ClusteringState,
    Instance,
    bisector_distance,
    center_of_mass,
    min_center_distance,
    potential,
    squared_distances,
)
from .rng import uniform_generator

DEFAULT_MAX_ITERATIONS = 10**6
INIT_METHODS = ("uniform-points", "first-k", "explicit")

TERMINATION_CONVERGED = "Converged"
TERMINATION_MAX_ITERATIONS = "MaxIterations"


def drop_tolerance(potential_before: float) -> float:
    """Float-noise allowance for potential-drop comparisons."""
    return 1e-9 * (1.0 + potential_before)


@dataclass(frozen=True)
class InitSpec:
    """How to select the k initial centers."""

    method: str
    k: int
    seed: int = 0
    centers: np.ndarray | None = None


@dataclass
class IterationRecord:
    iteration: int
    potential_before: float
    potential_after: float
    drop: float
    reassigned: list[BisectorCrossing]
    active_clusters: int
    center_movements: np.ndarray
    min_center_distance: float  # NaN when fewer than 2 non-empty clusters
    empty_cluster_events: list[int]


@dataclass
class Epoch:
    """Maximal run of consecutive iterations in which every center
    assumes at most two distinct positions (bit-exact comparison)."""

    start: int
    end: int
    distinct_positions: tuple[int, ...]

    @property
    def length(self) -> int:
        return self.end - self.start + 1


@dataclass
class RunTrace:
    """Ordered iteration records plus the derived structure of a run.

    ``center_history[t]`` holds the center array after t iterations
    (entry 0 is the initial centers); ``assignment_history`` likewise
    when recording was enabled.
    """

    records: list[IterationRecord]
    termination: str
    init_method: str
    seed: int
    center_history: list[np.ndarray]
    assignment_history: list[np.ndarray] | None
    final_state: ClusteringState
    _epochs: list[Epoch] | None = field(default=None, repr=False)

    @property
    def iterations(self) -> int:
        return len(self.records)

    @property
    def final_potential(self) -> float:
        return self.records[-1].potential_after

    @property
    def epochs(self) -> list[Epoch]:
        if self._epochs is None:
            self._epochs = detect_epochs(self)
        return self._epochs


def init_centers(instance: Instance, spec: InitSpec) -> np.ndarray:
    """Select k initial centers; deterministic given the spec's seed."""
    k = spec.k
    if k < 1:
        raise InfeasibleInitError("k must be at least 1")
    if spec.method == "explicit":
        if spec.centers is None:
            raise InfeasibleInitError("explicit init needs a centers array")
        centers = np.asarray(spec.centers, dtype=np.float64)
        if centers.shape != (k, instance.dim):
            raise DimensionMismatchError(
                f"explicit centers shape {centers.shape} != ({k}, {instance.dim})"
            )
        return centers.copy()
    if spec.method == "first-k":
        if k > instance.n:
            raise InfeasibleInitError(f"first-k needs k <= n, got k={k}, n={instance.n}")
        return instance.points[:k].copy()
    if spec.method == "uniform-points":
        if k > instance.n:
            raise InfeasibleInitError(
                f"uniform-points needs k <= n, got k={k}, n={instance.n}"
            )
        gen = uniform_generator(spec.seed)
        idx = gen.choice(instance.n, size=k, replace=False)
        return instance.points[idx].copy()
    raise InfeasibleInitError(f"unknown init method {spec.method!r}")


def _assign_all(
    points: np.ndarray, centers: np.ndarray, current: np.ndarray
) -> np.ndarray:
    """Vectorized strict-improvement assignment (see assign_nearest)."""
    d2 = squared_distances(points, centers)
    best = d2.argmin(axis=1)
    rows = np.arange(points.shape[0])
    move = d2[rows, best] < d2[rows, current]
    return np.where(move, best, current)


def initial_state(instance: Instance, centers: np.ndarray) -> ClusteringState:
    """State 0: each point assigned to its nearest initial center
    (lowest index on exact ties), centers left as given."""
    centers = np.asarray(centers, dtype=np.float64)
    if centers.ndim != 2 or centers.shape[1] != instance.dim:
        raise DimensionMismatchError(
            f"centers shape {centers.shape} incompatible with dimension {instance.dim}"
        )
    assignment = squared_distances(instance.points, centers).argmin(axis=1)
    return ClusteringState(assignment=assignment, centers=centers, iteration=0)


def lloyd_step(instance: Instance, state: ClusteringState) -> tuple[ClusteringState, IterationRecord]:
    """One reassignment + center update, fully instrumented.

    Crossing distances are measured against the bisector of the pre-step
    centers of the (from, to) pair.  A cluster that ends the step with no
    members keeps its previous center and is listed in
    ``empty_cluster_events``.
    """
    points = instance.points
    old_centers = state.centers
    old_assignment = state.assignment
    k = state.k

    pot_before = potential(instance, old_assignment, old_centers)
    delta_before = min_center_distance(old_centers, include=~state.empty_flags)

    new_assignment = _assign_all(points, old_centers, old_assignment)

    moved = np.nonzero(new_assignment != old_assignment)[0]
    crossings = [
        BisectorCrossing(
            point_index=int(i),
            from_cluster=int(old_assignment[i]),
            to_cluster=int(new_assignment[i]),
            distance_to_bisector=bisector_distance(
                points[i], old_centers[old_assignment[i]], old_centers[new_assignment[i]]
            ),
        )
        for i in moved
    ]

    counts = np.bincount(new_assignment, minlength=k)
    new_centers = old_centers.copy()
    empty_events = []
    for c in range(k):
        if counts[c] == 0:
            empty_events.append(c)
        else:
            new_centers[c] = center_of_mass(points[new_assignment == c])

    movements = np.sqrt(
        np.einsum("kd,kd->k", new_centers - old_centers, new_centers - old_centers)
    )

    active = 0
    if moved.size:
        touched = np.unique(
            np.concatenate([old_assignment[moved], new_assignment[moved]])
        )
        active = int(touched.size)

    pot_after = potential(instance, new_assignment, new_centers)

    record = IterationRecord(
        iteration=state.iteration + 1,
        potential_before=pot_before,
        potential_after=pot_after,
        drop=pot_before - pot_after,
        reassigned=crossings,
        active_clusters=active,
        center_movements=movements,
        min_center_distance=math.nan if delta_before is None else delta_before,
        empty_cluster_events=empty_events,
    )
    new_state = ClusteringState(
        assignment=new_assignment,
        centers=new_centers,
        iteration=state.iteration + 1,
        empty_flags=counts == 0,
    )
    return new_state, record


def run(
    instance: Instance,
    init: InitSpec,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
    keep_assignments: bool = True,
) -> RunTrace:
    """Iterate lloyd_step until a no-op iteration or the cap."""
    if max_iterations < 1:
        raise DimensionMismatchError("max_iterations must be at least 1")
    state = initial_state(instance, init_centers(instance, init))

    records: list[IterationRecord] = []
    center_history = [state.centers.copy()]
    assignment_history = [state.assignment.copy()] if keep_assignments else None

    termination = TERMINATION_MAX_ITERATIONS
    for _ in range(max_iterations):
        new_state, record = lloyd_step(instance, state)
        records.append(record)
        center_history.append(new_state.centers.copy())
        if assignment_history is not None:
            assignment_history.append(new_state.assignment.copy())
        fixed_point = not record.reassigned and np.array_equal(
            new_state.centers, state.centers
        )
        state = new_state
        if fixed_point:
            termination = TERMINATION_CONVERGED
            break

    return RunTrace(
        records=records,
        termination=termination,
        init_method=init.method,
        seed=init.seed,
        center_history=center_history,
        assignment_history=assignment_history,
        final_state=state,
    )


def detect_epochs(trace: RunTrace) -> list[Epoch]:
    """Greedy maximal partition of the iteration sequence into epochs.

    An epoch starting at iteration s covers the center positions in
    effect anywhere within it (center_history[s-1 .. e]); it is extended
    while every cluster has at most two distinct positions, compared
    bit-exactly.
    """
    if not trace.records:
        raise DimensionMismatchError("cannot detect epochs of an empty trace")
    history = trace.center_history
    k = history[0].shape[0]

    epochs: list[Epoch] = []
    start = 1
    positions: list[set[bytes]] = [{history[0][c].tobytes()} for c in range(k)]
    for t in range(1, len(history)):
        keys = [history[t][c].tobytes() for c in range(k)]
        grown = [positions[c] | {keys[c]} for c in range(k)]
        if any(len(g) > 2 for g in grown):
            epochs.append(
                Epoch(start, t - 1, tuple(len(p) for p in positions))
            )
            start = t
            positions = [
                {history[t - 1][c].tobytes(), keys[c]} for c in range(k)
            ]
        else:
            positions = grown
    epochs.append(
        Epoch(start, len(history) - 1, tuple(len(p) for p in positions))
    )
    return epochs


def deduplicated_assignments(trace: RunTrace) -> list[bytes]:
    """Assignment snapshots with consecutive duplicates collapsed.

    Consecutive duplicates are iterations that reassigned nothing (the
    first center-update-only iteration and the terminal no-op); any other
    duplicate would be a revisited clustering.
    """
    if trace.assignment_history is None:
        raise DimensionMismatchError("run() was called with keep_assignments=False")
    out: list[bytes] = []
    for snap in trace.assignment_history:
        key = snap.tobytes()
        if not out or out[-1] != key:
            out.append(key)
    return out


def check_trace_invariants(instance: Instance, trace: RunTrace) -> list[str]:
    """Violation messages for the per-run invariants (empty when clean).

    Checked: weakly decreasing potential, drop >= max center movement
    squared, strict progress on reassignments, epoch length <= 4, and no
    repeated clustering (modulo consecutive duplicates).
    """
    problems: list[str] = []
    for rec in trace.records:
        tol = drop_tolerance(rec.potential_before)
        if rec.drop < -tol:
            problems.append(
                f"iteration {rec.iteration}: drop {rec.drop} below -tol {-tol}"
            )
        max_move_sq = float(np.max(rec.center_movements) ** 2)
        if rec.drop < max_move_sq - tol:
            problems.append(
                f"iteration {rec.iteration}: drop {rec.drop} < max movement^2 {max_move_sq}"
            )
        if rec.reassigned and rec.drop <= 0.0:
            problems.append(
                f"iteration {rec.iteration}: reassignment without strict drop"
            )
    for epoch in trace.epochs:
        if epoch.length > 4:
            problems.append(
                f"epoch [{epoch.start}, {epoch.end}] has length {epoch.length} > 4"
            )
    if trace.assignment_history is not None:
        seen = deduplicated_assignments(trace)
        if len(set(seen)) != len(seen):
            problems.append("a clustering repeated within the run")
    return problems


# ---------------------------------------------------------------------------
# Trace serialization: one meta line, then one JSON record per line with the
# fields in fixed order.  Floats use shortest round-trip repr via json, so a
# fixed seed reproduces the file byte for byte.
# ---------------------------------------------------------------------------


def _record_to_json(rec: IterationRecord) -> str:
    obj = {
        "iteration": rec.iteration,
        "potential_before": rec.potential_before,
        "potential_after": rec.potential_after,
        "drop": rec.drop,
        "reassigned": [
            [c.point_index, c.from_cluster, c.to_cluster, c.distance_to_bisector]
            for c in rec.reassigned
        ],
        "active_clusters": rec.active_clusters,
        "center_movements": [float(m) for m in rec.center_movements],
        "min_center_distance": None
        if math.isnan(rec.min_center_distance)
        else rec.min_center_distance,
        "empty_cluster_events": rec.empty_cluster_events,
    }
    return json.dumps(obj, separators=(",", ":"))


def trace_lines(trace: RunTrace) -> list[str]:
    meta = {
        "format": "kmeanslab-trace",
        "version": 1,
        "termination": trace.termination,
        "init_method": trace.init_method,
        "seed": trace.seed,
        "iterations": trace.iterations,
        "epoch_lengths": [e.length for e in trace.epochs],
    }
    lines = [json.dumps(meta, separators=(",", ":"))]
    lines.extend(_record_to_json(rec) for rec in trace.records)
    return lines


def save_trace(trace: RunTrace, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in trace_lines(trace):
            fh.write(line)
            fh.write("\n")


def load_trace(path) -> tuple[dict, list[IterationRecord]]:
    """Parse a trace file back into (meta, records)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln]
    if not lines:
        raise DimensionMismatchError(f"empty trace file {path}")
    meta = json.loads(lines[0])
    if meta.get("format") != "kmeanslab-trace":
        raise DimensionMismatchError(f"{path} is not a kmeanslab trace file")
    records = []
    for ln in lines[1:]:
        obj = json.loads(ln)
        records.append(
            IterationRecord(
                iteration=obj["iteration"],
                potential_before=obj["potential_before"],
                potential_after=obj["potential_after"],
                drop=obj["drop"],
                reassigned=[
                    BisectorCrossing(int(p), int(f), int(t), float(dist))
                    for p, f, t, dist in obj["reassigned"]
                ],
                active_clusters=obj["active_clusters"],
                center_movements=np.asarray(obj["center_movements"]),
                min_center_distance=math.nan
                if obj["min_center_distance"] is None
                else obj["min_center_distance"],
                empty_cluster_events=list(obj["empty_cluster_events"]),
            )
        )
    return meta, records


def run_min_center_distance(records: Iterable[IterationRecord]) -> float:
    """Smallest recorded min-center-distance of a run (NaN if none valid)."""
    valid = [r.min_center_distance for r in records if not math.isnan(r.min_center_distance)]
    return min(valid) if valid else math.nan
