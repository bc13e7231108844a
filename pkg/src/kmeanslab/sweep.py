"""Parameter sweeps over (n, k, d, sigma, trial) with CSV aggregation.

Per-trial seeds are derived as SHA-256 hashes of (base_seed, n, k, d,
sigma-bits, trial) — see rng.derive_seed — so any cell can be reproduced
from the config alone and results do not depend on cell execution order.
Runs that hit the iteration cap are counted separately but never
dropped.  Every run is checked against the engine invariants; a
violation aborts the cell with full context.
"""

from __future__ import annotations

import json
import math
import os
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product

from .engine import (
    DEFAULT_MAX_ITERATIONS,
    InitSpec,
    RunTrace,
    TERMINATION_MAX_ITERATIONS,
    check_trace_invariants,
    run,
    run_min_center_distance,
    save_trace,
)
from .errors import DimensionMismatchError, SweepInvariantError
from .perturb import MEAN_GENERATORS, generate_means, load_means, perturb
from .rng import derive_seed

CSV_COLUMNS = (
    "n", "k", "d", "sigma", "trials",
    "iters_mean", "iters_median", "iters_max", "iters_min",
    "final_potential_mean", "frac_capped", "max_epoch_mean",
    "min_delta_mean", "seed",
)

CONFIG_FORMAT = "kmeanslab-sweep-config"
CONFIG_VERSION = 1


@dataclass
class SweepConfig:
    n_grid: list[int]
    k_grid: list[int]
    d_grid: list[int]
    sigma_grid: list[float]
    trials: int
    mean_generator: str = "uniform-grid"
    init: str = "uniform-points"
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    base_seed: int = 0
    means_file: str | None = None
    trace_dir: str | None = None
    threads: int = 1

    def __post_init__(self):
        for name, grid in (
            ("n", self.n_grid), ("k", self.k_grid),
            ("d", self.d_grid), ("sigma", self.sigma_grid),
        ):
            if not grid:
                raise DimensionMismatchError(f"{name} grid must be non-empty")
        if max(self.k_grid) > min(self.n_grid):
            raise DimensionMismatchError(
                f"k <= n must hold for every cell: max k = {max(self.k_grid)}, "
                f"min n = {min(self.n_grid)}"
            )
        if self.trials < 1:
            raise DimensionMismatchError("trials must be at least 1")
        if self.mean_generator not in MEAN_GENERATORS:
            raise DimensionMismatchError(
                f"unknown mean generator {self.mean_generator!r}"
            )
        if self.mean_generator == "from-file" and not self.means_file:
            raise DimensionMismatchError("mean generator from-file needs means_file")
        if self.threads < 1:
            raise DimensionMismatchError("threads must be at least 1")

    def cells(self):
        return product(self.n_grid, self.k_grid, self.d_grid, self.sigma_grid)


def load_config(path) -> SweepConfig:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if obj.get("format") != CONFIG_FORMAT:
        raise DimensionMismatchError(f"{path} is not a sweep config file")
    if obj.get("version") != CONFIG_VERSION:
        raise DimensionMismatchError(f"unsupported config version {obj.get('version')}")
    return SweepConfig(
        n_grid=list(obj["n"]),
        k_grid=list(obj["k"]),
        d_grid=list(obj["d"]),
        sigma_grid=[float(s) for s in obj["sigma"]],
        trials=int(obj["trials"]),
        mean_generator=obj.get("mean_generator", "uniform-grid"),
        init=obj.get("init", "uniform-points"),
        max_iterations=int(obj.get("max_iterations", DEFAULT_MAX_ITERATIONS)),
        base_seed=int(obj.get("base_seed", 0)),
        means_file=obj.get("means_file"),
        trace_dir=obj.get("trace_dir"),
    )


def save_config(config: SweepConfig, path) -> None:
    obj = {
        "format": CONFIG_FORMAT,
        "version": CONFIG_VERSION,
        "n": config.n_grid,
        "k": config.k_grid,
        "d": config.d_grid,
        "sigma": config.sigma_grid,
        "trials": config.trials,
        "mean_generator": config.mean_generator,
        "init": config.init,
        "max_iterations": config.max_iterations,
        "base_seed": config.base_seed,
        "means_file": config.means_file,
        "trace_dir": config.trace_dir,
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")


@dataclass
class CellStats:
    n: int
    k: int
    d: int
    sigma: float
    trials: int
    iters_mean: float
    iters_median: float
    iters_max: int
    iters_min: int
    final_potential_mean: float
    frac_capped: float
    max_epoch_mean: float
    min_delta_mean: float
    seed: int

    def csv_values(self) -> list[str]:
        return [_format(getattr(self, col)) for col in CSV_COLUMNS]


@dataclass
class SweepResult:
    config: SweepConfig
    rows: list[CellStats] = field(default_factory=list)

    def to_csv_lines(self) -> list[str]:
        lines = [",".join(CSV_COLUMNS)]
        lines.extend(",".join(row.csv_values()) for row in self.rows)
        return lines

    def save_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for line in self.to_csv_lines():
                fh.write(line)
                fh.write("\n")


def _format(value) -> str:
    # Shortest round-trip decimal keeps the CSV exact and byte-stable.
    if isinstance(value, float):
        return repr(value)
    return repr(int(value))


def aggregate(traces: list[RunTrace], n: int, k: int, d: int, sigma: float, seed: int) -> CellStats:
    """Summary statistics over the runs of one cell."""
    if not traces:
        raise DimensionMismatchError("cannot aggregate an empty trace list")
    iters = [t.iterations for t in traces]
    deltas = [run_min_center_distance(t.records) for t in traces]
    valid_deltas = [v for v in deltas if not math.isnan(v)]
    return CellStats(
        n=n, k=k, d=d, sigma=sigma, trials=len(traces),
        iters_mean=statistics.fmean(iters),
        iters_median=float(statistics.median(iters)),
        iters_max=max(iters),
        iters_min=min(iters),
        final_potential_mean=statistics.fmean(t.final_potential for t in traces),
        frac_capped=sum(
            t.termination == TERMINATION_MAX_ITERATIONS for t in traces
        ) / len(traces),
        max_epoch_mean=statistics.fmean(
            max(e.length for e in t.epochs) for t in traces
        ),
        min_delta_mean=statistics.fmean(valid_deltas) if valid_deltas else math.nan,
        seed=seed,
    )


def trial_seed(base_seed: int, n: int, k: int, d: int, sigma: float, trial: int) -> int:
    return derive_seed(base_seed, n, k, d, float(sigma), trial)


def _run_trial(config: SweepConfig, n: int, k: int, d: int, sigma: float, trial: int,
               file_means) -> RunTrace:
    tseed = trial_seed(config.base_seed, n, k, d, sigma, trial)
    if config.mean_generator == "from-file":
        means = file_means
        if means.shape != (n, d):
            raise DimensionMismatchError(
                f"means file shape {means.shape} does not match cell (n={n}, d={d})"
            )
    else:
        means = generate_means(config.mean_generator, n, d, derive_seed(tseed, "means"))
    instance = perturb(means, sigma, derive_seed(tseed, "perturb"))
    trace = run(
        instance,
        InitSpec(method=config.init, k=k, seed=derive_seed(tseed, "init")),
        max_iterations=config.max_iterations,
    )
    problems = check_trace_invariants(instance, trace)
    if problems:
        raise SweepInvariantError(
            f"cell (n={n}, k={k}, d={d}, sigma={sigma!r}), trial {trial}: "
            + "; ".join(problems)
        )
    return trace


def run_sweep(config: SweepConfig) -> SweepResult:
    """Run every (cell, trial), aggregate per cell, optionally persist
    per-run traces.  Deterministic given the base seed."""
    file_means = load_means(config.means_file) if config.mean_generator == "from-file" else None
    if config.trace_dir:
        os.makedirs(config.trace_dir, exist_ok=True)

    result = SweepResult(config=config)
    for n, k, d, sigma in config.cells():
        trial_ids = range(config.trials)
        try:
            if config.threads > 1:
                with ThreadPoolExecutor(max_workers=config.threads) as pool:
                    traces = list(
                        pool.map(
                            lambda t: _run_trial(config, n, k, d, sigma, t, file_means),
                            trial_ids,
                        )
                    )
            else:
                traces = [
                    _run_trial(config, n, k, d, sigma, t, file_means) for t in trial_ids
                ]
        except OSError as exc:
            raise SweepInvariantError(
                f"I/O failure in cell (n={n}, k={k}, d={d}, sigma={sigma!r}): {exc}"
            ) from exc
        if config.trace_dir:
            for t, trace in enumerate(traces):
                name = f"trace_n{n}_k{k}_d{d}_s{repr(float(sigma))}_t{t}.jsonl"
                save_trace(trace, os.path.join(config.trace_dir, name))
        result.rows.append(aggregate(traces, n, k, d, sigma, config.base_seed))
    return result
