"""Shared fixtures: the deterministic fuzz-run suite and an acceptance
report that survives pytest's output capture."""

from __future__ import annotations

import time
from dataclasses import dataclass

import pytest

from kmeanslab.engine import InitSpec, RunTrace, run
from kmeanslab.geometry import Instance
from kmeanslab.perturb import generate_means, perturb
from kmeanslab.rng import derive_seed, uniform_generator

SUITE_BASE_SEED = 20260809

_acceptance_lines: list[str] = []


def record_criterion(name: str, passed: bool, detail: str = "") -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] {name}"
    if detail:
        line += f" :: {detail}"
    _acceptance_lines.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.line(line)


@dataclass
class FuzzRun:
    index: int
    n: int
    k: int
    d: int
    sigma: float
    mean_kind: str
    init_method: str
    instance: Instance
    trace: RunTrace


def _fuzz_configs() -> list[tuple[int, int, int, float]]:
    """1000 deterministic (n, k, d, sigma) configs: a brute-force-sized
    tranche, a 1-D tranche, and small/medium general tranches."""
    gen = uniform_generator(derive_seed(SUITE_BASE_SEED, "configs"))
    sigmas = 10.0 ** gen.uniform(-2.0, 0.0, size=1000)
    configs: list[tuple[int, int, int, float]] = []
    for i in range(170):  # tiny: k^n small enough for exhaustive enumeration
        if i % 3 == 2:
            n, k = int(gen.integers(4, 10)), 3
        else:
            n, k = int(gen.integers(4, 13)), 2
        configs.append((n, k, int(gen.integers(1, 4)), float(sigmas[len(configs)])))
    for _ in range(300):  # one-dimensional
        n = int(gen.integers(8, 81))
        configs.append((n, int(gen.integers(2, 7)), 1, float(sigmas[len(configs)])))
    for _ in range(430):  # small
        n = int(gen.integers(10, 61))
        k = min(int(gen.integers(2, 9)), n)
        configs.append((n, k, int(gen.integers(1, 6)), float(sigmas[len(configs)])))
    for _ in range(100):  # medium
        n = int(gen.integers(80, 201))
        configs.append((n, int(gen.integers(4, 11)), int(gen.integers(2, 6)),
                        float(sigmas[len(configs)])))
    return configs


def build_fuzz_suite() -> tuple[list[FuzzRun], float]:
    start = time.monotonic()
    runs: list[FuzzRun] = []
    for index, (n, k, d, sigma) in enumerate(_fuzz_configs()):
        root = derive_seed(SUITE_BASE_SEED, "run", index)
        mean_kind = "uniform-grid" if index % 2 == 0 else "uniform-random"
        init_method = "first-k" if index % 10 == 9 else "uniform-points"
        means = generate_means(mean_kind, n, d, derive_seed(root, "means"))
        instance = perturb(means, sigma, derive_seed(root, "perturb"))
        trace = run(instance, InitSpec(method=init_method, k=k, seed=derive_seed(root, "init")))
        runs.append(FuzzRun(index, n, k, d, sigma, mean_kind, init_method, instance, trace))
    return runs, time.monotonic() - start


@pytest.fixture(scope="session")
def fuzz_suite():
    runs, duration = build_fuzz_suite()
    return {"runs": runs, "build_seconds": duration}
