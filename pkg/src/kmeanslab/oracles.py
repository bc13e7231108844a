"""Monte Carlo verifiers for the model's probability bounds, plus a
brute-force optimum oracle for tiny instances.

Every Monte Carlo check reports (empirical, bound, sampling_error,
trials) and a one-sided pass verdict: empirical <= bound + 3 *
sampling_error with sampling_error = sqrt(bound / trials).  Bounds are
upper bounds only; no check asserts tightness.  Verdicts are
deterministic given (parameters, seed): trial i uses seed + i, so serial
and parallel execution aggregate identically.

The adversarial means quantified over by the model are unknowable; the
default uniform-grid family is a documented stand-in, so these checks
probe necessity of the bounds rather than the universal claim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .engine import InitSpec, run, run_min_center_distance
from .errors import DimensionMismatchError, UnsupportedError
from .geometry import Instance, center_of_mass, potential
from .perturb import generate_means, perturb
from .props import HOLDS, check_eps_separated, check_eps_spreaded
from .rng import derive_seed, normal_matrix


@dataclass(frozen=True)
class MCResult:
    lemma: str
    params: dict
    empirical: float
    bound: float
    sampling_error: float
    trials: int
    warnings: tuple[str, ...] = field(default=())

    @property
    def margin(self) -> float:
        return 3.0 * self.sampling_error

    @property
    def passed(self) -> bool:
        return self.empirical <= self.bound + self.margin


def _bound_warnings(bound: float) -> tuple[str, ...]:
    out = []
    if bound >= 1.0:
        out.append(f"bound {bound} is vacuous (>= 1)")
    if bound <= 1e-3:
        out.append(f"bound {bound} is untestably small (<= 1e-3)")
    return tuple(out)


def _result(lemma: str, params: dict, violations: int, trials: int, bound: float) -> MCResult:
    return MCResult(
        lemma=lemma,
        params=params,
        empirical=violations / trials,
        bound=bound,
        sampling_error=math.sqrt(bound / trials) if bound > 0 else 0.0,
        trials=trials,
        warnings=_bound_warnings(bound),
    )


def mc_spreaded_bound(
    n: int,
    sigma: float,
    eps: float,
    trials: int,
    seed: int,
    mean_kind: str = "uniform-grid",
) -> MCResult:
    """Fraction of perturbed 1-D instances that are not eps-spreaded,
    against the bound 2 n^4 eps^2 / sigma^2."""
    bound = 2.0 * n**4 * eps * eps / (sigma * sigma)
    means = generate_means(mean_kind, n, 1, derive_seed(seed, "means"))
    violations = 0
    for trial in range(trials):
        inst = perturb(means, sigma, seed + trial)
        if check_eps_spreaded(inst, eps).status != HOLDS:
            violations += 1
    return _result(
        "spreaded-prob",
        {"n": n, "sigma": sigma, "eps": eps, "mean_kind": mean_kind},
        violations,
        trials,
        bound,
    )


def mc_separation_bound(
    n: int,
    d: int,
    sigma: float,
    eps: float,
    trials: int,
    seed: int,
    mean_kind: str = "uniform-grid",
) -> MCResult:
    """Fraction of perturbed instances that are not eps-separated,
    against the bound n^(2d) (4 d eps / sigma)^d.  Only d <= 2 is
    supported (the checker is certified there)."""
    if d > 2:
        raise UnsupportedError("separation checking is certified only for d <= 2")
    bound = float(n ** (2 * d) * (4.0 * d * eps / sigma) ** d)
    means = generate_means(mean_kind, n, d, derive_seed(seed, "means"))
    violations = 0
    for trial in range(trials):
        inst = perturb(means, sigma, seed + trial)
        if check_eps_separated(inst, eps).status != HOLDS:
            violations += 1
    return _result(
        "separation-prob",
        {"n": n, "d": d, "sigma": sigma, "eps": eps, "mean_kind": mean_kind},
        violations,
        trials,
        bound,
    )


def delta_bound_value(n: int, d: int, delta: float, sigma: float) -> float:
    """Closed form ((4d+16) n^4 delta / sigma)^d for Pr[min center
    distance <= delta]."""
    return float(((4.0 * d + 16.0) * n**4 * delta / sigma) ** d)


def mc_delta_bound(
    n: int,
    d: int,
    k: int,
    sigma: float,
    delta: float,
    trials: int,
    seed: int,
    init: str = "uniform-points",
    mean_kind: str = "uniform-grid",
    max_iterations: int = 10_000,
) -> MCResult:
    """Fraction of Lloyd runs on perturbed instances whose smallest
    observed center distance dips to delta or below."""
    bound = delta_bound_value(n, d, delta, sigma)
    means = generate_means(mean_kind, n, d, derive_seed(seed, "means"))
    violations = 0
    for trial in range(trials):
        trial_seed = seed + trial
        inst = perturb(means, sigma, derive_seed(trial_seed, "perturb"))
        trace = run(
            inst,
            InitSpec(method=init, k=k, seed=derive_seed(trial_seed, "init")),
            max_iterations=max_iterations,
            keep_assignments=False,
        )
        smallest = run_min_center_distance(trace.records)
        if not math.isnan(smallest) and smallest <= delta:
            violations += 1
    return _result(
        "delta-bound",
        {"n": n, "d": d, "k": k, "sigma": sigma, "delta": delta, "init": init},
        violations,
        trials,
        bound,
    )


def mc_single_point_bisector(
    ell: int,
    sigma: float,
    delta: float,
    eps: float,
    trials: int,
    seed: int,
    *,
    n: int,
    origin,
    partner,
    r_mean=None,
) -> MCResult:
    """Probability that a Gaussian point r lands within delta of a fixed
    point o while also lying within eps of the bisector of o and
    q = (ell/(ell+1)) p + (1/(ell+1)) r, against the bound
    2 sqrt(n delta eps) / sigma."""
    if not 0 <= ell <= n - 1:
        raise DimensionMismatchError(f"ell must lie in [0, n-1], got {ell}")
    origin = np.asarray(origin, dtype=np.float64)
    partner = np.asarray(partner, dtype=np.float64)
    center = origin if r_mean is None else np.asarray(r_mean, dtype=np.float64)
    d = origin.shape[0]
    bound = 2.0 * math.sqrt(n * delta * eps) / sigma

    r = center + sigma * normal_matrix(trials, d, seed)
    q = (ell / (ell + 1.0)) * partner + (1.0 / (ell + 1.0)) * r

    near_origin = np.linalg.norm(r - origin, axis=1) <= delta
    gap = q - origin
    gap_norm = np.linalg.norm(gap, axis=1)
    do = np.einsum("td,td->t", r - origin, r - origin)
    dq = np.einsum("td,td->t", r - q, r - q)
    with np.errstate(divide="ignore", invalid="ignore"):
        bis_dist = np.abs(do - dq) / (2.0 * gap_norm)
    near_bisector = (gap_norm > 0) & (bis_dist <= eps)
    violations = int(np.count_nonzero(near_origin & near_bisector))
    return _result(
        "single-point",
        {
            "ell": ell,
            "sigma": sigma,
            "delta": delta,
            "eps": eps,
            "n": n,
            "origin": [float(v) for v in origin],
            "partner": [float(v) for v in partner],
        },
        violations,
        trials,
        bound,
    )


def brute_force_optimum(
    instance: Instance, k: int, budget: int = 10**7
) -> tuple[float, np.ndarray]:
    """Exhaustive minimum of the potential over all k^n assignments,
    with centers at the centers of mass.

    The potential is invariant under cluster relabeling, so point 0 is
    pinned to cluster 0 and only the k^(n-1) remaining assignments are
    enumerated.  Batches are scored with the identity
    phi(A) = sum ||x||^2 - sum_c ||sum_{x in c} x||^2 / |c|, then the
    winner's potential is recomputed exactly.  Raises UnsupportedError
    beyond the enumeration budget.
    """
    n, d = instance.n, instance.dim
    if k**n > budget:
        raise UnsupportedError(f"k^n = {k**n} exceeds the enumeration budget {budget}")
    total = k ** (n - 1)
    pts = instance.points
    total_sq = float(np.einsum("nd,nd->", pts, pts))
    powers = (k ** np.arange(n - 1, dtype=np.int64))[None, :]

    best_code = -1
    best_value = math.inf
    batch_size = 1 << 15
    for start in range(0, total, batch_size):
        codes = np.arange(start, min(start + batch_size, total), dtype=np.int64)
        labels = np.zeros((codes.shape[0], n), dtype=np.int64)
        labels[:, 1:] = (codes[:, None] // powers) % k
        recovered = np.zeros(codes.shape[0])
        for c in range(k):
            mask = labels == c
            counts = mask.sum(axis=1)
            sums = mask.astype(np.float64) @ pts
            with np.errstate(divide="ignore", invalid="ignore"):
                contrib = np.einsum("bd,bd->b", sums, sums) / counts
            recovered += np.where(counts > 0, contrib, 0.0)
        values = total_sq - recovered
        local = int(values.argmin())
        if values[local] < best_value:
            best_value = float(values[local])
            best_code = int(codes[local])

    assignment = np.zeros(n, dtype=np.int64)
    assignment[1:] = [(best_code // k**j) % k for j in range(n - 1)]
    centers = np.vstack(
        [
            center_of_mass(pts[assignment == c]) if np.any(assignment == c) else np.zeros(d)
            for c in range(k)
        ]
    )
    return potential(instance, assignment, centers), assignment
