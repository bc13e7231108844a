"""The smoothed input model: adversarial means plus Gaussian noise.

An adversary fixes n means in [0,1]^d; every coordinate then receives
independent N(0, sigma^2) noise.  This module generates means, perturbs
them deterministically, evaluates the hypercube radius D (all perturbed
points lie in [-D, 1+D]^d with high probability), checks the Gaussian
tail bound empirically, and implements the sigma > 1 rescaling reduction.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionMismatchError, InvalidSigmaError
from .geometry import Instance, as_point_array
from .rng import normal_matrix, uniform_generator

MEAN_GENERATORS = ("uniform-grid", "uniform-random", "from-file")


@dataclass
class PerturbationMeta:
    """How an instance was produced: means, sigma, seed, and the model
    constants kappa (iteration-bound exponent) and the hypercube radius
    D when it has been evaluated."""

    means: np.ndarray
    sigma: float
    seed: int
    kappa: float = 1.0
    cube_radius: Optional[float] = None

    def __post_init__(self):
        self.means = as_point_array(self.means)
        if self.sigma <= 0:
            raise InvalidSigmaError(f"sigma must be positive, got {self.sigma}")
        if self.cube_radius is not None and self.cube_radius < 1.0:
            raise DimensionMismatchError("cube radius must satisfy D >= 1")


def generate_means(kind: str, n: int, d: int, seed: int = 0) -> np.ndarray:
    """Adversarial mean families used by sweeps and Monte Carlo checks.

    uniform-grid: the first n points of the smallest axis-aligned lattice
    in [0,1]^d with at least n nodes.  uniform-random: i.i.d. uniform
    coordinates from the seed's stream.
    """
    if n < 1 or d < 1:
        raise DimensionMismatchError("means need n >= 1 and d >= 1")
    if kind == "uniform-grid":
        m = max(2, math.ceil(n ** (1.0 / d))) if n > 1 else 1
        axes = np.linspace(0.0, 1.0, m) if m > 1 else np.array([0.5])
        mesh = np.meshgrid(*([axes] * d), indexing="ij")
        lattice = np.stack([ax.ravel() for ax in mesh], axis=1)
        return lattice[:n].copy()
    if kind == "uniform-random":
        return uniform_generator(seed).random((n, d))
    raise DimensionMismatchError(f"unknown mean generator {kind!r}")


def perturb(means, sigma: float, seed: int, kappa: float = 1.0) -> Instance:
    """Add independent N(0, sigma^2) noise to every coordinate.

    Deterministic given the seed: point i's noise comes from a fixed
    slice of the seed's uniform stream (see rng.normal_matrix), so the
    perturbation parallelizes over points without changing results.
    Means outside [0,1] only warn, to allow exploratory use.
    """
    means = as_point_array(means)
    if sigma <= 0:
        raise InvalidSigmaError(f"sigma must be positive, got {sigma}")
    if means.min() < 0.0 or means.max() > 1.0:
        warnings.warn("means outside [0,1]^d: the model's bounds do not apply")
    n, d = means.shape
    points = means + sigma * normal_matrix(n, d, seed)
    meta = PerturbationMeta(means=means.copy(), sigma=float(sigma), seed=int(seed), kappa=kappa)
    return Instance(points=points, meta=meta)


@dataclass(frozen=True)
class HypercubeRadius:
    """D with a flag recording whether the closed form was clamped to 1."""

    value: float
    clamped: bool
    reason: Optional[str] = None


def hypercube_radius(n: int, d: int, k: int, sigma: float, kappa: float = 1.0) -> HypercubeRadius:
    """Radius D = sqrt(2 sigma^2 ((1+kappa*k*d) ln n + ln d + ln sigma)).

    All perturbed points lie in [-D, 1+D]^d with probability at least
    1 - n^(-kappa*k*d).  Downstream formulas assume D >= 1, so the result
    is clamped to max(1, .) with the reason reported.
    """
    if n < 1 or d < 1 or k < 1:
        raise DimensionMismatchError("hypercube radius needs n, d, k >= 1")
    if sigma <= 0:
        raise InvalidSigmaError(f"sigma must be positive, got {sigma}")
    log_argument = (1.0 + kappa * k * d) * math.log(n) + math.log(d) + math.log(sigma)
    if log_argument <= 0.0:
        return HypercubeRadius(1.0, True, "log argument non-positive")
    value = math.sqrt(2.0 * sigma * sigma * log_argument)
    if value < 1.0:
        return HypercubeRadius(1.0, True, f"formula value {value} below 1")
    return HypercubeRadius(value, False)


@dataclass(frozen=True)
class TailCheck:
    empirical: float
    bound: float
    sampling_error: float
    samples: int
    out_of_lemma_range: bool

    @property
    def passed(self) -> bool:
        return self.empirical <= self.bound + 3.0 * self.sampling_error


def tail_probability_check(
    sigma: float, t: float, mu: float, samples: int, seed: int
) -> TailCheck:
    """Empirical Pr[x not in [-t, 1+t]] for x ~ N(mu, sigma^2) against the
    closed-form bound sigma * exp(-t^2 / (2 sigma^2)).

    The bound is only claimed for t >= 1 and mu in [0,1]; smaller t still
    computes but is flagged out of range.
    """
    if sigma <= 0:
        raise InvalidSigmaError(f"sigma must be positive, got {sigma}")
    if samples < 10**4:
        raise DimensionMismatchError("tail check needs at least 10^4 samples")
    if not 0.0 <= mu <= 1.0:
        raise DimensionMismatchError("mu must lie in [0,1]")
    x = mu + sigma * normal_matrix(samples, 1, seed)[:, 0]
    outside = np.count_nonzero((x < -t) | (x > 1.0 + t))
    bound = sigma * math.exp(-(t * t) / (2.0 * sigma * sigma))
    return TailCheck(
        empirical=outside / samples,
        bound=bound,
        sampling_error=math.sqrt(bound / samples),
        samples=samples,
        out_of_lemma_range=t < 1.0,
    )


@dataclass(frozen=True)
class RescaleResult:
    means: np.ndarray
    sigma: float
    scale_factor: float
    applied: bool


def rescale_for_large_sigma(means, sigma: float) -> RescaleResult:
    """Reduce sigma > 1 to sigma' = 1 by scaling the means by 1/sigma.

    Lloyd iteration counts are invariant under uniform scaling of the
    point set, so a run on the scaled perturbed instance matches a run on
    the unscaled one when the same seed drives proportionally scaled
    noise.  For sigma <= 1 this is a flagged no-op.
    """
    means = as_point_array(means)
    if sigma <= 0:
        raise InvalidSigmaError(f"sigma must be positive, got {sigma}")
    if sigma <= 1.0:
        return RescaleResult(means.copy(), float(sigma), 1.0, False)
    return RescaleResult(means / sigma, 1.0, 1.0 / sigma, True)


# ---------------------------------------------------------------------------
# Instance files: JSON with dim, n, means, sigma, seed and the realized
# coordinates.  Loading a file that carries realized coordinates never
# re-perturbs.
# ---------------------------------------------------------------------------


def save_instance(instance: Instance, path) -> None:
    obj = {
        "format": "kmeanslab-instance",
        "version": 1,
        "n": instance.n,
        "dim": instance.dim,
        "points": [[float(v) for v in row] for row in instance.points],
    }
    if instance.meta is not None:
        obj["sigma"] = instance.meta.sigma
        obj["seed"] = instance.meta.seed
        obj["kappa"] = instance.meta.kappa
        obj["means"] = [[float(v) for v in row] for row in instance.meta.means]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, separators=(",", ":"))
        fh.write("\n")


def load_instance(path) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if obj.get("format") != "kmeanslab-instance":
        raise DimensionMismatchError(f"{path} is not a kmeanslab instance file")
    meta = None
    if "means" in obj:
        meta = PerturbationMeta(
            means=np.asarray(obj["means"], dtype=np.float64),
            sigma=obj["sigma"],
            seed=obj["seed"],
            kappa=obj.get("kappa", 1.0),
        )
    if "points" in obj and obj["points"]:
        return Instance(points=np.asarray(obj["points"], dtype=np.float64), meta=meta)
    if meta is None:
        raise DimensionMismatchError(f"{path} has neither points nor perturbation data")
    return perturb(meta.means, meta.sigma, meta.seed, kappa=meta.kappa)


def save_means(means, path) -> None:
    means = as_point_array(means)
    obj = {
        "format": "kmeanslab-means",
        "version": 1,
        "n": means.shape[0],
        "dim": means.shape[1],
        "means": [[float(v) for v in row] for row in means],
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, separators=(",", ":"))
        fh.write("\n")


def load_means(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    if obj.get("format") not in ("kmeanslab-means", "kmeanslab-instance"):
        raise DimensionMismatchError(f"{path} is not a means/instance file")
    if "means" not in obj:
        raise DimensionMismatchError(f"{path} carries no means")
    return np.asarray(obj["means"], dtype=np.float64)
