"""Structural property checkers and model constants.

Three properties of a point set drive the per-iteration drop bounds:

* eps-separated: no hyperplane has more than 2d points within distance
  eps.  Exact for d <= 2 (sorted scan in 1-D, minimum width of every
  (2d+1)-subset via rotating calipers in 2-D); sound but incomplete for
  d >= 3 (a violation witness is certified, a Holds is not).
* delta-sparse: no two key-value sums lie within delta unless their
  exact rational coefficient vectors coincide.  Exponential by nature,
  scoped as a tiny-instance oracle behind hard caps.
* eps-spreaded (1-D): no length-eps interval holds three points, and no
  two (possibly one-point-linked) pairs are both within eps.

Verdicts are three-valued; a Violated verdict always carries a witness
that re-validates independently.  The model constants (iteration-count
log bound, crossing margin, drop lower bounds) are evaluated in log
space and materialized to linear scale only when representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidSigmaError,
    MissingContextError,
    UnsupportedError,
    WrongDimensionError,
)
from .geometry import Instance, center_of_mass

HOLDS = "holds"
VIOLATED = "violated"
UNKNOWN = "unknown"

# Linear-scale values are materialized only when |ln value| stays below
# this, i.e. well inside the float64 range.
_LOG_REPRESENTABLE = 700.0


@dataclass(frozen=True)
class Hyperplane:
    """{x : normal . x = offset} with a unit normal."""

    normal: np.ndarray
    offset: float

    def distance(self, x) -> float:
        return abs(float(np.dot(self.normal, np.asarray(x, dtype=np.float64))) - self.offset)


@dataclass(frozen=True)
class KeyValue:
    """(s/t) * center_of_mass(subset) over point indices."""

    s: int
    t: int
    subset: tuple[int, ...]

    def value(self, points: np.ndarray) -> np.ndarray:
        return (self.s / self.t) * center_of_mass(points[list(self.subset)])

    def coefficients(self) -> dict[int, Fraction]:
        coeff = Fraction(self.s, self.t * len(self.subset))
        return {i: coeff for i in self.subset}


@dataclass
class Witness:
    """Concrete evidence for a Violated verdict.

    kind is one of 'hyperplane' (point_indices within eps of hyperplane),
    'interval' (three 1-D points inside an interval of length eps),
    'pair-chain' (two close pairs given as ((i1,i2),(i3,i4))), or
    'key-values' (four key-values with near-equal pair sums).
    """

    kind: str
    point_indices: tuple[int, ...]
    hyperplane: Optional[Hyperplane] = None
    interval: Optional[tuple[float, float]] = None
    pairs: Optional[tuple[tuple[int, int], tuple[int, int]]] = None
    key_values: Optional[tuple[KeyValue, KeyValue, KeyValue, KeyValue]] = None
    distance: Optional[float] = None


@dataclass
class PropertyVerdict:
    status: str
    witness: Optional[Witness] = None
    note: Optional[str] = None

    def __post_init__(self):
        if self.status == VIOLATED and self.witness is None:
            raise DimensionMismatchError("a Violated verdict requires a witness")


# ---------------------------------------------------------------------------
# Model constants
# ---------------------------------------------------------------------------


def crossing_margin_log(
    n: int, d: int, k: int, a: int, sigma: float, cube_radius: float, kappa: float = 1.0
) -> float:
    """ln of the bisector-crossing margin
    sigma^4 / (32 n^2 d D^2) * (sigma / (3 D n^(3+2 kappa)))^(4a).

    With high probability, any iteration that reassigns at least k*d/a
    points moves at least one point farther than this margin from the
    bisector it crosses.  The value is astronomically small at usable
    parameters, hence the log-space form.
    """
    if not 1 <= a <= k:
        raise DimensionMismatchError(f"a must lie in [1, k], got a={a}, k={k}")
    if sigma <= 0:
        raise InvalidSigmaError(f"sigma must be positive, got {sigma}")
    if cube_radius <= 0:
        raise DimensionMismatchError("cube radius must be positive")
    log_sigma = math.log(sigma)
    log_n = math.log(n)
    log_D = math.log(cube_radius)
    return (
        4.0 * log_sigma
        - math.log(32.0)
        - 2.0 * log_n
        - math.log(d)
        - 2.0 * log_D
        + 4.0 * a * (log_sigma - math.log(3.0) - log_D - (3.0 + 2.0 * kappa) * log_n)
    )


def iteration_count_log_bound(n: int, k: int, d: int, kappa: float = 1.0) -> float:
    """ln of the worst-case iteration bound n^(kappa*k*d) (count of
    realizable Voronoi partitions)."""
    return kappa * k * d * math.log(n)


@dataclass(frozen=True)
class StructureConstants:
    kappa: float
    a: int
    log_iteration_bound: float
    log_crossing_margin: float
    cube_radius: float
    cube_radius_clamped: bool


def structure_constants(
    n: int,
    d: int,
    k: int,
    a: int,
    sigma: float,
    kappa: float = 1.0,
    cube_radius: float | None = None,
) -> StructureConstants:
    """All model constants for one parameter point; D is computed from
    the closed form unless supplied."""
    from .perturb import hypercube_radius

    if cube_radius is None:
        hc = hypercube_radius(n, d, k, sigma, kappa)
        cube_radius, clamped = hc.value, hc.clamped
    else:
        clamped = False
    return StructureConstants(
        kappa=kappa,
        a=a,
        log_iteration_bound=iteration_count_log_bound(n, k, d, kappa),
        log_crossing_margin=crossing_margin_log(n, d, k, a, sigma, cube_radius, kappa),
        cube_radius=cube_radius,
        cube_radius_clamped=clamped,
    )


# ---------------------------------------------------------------------------
# eps-separated
# ---------------------------------------------------------------------------


def _convex_hull_2d(pts: np.ndarray) -> np.ndarray:
    """Andrew monotone chain; returns hull vertices in ccw order."""
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    sorted_pts = pts[order]

    def cross(o, p, q):
        return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])

    lower: list[np.ndarray] = []
    for p in sorted_pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[np.ndarray] = []
    for p in sorted_pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def min_width_2d(pts: np.ndarray) -> tuple[float, Hyperplane]:
    """Exact minimum width of a 2-D point set and the achieving slab's
    mid-hyperplane.  The minimizing strip is flush with a hull edge."""
    pts = np.asarray(pts, dtype=np.float64)
    hull = _convex_hull_2d(pts)
    if hull.shape[0] <= 2:
        # All points collinear (or coincident): width 0.
        if hull.shape[0] == 2:
            direction = hull[1] - hull[0]
            direction = direction / np.linalg.norm(direction)
            normal = np.array([-direction[1], direction[0]])
        else:
            normal = np.array([0.0, 1.0])
        offset = float(np.dot(normal, pts[0]))
        return 0.0, Hyperplane(normal=normal, offset=offset)

    best_width = math.inf
    best: Hyperplane | None = None
    m = hull.shape[0]
    for i in range(m):
        edge = hull[(i + 1) % m] - hull[i]
        norm = np.linalg.norm(edge)
        if norm == 0.0:
            continue
        normal = np.array([-edge[1], edge[0]]) / norm
        proj = pts @ normal
        width = float(proj.max() - proj.min())
        if width < best_width:
            best_width = width
            best = Hyperplane(normal=normal, offset=float((proj.max() + proj.min()) / 2.0))
    assert best is not None
    return best_width, best


def _thinnest_slab_pca(pts: np.ndarray) -> tuple[float, Hyperplane]:
    """Extent along the smallest principal direction (an upper bound on
    the true minimum width for d >= 3)."""
    centered = pts - pts.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=True)
    normal = vt[-1]
    proj = pts @ normal
    width = float(proj.max() - proj.min())
    return width, Hyperplane(normal=normal, offset=float((proj.max() + proj.min()) / 2.0))


def check_eps_separated(
    instance: Instance, eps: float, subset_budget: int = 100_000
) -> PropertyVerdict:
    """Is there a hyperplane with more than 2d points within eps of it?

    d=1: exact sorted scan for three points in an interval of width
    2*eps.  d=2: exact, via the minimum width of every 5-subset.  d>=3:
    sound-incomplete; a thin principal-direction slab certifies Violated,
    otherwise the verdict is Unknown.
    """
    if eps <= 0:
        raise DimensionMismatchError("eps must be positive")
    pts = instance.points
    n, d = pts.shape
    need = 2 * d + 1
    if n < need:
        return PropertyVerdict(HOLDS) if d <= 2 else PropertyVerdict(
            UNKNOWN, note=f"fewer than {need} points; no violation possible"
        )

    if d == 1:
        x = pts[:, 0]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        for i in range(n - 2):
            if xs[i + 2] - xs[i] <= 2.0 * eps:
                mid = float((xs[i] + xs[i + 2]) / 2.0)
                idx = tuple(int(j) for j in order[i : i + 3])
                return PropertyVerdict(
                    VIOLATED,
                    witness=Witness(
                        kind="hyperplane",
                        point_indices=idx,
                        hyperplane=Hyperplane(normal=np.array([1.0]), offset=mid),
                    ),
                )
        return PropertyVerdict(HOLDS)

    if math.comb(n, need) > subset_budget:
        return PropertyVerdict(
            UNKNOWN,
            note=f"C({n},{need}) subsets exceed the budget of {subset_budget}",
        )

    for subset in combinations(range(n), need):
        sub = pts[list(subset)]
        if d == 2:
            width, plane = min_width_2d(sub)
        else:
            width, plane = _thinnest_slab_pca(sub)
        if width <= 2.0 * eps:
            return PropertyVerdict(
                VIOLATED,
                witness=Witness(kind="hyperplane", point_indices=subset, hyperplane=plane),
            )
    if d == 2:
        return PropertyVerdict(HOLDS)
    return PropertyVerdict(
        UNKNOWN, note="no thin principal slab found; exact width not certified for d >= 3"
    )


# ---------------------------------------------------------------------------
# delta-sparse
# ---------------------------------------------------------------------------


def _coefficient_key(coeffs: dict[int, Fraction]) -> tuple:
    return tuple(sorted((i, c) for i, c in coeffs.items() if c != 0))


def _merge_coefficients(a: dict[int, Fraction], b: dict[int, Fraction]) -> dict[int, Fraction]:
    out = dict(a)
    for i, c in b.items():
        out[i] = out.get(i, Fraction(0)) + c
    return out


def check_delta_sparse(
    instance: Instance,
    delta: float,
    s_cap: int,
    t_cap: int,
    size_cap: int,
    pair_budget: int = 500_000,
) -> PropertyVerdict:
    """Do two key-value sums come within delta without having identical
    coefficient vectors?

    Key-values are (s/t)*cm(S) with 1 <= s <= s_cap, 1 <= t <= t_cap and
    subsets S up to size_cap points.  Coefficient identity is decided
    over exact rationals; key-values with identical coefficient vectors
    are deduplicated up front since their values coincide exactly.
    Intended as a tiny-instance oracle (n <= 8, size_cap <= 3).
    """
    if delta < 0:
        raise DimensionMismatchError("delta must be non-negative")
    if s_cap < 1 or t_cap < 1 or size_cap < 1:
        raise DimensionMismatchError("caps must be at least 1")
    pts = instance.points
    n = instance.n
    if s_cap > n * n:
        raise DimensionMismatchError(f"s_cap must be <= n^2 = {n * n}")
    if t_cap >= n:
        raise DimensionMismatchError(f"t_cap must be < n = {n}")

    key_values: list[KeyValue] = []
    kv_values: list[np.ndarray] = []
    seen_coeffs: dict[tuple, int] = {}
    for size in range(1, size_cap + 1):
        for subset in combinations(range(n), size):
            for t in range(1, t_cap + 1):
                for s in range(1, s_cap + 1):
                    kv = KeyValue(s=s, t=t, subset=subset)
                    key = _coefficient_key(kv.coefficients())
                    if key in seen_coeffs:
                        continue
                    seen_coeffs[key] = len(key_values)
                    key_values.append(kv)
                    kv_values.append(kv.value(pts))

    m = len(key_values)
    n_pairs = m * (m + 1) // 2
    if n_pairs > pair_budget:
        return PropertyVerdict(
            UNKNOWN,
            note=f"{n_pairs} key-value pairs exceed the budget of {pair_budget}",
        )

    sums: list[tuple[float, np.ndarray, tuple, int, int]] = []
    for i in range(m):
        ci = key_values[i].coefficients()
        for j in range(i, m):
            value = kv_values[i] + kv_values[j]
            key = _coefficient_key(_merge_coefficients(ci, key_values[j].coefficients()))
            sums.append((float(value[0]), value, key, i, j))
    sums.sort(key=lambda item: item[0])

    lo = 0
    for hi in range(len(sums)):
        v_hi = sums[hi]
        while v_hi[0] - sums[lo][0] > delta:
            lo += 1
        for idx in range(lo, hi):
            v_lo = sums[idx]
            if v_lo[2] == v_hi[2]:
                continue  # identical coefficient vectors are exempt
            dist = float(np.linalg.norm(v_lo[1] - v_hi[1]))
            if dist <= delta:
                quad = (
                    key_values[v_lo[3]],
                    key_values[v_lo[4]],
                    key_values[v_hi[3]],
                    key_values[v_hi[4]],
                )
                indices = tuple(sorted({i for kv in quad for i in kv.subset}))
                return PropertyVerdict(
                    VIOLATED,
                    witness=Witness(
                        kind="key-values",
                        point_indices=indices,
                        key_values=quad,
                        distance=dist,
                    ),
                )
    return PropertyVerdict(HOLDS)


# ---------------------------------------------------------------------------
# eps-spreaded (1-D)
# ---------------------------------------------------------------------------


def check_eps_spreaded(instance: Instance, eps: float) -> PropertyVerdict:
    """1-D spreadedness: no eps-interval holds three points, and at most
    one pair of distinct points lies within eps.

    Two close pairs always violate the second condition: distinct
    unordered pairs share at most one point, which is exactly the allowed
    x2 = x3 coincidence with all other roles distinct.  Once the interval
    condition holds, every close pair is adjacent in sorted order, so an
    adjacent-gap scan is exact.
    """
    if instance.dim != 1:
        raise WrongDimensionError(f"spreadedness is 1-D only, got d={instance.dim}")
    if eps < 0:
        raise DimensionMismatchError("eps must be non-negative")
    x = instance.points[:, 0]
    n = x.shape[0]
    order = np.argsort(x, kind="stable")
    xs = x[order]

    for i in range(n - 2):
        if xs[i + 2] - xs[i] <= eps:
            idx = tuple(int(j) for j in order[i : i + 3])
            return PropertyVerdict(
                VIOLATED,
                witness=Witness(
                    kind="interval",
                    point_indices=idx,
                    interval=(float(xs[i]), float(xs[i] + eps)),
                ),
            )

    close_pairs: list[tuple[int, int]] = []
    for i in range(n - 1):
        if xs[i + 1] - xs[i] <= eps:
            close_pairs.append((int(order[i]), int(order[i + 1])))
            if len(close_pairs) == 2:
                p1, p2 = close_pairs
                return PropertyVerdict(
                    VIOLATED,
                    witness=Witness(
                        kind="pair-chain",
                        point_indices=tuple(sorted(set(p1) | set(p2))),
                        pairs=(p1, p2),
                    ),
                )
    return PropertyVerdict(HOLDS)


def spreadedness_threshold(instance: Instance) -> float:
    """Supremum of eps for which the instance is eps-spreaded: the
    smaller of the minimum 3-point span and the second-smallest pairwise
    gap (the instance is eps-spreaded for every eps strictly below)."""
    if instance.dim != 1:
        raise WrongDimensionError("spreadedness threshold is 1-D only")
    xs = np.sort(instance.points[:, 0])
    n = xs.shape[0]
    spans = [xs[i + 2] - xs[i] for i in range(n - 2)]
    min_span = min(spans) if spans else math.inf
    gaps = sorted(
        float(xs[j] - xs[i]) for i in range(n) for j in range(i + 1, n)
    )
    second_gap = gaps[1] if len(gaps) >= 2 else math.inf
    return float(min(min_span, second_gap))


# ---------------------------------------------------------------------------
# Witness re-validation
# ---------------------------------------------------------------------------


def revalidate_witness(instance: Instance, verdict: PropertyVerdict, threshold: float) -> bool:
    """Re-derive a Violated witness's claim from raw coordinates.

    threshold is the eps (separated/spreaded) or delta (sparse) the
    verdict was produced for.  A small slack (1e-12 relative) absorbs
    float rounding in re-computation.
    """
    if verdict.status != VIOLATED or verdict.witness is None:
        return False
    w = verdict.witness
    slack = 1e-12 * (1.0 + abs(threshold))
    pts = instance.points
    if w.kind == "hyperplane":
        assert w.hyperplane is not None
        dists = [w.hyperplane.distance(pts[i]) for i in w.point_indices]
        return len(w.point_indices) >= 2 * instance.dim + 1 and all(
            dst <= threshold + slack for dst in dists
        )
    if w.kind == "interval":
        lo, hi = w.interval  # type: ignore[misc]
        vals = [float(pts[i, 0]) for i in w.point_indices]
        return len(vals) >= 3 and max(vals) - min(vals) <= threshold + slack
    if w.kind == "pair-chain":
        (i1, i2), (i3, i4) = w.pairs  # type: ignore[misc]
        if (i1, i2) == (i3, i4) or i1 == i2 or i3 == i4:
            return False
        ok1 = abs(float(pts[i1, 0] - pts[i2, 0])) <= threshold + slack
        ok2 = abs(float(pts[i3, 0] - pts[i4, 0])) <= threshold + slack
        return ok1 and ok2
    if w.kind == "key-values":
        k1, k2, k3, k4 = w.key_values  # type: ignore[misc]
        value = k1.value(pts) + k2.value(pts) - k3.value(pts) - k4.value(pts)
        same = _coefficient_key(
            _merge_coefficients(k1.coefficients(), k2.coefficients())
        ) == _coefficient_key(_merge_coefficients(k3.coefficients(), k4.coefficients()))
        return (not same) and float(np.linalg.norm(value)) <= threshold + slack
    return False


# ---------------------------------------------------------------------------
# Drop lower bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DropBound:
    name: str
    log_value: float
    value: Optional[float]
    applies_when: str


_BOUND_FIELDS = {
    "sparse_drop": ("delta", "n"),
    "separated_drop": ("eps", "n"),
    "spreaded_drop": ("eps", "n"),
    "min_gap_drop": ("eps", "min_center_gap", "d", "k", "a", "cube_radius"),
}

_BOUND_CONDITIONS = {
    "sparse_drop": (
        "four consecutive non-terminating iterations, each with at most "
        "sqrt(k) active clusters and every cluster gaining or losing at "
        "most 2*d*sqrt(k) points, on a delta-sparse instance"
    ),
    "separated_drop": (
        "an iteration with at most sqrt(k) active clusters in which some "
        "cluster gains or loses more than 2*d*sqrt(k) points, on an "
        "eps-separated instance"
    ),
    "spreaded_drop": "every iteration with an active cluster, 1-D eps-spreaded instance",
    "min_gap_drop": (
        "every sequence of k^(k*d/a) + 1 consecutive iterations, where "
        "min_center_gap is the smallest center distance during the sequence"
    ),
}


def _materialize(log_value: float) -> Optional[float]:
    if abs(log_value) < _LOG_REPRESENTABLE:
        return math.exp(log_value)
    return None


def drop_lower_bounds(context: dict, bounds: list[str] | None = None) -> dict[str, DropBound]:
    """Evaluate the named potential-drop lower bounds in log space.

    Context fields: n, d, k, a, delta, eps, min_center_gap, cube_radius
    (each bound uses a subset).  A requested bound with a missing field
    raises MissingContextError naming that field.

    sparse_drop      delta^2 / (4 n^4)
    separated_drop   2 eps^2 / n
    spreaded_drop    eps^2 / (4 n^2)
    min_gap_drop     eps^2 min(gap^2, 1) / (36 d D^2 k^(k d / a))
    """
    names = bounds if bounds is not None else list(_BOUND_FIELDS)
    out: dict[str, DropBound] = {}
    for name in names:
        if name not in _BOUND_FIELDS:
            raise DimensionMismatchError(f"unknown bound {name!r}")
        for fld in _BOUND_FIELDS[name]:
            if fld not in context or context[fld] is None:
                raise MissingContextError(fld, name)
        n = context.get("n")
        if name == "sparse_drop":
            log_v = 2.0 * math.log(context["delta"]) - math.log(4.0) - 4.0 * math.log(n)
        elif name == "separated_drop":
            log_v = math.log(2.0) + 2.0 * math.log(context["eps"]) - math.log(n)
        elif name == "spreaded_drop":
            log_v = 2.0 * math.log(context["eps"]) - math.log(4.0) - 2.0 * math.log(n)
        else:
            gap = context["min_center_gap"]
            d, k, a, cube = context["d"], context["k"], context["a"], context["cube_radius"]
            log_v = (
                2.0 * math.log(context["eps"])
                + math.log(min(gap * gap, 1.0))
                - math.log(36.0)
                - math.log(d)
                - 2.0 * math.log(cube)
                - (k * d / a) * math.log(k)
            )
        out[name] = DropBound(
            name=name,
            log_value=log_v,
            value=_materialize(log_v),
            applies_when=_BOUND_CONDITIONS[name],
        )
    return out


def separated_drop_applies(record, d: int, k: int) -> bool:
    """Does an iteration record qualify for the separated_drop bound?"""
    if record.active_clusters > math.sqrt(k):
        return False
    flow: dict[int, int] = {}
    for crossing in record.reassigned:
        flow[crossing.from_cluster] = flow.get(crossing.from_cluster, 0) + 1
        flow[crossing.to_cluster] = flow.get(crossing.to_cluster, 0) + 1
    return any(count > 2 * d * math.sqrt(k) for count in flow.values())
