"""Core geometric primitives against independent oracles."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kmeanslab.errors import (
    DegenerateBisectorError,
    DimensionMismatchError,
    EmptyClusterError,
)
from kmeanslab.geometry import (
    Instance,
    assign_nearest,
    bisector_distance,
    center_of_mass,
    min_center_distance,
    potential,
)
from kmeanslab.rng import uniform_generator

mpmath.mp.dps = 50


def _potential_oracle(points, assignment, centers):
    # Extended-precision re-summation, term by term.
    total = mpmath.mpf(0)
    for x, a in zip(points, assignment):
        for xi, ci in zip(x, centers[a]):
            total += (mpmath.mpf(float(xi)) - mpmath.mpf(float(ci))) ** 2
    return total


class TestPotential:
    def test_point_at_its_center_is_zero(self):
        inst = Instance(np.array([[3.0, 4.0]]))
        assert potential(inst, [0], np.array([[3.0, 4.0]])) == 0.0

    def test_symmetric_pair(self):
        inst = Instance(np.array([[0.0, 0.0], [2.0, 0.0]]))
        assert potential(inst, [0, 0], np.array([[1.0, 0.0]])) == 2.0

    def test_matches_extended_precision_resummation(self):
        gen = uniform_generator(101)
        pts = gen.random((6, 3)) * 10
        centers = gen.random((2, 3)) * 10
        assignment = np.array([0, 1, 0, 1, 1, 0])
        inst = Instance(pts)
        got = potential(inst, assignment, centers)
        want = _potential_oracle(pts, assignment, centers)
        assert abs(got - float(want)) <= 1e-12 * max(1.0, float(want))

    def test_dimension_mismatch_errors(self):
        inst = Instance(np.array([[0.0, 0.0], [1.0, 1.0]]))
        with pytest.raises(DimensionMismatchError):
            potential(inst, [0], np.array([[0.0, 0.0]]))
        with pytest.raises(DimensionMismatchError):
            potential(inst, [0, 0], np.array([[0.0, 0.0, 0.0]]))
        with pytest.raises(DimensionMismatchError):
            potential(inst, [0, 5], np.array([[0.0, 0.0]]))

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_permutation_and_translation_invariance(self, seed):
        gen = uniform_generator(seed)
        pts = gen.random((8, 2))
        centers = gen.random((3, 2))
        assignment = gen.integers(0, 3, size=8)
        inst = Instance(pts)
        base = potential(inst, assignment, centers)
        # permute points within the instance (assignment permuted along)
        perm = gen.permutation(8)
        permuted = potential(Instance(pts[perm]), assignment[perm], centers)
        shift = gen.random(2) * 100 - 50
        shifted = potential(Instance(pts + shift), assignment, centers + shift)
        assert permuted == pytest.approx(base, rel=1e-9)
        assert shifted == pytest.approx(base, rel=1e-9, abs=1e-9)

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_center_of_mass_minimizes_potential(self, seed):
        gen = uniform_generator(seed)
        pts = gen.random((10, 2))
        assignment = gen.integers(0, 3, size=10)
        inst = Instance(pts)
        com = np.vstack(
            [
                center_of_mass(pts[assignment == c]) if np.any(assignment == c)
                else gen.random(2)
                for c in range(3)
            ]
        )
        other = gen.random((3, 2))
        assert potential(inst, assignment, com) <= potential(inst, assignment, other) + 1e-12


class TestCenterOfMass:
    def test_pair(self):
        assert center_of_mass(np.array([[0.0, 0.0], [2.0, 0.0]])).tolist() == [1.0, 0.0]

    def test_single_point_identity(self):
        assert center_of_mass(np.array([[1.0, 1.0]])).tolist() == [1.0, 1.0]

    def test_matches_extended_precision_mean(self):
        pts = uniform_generator(77).random((5, 3)) * 7
        got = center_of_mass(pts)
        for j in range(3):
            want = sum(mpmath.mpf(float(v)) for v in pts[:, j]) / 5
            assert abs(got[j] - float(want)) <= 1e-14 * max(1.0, abs(float(want)))

    def test_empty_subset_errors(self):
        with pytest.raises(EmptyClusterError):
            center_of_mass(np.empty((0, 2)))


class TestAssignNearest:
    def test_strictly_closer_wins(self):
        centers = np.array([[0.0, 0.0], [5.0, 0.0]])
        assert assign_nearest(np.array([1.0, 0.0]), centers, 1) == 0

    def test_equidistant_point_stays(self):
        centers = np.array([[0.0, 0.0], [2.0, 0.0]])
        assert assign_nearest(np.array([1.0, 0.0]), centers, 1) == 1

    def test_idempotent(self):
        gen = uniform_generator(5)
        centers = gen.random((4, 3))
        for _ in range(20):
            p = gen.random(3)
            first = assign_nearest(p, centers, 2)
            assert assign_nearest(p, centers, first) == first

    @given(st.integers(0, 2**32 - 1))
    @settings(max_examples=50, deadline=None)
    def test_fuzz_matches_exhaustive_argmin(self, seed):
        gen = uniform_generator(seed)
        centers = gen.random((5, 2))
        p = gen.random(2)
        current = int(gen.integers(0, 5))
        got = assign_nearest(p, centers, current)
        dists = [float(np.sum((p - c) ** 2)) for c in centers]
        assert dists[got] <= min(dists) + 1e-12


class TestBisectorDistance:
    def test_axis_aligned(self):
        assert bisector_distance(
            np.array([1.0, 0.0]), np.array([0.0, 0.0]), np.array([4.0, 0.0])
        ) == pytest.approx(1.0)

    def test_point_on_bisector(self):
        assert bisector_distance(
            np.array([2.0, 7.0]), np.array([0.0, 0.0]), np.array([4.0, 0.0])
        ) == pytest.approx(0.0, abs=1e-12)

    def test_coincident_centers_error(self):
        with pytest.raises(DegenerateBisectorError):
            bisector_distance(np.array([1.0]), np.array([2.0]), np.array([2.0]))

    def test_matches_hyperplane_projection_oracle(self):
        gen = uniform_generator(31)
        for _ in range(30):
            x, ci, cj = gen.random(3), gen.random(3), gen.random(3)
            # explicit hyperplane: normal through the center gap, passing
            # through the midpoint; distance is |(x - mid) . normal|
            normal = (cj - ci) / np.linalg.norm(cj - ci)
            mid = (ci + cj) / 2.0
            want = abs(float((x - mid) @ normal))
            got = bisector_distance(x, ci, cj)
            assert got == pytest.approx(want, rel=1e-12, abs=1e-12)

    def test_symmetric_in_centers(self):
        gen = uniform_generator(32)
        for _ in range(20):
            x, ci, cj = gen.random(2), gen.random(2), gen.random(2)
            assert bisector_distance(x, ci, cj) == pytest.approx(
                bisector_distance(x, cj, ci), rel=1e-15
            )


class TestMinCenterDistance:
    def test_three_centers(self):
        centers = np.array([[0.0, 0.0], [3.0, 4.0], [10.0, 0.0]])
        assert min_center_distance(centers) == pytest.approx(5.0)

    def test_identical_pair_is_zero(self):
        assert min_center_distance(np.array([[1.0, 1.0], [1.0, 1.0]])) == 0.0

    def test_not_applicable_below_two(self):
        assert min_center_distance(np.array([[1.0, 1.0]])) is None
        centers = np.array([[0.0, 0.0], [1.0, 0.0]])
        assert min_center_distance(centers, include=[True, False]) is None

    def test_matches_exhaustive_pairs(self):
        from itertools import combinations

        centers = uniform_generator(8).random((8, 3))
        want = min(
            math.dist(centers[i], centers[j]) for i, j in combinations(range(8), 2)
        )
        assert min_center_distance(centers) == want

    def test_exclusion_mask(self):
        centers = np.array([[0.0], [0.1], [10.0]])
        assert min_center_distance(centers, include=[True, False, True]) == pytest.approx(10.0)


class TestInstanceValidation:
    def test_rejects_nan(self):
        with pytest.raises(DimensionMismatchError):
            Instance(np.array([[0.0, np.nan]]))

    def test_rejects_inf(self):
        with pytest.raises(DimensionMismatchError):
            Instance(np.array([[np.inf]]))

    def test_one_dim_coercion(self):
        inst = Instance(np.array([1.0, 2.0, 3.0]))
        assert inst.n == 3 and inst.dim == 1
