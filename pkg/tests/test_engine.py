"""Lloyd engine: step semantics, runs, epochs, serialization."""

import math
from itertools import product

import numpy as np
import pytest

from kmeanslab.engine import (
    Epoch,
    InitSpec,
    IterationRecord,
    RunTrace,
    check_trace_invariants,
    deduplicated_assignments,
    detect_epochs,
    drop_tolerance,
    init_centers,
    initial_state,
    lloyd_step,
    load_trace,
    run,
    save_trace,
    trace_lines,
)
from kmeanslab.errors import InfeasibleInitError
from kmeanslab.geometry import ClusteringState, Instance, center_of_mass, potential
from kmeanslab.perturb import generate_means, perturb
from kmeanslab.rng import uniform_generator

FOUR_POINTS = Instance(np.array([[0.0], [1.0], [10.0], [11.0]]))


def make_run(seed, n=20, d=2, k=3, sigma=0.3):
    means = generate_means("uniform-random", n, d, seed)
    inst = perturb(means, sigma, seed + 1)
    return inst, run(inst, InitSpec(method="uniform-points", k=k, seed=seed + 2))


class TestInitCenters:
    def test_first_k(self):
        pts = np.arange(10, dtype=float).reshape(5, 2)
        centers = init_centers(Instance(pts), InitSpec(method="first-k", k=2))
        assert np.array_equal(centers, pts[:2])

    def test_uniform_points_deterministic(self):
        inst = Instance(uniform_generator(4).random((7, 2)))
        spec = InitSpec(method="uniform-points", k=3, seed=11)
        assert np.array_equal(init_centers(inst, spec), init_centers(inst, spec))

    def test_uniform_points_distinct_rows(self):
        inst = Instance(uniform_generator(4).random((6, 2)))
        centers = init_centers(inst, InitSpec(method="uniform-points", k=6, seed=0))
        assert len({tuple(c) for c in centers}) == 6

    def test_uniform_points_frequency(self):
        # 10^4 draws of k=1 over 5 points: each row chosen with freq 0.2 +- 0.02
        inst = Instance(np.arange(5, dtype=float).reshape(5, 1))
        counts = np.zeros(5)
        for s in range(10_000):
            c = init_centers(inst, InitSpec(method="uniform-points", k=1, seed=s))
            counts[int(c[0, 0])] += 1
        freqs = counts / 10_000
        assert np.all(np.abs(freqs - 0.2) <= 0.02)

    def test_infeasible_k(self):
        inst = Instance(np.zeros((3, 1)))
        with pytest.raises(InfeasibleInitError):
            init_centers(inst, InitSpec(method="uniform-points", k=4, seed=0))


class TestLloydStep:
    def test_fixed_point_is_noop(self):
        inst = FOUR_POINTS
        state = ClusteringState(
            assignment=[0, 0, 1, 1], centers=np.array([[0.5], [10.5]]), iteration=3
        )
        new_state, rec = lloyd_step(inst, state)
        assert rec.reassigned == []
        assert rec.drop == 0.0
        assert np.array_equal(new_state.assignment, state.assignment)
        assert np.array_equal(new_state.centers, state.centers)

    def test_one_dimensional_example(self):
        state = initial_state(FOUR_POINTS, np.array([[0.0], [11.0]]))
        assert state.assignment.tolist() == [0, 0, 1, 1]
        new_state, rec = lloyd_step(FOUR_POINTS, state)
        assert new_state.centers.tolist() == [[0.5], [10.5]]
        # drop recomputed by direct potential arithmetic
        before = potential(FOUR_POINTS, state.assignment, state.centers)
        after = potential(FOUR_POINTS, new_state.assignment, new_state.centers)
        assert rec.drop == pytest.approx(before - after)
        assert before - after == pytest.approx(1.0)

    def test_fuzz_potential_never_increases(self):
        for seed in range(25):
            inst, trace = make_run(seed)
            for rec in trace.records:
                assert rec.potential_after <= rec.potential_before + drop_tolerance(
                    rec.potential_before
                )

    def test_empty_cluster_retains_center(self):
        inst = Instance(np.array([[0.0], [1.0], [2.0]]))
        state = initial_state(inst, np.array([[1.0], [50.0]]))
        assert state.empty_flags.tolist() == [False, True]
        new_state, rec = lloyd_step(inst, state)
        assert rec.empty_cluster_events == [1]
        assert new_state.centers[1, 0] == 50.0
        assert new_state.centers[0, 0] == pytest.approx(1.0)

    def test_crossing_distances_use_prestep_centers(self):
        inst, trace = make_run(7, n=30, k=4)
        # replay: recompute each crossing distance from the recorded history
        from kmeanslab.geometry import bisector_distance

        for t, rec in enumerate(trace.records):
            pre = trace.center_history[t]
            for crossing in rec.reassigned:
                want = bisector_distance(
                    inst.points[crossing.point_index],
                    pre[crossing.from_cluster],
                    pre[crossing.to_cluster],
                )
                assert crossing.distance_to_bisector == want


class TestRun:
    def test_k1_converges_within_two_steps(self):
        inst = Instance(uniform_generator(9).random((12, 3)))
        trace = run(inst, InitSpec(method="first-k", k=1))
        assert trace.termination == "Converged"
        assert trace.iterations <= 2

    def test_four_point_example_with_enumeration_oracle(self):
        trace = run(
            FOUR_POINTS,
            InitSpec(method="explicit", k=2, centers=np.array([[0.0], [11.0]])),
        )
        assert trace.termination == "Converged"
        assert trace.iterations == 2
        assert trace.final_potential == pytest.approx(1.0)
        # independent oracle: enumerate all 2^4 assignments directly
        best = math.inf
        pts = FOUR_POINTS.points
        for labels in product([0, 1], repeat=4):
            labels = np.array(labels)
            phi = 0.0
            for c in (0, 1):
                members = pts[labels == c]
                if len(members):
                    phi += float(np.sum((members - members.mean(axis=0)) ** 2))
            best = min(best, phi)
        assert best == pytest.approx(1.0)
        assert trace.final_potential >= best - 1e-12

    def test_deterministic_bit_identical_traces(self):
        means = generate_means("uniform-grid", 40, 2, 0)
        inst = perturb(means, 0.2, 99)
        spec = InitSpec(method="uniform-points", k=5, seed=123)
        t1 = run(inst, spec)
        t2 = run(inst, spec)
        assert trace_lines(t1) == trace_lines(t2)

    def test_max_iterations_cap(self):
        inst, _ = make_run(3)
        trace = run(inst, InitSpec(method="uniform-points", k=3, seed=5), max_iterations=1)
        assert trace.termination == "MaxIterations"
        assert trace.iterations == 1

    def test_converged_run_ends_with_noop(self):
        _, trace = make_run(11)
        assert trace.termination == "Converged"
        last = trace.records[-1]
        assert last.reassigned == []
        assert float(np.max(last.center_movements)) == 0.0


def _dummy_records(count):
    return [
        IterationRecord(
            iteration=i + 1,
            potential_before=1.0,
            potential_after=1.0,
            drop=0.0,
            reassigned=[],
            active_clusters=0,
            center_movements=np.zeros(1),
            min_center_distance=math.nan,
            empty_cluster_events=[],
        )
        for i in range(count)
    ]


def _trace_from_history(history):
    return RunTrace(
        records=_dummy_records(len(history) - 1),
        termination="Converged",
        init_method="explicit",
        seed=0,
        center_history=[np.asarray(h, dtype=float) for h in history],
        assignment_history=None,
        final_state=None,
    )


class TestEpochs:
    def test_constant_centers_single_epoch(self):
        history = [[[0.0, 0.0]]] * 5
        epochs = detect_epochs(_trace_from_history(history))
        assert len(epochs) == 1
        assert (epochs[0].start, epochs[0].end) == (1, 4)

    def test_third_position_starts_new_epoch(self):
        # center sequence A, B, A, C: epoch over the A,B,A prefix, then C
        history = [[[0.0]], [[1.0]], [[0.0]], [[2.0]]]
        epochs = detect_epochs(_trace_from_history(history))
        assert [(e.start, e.end) for e in epochs] == [(1, 2), (3, 3)]
        assert epochs[0].distinct_positions == (2,)

    def test_fuzz_epochs_at_most_four(self):
        for seed in range(30):
            _, trace = make_run(seed, n=40, k=5)
            for epoch in trace.epochs:
                assert epoch.length <= 4


class TestInvariantsAndHashing:
    def test_clean_runs_have_no_violations(self):
        for seed in range(10):
            inst, trace = make_run(seed)
            assert check_trace_invariants(inst, trace) == []

    def test_movement_bound_holds(self):
        for seed in range(10):
            _, trace = make_run(seed, n=50, k=6)
            for rec in trace.records:
                max_move_sq = float(np.max(rec.center_movements)) ** 2
                assert rec.drop >= max_move_sq - drop_tolerance(rec.potential_before)

    def test_no_repeated_clustering(self):
        for seed in range(10):
            _, trace = make_run(seed, n=60, k=4)
            keys = deduplicated_assignments(trace)
            assert len(set(keys)) == len(keys)


class TestSerialization:
    def test_round_trip(self, tmp_path):
        inst, trace = make_run(21)
        path = tmp_path / "trace.jsonl"
        save_trace(trace, path)
        meta, records = load_trace(path)
        assert meta["termination"] == trace.termination
        assert meta["iterations"] == trace.iterations
        assert meta["epoch_lengths"] == [e.length for e in trace.epochs]
        assert len(records) == trace.iterations
        for got, want in zip(records, trace.records):
            assert got.iteration == want.iteration
            assert got.potential_before == want.potential_before
            assert got.potential_after == want.potential_after
            assert got.drop == want.drop
            assert got.active_clusters == want.active_clusters
            assert np.array_equal(got.center_movements, want.center_movements)
            assert got.reassigned == want.reassigned
            assert (
                math.isnan(got.min_center_distance)
                and math.isnan(want.min_center_distance)
            ) or got.min_center_distance == want.min_center_distance

    def test_byte_identical_files_for_same_seed(self, tmp_path):
        p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        for path in (p1, p2):
            means = generate_means("uniform-grid", 25, 2, 1)
            inst = perturb(means, 0.4, 5)
            save_trace(run(inst, InitSpec(method="uniform-points", k=3, seed=7)), path)
        assert p1.read_bytes() == p2.read_bytes()
