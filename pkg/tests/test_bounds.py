import itertools

import numpy as np
import pytest

from shuffled_regression.assignment import identity_permutation, invert_permutation
from shuffled_regression.bounds import (
    GENERAL_LAP,
    alternating_minimization,
    envelope_value,
    lower_bound,
)
from shuffled_regression.problem import ProblemInstance, Rectangle, initial_rectangle, preprocess

from conftest import all_perms, synthetic


def g(z):
    z = np.asarray(z)
    return -float(z @ z)


def test_envelope_examples():
    assert envelope_value(Rectangle([-1.0], [2.0]), [0.0]) == -2.0
    rect = Rectangle([0.0], [2.0])
    assert envelope_value(rect, [1.0]) == -2.0
    assert g([1.0]) >= -2.0


def test_envelope_minorizes_and_touches_corners(rng):
    for _ in range(200):
        r = int(rng.integers(1, 6))
        a, b = rng.uniform(-2, 2, r), rng.uniform(-2, 2, r)
        rect = Rectangle(np.minimum(a, b), np.maximum(a, b))
        for z in rng.uniform(rect.l, rect.u, size=(20, r)):
            assert envelope_value(rect, z) <= g(z) + 1e-12
        for corner in itertools.product(*zip(rect.l, rect.u)):
            assert envelope_value(rect, corner) == pytest.approx(g(corner), abs=1e-12)


def test_lower_bound_two_point_example():
    prep = preprocess(ProblemInstance([[1.0], [0.0]], [0.6, 0.8]))
    lb = lower_bound(Rectangle([0.6], [0.8]), prep)
    assert lb.assignment_value == pytest.approx(1.12, abs=1e-15)
    assert lb.bound == pytest.approx(-0.64, abs=1e-15)
    vertex_values = [-(0.6**2), -(0.8**2)]
    assert lb.bound == pytest.approx(min(vertex_values), abs=1e-15)


def test_lower_bound_on_point_box(rng):
    inst, _ = synthetic(8, 3, snr_db=10, seed=1)
    prep = preprocess(inst)
    for _ in range(50):
        z = prep.z_of(rng.permutation(8))
        lb = lower_bound(Rectangle(z, z), prep)
        # the assignment ignores the box: bound = ||z - z_w||^2 + g(z_w) with z_w the witness point
        zw = prep.z_of(lb.witness)
        assert lb.bound == pytest.approx((z - zw) @ (z - zw) + g(zw), abs=1e-12)
        assert lb.bound <= g(z) + 1e-12


def test_lower_bound_exact_on_extreme_vertex():
    inst, _ = synthetic(7, 1, snr_db=10, seed=4)
    prep = preprocess(inst)
    rect = initial_rectangle(prep)
    for end in (rect.l, rect.u):
        assert lower_bound(Rectangle(end, end), prep).bound == pytest.approx(g(end), abs=1e-12)


def test_lower_bound_below_all_permutations_on_root():
    for seed in range(10):
        inst, _ = synthetic(6, 2, snr_db=10, seed=seed)
        prep = preprocess(inst)
        Z = prep.y_bar[all_perms(6)] @ prep.U
        f_min = -np.einsum("ij,ij->i", Z, Z).min()
        assert lower_bound(initial_rectangle(prep), prep).bound <= f_min + 1e-12


def test_lower_bound_valid_on_random_subboxes(rng):
    inst, _ = synthetic(6, 3, snr_db=15, seed=7)
    prep = preprocess(inst)
    root = initial_rectangle(prep)
    Z = prep.y_bar[all_perms(6)] @ prep.U
    F = -np.einsum("ij,ij->i", Z, Z)
    for _ in range(300):
        a, b = rng.uniform(root.l, root.u), rng.uniform(root.l, root.u)
        rect = Rectangle(np.minimum(a, b), np.maximum(a, b))
        inside = np.all((Z >= rect.l) & (Z <= rect.u), axis=1)
        lb = lower_bound(rect, prep)
        if inside.any():
            assert lb.bound <= F[inside].min() + 1e-12
        # the witness sandwich holds whenever the witness lies in the box
        if rect.contains(prep.z_of(lb.witness)):
            assert g(prep.z_of(lb.witness)) >= lb.bound - 1e-12


def test_lower_bound_backends_agree(rng):
    inst, _ = synthetic(12, 3, snr_db=20, seed=3)
    prep = preprocess(inst)
    root = initial_rectangle(prep)
    for _ in range(20):
        a, b = rng.uniform(root.l, root.u), rng.uniform(root.l, root.u)
        rect = Rectangle(np.minimum(a, b), np.maximum(a, b))
        fast = lower_bound(rect, prep)
        slow = lower_bound(rect, prep, backend=GENERAL_LAP)
        assert fast.bound == pytest.approx(slow.bound, abs=1e-12)


def test_am_fixed_point():
    inst, truth = synthetic(30, 3, seed=2)
    prep = preprocess(inst)
    pi0 = invert_permutation(truth.pi_star)
    result = alternating_minimization(pi0, inst, prep)
    np.testing.assert_array_equal(result.pi, pi0)
    assert result.iterations == 1
    assert result.value == pytest.approx(-1.0, abs=1e-12)


def test_am_contract_noiseless():
    inst, _ = synthetic(40, 3, seed=11)
    prep = preprocess(inst)
    pi0 = identity_permutation(40)
    result = alternating_minimization(pi0, inst, prep, max_iters=100)
    assert result.iterations <= 100
    z0 = prep.z_of(pi0)
    assert result.value <= g(z0)


def test_am_monotone_across_instances(rng):
    for seed in range(100):
        m, n = int(rng.integers(5, 40)), int(rng.integers(1, 5))
        inst, _ = synthetic(m, n, snr_db=float(rng.uniform(0, 40)), seed=seed)
        prep = preprocess(inst)
        pi0 = rng.permutation(m)
        result = alternating_minimization(pi0, inst, prep)
        assert np.all(np.diff(result.residuals) <= 1e-12)
        assert -1.0 - 1e-12 <= result.value <= 0.0
        assert result.value <= g(prep.z_of(pi0)) + 1e-12
