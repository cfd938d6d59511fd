import numpy as np
import pytest

from energychange import (
    alpha_distance_matrix,
    as_time_series,
    check_alpha,
    e_hat_u,
    e_hat_v,
    merge_update,
    q_hat,
)

from oracles import direct_e_v, direct_q


def test_distance_matrix_single_observation():
    assert np.array_equal(alpha_distance_matrix(np.array([4.2]), 0.7), [[0.0]])


def test_distance_matrix_1d_alpha_one():
    D = alpha_distance_matrix(np.array([0.0, 3.0]), 1.0)
    assert D[0, 1] == D[1, 0] == 3.0
    assert D[0, 0] == D[1, 1] == 0.0


def test_distance_matrix_2d_alpha_half():
    x = np.array([[0.0, 0.0], [3.0, 4.0]])
    D = alpha_distance_matrix(x, 0.5)
    assert D[0, 1] == pytest.approx(np.sqrt(5.0), abs=1e-12)


def test_distance_matrix_translation_invariant():
    rng = np.random.default_rng(1)
    x = rng.normal(size=(30, 3))
    D1 = alpha_distance_matrix(x, 1.3)
    D2 = alpha_distance_matrix(x + np.array([5.0, -2.0, 100.0]), 1.3)
    assert np.allclose(D1, D2, atol=1e-9)


def test_distance_matrix_invariants_random():
    rng = np.random.default_rng(2)
    x = rng.normal(size=(25, 2))
    D = alpha_distance_matrix(x, 1.5)
    assert np.allclose(D, D.T)
    assert np.all(np.diag(D) == 0.0)
    assert np.all(D >= 0.0)


def test_non_finite_rejected_with_row():
    x = np.ones((5, 2))
    x[3, 1] = np.nan
    with pytest.raises(ValueError, match="row 3"):
        as_time_series(x)


@pytest.mark.parametrize("alpha", [0.0, -1.0, 2.5, np.inf])
def test_alpha_out_of_range(alpha):
    with pytest.raises(ValueError):
        check_alpha(alpha)


def test_e_hat_u_singletons():
    D = alpha_distance_matrix(np.array([0.0, 1.0]), 1.0)
    assert e_hat_u(D, [0], [1]) == 2.0


def test_e_hat_u_identical_points():
    D = alpha_distance_matrix(np.zeros(4), 1.7)
    assert e_hat_u(D, [0, 1], [2, 3]) == 0.0


def test_e_hat_u_hand_case():
    D = alpha_distance_matrix(np.array([0.0, 1.0, 2.0, 3.0]), 1.0)
    # (1/2)(2+3+1+2) - 1 - 1 = 2
    assert e_hat_u(D, [0, 1], [2, 3]) == pytest.approx(2.0, abs=1e-12)


def test_overlapping_sets_rejected():
    D = alpha_distance_matrix(np.arange(4.0), 1.0)
    with pytest.raises(ValueError, match="overlap"):
        e_hat_u(D, [0, 1], [1, 2])
    with pytest.raises(ValueError, match="overlap"):
        e_hat_v(D, [0, 1], [1, 2])


def test_e_hat_v_hand_cases():
    D = alpha_distance_matrix(np.array([0.0, 1.0, 2.0, 3.0]), 1.0)
    assert e_hat_v(D, [0], [1]) == 2.0  # singletons match the U-form
    assert e_hat_v(D, [0, 1], [2, 3]) == pytest.approx(3.0, abs=1e-12)
    D5 = alpha_distance_matrix(np.array([0.0, 1.0, 4.0, 10.0, 20.0]), 1.0)
    assert e_hat_v(D5, [0, 1, 2], [3, 4]) == pytest.approx(179.0 / 9.0, abs=1e-12)


def test_u_and_v_agree_on_singletons():
    rng = np.random.default_rng(3)
    x = rng.normal(size=(10, 2))
    D = alpha_distance_matrix(x, 0.8)
    for i, j in [(0, 1), (4, 9), (2, 7)]:
        assert e_hat_u(D, [i], [j]) == e_hat_v(D, [i], [j])


def test_divergences_symmetric():
    rng = np.random.default_rng(4)
    x = rng.normal(size=(12, 3))
    D = alpha_distance_matrix(x, 1.0)
    a, b = [0, 2, 5], [1, 7, 8, 9]
    assert e_hat_u(D, a, b) == pytest.approx(e_hat_u(D, b, a), rel=1e-12)
    assert e_hat_v(D, a, b) == pytest.approx(e_hat_v(D, b, a), rel=1e-12)


def test_q_hat_values():
    assert q_hat(2.0, 2, 2) == 2.0
    assert q_hat(0.0, 17, 5) == 0.0
    assert q_hat(3.0, 2, 2) == 3.0


def test_q_hat_rejects_empty():
    with pytest.raises(ValueError):
        q_hat(1.0, 0, 3)


def test_merge_update_hand_case():
    # C1={0}, C2={1}, C3={3}: e13=3, e23=2, e12=1
    assert merge_update(3.0, 2.0, 1.0, 1, 1, 1) == 3.0
    D = alpha_distance_matrix(np.array([0.0, 1.0, 3.0]), 1.0)
    direct = q_hat(e_hat_v(D, [0, 1], [2]), 2, 1)
    assert direct == pytest.approx(3.0, abs=1e-12)
    # the same identity fails for the U-form, which is why the
    # agglomerative path uses the V-form throughout
    direct_u = q_hat(e_hat_u(D, [0, 1], [2]), 2, 1)
    assert direct_u == pytest.approx(8.0 / 3.0, abs=1e-12)
    assert abs(direct_u - 3.0) > 0.1


def test_merge_update_zero_for_constant_segments():
    assert merge_update(0.0, 0.0, 0.0, 3, 2, 4) == 0.0


def test_merge_update_larger_hand_case():
    x = np.array([0.0, 1.0, 4.0, 10.0, 20.0])
    D = alpha_distance_matrix(x, 1.0)

    def q(a, b):
        return q_hat(e_hat_v(D, a, b), len(a), len(b))

    via_formula = merge_update(q([0, 1], [3, 4]), q([2], [3, 4]), q([0, 1], [2]), 2, 1, 2)
    direct = q([0, 1, 2], [3, 4])
    assert via_formula == pytest.approx(716.0 / 30.0, abs=1e-10)
    assert direct == pytest.approx(via_formula, rel=1e-12)


def test_merge_update_matches_direct_on_random_triples():
    rng = np.random.default_rng(5)
    checked = 0
    while checked < 200:
        t = int(rng.integers(6, 30))
        d = int(rng.integers(1, 4))
        alpha = float(rng.uniform(0.3, 2.0))
        x = rng.normal(size=(t, d)) * rng.uniform(0.5, 3.0)
        D = alpha_distance_matrix(x, alpha)
        cuts = np.sort(rng.choice(np.arange(1, t), size=3, replace=False))
        c1 = np.arange(0, cuts[0])
        c2 = np.arange(cuts[0], cuts[1])
        c3 = np.arange(cuts[1], cuts[2])
        if min(len(c1), len(c2), len(c3)) == 0:
            continue

        def q(a, b):
            return q_hat(direct_e_v(D, a, b), len(a), len(b))

        merged = merge_update(q(c1, c3), q(c2, c3), q(c1, c2), len(c1), len(c2), len(c3))
        direct = direct_q(direct_e_v(D, np.concatenate([c1, c2]), c3), len(c1) + len(c2), len(c3))
        assert merged == pytest.approx(direct, rel=1e-10, abs=1e-12)
        checked += 1


def test_null_divergence_shrinks_monte_carlo():
    # same distribution on both sides: the U-form divergence drifts to 0
    rng = np.random.default_rng(42)
    x = rng.normal(size=4000)
    D = alpha_distance_matrix(x, 1.0)
    e = e_hat_u(D, np.arange(2000), np.arange(2000, 4000))
    assert abs(e) < 0.05


def test_mean_shift_divergence_alpha_two_monte_carlo():
    # alpha=2 only sees means: the divergence estimates 2*(mean gap)^2
    rng = np.random.default_rng(7)
    x = np.concatenate([rng.normal(0.0, 1.0, 2000), rng.normal(2.0, 1.0, 2000)])
    D = alpha_distance_matrix(x, 2.0)
    e = e_hat_u(D, np.arange(2000), np.arange(2000, 4000))
    assert 7.5 <= e <= 8.5
