import numpy as np
import pytest

from rsvdlab import (
    IDENTITY,
    RankDeficiencyError,
    approximate_with_sketch,
    apply_filter_sketch,
    bilevel_profile,
    eckart_young_lower,
    frobenius_sq,
    gaussian_matrix,
    least_squares_oracle,
    make_rng,
    poly_filter,
    power_filter,
    rsvd,
    rsvd_filtered,
    solution_norm_check,
    synthesize_matrix,
    uniform_profile,
)


def test_identity_matrix_error_is_m_minus_k():
    # ||I - P||_F^2 = m - k for any rank-k orthoprojector P
    for m, k in [(30, 12), (50, 1), (25, 25)]:
        res = rsvd(np.eye(m), k, make_rng(m + k))
        assert res.err_sq == pytest.approx(m - k, abs=1e-8)


def test_full_rank_sketch_reproduces_matrix():
    A = gaussian_matrix(12, 8, make_rng(1))
    res = rsvd(A, 8, make_rng(2))
    assert res.err_sq <= 1e-8 * frobenius_sq(A)
    res_f = rsvd_filtered(np.diag([3.0, 2.0, 1.0]), 3, power_filter(2), make_rng(3))
    assert res_f.err_sq <= 1e-8 * frobenius_sq(np.diag([3.0, 2.0, 1.0]))


def test_filtered_identity_is_bitwise_rsvd():
    A = gaussian_matrix(15, 10, make_rng(4))
    plain = rsvd(A, 4, make_rng(9))
    filtered = rsvd_filtered(A, 4, IDENTITY, make_rng(9))
    assert np.array_equal(plain.Q, filtered.Q)
    assert np.array_equal(plain.QtA, filtered.QtA)
    assert plain.err_sq == filtered.err_sq


def test_projector_identity():
    A = gaussian_matrix(20, 16, make_rng(5))
    res = rsvd(A, 6, make_rng(6))
    gap = np.linalg.norm(res.A_hat - res.Q @ (res.Q.T @ A))
    assert gap <= 1e-10 * np.linalg.norm(A)


def test_pythagoras_cross_check():
    sm = synthesize_matrix(bilevel_profile(4, 20, 1.0, 0.3), 40, 35, make_rng(7))
    res = rsvd(sm.A, 10, make_rng(8))
    direct = frobenius_sq(sm.A - res.A_hat)
    assert res.err_sq == pytest.approx(direct, rel=1e-8, abs=1e-12)


def test_eckart_young_floor_per_trial():
    profile = bilevel_profile(5, 40, 1.0, 0.4)
    sm = synthesize_matrix(profile, 60, 50, make_rng(10))
    energy = profile.energy()
    for k in (5, 10, 20):
        for seed in range(5):
            res = rsvd(sm.A, k, make_rng(100 * k + seed))
            assert res.err_sq >= eckart_young_lower(profile, k) - 1e-6 * energy


def test_rank_bound_of_result():
    A = gaussian_matrix(18, 12, make_rng(11))
    res = rsvd(A, 5, make_rng(12))
    assert res.k == 5
    assert res.Q.shape == (18, 5)
    assert np.linalg.matrix_rank(res.A_hat) <= 5


def test_rsvd_rejects_bad_k():
    A = gaussian_matrix(10, 6, make_rng(13))
    with pytest.raises(ValueError):
        rsvd(A, 0, make_rng(0))
    with pytest.raises(ValueError):
        rsvd(A, 7, make_rng(0))


def test_rsvd_rejects_k_above_rank():
    # rank-1 matrix sketched with k = 2 must report the deficiency
    u = gaussian_matrix(10, 1, make_rng(14))
    v = gaussian_matrix(8, 1, make_rng(15))
    A = u @ v.T
    with pytest.raises(RankDeficiencyError):
        rsvd(A, 2, make_rng(16))


def test_oracle_matches_projection_identity_case():
    A = np.eye(2)
    Omega = np.array([[1.0], [0.0]])
    A_ls = least_squares_oracle(A, Omega, IDENTITY)
    expected = np.array([[1.0, 0.0], [0.0, 0.0]])
    assert np.allclose(A_ls, expected, atol=1e-12)


@pytest.mark.parametrize(
    "spec", [IDENTITY, power_filter(1), power_filter(2), poly_filter([0.5, 2.0])]
)
def test_oracle_equivalence(spec):
    sm = synthesize_matrix(uniform_profile(1.0, 15), 30, 20, make_rng(17))
    A = sm.A + 0.3 * gaussian_matrix(30, 20, make_rng(18)) / np.sqrt(20)
    Omega = gaussian_matrix(20, 6, make_rng(19))
    res = approximate_with_sketch(A, Omega, spec)
    A_ls = least_squares_oracle(A, Omega, spec)
    gap = np.linalg.norm(A_ls - res.A_hat)
    assert gap <= 1e-8 * np.linalg.norm(A)


def test_oracle_local_optimality():
    A = gaussian_matrix(30, 20, make_rng(20))
    Omega = gaussian_matrix(20, 6, make_rng(21))
    Y = apply_filter_sketch(A, Omega, power_filter(1))
    B, _, _, _ = np.linalg.lstsq(Y, A, rcond=None)
    best = frobenius_sq(A - Y @ B)
    rng = make_rng(22)
    for _ in range(100):
        delta = 1e-3 * rng.standard_normal(B.shape)
        assert frobenius_sq(A - Y @ (B + delta)) >= best


def test_oracle_rejects_rank_deficiency():
    u = gaussian_matrix(10, 1, make_rng(23))
    A = u @ u.T  # 10 x 10, rank 1
    Omega = gaussian_matrix(10, 3, make_rng(24))
    with pytest.raises(RankDeficiencyError):
        least_squares_oracle(A, Omega, IDENTITY)


def test_solution_norm_check_identity():
    d, k = 50, 5
    report = solution_norm_check(np.eye(d), gaussian_matrix(d, k, make_rng(25)), k)
    assert report.kappa == pytest.approx(1.0)
    assert report.held


def test_solution_norm_check_random_seeds():
    violations = 0
    for seed in range(20):
        A = gaussian_matrix(200, 200, make_rng(1000 + seed))
        Omega = gaussian_matrix(200, 20, make_rng(2000 + seed))
        report = solution_norm_check(A, Omega, 20)
        violations += not report.held
    assert violations == 0


def test_solution_norm_check_rejects_degenerate():
    A = gaussian_matrix(10, 6, make_rng(26))
    Omega = gaussian_matrix(6, 6, make_rng(27))
    with pytest.raises(ValueError):
        solution_norm_check(A, Omega, 6)
