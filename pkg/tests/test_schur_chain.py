import numpy as np
import pytest
import scipy.optimize

from laurent_spectra import (
    BOTTOM,
    TOP,
    BlockLaurentCoefficients,
    ChainPoint,
    NontrivialMonodromy,
    chain_projection_samples,
    monodromy,
    precede,
    sample_symbol,
    schur_factor,
    spectral_curves,
    track_frames,
)

import oracles
from conftest import random_coefficients


def _assert_valid_factorization(M, U, T, tol=1e-10):
    d = M.shape[0]
    assert np.linalg.norm(U.conj().T @ U - np.eye(d)) < tol
    assert np.linalg.norm(M - U @ T @ U.conj().T) < tol
    assert np.abs(np.tril(T, -1)).max() == 0.0


class TestSchurFactor:
    def test_example3_matrix(self):
        M = np.array([[2 + 2j, 1], [4, 2 - 2j]])
        U, T = schur_factor(M)
        _assert_valid_factorization(M, U, T)
        # T = [[2, 5], [0, 2]] up to the unimodular column phases of U.
        assert np.abs(T[0, 0] - 2) < 1e-12 and np.abs(T[1, 1] - 2) < 1e-12
        assert abs(abs(T[0, 1]) - 5) < 1e-12

    def test_diagonal_with_hint(self):
        M = np.diag([3.0 + 0j, 1.0 - 2j, -4.0 + 1j])
        U, T = schur_factor(M, order_hint=np.diag(M))
        _assert_valid_factorization(M, U, T)
        assert np.allclose(np.diag(T), np.diag(M), atol=1e-12)
        # U is the identity up to column phases.
        assert np.allclose(np.abs(U), np.eye(3), atol=1e-12)

    def test_random_matches_companion_oracle(self):
        rng = np.random.default_rng(101)
        for _ in range(20):
            M = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            U, T = schur_factor(M)
            _assert_valid_factorization(M, U, T, tol=1e-9)
            roots = oracles.companion_roots(oracles.charpoly_coeffs(M))
            cost = np.abs(np.diag(T)[:, None] - roots[None, :])
            rows, cols = scipy.optimize.linear_sum_assignment(cost)
            assert cost[rows, cols].max() < 1e-8

    def test_default_order_is_descending(self):
        M = np.diag([1.0 + 0j, 0.0j, 2.0 + 0j])
        _, T = schur_factor(M)
        assert np.allclose(np.diag(T), [2.0, 1.0, 0.0], atol=1e-14)

    def test_nonfinite_input_surfaces_as_error(self):
        from laurent_spectra import NoConvergence

        with pytest.raises(NoConvergence):
            schur_factor(np.array([[np.nan, 0.0], [0.0, 1.0]], dtype=complex))
        with pytest.raises(NoConvergence):
            schur_factor(np.diag([np.inf + 0j, 1.0, 2.0]))


class TestTrackFrames:
    def test_example1_curves(self, ex1):
        samples = sample_symbol(ex1, 64)
        frames = track_frames(samples)
        z = samples.grid
        assert np.abs(frames.eigenvalues[:, 0] - z).max() < 1e-10
        assert np.abs(frames.eigenvalues[:, 1]).max() < 1e-10

    def test_constant_diagonal_symbol(self):
        coeffs = BlockLaurentCoefficients(2, {0: np.diag([1.0, 2.0])})
        frames = track_frames(sample_symbol(coeffs, 16))
        # Constant symbol: every frame equals frame 0; columns are standard
        # basis vectors up to phase.
        assert np.abs(frames.eigenvalues - frames.eigenvalues[0]).max() < 1e-14
        assert np.allclose(np.abs(frames.basis), np.abs(frames.basis[0]), atol=1e-14)
        assert np.allclose(sorted(np.abs(frames.basis[0]).ravel()), [0, 0, 1, 1])
        # With an explicit base order the basis is the identity up to phases.
        frames = track_frames(sample_symbol(coeffs, 16), base_order=[1.0, 2.0])
        assert np.allclose(np.abs(frames.basis), np.broadcast_to(np.eye(2), (16, 2, 2)), atol=1e-14)
        assert np.allclose(frames.eigenvalues[0], [1.0, 2.0], atol=1e-14)

    def test_example4_touching_curves(self, ex4):
        samples = sample_symbol(ex4, 256)
        frames = track_frames(samples)
        z = samples.grid
        assert np.abs(frames.eigenvalues[:, 0] - z).max() < 1e-10
        assert np.abs(frames.eigenvalues[:, 1] - (2 * z - 1)).max() < 1e-10

    def test_hungarian_path_above_enumeration_limit(self):
        # d = 7 goes through linear_sum_assignment instead of exhaustive
        # permutation enumeration.
        rng = np.random.default_rng(13)
        diag = rng.standard_normal(7) + 1j * rng.standard_normal(7)
        coeffs = BlockLaurentCoefficients(
            7, {0: np.diag(diag), 1: 0.05 * rng.standard_normal((7, 7))}
        )
        samples = sample_symbol(coeffs, 64)
        frames = track_frames(samples)
        assert frames.max_factor_residual < 1e-9
        assert monodromy(frames).is_identity

    def test_frame_invariants_random(self):
        rng = np.random.default_rng(77)
        for _ in range(10):
            coeffs = random_coefficients(rng)
            samples = sample_symbol(coeffs, 128)
            frames = track_frames(samples)
            assert frames.max_factor_residual < 1e-9
            assert frames.max_unitarity_defect < 1e-10
            completeness = np.linalg.norm(
                frames.projections.sum(axis=1) - np.eye(frames.d), axis=(1, 2)
            ).max()
            assert completeness < 1e-10
            # Eigenvalues match an independent dense solve at every point.
            direct = np.linalg.eigvals(samples.values)
            for j in range(frames.N):
                cost = np.abs(frames.eigenvalues[j][:, None] - direct[j][None, :])
                rows, cols = scipy.optimize.linear_sum_assignment(cost)
                assert cost[rows, cols].max() < 1e-8

    def test_step_continuity_bound(self, ex1, ex4):
        # Per-step eigenvalue motion stays within the curve-speed bound
        # 2 pi v / N (v = 1 for example 1, v = 2 for the touching example).
        for coeffs, speed in ((ex1, 1.0), (ex4, 2.0)):
            for N in (64, 256):
                frames = track_frames(sample_symbol(coeffs, N))
                assert frames.max_step <= 1.1 * speed * 2 * np.pi / N

    def test_phase_alignment_nonnegative(self, ex3, ex4):
        for coeffs in (ex3, ex4):
            frames = track_frames(sample_symbol(coeffs, 64))
            for j in range(1, frames.N):
                for k in range(frames.d):
                    ip = np.vdot(frames.basis[j - 1][:, k], frames.basis[j][:, k])
                    assert ip.real >= -1e-12

    def test_projections_are_rank_one_orthogonal(self, ex1):
        frames = track_frames(sample_symbol(ex1, 32))
        P = frames.projections
        for k in range(2):
            assert np.linalg.norm(P[:, k] @ P[:, k] - P[:, k], axis=(1, 2)).max() < 1e-10
            herm = P[:, k] - P[:, k].conj().transpose(0, 2, 1)
            assert np.linalg.norm(herm, axis=(1, 2)).max() < 1e-10
        cross = np.linalg.norm(P[:, 0] @ P[:, 1], axis=(1, 2)).max()
        assert cross < 1e-10


class TestMonodromy:
    def test_example2_identity(self, ex2):
        frames = track_frames(sample_symbol(ex2, 128))
        report = monodromy(frames)
        assert report.is_identity
        assert report.perm == (1, 2)
        assert report.cycles == ()

    def test_constant_identity(self):
        coeffs = BlockLaurentCoefficients(2, {0: np.diag([1.0, 2.0])})
        assert monodromy(track_frames(sample_symbol(coeffs, 16))).is_identity

    def test_square_root_branch_swap(self, sqrt_monodromy):
        N = 128
        samples = sample_symbol(sqrt_monodromy, N)
        frames = track_frames(samples)
        report = monodromy(frames)
        assert report.perm == (2, 1)
        assert report.cycles == ((1, 2),)
        # The tracked branches follow the analytic two-valued square root.
        t = samples.angles
        assert np.abs(frames.eigenvalues[:, 0] - np.exp(1j * t / 2)).max() < 1e-10
        assert np.abs(frames.eigenvalues[:, 1] + np.exp(1j * t / 2)).max() < 1e-10


class TestSpectralCurves:
    def test_example1(self, ex1):
        samples = sample_symbol(ex1, 64)
        curves = spectral_curves(track_frames(samples))
        assert np.abs(curves.curves[0] - samples.grid).max() < 1e-10
        assert np.abs(curves.curves[1]).max() < 1e-10
        assert np.abs(curves.alpha[0] - 1.0) < 1e-12

    def test_example3_superimposed_points(self, ex3):
        curves = spectral_curves(track_frames(sample_symbol(ex3, 64)))
        assert np.abs(curves.curves - 2.0).max() < 1e-10

    def test_constant_diagonal(self):
        coeffs = BlockLaurentCoefficients(2, {0: np.diag([1.0, 2.0])})
        curves = spectral_curves(track_frames(sample_symbol(coeffs, 16)))
        assert sorted(curves.alpha.real) == [1.0, 2.0]
        assert np.abs(curves.curves - curves.alpha[:, None]).max() < 1e-14

    def test_nontrivial_monodromy_raises(self, sqrt_monodromy):
        frames = track_frames(sample_symbol(sqrt_monodromy, 64))
        with pytest.raises(NontrivialMonodromy) as info:
            spectral_curves(frames)
        assert info.value.report.perm == (2, 1)


class TestPrecede:
    def test_examples(self):
        assert precede(ChainPoint(1, np.pi / 2), ChainPoint(2, 0.0))
        assert not precede(ChainPoint(1, 0.0), ChainPoint(1, 0.0))
        assert precede(BOTTOM, ChainPoint(1, 0.0))
        assert precede(ChainPoint(5, 6.0), TOP)
        assert precede(BOTTOM, TOP)
        assert not precede(BOTTOM, BOTTOM)
        assert not precede(TOP, TOP)
        assert not precede(TOP, ChainPoint(1, 0.0))

    def test_strict_total_order(self):
        rng = np.random.default_rng(9)
        points = [BOTTOM, TOP] + [
            ChainPoint(int(rng.integers(1, 4)), float(rng.uniform(0, 2 * np.pi)))
            for _ in range(100)
        ]
        for a in points:
            for b in points:
                same = (a is b) or (
                    isinstance(a, ChainPoint)
                    and isinstance(b, ChainPoint)
                    and a == b
                )
                holds = sum([precede(a, b), precede(b, a), same])
                assert holds == 1


class TestChainProjectionSamples:
    def test_bottom_and_top(self, ex1):
        frames = track_frames(sample_symbol(ex1, 16))
        assert np.abs(chain_projection_samples(frames, BOTTOM).values).max() == 0.0
        top = chain_projection_samples(frames, TOP).values
        assert np.abs(top - np.eye(2)).max() == 0.0

    def test_example1_point_on_second_curve(self, ex1):
        # nu = (k=2, t=0): the first curve is fully consumed, none of the
        # second; P_nu(z_j) = DeltaP_1(z_j).
        samples = sample_symbol(ex1, 32)
        frames = track_frames(samples)
        P = chain_projection_samples(frames, ChainPoint(2, 0.0)).values
        z = samples.grid
        expected = 0.5 * np.stack([np.array([[1, zz], [1 / zz, 1]]) for zz in z])
        assert np.abs(P - expected).max() < 1e-10

    def test_example2_indicator_form(self, ex2):
        samples = sample_symbol(ex2, 64)
        frames = track_frames(samples)
        theta = np.pi / 2
        P = chain_projection_samples(frames, ChainPoint(1, theta)).values
        t = samples.angles
        half = 0.5 * np.ones((2, 2))
        expected = np.where((t < theta)[:, None, None], half, 0.0)
        assert np.abs(P - expected).max() < 1e-10

    def test_monotonicity_and_invariance(self, ex1):
        samples = sample_symbol(ex1, 64)
        frames = track_frames(samples)
        points = [BOTTOM, ChainPoint(1, 1.0), ChainPoint(1, 4.0), ChainPoint(2, 0.0), TOP]
        values = [chain_projection_samples(frames, nu).values for nu in points]
        for i, P in enumerate(values):
            assert np.linalg.norm(P @ P - P, axis=(1, 2)).max() < 1e-10
            herm = P - P.conj().transpose(0, 2, 1)
            assert np.linalg.norm(herm, axis=(1, 2)).max() < 1e-10
            A = samples.values
            assert np.linalg.norm(P @ A @ P - A @ P, axis=(1, 2)).max() < 1e-9
            for Q in values[i + 1 :]:
                assert np.linalg.norm(P @ Q - P, axis=(1, 2)).max() < 1e-10

    def test_nontrivial_monodromy_raises(self, sqrt_monodromy):
        frames = track_frames(sample_symbol(sqrt_monodromy, 64))
        with pytest.raises(NontrivialMonodromy):
            chain_projection_samples(frames, ChainPoint(1, 1.0))
