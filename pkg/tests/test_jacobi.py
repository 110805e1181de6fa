import numpy as np
import pytest

from laurent_spectra import (
    BandViolation,
    BlockLaurentCoefficients,
    BlockSequence,
    PeriodicJacobiSpec,
    SpectrumClass,
    apply_convolution,
    block_reduce,
    char_data,
    classify_spectrum,
    ellipse_set,
    eval_symbol,
    jacobi_spectrum,
    sample_symbol,
    spectrum,
    track_frames,
    tridiagonal_data,
    tridiagonal_regroup,
)

import oracles


def order1_spec(a, b, c):
    """Period strip of the d-periodic tridiagonal matrix with rows (b, a, c)."""
    d = len(a)
    entries = {}
    for r in range(d):
        entries[(r, r)] = a[r]
        entries[(r, r - 1)] = b[r]
        entries[(r, r + 1)] = c[r]
    return PeriodicJacobiSpec(d, 1, entries)


def random_order1(rng, d):
    def cvec():
        return rng.standard_normal(d) + 1j * rng.standard_normal(d)

    return order1_spec(cvec(), cvec(), cvec())


def _reduction_fidelity(spec, rng, span=9):
    """Max deviation between the scalar matvec and the block convolution."""
    reduced = block_reduce(spec)
    v = {
        i: complex(rng.standard_normal(), rng.standard_normal())
        for i in range(span)
    }
    lo = -spec.k - 2 * spec.d
    hi = span + spec.k + 2 * spec.d
    scalar = oracles.scalar_jacobi_matvec(spec, v, lo, hi)
    blocks = -(-span // spec.d)
    u = BlockSequence(
        spec.d,
        {
            n: np.array([v.get(spec.d * n + r, 0.0) for r in range(spec.d)])
            for n in range(blocks)
        },
    )
    conv = apply_convolution(reduced, u)
    worst = 0.0
    for i in range(lo, hi + 1):
        n, r = divmod(i, spec.d)
        got = conv.vector(n)[r]
        worst = max(worst, abs(got - scalar.get(i, 0.0)))
    return worst


class TestPeriodicJacobiSpec:
    def test_band_violation(self):
        with pytest.raises(BandViolation):
            PeriodicJacobiSpec(2, 1, {(0, 2): 1.0})

    def test_row_outside_period(self):
        with pytest.raises(BandViolation):
            PeriodicJacobiSpec(2, 1, {(2, 2): 1.0})

    def test_blunt_band_warns(self):
        with pytest.warns(UserWarning):
            PeriodicJacobiSpec(2, 2, {(0, 0): 1.0})

    def test_periodic_entry_lookup(self):
        spec = order1_spec([1, 2], [3, 4], [5, 6])
        assert spec.entry(0, 0) == 1 and spec.entry(2, 2) == 1
        assert spec.entry(3, 2) == 4 and spec.entry(1, 2) == 6
        assert spec.entry(5, 0) == 0.0


class TestBlockReduce:
    def test_order1_structure(self):
        a, b, c = [1, 2, 3], [4, 5, 6], [7, 8, 9]
        reduced = block_reduce(order1_spec(a, b, c))
        d = 3
        a1 = np.zeros((d, d)); a1[0, d - 1] = b[0]
        am1 = np.zeros((d, d)); am1[d - 1, 0] = c[d - 1]
        a0 = np.diag(a).astype(complex)
        a0[0, 1], a0[1, 2] = c[0], c[1]
        a0[1, 0], a0[2, 1] = b[1], b[2]
        assert np.array_equal(reduced.block(1), a1)
        assert np.array_equal(reduced.block(-1), am1)
        assert np.array_equal(reduced.block(0), a0)
        assert reduced.support() == (-1, 0, 1)

    def test_scalar_case(self):
        # Row (b, a, c) = (3, 1, 2): the sub-diagonal b lands in block +1 of
        # the convolution matrix [A_{j-k}] and the super-diagonal c in -1.
        spec = PeriodicJacobiSpec(
            1, 1, {(0, -1): 3.0, (0, 0): 1.0, (0, 1): 2.0}
        )
        reduced = block_reduce(spec)
        assert reduced.block(1)[0, 0] == 3.0
        assert reduced.block(0)[0, 0] == 1.0
        assert reduced.block(-1)[0, 0] == 2.0

    def test_random_d2_k3_fidelity(self):
        rng = np.random.default_rng(61)
        entries = {
            (r, s): complex(rng.standard_normal(), rng.standard_normal())
            for r in range(2)
            for s in range(r - 3, r + 4)
        }
        spec = PeriodicJacobiSpec(2, 3, entries)
        assert block_reduce(spec).band == 2  # m = ceil(3/2)
        assert _reduction_fidelity(spec, rng) < 1e-14

    def test_fidelity_across_shapes(self):
        rng = np.random.default_rng(62)
        for d, k in ((2, 1), (2, 3), (3, 2)):
            entries = {
                (r, s): complex(rng.standard_normal(), rng.standard_normal())
                for r in range(d)
                for s in range(r - k, r + k + 1)
            }
            spec = PeriodicJacobiSpec(d, k, entries)
            assert _reduction_fidelity(spec, rng) < 1e-14


class TestTridiagonalRegroup:
    def test_band1_identity_regrouping(self):
        reduced = block_reduce(order1_spec([1, 2], [3, 4], [5, 6]))
        blocks = tridiagonal_regroup(reduced)
        assert blocks.m == 1
        assert np.array_equal(blocks.j_0, reduced.block(0))
        assert np.array_equal(blocks.j_plus1, reduced.block(1))
        assert np.array_equal(blocks.j_minus1, reduced.block(-1))

    def _window_check(self, coeffs):
        blocks = tridiagonal_regroup(coeffs)
        m, d = blocks.m, blocks.d
        by_offset = {
            -1: blocks.j_minus1,
            0: blocks.j_0,
            1: blocks.j_plus1,
        }
        width = 10
        coarse = oracles.block_window(by_offset, m * d, width)
        fine = oracles.block_window(
            {n: coeffs.block(n) for n in range(-m, m + 1)}, d, width * m
        )
        assert np.array_equal(coarse, fine)

    def test_scalar_five_diagonal_window(self):
        rng = np.random.default_rng(71)
        coeffs = BlockLaurentCoefficients(
            1, {n: [[complex(rng.standard_normal())]] for n in range(-2, 3)}
        )
        self._window_check(coeffs)

    def test_d2_m2_window(self):
        rng = np.random.default_rng(72)
        coeffs = BlockLaurentCoefficients(
            2,
            {
                n: rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
                for n in range(-2, 3)
            },
        )
        self._window_check(coeffs)

    def test_regrouped_symbol_same_operator(self):
        # J_{-1} z^{-1} + J_0 + J_1 z at z^m agrees with the original symbol
        # in the sense of identical bi-infinite matrices (window check above);
        # here: determinant consistency at matched points.
        rng = np.random.default_rng(73)
        coeffs = BlockLaurentCoefficients(
            1, {n: [[complex(rng.standard_normal())]] for n in range(-2, 3)}
        )
        blocks = tridiagonal_regroup(coeffs)
        z = np.exp(0.37j)
        big = blocks.j_minus1 / z + blocks.j_0 + blocks.j_plus1 * z
        # Eigenvalues of the md x md symbol at z equal the union of the
        # d x d symbol eigenvalues over the m-th roots {w: w^m = z}.
        small = []
        for w in [z ** 0.5, -(z ** 0.5)]:
            small.extend(np.linalg.eigvals(
                sum(coeffs.block(n) * w**n for n in range(-2, 3))
            ))
        assert (
            np.abs(np.sort_complex(np.linalg.eigvals(big)) - np.sort_complex(np.array(small))).max()
            < 1e-10
        )


class TestCharData:
    def test_d2_closed_form(self):
        cd = char_data([0, 0], [1, 1], [1, 1])
        assert np.allclose(cd.q, [-2, 0, 1], atol=1e-14)  # Q = lambda^2 - 2
        assert cd.b == 1 and cd.c == 1

    def test_d2_against_symbol_determinant(self):
        rng = np.random.default_rng(81)
        a, b, c = (rng.standard_normal(2) + 1j * rng.standard_normal(2) for _ in range(3))
        spec = order1_spec(a, b, c)
        cd = char_data(a, b, c)
        reduced = block_reduce(spec)
        for _ in range(20):
            z = np.exp(2j * np.pi * rng.random())
            lam = complex(rng.standard_normal(), rng.standard_normal())
            lhs = np.linalg.det(eval_symbol(reduced, z) - lam * np.eye(2))
            rhs = (np.polynomial.polynomial.polyval(lam, cd.q) - cd.b * z - cd.c / z)
            assert abs(lhs - rhs) < 1e-12

    def test_d3_determinant_identity_random(self):
        rng = np.random.default_rng(82)
        spec = random_order1(rng, 3)
        a, b, c = tridiagonal_data(spec)
        cd = char_data(a, b, c)
        reduced = block_reduce(spec)
        for _ in range(50):
            z = np.exp(2j * np.pi * rng.random())
            lam = complex(rng.standard_normal(), rng.standard_normal())
            lhs = np.linalg.det(eval_symbol(reduced, z) - lam * np.eye(3))
            rhs = (-1) ** 3 * (
                np.polynomial.polynomial.polyval(lam, cd.q) - cd.b * z - cd.c / z
            )
            assert abs(lhs - rhs) < 1e-9

    def test_monic_leading_coefficient(self):
        rng = np.random.default_rng(83)
        for d in (1, 2, 3, 4, 5):
            spec = random_order1(rng, d)
            cd = char_data(*tridiagonal_data(spec))
            assert cd.degree == d
            assert cd.q[-1] == 1.0

    def test_zero_offband_products(self):
        cd = char_data([1.0, 2.0, 3.0], [0, 0, 0], [0, 0, 0])
        assert cd.b == 0 and cd.c == 0
        roots = oracles.companion_roots(cd.q)
        assert np.allclose(np.sort_complex(roots), [1.0, 2.0, 3.0], atol=1e-10)


class TestEllipseSet:
    def test_circle(self):
        w = ellipse_set(1.0, 0.0, 8)
        assert np.abs(w - np.exp(2j * np.pi * np.arange(8) / 8)).max() < 1e-14

    def test_segment(self):
        w = ellipse_set(0.5, 0.5, 16)
        assert np.abs(w.imag).max() < 1e-14
        assert np.abs(w.real - np.cos(2 * np.pi * np.arange(16) / 16)).max() < 1e-14

    def test_zero(self):
        assert np.abs(ellipse_set(0.0, 0.0, 5)).max() == 0.0


class TestJacobiSpectrum:
    def test_scalar_unit_circle(self):
        cd = char_data([0.0], [1.0], [0.0])
        cloud = jacobi_spectrum(cd, 16)
        assert np.abs(np.abs(cloud.points) - 1.0).max() < 1e-12

    def test_finite_set_repeated_roots(self):
        cd = char_data([1.0, 2.0, 3.0], [0, 0, 0], [0, 0, 0])
        cloud = jacobi_spectrum(cd, 8)
        for j in range(8):
            assert np.allclose(
                np.sort_complex(cloud.roots[j]), [1.0, 2.0, 3.0], atol=1e-8
            )

    def test_matches_direct_eigensolve(self):
        rng = np.random.default_rng(91)
        spec = random_order1(rng, 3)
        cd = char_data(*tridiagonal_data(spec))
        N = 256
        cloud = jacobi_spectrum(cd, N)
        direct = np.linalg.eigvals(sample_symbol(block_reduce(spec), N).values)
        a = cloud.points.reshape(-1, 1)
        b = direct.reshape(1, -1)
        dist = np.abs(a - b)
        hausdorff = max(dist.min(axis=1).max(), dist.min(axis=0).max())
        assert hausdorff < 1e-6

    def test_threads_deterministic(self):
        cd = char_data([0.0, 1.0], [1.0, 2.0], [0.5, 1.5])
        one = jacobi_spectrum(cd, 64, threads=1)
        four = jacobi_spectrum(cd, 64, threads=4)
        assert np.array_equal(one.roots, four.roots)


class TestCurveCrossings:
    def test_segment_touching_at_double_root(self):
        # Q = lambda^2 - 2 over E = [-2, 2]: the branches +-sqrt(2 + w)
        # meet exactly once, at w = -2.
        from laurent_spectra import curve_crossings

        cd = char_data([0.0, 0.0], [1.0, 1.0], [1.0, 1.0])
        cloud = jacobi_spectrum(cd, 128)
        assert curve_crossings(cloud.roots, tol=1e-6) == 1

    def test_separated_branches(self):
        from laurent_spectra import curve_crossings

        cd = char_data([0.0, 0.0], [1.0, 1.0], [0.0, 0.0])  # branches +-sqrt(w)
        cloud = jacobi_spectrum(cd, 128)
        assert curve_crossings(cloud.roots, tol=1e-6) == 0

    def test_coincident_branches_single_run(self):
        from laurent_spectra import curve_crossings

        roots = np.ones((16, 2), dtype=complex)
        assert curve_crossings(roots) == 1


class TestClassifySpectrum:
    def test_four_classes(self):
        assert classify_spectrum(2.0, 1.0) is SpectrumClass.ELLIPSE
        assert classify_spectrum(1.0, 0.0) is SpectrumClass.CIRCLE
        assert classify_spectrum(0.0, 2.0) is SpectrumClass.CIRCLE
        assert classify_spectrum(np.exp(1j * np.pi / 3), 1.0) is SpectrumClass.SEGMENT
        assert classify_spectrum(0.0, 0.0) is SpectrumClass.FINITE_SET

    def test_relative_tolerance(self):
        assert classify_spectrum(1.0, 1.0 + 1e-14) is SpectrumClass.SEGMENT
        assert classify_spectrum(1.0, 1.0 + 1e-9) is SpectrumClass.ELLIPSE

    def test_segment_samples_collinear(self):
        b = np.exp(1j * np.pi / 5) * 0.7
        c = 0.7j
        assert classify_spectrum(b, c) is SpectrumClass.SEGMENT
        w = ellipse_set(b, c, 64)
        # Rotating by half the total band phase puts the segment on the real
        # axis: the samples are collinear.
        phase = np.exp(-1j * np.angle(b * c) / 2)
        assert np.abs((w * phase).imag).max() < 1e-10

    def test_spectrum_consistency_with_schur_route(self):
        # Q^{-1}[E] against the labeled Schur-curve spectrum of the reduced
        # symbol, at matched sampling.
        rng = np.random.default_rng(95)
        spec = random_order1(rng, 2)
        cd = char_data(*tridiagonal_data(spec))
        N = 128
        cloud = jacobi_spectrum(cd, N)
        frames = track_frames(sample_symbol(block_reduce(spec), N))
        schur_cloud = spectrum(frames)
        a = cloud.points.reshape(-1, 1)
        b = schur_cloud.values.reshape(1, -1)
        dist = np.abs(a - b)
        assert max(dist.min(axis=1).max(), dist.min(axis=0).max()) < 1e-6
