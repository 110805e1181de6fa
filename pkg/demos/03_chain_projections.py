"""The invariant chain of projections P_nu and its Fourier coefficients.

A point nu on the ordered curve family cuts the spectrum into predecessors
and successors; the matching projection P_nu(z) has an indicator
discontinuity in z, handled by quadrature panels anchored at the jumps.
The closed forms below come from integrating the rank-one projections of
the two 2x2 model symbols by hand.
"""

import numpy as np

from laurent_spectra import (
    BlockLaurentCoefficients,
    ChainPoint,
    projection_coefficients,
    sample_symbol,
    spectrum_split,
    track_frames,
)

print("Symbol A(z) = [[z, 0], [1, 0]] (circle followed by the point 0)")
coeffs = BlockLaurentCoefficients(2, {0: [[0, 0], [1, 0]], 1: [[1, 0], [0, 0]]})
frames = track_frames(sample_symbol(coeffs, 256))

theta = np.pi / 2
nu = ChainPoint(1, theta)
got = projection_coefficients(frames, nu, (-1, 1))
closed_n0 = np.array(
    [
        [theta, -1j * (np.exp(1j * theta) - 1)],
        [1j * (np.exp(-1j * theta) - 1), theta],
    ]
) / (4 * np.pi)
print(f"  nu = (curve 1, t = pi/2); n = 0 coefficient:")
print("    computed:", np.array_str(got.block(0), precision=5, suppress_small=True).replace("\n", " "))
print("    closed  :", np.array_str(closed_n0, precision=5, suppress_small=True).replace("\n", " "))

pred, succ = spectrum_split(frames, ChainPoint(1, np.pi))
print(
    f"  split at (1, pi): {len(pred)} predecessor samples (upper half circle), "
    f"{len(succ)} successors (lower half and the point 0)"
)
print()

print("Symbol A(z) = [[0, z], [z, 0]] (curves +z and -z; the chain reduces A)")
coeffs = BlockLaurentCoefficients(2, {1: [[0, 1], [1, 0]]})
frames = track_frames(sample_symbol(coeffs, 256))
for theta in (np.pi / 4, np.pi):
    got = projection_coefficients(frames, ChainPoint(1, theta), (0, 0)).block(0)
    expected = theta / (4 * np.pi) * np.ones((2, 2))
    print(
        f"  theta = {theta:.4f}: n = 0 coefficient deviates from"
        f" (theta/4pi)*ones by {np.abs(got - expected).max():.2e}"
    )
