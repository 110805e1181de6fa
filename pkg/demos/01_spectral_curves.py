"""Tracked spectral curves of block Laurent symbols.

Four 2x2 symbols illustrate the range of curve geometries: a circle plus an
isolated point, two disjoint circles, two superimposed constant points, and
two circles touching at a non-diagonalizable parameter.  A fifth symbol has
square-root branches and shows how a failed label closure is reported.
"""

import numpy as np

from laurent_spectra import (
    BlockLaurentCoefficients,
    monodromy,
    sample_symbol,
    spectral_curves,
    track_frames,
)

SYMBOLS = {
    "circle + point        A(z) = [[z, 0], [1, 0]]": BlockLaurentCoefficients(
        2, {0: [[0, 0], [1, 0]], 1: [[1, 0], [0, 0]]}
    ),
    "two circles           A(z) = [[0, z], [z, 0]]": BlockLaurentCoefficients(
        2, {1: [[0, 1], [1, 0]]}
    ),
    "superimposed points   A(z) = [[2(1+i), z], [4/z, 2(1-i)]]": BlockLaurentCoefficients(
        2, {-1: [[0, 0], [4, 0]], 0: [[2 + 2j, 0], [0, 2 - 2j]], 1: [[0, 1], [0, 0]]}
    ),
    "touching circles      A(z) = [[z-1/2, i/2], [iz-i/2, 2z-1/2]]": BlockLaurentCoefficients(
        2, {0: [[-0.5, 0.5j], [-0.5j, -0.5]], 1: [[1, 0], [1j, 2]]}
    ),
}

N = 256
for title, coeffs in SYMBOLS.items():
    frames = track_frames(sample_symbol(coeffs, N))
    report = monodromy(frames)
    curves = spectral_curves(frames)
    print(title)
    print(f"  monodromy: {report.perm} (identity: {report.is_identity})")
    for k in range(curves.d):
        samples = curves.curves[k]
        radius = np.abs(samples - samples.mean()).max()
        print(
            f"  curve {k + 1}: starts at {curves.alpha[k]:+.3f}, "
            f"centroid {samples.mean():+.3f}, radius {radius:.3f}, "
            f"max step {np.abs(np.diff(samples)).max():.4f}"
        )
    print()

print("square-root branches  A(z) = [[0, z], [1, 0]]")
frames = track_frames(
    sample_symbol(
        BlockLaurentCoefficients(2, {0: [[0, 0], [1, 0]], 1: [[0, 1], [0, 0]]}), N
    )
)
report = monodromy(frames)
print(f"  monodromy: {report.perm}, cycles {report.cycles}")
print("  the labeling does not close up: the two branches of sqrt(z) swap")
print("  after one loop, so no single-valued curve family exists at this")
print("  sampling (curve-dependent operations refuse to run).")
