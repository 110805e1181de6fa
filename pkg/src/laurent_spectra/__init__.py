"""Schur-chain spectral resolution of block Laurent operators.

The package computes, for a block convolution (Laurent) operator given by
finitely many matrix coefficients: continuously tracked Schur factorizations
of its symbol on the unit circle, the ordered family of spectral curves and
its invariant chain of projections, the triangular decomposition
A = A0 + A+ with a nilpotent upper part, and spectrum/separation reports.
A dedicated module reduces d-periodic banded Jacobi matrices to this block
form and classifies their spectra.
"""

from .decomposition import (
    SpectrumCloud,
    TriangularDecomposition,
    decompose_operator,
    diagonal_symbol,
    nilpotency_index,
    projection_coefficients,
    spectrum,
    spectrum_split,
    upper_symbol,
)
from .errors import (
    AmbiguousTracking,
    BandViolation,
    DimensionMismatch,
    GridTooCoarse,
    LaurentSpectraError,
    NoConvergence,
    NontrivialMonodromy,
    ParseError,
    RootFindingFailure,
)
from .jacobi import (
    CharacteristicData,
    JacobiSpectrum,
    PeriodicJacobiSpec,
    SpectrumClass,
    TridiagonalBlocks,
    block_reduce,
    char_data,
    classify_spectrum,
    curve_crossings,
    ellipse_set,
    jacobi_spectrum,
    tridiagonal_data,
    tridiagonal_regroup,
)
from .schur_chain import (
    BOTTOM,
    TOP,
    ChainPoint,
    CurveSet,
    MonodromyReport,
    SchurFrames,
    chain_projection_samples,
    monodromy,
    precede,
    schur_factor,
    spectral_curves,
    track_frames,
)
from .symbol import (
    BlockLaurentCoefficients,
    BlockSequence,
    SymbolSamples,
    apply_convolution,
    coefficient_norms,
    convolve_coefficients,
    eval_symbol,
    fourier_coefficients,
    sample_symbol,
)

__version__ = "0.1.0"
