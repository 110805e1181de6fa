"""Block Laurent operators represented by their matrix symbols.

A block Laurent (convolution) operator is the bi-infinite block Toeplitz
matrix ``[A_{j-k}]`` built from finitely many d x d coefficient blocks
``A_n``.  Its symbol is the matrix-valued function ``A(z) = sum_n A_n z^n``
on the unit circle.  This module holds the coefficient/sample containers and
the basic operations between them: evaluation, uniform sampling, discrete
Fourier analysis, and application of the operator to finitely supported
block sequences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from .errors import DimensionMismatch, GridTooCoarse

__all__ = [
    "BlockLaurentCoefficients",
    "SymbolSamples",
    "BlockSequence",
    "eval_symbol",
    "sample_symbol",
    "fourier_coefficients",
    "apply_convolution",
    "convolve_coefficients",
    "coefficient_norms",
]


def _frozen_block(mat, d, what="coefficient"):
    a = np.array(mat, dtype=complex)
    if a.shape != (d, d):
        raise DimensionMismatch(
            f"{what} block has shape {a.shape}, expected ({d}, {d})"
        )
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BlockLaurentCoefficients:
    """Finitely supported map ``n -> A_n`` of d x d complex blocks.

    The stored blocks are defensively copied and made read-only; indices not
    present are treated as zero.  The l1 norm ``sum_n |A_n|`` is trivially
    finite by finite support.
    """

    d: int
    coeffs: MappingProxyType = field(default_factory=dict)

    def __post_init__(self):
        if self.d < 1:
            raise DimensionMismatch(f"block dimension must be positive, got {self.d}")
        frozen = {
            int(n): _frozen_block(block, self.d) for n, block in self.coeffs.items()
        }
        object.__setattr__(self, "coeffs", MappingProxyType(frozen))

    def support(self):
        """Sorted tuple of indices carrying a stored block."""
        return tuple(sorted(self.coeffs))

    @property
    def n_min(self):
        return min(self.coeffs) if self.coeffs else 0

    @property
    def n_max(self):
        return max(self.coeffs) if self.coeffs else 0

    @property
    def band(self):
        """Smallest b with support contained in [-b, b]."""
        return max(abs(self.n_min), abs(self.n_max))

    def block(self, n):
        """Coefficient at index ``n`` (a zero matrix off the support)."""
        blk = self.coeffs.get(int(n))
        if blk is None:
            return np.zeros((self.d, self.d), dtype=complex)
        return blk

    def trimmed(self, tol=0.0):
        """Copy without blocks of Frobenius norm <= ``tol``."""
        kept = {
            n: blk for n, blk in self.coeffs.items() if np.linalg.norm(blk) > tol
        }
        return BlockLaurentCoefficients(self.d, kept)


@dataclass(frozen=True)
class SymbolSamples:
    """Values of a matrix-valued function on the uniform grid of the circle.

    Entry ``values[j]`` holds the value at ``z_j = exp(2*pi*i*j/N)``; the grid
    starts at ``z_0 = 1`` and runs counter-clockwise.
    """

    d: int
    N: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.N, self.d, self.d):
            raise DimensionMismatch(
                f"sample array has shape {v.shape}, expected ({self.N}, {self.d}, {self.d})"
            )
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def angles(self):
        """Grid parameters t_j = 2*pi*j/N."""
        return 2.0 * np.pi * np.arange(self.N) / self.N

    @property
    def grid(self):
        """Grid points z_j on the unit circle."""
        return np.exp(1j * self.angles)


@dataclass(frozen=True)
class BlockSequence:
    """Finitely supported sequence of vectors in C^d, indexed over Z."""

    d: int
    entries: MappingProxyType = field(default_factory=dict)

    def __post_init__(self):
        frozen = {}
        for n, vec in self.entries.items():
            v = np.array(vec, dtype=complex)
            if v.shape != (self.d,):
                raise DimensionMismatch(
                    f"sequence entry {n} has shape {v.shape}, expected ({self.d},)"
                )
            v.setflags(write=False)
            frozen[int(n)] = v
        object.__setattr__(self, "entries", MappingProxyType(frozen))

    def support(self):
        return tuple(sorted(self.entries))

    def vector(self, n):
        vec = self.entries.get(int(n))
        if vec is None:
            return np.zeros(self.d, dtype=complex)
        return vec


def eval_symbol(coeffs, z):
    """Evaluate the symbol ``A(z) = sum_n A_n z^n`` at a point.

    The contract assumes ``|z| = 1`` within 1e-12; this is documented rather
    than enforced (the finite sum is well defined for any nonzero z).
    """
    out = np.zeros((coeffs.d, coeffs.d), dtype=complex)
    z = complex(z)
    for n, block in coeffs.coeffs.items():
        out += block * z**n
    return out


def sample_symbol(coeffs, N):
    """Sample the symbol on the uniform N-point grid of the unit circle.

    Requires ``N >= 2 * max(|n_min|, n_max) + 1`` so that the samples
    determine the coefficients exactly (trig-polynomial quadrature).
    """
    bound = 2 * coeffs.band + 1
    if N < bound:
        raise GridTooCoarse(
            f"grid size {N} below 2*band+1 = {bound} for support "
            f"[{coeffs.n_min}, {coeffs.n_max}]"
        )
    z = np.exp(2j * np.pi * np.arange(N) / N)
    values = np.zeros((N, coeffs.d, coeffs.d), dtype=complex)
    for n, block in coeffs.coeffs.items():
        values += z[:, None, None] ** n * block
    return SymbolSamples(coeffs.d, N, values)


def fourier_coefficients(samples, index_range):
    """Discrete Fourier coefficients of sampled symbol values.

    Coefficient ``n`` is the quadrature ``(1/N) sum_j values[j] z_j^{-n}``,
    the uniform-grid approximation of ``int_T A(z) z^{-n} dtau``; it is exact
    whenever the sampled function is a Laurent polynomial of band < N/2.
    ``index_range`` is an inclusive pair (lo, hi).
    """
    lo, hi = int(index_range[0]), int(index_range[1])
    if lo > hi:
        raise ValueError(f"empty coefficient range [{lo}, {hi}]")
    # (1/N) sum_j v_j e^{-2 pi i j n / N} is the FFT bin at n mod N.
    spectrum = np.fft.fft(samples.values, axis=0) / samples.N
    out = {n: spectrum[n % samples.N] for n in range(lo, hi + 1)}
    return BlockLaurentCoefficients(samples.d, out)


def apply_convolution(coeffs, u):
    """Apply the convolution operator: ``(Au)_n = sum_k A_{n-k} u_k``.

    Output support is contained in [u_min + n_min, u_max + n_max].
    """
    if coeffs.d != u.d:
        raise DimensionMismatch(
            f"coefficient block dimension {coeffs.d} != sequence dimension {u.d}"
        )
    out = {}
    for k in sorted(u.entries):
        uk = u.entries[k]
        for n, block in sorted(coeffs.coeffs.items()):
            idx = n + k
            contrib = block @ uk
            if idx in out:
                out[idx] = out[idx] + contrib
            else:
                out[idx] = contrib
    return BlockSequence(u.d, out)


def convolve_coefficients(a, b):
    """Cauchy product of two coefficient sequences: ``(AB)_n = sum_k A_k B_{n-k}``.

    This is the coefficient-level form of composing the two convolution
    operators (their symbols multiply pointwise).
    """
    if a.d != b.d:
        raise DimensionMismatch(f"block dimensions differ: {a.d} != {b.d}")
    out = {}
    for k, ak in sorted(a.coeffs.items()):
        for l, bl in sorted(b.coeffs.items()):
            idx = k + l
            contrib = ak @ bl
            if idx in out:
                out[idx] = out[idx] + contrib
            else:
                out[idx] = contrib
    return BlockLaurentCoefficients(a.d, out)


def coefficient_norms(coeffs):
    """Frobenius-norm diagnostics ``(sum_n |A_n|, sqrt(sum_n |A_n|^2))``.

    Finiteness of the second value is the computable trace of the
    square-summability condition satisfied by symbols of bounded operators.
    """
    norms = [np.linalg.norm(block) for block in coeffs.coeffs.values()]
    l1 = float(np.sum(norms)) if norms else 0.0
    l2 = float(np.sqrt(np.sum(np.square(norms)))) if norms else 0.0
    return l1, l2
