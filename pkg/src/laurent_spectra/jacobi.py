"""Periodic banded Jacobi matrices reduced to block Laurent form.

A d-periodic banded Jacobi matrix of order k is stored as one period strip
of its band.  It reduces to a block Laurent operator with d x d blocks and
band m = ceil(k/d); regrouping m blocks at a time gives the block
tridiagonal form J_{-1}, J_0, J_1.  For the order-1 case the spectrum is the
preimage Q^{-1}[E] of the ellipse-family set E = {b z + c/z} under the
degree-d characteristic polynomial Q.
"""

from __future__ import annotations

import enum
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import BandViolation, RootFindingFailure
from .symbol import BlockLaurentCoefficients

__all__ = [
    "PeriodicJacobiSpec",
    "TridiagonalBlocks",
    "CharacteristicData",
    "JacobiSpectrum",
    "SpectrumClass",
    "block_reduce",
    "tridiagonal_regroup",
    "tridiagonal_data",
    "char_data",
    "ellipse_set",
    "jacobi_spectrum",
    "classify_spectrum",
    "curve_crossings",
]


@dataclass(frozen=True)
class PeriodicJacobiSpec:
    """One period strip of a d-periodic banded Jacobi matrix of order k.

    ``entries[(r, s)]`` is the scalar matrix entry a_{rs} for rows
    0 <= r < d; all other rows follow by a_{r+d, s+d} = a_{rs}.  Entries
    outside the band |r - s| <= k are forbidden; a strip whose outermost
    band is entirely zero only draws a warning (nothing downstream depends
    on band sharpness).
    """

    d: int
    k: int
    entries: MappingProxyType = field(default_factory=dict)

    def __post_init__(self):
        if self.d < 1 or self.k < 1:
            raise BandViolation(
                f"period d={self.d} and order k={self.k} must be positive"
            )
        frozen = {}
        edge = 0.0
        for (r, s), value in self.entries.items():
            r, s = int(r), int(s)
            if not 0 <= r < self.d:
                raise BandViolation(f"row {r} outside the stored period 0..{self.d - 1}")
            if abs(r - s) > self.k:
                raise BandViolation(
                    f"entry ({r}, {s}) outside the declared band |r-s| <= {self.k}"
                )
            if abs(r - s) == self.k:
                edge = max(edge, abs(complex(value)))
            frozen[(r, s)] = complex(value)
        if edge == 0.0:
            warnings.warn(
                f"no nonzero entry on |r-s| = {self.k}: declared order is not sharp",
                stacklevel=2,
            )
        object.__setattr__(self, "entries", MappingProxyType(frozen))

    def entry(self, i, j):
        """Scalar matrix entry a_{ij} for arbitrary integer indices."""
        if abs(i - j) > self.k:
            return 0.0 + 0.0j
        r = i % self.d
        return self.entries.get((r, j - (i - r)), 0.0 + 0.0j)


@dataclass(frozen=True)
class TridiagonalBlocks:
    """The md x md blocks J_{-1}, J_0, J_1 of the regrouped operator."""

    d: int
    m: int
    j_minus1: np.ndarray
    j_0: np.ndarray
    j_plus1: np.ndarray

    def __post_init__(self):
        for blk in (self.j_minus1, self.j_0, self.j_plus1):
            blk.setflags(write=False)


@dataclass(frozen=True)
class CharacteristicData:
    """Monic degree-d polynomial Q plus the band products b, c.

    ``q`` holds the coefficients of Q in increasing powers of lambda;
    det(A(z) - lambda I) = (-1)^d (Q(lambda) - b z - c z^{-1}).
    """

    q: np.ndarray
    b: complex
    c: complex

    def __post_init__(self):
        self.q.setflags(write=False)

    @property
    def degree(self):
        return len(self.q) - 1


class SpectrumClass(enum.Enum):
    ELLIPSE = "ellipse"
    CIRCLE = "circle"
    SEGMENT = "segment"
    FINITE_SET = "finite_set"


@dataclass(frozen=True)
class JacobiSpectrum:
    """Roots of Q(lambda) = w over the sampled set E, with source parameters."""

    t: np.ndarray
    w: np.ndarray
    roots: np.ndarray

    def __post_init__(self):
        self.t.setflags(write=False)
        self.w.setflags(write=False)
        self.roots.setflags(write=False)

    @property
    def points(self):
        return self.roots.reshape(-1)


def block_reduce(spec):
    """Blocks A_l of the reduced operator: (A_l)_{rs} = a_{r, s - d l}.

    Rows run over one period 0..d-1 and block columns over the strip window
    at column offset -d*l; blocks vanish for |l| > m = ceil(k/d).
    """
    d = spec.d
    m = -(-spec.k // d)
    out = {}
    for l in range(-m, m + 1):
        block = np.zeros((d, d), dtype=complex)
        for r in range(d):
            for j in range(d):
                block[r, j] = spec.entry(r, j - d * l)
        if np.any(block):
            out[l] = block
    return BlockLaurentCoefficients(d, out)


def tridiagonal_regroup(coeffs):
    """Regroup a band-m block Laurent operator into tridiagonal md x md form.

    J_1 is the upper-triangular block Toeplitz of (A_m ... A_1), J_{-1} the
    lower-triangular one of (A_{-1} ... A_{-m}) and J_0 the block Toeplitz
    with A_0 on its diagonal; the regrouped symbol J_{-1} z^{-1} + J_0 + J_1 z
    represents the same bi-infinite matrix.
    """
    d = coeffs.d
    m = max(1, coeffs.band)
    size = m * d
    j1 = np.zeros((size, size), dtype=complex)
    j0 = np.zeros((size, size), dtype=complex)
    jm1 = np.zeros((size, size), dtype=complex)
    for i in range(m):
        for j in range(m):
            rows = slice(i * d, (i + 1) * d)
            cols = slice(j * d, (j + 1) * d)
            j0[rows, cols] = coeffs.block(i - j)
            if j >= i:
                j1[rows, cols] = coeffs.block(m + i - j)
            if i >= j:
                jm1[rows, cols] = coeffs.block(-m + i - j)
    return TridiagonalBlocks(d=d, m=m, j_minus1=jm1, j_0=j0, j_plus1=j1)


def tridiagonal_data(spec):
    """Extract (a_i, b_i, c_i) arrays from an order-1 period strip.

    Row r of the strip carries b_{r+1} = a_{r, r-1}, a_{r+1} = a_{r, r} and
    c_{r+1} = a_{r, r+1}.
    """
    if spec.k != 1:
        raise BandViolation(f"order-1 data requested from an order-{spec.k} strip")
    d = spec.d
    a = np.array([spec.entry(r, r) for r in range(d)])
    b = np.array([spec.entry(r, r - 1) for r in range(d)])
    c = np.array([spec.entry(r, r + 1) for r in range(d)])
    return a, b, c


def _tridiag_det_poly(diag, off_products):
    # Three-term recurrence for det(tridiag(diag_i - lambda)) as a
    # polynomial in lambda (coefficients in increasing powers).
    prev2 = np.array([1.0 + 0.0j])
    if len(diag) == 0:
        return prev2
    prev1 = np.array([diag[0], -1.0], dtype=complex)
    for i in range(1, len(diag)):
        term = npoly.polymul(np.array([diag[i], -1.0], dtype=complex), prev1)
        term = npoly.polysub(term, off_products[i - 1] * prev2)
        prev2, prev1 = prev1, term
    return prev1


def char_data(a, b, c):
    """Characteristic data of the order-1 d-periodic case.

    Q is built from the two tridiagonal determinants (the full period minor
    and the interior minor weighted by b_1 c_d), normalized monic;
    b = b_1 ... b_d and c = c_1 ... c_d.  For d = 1 the determinant identity
    forces the monic special case Q(lambda) = lambda - a_1.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    c = np.asarray(c, dtype=complex)
    d = len(a)
    bprod = complex(np.prod(b))
    cprod = complex(np.prod(c))
    if d == 1:
        q = np.array([-a[0], 1.0], dtype=complex)
        return CharacteristicData(q=q, b=bprod, c=cprod)
    off_full = np.array([b[i] * c[i - 1] for i in range(1, d)], dtype=complex)
    det_full = _tridiag_det_poly(a, off_full)
    off_inner = np.array([b[i + 1] * c[i] for i in range(1, d - 2)], dtype=complex)
    det_inner = _tridiag_det_poly(a[1 : d - 1], off_inner)
    sign = (-1.0) ** d
    q = npoly.polyadd(sign * det_full, -sign * b[0] * c[d - 1] * det_inner)
    q = np.asarray(q, dtype=complex)
    if len(q) < d + 1:
        q = np.pad(q, (0, d + 1 - len(q)))
    return CharacteristicData(q=q, b=bprod, c=cprod)


def ellipse_set(b, c, N):
    """Samples of E = {b z + c z^{-1}} on the uniform N-point grid."""
    if N < 1:
        raise ValueError(f"need at least one sample, got {N}")
    z = np.exp(2j * np.pi * np.arange(N) / N)
    return b * z + c / z


def _companion_stack(q, w):
    d = len(q) - 1
    comp = np.zeros((len(w), d, d), dtype=complex)
    comp[:, 1:, :-1] = np.eye(d - 1)
    comp[:, :, -1] = -np.asarray(q[:d])
    comp[:, 0, -1] += w  # constant coefficient becomes q0 - w
    return comp


def jacobi_spectrum(cd, N, threads=1):
    """Point cloud Q^{-1}[E]: all d roots of Q(lambda) = w per sample w.

    Roots are found as companion-matrix eigenvalues; the output keeps the
    source grid order and the companion solve's root order.  Non-finite
    solves are collected and raised as RootFindingFailure, never dropped.
    """
    t = 2.0 * np.pi * np.arange(N) / N
    w = ellipse_set(cd.b, cd.c, N)
    d = cd.degree
    if d == 1:
        roots = (w - cd.q[0])[:, None]
    else:
        comp = _companion_stack(cd.q, w)
        if threads > 1:
            chunks = np.array_split(np.arange(N), threads)
            roots = np.zeros((N, d), dtype=complex)

            def solve(idx):
                return idx, np.linalg.eigvals(comp[idx])

            with ThreadPoolExecutor(max_workers=threads) as pool:
                for idx, vals in pool.map(solve, chunks):
                    roots[idx] = vals
        else:
            roots = np.linalg.eigvals(comp)
    bad = np.nonzero(~np.isfinite(roots).all(axis=1))[0]
    if bad.size:
        raise RootFindingFailure(
            f"root solve failed at {bad.size} grid points", failed_indices=bad
        )
    return JacobiSpectrum(t=t, w=w, roots=roots)


def curve_crossings(roots, tol=1e-6):
    """Diagnostic count of parameter runs where two root branches meet.

    ``roots`` holds the d eigenvalues per grid point in any per-point order
    (pairwise distances are permutation invariant).  Counts maximal circular
    runs of grid parameters at which some pair comes within ``tol``.  This
    is a report, never an invariant: intersection counting on sampled
    curves is tolerance-fragile by nature.
    """
    roots = np.asarray(roots)
    N, d = roots.shape
    if d < 2:
        return 0
    iu, il = np.triu_indices(d, 1)
    close_any = (np.abs(roots[:, iu] - roots[:, il]) < tol).any(axis=1)
    if close_any.all():
        return 1 if close_any.size else 0
    return int(np.sum(close_any & ~np.roll(close_any, 1)))


def classify_spectrum(b, c):
    """Shape of E: ellipse, circle, segment, or a finite set.

    b = c = 0 gives a finite set (the root set of Q); exactly one of them
    zero gives a circle; |b| = |c| (relative tolerance 1e-12) a segment;
    otherwise an ellipse.
    """
    b, c = complex(b), complex(c)
    if b == 0.0 and c == 0.0:
        return SpectrumClass.FINITE_SET
    if b == 0.0 or c == 0.0:
        return SpectrumClass.CIRCLE
    if abs(abs(b) - abs(c)) <= 1e-12 * max(abs(b), abs(c)):
        return SpectrumClass.SEGMENT
    return SpectrumClass.ELLIPSE
