"""Pointwise Schur factorization with continuous labeling along the circle.

The symbol is factored as ``A(z_j) = U T U*`` at every grid point; eigenvalue
labels and eigenvector phases are then propagated around the circle so that
the diagonal of ``T`` traces d closed curves.  The module also exposes the
curve family, the order relation on it, the wrap-around (monodromy)
permutation, and the sampled chain projections ``P_nu(z)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np
import scipy.linalg
import scipy.optimize

from .errors import AmbiguousTracking, NoConvergence, NontrivialMonodromy
from .symbol import SymbolSamples

__all__ = [
    "SchurFrames",
    "CurveSet",
    "ChainPoint",
    "BOTTOM",
    "TOP",
    "MonodromyReport",
    "schur_factor",
    "track_frames",
    "monodromy",
    "spectral_curves",
    "precede",
    "chain_projection_samples",
]

# Exhaustive assignment enumeration is used up to this dimension; beyond it
# the Hungarian method is used and tie/ambiguity diagnostics are skipped.
_ENUM_LIMIT = 6


@dataclass(frozen=True)
class SchurFrames:
    """Per-grid-point Schur data with curve-continuous labeling.

    ``eigenvalues[j, k]`` is the k-th curve's value at ``z_j``; columns of
    ``basis[j]`` are the Schur vectors; ``triangular[j]`` is upper triangular
    with the eigenvalues on its diagonal; ``projections[j, k]`` is the
    rank-one jump projection onto the k-th Schur vector.
    """

    d: int
    N: int
    eigenvalues: np.ndarray
    basis: np.ndarray
    triangular: np.ndarray
    projections: np.ndarray
    max_step: float
    max_factor_residual: float
    max_unitarity_defect: float

    def __post_init__(self):
        for name in ("eigenvalues", "basis", "triangular", "projections"):
            arr = getattr(self, name)
            arr.setflags(write=False)

    @property
    def angles(self):
        return 2.0 * np.pi * np.arange(self.N) / self.N

    @property
    def grid(self):
        return np.exp(1j * self.angles)


@dataclass(frozen=True)
class CurveSet:
    """The ordered family of closed spectral curves.

    ``curves[k-1]`` holds the N samples of the k-th curve, oriented with
    increasing arg z; ``alpha`` are the start values at z = 1 and ``beta``
    the end markers after a full loop (equal to ``alpha`` for closed curves).
    """

    d: int
    N: int
    curves: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        self.curves.setflags(write=False)
        self.alpha.setflags(write=False)
        self.beta.setflags(write=False)


class _ChainEnd:
    __slots__ = ("_name",)

    def __init__(self, name):
        self._name = name

    def __repr__(self):
        return self._name


#: Distinguished endpoints of the ordered curve family.
BOTTOM = _ChainEnd("BOTTOM")
TOP = _ChainEnd("TOP")


@dataclass(frozen=True)
class ChainPoint:
    """A point on the ordered curve family: curve index k, arc parameter t.

    The point is ``nu = lambda_k(e^{it})``; (k, t) is stored rather than the
    complex value because a self-intersecting curve does not determine t from
    the value alone.
    """

    k: int
    t: float

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"curve index must be >= 1, got {self.k}")
        if not 0.0 <= self.t < 2.0 * np.pi:
            raise ValueError(f"arc parameter must lie in [0, 2*pi), got {self.t}")


@dataclass(frozen=True)
class MonodromyReport:
    """Permutation closing the labels after one loop, with cycle structure.

    ``perm[k-1]`` is the 1-based label that curve k continues into after a
    full traversal; cycles list the nontrivial orbits.
    """

    perm: tuple
    cycles: tuple

    @property
    def is_identity(self):
        return all(p == i + 1 for i, p in enumerate(self.perm))


def precede(nu, mu):
    """Strict order on the curve family: lower curve number first, then t.

    BOTTOM precedes everything else and TOP follows everything else; the
    relation is irreflexive.
    """
    if nu is mu:
        return False
    if nu is BOTTOM:
        return True
    if mu is BOTTOM:
        return False
    if mu is TOP:
        return True
    if nu is TOP:
        return False
    return (nu.k, nu.t) < (mu.k, mu.t)


# Eigenvalue splits below this multiple of sqrt(machine eps) are
# indistinguishable from the perturbation noise of a defective pair.
_DEFECT_SNAP = 32.0 * np.sqrt(np.finfo(float).eps)


def _eig_2x2(M):
    # Closed-form eigenvalues of a 2x2 block.  A split below the defective
    # noise floor is collapsed onto the trace mean: the split of a (near)
    # defective pair carries an inherent sqrt(eps) error while the mean is
    # well conditioned, and the Schur basis rebuilt from the collapsed value
    # keeps the factorization residual at machine precision.
    tr = M[0, 0] + M[1, 1]
    det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
    s = np.sqrt(complex(tr * tr - 4.0 * det))
    if (np.conj(tr) * s).real < 0.0:
        s = -s
    lam1 = 0.5 * (tr + s)
    lam2 = det / lam1 if lam1 != 0.0 else 0.5 * (tr - s)
    scale = max(1.0, abs(lam1), abs(lam2))
    if abs(lam1 - lam2) <= _DEFECT_SNAP * scale:
        lam1 = lam2 = 0.5 * tr
    return lam1, lam2


def _schur_2x2(M, first, second):
    # Unitary triangularization with the prescribed eigenvalue first.
    va = np.array([M[0, 1], first - M[0, 0]], dtype=complex)
    vb = np.array([first - M[1, 1], M[1, 0]], dtype=complex)
    v = va if np.linalg.norm(va) >= np.linalg.norm(vb) else vb
    nv = np.linalg.norm(v)
    if nv == 0.0:
        v = np.array([1.0, 0.0], dtype=complex)
        nv = 1.0
    v = v / nv
    U = np.array([[v[0], -np.conj(v[1])], [v[1], np.conj(v[0])]], dtype=complex)
    t01 = U[:, 0].conj() @ M @ U[:, 1]
    T = np.array([[first, t01], [0.0, second]], dtype=complex)
    return U, T


def _swap_adjacent(U, T, k):
    # Exchange T[k,k] and T[k+1,k+1] by a unitary similarity acting on
    # columns k, k+1; the rotation maps e1 onto the eigenvector of the
    # trailing eigenvalue inside the 2x2 block.
    lam1, lam2 = T[k, k], T[k + 1, k + 1]
    x = np.array([T[k, k + 1], lam2 - lam1], dtype=complex)
    nx = np.linalg.norm(x)
    if nx == 0.0:
        return
    x /= nx
    G = np.array([[x[0], -np.conj(x[1])], [x[1], np.conj(x[0])]], dtype=complex)
    U[:, k : k + 2] = U[:, k : k + 2] @ G
    T[:, k : k + 2] = T[:, k : k + 2] @ G
    T[k : k + 2, :] = G.conj().T @ T[k : k + 2, :]
    T[k, k], T[k + 1, k + 1] = lam2, lam1
    T[k + 1, k] = 0.0


def _reorder_schur(U, T, perm):
    """Reorder the Schur form so slot i receives current diagonal index perm[i]."""
    U = U.copy()
    T = T.copy()
    slots = list(range(len(perm)))
    for i, want in enumerate(perm):
        j = slots.index(want)
        while j > i:
            _swap_adjacent(U, T, j - 1)
            slots[j - 1], slots[j] = slots[j], slots[j - 1]
            j -= 1
    return U, T


def _lex_descending(values):
    return np.lexsort((-values.imag, -values.real))


def _assignment_orders(prev, new):
    """All assignments slot i -> new index p[i], sorted by total |distance|.

    Exhaustive for d <= 6; beyond that only the Hungarian optimum is
    returned (tie and ambiguity diagnostics are then unavailable).
    """
    d = len(prev)
    C = np.abs(prev[:, None] - new[None, :])
    if d <= _ENUM_LIMIT:
        orders = [
            (float(sum(C[i, p[i]] for i in range(d))), p)
            for p in permutations(range(d))
        ]
        orders.sort(key=lambda item: (item[0], item[1]))
        return orders
    rows, cols = scipy.optimize.linear_sum_assignment(C)
    perm = tuple(int(cols[list(rows).index(i)]) for i in range(d))
    return [(float(C[np.arange(d), list(perm)].sum()), perm)]


def schur_factor(M, order_hint=None):
    """Unitary triangularization ``M = U T U*`` with a controlled diagonal order.

    Without a hint the diagonal is ordered by descending (Re, Im); curves are
    numbered so that the branch with the largest real part at z = 1 comes
    first, matching the chain traversal used throughout.  With a hint, the
    order minimizing the total matching distance to the hint is selected
    (ties resolved toward the lexicographically smallest permutation); the
    reordering is carried out by unitary adjacent swaps on the Schur form.
    """
    M = np.asarray(M, dtype=complex)
    if not np.all(np.isfinite(M)):
        raise NoConvergence("matrix has non-finite entries")
    d = M.shape[0]
    if d == 1:
        return np.eye(1, dtype=complex), M.copy()
    if d == 2:
        lam = np.array(_eig_2x2(M))
        if order_hint is None:
            order = _lex_descending(lam)
        else:
            hint = np.asarray(order_hint, dtype=complex)
            orders = _assignment_orders(hint, lam)
            order = list(orders[0][1])
        return _schur_2x2(M, lam[order[0]], lam[order[1]])
    try:
        T, U = scipy.linalg.schur(M, output="complex")
    except scipy.linalg.LinAlgError as exc:
        raise NoConvergence(f"QR iteration failed: {exc}") from exc
    diag = np.diag(T)
    if order_hint is None:
        perm = tuple(int(i) for i in _lex_descending(diag))
    else:
        hint = np.asarray(order_hint, dtype=complex)
        perm = _assignment_orders(hint, diag)[0][1]
    U, T = _reorder_schur(U, T, perm)
    T = np.triu(T)
    return U, T


def _fix_initial_phases(U, T):
    # Make the largest-modulus entry of each column real positive (first
    # index on modulus ties); compensate T to keep U T U* unchanged.
    d = U.shape[0]
    phases = np.ones(d, dtype=complex)
    for k in range(d):
        idx = int(np.argmax(np.abs(U[:, k])))
        pivot = U[idx, k]
        if pivot != 0.0:
            phases[k] = np.conj(pivot) / abs(pivot)
    return _apply_phases(U, T, phases)


def _apply_phases(U, T, phases):
    D = np.diag(phases)
    return U @ D, D.conj().T @ T @ D


def _align_phases(U_prev, U, T):
    phases = np.ones(U.shape[0], dtype=complex)
    for k in range(U.shape[0]):
        ip = np.vdot(U_prev[:, k], U[:, k])
        if abs(ip) > 0.0:
            phases[k] = np.conj(ip) / abs(ip)
    return _apply_phases(U, T, phases)


def _overlap(U_prev, U_new):
    return float(np.abs(np.sum(np.conj(U_prev) * U_new, axis=0)).sum())


def _check_ambiguity(orders, prev, new, scale, typical_motion):
    """Raise when the matching is nearly tied although the competitors sit
    far apart on the scale of the usual per-step motion — the signature of a
    close approach skipped between samples (under-resolution).  At genuine
    crossings or tangential touches the competing separations are themselves
    of motion size and no error is raised."""
    if len(orders) < 2:
        return
    d = len(prev)
    _, best_perm = orders[0]
    gap = orders[1][0] - orders[0][0]
    if gap >= 10.0 * typical_motion:
        return
    second_perm = orders[1][1]
    slots = [i for i in range(d) if best_perm[i] != second_perm[i]]
    if len(slots) < 2:
        return
    prev_sep = min(
        abs(prev[i] - prev[j]) for a, i in enumerate(slots) for j in slots[a + 1 :]
    )
    new_sep = min(
        abs(new[best_perm[i]] - new[best_perm[j]])
        for a, i in enumerate(slots)
        for j in slots[a + 1 :]
    )
    min_sep = min(prev_sep, new_sep)
    if min_sep > max(1e-9 * scale, 10.0 * typical_motion):
        raise AmbiguousTracking(
            f"assignment gap {gap:.3e} vs competitor separation {min_sep:.3e} "
            f"at motion scale {typical_motion:.3e}: grid too coarse to "
            "continue labels; raise N"
        )


def _select_order(orders, prev, new, U_raw, T_raw, U_prev, scale):
    """Pick the continuation order; near-ties are broken by Schur-basis overlap.

    Invariant-subspace continuity decides between cost-tied assignments
    (e.g. at a point where two curves touch); among equal overlaps the
    lexicographically smallest permutation preserves the previous order.
    """
    best_cost = orders[0][0]
    tie_tol = max(1e-12 * scale, 1e-3 * best_cost)
    tied = [perm for cost, perm in orders if cost - best_cost <= tie_tol]
    if len(tied) == 1:
        perm = tied[0]
        return _reorder_schur(U_raw, T_raw, perm) + (perm,)
    best = None
    for perm in tied:
        U_c, T_c = _reorder_schur(U_raw, T_raw, perm)
        score = _overlap(U_prev, U_c)
        if best is None or score > best[0] + 1e-12:
            best = (score, perm, U_c, T_c)
    _, perm, U_c, T_c = best
    return U_c, T_c, perm


def track_frames(samples, base_order=None):
    """Schur-factor every grid sample with continuous labels and phases.

    Frame 0 is ordered by ``base_order`` (a length-d hint list) or by
    descending (Re, Im); each later frame is matched to its predecessor by
    minimal total eigenvalue movement, with near-ties resolved toward the
    assignment whose reordered Schur basis overlaps the previous one most.
    Column phases are chosen so consecutive Schur vectors have nonnegative
    real inner product.

    Raises AmbiguousTracking when adjacent clouds cannot be matched reliably
    (see ``_check_ambiguity``) and propagates NoConvergence from the
    factorization.  Tracking is sequential by construction.
    """
    d, N = samples.d, samples.N
    values = samples.values
    lam = np.zeros((N, d), dtype=complex)
    basis = np.zeros((N, d, d), dtype=complex)
    tri = np.zeros((N, d, d), dtype=complex)

    U0, T0 = schur_factor(values[0], order_hint=base_order)
    U0, T0 = _fix_initial_phases(U0, T0)
    basis[0], tri[0] = U0, T0
    lam[0] = np.diag(T0)

    scale = max(1.0, float(np.max(np.abs(lam[0]))))
    motion_sum = 0.0
    for j in range(1, N):
        U_raw, T_raw = schur_factor(values[j])
        new = np.diag(T_raw)
        scale = max(scale, float(np.max(np.abs(new))))
        orders = _assignment_orders(lam[j - 1], new)
        typical = motion_sum / (j - 1) if j > 1 else orders[0][0] / d
        _check_ambiguity(orders, lam[j - 1], new, scale, typical)
        motion_sum += orders[0][0] / d
        U_j, T_j, _ = _select_order(
            orders, lam[j - 1], new, U_raw, T_raw, basis[j - 1], scale
        )
        U_j, T_j = _align_phases(basis[j - 1], U_j, T_j)
        basis[j], tri[j] = U_j, T_j
        lam[j] = np.diag(T_j)

    proj = np.einsum("jak,jbk->jkab", basis, basis.conj())
    steps = np.abs(np.diff(lam, axis=0))
    max_step = float(steps.max()) if steps.size else 0.0
    recon = np.einsum("jab,jbc,jdc->jad", basis, tri, basis.conj())
    max_res = float(np.linalg.norm(values - recon, axis=(1, 2)).max())
    eye = np.eye(d)
    gram = np.einsum("jba,jbc->jac", basis.conj(), basis)
    max_unit = float(np.linalg.norm(gram - eye, axis=(1, 2)).max())
    return SchurFrames(
        d=d,
        N=N,
        eigenvalues=lam,
        basis=basis,
        triangular=tri,
        projections=proj,
        max_step=max_step,
        max_factor_residual=max_res,
        max_unitarity_defect=max_unit,
    )


def monodromy(frames):
    """Permutation continuing frame N-1's labels one step onto frame 0.

    Identity means the labeling closes up and the curves are well-defined
    closed loops; any other permutation is reported together with its cycle
    structure.  Purely diagnostic — never raises.
    """
    prev = frames.eigenvalues[-1]
    new = frames.eigenvalues[0]
    orders = _assignment_orders(prev, new)
    best_cost = orders[0][0]
    tie_tol = max(1e-12, 1e-3 * best_cost)
    tied = [perm for cost, perm in orders if cost - best_cost <= tie_tol]
    if len(tied) > 1:
        U_prev, U0 = frames.basis[-1], frames.basis[0]
        scored = [
            (_overlap(U_prev, U0[:, list(perm)]), tuple(perm)) for perm in tied
        ]
        scored.sort(key=lambda item: (-item[0], item[1]))
        perm = scored[0][1]
    else:
        perm = tied[0]
    seen = set()
    cycles = []
    for start in range(frames.d):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        nxt = perm[start]
        while nxt != start:
            cycle.append(nxt)
            seen.add(nxt)
            nxt = perm[nxt]
        if len(cycle) > 1:
            cycles.append(tuple(c + 1 for c in cycle))
    return MonodromyReport(
        perm=tuple(p + 1 for p in perm), cycles=tuple(cycles)
    )


def _require_closed(frames):
    report = monodromy(frames)
    if not report.is_identity:
        raise NontrivialMonodromy(
            f"eigenvalue labels close up as permutation {report.perm} "
            f"with cycles {report.cycles}",
            report=report,
        )
    return report


def spectral_curves(frames):
    """The d closed curves traced by the labeled eigenvalues.

    Requires identity monodromy; otherwise the branches are not single
    valued and NontrivialMonodromy is raised.
    """
    _require_closed(frames)
    curves = frames.eigenvalues.T.copy()
    alpha = frames.eigenvalues[0].copy()
    return CurveSet(
        d=frames.d, N=frames.N, curves=curves, alpha=alpha, beta=alpha.copy()
    )


def chain_projection_samples(frames, nu):
    """Sampled chain projection ``P_nu(z_j)``.

    ``P_nu(z) = P_{k-1}(z) + chi(t_j in [0, nu.t)) * DeltaP_k(z)`` where
    ``P_{k-1} = sum_{l<k} DeltaP_l``; BOTTOM gives the zero matrix and TOP
    the identity at every grid point.
    """
    d, N = frames.d, frames.N
    if nu is BOTTOM:
        return SymbolSamples(d, N, np.zeros((N, d, d), dtype=complex))
    if nu is TOP:
        return SymbolSamples(d, N, np.broadcast_to(np.eye(d), (N, d, d)).copy())
    if not 1 <= nu.k <= d:
        raise ValueError(f"curve index {nu.k} outside 1..{d}")
    _require_closed(frames)
    P = frames.projections[:, : nu.k - 1].sum(axis=1)
    mask = frames.angles < nu.t
    P[mask] += frames.projections[mask, nu.k - 1]
    return SymbolSamples(d, N, P)
