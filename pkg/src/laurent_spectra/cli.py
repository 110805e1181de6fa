"""Command-line front end: read coefficient/Jacobi JSON, emit analysis artifacts.

Subcommands: analyze | decompose | chain | jacobi | verify.  Artifacts are
written atomically after all computation succeeds, with deterministic float
formatting; failures print a machine-readable error object to stderr and
exit 1 (input error) or 2 (analysis error)."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.optimize

from . import decomposition as dec
from . import jacobi as jac
from . import schur_chain as sch
from . import serialization as ser
from . import symbol as sym
from .errors import (
    AmbiguousTracking,
    BandViolation,
    DimensionMismatch,
    GridTooCoarse,
    NoConvergence,
    NontrivialMonodromy,
    ParseError,
    RootFindingFailure,
)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_ANALYSIS = 2

_INPUT_ERRORS = (ParseError, DimensionMismatch, BandViolation, OSError, ValueError)
_ANALYSIS_ERRORS = (
    GridTooCoarse,
    NontrivialMonodromy,
    AmbiguousTracking,
    NoConvergence,
    RootFindingFailure,
)


@dataclass
class RunConfig:
    grid: int = 256
    quad: int = 1024
    coeff_range: tuple = (-8, 8)
    out: Path = field(default_factory=lambda: Path("."))
    fmt: str = "json"
    nu: object = None
    threads: int = 1

    def __post_init__(self):
        if self.grid < 8:
            raise ParseError(f"grid size must be >= 8, got {self.grid}")
        lo, hi = self.coeff_range
        if lo > hi:
            raise ParseError(f"empty coefficient range {lo}:{hi}")


def _parse_range(text):
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError as exc:
        raise ParseError(f"range must be LO:HI, got {text!r}") from exc


def _parse_nu(text):
    if text.lower() == "bottom":
        return sch.BOTTOM
    if text.lower() == "top":
        return sch.TOP
    try:
        k, t = text.split(",")
        return sch.ChainPoint(int(k), float(t))
    except ValueError as exc:
        raise ParseError(f'nu must be "K,T", "bottom" or "top", got {text!r}') from exc


def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


def _write_artifacts(out_dir, artifacts):
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, text in artifacts:
        ser.atomic_write_text(out_dir / name, text)


def _monodromy_obj(report):
    return {
        "identity": report.is_identity,
        "perm": list(report.perm),
        "cycles": [list(c) for c in report.cycles],
    }


def cmd_analyze(coeffs, cfg):
    samples = sym.sample_symbol(coeffs, cfg.grid)
    frames = sch.track_frames(samples)
    cloud = dec.spectrum(frames)
    report = sch.monodromy(frames)
    frames_obj = {
        "d": frames.d,
        "N": frames.N,
        "alpha": [_pair(a) for a in frames.eigenvalues[0]],
        "max_step": frames.max_step,
        "max_factor_residual": frames.max_factor_residual,
        "max_unitarity_defect": frames.max_unitarity_defect,
    }
    artifacts = [
        ("frames.json", ser.json_dumps(frames_obj)),
        ("monodromy.json", ser.json_dumps(_monodromy_obj(report))),
    ]
    if cfg.fmt == "csv":
        artifacts.append(("spectrum.csv", ser.spectrum_to_csv(cloud)))
    else:
        artifacts.append(("spectrum.json", ser.json_dumps(ser.spectrum_to_obj(cloud))))
    _write_artifacts(cfg.out, artifacts)
    if not report.is_identity:
        raise NontrivialMonodromy(
            f"labels close up as permutation {report.perm} (cycles {report.cycles}); "
            "spectrum artifacts were written, curve analysis is invalid",
            report=report,
        )
    return EXIT_OK


def cmd_decompose(coeffs, cfg):
    result = dec.decompose_operator(coeffs, N=cfg.grid, index_range=cfg.coeff_range)
    report = {
        "grid": cfg.grid,
        "range": list(result.truncation_range),
        "nilpotency_index": result.nilpotency_index,
        "residual": result.residual,
        "tail_indicator": result.tail_indicator,
    }
    # Blocks at numerical-noise level are dropped from the artifacts so a
    # vanishing part serializes as an empty coefficient map.
    artifacts = [
        ("a0.json", ser.json_dumps(ser.coefficients_to_obj(result.a0.trimmed(1e-14)))),
        ("aplus.json", ser.json_dumps(ser.coefficients_to_obj(result.aplus.trimmed(1e-14)))),
        ("decomposition.json", ser.json_dumps(report)),
    ]
    _write_artifacts(cfg.out, artifacts)
    return EXIT_OK


def cmd_chain(coeffs, cfg):
    if cfg.nu is None:
        raise ParseError("chain requires --nu K,T (or bottom/top)")
    samples = sym.sample_symbol(coeffs, cfg.grid)
    frames = sch.track_frames(samples)
    pcoeffs = dec.projection_coefficients(
        frames, cfg.nu, cfg.coeff_range, quad_points=cfg.quad
    )
    p_samples = sch.chain_projection_samples(frames, cfg.nu).values
    a_values = samples.values
    invariance = float(
        np.linalg.norm(
            p_samples @ a_values @ p_samples - a_values @ p_samples, axis=(1, 2)
        ).max()
    )
    idem = float(np.linalg.norm(p_samples @ p_samples - p_samples, axis=(1, 2)).max())
    herm = float(
        np.linalg.norm(p_samples - p_samples.conj().transpose(0, 2, 1), axis=(1, 2)).max()
    )
    if cfg.nu is sch.BOTTOM:
        nu_obj = "bottom"
    elif cfg.nu is sch.TOP:
        nu_obj = "top"
    else:
        nu_obj = {"k": cfg.nu.k, "t": cfg.nu.t}
    report = {
        "nu": nu_obj,
        "grid": cfg.grid,
        "quad": cfg.quad,
        "invariance_residual": invariance,
        "idempotency_residual": idem,
        "hermiticity_residual": herm,
    }
    artifacts = [
        ("p_nu.json", ser.json_dumps(ser.coefficients_to_obj(pcoeffs.trimmed(1e-14)))),
        ("chain_report.json", ser.json_dumps(report)),
    ]
    _write_artifacts(cfg.out, artifacts)
    return EXIT_OK


def _ellipse_csv(t, w):
    lines = ["t,re,im"]
    for i in range(len(w)):
        lines.append(
            f"{ser.format_float(t[i])},{ser.format_float(w[i].real)},{ser.format_float(w[i].imag)}"
        )
    return "\n".join(lines) + "\n"


def _roots_csv(spec_cloud):
    lines = ["t,w_re,w_im,root,re,im"]
    for i in range(len(spec_cloud.w)):
        for r in range(spec_cloud.roots.shape[1]):
            val = spec_cloud.roots[i, r]
            lines.append(
                f"{ser.format_float(spec_cloud.t[i])},"
                f"{ser.format_float(spec_cloud.w[i].real)},"
                f"{ser.format_float(spec_cloud.w[i].imag)},"
                f"{r + 1},"
                f"{ser.format_float(val.real)},{ser.format_float(val.imag)}"
            )
    return "\n".join(lines) + "\n"


def _schur_cloud_csv(cloud):
    return ser.spectrum_to_csv(cloud)


def cmd_jacobi(spec, cfg):
    reduced = jac.block_reduce(spec)
    artifacts = [
        ("reduced.json", ser.json_dumps(ser.coefficients_to_obj(reduced)))
    ]
    if spec.k == 1:
        a, b, c = jac.tridiagonal_data(spec)
        cd = jac.char_data(a, b, c)
        cls = jac.classify_spectrum(cd.b, cd.c)
        cloud = jac.jacobi_spectrum(cd, cfg.grid, threads=cfg.threads)
        charpoly = {
            "degree": cd.degree,
            "q": [_pair(q) for q in cd.q],
            "b": _pair(cd.b),
            "c": _pair(cd.c),
        }
        classification = {
            "class": cls.value,
            "abs_b": abs(cd.b),
            "abs_c": abs(cd.c),
            "curve_crossings": jac.curve_crossings(cloud.roots),
        }
        artifacts += [
            ("charpoly.json", ser.json_dumps(charpoly)),
            ("classification.json", ser.json_dumps(classification)),
            ("E.csv", _ellipse_csv(cloud.t, cloud.w)),
            ("spectrum.csv", _roots_csv(cloud)),
        ]
    else:
        # No scalar characteristic pipeline beyond order 1: report the
        # eigenvalue cloud of the reduced symbol instead.
        samples = sym.sample_symbol(reduced, cfg.grid)
        frames = sch.track_frames(samples)
        artifacts.append(("spectrum.csv", _schur_cloud_csv(dec.spectrum(frames))))
    _write_artifacts(cfg.out, artifacts)
    return EXIT_OK


def _hausdorff(a, b):
    a = np.asarray(a).reshape(-1, 1)
    b = np.asarray(b).reshape(1, -1)
    dist = np.abs(a - b)
    return max(float(dist.min(axis=1).max()), float(dist.min(axis=0).max()))


def _window_matvec(coeffs, u, lo, hi):
    # Dense finite-section application of the bi-infinite block matrix.
    d = coeffs.d
    width = hi - lo + 1
    M = np.zeros((width * d, width * d), dtype=complex)
    for I in range(width):
        for J in range(width):
            M[I * d : (I + 1) * d, J * d : (J + 1) * d] = coeffs.block(I - J)
    v = np.zeros(width * d, dtype=complex)
    for n in u.support():
        v[(n - lo) * d : (n - lo + 1) * d] = u.vector(n)
    return M @ v


def _verify_coefficients(coeffs, cfg):
    checks = []
    samples = sym.sample_symbol(coeffs, cfg.grid)
    round_trip = sym.fourier_coefficients(samples, (-coeffs.band, coeffs.band))
    rt_err = max(
        float(np.abs(round_trip.block(n) - coeffs.block(n)).max())
        for n in range(-coeffs.band, coeffs.band + 1)
    )
    checks.append(("coefficient_round_trip", rt_err, 1e-13))

    rng = np.random.default_rng(11)
    d = coeffs.d
    u = sym.BlockSequence(
        d, {n: rng.standard_normal(d) + 1j * rng.standard_normal(d) for n in range(3)}
    )
    v = sym.BlockSequence(
        d, {n: rng.standard_normal(d) + 1j * rng.standard_normal(d) for n in (-1, 1)}
    )
    conv = sym.apply_convolution(coeffs, u)
    band = coeffs.band
    lo, hi = -band - 3, 2 + band + 3
    window = _window_matvec(coeffs, u, lo, hi)
    conv_err = max(
        float(np.abs(conv.vector(n) - window[(n - lo) * d : (n - lo + 1) * d]).max())
        for n in range(lo + band, hi - band + 1)
    )
    checks.append(("convolution_finite_section", conv_err, 1e-12))
    sym_err = 0.0
    for z in np.exp(2j * np.pi * np.arange(8) / 8):
        u_hat = sum(u.vector(n) * z**n for n in u.support())
        out_hat = sum(conv.vector(n) * z**n for n in conv.support())
        sym_err = max(
            sym_err,
            float(np.abs(out_hat - sym.eval_symbol(coeffs, z) @ u_hat).max()),
        )
    checks.append(("convolution_symbol_consistency", sym_err, 1e-12))
    a, b = 1.5 - 0.5j, 0.25j
    combined = sym.BlockSequence(
        d,
        {
            n: a * u.vector(n) + b * v.vector(n)
            for n in set(u.support()) | set(v.support())
        },
    )
    lin = sym.apply_convolution(coeffs, combined)
    av = sym.apply_convolution(coeffs, v)
    lin_err = max(
        float(np.abs(lin.vector(n) - (a * conv.vector(n) + b * av.vector(n))).max())
        for n in lin.support()
    )
    checks.append(("convolution_linearity", lin_err, 1e-12))

    frames = sch.track_frames(samples)
    checks.append(("schur_residual", frames.max_factor_residual, 1e-9))
    checks.append(("unitarity", frames.max_unitarity_defect, 1e-10))
    completeness = float(
        np.linalg.norm(
            frames.projections.sum(axis=1) - np.eye(frames.d), axis=(1, 2)
        ).max()
    )
    checks.append(("projection_completeness", completeness, 1e-10))

    a0 = dec.diagonal_symbol(frames).values
    aplus = dec.upper_symbol(frames).values
    recon = float(np.linalg.norm(samples.values - a0 - aplus, axis=(1, 2)).max())
    checks.append(("reconstruction", recon, 1e-10))

    direct = np.linalg.eigvals(samples.values)
    diag = np.linalg.eigvals(a0)
    eig_err = 0.0
    for j in range(frames.N):
        cost = np.abs(direct[j][:, None] - diag[j][None, :])
        rows, cols = scipy.optimize.linear_sum_assignment(cost)
        eig_err = max(eig_err, float(cost[rows, cols].max()))
    checks.append(("diagonal_spectrum_equality", eig_err, 1e-8))

    # Points listed in chain order: BOTTOM, then (k, t) lexicographic, TOP.
    nus = (
        [sch.BOTTOM]
        + [
            sch.ChainPoint(k, t)
            for k in range(1, frames.d + 1)
            for t in (0.0, np.pi / 2, np.pi, 3 * np.pi / 2)
        ]
        + [sch.TOP]
    )
    projections = [sch.chain_projection_samples(frames, nu).values for nu in nus]
    mono = 0.0
    for i, pi_ in enumerate(projections):
        for pj in projections[i + 1 :]:
            fwd = np.linalg.norm(pi_ @ pj - pi_, axis=(1, 2)).max()
            bwd = np.linalg.norm(pj @ pi_ - pi_, axis=(1, 2)).max()
            mono = max(mono, float(max(fwd, bwd)))
    checks.append(("chain_monotonicity", mono, 1e-10))
    inv = max(
        float(
            np.linalg.norm(
                p @ samples.values @ p - samples.values @ p, axis=(1, 2)
            ).max()
        )
        for p in projections
    )
    checks.append(("chain_invariance", inv, 1e-9))
    comm = max(
        float(np.linalg.norm(a0 @ p - p @ a0, axis=(1, 2)).max()) for p in projections
    )
    checks.append(("diagonal_commutation", comm, 1e-9))

    power = aplus.copy()
    for _ in range(frames.d - 1):
        power = power @ aplus
    checks.append(("nilpotency", float(np.linalg.norm(power, axis=(1, 2)).max()), 1e-9))
    return checks


def _verify_jacobi(spec, cfg):
    checks = []
    reduced = jac.block_reduce(spec)
    rng = np.random.default_rng(7)
    # Scalar banded matvec against the block-reshaped convolution.
    span = 8
    v = {i: complex(*rng.standard_normal(2)) for i in range(span)}
    scalar = {}
    for i in range(-spec.k - spec.d, span + spec.k + spec.d):
        acc = 0.0 + 0.0j
        for j in range(span):
            acc += spec.entry(i, j) * v[j]
        if acc != 0.0:
            scalar[i] = acc
    blocks = -(-span // spec.d)
    u = sym.BlockSequence(
        spec.d,
        {
            n: np.array([v.get(spec.d * n + r, 0.0) for r in range(spec.d)])
            for n in range(blocks)
        },
    )
    conv = sym.apply_convolution(reduced, u)
    fid = 0.0
    for n in conv.support():
        vec = conv.vector(n)
        for r in range(spec.d):
            fid = max(fid, abs(vec[r] - scalar.get(spec.d * n + r, 0.0)))
    checks.append(("reduction_fidelity", fid, 1e-14))

    if spec.k == 1:
        a, b, c = jac.tridiagonal_data(spec)
        cd = jac.char_data(a, b, c)
        det_err = 0.0
        for _ in range(50):
            z = np.exp(2j * np.pi * rng.random())
            lam = complex(*rng.standard_normal(2))
            lhs = np.linalg.det(sym.eval_symbol(reduced, z) - lam * np.eye(spec.d))
            rhs = (-1.0) ** spec.d * (
                np.polynomial.polynomial.polyval(lam, cd.q) - cd.b * z - cd.c / z
            )
            det_err = max(det_err, abs(lhs - rhs))
        checks.append(("determinant_identity", det_err, 1e-9))

        n_samples = min(cfg.grid, 512)
        cloud = jac.jacobi_spectrum(cd, n_samples, threads=cfg.threads)
        samples = sym.sample_symbol(reduced, n_samples)
        direct = np.linalg.eigvals(samples.values)
        checks.append(
            ("spectrum_consistency", _hausdorff(cloud.points, direct), 1e-6)
        )
        checks.append(
            (
                "classification_consistency",
                _classification_residual(cd.b, cd.c, cloud.w),
                1e-10,
            )
        )
    return checks


def _classification_residual(b, c, w):
    """Shape diagnostic of the sampled E against the declared class."""
    cls = jac.classify_spectrum(b, c)
    if cls is jac.SpectrumClass.FINITE_SET:
        return float(np.abs(w).max())
    if cls is jac.SpectrumClass.CIRCLE:
        return float(np.abs(np.abs(w) - (abs(b) + abs(c))).max())
    # Rotate the principal axes onto the coordinate axes:
    # u = w e^{-i(arg b + arg c)/2} = (|b|+|c|) cos(phi) + i (|b|-|c|) sin(phi).
    u = w * np.exp(-0.5j * (np.angle(b) + np.angle(c)))
    if cls is jac.SpectrumClass.SEGMENT:
        return float(np.abs(u.imag).max())
    ellipse = (u.real / (abs(b) + abs(c))) ** 2 + (u.imag / (abs(b) - abs(c))) ** 2
    return float(np.abs(ellipse - 1.0).max())


def cmd_verify(obj, cfg):
    if isinstance(obj, dict) and "entries" in obj:
        checks = _verify_jacobi(ser.jacobi_from_obj(obj), cfg)
    else:
        checks = _verify_coefficients(ser.coefficients_from_obj(obj), cfg)
    width = max(len(name) for name, _, _ in checks)
    failed = False
    for name, value, tol in checks:
        ok = value < tol
        failed = failed or not ok
        print(f"{'PASS' if ok else 'FAIL'}  {name:<{width}}  max={value:.3e}  tol={tol:.1e}")
    return EXIT_ANALYSIS if failed else EXIT_OK


class _Parser(argparse.ArgumentParser):
    # Usage problems are input errors: exit 1, not argparse's default 2.
    def error(self, message):
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _build_parser():
    parser = _Parser(
        prog="laurent-spectra",
        description="Schur-chain spectral resolution of block Laurent operators",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, needs_nu in (
        ("analyze", False),
        ("decompose", False),
        ("chain", True),
        ("jacobi", False),
        ("verify", False),
    ):
        p = sub.add_parser(name)
        p.add_argument("input", help="input JSON file")
        p.add_argument("--grid", type=int, default=256, metavar="N")
        p.add_argument("--quad", type=int, default=1024, metavar="N")
        p.add_argument("--range", default="-8:8", metavar="LO:HI")
        p.add_argument("--out", default=".", metavar="DIR")
        p.add_argument("--format", default="json", choices=("json", "csv"))
        if needs_nu:
            p.add_argument("--nu", default=None, metavar="K,T")
    return parser


def _error_obj(exc):
    obj = {"error": type(exc).__name__, "message": str(exc)}
    report = getattr(exc, "report", None)
    if report is not None:
        obj["monodromy"] = _monodromy_obj(report)
    return obj


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        threads = max(1, int(os.environ.get("LAURENT_SPECTRA_THREADS", "1")))
        cfg = RunConfig(
            grid=args.grid,
            quad=args.quad,
            coeff_range=_parse_range(args.range),
            out=Path(args.out),
            fmt=args.format,
            nu=_parse_nu(args.nu) if getattr(args, "nu", None) else None,
            threads=threads,
        )
        obj = ser.load_json(args.input)
        if args.command == "verify":
            return cmd_verify(obj, cfg)
        if args.command == "jacobi":
            return cmd_jacobi(ser.jacobi_from_obj(obj), cfg)
        coeffs = ser.coefficients_from_obj(obj)
        if args.command == "analyze":
            return cmd_analyze(coeffs, cfg)
        if args.command == "decompose":
            return cmd_decompose(coeffs, cfg)
        return cmd_chain(coeffs, cfg)
    except _ANALYSIS_ERRORS as exc:
        sys.stderr.write(ser.json_dumps(_error_obj(exc)))
        return EXIT_ANALYSIS
    except _INPUT_ERRORS as exc:
        sys.stderr.write(ser.json_dumps(_error_obj(exc)))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
