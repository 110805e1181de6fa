"""Figure rendering from laurent-spectra CLI artifacts.

Reads only the documented JSON/CSV files (never library internals) and
writes a static image plus a small caption JSON with the numeric
diagnostics shown in the figure.  Inputs are never modified; rendering the
same artifacts twice produces identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

KINDS = ("curves", "jacobi", "decay", "split")

# Stable color cycle for curve indices 1, 2, ...
CURVE_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

_SAVE_OPTS = dict(dpi=150, metadata={"Software": "plotview"})


class ParseError(Exception):
    """Malformed artifact content."""


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: artifact directory, figure kind, output image path."""

    kind: str
    input_dir: Path
    output: Path
    nu: tuple | None = None
    labels: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParseError(f"unknown figure kind {self.kind!r}; pick from {KINDS}")
        object.__setattr__(self, "input_dir", Path(self.input_dir))
        object.__setattr__(self, "output", Path(self.output))


def _load_json(path):
    if not path.exists():
        raise FileNotFoundError(f"missing artifact {path}")
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc


def _load_csv(path, expected_header):
    if not path.exists():
        raise FileNotFoundError(f"missing artifact {path}")
    lines = path.read_text().strip().splitlines()
    if not lines or lines[0] != expected_header:
        raise ParseError(f"{path}: expected header {expected_header!r}")
    try:
        return np.array(
            [[float(x) for x in line.split(",")] for line in lines[1:]]
        ).reshape(-1, len(expected_header.split(",")))
    except ValueError as exc:
        raise ParseError(f"{path}: non-numeric row ({exc})") from exc


def _load_spectrum_points(path):
    obj = _load_json(path)
    if not isinstance(obj, list):
        raise ParseError(f"{path}: point cloud must be a JSON array")
    try:
        curve = np.array([int(p["curve"]) for p in obj])
        t = np.array([float(p["t"]) for p in obj])
        values = np.array([complex(p["re"], p["im"]) for p in obj])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{path}: points need curve/t/re/im ({exc})") from exc
    return curve, t, values


def _collinearity_residual(points):
    """Max orthogonal distance to the total-least-squares line."""
    if len(points) < 3:
        return 0.0
    xy = np.column_stack([points.real, points.imag])
    centered = xy - xy.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    normal = vt[-1]
    return float(np.abs(centered @ normal).max())


def _new_axes(title):
    fig, ax = plt.subplots(figsize=(6.0, 6.0))
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(True, alpha=0.3)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_title(title)
    return fig, ax


def _save(fig, spec, caption):
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(spec.output, **_SAVE_OPTS)
    plt.close(fig)
    caption_path = spec.output.with_suffix(spec.output.suffix + ".caption.json")
    caption_path.write_text(json.dumps(caption, indent=2, sort_keys=True) + "\n")
    return spec.output


def _render_curves(spec):
    curve, t, values = _load_spectrum_points(spec.input_dir / "spectrum.json")
    fig, ax = _new_axes("Spectral curves")
    caption_curves = []
    for k in sorted(set(curve.tolist())):
        mask = curve == k
        pts = values[mask][np.argsort(t[mask])]
        color = CURVE_COLORS[(k - 1) % len(CURVE_COLORS)]
        label = f"curve {k}" if spec.labels else None
        spread = np.abs(pts - pts.mean()).max() if len(pts) else 0.0
        if spread < 1e-9:
            # Degenerate (constant) curve: a single marked point.
            ax.plot(pts.real[:1], pts.imag[:1], "o", color=color, ms=9, label=label)
        else:
            closed = np.append(pts, pts[:1])
            ax.plot(closed.real, closed.imag, "-", color=color, lw=1.4, label=label)
        if len(pts):
            # Chain jump anchor: the curve's start point alpha_k at t = 0.
            ax.plot(pts.real[0], pts.imag[0], "k*", ms=10)
        caption_curves.append(
            {"curve": int(k), "points": int(mask.sum()), "spread": spread}
        )
    if spec.labels and caption_curves:
        ax.legend(loc="best")
    if len(values) == 0:
        ax.set_xlim(-1, 1)
        ax.set_ylim(-1, 1)
    caption = {"kind": "curves", "curves": caption_curves, "total_points": len(values)}
    return _save(fig, spec, caption)


def _render_jacobi(spec):
    e_rows = _load_csv(spec.input_dir / "E.csv", "t,re,im")
    s_rows = _load_csv(spec.input_dir / "spectrum.csv", "t,w_re,w_im,root,re,im")
    e_pts = e_rows[:, 1] + 1j * e_rows[:, 2] if len(e_rows) else np.array([])
    s_pts = s_rows[:, 4] + 1j * s_rows[:, 5] if len(s_rows) else np.array([])
    cls_path = spec.input_dir / "classification.json"
    classification = _load_json(cls_path).get("class") if cls_path.exists() else None
    title = "Jacobi spectrum"
    if classification:
        title += f" ({classification})"
    fig, ax = _new_axes(title)
    if len(e_pts):
        ax.plot(e_pts.real, e_pts.imag, ".", color="#999999", ms=3,
                label="E = {bz + c/z}" if spec.labels else None)
    if len(s_pts):
        ax.plot(s_pts.real, s_pts.imag, ".", color="#1f77b4", ms=3,
                label="Q^{-1}[E]" if spec.labels else None)
    if spec.labels and (len(e_pts) or len(s_pts)):
        ax.legend(loc="best")
    caption = {
        "kind": "jacobi",
        "classification": classification,
        "e_points": int(len(e_pts)),
        "spectrum_points": int(len(s_pts)),
        "collinearity_residual": _collinearity_residual(s_pts),
    }
    return _save(fig, spec, caption)


def _coefficient_norms(path):
    obj = _load_json(path)
    try:
        out = {}
        for key, mat in obj["coeffs"].items():
            block = np.array(
                [[complex(e[0], e[1]) for e in row] for row in mat]
            )
            out[int(key)] = float(np.linalg.norm(block))
        return out
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"{path}: not a coefficient artifact ({exc})") from exc


def _render_decay(spec):
    sources = [
        name for name in ("a0.json", "aplus.json", "p_nu.json")
        if (spec.input_dir / name).exists()
    ]
    if not sources:
        raise FileNotFoundError(
            f"no coefficient artifacts (a0/aplus/p_nu) in {spec.input_dir}"
        )
    fig, axes = plt.subplots(
        len(sources), 1, figsize=(6.0, 2.2 * len(sources)), squeeze=False
    )
    caption_parts = {}
    for ax, name in zip(axes[:, 0], sources):
        norms = _coefficient_norms(spec.input_dir / name)
        ns = sorted(norms)
        heights = [norms[n] for n in ns]
        ax.bar(ns, heights, color="#1f77b4", width=0.8)
        ax.set_yscale("log" if heights and max(heights) > 0 else "linear")
        ax.set_ylabel("|block|_F")
        ax.set_title(name, fontsize=9)
        caption_parts[name] = {str(n): norms[n] for n in ns}
    axes[-1, 0].set_xlabel("coefficient index n")
    fig.tight_layout()
    caption = {"kind": "decay", "norms": caption_parts}
    return _save(fig, spec, caption)


def _render_split(spec):
    if spec.nu is None:
        raise ParseError("split figures need a chain point nu = (k, t)")
    k0, t0 = spec.nu
    curve, t, values = _load_spectrum_points(spec.input_dir / "spectrum.json")
    before = (curve < k0) | ((curve == k0) & (t < t0))
    fig, ax = _new_axes(f"Spectrum split at nu = (curve {k0}, t = {t0:.4f})")
    pred, succ = values[before], values[~before]
    if len(pred):
        ax.plot(pred.real, pred.imag, ".", color="#1f77b4", ms=4,
                label="predecessors" if spec.labels else None)
    if len(succ):
        ax.plot(succ.real, succ.imag, ".", color="#d62728", ms=4,
                label="successors" if spec.labels else None)
    if spec.labels and len(values):
        ax.legend(loc="best")
    caption = {
        "kind": "split",
        "nu": {"k": k0, "t": t0},
        "predecessors": int(before.sum()),
        "successors": int(len(values) - before.sum()),
    }
    return _save(fig, spec, caption)


_RENDERERS = {
    "curves": _render_curves,
    "jacobi": _render_jacobi,
    "decay": _render_decay,
    "split": _render_split,
}


def render(spec):
    """Render the figure described by ``spec``; returns the image path.

    Raises FileNotFoundError when a referenced artifact is missing and
    ParseError when one does not parse.
    """
    return _RENDERERS[spec.kind](spec)
