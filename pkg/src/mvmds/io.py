"""File ingestion and export: CSV matrices, JSON manifests and reports,
Procrustes alignment, and deterministic SVG scatter/line plots.

CSV files are UTF-8 with comma delimiters and an optional header row.
Report JSON round-trips losslessly (floats are written with full
precision).  SVG output is byte-deterministic for identical input.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    Configuration,
    MultiViewProblem,
    SolverConfig,
    ViewWeights,
    validate_view,
)
from .errors import (
    DimensionMismatchError,
    LengthMismatchError,
    NonSquareError,
    ParseError,
    WrongDimensionError,
)
from .solver import IterationRecord, SolveReport


def _is_number(token: str) -> bool:
    try:
        float(token)
        return True
    except ValueError:
        return False


def read_matrix_csv(path) -> np.ndarray:
    """Parse a square numeric matrix from CSV.

    A single header row is skipped when its first token is not numeric.
    Raises ParseError with 1-based line/column on bad tokens or ragged
    rows, NonSquareError when rows != columns.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    rows = []
    start = 0
    if not any(ln.strip() for ln in lines):
        raise ParseError(1, 1, "empty file")
    first_tokens = lines[0].split(",")
    if first_tokens and not _is_number(first_tokens[0].strip()):
        start = 1
    for lineno, line in enumerate(lines[start:], start=start + 1):
        if not line.strip():
            continue
        values = []
        for colno, token in enumerate(line.split(","), start=1):
            token = token.strip()
            if not _is_number(token):
                raise ParseError(lineno, colno, f"not a number: {token!r}")
            values.append(float(token))
        rows.append((lineno, values))
    if not rows:
        raise ParseError(start + 1, 1, "no data rows")
    width = len(rows[0][1])
    for lineno, values in rows:
        if len(values) != width:
            raise ParseError(
                lineno, len(values) + 1, f"expected {width} values, got {len(values)}"
            )
    matrix = np.array([values for _, values in rows])
    if matrix.shape[0] != matrix.shape[1]:
        raise NonSquareError(
            f"{matrix.shape[0]} rows and {matrix.shape[1]} columns"
        )
    return matrix


def write_matrix_csv(matrix, path) -> None:
    """Write a matrix as CSV at full precision (read_matrix_csv inverse)."""
    m = np.asarray(matrix, dtype=float)
    with open(path, "w", encoding="utf-8") as fh:
        for row in m:
            fh.write(",".join(repr(float(v)) for v in row))
            fh.write("\n")


@dataclass(frozen=True)
class ProblemManifest:
    """Paths and solver settings describing one multi-view problem."""

    view_paths: tuple
    mask_paths: Optional[tuple] = None
    labels_path: Optional[str] = None
    solver: Optional[dict] = None


def read_manifest(path) -> ProblemManifest:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    views = tuple(raw.get("view_paths", ()))
    if len(views) < 1:
        raise LengthMismatchError("manifest needs at least one view path")
    masks = raw.get("mask_paths")
    if masks is not None:
        masks = tuple(masks)
        if len(masks) != len(views):
            raise LengthMismatchError(
                f"{len(masks)} mask paths for {len(views)} views"
            )
    return ProblemManifest(
        view_paths=views,
        mask_paths=masks,
        labels_path=raw.get("labels_path"),
        solver=raw.get("solver"),
    )


def read_labels(path) -> np.ndarray:
    """One integer class id per line."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh.read().splitlines()]
    labels = []
    for lineno, ln in enumerate(lines, start=1):
        if not ln:
            continue
        try:
            labels.append(int(ln))
        except ValueError:
            raise ParseError(lineno, 1, f"not an integer label: {ln!r}") from None
    return np.array(labels, dtype=int)


def load_problem(manifest: ProblemManifest, base_dir="."):
    """Read the referenced CSVs into a problem plus optional labels.

    Relative paths resolve against base_dir (normally the manifest's
    directory).  Returns (problem, labels-or-None).
    """

    def _resolve(p):
        return p if os.path.isabs(p) else os.path.join(base_dir, p)

    views = []
    for i, vp in enumerate(manifest.view_paths):
        raw = read_matrix_csv(_resolve(vp))
        mask = None
        if manifest.mask_paths is not None:
            mask = read_matrix_csv(_resolve(manifest.mask_paths[i]))
        views.append(validate_view(raw, mask=mask))
    problem = MultiViewProblem(tuple(views))
    labels = None
    if manifest.labels_path is not None:
        labels = read_labels(_resolve(manifest.labels_path))
        if labels.size != problem.n:
            raise LengthMismatchError(
                f"{labels.size} labels for {problem.n} objects"
            )
    return problem, labels


def solver_config_from_manifest(manifest: ProblemManifest, **overrides) -> SolverConfig:
    """SolverConfig from manifest defaults, overridden by non-None kwargs."""
    fields = {
        "p": 2,
        "gamma": 5.0,
        "tol": 1e-6,
        "max_iter": 500,
        "init": "classical",
        "seed": 0,
    }
    if manifest.solver:
        for key in fields:
            if key in manifest.solver:
                fields[key] = manifest.solver[key]
    for key, value in overrides.items():
        if value is not None:
            fields[key] = value
    return SolverConfig(**fields)


def write_report_json(report: SolveReport, path) -> None:
    """Serialize a solve report; read_report_json restores it losslessly."""
    payload = {
        "embedding": report.config_out.x.tolist(),
        "weights": report.weights_out.alpha.tolist(),
        "trace": [
            {
                "iter": rec.iteration,
                "objective": rec.objective_value,
                "alpha": rec.alpha.alpha.tolist(),
                "per_view_stress": np.asarray(rec.per_view_stress).tolist(),
            }
            for rec in report.trace
        ],
        "converged": bool(report.converged),
        "iterations": int(report.iterations_used),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def read_report_json(path) -> SolveReport:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    trace = tuple(
        IterationRecord(
            iteration=int(rec["iter"]),
            objective_value=float(rec["objective"]),
            alpha=ViewWeights(np.array(rec["alpha"], dtype=float)),
            per_view_stress=np.array(rec["per_view_stress"], dtype=float),
        )
        for rec in payload["trace"]
    )
    return SolveReport(
        config_out=Configuration(np.array(payload["embedding"], dtype=float)),
        weights_out=ViewWeights(np.array(payload["weights"], dtype=float)),
        trace=trace,
        converged=bool(payload["converged"]),
        iterations_used=int(payload["iterations"]),
    )


def procrustes_align(source: Configuration, target: Configuration) -> Configuration:
    """Rigidly register source onto target (rotation/reflection plus
    translation, no scaling) by SVD of the centered cross-covariance."""
    if source.x.shape != target.x.shape:
        raise DimensionMismatchError(
            f"source shape {source.x.shape} != target shape {target.x.shape}"
        )
    cs = source.x.mean(axis=0)
    ct = target.x.mean(axis=0)
    a = source.x - cs
    b = target.x - ct
    u, _, vt = np.linalg.svd(a.T @ b)
    q = u @ vt
    return Configuration(a @ q + ct)


# ---------------------------------------------------------------------------
# SVG output


_SVG_W = 640
_SVG_H = 480
_SVG_PAD = 48


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _map_points(all_xy, width=_SVG_W, height=_SVG_H, pad=_SVG_PAD):
    """Uniform-scale data->pixel mapping with a 5% data margin, y flipped."""
    xs = all_xy[:, 0]
    ys = all_xy[:, 1]
    xmin, xmax = float(xs.min()), float(xs.max())
    ymin, ymax = float(ys.min()), float(ys.max())
    xr = xmax - xmin or 1.0
    yr = ymax - ymin or 1.0
    xmin, xmax = xmin - 0.05 * xr, xmax + 0.05 * xr
    ymin, ymax = ymin - 0.05 * yr, ymax + 0.05 * yr
    scale = min((width - 2 * pad) / (xmax - xmin), (height - 2 * pad) / (ymax - ymin))

    def to_pixel(x, y):
        px = pad + (x - (xmin + xmax) / 2) * scale + (width - 2 * pad) / 2
        py = height - pad - ((y - (ymin + ymax) / 2) * scale + (height - 2 * pad) / 2)
        return px, py

    return to_pixel


def write_scatter_svg(series, path, point_labels=None) -> None:
    """Scatter plot of one or more 2-d configurations.

    series is a list of (Configuration, label, color).  Optional
    point_labels annotate the first series.  Output bytes depend only on
    the input.
    """
    if not series:
        raise ValueError("no series to plot")
    for config, _, _ in series:
        if config.p != 2:
            raise WrongDimensionError(
                f"scatter plots need 2-d configurations, got p={config.p}"
            )
    if point_labels is not None and len(point_labels) != series[0][0].n:
        raise LengthMismatchError(
            f"{len(point_labels)} labels for {series[0][0].n} points"
        )
    all_xy = np.vstack([config.x for config, _, _ in series])
    to_pixel = _map_points(all_xy)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_SVG_W}" height="{_SVG_H}" viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<rect class="frame" x="0.5" y="0.5" width="{_SVG_W - 1}" '
        f'height="{_SVG_H - 1}" fill="white" stroke="#cccccc"/>',
    ]
    for s, (config, label, color) in enumerate(series):
        for i in range(config.n):
            px, py = to_pixel(config.x[i, 0], config.x[i, 1])
            parts.append(
                f'<circle class="point series-{s}" cx="{_fmt(px)}" '
                f'cy="{_fmt(py)}" r="4" fill="{color}"/>'
            )
    if point_labels is not None:
        config = series[0][0]
        for i, name in enumerate(point_labels):
            px, py = to_pixel(config.x[i, 0], config.x[i, 1])
            parts.append(
                f'<text class="point-label" x="{_fmt(px + 6)}" '
                f'y="{_fmt(py - 6)}" font-size="12" '
                f'font-family="sans-serif">{name}</text>'
            )
    for s, (_, label, color) in enumerate(series):
        ly = 18 + 18 * s
        parts.append(
            f'<rect class="legend-swatch" x="{_SVG_W - 150}" y="{ly - 9}" '
            f'width="10" height="10" fill="{color}"/>'
        )
        parts.append(
            f'<text class="legend-label" x="{_SVG_W - 134}" y="{ly}" '
            f'font-size="12" font-family="sans-serif">{label}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts))
        fh.write("\n")


def write_line_svg(series, path, x_label="", y_label="") -> None:
    """Line plot: series is a list of (xs, ys, label, color)."""
    if not series:
        raise ValueError("no series to plot")
    pts = []
    for xs, ys, _, _ in series:
        if len(xs) != len(ys):
            raise LengthMismatchError(f"{len(xs)} x values for {len(ys)} y values")
        pts.extend(zip(xs, ys))
    all_xy = np.array(pts, dtype=float)
    xs = all_xy[:, 0]
    ys = all_xy[:, 1]
    xmin, xmax = float(xs.min()), float(xs.max())
    ymin, ymax = float(ys.min()), float(ys.max())
    xr = xmax - xmin or 1.0
    yr = ymax - ymin or 1.0

    def to_pixel(x, y):
        px = _SVG_PAD + (x - xmin) / xr * (_SVG_W - 2 * _SVG_PAD)
        py = _SVG_H - _SVG_PAD - (y - ymin) / yr * (_SVG_H - 2 * _SVG_PAD)
        return px, py

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_SVG_W}" height="{_SVG_H}" viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<rect class="frame" x="0.5" y="0.5" width="{_SVG_W - 1}" '
        f'height="{_SVG_H - 1}" fill="white" stroke="#cccccc"/>',
        f'<line x1="{_SVG_PAD}" y1="{_SVG_H - _SVG_PAD}" x2="{_SVG_W - _SVG_PAD}" '
        f'y2="{_SVG_H - _SVG_PAD}" stroke="#444444"/>',
        f'<line x1="{_SVG_PAD}" y1="{_SVG_PAD}" x2="{_SVG_PAD}" '
        f'y2="{_SVG_H - _SVG_PAD}" stroke="#444444"/>',
        f'<text class="tick" x="{_SVG_PAD}" y="{_SVG_H - _SVG_PAD + 16}" '
        f'font-size="11" font-family="sans-serif">{_fmt(xmin)}</text>',
        f'<text class="tick" x="{_SVG_W - _SVG_PAD - 30}" y="{_SVG_H - _SVG_PAD + 16}" '
        f'font-size="11" font-family="sans-serif">{_fmt(xmax)}</text>',
        f'<text class="tick" x="{_SVG_PAD - 44}" y="{_SVG_H - _SVG_PAD}" '
        f'font-size="11" font-family="sans-serif">{_fmt(ymin)}</text>',
        f'<text class="tick" x="{_SVG_PAD - 44}" y="{_SVG_PAD + 10}" '
        f'font-size="11" font-family="sans-serif">{_fmt(ymax)}</text>',
        f'<text class="axis-label" x="{_SVG_W // 2}" y="{_SVG_H - 10}" '
        f'font-size="12" font-family="sans-serif">{x_label}</text>',
        f'<text class="axis-label" x="10" y="{_SVG_PAD - 20}" '
        f'font-size="12" font-family="sans-serif">{y_label}</text>',
    ]
    for s, (sx, sy, label, color) in enumerate(series):
        coords = " ".join(
            f"{_fmt(px)},{_fmt(py)}" for px, py in (to_pixel(x, y) for x, y in zip(sx, sy))
        )
        parts.append(
            f'<polyline class="series-{s}" points="{coords}" fill="none" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        ly = 18 + 18 * s
        parts.append(
            f'<rect class="legend-swatch" x="{_SVG_W - 150}" y="{ly - 9}" '
            f'width="10" height="10" fill="{color}"/>'
        )
        parts.append(
            f'<text class="legend-label" x="{_SVG_W - 134}" y="{ly}" '
            f'font-size="12" font-family="sans-serif">{label}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts))
        fh.write("\n")
