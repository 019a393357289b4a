"""Render benchmark CSV traces into convergence figures.

This tool is deliberately decoupled from the solver package: its only
contract is the benchmark output directory layout — a ``summary.csv`` whose
rows carry ``algorithm``, ``outcome`` and ``trace_file`` columns, next to
trace CSVs with the header::

    iter,elapsed_s,f_val,rel_subopt,grad_err,stationarity,eta,branch

Figures are emitted as hand-written SVG so that byte-identical inputs give
byte-identical outputs (diffable artifacts, no library version drift). PNG
output delegates to matplotlib when requested.
"""

from __future__ import annotations

import csv
import dataclasses
import math
import sys
from pathlib import Path

PLOTTABLE_METRICS = ("rel_subopt", "grad_err", "f_val", "stationarity", "eta")
X_AXES = ("elapsed_s", "iter")

# stable per-algorithm colors; unknown names draw from the fallback cycle
PALETTE = {
    "psga": "#4c72b0",
    "pstorm": "#dd8452",
    "spstorm": "#55a868",
    "proxsvrg": "#c44e52",
    "saga": "#8172b3",
    "rda": "#937860",
}
FALLBACK_COLORS = ("#da8bc3", "#8c8c8c", "#ccb974", "#64b5cd", "#4c4c4c")

WIDTH, HEIGHT = 860, 540
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 86, 180, 48, 60


class RenderError(ValueError):
    """Unusable input directory, file, or figure request."""


@dataclasses.dataclass
class FigureSpec:
    """One figure request: which directory, which metric, where to save."""

    input_dir: str | Path
    metric: str = "rel_subopt"
    save: str | Path = "figure.svg"
    dataset: str | None = None     # filter summary rows by dataset name
    log_y: bool = True
    x_axis: str = "elapsed_s"

    def __post_init__(self):
        if self.metric not in PLOTTABLE_METRICS:
            raise RenderError(
                f"metric {self.metric!r} is not plottable; choose from {PLOTTABLE_METRICS}"
            )
        if self.x_axis not in X_AXES:
            raise RenderError(f"x_axis {self.x_axis!r} must be one of {X_AXES}")


@dataclasses.dataclass
class Curve:
    algorithm: str
    label: str
    xs: list[float]
    ys: list[float]


def read_summary(input_dir: Path) -> list[dict]:
    """Rows of summary.csv; RenderError when the directory has no usable one."""
    path = input_dir / "summary.csv"
    if not input_dir.is_dir():
        raise RenderError(f"input directory not found: {input_dir}")
    if not path.exists():
        raise RenderError(
            f"no summary.csv in {input_dir}; not a benchmark output directory"
        )
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise RenderError(f"{path} lists no runs")
    return rows


def load_trace_columns(path: Path, columns: tuple[str, ...]) -> dict[str, list[float]]:
    """Read the named numeric columns; RenderError names the file on problems."""
    if not path.exists():
        raise RenderError(f"trace file missing: {path}")
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in columns:
            if col not in header:
                raise RenderError(f"column {col!r} missing from {path}")
        out: dict[str, list[float]] = {c: [] for c in columns}
        for row in reader:
            for c in columns:
                out[c].append(float(row[c]))
    return out


def collect_curves(spec: FigureSpec) -> list[Curve]:
    """One curve per summary run, in file order; unplottable runs are noted."""
    input_dir = Path(spec.input_dir)
    curves: list[Curve] = []
    for row in read_summary(input_dir):
        algo = row.get("algorithm", "?")
        if spec.dataset and row.get("dataset") != spec.dataset:
            continue
        trace = input_dir / row["trace_file"]
        cols = load_trace_columns(trace, (spec.x_axis, spec.metric))
        xs, ys, dropped = [], [], 0
        for x, y in zip(cols[spec.x_axis], cols[spec.metric]):
            if math.isnan(x) or math.isnan(y) or (spec.log_y and y <= 0.0):
                dropped += 1
                continue
            xs.append(x)
            ys.append(y)
        if dropped:
            reason = "nonpositive/nan" if spec.log_y else "nan"
            print(
                f"note: dropped {dropped} {reason} {spec.metric} point(s) from "
                f"{trace.name} for the {'log' if spec.log_y else 'linear'} plot",
                file=sys.stderr,
            )
        if not xs:
            print(f"note: {trace.name} has no plottable points; skipped",
                  file=sys.stderr)
            continue
        curves.append(Curve(algorithm=algo, label=algo, xs=xs, ys=ys))
    if not curves:
        raise RenderError(
            f"nothing to plot for metric {spec.metric!r} in {input_dir}"
        )
    return curves


def color_for(algorithm: str, fallback_index: int) -> str:
    if algorithm in PALETTE:
        return PALETTE[algorithm]
    return FALLBACK_COLORS[fallback_index % len(FALLBACK_COLORS)]


# ---------------------------------------------------------------------------
# SVG geometry

def _nice_linear_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / max(target - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * mag
        if raw <= step:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks or [lo]


def _decade_ticks(lo: float, hi: float) -> list[int]:
    d0 = math.floor(math.log10(lo))
    d1 = math.ceil(math.log10(hi))
    decades = list(range(d0, d1 + 1))
    stride = 1
    while len(decades[::stride]) > 9:
        stride += 1
    return decades[::stride]


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _fmt_tick(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.0e}".replace("e-0", "e-").replace("e+0", "e").replace("e+", "e")
    return f"{v:g}"


def render_svg(spec: FigureSpec, curves: list[Curve]) -> str:
    """Deterministic SVG text for the given curves."""
    x_lo = min(min(c.xs) for c in curves)
    x_hi = max(max(c.xs) for c in curves)
    y_lo = min(min(c.ys) for c in curves)
    y_hi = max(max(c.ys) for c in curves)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if spec.log_y:
        ly_lo, ly_hi = math.log10(y_lo), math.log10(y_hi)
        if ly_hi - ly_lo < 1e-9:
            ly_lo, ly_hi = ly_lo - 0.5, ly_hi + 0.5
    else:
        if y_hi == y_lo:
            y_hi = y_lo + 1.0

    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def sx(x: float) -> float:
        return MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y: float) -> float:
        if spec.log_y:
            frac = (math.log10(y) - ly_lo) / (ly_hi - ly_lo)
        else:
            frac = (y - y_lo) / (y_hi - y_lo)
        return MARGIN_T + (1.0 - frac) * plot_h

    parts: list[str] = []
    yscale = "log" if spec.log_y else "linear"
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" data-yscale="{yscale}" '
        f'data-metric="{spec.metric}" font-family="Liberation Sans, sans-serif">'
    )
    parts.append(f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>')
    title = f"{spec.metric} vs {spec.x_axis}"
    if spec.dataset:
        title += f" on {spec.dataset}"
    parts.append(
        f'<text x="{WIDTH / 2:.0f}" y="28" text-anchor="middle" font-size="17" '
        f'fill="#222">{title}</text>'
    )

    # gridlines and ticks
    if spec.log_y:
        for d in _decade_ticks(y_lo, y_hi):
            yv = 10.0 ** d
            if not (y_lo <= yv <= y_hi):
                continue
            py = sy(yv)
            parts.append(
                f'<line x1="{MARGIN_L}" y1="{_fmt(py)}" x2="{WIDTH - MARGIN_R}" '
                f'y2="{_fmt(py)}" stroke="#dddddd" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{MARGIN_L - 8}" y="{_fmt(py + 4)}" text-anchor="end" '
                f'font-size="12" fill="#444">1e{d}</text>'
            )
    else:
        for yv in _nice_linear_ticks(y_lo, y_hi):
            py = sy(min(max(yv, y_lo), y_hi))
            parts.append(
                f'<line x1="{MARGIN_L}" y1="{_fmt(py)}" x2="{WIDTH - MARGIN_R}" '
                f'y2="{_fmt(py)}" stroke="#dddddd" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{MARGIN_L - 8}" y="{_fmt(py + 4)}" text-anchor="end" '
                f'font-size="12" fill="#444">{_fmt_tick(yv)}</text>'
            )
    for xv in _nice_linear_ticks(x_lo, x_hi):
        px = sx(min(max(xv, x_lo), x_hi))
        parts.append(
            f'<line x1="{_fmt(px)}" y1="{MARGIN_T}" x2="{_fmt(px)}" '
            f'y2="{HEIGHT - MARGIN_B}" stroke="#eeeeee" stroke-width="1"/>'
        )
        parts.append(
            f'<text x="{_fmt(px)}" y="{HEIGHT - MARGIN_B + 20}" text-anchor="middle" '
            f'font-size="12" fill="#444">{_fmt_tick(xv)}</text>'
        )

    # axes frame
    parts.append(
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="#333333" stroke-width="1"/>'
    )
    parts.append(
        f'<text x="{MARGIN_L + plot_w / 2:.0f}" y="{HEIGHT - 14}" text-anchor="middle" '
        f'font-size="14" fill="#222">{spec.x_axis}</text>'
    )
    parts.append(
        f'<text x="22" y="{MARGIN_T + plot_h / 2:.0f}" text-anchor="middle" '
        f'font-size="14" fill="#222" '
        f'transform="rotate(-90 22 {MARGIN_T + plot_h / 2:.0f})">{spec.metric}</text>'
    )

    # curves
    fallback_used = 0
    colors: dict[str, str] = {}
    for curve in curves:
        if curve.algorithm not in colors:
            colors[curve.algorithm] = color_for(curve.algorithm, fallback_used)
            if curve.algorithm not in PALETTE:
                fallback_used += 1
        pts = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in zip(curve.xs, curve.ys))
        parts.append(
            f'<polyline class="curve" data-algo="{curve.algorithm}" fill="none" '
            f'stroke="{colors[curve.algorithm]}" stroke-width="1.8" points="{pts}"/>'
        )

    # legend: one entry per distinct algorithm, in first-appearance order
    seen: list[str] = []
    for curve in curves:
        if curve.algorithm not in seen:
            seen.append(curve.algorithm)
    lx = WIDTH - MARGIN_R + 16
    for i, algo in enumerate(seen):
        ly = MARGIN_T + 12 + i * 24
        parts.append(
            f'<rect x="{lx}" y="{ly - 10}" width="18" height="4" '
            f'fill="{colors[algo]}"/>'
        )
        parts.append(
            f'<text class="legend-label" x="{lx + 26}" y="{ly - 4}" font-size="13" '
            f'fill="#222">{algo}</text>'
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _render_png(spec: FigureSpec, curves: list[Curve], save: Path):
    try:
        import matplotlib
    except ImportError:
        raise RenderError(
            "PNG output needs matplotlib (pip install 'proxsgd-plots[png]')"
        ) from None
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8.6, 5.4), dpi=100)
    for curve in curves:
        ax.plot(curve.xs, curve.ys, label=curve.label, linewidth=1.6)
    if spec.log_y:
        ax.set_yscale("log")
    ax.set_xlabel(spec.x_axis)
    ax.set_ylabel(spec.metric)
    title = f"{spec.metric} vs {spec.x_axis}"
    if spec.dataset:
        title += f" on {spec.dataset}"
    ax.set_title(title)
    ax.legend(loc="center left", bbox_to_anchor=(1.01, 0.5))
    fig.tight_layout()
    fig.savefig(save)
    plt.close(fig)


def render(spec: FigureSpec) -> Path:
    """Produce the requested figure file and return its path."""
    curves = collect_curves(spec)
    save = Path(spec.save)
    if save.parent and not save.parent.exists():
        save.parent.mkdir(parents=True, exist_ok=True)
    if save.suffix.lower() == ".png":
        _render_png(spec, curves, save)
    else:
        save.write_text(render_svg(spec, curves))
    return save
