"""Figure regeneration for benchmark CSV traces."""

from .render import (
    PALETTE,
    PLOTTABLE_METRICS,
    Curve,
    FigureSpec,
    RenderError,
    collect_curves,
    render,
    render_svg,
)

__version__ = "0.1.0"

__all__ = [
    "PALETTE",
    "PLOTTABLE_METRICS",
    "Curve",
    "FigureSpec",
    "RenderError",
    "collect_curves",
    "render",
    "render_svg",
    "__version__",
]
