"""
SVG Plot Builder

Loads YAML-based SVG templates and injects chart geometry using Jinja2.
Provides:
- Strict template retrieval using the PlotTemplateKey Enum
- Line charts (polylines + axes) for sweep and light-shift curves
- YAML parsing at construction time
"""

import math
from pathlib import Path
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
import yaml
from jinja2 import Template, TemplateError

from scatterqubit.utils.constants import PLOT_TEMPLATE_PATH, PlotTemplateKey
from scatterqubit.utils.exceptions import OutputError
from scatterqubit.utils.logger import logger

WIDTH, HEIGHT = 720, 480
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 80, 150, 40, 50
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")
N_TICKS = 5

Series = Tuple[str, Sequence[float], Sequence[float]]


class SvgPlotBuilder:
    """
    Renders charts from Jinja2 templates kept in YAML, selected via Enum keys.
    """

    def __init__(self, template_path: Path = PLOT_TEMPLATE_PATH):
        self._raw_templates: Dict[str, str] = self._load_templates(template_path)

    def _load_templates(self, path: Path) -> Dict[str, str]:
        """
        Loads YAML plot templates from disk.

        Raises:
            OutputError: If the file is missing or not a mapping of strings.
        """
        if not path.exists():
            raise OutputError(f"Plot template file not found: {path}")
        try:
            with path.open("r", encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise OutputError(f"Failed to parse plot template YAML: {e}")
        if not isinstance(data, dict):
            raise OutputError("Plot template YAML must be a dictionary at the top level.")
        return data

    def render(self, key: PlotTemplateKey, variables: Dict[str, Any]) -> str:
        raw_template = self._raw_templates.get(key.value)
        if raw_template is None:
            raise OutputError(f"Plot template '{key.value}' not found.")
        try:
            return Template(raw_template).render(**variables)
        except TemplateError as e:
            raise OutputError(f"Error rendering plot template [{key.value}]: {e}")

    def line_chart(self, series: Sequence[Series], title: str, x_label: str, y_label: str) -> str:
        """Line chart of one or more (name, xs, ys) series; NaN values break the lines."""
        finite_x = [x for _, xs, ys in series for x, y in zip(xs, ys) if math.isfinite(x) and math.isfinite(y)]
        finite_y = [y for _, xs, ys in series for x, y in zip(xs, ys) if math.isfinite(x) and math.isfinite(y)]
        if not finite_x:
            raise OutputError("Nothing to plot: every value is NaN")
        x_lo, x_hi = _padded_range(finite_x)
        y_lo, y_hi = _padded_range(finite_y)

        left, right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
        top, bottom = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM

        def to_px(x: float, y: float) -> Tuple[float, float]:
            px = left + (x - x_lo) / (x_hi - x_lo) * (right - left)
            py = bottom - (y - y_lo) / (y_hi - y_lo) * (bottom - top)
            return px, py

        markup = []
        for index, (name, xs, ys) in enumerate(series):
            segments: List[str] = []
            current: List[str] = []
            for x, y in zip(xs, ys):
                if math.isfinite(x) and math.isfinite(y):
                    px, py = to_px(x, y)
                    current.append(f"{px:.2f},{py:.2f}")
                elif current:
                    segments.append(" ".join(current))
                    current = []
            if current:
                segments.append(" ".join(current))
            markup.append(self.render(PlotTemplateKey.SERIES, {
                "color": PALETTE[index % len(PALETTE)],
                "segments": segments,
                "name": name,
                "legend_x": right + 10,
                "legend_y": top + 16 * (index + 1),
            }))

        svg = self.render(PlotTemplateKey.LINE_CHART, {
            "width": WIDTH,
            "height": HEIGHT,
            "left": left,
            "right": right,
            "top": top,
            "bottom": bottom,
            "title": title,
            "x_label": x_label,
            "y_label": y_label,
            "x_ticks": [{"pos": round(to_px(v, y_lo)[0], 2), "label": f"{v:.3g}"}
                        for v in np.linspace(x_lo, x_hi, N_TICKS)],
            "y_ticks": [{"pos": round(to_px(x_lo, v)[1], 2), "label": f"{v:.3g}"}
                        for v in np.linspace(y_lo, y_hi, N_TICKS)],
            "series_markup": "\n".join(markup),
        })
        logger.debug(f"Rendered SVG chart '{title}' with {len(series)} series")
        return svg


def _padded_range(values: Sequence[float]) -> Tuple[float, float]:
    lo, hi = min(values), max(values)
    if lo == hi:
        pad = abs(lo) * 0.05 or 1.0
        return lo - pad, hi + pad
    return lo, hi
