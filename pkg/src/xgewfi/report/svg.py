"""Hand-written SVG charts: box plot, histogram overlay, grouped bars.

Coordinates are printed with two decimals so identical inputs always
produce identical bytes.
"""
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from ..errors import DataError, EmptyFeatureError, EmptySampleError
from ..outliers import compute_fences

ORIGINAL_COLOR = "#1f77b4"
GENERATED_COLOR = "#ff7f0e"
IMPORTANCE_COLOR = "#1f77b4"
KS_COLOR = "#ff7f0e"
WEIGHTED_COLOR = "#2ca02c"

N_BINS = 20
HIST_RANGE = 4.0


def _f(v):
    return f"{v:.2f}"


class Canvas:
    """Accumulates SVG elements for a plot area with a margin."""

    def __init__(self, width, height, margin=(50, 20, 40, 60)):
        self.width = width
        self.height = height
        self.top, self.right, self.bottom, self.left = margin
        self.parts = []

    @property
    def plot_w(self):
        return self.width - self.left - self.right

    @property
    def plot_h(self):
        return self.height - self.top - self.bottom

    def add(self, s):
        self.parts.append(s)

    def rect(self, x, y, w, h, fill, cls, extra=""):
        self.add(f'<rect class="{cls}" x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" '
                 f'height="{_f(h)}" fill="{fill}"{extra}/>')

    def line(self, x1, y1, x2, y2, cls, stroke="#000000", width=1):
        self.add(f'<line class="{cls}" x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" '
                 f'y2="{_f(y2)}" stroke="{stroke}" stroke-width="{width}"/>')

    def text(self, x, y, s, anchor="middle", size=12, cls="label", rotate=None):
        tr = f' transform="rotate({rotate} {_f(x)} {_f(y)})"' if rotate is not None else ""
        self.add(f'<text class="{cls}" x="{_f(x)}" y="{_f(y)}" font-size="{size}" '
                 f'text-anchor="{anchor}"{tr}>{escape(str(s))}</text>')

    def render(self, title=None):
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
                f'width="{self.width}" height="{self.height}" '
                f'viewBox="0 0 {self.width} {self.height}">')
        body = [head, f'<rect width="{self.width}" height="{self.height}" fill="#ffffff"/>']
        if title:
            body.append(f'<text class="title" x="{_f(self.width / 2)}" y="24" font-size="16" '
                        f'text-anchor="middle">{escape(title)}</text>')
        body.extend(self.parts)
        body.append("</svg>")
        return "\n".join(body) + "\n"


def _axis(canvas, lo, hi, ticks=5, label=None):
    """Left y axis from ``lo`` to ``hi``; returns the value -> pixel map."""
    span = hi - lo if hi > lo else 1.0

    def to_y(v):
        return canvas.top + canvas.plot_h * (1.0 - (v - lo) / span)

    x0 = canvas.left
    canvas.line(x0, canvas.top, x0, canvas.top + canvas.plot_h, "axis")
    canvas.line(x0, canvas.top + canvas.plot_h, x0 + canvas.plot_w,
                canvas.top + canvas.plot_h, "axis")
    for i in range(ticks + 1):
        v = lo + span * i / ticks
        y = to_y(v)
        canvas.line(x0 - 4, y, x0, y, "tick")
        canvas.text(x0 - 6, y + 4, f"{v:.3g}", anchor="end", size=10, cls="tick-label")
    if label:
        canvas.text(14, canvas.top + canvas.plot_h / 2, label, rotate=-90, cls="axis-label")
    return to_y


def _write(path, text):
    Path(path).write_text(text, encoding="utf-8")


@dataclass(frozen=True)
class BoxStats:
    feature: str
    fences: object
    whisker_low: float
    whisker_high: float
    outliers: np.ndarray


def box_stats(ds):
    out = []
    for f in range(ds.n_features):
        v = ds.observed(f)
        if v.size == 0:
            raise EmptyFeatureError(ds.feature_names[f], "box plot")
        fences = compute_fences(v)
        out_mask = fences.outside(v)
        inside = v[~out_mask]
        # whiskers stop at the most extreme points still within the fences
        out.append(BoxStats(
            ds.feature_names[f],
            fences,
            float(inside.min()),
            float(inside.max()),
            np.sort(v[out_mask]),
        ))
    return out


def boxplot_svg(ds, path):
    """One box per feature on a shared axis; returns the per-feature stats."""
    stats = box_stats(ds)
    c = Canvas(max(320, 100 * len(stats) + 80), 420)
    lo = min(min(s.whisker_low, s.outliers.min() if s.outliers.size else s.whisker_low)
             for s in stats)
    hi = max(max(s.whisker_high, s.outliers.max() if s.outliers.size else s.whisker_high)
             for s in stats)
    to_y = _axis(c, lo, hi, label="value")
    slot = c.plot_w / len(stats)
    for i, s in enumerate(stats):
        cx = c.left + slot * (i + 0.5)
        half = min(30.0, slot * 0.3)
        fe = s.fences
        c.add(f'<g class="box" data-feature="{i}">')
        c.line(cx, to_y(s.whisker_low), cx, to_y(fe.q1), "whisker")
        c.line(cx, to_y(fe.q3), cx, to_y(s.whisker_high), "whisker")
        c.line(cx - half / 2, to_y(s.whisker_low), cx + half / 2, to_y(s.whisker_low), "whisker-cap")
        c.line(cx - half / 2, to_y(s.whisker_high), cx + half / 2, to_y(s.whisker_high), "whisker-cap")
        c.rect(cx - half, to_y(fe.q3), 2 * half, to_y(fe.q1) - to_y(fe.q3), "#9ecae1", "iqr-box",
               ' stroke="#000000"')
        c.line(cx - half, to_y(fe.median), cx + half, to_y(fe.median), "median",
               stroke="#d62728", width=2)
        for v in s.outliers:
            c.add(f'<circle class="outlier" cx="{_f(cx)}" cy="{_f(to_y(v))}" r="2.5" '
                  f'fill="none" stroke="#000000"/>')
        c.add("</g>")
        c.text(cx, c.top + c.plot_h + 18, s.feature)
    _write(path, c.render("Box plot of the features"))
    return stats


@dataclass(frozen=True)
class HistogramSpec:
    feature_index: int
    bin_edges: np.ndarray
    original_counts: np.ndarray
    generated_counts: np.ndarray


def histogram_counts(original, generated, feature_index=0):
    """Counts in standard-deviation units of ``original``.

    Inner bins are half-open ``[a, b)``; the two outer bins catch
    everything below ``-4`` and at or above ``+4``.
    """
    original = np.asarray(original, dtype=np.float64)
    generated = np.asarray(generated, dtype=np.float64)
    if original.size == 0 or generated.size == 0:
        raise EmptySampleError("histogram needs two non-empty samples")
    mu = original.mean()
    sd = original.std()
    if not sd > 0:
        raise DataError("original sample has zero variance")
    inner = np.linspace(-HIST_RANGE, HIST_RANGE, N_BINS + 1)
    edges = np.concatenate([[-np.inf], inner, [np.inf]])

    def count(x):
        z = (x - mu) / sd
        return np.bincount(np.searchsorted(inner, z, side="right"),
                           minlength=N_BINS + 2).astype(np.int64)

    return HistogramSpec(int(feature_index), edges, count(original), count(generated))


def histogram_svg(original, generated, feature_index, path, name=None):
    spec = histogram_counts(original, generated, feature_index)
    po = spec.original_counts / spec.original_counts.sum()
    pg = spec.generated_counts / spec.generated_counts.sum()
    c = Canvas(640, 400)
    top = max(po.max(), pg.max())
    to_y = _axis(c, 0.0, top, label="relative frequency")
    nb = po.size
    w = c.plot_w / nb
    for series, probs, color in (("original", po, ORIGINAL_COLOR),
                                 ("generated", pg, GENERATED_COLOR)):
        for i, p in enumerate(probs):
            y = to_y(p)
            c.rect(c.left + i * w + 1, y, w - 2, c.top + c.plot_h - y, color, series,
                   f' fill-opacity="0.55" data-bin="{i}"')
    for i in range(1, nb, 2):
        c.text(c.left + i * w, c.top + c.plot_h + 14, f"{spec.bin_edges[i]:g}", size=9,
               cls="tick-label")
    c.text(c.left + c.plot_w / 2, c.height - 6, "standard deviation of the feature", cls="axis-label")
    _legend(c, [("original", ORIGINAL_COLOR), ("generated", GENERATED_COLOR)])
    label = name if name is not None else f"feature {feature_index}"
    _write(path, c.render(f"Distribution of {label}"))
    return spec


def _legend(c, items):
    x = c.left + c.plot_w - 130
    y = c.top + 6
    for i, (label, color) in enumerate(items):
        c.rect(x, y + 16 * i, 10, 10, color, "legend-key")
        c.text(x + 16, y + 16 * i + 9, label, anchor="start", size=11, cls="legend")


def combined_chart_svg(scores, path, names=None):
    """Grouped bars per feature: importance, KS error, weighted error."""
    if not scores:
        raise DataError("no scores to plot")
    c = Canvas(max(400, 110 * len(scores) + 100), 420)
    top = max(max(s.importance, s.ks_error, s.weighted_error) for s in scores)
    top = np.ceil(top * 10) / 10 if top > 0 else 1.0
    to_y = _axis(c, 0.0, top, label="value (raw units)")
    slot = c.plot_w / len(scores)
    bw = slot * 0.25
    base = c.top + c.plot_h
    for i, s in enumerate(scores):
        x0 = c.left + slot * i + slot * 0.125
        for j, (cls, v, color) in enumerate((("importance", s.importance, IMPORTANCE_COLOR),
                                             ("ks-error", s.ks_error, KS_COLOR),
                                             ("weighted", s.weighted_error, WEIGHTED_COLOR))):
            y = to_y(v)
            c.rect(x0 + j * bw, y, bw, base - y, color, cls,
                   f' data-feature="{s.feature_index}"')
        label = names[s.feature_index] if names else f"feature {s.feature_index}"
        c.text(c.left + slot * (i + 0.5), base + 18, label)
    _legend(c, [("importance", IMPORTANCE_COLOR), ("KS error", KS_COLOR),
                ("weighted error", WEIGHTED_COLOR)])
    _write(path, c.render("Importance, KS error and weighted error"))
