"""Minimal standalone SVG line plots and histograms."""
from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

_COLOURS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")
W, H = 640, 400
L, R, T, B = 70, 20, 40, 50


def _scale(lo, hi):
    if not np.isfinite(lo) or not np.isfinite(hi):
        lo, hi = 0.0, 1.0
    if hi - lo < 1e-12 * max(1.0, abs(lo)):
        lo, hi = lo - 0.5, hi + 0.5
    pad = 0.04 * (hi - lo)
    return lo - pad, hi + pad


def _ticks(lo, hi, n=5):
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


class _Canvas:
    def __init__(self, xr, yr, title, xlabel, ylabel):
        self.xr, self.yr = _scale(*xr), _scale(*yr)
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" '
            f'font-family="sans-serif" font-size="12">',
            f'<rect width="{W}" height="{H}" fill="white"/>',
            f'<text x="{W / 2}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
            f'<text x="{W / 2}" y="{H - 10}" text-anchor="middle">{escape(xlabel)}</text>',
            f'<text x="16" y="{H / 2}" text-anchor="middle" transform="rotate(-90 16 {H / 2})">{escape(ylabel)}</text>',
            f'<rect x="{L}" y="{T}" width="{W - L - R}" height="{H - T - B}" fill="none" stroke="black"/>',
        ]
        for v in _ticks(*self.xr):
            x = self.px(v)
            self.parts.append(f'<text x="{x:.1f}" y="{H - B + 16}" text-anchor="middle">{v:.3g}</text>')
        for v in _ticks(*self.yr):
            y = self.py(v)
            self.parts.append(f'<text x="{L - 6}" y="{y + 4:.1f}" text-anchor="end">{v:.3g}</text>')
            self.parts.append(f'<line x1="{L}" x2="{W - R}" y1="{y:.1f}" y2="{y:.1f}" stroke="#ddd"/>')

    def px(self, v):
        return L + (v - self.xr[0]) / (self.xr[1] - self.xr[0]) * (W - L - R)

    def py(self, v):
        return H - B - (v - self.yr[0]) / (self.yr[1] - self.yr[0]) * (H - T - B)

    def save(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text("\n".join(self.parts + ["</svg>"]) + "\n")
        return path


def line_plot(path, series, title="", xlabel="", ylabel="", max_points=2000):
    """``series`` is a list of ``(x, y, label)``; long series are thinned evenly."""
    xs = np.concatenate([np.asarray(s[0], float) for s in series])
    ys = np.concatenate([np.asarray(s[1], float) for s in series])
    ok = np.isfinite(xs) & np.isfinite(ys)
    c = _Canvas((xs[ok].min(), xs[ok].max()), (ys[ok].min(), ys[ok].max()), title, xlabel, ylabel)
    for k, (x, y, label) in enumerate(series):
        x, y = np.asarray(x, float), np.asarray(y, float)
        step = max(1, x.size // max_points)
        pts = " ".join(f"{c.px(a):.1f},{c.py(b):.1f}" for a, b in zip(x[::step], y[::step]) if np.isfinite(a) and np.isfinite(b))
        col = _COLOURS[k % len(_COLOURS)]
        c.parts.append(f'<polyline points="{pts}" fill="none" stroke="{col}" stroke-width="1.2"/>')
        c.parts.append(f'<text x="{W - R - 8}" y="{T + 16 + 14 * k}" text-anchor="end" fill="{col}">{escape(label)}</text>')
    return c.save(path)


def histogram(path, values, bins=40, title="", xlabel="", ylabel="count"):
    v = np.asarray(values, float)
    v = v[np.isfinite(v)]
    counts, edges = np.histogram(v, bins=bins)
    c = _Canvas((edges[0], edges[-1]), (0, max(1, counts.max())), title, xlabel, ylabel)
    for n, a, b in zip(counts, edges[:-1], edges[1:]):
        x0, x1, y = c.px(a), c.px(b), c.py(n)
        c.parts.append(f'<rect x="{x0:.1f}" y="{y:.1f}" width="{max(x1 - x0 - 1, 0.5):.1f}" '
                       f'height="{c.py(0) - y:.1f}" fill="#1f77b4"/>')
    return c.save(path)
