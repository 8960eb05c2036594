"""Self-contained SVG convergence plots.

Hand-written rather than produced with matplotlib so that identical reports
give byte-identical files. Layout: log-scaled N on the x axis, the value
series and the horizontal target line on the left axis, and the error series
on a logarithmic right axis.
"""

from __future__ import annotations

import math

from .errors import DomainError

WIDTH, HEIGHT = 720, 440
LEFT, RIGHT, TOP, BOTTOM = 70, 80, 40, 60
ERR_FLOOR = 1e-17


def _f(x):
    return f"{x:.2f}"


def _nice_range(lo, hi):
    if hi - lo < 1e-12 * max(1.0, abs(hi), abs(lo)):
        pad = 0.5 if lo == 0 else 0.1 * abs(lo)
        return lo - pad, hi + pad
    pad = 0.08 * (hi - lo)
    return lo - pad, hi + pad


def render_svg(orders, values, target, errors, title="") -> str:
    if not orders:
        raise DomainError("cannot plot an empty report")
    pw = WIDTH - LEFT - RIGHT
    ph = HEIGHT - TOP - BOTTOM
    lx = [math.log10(n) for n in orders]
    x0, x1 = min(lx), max(lx)
    if x1 - x0 < 1e-12:
        x0, x1 = x0 - 0.5, x1 + 0.5
    y0, y1 = _nice_range(min(min(values), target), max(max(values), target))
    le = [math.log10(max(e, ERR_FLOOR)) for e in errors]
    e0, e1 = math.floor(min(le)), math.ceil(max(le))
    if e1 <= e0:
        e1 = e0 + 1

    def X(v):
        return LEFT + (v - x0) / (x1 - x0) * pw

    def Y(v):
        return TOP + (1.0 - (v - y0) / (y1 - y0)) * ph

    def YE(v):
        return TOP + (1.0 - (v - e0) / (e1 - e0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.2f}" y="22" text-anchor="middle">{_escape(title)}</text>')
    # x ticks at the orders themselves
    for n, v in zip(orders, lx):
        out.append(f'<line x1="{_f(X(v))}" y1="{TOP + ph}" x2="{_f(X(v))}" y2="{TOP + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{_f(X(v))}" y="{TOP + ph + 18}" text-anchor="middle">{n}</text>')
    out.append(f'<text x="{LEFT + pw / 2:.2f}" y="{HEIGHT - 15}" text-anchor="middle">N (log scale)</text>')
    for i in range(5):
        v = y0 + (y1 - y0) * i / 4
        out.append(f'<text x="{LEFT - 6}" y="{_f(Y(v) + 4)}" text-anchor="end">{v:.4g}</text>')
    for k in range(e0, e1 + 1):
        out.append(f'<text x="{LEFT + pw + 6}" y="{_f(YE(k) + 4)}" fill="firebrick">1e{k}</text>')
    out.append(f'<line x1="{LEFT}" y1="{_f(Y(target))}" x2="{LEFT + pw}" y2="{_f(Y(target))}" '
               'stroke="gray" stroke-dasharray="6,4"/>')
    pts = " ".join(f"{_f(X(a))},{_f(Y(b))}" for a, b in zip(lx, values))
    out.append(f'<polyline points="{pts}" fill="none" stroke="steelblue" stroke-width="2"/>')
    for a, b in zip(lx, values):
        out.append(f'<circle cx="{_f(X(a))}" cy="{_f(Y(b))}" r="3" fill="steelblue"/>')
    pts = " ".join(f"{_f(X(a))},{_f(YE(b))}" for a, b in zip(lx, le))
    out.append(f'<polyline points="{pts}" fill="none" stroke="firebrick" stroke-width="1.5" '
               'stroke-dasharray="3,2"/>')
    lx0 = LEFT + 10
    out.append(f'<text x="{lx0}" y="{TOP + 16}" fill="steelblue">value</text>')
    out.append(f'<text x="{lx0}" y="{TOP + 32}" fill="gray">target</text>')
    out.append(f'<text x="{lx0}" y="{TOP + 48}" fill="firebrick">|error| (right, log)</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s):
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def emit_plot(report, path, title="") -> None:
    """Write the SVG for a convergence or density report; nothing is written on error."""
    if not getattr(report, "orders", None):
        raise DomainError("cannot plot an empty report")
    svg = render_svg(list(report.orders), list(report.values), report.target,
                     list(report.errors), title)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)
