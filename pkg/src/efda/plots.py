"""Static SVG charts from result CSVs.

The writer is deliberately minimal and fully deterministic: fixed
canvas, fixed palette, coordinates printed with two decimals, no
timestamps or generated ids, so rendering the same CSV twice yields
byte-identical files.
"""

from __future__ import annotations

import math

from .errors import DataFormatError
from .results import BenchmarkTable

WIDTH, HEIGHT = 640, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 160, 30, 50

PALETTE = {
    "efda": "#1b6ca8",
    "efda_khat": "#63a8d6",
    "lda": "#d1495b",
    "qda": "#e8a03e",
    "lr": "#4f8a4f",
    "cr": "#555555",
}
_FALLBACK = ("#7a5fa0", "#9a6650", "#4aa3a3", "#a34a7d")

PLOT_KINDS = (
    "bench-ece",
    "sweep-ece",
    "efficiency-variance",
    "efficiency-mse",
    "ablation-accuracy",
)


def _color(label: str, index: int) -> str:
    return PALETTE.get(label, _FALLBACK[index % len(_FALLBACK)])


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / count
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _log_ticks(lo: float, hi: float) -> list[float]:
    lo_e = math.floor(math.log10(lo))
    hi_e = math.ceil(math.log10(hi))
    return [10.0**e for e in range(lo_e, hi_e + 1)]


def _fmt_tick(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 10000 or abs(v) < 0.001:
        exp = math.floor(math.log10(abs(v)))
        mant = v / 10.0**exp
        if abs(mant - 1.0) < 1e-9:
            return f"1e{exp}"
        return f"{mant:g}e{exp}"
    return f"{v:g}"


class _Canvas:
    def __init__(self):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        ]

    def line(self, x1, y1, x2, y2, stroke="#000", width=1.0, dash=""):
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'stroke="{stroke}" stroke-width="{width:g}"{d}/>'
        )

    def polyline(self, points, stroke, width=2.0, dash=""):
        pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in points)
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{stroke}" '
            f'stroke-width="{width:g}"{d}/>'
        )

    def circle(self, x, y, r, fill):
        self.parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{r:g}" fill="{fill}"/>')

    def rect(self, x, y, w, h, fill):
        self.parts.append(
            f'<rect x="{x:.2f}" y="{y:.2f}" width="{w:.2f}" height="{h:.2f}" fill="{fill}"/>'
        )

    def text(self, x, y, s, size=12, anchor="start", rotate=None):
        r = f' transform="rotate(-90 {x:.2f} {y:.2f})"' if rotate else ""
        self.parts.append(
            f'<text x="{x:.2f}" y="{y:.2f}" font-family="sans-serif" font-size="{size}" '
            f'text-anchor="{anchor}"{r}>{s}</text>'
        )

    def to_text(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def _axes(c: _Canvas, xlo, xhi, ylo, yhi, logx, logy, xlabel, ylabel):
    def sx(v):
        if logx:
            return MARGIN_L + (math.log10(v) - math.log10(xlo)) / (
                math.log10(xhi) - math.log10(xlo)
            ) * (WIDTH - MARGIN_L - MARGIN_R)
        return MARGIN_L + (v - xlo) / (xhi - xlo) * (WIDTH - MARGIN_L - MARGIN_R)

    def sy(v):
        if logy:
            frac = (math.log10(v) - math.log10(ylo)) / (math.log10(yhi) - math.log10(ylo))
        else:
            frac = (v - ylo) / (yhi - ylo)
        return HEIGHT - MARGIN_B - frac * (HEIGHT - MARGIN_T - MARGIN_B)

    c.line(MARGIN_L, HEIGHT - MARGIN_B, WIDTH - MARGIN_R, HEIGHT - MARGIN_B)
    c.line(MARGIN_L, MARGIN_T, MARGIN_L, HEIGHT - MARGIN_B)
    xticks = _log_ticks(xlo, xhi) if logx else _nice_ticks(xlo, xhi)
    for t in xticks:
        if xlo <= t <= xhi * (1 + 1e-12):
            x = sx(t)
            c.line(x, HEIGHT - MARGIN_B, x, HEIGHT - MARGIN_B + 4)
            c.text(x, HEIGHT - MARGIN_B + 18, _fmt_tick(t), anchor="middle")
    yticks = _log_ticks(ylo, yhi) if logy else _nice_ticks(ylo, yhi)
    for t in yticks:
        if ylo <= t <= yhi * (1 + 1e-12):
            y = sy(t)
            c.line(MARGIN_L - 4, y, MARGIN_L, y)
            c.text(MARGIN_L - 8, y + 4, _fmt_tick(t), anchor="end")
            c.line(MARGIN_L, y, WIDTH - MARGIN_R, y, stroke="#eeeeee")
    c.text((MARGIN_L + WIDTH - MARGIN_R) / 2, HEIGHT - 12, xlabel, anchor="middle")
    c.text(18, (MARGIN_T + HEIGHT - MARGIN_B) / 2, ylabel, anchor="middle", rotate=True)
    return sx, sy


def _legend(c: _Canvas, labels):
    x = WIDTH - MARGIN_R + 14
    y = MARGIN_T + 10
    for i, label in enumerate(labels):
        c.rect(x, y + 18 * i - 8, 10, 10, _color(label, i))
        c.text(x + 16, y + 18 * i + 1, label)


def _line_chart(series, xlabel, ylabel, logx=False, logy=False, dashed=()):
    xs_all = [x for _, pts in series for x, _ in pts]
    ys_all = [y for _, pts in series for _, y in pts]
    if not xs_all:
        raise DataFormatError("no data points to plot")
    xlo, xhi = min(xs_all), max(xs_all)
    ylo, yhi = min(ys_all), max(ys_all)
    if logy:
        ylo = max(ylo, 1e-300)
    else:
        ylo = min(0.0, ylo)
        yhi *= 1.08 if yhi > 0 else 1.0
    if xlo == xhi:
        xlo, xhi = xlo - 0.5, xhi + 0.5
    c = _Canvas()
    sx, sy = _axes(c, xlo, xhi, ylo, yhi, logx, logy, xlabel, ylabel)
    for i, (label, pts) in enumerate(series):
        scaled = [(sx(x), sy(y)) for x, y in sorted(pts)]
        dash = "6,4" if label in dashed else ""
        c.polyline(scaled, _color(label, i), dash=dash)
        for x, y in scaled:
            c.circle(x, y, 2.6, _color(label, i))
    _legend(c, [label for label, _ in series])
    return c.to_text()


def _bar_chart(groups, ylabel):
    # groups: [(group label, [(series label, value), ...]), ...]
    labels = [lab for _, bars in groups for lab, _ in bars]
    series_labels = list(dict.fromkeys(labels))
    values = [v for _, bars in groups for _, v in bars]
    yhi = (max(values) if values else 1.0) * 1.12
    c = _Canvas()
    sx, sy = _axes(c, 0.0, 1.0, 0.0, yhi, False, False, "", ylabel)
    span = WIDTH - MARGIN_L - MARGIN_R
    gw = span / max(len(groups), 1)
    for g, (glabel, bars) in enumerate(groups):
        bw = gw * 0.8 / max(len(bars), 1)
        for b, (blabel, value) in enumerate(bars):
            x = MARGIN_L + g * gw + gw * 0.1 + b * bw
            y = sy(value)
            c.rect(x, y, bw * 0.92, HEIGHT - MARGIN_B - y, _color(blabel, b))
        c.text(MARGIN_L + g * gw + gw / 2, HEIGHT - MARGIN_B + 18, glabel, anchor="middle")
    _legend(c, series_labels)
    return c.to_text()


def _series_from_sweep(table: BenchmarkTable, xcol: str, ycol: str, pct=False):
    methods = list(dict.fromkeys(table.column("method")))
    out = []
    scale = 100.0 if pct else 1.0
    for m in methods:
        sub = table.select(method=m)
        pts = list(zip(sub.floats(xcol), sub.floats(ycol) * scale))
        out.append((m, pts))
    return out


def infer_kind(table: BenchmarkTable) -> str:
    if "cr_bound" in table.columns:
        return "efficiency-mse"
    experiment = table.column("experiment")[0] if table.rows else ""
    if experiment == "sweep-n" or experiment == "sweep-alpha":
        return "sweep-ece"
    if experiment == "ablate-shape":
        return "ablation-accuracy"
    return "bench-ece"


def render(table: BenchmarkTable, kind: str = "auto") -> str:
    """SVG text for a result table; kind 'auto' is inferred from the header."""
    if kind == "auto":
        kind = infer_kind(table)
    if kind not in PLOT_KINDS:
        raise DataFormatError(f"unknown plot kind {kind!r}; known: {PLOT_KINDS}")
    if kind == "bench-ece":
        groups = []
        for fam in dict.fromkeys(table.column("family")):
            sub = table.select(family=fam)
            bars = [
                (m, float(sub.select(method=m).column("ece_mean")[0]) * 100.0)
                for m in dict.fromkeys(sub.column("method"))
            ]
            groups.append((fam.split(":")[0], bars))
        return _bar_chart(groups, "ECE (%)")
    if kind == "sweep-ece":
        experiment = table.column("experiment")[0]
        if experiment == "sweep-alpha":
            series = _series_from_sweep(table, "alpha", "ece_mean", pct=True)
            return _line_chart(series, "class-1 prior", "ECE (%)")
        series = _series_from_sweep(table, "n_train", "ece_mean", pct=True)
        return _line_chart(series, "training size n", "ECE (%)", logx=True)
    if kind == "ablation-accuracy":
        series = _series_from_sweep(table, "n_train", "acc_mean", pct=True)
        return _line_chart(series, "training size n", "accuracy (%)", logx=True)
    if kind == "efficiency-variance":
        series = _series_from_sweep(table, "n", "variance")
        methods = list(dict.fromkeys(table.column("method")))
        first = table.select(method=methods[0])
        series.append(("cr", list(zip(first.floats("n"), first.floats("cr_bound")))))
        return _line_chart(series, "n", "variance of log-odds", logx=True, dashed=("cr",))
    series = _series_from_sweep(table, "n", "mse")
    methods = list(dict.fromkeys(table.column("method")))
    first = table.select(method=methods[0])
    series.append(("cr", list(zip(first.floats("n"), first.floats("cr_bound")))))
    return _line_chart(series, "n", "MSE of log-odds", logx=True, logy=True, dashed=("cr",))


def emit_svg(table: BenchmarkTable, kind: str, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(render(table, kind))
