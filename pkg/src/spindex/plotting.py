"""Static figure emission: a dependency-light SVG barcode writer with
deterministic byte output, and optional matplotlib renderings.

SVG text depends only on the barcode contents (fixed float formatting,
stable ordering), so repeated runs produce identical files.
"""

from __future__ import annotations

from .exact import SortKey
from .persistence import Barcode


def _fmt(x: float) -> str:
    return f"{x:.4f}".rstrip("0").rstrip(".")


def barcode_svg(bc: Barcode, width: int = 640, height: int = 360,
                window_top: float | None = None) -> str:
    """Render bars as rectangles over an action axis, degree labels at
    the left end of each bar."""
    bars = sorted(bc.bars, key=lambda b: (SortKey(b.birth), b.degree))
    if window_top is None:
        tops = [float(b.death) for b in bars if b.death is not None]
        tops += [float(b.birth) + 1 for b in bars]
        window_top = max(tops, default=1.0) * 1.05
    margin = 40
    span = max(window_top, 1e-9)
    inner_w = width - 2 * margin
    rows = max(len(bars), 1)
    row_h = min(24.0, (height - 2 * margin) / rows)

    def sx(value: float) -> float:
        return margin + inner_w * min(value, window_top) / span

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" '
        f'fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" '
        f'x2="{width - margin}" y2="{height - margin}" '
        f'stroke="black" stroke-width="1"/>',
    ]
    ticks = 6
    for i in range(ticks + 1):
        v = span * i / ticks
        x = _fmt(sx(v))
        out.append(f'<line x1="{x}" y1="{height - margin}" x2="{x}" '
                   f'y2="{height - margin + 5}" stroke="black" '
                   f'stroke-width="1"/>')
        out.append(f'<text x="{x}" y="{height - margin + 18}" '
                   f'font-size="10" text-anchor="middle" '
                   f'font-family="monospace">{_fmt(v)}</text>')
    for row, bar in enumerate(bars):
        y = margin + row * row_h
        x0 = sx(float(bar.birth))
        x1 = sx(float(bar.death)) if bar.death is not None \
            else width - margin
        out.append(f'<rect x="{_fmt(x0)}" y="{_fmt(y)}" '
                   f'width="{_fmt(max(x1 - x0, 0.5))}" '
                   f'height="{_fmt(max(row_h - 4, 2.0))}" '
                   f'fill="#4878a8" stroke="black" stroke-width="0.5"/>')
        label = f"deg {bar.degree}"
        if bar.death is None:
            label += " (inf)"
        out.append(f'<text x="{_fmt(x0 + 3)}" y="{_fmt(y + row_h - 7)}" '
                   f'font-size="9" font-family="monospace" '
                   f'fill="white">{label}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_barcode_svg(bc: Barcode, path: str,
                      window_top: float | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(barcode_svg(bc, window_top=window_top))


def write_barcode_png(bc: Barcode, path: str) -> None:
    """Matplotlib rendering of the same bars."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    bars = sorted(bc.bars, key=lambda b: (SortKey(b.birth), b.degree))
    fig, ax = plt.subplots(figsize=(8, 4.5))
    tops = [float(b.death) for b in bars if b.death is not None]
    top = max(tops, default=1.0) * 1.08
    for row, bar in enumerate(bars):
        x0 = float(bar.birth)
        x1 = float(bar.death) if bar.death is not None else top
        ax.hlines(row, x0, x1, colors="#4878a8", linewidth=4)
        ax.annotate(str(bar.degree), (x0, row), textcoords="offset points",
                    xytext=(2, 4), fontsize=7)
    ax.set_xlabel("action")
    ax.set_ylabel("bar")
    ax.set_ylim(-1, max(len(bars), 1))
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def write_indices_png(rows: list, path: str) -> None:
    """Plot mu- / mu+ and the mean line against the iterate order.

    rows: (k, hmu_float, mu_minus, mu_plus) tuples.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    ks = [r[0] for r in rows]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(ks, [r[1] for r in rows], color="gray", linestyle="--",
            label="k * mean index")
    ax.step(ks, [r[2] for r in rows], where="mid", label="mu-")
    ax.step(ks, [r[3] for r in rows], where="mid", label="mu+")
    ax.set_xlabel("iterate k")
    ax.set_ylabel("index")
    ax.legend(loc="upper left")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
