"""Static SVG and TikZ pictures of two-dimensional diagrams."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from xml.sax.saxutils import escape

from .diagram import Diagram
from .mutation import boundary_slopes
from .series import format_rational

__all__ = ["RenderSpec", "render", "render_svg", "render_tikz", "wall_labels"]

SVG_SIZE = 480
MARGIN = 60


@dataclass(frozen=True)
class RenderSpec:
    """Window half-width, highest labelled multiple and output format."""

    window: Fraction = Fraction(5)
    label_order: int = 2
    fmt: str = "svg"
    mu: int | None = None
    nu: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "window", Fraction(self.window))
        if self.window <= 0:
            raise ValueError("window half-width must be positive")
        if self.label_order < 0:
            raise ValueError("label order must be non-negative")
        if self.fmt not in ("svg", "tikz"):
            raise ValueError(f"unknown format {self.fmt!r}")


def _monomial(a: int, b: int, tex: bool) -> str:
    out = []
    for var, e in (("x", a), ("y", b)):
        if e == 1:
            out.append(var)
        elif e:
            out.append(f"{var}^{{{e}}}" if tex else f"{var}^{e}")
    return "".join(out) if tex else " ".join(out)


def wall_labels(diagram: Diagram, label_order: int, tex: bool = False) -> list[tuple[tuple[int, int], str]]:
    """``(direction, label)`` for every wall, listing factors with ``k <= label_order``."""
    out = []
    for w in diagram.walls:
        a0, b0 = w.direction
        parts = []
        for k, c, _ in w.factorized().factors:
            if k > label_order:
                continue
            mono = _monomial(k * a0, k * b0, tex)
            exp = format_rational(c)
            if exp == "1":
                parts.append(f"(1+{mono})")
            else:
                parts.append(f"(1+{mono})^{{{exp}}}" if tex else f"(1+{mono})^{exp}")
        if parts:
            out.append((w.direction, "".join(parts)))
    return out


def _clip(direction, window: Fraction) -> tuple[Fraction, Fraction]:
    """Point where the ray from the origin leaves the square ``[-window, window]^2``."""
    a, b = direction
    s = window / max(abs(a), abs(b))
    return a * s, b * s


def _boundary_rays(spec: RenderSpec):
    if spec.mu is None or spec.nu is None or spec.mu * spec.nu <= 4:
        return []
    slopes = boundary_slopes(spec.mu, spec.nu)
    out = []
    w = float(spec.window)
    for rho in slopes:
        # ray from the origin with slope rho, clipped to the window
        x = w if rho <= 1 else w / rho
        out.append((x, rho * x))
    return out


def render_svg(diagram: Diagram, spec: RenderSpec) -> str:
    w = spec.window
    scale = Fraction(SVG_SIZE - 2 * MARGIN, 2) / w
    centre = SVG_SIZE / 2

    def pt(x, y) -> tuple[str, str]:
        return f"{float(centre + x * scale):.2f}", f"{float(centre - y * scale):.2f}"

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_SIZE}" height="{SVG_SIZE}" '
        f'viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
        '<g stroke="black" stroke-width="1.2" fill="none">',
    ]
    ox, oy = pt(0, 0)
    for wall in diagram.walls:
        x, y = _clip(wall.direction, w)
        ex, ey = pt(x, y)
        if wall.line:
            sx, sy = pt(-x, -y)
            lines.append(f'<line x1="{sx}" y1="{sy}" x2="{ex}" y2="{ey}" stroke-width="1.8"/>')
        else:
            lines.append(f'<line x1="{ox}" y1="{oy}" x2="{ex}" y2="{ey}"/>')
    for x, y in _boundary_rays(spec):
        ex, ey = pt(x, y)
        lines.append(f'<line x1="{ox}" y1="{oy}" x2="{ex}" y2="{ey}" stroke="gray" stroke-dasharray="6,4"/>')
    lines.append("</g>")
    lines.append('<g font-family="serif" font-size="11" fill="black">')
    for direction, label in wall_labels(diagram, spec.label_order):
        x, y = _clip(direction, w)
        ex, ey = pt(x, y)
        lines.append(f'<text x="{ex}" y="{ey}" dx="4" dy="-4">{escape(label)}</text>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_tikz(diagram: Diagram, spec: RenderSpec) -> str:
    w = spec.window

    def coord(x, y) -> str:
        return f"({float(x):.4g},{float(y):.4g})"

    out = ["\\begin{tikzpicture}[scale=%s]" % f"{float(3 / w):.4g}"]
    for wall in diagram.walls:
        x, y = _clip(wall.direction, w)
        if wall.line:
            out.append(f"  \\draw[thick] {coord(-x, -y)} -- {coord(x, y)};")
        else:
            out.append(f"  \\draw (0,0) -- {coord(x, y)};")
    for x, y in _boundary_rays(spec):
        out.append(f"  \\draw[dashed, gray] (0,0) -- {coord(x, y)};")
    for direction, label in wall_labels(diagram, spec.label_order, tex=True):
        x, y = _clip(direction, w)
        out.append(f"  \\node[anchor=south west, font=\\scriptsize] at {coord(x, y)} {{${label}$}};")
    out.append("\\end{tikzpicture}")
    return "\n".join(out) + "\n"


def render(diagram: Diagram, spec: RenderSpec) -> str:
    return render_svg(diagram, spec) if spec.fmt == "svg" else render_tikz(diagram, spec)
