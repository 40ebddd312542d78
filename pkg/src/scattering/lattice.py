"""Change of lattice: two-line diagrams from standard ones.

For lines ``(1 + t z^m1)^d1`` and ``(1 + t z^m2)^d2`` the sublattice ``M'``
spanned by ``m1, m2`` turns the problem into a standard diagram in the
coordinates ``x' = z^m1, y' = z^m2``; functions come back with the exponent
``1/e(n)``, where ``e(n)`` is the index of the primitive dual normal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .diagram import Diagram, Wall, complete, log_one_plus
from .series import TruncatedSeries, Truncation, primitive_part
from .standard import TableCache, standard_diagram

__all__ = [
    "DegenerateLatticeError",
    "TwoLineProblem",
    "LatticeReduction",
    "dual_basis",
    "dual_index",
    "reduce",
    "transport",
    "transported_diagram",
    "complete_two_lines",
]


class DegenerateLatticeError(ValueError):
    """The two line directions are parallel."""


@dataclass(frozen=True)
class TwoLineProblem:
    """Lines along ``m1``, ``m2`` with functions ``(1 + t z^mi)^di``."""

    m1: tuple[int, int]
    m2: tuple[int, int]
    d1: int = 1
    d2: int = 1

    def __post_init__(self):
        object.__setattr__(self, "m1", tuple(int(v) for v in self.m1))
        object.__setattr__(self, "m2", tuple(int(v) for v in self.m2))
        if self.m1 == (0, 0) or self.m2 == (0, 0):
            raise DegenerateLatticeError("line directions must be nonzero")
        if self.det == 0:
            raise DegenerateLatticeError(f"{self.m1} and {self.m2} are parallel")
        if self.d1 < 1 or self.d2 < 1:
            raise ValueError("initial exponents must be positive")

    @property
    def det(self) -> int:
        (p, q), (r, s) = self.m1, self.m2
        return p * s - q * r

    def coordinates(self, m: tuple[int, int]) -> tuple[Fraction, Fraction]:
        """``(a, b)`` with ``m = a*m1 + b*m2``."""
        (p, q), (r, s) = self.m1, self.m2
        det = self.det
        return Fraction(m[0] * s - m[1] * r, det), Fraction(p * m[1] - q * m[0], det)

    def point(self, a: int, b: int) -> tuple[int, int]:
        return (a * self.m1[0] + b * self.m2[0], a * self.m1[1] + b * self.m2[1])


def dual_basis(p: TwoLineProblem) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    """``m1*, m2*``: rows of the inverse of the matrix with columns ``m1, m2``."""
    (a, c), (b, d) = p.m1, p.m2
    det = p.det
    return (Fraction(d, det), Fraction(-b, det)), (Fraction(-c, det), Fraction(a, det))


def dual_index(n: tuple[Fraction, Fraction]) -> int:
    """``e(n) = min{k >= 1 : k n integral}``."""
    return math.lcm(Fraction(n[0]).denominator, Fraction(n[1]).denominator)


@dataclass(frozen=True)
class LatticeReduction:
    problem: TwoLineProblem
    mu_prime: int
    nu_prime: int
    e_m1_star: int
    e_m2_star: int

    def normal(self, a: int, b: int) -> tuple[Fraction, Fraction]:
        """Primitive element of ``N'`` orthogonal to ``a*m1 + b*m2`` (``a, b`` coprime)."""
        s1, s2 = dual_basis(self.problem)
        return (-b * s1[0] + a * s2[0], -b * s1[1] + a * s2[1])

    def index_of(self, a: int, b: int) -> int:
        return dual_index(self.normal(a, b))


def reduce(p: TwoLineProblem) -> LatticeReduction:
    s1, s2 = dual_basis(p)
    e1, e2 = dual_index(s1), dual_index(s2)
    return LatticeReduction(p, p.d1 * e2, p.d2 * e1, e1, e2)


def _push(f: TruncatedSeries, p: TwoLineProblem) -> TruncatedSeries:
    """Rewrite a series in ``x' = z^m1, y' = z^m2`` in the ambient coordinates."""
    (p1, q1), (p2, q2) = p.m1, p.m2
    return f.map_lattice(((p1, p2), (q1, q2)))


def transport(p: TwoLineProblem, m: tuple[int, int], order: int, cache: TableCache | None = None) -> TruncatedSeries:
    """Function on the ray through ``m`` of the completed two-line diagram.

    Returns the constant 1 when ``m`` is not in the sublattice spanned by the
    two line directions.
    """
    if tuple(m) == (0, 0):
        raise ValueError("m must be nonzero")
    ring = Truncation(("t",), order)
    a, b = p.coordinates(m)
    if a.denominator != 1 or b.denominator != 1:
        return ring.one()
    (a0, b0), _ = primitive_part(int(a), int(b))
    red = reduce(p)
    std = standard_diagram(red.mu_prime, red.nu_prime, order, cache)
    f = std.function((a0, b0))
    e = red.index_of(a0, b0)
    return _push(f, p).pow(Fraction(1, e))


def transported_diagram(p: TwoLineProblem, order: int, cache: TableCache | None = None) -> Diagram:
    """The completed two-line diagram, built entirely from a standard one."""
    ring = Truncation(("t",), order)
    red = reduce(p)
    std = standard_diagram(red.mu_prime, red.nu_prime, order, cache)
    walls = []
    for w in std.walls:
        a0, b0 = w.direction
        e = red.index_of(a0, b0)
        direction, _ = primitive_part(*p.point(a0, b0))
        log_f = _push(w.log_f, p).scale(Fraction(1, e))
        walls.append(Wall(direction, log_f, w.line))
    return Diagram(ring, walls)


def complete_two_lines(p: TwoLineProblem, order: int) -> Diagram:
    """Direct completion in the ambient lattice (independent of the standard tables)."""
    ring = Truncation(("t",), order)
    t_code = ring.encode((1,))
    walls = []
    for m, d in ((p.m1, p.d1), (p.m2, p.d2)):
        direction, _ = primitive_part(*m)
        walls.append(Wall(direction, log_one_plus(ring, m[0], m[1], t_code, d), True))
    cone = (p.m1, p.m2)
    return complete(Diagram(ring, walls), cone=cone)
