"""Wall-crossing automorphisms of the torus algebra.

An automorphism fixing the parameters is determined by ``x -> x*u`` and
``y -> y*v`` with units ``u``, ``v``.  We store ``log u`` and ``log v``; this
keeps composition and application to a series down to one substitution.
"""

from __future__ import annotations

from typing import Sequence

from gmpy2 import mpq

from .series import ConfigurationError, NonUnitError, TruncatedSeries, Truncation, is_primitive

__all__ = [
    "HamiltonianError",
    "TorusAutomorphism",
    "from_wall",
    "compose",
    "ordered_product",
    "deviation",
]


class HamiltonianError(ArithmeticError):
    """The leading deviation of an automorphism is not a Hamiltonian flow."""


class TorusAutomorphism:
    """Ring automorphism ``x -> x*exp(log_x)``, ``y -> y*exp(log_y)``."""

    __slots__ = ("ring", "log_x", "log_y")

    def __init__(self, log_x: TruncatedSeries, log_y: TruncatedSeries):
        if not log_x.ring.compatible(log_y.ring):
            raise ConfigurationError("log_x and log_y live in different rings")
        for s in (log_x, log_y):
            if s and s.min_degree() == 0:
                raise NonUnitError("automorphism logs must vanish modulo the parameters")
        self.ring = log_x.ring
        self.log_x = log_x
        self.log_y = log_y

    @classmethod
    def identity(cls, ring: Truncation) -> "TorusAutomorphism":
        return cls(ring.zero(), ring.zero())

    @classmethod
    def from_images(cls, image_x: TruncatedSeries, image_y: TruncatedSeries) -> "TorusAutomorphism":
        ux, uy = image_x.shift(-1, 0), image_y.shift(0, -1)
        if not ux.is_unit() or not uy.is_unit():
            raise NonUnitError("images must have the form x*(unit), y*(unit)")
        return cls(ux.log(), uy.log())

    @property
    def order(self) -> int:
        return self.ring.order

    @property
    def image_x(self) -> TruncatedSeries:
        return self.log_x.exp().shift(1, 0)

    @property
    def image_y(self) -> TruncatedSeries:
        return self.log_y.exp().shift(0, 1)

    def __call__(self, f: TruncatedSeries, maxdeg: int | None = None) -> TruncatedSeries:
        return f.substitute_logs(self.log_x, self.log_y, maxdeg)

    apply = __call__

    def inverse(self) -> "TorusAutomorphism":
        """Inverse automorphism, by fixed-point iteration on the logs.

        With ``psi`` the inverse, ``psi(theta(x)) = x`` gives
        ``L'_x = -psi(L_x)``; each pass fixes one more parameter degree.
        """
        inv = TorusAutomorphism.identity(self.ring)
        for _ in range(self.ring.order):
            inv = TorusAutomorphism(-inv(self.log_x), -inv(self.log_y))
        return inv

    def is_identity(self, maxdeg: int | None = None) -> bool:
        if maxdeg is None:
            return not self.log_x and not self.log_y
        return not self.log_x.truncated(maxdeg) and not self.log_y.truncated(maxdeg)

    def truncated(self, maxdeg: int) -> "TorusAutomorphism":
        return TorusAutomorphism(self.log_x.truncated(maxdeg), self.log_y.truncated(maxdeg))

    def __eq__(self, other):
        if not isinstance(other, TorusAutomorphism):
            return NotImplemented
        return self.log_x == other.log_x and self.log_y == other.log_y

    def __hash__(self):
        return hash((self.log_x, self.log_y))

    def __repr__(self):
        return f"TorusAutomorphism(log_x={self.log_x.to_text()}, log_y={self.log_y.to_text()})"


def _check_ray_support(direction: tuple[int, int], f: TruncatedSeries) -> None:
    a0, b0 = direction
    for (a, b, _), _c in f.items():
        if a * b0 != b * a0 or a * a0 + b * b0 < 0:
            raise ValueError(f"wall function has support {(a, b)} off the ray {direction}")


def wall_exponents(direction: tuple[int, int], crossing: int) -> tuple[int, int]:
    """``(<(1,0),n>, <(0,1),n>)`` for the normal ``n = crossing*(-b, a)``."""
    if crossing not in (1, -1):
        raise ValueError("crossing must be +1 or -1")
    a, b = direction
    return -crossing * b, crossing * a


def from_wall(direction: tuple[int, int], f: TruncatedSeries, crossing: int = 1) -> TorusAutomorphism:
    """Automorphism of crossing the wall along ``direction`` carrying ``f``."""
    a, b = direction
    if not is_primitive(a, b):
        raise ValueError(f"wall direction {direction} is not primitive")
    _check_ray_support(direction, f)
    ex, ey = wall_exponents(direction, crossing)
    log_f = f.log()
    return TorusAutomorphism(log_f.scale(ex), log_f.scale(ey))


def compose(outer: TorusAutomorphism, inner: TorusAutomorphism) -> TorusAutomorphism:
    """``outer o inner``: apply ``inner`` first."""
    if not outer.ring.compatible(inner.ring):
        raise ConfigurationError("cannot compose automorphisms over different rings")
    return TorusAutomorphism(outer.log_x + outer(inner.log_x), outer.log_y + outer(inner.log_y))


def ordered_product(
    crossings: Sequence[tuple[tuple[int, int], TruncatedSeries, int]],
    ring: Truncation,
    maxdeg: int | None = None,
) -> TorusAutomorphism:
    """``theta_s o ... o theta_1`` for crossings given as ``(direction, log f, sign)``.

    Walks the list from the end: with ``psi`` the product of the walls after
    the current one, ``psi o theta_i`` has logs
    ``L + e_i * psi(log f_i)``.  Only parameter degrees up to ``maxdeg`` are
    formed.
    """
    n = ring.order if maxdeg is None else maxdeg
    lx, ly = ring.zero(), ring.zero()
    for direction, log_f, crossing in reversed(list(crossings)):
        if not log_f:
            continue
        ex, ey = wall_exponents(direction, crossing)
        r = log_f.substitute_logs(lx, ly, n) if (lx or ly) else log_f.truncated(n)
        if ex:
            lx = lx + r.scale(ex)
        if ey:
            ly = ly + r.scale(ey)
    return TorusAutomorphism(lx, ly)


def deviation(theta: TorusAutomorphism, k: int) -> dict[tuple[int, int, int], mpq]:
    """Order-``k`` Hamiltonian of an automorphism that is trivial below order ``k``.

    Keys are ``(A, B, code)`` monomials of parameter degree ``k``; the value
    ``d`` means ``theta`` agrees to order ``k`` with the flow of
    ``d * z^(A,B)`` for the bracket ``{x, y} = xy``, i.e. ``log_x`` gains
    ``-B*d`` and ``log_y`` gains ``A*d``.
    """
    ring = theta.ring
    deg = ring.degree
    lead: dict[tuple[int, int, int], list] = {}
    for which, series in ((0, theta.log_x), (1, theta.log_y)):
        for key, c in series.items():
            d = deg(key[2])
            if d < k:
                raise ValueError(f"automorphism is not the identity below order {k} (term {key} of degree {d})")
            if d == k:
                lead.setdefault(key, [mpq(0), mpq(0)])[which] = c
    out = {}
    for key, (cx, cy) in lead.items():
        a, b, _ = key
        if a * cx + b * cy != 0 or (a == 0 and b == 0):
            raise HamiltonianError(f"order-{k} term at {key} is not Hamiltonian: ({cx}, {cy})")
        d = cy / a if a != 0 else -cx / b
        if d != 0:
            out[key] = d
    return out

