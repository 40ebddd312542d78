"""Partition-indexed coefficients, log Gromov-Witten numbers and quiver invariants.

Everything here is derived from wall functions.  Conventions:

* ``ordered_coefficient(P1, P2)`` is the exponent of
  ``1 + t^(P1,P2) x^a y^b`` in the multi-parameter diagram.
* ``unordered_coefficient(p1, p2)`` sums it over the distinct orderings of
  the parts in ``len(p1)`` (resp. ``len(p2)``) slots; weighting by
  ``C(mu, len(p1)) C(nu, len(p2))`` and summing over partitions gives ``c_{a,b}``.
* ``gw_number(p1, p2)`` divides by ``k = gcd(a, b)`` and sums over the
  common divisors ``l`` of all parts, which is the coefficient of the
  monomial ``t^(p1,p2) x^a y^b`` in ``log f`` divided by ``k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import product

from gmpy2 import mpq

from .diagram import factor_exponents
from .mutation import in_dense_region
from .series import TruncatedSeries, format_rational, is_primitive, primitive_part
from .standard import TableCache, coefficients, multi_param_standard, standard_diagram

__all__ = [
    "Partition",
    "GWRecord",
    "QuiverRecord",
    "RecursionCheck",
    "VanishingResult",
    "partitions",
    "compositions",
    "orderings",
    "ordered_coefficient",
    "unordered_coefficient",
    "gw_number",
    "gw_aggregate",
    "log_coefficient",
    "vanishing_report",
    "quiver_dimension",
    "quiver_chi",
    "framed_series",
    "recursion_oracle1",
    "recursion_oracle2",
]


@dataclass(frozen=True, order=True)
class Partition:
    """Unordered partition, stored with parts in non-increasing order."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(sorted((int(p) for p in self.parts), reverse=True))
        if any(p <= 0 for p in parts):
            raise ValueError("partition parts must be positive")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Read ``"2+1"``, ``"2,1"`` or ``"3"``."""
        tokens = [t for t in text.replace(",", "+").split("+") if t.strip()]
        if not tokens:
            raise ValueError(f"empty partition {text!r}")
        return cls(tuple(int(t) for t in tokens))

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def multiplicities(self) -> tuple[int, ...]:
        """How often each distinct part occurs."""
        counts: dict[int, int] = {}
        for p in self.parts:
            counts[p] = counts.get(p, 0) + 1
        return tuple(counts[p] for p in sorted(counts, reverse=True))

    def divided(self, l: int) -> "Partition":
        return Partition(tuple(p // l for p in self.parts))

    def __str__(self):
        return "+".join(str(p) for p in self.parts)


def partitions(n: int, max_len: int | None = None, max_part: int | None = None):
    """Partitions of ``n`` with at most ``max_len`` parts, largest part first."""
    max_part = n if max_part is None else max_part
    if n == 0:
        yield Partition(())
        return
    if max_len == 0:
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, None if max_len is None else max_len - 1, first):
            yield Partition((first,) + rest.parts)


def compositions(n: int, slots: int):
    """Ordered tuples of ``slots`` non-negative integers summing to ``n``."""
    if slots == 0:
        if n == 0:
            yield ()
        return
    for first in range(n, -1, -1):
        for rest in compositions(n - first, slots - 1):
            yield (first,) + rest


def orderings(p: Partition) -> int:
    """Distinct orderings of the parts of ``p``."""
    out = math.factorial(p.length)
    for m in p.multiplicities():
        out //= math.factorial(m)
    return out


def _profile_gcd(*parts_lists) -> int:
    return reduce(math.gcd, [p for parts in parts_lists for p in parts], 0)


@lru_cache(maxsize=None)
def _ordered(p1: tuple[int, ...], p2: tuple[int, ...]) -> mpq:
    # zero entries drop out: setting a parameter to zero commutes with completion
    q1 = tuple(p for p in p1 if p)
    q2 = tuple(p for p in p2 if p)
    a, b = sum(q1), sum(q2)
    if a == 0 or b == 0:
        return mpq(0)
    order = a + b
    caps = q1 + q2
    diagram = multi_param_standard(len(q1), len(q2), order, caps=caps)
    direction, k = primitive_part(a, b)
    log_f = diagram.log_function(direction)
    return factor_exponents(log_f, direction).exponent(k, caps)


def ordered_coefficient(p1, p2, mu: int | None = None, nu: int | None = None, order: int | None = None) -> mpq:
    """Exponent of ``1 + t^(P1,P2) x^|P1| y^|P2|`` for ordered partitions with zeros."""
    p1, p2 = tuple(int(v) for v in p1), tuple(int(v) for v in p2)
    if any(v < 0 for v in p1 + p2):
        raise ValueError("ordered partitions have non-negative entries")
    if mu is not None and len(p1) != mu or nu is not None and len(p2) != nu:
        raise ValueError("ordered partitions must have lengths mu and nu")
    if order is not None and sum(p1) + sum(p2) > order:
        raise ValueError(f"parameter degree {sum(p1) + sum(p2)} exceeds truncation order {order}")
    return _ordered(p1, p2)


def unordered_coefficient(p1: Partition, p2: Partition, order: int | None = None) -> mpq:
    """Sum of the ordered coefficients over all orderings; each ordering gives the same value."""
    return orderings(p1) * orderings(p2) * ordered_coefficient(p1.parts, p2.parts, order=order)


def gw_number(p1: Partition, p2: Partition, order: int | None = None) -> mpq:
    """``N_{p1,p2} = (1/k) sum_{l | g} (-1)^(l+1)/l * c_{p1/l, p2/l}``.

    ``k = gcd(|p1|, |p2|)`` and ``g`` is the gcd of all parts.
    """
    if p1.length == 0 or p2.length == 0:
        raise ValueError("partitions must be nonempty")
    k = math.gcd(p1.total, p2.total)
    g = _profile_gcd(p1.parts, p2.parts)
    total = mpq(0)
    for l in range(1, g + 1):
        if g % l == 0:
            sign = mpq(1, l) if l % 2 else mpq(-1, l)
            total += sign * unordered_coefficient(p1.divided(l), p2.divided(l), order)
    return total / k


@dataclass(frozen=True)
class GWRecord:
    p1: Partition
    p2: Partition
    value: mpq

    def to_dict(self) -> dict:
        return {"schema": "scattering.gw/1", "p1": list(self.p1.parts), "p2": list(self.p2.parts),
                "N": format_rational(self.value)}


def log_coefficient(a: int, b: int, k: int, mu: int, nu: int, order: int | None = None,
                    cache: TableCache | None = None) -> mpq:
    """Coefficient of ``x^(ka) y^(kb)`` in ``log f_{(a,b)}`` of the standard diagram."""
    order = k * (a + b) if order is None else order
    if k * (a + b) > order:
        raise ValueError("k(a+b) exceeds the truncation order")
    diagram = standard_diagram(mu, nu, order, cache)
    return diagram.log_function((a, b)).coeff(k * a, k * b, {"t": k * (a + b)})


def gw_aggregate(a: int, b: int, k: int, mu: int, nu: int, order: int | None = None,
                 cache: TableCache | None = None) -> mpq:
    """``N^{mu,nu}_{ka,kb}`` from the log of the wall and from partitions; both must agree."""
    if not is_primitive(a, b) or a <= 0 or b <= 0:
        raise ValueError("(a, b) must be primitive with positive entries")
    direct = log_coefficient(a, b, k, mu, nu, order, cache) / k
    summed = mpq(0)
    for p1 in partitions(k * a, mu):
        w1 = math.comb(mu, p1.length)
        for p2 in partitions(k * b, nu):
            summed += w1 * math.comb(nu, p2.length) * gw_number(p1, p2)
    if summed != direct:
        raise ArithmeticError(f"aggregate GW number mismatch: log route {direct}, partition route {summed}")
    return direct


@dataclass
class VanishingResult:
    a: int
    b: int
    mu: int
    nu: int
    c: mpq
    checked: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def vanishing_report(a: int, b: int, mu: int, nu: int, order: int | None = None,
                     cache: TableCache | None = None) -> VanishingResult:
    """If ``c_{a,b} = 0``, every ``N_{p1,p2}`` with coprime parts must vanish."""
    order = a + b if order is None else order
    c = coefficients(mu, nu, order, cache)[(a, b)]
    report = VanishingResult(a, b, mu, nu, c)
    if c != 0:
        return report
    for p1 in partitions(a, mu):
        for p2 in partitions(b, nu):
            if _profile_gcd(p1.parts, p2.parts) != 1:
                continue
            n = gw_number(p1, p2)
            report.checked.append((p1, p2, n))
            if n != 0:
                report.violations.append((p1, p2, n))
    return report


def quiver_dimension(p1, p2) -> int:
    """``1 - sum p1^2 - sum p2^2 + a b`` for the bipartite moduli space."""
    a, b = sum(p1), sum(p2)
    return 1 - sum(p * p for p in p1) - sum(p * p for p in p2) + a * b


@dataclass
class QuiverRecord:
    a: int
    b: int
    mu: int
    nu: int
    chi: mpq
    dense: bool
    dims: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema": "scattering.quiver/1",
            "a": self.a, "b": self.b, "mu": self.mu, "nu": self.nu,
            "chi": format_rational(self.chi),
            "dense": self.dense,
            "dims": [[list(p1), list(p2), d] for (p1, p2), d in self.dims.items()],
        }


def quiver_chi(a: int, b: int, mu: int, nu: int, order: int | None = None,
               cache: TableCache | None = None) -> QuiverRecord:
    if a <= 0 or b <= 0 or not is_primitive(a, b):
        raise ValueError("(a, b) must be primitive with positive entries")
    order = a + b if order is None else order
    chi = coefficients(mu, nu, order, cache)[(a, b)]
    dense = in_dense_region(a, b, mu, nu)
    if dense and chi <= 0:
        raise ArithmeticError(f"dense direction {(a, b)} has Euler characteristic {chi}")
    dims = {(p1, p2): quiver_dimension(p1, p2) for p1, p2 in product(compositions(a, mu), compositions(b, nu))}
    return QuiverRecord(a, b, mu, nu, chi, dense, dims)


def framed_series(a: int, b: int, mu: int, nu: int, order: int,
                  cache: TableCache | None = None) -> tuple[TruncatedSeries, TruncatedSeries]:
    """``(B, F)`` with ``f = B^(mu/a) = F^(nu/b)`` on the ray ``(a, b)``."""
    if mu == 0 or nu == 0:
        raise ValueError("framed series need mu, nu > 0")
    if a <= 0 or b <= 0 or not is_primitive(a, b):
        raise ValueError("(a, b) must be primitive with positive entries")
    f = standard_diagram(mu, nu, order, cache).function((a, b))
    return f.pow(Fraction(a, mu)), f.pow(Fraction(b, nu))


def recursion_oracle1(k: int, mu: int, nu: int) -> mpq:
    """``c_{1,k}`` by the deformation recursion in ``nu``; checked against ``mu C(nu, k)``."""

    @lru_cache(maxsize=None)
    def r(kk: int, n: int) -> int:
        if kk <= 0 or n <= 0:
            return 0
        return r(kk, n - 1) + r(kk - 1, n - 1) + (mu if kk == 1 else 0)

    value = r(k, nu)
    closed = mu * math.comb(nu, k)
    if value != closed:
        raise ArithmeticError(f"recursion gives {value}, closed form {closed}")
    return mpq(value)


@dataclass(frozen=True)
class RecursionCheck:
    k: int
    mu: int
    nu: int
    engine: mpq
    shifted: mpq
    literal: mpq

    @property
    def matching(self) -> list[str]:
        """Readings of the even-``k`` term that reproduce the engine value."""
        out = []
        if self.shifted == self.engine:
            out.append("nu-1")
        if self.literal == self.engine:
            out.append("nu")
        return out


def recursion_oracle2(k: int, mu: int, nu: int, order: int | None = None,
                      cache: TableCache | None = None) -> RecursionCheck:
    """``c_{2,k}`` by the deformation recursion, under both readings of the even term.

    ``shifted`` uses ``4 c_{2,k-1}^{mu,nu-1}``, ``literal`` uses
    ``4 c_{2,k-1}^{mu,nu}``; the ``nu = 1`` column comes from the engine.
    """
    order = k + 2 if order is None else max(order, k + 2)

    def base(kk: int) -> mpq:
        return coefficients(mu, 1, order, cache)[(2, kk)] if kk >= 1 else mpq(0)

    def solve(literal: bool):
        @lru_cache(maxsize=None)
        def c(kk: int, n: int) -> mpq:
            if kk <= 0 or n <= 0:
                return mpq(0)
            if n == 1:
                return base(kk)
            val = c(kk, n - 1) + base(kk) + c(kk - 2, n - 1)
            if kk % 2 == 0:
                val += 4 * (c(kk - 1, n) if literal else c(kk - 1, n - 1))
            else:
                val += c(kk - 1, n - 1)
                if kk // 2 >= 1:
                    val += math.comb(mu * math.comb(n - 1, kk // 2), 2)
            return mpq(val)

        return c(k, nu)

    engine = coefficients(mu, nu, order, cache)[(2, k)]
    return RecursionCheck(k, mu, nu, engine, solve(False), solve(True))
