"""Scattering diagrams with all walls through the origin.

Walls keep the logarithm of their function.  Completion only ever adds
``c * log(1 + u)`` terms, path-ordered products need ``log f`` anyway, and
the factorized exponents are read off the log by a triangular solve.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .automorphism import TorusAutomorphism, deviation, ordered_product
from .series import (
    ConfigurationError,
    TruncatedSeries,
    Truncation,
    format_rational,
    is_primitive,
    primitive_part,
    to_mpq,
)

__all__ = [
    "DIAGRAM_SCHEMA",
    "ConsistencyError",
    "OrientationError",
    "Wall",
    "Diagram",
    "FactorizedWallFunction",
    "angle_key",
    "log_one_plus",
    "factor_exponents",
    "factorize",
    "loop_product",
    "complete",
    "wall_function",
]

DIAGRAM_SCHEMA = "scattering.diagram/1"


class ConsistencyError(ArithmeticError):
    """Completion failed to produce an identity loop product."""


class OrientationError(ArithmeticError):
    """A correction landed outside the cone allowed for the scattered rays."""


def angle_key(v: tuple[int, int]):
    """Sort key for counterclockwise order starting at the positive x-axis."""
    a, b = v
    half = 0 if (b > 0 or (b == 0 and a > 0)) else 1
    return half, _Slope(a, b)


class _Slope:
    """Orders vectors inside one half-plane by exact cross products."""

    __slots__ = ("a", "b")

    def __init__(self, a: int, b: int):
        self.a, self.b = a, b

    def __lt__(self, other):
        return self.a * other.b - self.b * other.a > 0

    def __eq__(self, other):
        return self.a * other.b - self.b * other.a == 0


def log_one_plus(ring: Truncation, a: int, b: int, code: int, scale=1) -> TruncatedSeries:
    """``scale * log(1 + t^code x^a y^b)`` to the ring's order."""
    k = ring.degree(code)
    if k == 0:
        raise ValueError("log(1+u) needs u to vanish modulo the parameters")
    exps = ring.decode(code)
    scale = to_mpq(scale)
    terms = {}
    for l in range(1, ring.order // k + 1):
        c = scale / l if l % 2 else -scale / l
        terms[(l * a, l * b, ring.encode([l * e for e in exps]))] = c
    return TruncatedSeries(ring, terms)


@dataclass(frozen=True)
class FactorizedWallFunction:
    """``prod (1 + t^p z^(k*direction))^c`` as a list of ``(k, c, p)`` factors."""

    direction: tuple[int, int]
    factors: tuple[tuple[int, mpq, tuple[int, ...]], ...]
    ring: Truncation

    @property
    def exponents(self) -> dict[int, mpq]:
        """``k -> c_k`` summed over parameter profiles (the single-parameter view)."""
        out: dict[int, mpq] = {}
        for k, c, _ in self.factors:
            out[k] = out.get(k, 0) + c
        return {k: c for k, c in sorted(out.items()) if c != 0}

    def exponent(self, k: int, params=None) -> mpq:
        if params is None:
            return self.exponents.get(k, mpq(0))
        code = self.ring.encode(params)
        target = self.ring.decode(code)
        return sum((c for kk, c, p in self.factors if kk == k and p == target), mpq(0))

    def log(self) -> TruncatedSeries:
        a0, b0 = self.direction
        total = self.ring.zero()
        for k, c, p in self.factors:
            total = total + log_one_plus(self.ring, k * a0, k * b0, self.ring.encode(p), c)
        return total

    def expand(self) -> TruncatedSeries:
        return self.log().exp()

    def to_text(self) -> str:
        if not self.factors:
            return "1"
        a0, b0 = self.direction
        out = []
        for k, c, p in self.factors:
            mono = [f"{n}^{e}" for n, e in zip(self.ring.params, p) if e]
            if k * a0:
                mono.append(f"x^{k * a0}")
            if k * b0:
                mono.append(f"y^{k * b0}")
            out.append(f"(1 + {' '.join(mono)})^{format_rational(c)}")
        return " ".join(out)

    def to_json(self) -> list:
        return [[k, format_rational(c), list(p)] for k, c, p in self.factors]


def factor_exponents(log_f: TruncatedSeries, direction: tuple[int, int]) -> FactorizedWallFunction:
    """Exponents ``c_u`` with ``log f = sum c_u log(1 + u)`` over monomials ``u``.

    Solves ``L_u = sum_{v^l = u} (-1)^(l+1)/l * c_v`` in increasing degree.
    """
    ring = log_f.ring
    a0, b0 = direction
    if not is_primitive(a0, b0):
        raise ValueError(f"direction {direction} is not primitive")
    by_key = {}
    for (a, b, code), c in log_f.items():
        if a * b0 != b * a0:
            raise ValueError(f"support {(a, b)} is off the ray {direction}")
        k = a // a0 if a0 else b // b0
        if k <= 0:
            raise ValueError(f"support {(a, b)} is not a positive multiple of {direction}")
        by_key[(k, ring.decode(code))] = c
    # roots v of u may have zero log coefficient, so add them as keys
    solved: dict[tuple[int, tuple[int, ...]], mpq] = {}
    keys = set(by_key)
    for k, p in list(by_key):
        for l in range(2, k + 1):
            if k % l == 0 and all(e % l == 0 for e in p):
                keys.add((k // l, tuple(e // l for e in p)))
    for k, p in sorted(keys, key=lambda kp: (sum(kp[1]), kp[0], kp[1])):
        c = by_key.get((k, p), mpq(0))
        for l in range(2, k + 1):
            if k % l == 0 and all(e % l == 0 for e in p):
                root = solved.get((k // l, tuple(e // l for e in p)), 0)
                if root:
                    c -= (mpq(1, l) if l % 2 else mpq(-1, l)) * root
        solved[(k, p)] = c
    factors = tuple((k, c, p) for (k, p), c in sorted(solved.items()) if c != 0)
    return FactorizedWallFunction(tuple(direction), factors, ring)


def factorize(f: TruncatedSeries, direction: tuple[int, int]) -> FactorizedWallFunction:
    """Write ``f`` as ``prod (1 + u)^(c_u)`` over monomials on the ray."""
    return factor_exponents(f.log(), direction)


class Wall:
    """A ray (or a line, both halves) through the origin with its function's log."""

    __slots__ = ("direction", "line", "log_f")

    def __init__(self, direction: tuple[int, int], log_f: TruncatedSeries, line: bool = False):
        a, b = direction
        if (a, b) == (0, 0) or not is_primitive(a, b):
            raise ValueError(f"wall direction {direction} must be primitive and nonzero")
        for (i, j, _), _c in log_f.items():
            if i * b != j * a or i * a + j * b <= 0:
                raise ValueError(f"wall function has support {(i, j)} off the ray {direction}")
        self.direction = (a, b)
        self.line = bool(line)
        self.log_f = log_f

    @classmethod
    def from_function(cls, direction, f: TruncatedSeries, line: bool = False) -> "Wall":
        return cls(direction, f.log(), line)

    @property
    def f(self) -> TruncatedSeries:
        return self.log_f.exp()

    def factorized(self) -> FactorizedWallFunction:
        return factor_exponents(self.log_f, self.direction)

    def __repr__(self):
        kind = "line" if self.line else "ray"
        return f"Wall({kind} {self.direction}: {self.factorized().to_text()})"


class Diagram:
    """Walls through the origin over a fixed truncation ring."""

    def __init__(self, ring: Truncation, walls: Iterable[Wall] = ()):
        self.ring = ring
        merged: dict[tuple[tuple[int, int], bool], TruncatedSeries] = {}
        for w in walls:
            if not w.log_f.ring.compatible(ring):
                raise ConfigurationError("wall function lives in a different ring")
            key = (w.direction, w.line)
            merged[key] = merged[key] + w.log_f if key in merged else w.log_f
        self._walls = {k: v for k, v in merged.items() if v}

    @property
    def order(self) -> int:
        return self.ring.order

    @property
    def params(self) -> tuple[str, ...]:
        return self.ring.params

    @property
    def walls(self) -> list[Wall]:
        keys = sorted(self._walls, key=lambda k: (angle_key(k[0]), not k[1]))
        return [Wall(d, self._walls[(d, line)], line) for d, line in keys]

    def rays(self) -> list[Wall]:
        """Scattered (non-line) walls in counterclockwise order."""
        return [w for w in self.walls if not w.line]

    def lines(self) -> list[Wall]:
        return [w for w in self.walls if w.line]

    def crossings(self) -> list[tuple[tuple[int, int], TruncatedSeries, int]]:
        """Counterclockwise ray crossings ``(direction, log f, sign)`` from angle 0.

        A line on ``m`` is crossed twice, along ``m`` and along ``-m``, both
        times with its own function of ``z^m``; the two crossings cancel.
        """
        items = []
        for (d, line), log_f in self._walls.items():
            items.append((d, log_f, 1))
            if line:
                items.append(((-d[0], -d[1]), log_f, 1))
        items.sort(key=lambda it: angle_key(it[0]))
        return items

    def log_function(self, direction: tuple[int, int]) -> TruncatedSeries:
        a, b = direction
        if (a, b) == (0, 0) or not is_primitive(a, b):
            raise ValueError(f"direction {direction} is not primitive")
        total = self.ring.zero()
        for key in (((a, b), False), ((a, b), True), ((-a, -b), True)):
            if key in self._walls:
                total = total + self._walls[key]
        return total

    def function(self, direction: tuple[int, int]) -> TruncatedSeries:
        return self.log_function(direction).exp()

    def with_ring(self, ring: Truncation) -> "Diagram":
        return Diagram(ring, [Wall(w.direction, w.log_f.with_ring(ring), w.line) for w in self.walls])

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return self.ring.compatible(other.ring) and self._walls == other._walls

    def __repr__(self):
        inner = ", ".join(repr(w) for w in self.walls)
        return f"Diagram(N={self.order}, [{inner}])"

    # -- JSON ------------------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "schema": DIAGRAM_SCHEMA,
            "params": list(self.ring.params),
            "order": self.ring.order,
            "caps": None if self.ring.caps is None else list(self.ring.caps),
            "walls": [
                {"direction": list(w.direction), "line": w.line, "factors": w.factorized().to_json()}
                for w in self.walls
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Diagram":
        if data.get("schema") != DIAGRAM_SCHEMA:
            raise ValueError(f"unsupported diagram schema {data.get('schema')!r}")
        caps = data.get("caps")
        ring = Truncation(tuple(data["params"]), int(data["order"]), None if caps is None else tuple(caps))
        walls = []
        for w in data["walls"]:
            direction = tuple(int(v) for v in w["direction"])
            factors = tuple((int(k), to_mpq(c), tuple(int(e) for e in p)) for k, c, p in w["factors"])
            walls.append(Wall(direction, FactorizedWallFunction(direction, factors, ring).log(), bool(w["line"])))
        return cls(ring, walls)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Diagram":
        return cls.from_dict(json.loads(text))


def loop_product(diagram: Diagram, maxdeg: int | None = None) -> TorusAutomorphism:
    """Path-ordered product around a counterclockwise loop starting at angle 0."""
    return ordered_product(diagram.crossings(), diagram.ring, maxdeg)


def _in_open_cone(v: tuple[int, int], cone: Sequence[tuple[int, int]]) -> bool:
    (p, q), (r, s) = cone
    det = p * s - q * r
    a, b = v
    # coordinates of v in the cone basis, times det
    u, w = a * s - b * r, p * b - q * a
    if det < 0:
        u, w = -u, -w
    return u > 0 and w > 0


def complete(
    diagram: Diagram,
    cone: Sequence[tuple[int, int]] | None = None,
    progress=None,
) -> Diagram:
    """Add rays order by order until the loop product is the identity.

    At order ``k`` every monomial ``u = t^p z^(k'*m)`` of the leading
    deviation ``d_u`` is cancelled by a factor ``(1 + u)^(-k'*d_u)`` on the
    ray ``m``.  ``cone``, when given, must strictly contain every correction.
    """
    ring = diagram.ring
    logs: dict[tuple[tuple[int, int], bool], TruncatedSeries] = dict(diagram._walls)
    for k in range(1, ring.order + 1):
        current = Diagram(ring, [Wall(d, lf, line) for (d, line), lf in logs.items()])
        theta = loop_product(current, maxdeg=k)
        dev = deviation(theta, k)
        for (a, b, code), d in sorted(dev.items()):
            m, mult = primitive_part(a, b)
            if cone is not None and not _in_open_cone(m, cone):
                raise OrientationError(f"correction at {(a, b)} lies outside the cone {list(cone)}")
            term = log_one_plus(ring, a, b, code, -mult * d)
            key = (m, False)
            logs[key] = logs[key] + term if key in logs else term
        if progress is not None:
            progress(k, len(dev))
    result = Diagram(ring, [Wall(d, lf, line) for (d, line), lf in logs.items()])
    if not loop_product(result).is_identity():
        raise ConsistencyError("completed diagram does not have identity loop product")
    return result


def wall_function(diagram: Diagram, direction: tuple[int, int]) -> TruncatedSeries:
    """Function attached to ``direction`` (1 when no wall lies there)."""
    return diagram.function(direction)
