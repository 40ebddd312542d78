"""Exact truncated power series in Laurent variables x, y over formal parameters.

A series lives in a :class:`Truncation`, the Artin ring
``Q[params] / (total degree > order, t_i^(cap_i + 1))`` tensored with
``Q[x^{+-1}, y^{+-1}]``.  Only the parameter degree is truncated, so Laurent
exponents in x and y are unrestricted.

Terms are stored in a dict keyed by ``(a, b, code)`` where ``a``/``b`` are the
x/y exponents and ``code`` packs the parameter exponents in base ``order + 1``.
Because every stored term has total parameter degree ``<= order``, adding two
codes never carries between digits as long as the degrees of the two factors
sum to at most ``order``, which is the only case the multiplication forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

from gmpy2 import mpq

__all__ = [
    "ConfigurationError",
    "NonUnitError",
    "Truncation",
    "TruncatedSeries",
    "to_mpq",
    "format_rational",
    "is_primitive",
    "primitive_part",
    "parse_series",
]


class ConfigurationError(ValueError):
    """Series from different truncation rings were combined."""


class NonUnitError(ValueError):
    """An operation needing a unit (or nilpotent) series got something else."""


def to_mpq(value) -> mpq:
    """Convert ints, Fractions, mpq or ``"p/q"`` strings to ``mpq``."""
    if isinstance(value, str):
        return mpq(value.strip())
    if isinstance(value, float):
        raise TypeError("floating point coefficients are not allowed")
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, (int, Rational)) or type(value).__name__ in ("mpq", "mpz"):
        return mpq(value)
    raise TypeError(f"cannot use {value!r} as an exact coefficient")


def format_rational(value) -> str:
    q = to_mpq(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def is_primitive(a: int, b: int) -> bool:
    return math.gcd(a, b) == 1


def primitive_part(a: int, b: int) -> tuple[tuple[int, int], int]:
    """Split a nonzero vector into (primitive direction, multiplicity)."""
    g = math.gcd(a, b)
    if g == 0:
        raise ValueError("the zero vector has no direction")
    return (a // g, b // g), g


@dataclass(frozen=True)
class Truncation:
    """Parameter names, truncation order and optional per-parameter caps."""

    params: tuple[str, ...]
    order: int
    caps: tuple[int, ...] | None = None
    _degree_memo: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        if len(set(self.params)) != len(self.params):
            raise ConfigurationError(f"duplicate parameter names in {self.params}")
        if self.order < 0:
            raise ConfigurationError("truncation order must be non-negative")
        if self.caps is not None:
            caps = tuple(int(c) for c in self.caps)
            if len(caps) != len(self.params) or min(caps, default=0) < 0:
                raise ConfigurationError("caps must give one non-negative bound per parameter")
            object.__setattr__(self, "caps", caps)

    @property
    def base(self) -> int:
        return self.order + 1

    def encode(self, exps: Iterable[int] | Mapping[str, int]) -> int:
        if isinstance(exps, Mapping):
            unknown = set(exps) - set(self.params)
            if unknown:
                raise ConfigurationError(f"unknown parameters {sorted(unknown)}")
            exps = [exps.get(p, 0) for p in self.params]
        exps = tuple(exps)
        if len(exps) != len(self.params):
            raise ConfigurationError("wrong number of parameter exponents")
        code = 0
        for e in reversed(exps):
            if e < 0 or e > self.order:
                raise ValueError(f"parameter exponent {e} out of range")
            code = code * self.base + e
        return code

    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in self.params:
            code, e = divmod(code, self.base)
            out.append(e)
        return tuple(out)

    def degree(self, code: int) -> int:
        if len(self.params) <= 1:
            return code
        d = self._degree_memo.get(code)
        if d is None:
            d = sum(self.decode(code))
            self._degree_memo[code] = d
        return d

    def admits(self, code: int) -> bool:
        exps = self.decode(code)
        if sum(exps) > self.order:
            return False
        if self.caps is not None and any(e > c for e, c in zip(exps, self.caps)):
            return False
        return True

    def compatible(self, other: "Truncation") -> bool:
        return self.params == other.params and self.order == other.order and self.caps == other.caps

    # convenience constructors
    def one(self) -> "TruncatedSeries":
        return TruncatedSeries(self, {(0, 0, 0): mpq(1)})

    def zero(self) -> "TruncatedSeries":
        return TruncatedSeries(self, {})

    def monomial(self, a: int = 0, b: int = 0, params=None, coeff=1) -> "TruncatedSeries":
        code = 0 if not params else self.encode(params)
        return TruncatedSeries(self, {(a, b, code): to_mpq(coeff)})

    @property
    def x(self) -> "TruncatedSeries":
        return self.monomial(1, 0)

    @property
    def y(self) -> "TruncatedSeries":
        return self.monomial(0, 1)

    def param(self, name: str) -> "TruncatedSeries":
        return self.monomial(0, 0, {name: 1})

    def gens(self) -> tuple["TruncatedSeries", ...]:
        """``(x, y, *params)`` as series, for building inputs by hand."""
        return (self.x, self.y) + tuple(self.param(p) for p in self.params)


# ---------------------------------------------------------------------------
# graded kernels.  A "parts" value is a list indexed by parameter degree whose
# entries are lists of (a, b, code, coeff) tuples.


def _parts_of(terms: dict, ring: Truncation, maxdeg: int) -> list[list]:
    parts = [[] for _ in range(maxdeg + 1)]
    deg = ring.degree
    for (a, b, code), c in terms.items():
        d = deg(code)
        if d <= maxdeg:
            parts[d].append((a, b, code, c))
    return parts


def _mul_into(acc: dict, left: list, right: list, scale=None) -> None:
    for a1, b1, k1, c1 in left:
        if scale is not None:
            c1 = c1 * scale
        for a2, b2, k2, c2 in right:
            key = (a1 + a2, b1 + b2, k1 + k2)
            acc[key] = acc.get(key, 0) + c1 * c2


def _finish(acc: dict, ring: Truncation) -> list:
    if ring.caps is None:
        return [(a, b, k, c) for (a, b, k), c in acc.items() if c != 0]
    return [(a, b, k, c) for (a, b, k), c in acc.items() if c != 0 and ring.admits(k)]


def _mul_parts(f: list, g: list, ring: Truncation, maxdeg: int) -> list[list]:
    out = []
    for d in range(maxdeg + 1):
        acc: dict = {}
        for i in range(d + 1):
            if i < len(f) and d - i < len(g) and f[i] and g[d - i]:
                _mul_into(acc, f[i], g[d - i])
        out.append(_finish(acc, ring))
    return out


def _check_unit(parts: list, what: str) -> None:
    head = parts[0] if parts else []
    if len(head) != 1 or head[0][:3] != (0, 0, 0) or head[0][3] != 1:
        raise NonUnitError(f"{what} needs constant part exactly 1")


def _inverse_parts(f: list, ring: Truncation, maxdeg: int) -> list[list]:
    _check_unit(f, "inverse")
    h = [[(0, 0, 0, mpq(1))]]
    for d in range(1, maxdeg + 1):
        acc: dict = {}
        for i in range(1, d + 1):
            if i < len(f) and f[i] and h[d - i]:
                _mul_into(acc, f[i], h[d - i])
        h.append([(a, b, k, -c) for a, b, k, c in _finish(acc, ring)])
    return h


def _exp_parts(s: list, ring: Truncation, maxdeg: int) -> list[list]:
    if s and s[0]:
        raise NonUnitError("exp needs a series without constant (degree 0) part")
    e = [[(0, 0, 0, mpq(1))]]
    for d in range(1, maxdeg + 1):
        acc: dict = {}
        for i in range(1, d + 1):
            if i < len(s) and s[i] and e[d - i]:
                _mul_into(acc, s[i], e[d - i], scale=i)
        inv_d = mpq(1, d)
        e.append([(a, b, k, c * inv_d) for a, b, k, c in _finish(acc, ring)])
    return e


def _log_parts(f: list, ring: Truncation, maxdeg: int) -> list[list]:
    # d L_d = d f_d - sum_{i<d} i L_i f_{d-i}
    _check_unit(f, "log")
    logs = [[]]
    for d in range(1, maxdeg + 1):
        acc: dict = {}
        if d < len(f):
            for a, b, k, c in f[d]:
                acc[(a, b, k)] = c * d
        for i in range(1, d):
            if logs[i] and d - i < len(f) and f[d - i]:
                _mul_into(acc, logs[i], f[d - i], scale=-i)
        inv_d = mpq(1, d)
        logs.append([(a, b, k, c * inv_d) for a, b, k, c in _finish(acc, ring)])
    return logs


def _terms_of(parts: list) -> dict:
    return {(a, b, k): c for part in parts for a, b, k, c in part}


def _substitute_parts(f: list, log_u: list, log_v: list, ring: Truncation, maxdeg: int) -> list[list]:
    """Image of ``f`` under x -> x*exp(log_u), y -> y*exp(log_v)."""
    by_lattice: dict[tuple[int, int], list] = {}
    for d, part in enumerate(f[: maxdeg + 1]):
        for a, b, k, c in part:
            by_lattice.setdefault((a, b), []).append((d, k, c))
    out_acc: list[dict] = [dict() for _ in range(maxdeg + 1)]
    for (a, b), items in sorted(by_lattice.items()):
        low = min(d for d, _, _ in items)
        room = maxdeg - low
        if a == 0 and b == 0:
            factor = [[(0, 0, 0, mpq(1))]]
        else:
            gen = _lin_comb(log_u, a, log_v, b, room)
            factor = _exp_parts(gen, ring, room)
        for d, k, c in items:
            for e in range(0, maxdeg - d + 1):
                if e >= len(factor):
                    break
                acc = out_acc[d + e]
                for a2, b2, k2, c2 in factor[e]:
                    key = (a + a2, b + b2, k + k2)
                    acc[key] = acc.get(key, 0) + c * c2
    return [_finish(acc, ring) for acc in out_acc]


def _lin_comb(p: list, s: int, q: list, r: int, maxdeg: int) -> list[list]:
    out = []
    for d in range(maxdeg + 1):
        acc: dict = {}
        if s and d < len(p):
            for a, b, k, c in p[d]:
                acc[(a, b, k)] = acc.get((a, b, k), 0) + s * c
        if r and d < len(q):
            for a, b, k, c in q[d]:
                acc[(a, b, k)] = acc.get((a, b, k), 0) + r * c
        out.append([(a, b, k, c) for (a, b, k), c in acc.items() if c != 0])
    return out


class TruncatedSeries:
    """Immutable exact series; see the module docstring for the layout."""

    __slots__ = ("ring", "_terms", "_parts", "_hash")

    def __init__(self, ring: Truncation, terms: Mapping | None = None):
        self.ring = ring
        clean = {}
        if terms:
            for key, c in terms.items():
                c = to_mpq(c)
                if c == 0:
                    continue
                a, b, code = key
                if not ring.admits(code):
                    continue
                clean[(int(a), int(b), int(code))] = c
        self._terms = clean
        self._parts = None
        self._hash = None

    @classmethod
    def _raw(cls, ring: Truncation, terms: dict) -> "TruncatedSeries":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._terms = terms
        obj._parts = None
        obj._hash = None
        return obj

    @classmethod
    def _from_parts(cls, ring: Truncation, parts: list) -> "TruncatedSeries":
        return cls._raw(ring, _terms_of(parts))

    # -- inspection ---------------------------------------------------------
    @property
    def order(self) -> int:
        return self.ring.order

    @property
    def terms(self) -> dict:
        """Copy of the term map ``{(a, b, param_exponents): coeff}``."""
        dec = self.ring.decode
        return {(a, b, dec(k)): c for (a, b, k), c in self._terms.items()}

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def parts(self, maxdeg: int | None = None) -> list[list]:
        if maxdeg is None or maxdeg >= self.ring.order:
            if self._parts is None:
                self._parts = _parts_of(self._terms, self.ring, self.ring.order)
            return self._parts
        return _parts_of(self._terms, self.ring, maxdeg)

    def coeff(self, a: int = 0, b: int = 0, params=None) -> mpq:
        code = 0 if not params else self.ring.encode(params)
        return self._terms.get((a, b, code), mpq(0))

    def constant_term(self) -> mpq:
        return self._terms.get((0, 0, 0), mpq(0))

    def min_degree(self) -> int | None:
        if not self._terms:
            return None
        return min(self.ring.degree(k) for (_, _, k) in self._terms)

    def is_unit(self) -> bool:
        head = [key for key in self._terms if self.ring.degree(key[2]) == 0]
        return head == [(0, 0, 0)] and self._terms[(0, 0, 0)] == 1

    def degree_part(self, d: int) -> "TruncatedSeries":
        deg = self.ring.degree
        return TruncatedSeries._raw(self.ring, {k: c for k, c in self._terms.items() if deg(k[2]) == d})

    def truncated(self, maxdeg: int) -> "TruncatedSeries":
        """Drop terms of parameter degree above ``maxdeg`` (same ring)."""
        deg = self.ring.degree
        return TruncatedSeries._raw(self.ring, {k: c for k, c in self._terms.items() if deg(k[2]) <= maxdeg})

    def lattice_support(self) -> set[tuple[int, int]]:
        return {(a, b) for (a, b, _) in self._terms}

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            if not self.ring.compatible(other.ring):
                raise ConfigurationError(
                    f"cannot combine series over {self.ring.params}/N={self.ring.order}/caps={self.ring.caps} "
                    f"and {other.ring.params}/N={other.ring.order}/caps={other.ring.caps}"
                )
            return other
        return TruncatedSeries(self.ring, {(0, 0, 0): to_mpq(other)})

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if v == 0:
                out.pop(k, None)
            else:
                out[k] = v
        return TruncatedSeries._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw(self.ring, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "TruncatedSeries":
        c = to_mpq(c)
        if c == 0:
            return self.ring.zero()
        return TruncatedSeries._raw(self.ring, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        other = self._coerce(other)
        n = self.ring.order
        return TruncatedSeries._from_parts(self.ring, _mul_parts(self.parts(), other.parts(), self.ring, n))

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.inverse()
        return self.scale(1 / to_mpq(other))

    def shift(self, a: int, b: int, params=None) -> "TruncatedSeries":
        """Multiply by the monomial ``x^a y^b t^params``."""
        if params:
            return self * self.ring.monomial(a, b, params)
        return TruncatedSeries._raw(self.ring, {(i + a, j + b, k): c for (i, j, k), c in self._terms.items()})

    def inverse(self) -> "TruncatedSeries":
        n = self.ring.order
        return TruncatedSeries._from_parts(self.ring, _inverse_parts(self.parts(), self.ring, n))

    def log(self) -> "TruncatedSeries":
        n = self.ring.order
        return TruncatedSeries._from_parts(self.ring, _log_parts(self.parts(), self.ring, n))

    def exp(self) -> "TruncatedSeries":
        n = self.ring.order
        return TruncatedSeries._from_parts(self.ring, _exp_parts(self.parts(), self.ring, n))

    def pow(self, r) -> "TruncatedSeries":
        """``self ** r`` for integer or rational ``r``.

        Integers go through repeated squaring; other rationals through
        ``exp(r * log(self))`` and need a unit.
        """
        r = to_mpq(r)
        if r.denominator == 1:
            e = int(r)
            base = self
            if e < 0:
                base, e = self.inverse(), -e
            result = self.ring.one()
            while e:
                if e & 1:
                    result = result * base
                e >>= 1
                if e:
                    base = base * base
            return result
        if not self.is_unit():
            raise NonUnitError("rational powers need a unit series")
        return (self.log() * r).exp()

    def __pow__(self, r):
        return self.pow(r)

    def substitute(self, image_x: "TruncatedSeries", image_y: "TruncatedSeries") -> "TruncatedSeries":
        """Apply the ring map ``x -> image_x, y -> image_y`` (parameters fixed).

        Both images must be of the form ``x * unit`` and ``y * unit``.
        """
        image_x, image_y = self._coerce(image_x), self._coerce(image_y)
        ux, uy = image_x.shift(-1, 0), image_y.shift(0, -1)
        if not ux.is_unit() or not uy.is_unit():
            raise NonUnitError("substitution images must be x*(unit) and y*(unit)")
        return self.substitute_logs(ux.log(), uy.log())

    def substitute_logs(self, log_ux: "TruncatedSeries", log_uy: "TruncatedSeries", maxdeg: int | None = None):
        """Like :meth:`substitute`, with the images given as ``x*exp(log_ux)``, ``y*exp(log_uy)``."""
        n = self.ring.order if maxdeg is None else maxdeg
        parts = _substitute_parts(self.parts(n), log_ux.parts(n), log_uy.parts(n), self.ring, n)
        return TruncatedSeries._from_parts(self.ring, parts)

    def specialize(self, assignment: Mapping[str, str]) -> "TruncatedSeries":
        """Rename parameters, merging those sent to the same name."""
        missing = [p for p in self.ring.params if p not in assignment]
        if missing:
            raise ConfigurationError(f"assignment does not cover parameters {missing}")
        if self.ring.caps is not None:
            raise ConfigurationError("cannot specialize a ring with per-parameter caps")
        targets: list[str] = []
        for p in self.ring.params:
            if assignment[p] not in targets:
                targets.append(assignment[p])
        new_ring = Truncation(tuple(targets), self.ring.order)
        index = [targets.index(assignment[p]) for p in self.ring.params]
        memo: dict[int, int] = {}
        out: dict = {}
        for (a, b, k), c in self._terms.items():
            nk = memo.get(k)
            if nk is None:
                exps = [0] * len(targets)
                for i, e in zip(index, self.ring.decode(k)):
                    exps[i] += e
                nk = memo[k] = new_ring.encode(exps)
            key = (a, b, nk)
            out[key] = out.get(key, 0) + c
        return TruncatedSeries(new_ring, out)

    def map_lattice(self, matrix) -> "TruncatedSeries":
        """Send ``x^a y^b`` to ``z^(matrix @ (a, b))`` (integer 2x2 matrix, rows)."""
        (p, q), (r, s) = matrix
        return TruncatedSeries._raw(
            self.ring, {(p * a + q * b, r * a + s * b, k): c for (a, b, k), c in self._terms.items()}
        )

    def with_ring(self, ring: Truncation) -> "TruncatedSeries":
        """Reinterpret in a ring with the same parameters (drops terms it cannot hold)."""
        if ring.params != self.ring.params:
            raise ConfigurationError("with_ring keeps the parameter list")
        if ring.order == self.ring.order:
            return TruncatedSeries(ring, self._terms)
        dec, enc = self.ring.decode, ring.encode
        out = {}
        for (a, b, k), c in self._terms.items():
            exps = dec(k)
            if sum(exps) <= ring.order:
                out[(a, b, enc(exps))] = c
        return TruncatedSeries(ring, out)

    # -- comparison / text ----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.ring.compatible(other.ring) and self._terms == other._terms
        if isinstance(other, (int, Fraction)) or type(other).__name__ == "mpq":
            return self._terms == ({(0, 0, 0): to_mpq(other)} if other != 0 else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.params, self.ring.order, self.ring.caps, frozenset(self._terms.items())))
        return self._hash

    def sorted_terms(self):
        deg, dec = self.ring.degree, self.ring.decode
        return sorted(self._terms.items(), key=lambda kv: (deg(kv[0][2]), dec(kv[0][2]), kv[0][0], kv[0][1]))

    def to_text(self) -> str:
        """Canonical text ``coeff * t^e x^a y^b + ...`` (``"0"`` for zero)."""
        if not self._terms:
            return "0"
        pieces = []
        for (a, b, k), c in self.sorted_terms():
            factors = [f"{p}^{e}" for p, e in zip(self.ring.params, self.ring.decode(k)) if e]
            if a:
                factors.append(f"x^{a}")
            if b:
                factors.append(f"y^{b}")
            head = format_rational(c)
            pieces.append(head if not factors else head + " * " + " ".join(factors))
        return " + ".join(pieces)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"TruncatedSeries(N={self.ring.order}, {self.to_text()})"


def parse_series(text: str, ring: Truncation) -> TruncatedSeries:
    """Inverse of :meth:`TruncatedSeries.to_text`."""
    text = text.strip()
    if text == "0":
        return ring.zero()
    terms: dict = {}
    for piece in text.split(" + "):
        head, _, rest = piece.partition(" * ")
        c = to_mpq(head)
        a = b = 0
        exps = dict.fromkeys(ring.params, 0)
        for tok in rest.split():
            name, _, e = tok.rpartition("^")
            if name == "x":
                a = int(e)
            elif name == "y":
                b = int(e)
            elif name in exps:
                exps[name] = int(e)
            else:
                raise ValueError(f"unknown symbol {name!r} in {piece!r}")
        key = (a, b, ring.encode(exps))
        terms[key] = terms.get(key, 0) + c
    return TruncatedSeries(ring, terms)
