"""Coefficients as polynomials in (mu, nu): exact interpolation and the binomial basis."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Mapping

from gmpy2 import mpq

from .series import format_rational, to_mpq
from .standard import TableCache, coefficients

__all__ = [
    "InterpolationError",
    "MuNuPolynomial",
    "BinomialExpansion",
    "VanishingReport",
    "interpolate",
    "interpolate_values",
    "to_binomial_basis",
    "from_binomial",
    "verify_vanishing",
]


class InterpolationError(ArithmeticError):
    """An off-grid check or the binomial box condition failed."""


def _poly_mul(p: list, q: list) -> list:
    out = [mpq(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _lagrange_basis(n: int) -> list[list]:
    """Coefficient lists of the Lagrange basis on the nodes ``0..n``."""
    basis = []
    for i in range(n + 1):
        poly = [mpq(1)]
        denom = mpq(1)
        for j in range(n + 1):
            if j != i:
                poly = _poly_mul(poly, [mpq(-j), mpq(1)])
                denom *= i - j
        basis.append([c / denom for c in poly])
    return basis


def _binomial_poly(k: int) -> list:
    """Coefficient list of ``C(x, k)``."""
    poly = [mpq(1)]
    for j in range(k):
        poly = _poly_mul(poly, [mpq(-j), mpq(1)])
    return [c / math.factorial(k) for c in poly]


_TERM = re.compile(r"([+-]?)\s*([0-9]+(?:/[0-9]+)?)?\s*\*?\s*((?:mu|nu)(?:\^[0-9]+)?(?:\s*\*?\s*(?:mu|nu)(?:\^[0-9]+)?)?)?")


@dataclass(frozen=True)
class MuNuPolynomial:
    """``sum coeffs[(i, j)] * mu^i * nu^j`` with exact rational coefficients."""

    coeffs: Mapping[tuple[int, int], mpq] = field(default_factory=dict)

    def __post_init__(self):
        clean = {(int(i), int(j)): to_mpq(c) for (i, j), c in self.coeffs.items() if c != 0}
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @property
    def degrees(self) -> tuple[int, int]:
        if not self.coeffs:
            return (0, 0)
        return max(i for i, _ in self.coeffs), max(j for _, j in self.coeffs)

    def __call__(self, mu, nu) -> mpq:
        mu, nu = to_mpq(mu), to_mpq(nu)
        return sum((c * mu ** i * nu ** j for (i, j), c in self.coeffs.items()), mpq(0))

    def swapped(self) -> "MuNuPolynomial":
        return MuNuPolynomial({(j, i): c for (i, j), c in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, MuNuPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def ordered_terms(self) -> list[tuple[tuple[int, int], mpq]]:
        """Total degree descending, then mu-degree descending."""
        return sorted(self.coeffs.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0]))

    def to_text(self) -> str:
        if not self.coeffs:
            return "0"
        out = []
        for n, ((i, j), c) in enumerate(self.ordered_terms()):
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            mono = " ".join(s for s in (_power("mu", i), _power("nu", j)) if s)
            body = format_rational(mag) if not mono else (mono if mag == 1 else f"{format_rational(mag)} {mono}")
            if n == 0:
                out.append(body if sign == "+" else "-" + body)
            else:
                out.append(f"{sign} {body}")
        return " ".join(out)

    __str__ = to_text

    @classmethod
    def parse(cls, text: str) -> "MuNuPolynomial":
        """Read the format written by :meth:`to_text` (``*`` separators optional)."""
        s = text.replace("−", "-").strip()
        if s == "0":
            return cls({})
        coeffs: dict = {}
        pos = 0
        while pos < len(s):
            if s[pos].isspace():
                pos += 1
                continue
            m = _TERM.match(s, pos)
            if not m or m.end() == pos or not (m.group(2) or m.group(3)):
                raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
            sign, num, mono = m.groups()
            c = to_mpq(num) if num else mpq(1)
            if sign == "-":
                c = -c
            i = j = 0
            for var, exp in re.findall(r"(mu|nu)(?:\^([0-9]+))?", mono or ""):
                e = int(exp) if exp else 1
                if var == "mu":
                    i += e
                else:
                    j += e
            coeffs[(i, j)] = coeffs.get((i, j), 0) + c
            pos = m.end()
        return cls(coeffs)


def _power(var: str, e: int) -> str:
    if e == 0:
        return ""
    return var if e == 1 else f"{var}^{e}"


@dataclass(frozen=True)
class BinomialExpansion:
    """``lambda[(k, l)]`` with ``p(mu, nu) = sum lambda * C(mu, k) * C(nu, l)``."""

    a: int
    b: int
    lam: Mapping[tuple[int, int], mpq]

    def __getitem__(self, kl) -> mpq:
        return self.lam.get(tuple(kl), mpq(0))

    def nonzero(self) -> dict:
        return {k: v for k, v in self.lam.items() if v != 0}


def interpolate_values(value: Callable[[int, int], mpq], a: int, b: int) -> MuNuPolynomial:
    """Tensor-product Lagrange interpolation on ``mu in 0..a``, ``nu in 0..b``."""
    lx, ly = _lagrange_basis(a), _lagrange_basis(b)
    coeffs: dict = {}
    for m in range(a + 1):
        for n in range(b + 1):
            v = to_mpq(value(m, n))
            if v == 0:
                continue
            for i, ci in enumerate(lx[m]):
                if ci:
                    for j, cj in enumerate(ly[n]):
                        if cj:
                            coeffs[(i, j)] = coeffs.get((i, j), 0) + v * ci * cj
    return MuNuPolynomial(coeffs)


def interpolate(a: int, b: int, cache: TableCache | None = None, check_points=None) -> MuNuPolynomial:
    """Polynomial for ``c_{a,b}`` from the grid, checked at ``(a+1, b)`` and ``(a, b+1)``."""
    if a < 1 or b < 1:
        raise ValueError("a and b must be positive")
    order = a + b

    def value(mu: int, nu: int) -> mpq:
        return coefficients(mu, nu, order, cache)[(a, b)]

    poly = interpolate_values(value, a, b)
    for mu, nu in (check_points or ((a + 1, b), (a, b + 1))):
        if poly(mu, nu) != value(mu, nu):
            raise InterpolationError(
                f"interpolant for c_({a},{b}) gives {poly(mu, nu)} at {(mu, nu)}, table has {value(mu, nu)}"
            )
    return poly


def to_binomial_basis(p: MuNuPolynomial, a: int, b: int) -> BinomialExpansion:
    """Lambda coefficients by forward differences at the origin."""
    da, db = p.degrees
    if da > a or db > b:
        raise InterpolationError(f"polynomial of degrees {p.degrees} does not fit the box ({a}, {b})")
    grid = [[p(m, n) for n in range(b + 1)] for m in range(a + 1)]
    # difference in mu, then in nu; grid[k][l] becomes Delta^k Delta^l p(0, 0)
    for k in range(1, a + 1):
        for m in range(a, k - 1, -1):
            grid[m] = [x - y for x, y in zip(grid[m], grid[m - 1])]
    for row in grid:
        for l in range(1, b + 1):
            for n in range(b, l - 1, -1):
                row[n] = row[n] - row[n - 1]
    lam = {}
    for k in range(a + 1):
        for l in range(b + 1):
            v = grid[k][l]
            if v == 0:
                continue
            if k == 0 or l == 0:
                raise InterpolationError(f"nonzero lambda at {(k, l)} outside the index box")
            lam[(k, l)] = v
    return BinomialExpansion(a, b, lam)


def from_binomial(expansion: BinomialExpansion) -> MuNuPolynomial:
    coeffs: dict = {}
    for (k, l), v in expansion.lam.items():
        pk, pl = _binomial_poly(k), _binomial_poly(l)
        for i, ci in enumerate(pk):
            for j, cj in enumerate(pl):
                if ci and cj:
                    coeffs[(i, j)] = coeffs.get((i, j), 0) + v * ci * cj
    return MuNuPolynomial(coeffs)


@dataclass
class VanishingReport:
    a: int
    b: int
    lam: dict
    zero_cells: list
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_vanishing(a: int, b: int, cache: TableCache | None = None, poly: MuNuPolynomial | None = None) -> VanishingReport:
    """Check ``lambda >= 0``, ``lambda_{k,l} = 0`` where ``c^{k,l} = 0``, and ``lambda_{a,b} != 0``."""
    poly = interpolate(a, b, cache) if poly is None else poly
    exp = to_binomial_basis(poly, a, b)
    zeros, violations = [], []
    for k in range(1, a + 1):
        for l in range(1, b + 1):
            lam = exp[(k, l)]
            if lam < 0:
                violations.append(("negative", (k, l), lam))
            if coefficients(k, l, a + b, cache)[(a, b)] == 0:
                zeros.append((k, l))
                if lam != 0:
                    violations.append(("nonvanishing", (k, l), lam))
    if exp[(a, b)] == 0:
        violations.append(("top-vanishes", (a, b), mpq(0)))
    return VanishingReport(a, b, exp.nonzero(), zeros, violations)
