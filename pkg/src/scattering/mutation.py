"""Mutations of directions and slopes, the dense region, and the non-vanishing classification."""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .series import is_primitive

__all__ = [
    "Verdict",
    "RegionVerdict",
    "OrbitSearchError",
    "mutate1",
    "mutate2",
    "slope_mutate1",
    "slope_mutate2",
    "slope",
    "quadratic_form",
    "in_dense_region",
    "on_dense_boundary",
    "boundary_slopes",
    "is_degenerate_ray",
    "alpha_beta",
    "orbit_witness",
    "classify",
    "ClassificationReport",
    "verify_classification",
    "InvarianceReport",
    "verify_mutation_invariance",
]


class OrbitSearchError(RuntimeError):
    """Orbit search hit its depth cap."""


def mutate1(v: tuple[int, int], mu: int, nu: int) -> tuple[int, int]:
    a, b = v
    return (mu * b - a, b) if b > 0 else (a, b)


def mutate2(v: tuple[int, int], mu: int, nu: int) -> tuple[int, int]:
    a, b = v
    return (a, nu * a - b) if a > 0 else (a, b)


def slope(v: tuple[int, int]) -> Fraction:
    a, b = v
    if a == 0:
        raise ZeroDivisionError("vertical direction has no finite slope")
    return Fraction(b, a)


def slope_mutate1(rho, mu: int) -> Fraction:
    """``1 / (mu - 1/rho)``; slope of ``T1`` applied to a vector of slope ``rho``."""
    rho = Fraction(rho)
    if rho <= 0:
        raise ValueError("slope must be positive")
    denom = mu - 1 / rho
    if denom == 0:
        raise ZeroDivisionError(f"T1 has a pole at slope 1/{mu}")
    return 1 / denom


def slope_mutate2(rho, nu: int) -> Fraction:
    rho = Fraction(rho)
    if rho <= 0:
        raise ValueError("slope must be positive")
    return nu - rho


def quadratic_form(a: int, b: int, mu: int, nu: int) -> int:
    """``mu b^2 - mu nu a b + nu a^2``; negative exactly between the boundary slopes."""
    return mu * b * b - mu * nu * a * b + nu * a * a


def in_dense_region(a: int, b: int, mu: int, nu: int) -> bool:
    return mu * nu > 4 and quadratic_form(a, b, mu, nu) < 0


def on_dense_boundary(a: int, b: int, mu: int, nu: int) -> bool:
    return mu * nu > 4 and quadratic_form(a, b, mu, nu) == 0


def boundary_slopes(mu: int, nu: int) -> tuple[float, float] | None:
    """Approximate ``rho_-``, ``rho_+`` (for drawing only; all decisions use :func:`quadratic_form`)."""
    if mu * nu < 4 or mu == 0:
        return None
    root = math.sqrt(mu * nu * (mu * nu - 4))
    return (mu * nu - root) / (2 * mu), (mu * nu + root) / (2 * mu)


def is_degenerate_ray(a: int, b: int, mu: int, nu: int) -> bool:
    """Ray of slope ``nu/2`` when ``mu nu = 4``, where both boundary slopes meet."""
    return mu * nu == 4 and 2 * b == nu * a


def alpha_beta(mu: int, nu: int, n: int) -> tuple[list[Fraction], list[Fraction | None]]:
    """Slopes ``alpha_0..alpha_n`` (from below) and ``beta_0..beta_n`` (from above).

    ``alpha_0 = 0``, ``beta_0 = infinity`` (``None``), and
    ``alpha_{k+1} = T1(beta_k)``, ``beta_{k+1} = T2(alpha_k)``; these are the
    slopes of the mutation orbits of ``(0, 1)`` and ``(1, 0)``.
    """
    alphas: list[Fraction] = [Fraction(0)]
    betas: list[Fraction | None] = [None]
    for _ in range(n):
        beta = betas[-1]
        alpha = alphas[-1]
        next_alpha = Fraction(1, mu) if beta is None else slope_mutate1(beta, mu)
        next_beta = Fraction(nu) if alpha == 0 else slope_mutate2(alpha, nu)
        alphas.append(next_alpha)
        betas.append(next_beta)
    return alphas, betas


class Verdict(enum.Enum):
    DENSE = "Dense"
    MUTATION_ORBIT = "MutationOrbit"
    PREDICTED_ZERO = "PredictedZero"
    BOUNDARY = "Boundary"


@dataclass(frozen=True)
class RegionVerdict:
    kind: Verdict
    mu: int
    nu: int
    direction: tuple[int, int]
    witness: tuple[str, ...] = ()
    start: tuple[int, int] | None = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value, "mu": self.mu, "nu": self.nu, "direction": list(self.direction)}
        if self.kind is Verdict.MUTATION_ORBIT:
            out["start"] = list(self.start)
            out["witness"] = list(self.witness)
        return out

    def __str__(self):
        if self.kind is Verdict.MUTATION_ORBIT:
            return f"{self.kind.value} [{', '.join(self.witness)}] from {self.start}"
        return self.kind.value


def orbit_witness(a: int, b: int, mu: int, nu: int, depth_cap: int | None = None):
    """Shortest ``(start, labels)`` reaching ``(a, b)`` from ``(1,0)``/``(0,1)``, or ``None``.

    Labels are listed in application order.  Vectors leaving the closed
    quadrant are dropped; when ``mu nu >= 4`` the orbit grows along each
    branch, so vectors with larger ``a + b`` than the target are dropped too.
    """
    target = (a, b)
    cap = depth_cap if depth_cap is not None else max(64, 2 * (a + b))
    prune = mu * nu >= 4
    queue = deque()
    seen = set()
    for start in ((1, 0), (0, 1)):
        queue.append((start, start, ()))
        seen.add(start)
    while queue:
        v, start, labels = queue.popleft()
        if v == target:
            return start, labels
        if len(labels) >= cap:
            raise OrbitSearchError(f"orbit search for {target} exceeded depth {cap}")
        for name, op in (("T1", mutate1), ("T2", mutate2)):
            w = op(v, mu, nu)
            if w == v or w[0] < 0 or w[1] < 0 or w in seen:
                continue
            if prune and sum(w) > sum(target):
                continue
            seen.add(w)
            queue.append((w, start, labels + (name,)))
    return None


def classify(a: int, b: int, mu: int, nu: int) -> RegionVerdict:
    if a < 0 or b < 0 or (a, b) == (0, 0):
        raise ValueError("direction must be a nonzero vector with non-negative entries")
    v = (a, b)
    if a > 0 and b > 0:
        if in_dense_region(a, b, mu, nu):
            return RegionVerdict(Verdict.DENSE, mu, nu, v)
        if on_dense_boundary(a, b, mu, nu) or is_degenerate_ray(a, b, mu, nu):
            return RegionVerdict(Verdict.BOUNDARY, mu, nu, v)
    found = orbit_witness(a, b, mu, nu)
    if found is not None:
        start, labels = found
        return RegionVerdict(Verdict.MUTATION_ORBIT, mu, nu, v, labels, start)
    return RegionVerdict(Verdict.PREDICTED_ZERO, mu, nu, v)


@dataclass
class ClassificationReport:
    mu: int
    nu: int
    order: int
    checked: int = 0
    counts: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    exempt: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_classification(table) -> ClassificationReport:
    """Compare every verdict with the table entry; violations are collected, not raised."""
    mu, nu = table.mu, table.nu
    report = ClassificationReport(mu, nu, table.order)
    for a, b in table.keys():
        c = table[(a, b)]
        verdict = classify(a, b, mu, nu)
        report.checked += 1
        report.counts[verdict.kind.value] = report.counts.get(verdict.kind.value, 0) + 1
        kind = verdict.kind
        if kind is Verdict.BOUNDARY:
            report.exempt[(a, b)] = c
        elif kind is Verdict.DENSE and c == 0:
            report.violations.append(((a, b), kind.value, c))
        elif kind is Verdict.MUTATION_ORBIT and (c == 0 or not is_primitive(a, b)):
            report.violations.append(((a, b), kind.value, c))
        elif kind is Verdict.PREDICTED_ZERO and c != 0:
            report.violations.append(((a, b), kind.value, c))
    return report


@dataclass
class InvarianceReport:
    mu: int
    nu: int
    order: int
    pairs: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def verify_mutation_invariance(table, max_sum: int | None = None) -> InvarianceReport:
    """Factor exponents of ``f_m`` and ``f_{T_i(m)}`` agree wherever both are in range.

    Only pairs with ``m`` and ``T_i(m)`` in the open quadrant and both of
    total degree at most ``max_sum`` (default: the table order) are used;
    along each pair the multiples ``k`` visible on both sides are compared.
    """
    mu, nu = table.mu, table.nu
    limit = table.order if max_sum is None else min(max_sum, table.order)
    report = InvarianceReport(mu, nu, limit)
    for s in range(2, limit + 1):
        for a in range(1, s):
            m = (a, s - a)
            if not is_primitive(*m):
                continue
            for name, op in (("T1", mutate1), ("T2", mutate2)):
                w = op(m, mu, nu)
                if w == m or w[0] <= 0 or w[1] <= 0 or sum(w) > limit:
                    continue
                kmax = limit // max(sum(m), sum(w))
                left = [table[(k * m[0], k * m[1])] for k in range(1, kmax + 1)]
                right = [table[(k * w[0], k * w[1])] for k in range(1, kmax + 1)]
                report.pairs.append((m, name, w))
                if left != right:
                    report.mismatches.append((m, name, w, left, right))
    return report
