"""Self-check suites run by ``scattering verify``; each returns a list of named checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .diagram import factorize
from .gwquiver import (
    Partition,
    gw_aggregate,
    gw_number,
    partitions,
    unordered_coefficient,
    vanishing_report,
)
from .lattice import TwoLineProblem, complete_two_lines, transport, transported_diagram
from .mutation import verify_classification, verify_mutation_invariance
from .polyfit import interpolate, verify_vanishing
from .series import Truncation, format_rational, primitive_part
from .standard import TableCache, coefficients, default_cache

__all__ = ["Check", "SuiteResult", "SUITES", "run_suite"]


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class SuiteResult:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(ok), detail))

    def to_dict(self) -> dict:
        return {
            "schema": "scattering.verify/1",
            "suite": self.suite,
            "ok": self.ok,
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.checks],
        }


FIGURE_EXPONENTS = {
    (2, 3): {(1, 1): 6, (2, 2): 12, (2, 1): 3, (3, 2): 6, (4, 3): 14},
    (4, 4): {(1, 1): 16, (2, 2): 144, (2, 1): 24, (4, 2): 448, (3, 1): 16, (3, 2): 232, (4, 1): 4, (4, 3): 2812},
}

# (m1, m2, d1, d2) -> {point: exponent of the factor (1 + t^k z^point)}
LATTICE_FACTORS = {
    ((1, 0), (-1, 4), 1, 1): {(1, 12): 703, (1, 8): 58, (1, 4): 6, (2, 8): 112, (2, 4): 8, (3, 4): 1,
                              (0, 4): 16, (0, 8): 144, (1, 0): 1, (-1, 4): 1},
    ((3, 0), (0, 2), 1, 1): {(6, 6): 14, (12, 6): 14, (6, 2): 1, (3, 2): 1, (6, 4): 2, (9, 4): 1,
                             (9, 8): 6, (3, 0): 1, (0, 2): 1},
}


def _figures(cache: TableCache) -> SuiteResult:
    out = SuiteResult("figures")
    for (mu, nu), expected in FIGURE_EXPONENTS.items():
        table = coefficients(mu, nu, 8, cache)
        got = {ab: table[ab] for ab in expected}
        out.add(f"D^{{{mu},{nu}}} exponents at order 8", got == expected, _diff(got, expected))
    two = coefficients(2, 2, 16, cache)
    bad = []
    for n in range(1, 9):
        want = 4 if n in (1, 2, 4, 8) else 0
        if two[(n, n)] != want:
            bad.append(((n, n), two[(n, n)], want))
    for n in range(1, 8):
        for ab in ((n, n + 1), (n + 1, n)):
            if two[ab] != 2:
                bad.append((ab, two[ab], 2))
    out.add("D^{2,2} diagonal and near-diagonal at order 16", not bad, str(bad) if bad else "")
    return out


def _lattice_checks(out: SuiteResult, cache: TableCache, direct_order: int = 6) -> None:
    for (m1, m2, d1, d2), expected in LATTICE_FACTORS.items():
        p = TwoLineProblem(m1, m2, d1, d2)
        bad = []
        for point, c in expected.items():
            a, b = p.coordinates(point)
            order = int(a + b)
            f = transport(p, point, order, cache)
            direction, k = primitive_part(*point)
            got = factorize(f, direction).exponent(k, (int(a + b),))
            if got != c:
                bad.append((point, got, c))
        out.add(f"transported factors for lines {m1}, {m2}", not bad, str(bad) if bad else "")
        same = transported_diagram(p, direct_order, cache) == complete_two_lines(p, direct_order)
        out.add(f"transport equals direct completion for lines {m1}, {m2} at order {direct_order}", same)


def _diff(got: dict, expected: dict) -> str:
    wrong = {k: (format_rational(got[k]), v) for k, v in expected.items() if got[k] != v}
    return "" if not wrong else f"mismatch: {wrong}"


def _figures_suite(cache: TableCache) -> SuiteResult:
    out = _figures(cache)
    _lattice_checks(out, cache)
    return out


def _polynomials_suite(cache: TableCache) -> SuiteResult:
    out = SuiteResult("polynomials")
    bad = []
    for mu in range(6):
        for nu in range(6):
            table = coefficients(mu, nu, 7, cache)
            for k in range(1, 7):
                if table[(1, k)] != mu * math.comb(nu, k):
                    bad.append((mu, nu, k))
    out.add("c_{1,k} = mu C(nu, k) for mu, nu <= 5, k <= 6", not bad, str(bad) if bad else "")
    for b in range(1, 5):
        for a in range(1, b + 1):
            try:
                poly = interpolate(a, b, cache)
            except ArithmeticError as exc:
                out.add(f"c_{{{a},{b}}} interpolation", False, str(exc))
                continue
            mirror = interpolate(b, a, cache)
            out.add(f"c_{{{a},{b}}} interpolation and symmetry", mirror == poly.swapped(), poly.to_text())
            rep = verify_vanishing(a, b, cache, poly)
            out.add(f"c_{{{a},{b}}} binomial expansion", rep.ok, str(rep.violations) if rep.violations else "")
    return out


def _mutations_suite(cache: TableCache) -> SuiteResult:
    out = SuiteResult("mutations")
    for mu, nu in ((2, 2), (2, 3), (3, 3)):
        rep = verify_mutation_invariance(coefficients(mu, nu, 10, cache), 10)
        out.add(f"mutation invariance for ({mu},{nu}), a+b <= 10", rep.ok and bool(rep.pairs),
                f"{len(rep.pairs)} pairs" + (f", mismatches {rep.mismatches}" if rep.mismatches else ""))
    return out


CLASSIFICATION_CASES = ((1, 1, 10), (1, 2, 10), (2, 2, 16), (2, 3, 10), (3, 3, 10), (1, 5, 10))


def _classification_suite(cache: TableCache) -> SuiteResult:
    out = SuiteResult("classification")
    for mu, nu, order in CLASSIFICATION_CASES:
        table = coefficients(mu, nu, order, cache)
        rep = verify_classification(table)
        out.add(f"classification for ({mu},{nu}) at order {order}", rep.ok,
                f"{rep.checked} directions, counts {rep.counts}" + (f", violations {rep.violations}" if rep.violations else ""))
        bad = [d for d in table.scattered_directions() if not (nu * d[0] >= d[1] and mu * d[1] >= d[0])]
        out.add(f"slope bound for ({mu},{nu}) at order {order}", not bad, str(bad) if bad else "")
    return out


def _gw_suite(cache: TableCache) -> SuiteResult:
    out = SuiteResult("gw")
    P = Partition.parse
    zeros = {(p1, p2): gw_number(P(p1), P(p2)) for p1, p2 in (("3", "2+1"), ("3", "1+1+1"), ("2+1", "2+1"))}
    out.add("degree-3 vanishing cases", all(v == 0 for v in zeros.values()),
            ", ".join(f"N_{{{a},{b}}}={format_rational(v)}" for (a, b), v in zeros.items()))
    bad = []
    for s in range(2, 7):
        for a in range(1, s):
            b = s - a
            k = math.gcd(a, b)
            for p1 in partitions(a):
                for p2 in partitions(b):
                    if math.gcd(*(p1.parts + p2.parts)) != 1:
                        continue
                    n, c = gw_number(p1, p2), unordered_coefficient(p1, p2)
                    if n * k != c:
                        bad.append((str(p1), str(p2), n, c))
    out.add("coprime partitions: k N = c for a + b <= 6", not bad, str(bad) if bad else "")
    bad = []
    for mu, nu in ((1, 2), (2, 2), (2, 3), (3, 2)):
        for (a, b), kmax in (((1, 1), 3), ((1, 2), 2), ((2, 1), 2)):
            order = kmax * (a + b)
            ring = Truncation(("t",), order)
            rebuilt = ring.zero()
            for k in range(1, kmax + 1):
                try:
                    n = gw_aggregate(a, b, k, mu, nu, order, cache)
                except ArithmeticError as exc:
                    bad.append((mu, nu, (a, b), k, str(exc)))
                    continue
                rebuilt = rebuilt + ring.monomial(k * a, k * b, {"t": k * (a + b)}, n * k)
            log_f = coefficients(mu, nu, order, cache).diagram.log_function((a, b))
            if rebuilt != log_f:
                bad.append((mu, nu, (a, b), "log f"))
    out.add("inversion round trip rebuilds log f", not bad, str(bad) if bad else "")
    rep = vanishing_report(3, 3, 2, 2, cache=cache)
    out.add("vanishing for c_{3,3}^{2,2} = 0", rep.ok and rep.c == 0, f"{len(rep.checked)} coprime pairs")
    return out


SUITES = {
    "figures": _figures_suite,
    "polynomials": _polynomials_suite,
    "mutations": _mutations_suite,
    "classification": _classification_suite,
    "gw": _gw_suite,
}


def run_suite(name: str, cache: TableCache | None = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](default_cache() if cache is None else cache)
