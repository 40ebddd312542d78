import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from scattering.mutation import (
    OrbitSearchError,
    Verdict,
    alpha_beta,
    boundary_slopes,
    classify,
    in_dense_region,
    is_degenerate_ray,
    mutate1,
    mutate2,
    on_dense_boundary,
    orbit_witness,
    quadratic_form,
    slope,
    slope_mutate1,
    slope_mutate2,
    verify_classification,
    verify_mutation_invariance,
)
from scattering.standard import coefficients


def test_mutation_examples():
    assert mutate1((0, 1), 2, 2) == (2, 1)
    assert mutate2((1, 1), 1, 1) == (1, 0)
    assert mutate1((5, 0), 3, 4) == (5, 0)
    assert mutate2((0, 7), 3, 4) == (0, 7)


@given(st.integers(1, 20), st.integers(1, 20), st.integers(1, 5), st.integers(1, 5))
def test_mutations_are_involutions(a, b, mu, nu):
    assert mutate1(mutate1((a, b), mu, nu), mu, nu) == (a, b)
    assert mutate2(mutate2((a, b), mu, nu), mu, nu) == (a, b)


@given(st.integers(1, 20), st.integers(1, 20), st.integers(1, 5), st.integers(1, 5))
def test_slope_action_conjugates(a, b, mu, nu):
    w = mutate2((a, b), mu, nu)
    assert slope(w) == slope_mutate2(Fraction(b, a), nu)
    w = mutate1((a, b), mu, nu)
    if w[0] != 0:
        assert slope(w) == slope_mutate1(Fraction(b, a), mu)


def test_fixed_points():
    for mu in range(1, 6):
        assert slope_mutate1(Fraction(2, mu), mu) == Fraction(2, mu)
    for nu in range(1, 6):
        assert slope_mutate2(Fraction(nu, 2), nu) == Fraction(nu, 2)
    with pytest.raises(ZeroDivisionError):
        slope_mutate1(Fraction(1, 3), 3)
    with pytest.raises(ValueError):
        slope_mutate2(0, 2)


def test_boundary_slopes_are_swapped():
    # rho satisfies mu rho^2 - mu nu rho + nu = 0; the quadratic form is preserved by both mutations
    for mu, nu in ((3, 3), (2, 5), (1, 6), (4, 4)):
        for a in range(1, 8):
            for b in range(1, 8):
                q = quadratic_form(a, b, mu, nu)
                assert quadratic_form(*mutate1((a, b), mu, nu), mu, nu) == q
                assert quadratic_form(*mutate2((a, b), mu, nu), mu, nu) == q
        lo, hi = boundary_slopes(mu, nu)
        assert abs(float(slope_mutate2(Fraction(lo), nu)) - hi) < 1e-9


def test_order_reversing():
    mu, nu = 3, 3
    pts = [Fraction(k, 10) for k in range(4, 30)]
    vals1 = [slope_mutate1(p, mu) for p in pts]
    vals2 = [slope_mutate2(p, nu) for p in pts]
    assert all(x > y for x, y in zip(vals1, vals1[1:]))
    assert all(x > y for x, y in zip(vals2, vals2[1:]))


def test_dense_region_examples():
    assert in_dense_region(1, 1, 3, 3)
    assert not any(in_dense_region(a, b, 2, 2) for a in range(1, 9) for b in range(1, 9))
    assert quadratic_form(1, 3, 1, 5) == -1 and in_dense_region(1, 3, 1, 5)
    assert quadratic_form(5, 4, 3, 3) == -57 and in_dense_region(5, 4, 3, 3)


@given(st.integers(1, 15), st.integers(1, 15), st.integers(1, 5), st.integers(1, 5), st.integers(1, 4))
def test_dense_region_scale_invariant(a, b, mu, nu, k):
    assert in_dense_region(a, b, mu, nu) == in_dense_region(k * a, k * b, mu, nu)


def test_boundary_cases():
    assert not on_dense_boundary(1, 1, 3, 3)
    assert is_degenerate_ray(1, 1, 2, 2) and is_degenerate_ray(2, 2, 2, 2)
    assert is_degenerate_ray(1, 2, 1, 4) and not is_degenerate_ray(1, 1, 1, 4)


def test_boundary_slopes_are_never_rational_when_dense():
    # n (n - 4) is a square only for n = 4, so the dense boundary contains no lattice points
    assert [n for n in range(5, 2000) if math.isqrt(n * (n - 4)) ** 2 == n * (n - 4)] == []
    assert not any(on_dense_boundary(a, b, mu, nu) for mu in range(1, 6) for nu in range(1, 6)
                   for a in range(1, 12) for b in range(1, 12))


def test_classify_examples():
    v = classify(2, 1, 2, 2)
    assert v.kind is Verdict.MUTATION_ORBIT and v.witness == ("T1",) and v.start == (0, 1)
    assert str(v) == "MutationOrbit [T1] from (0, 1)"
    assert classify(3, 1, 1, 1).kind is Verdict.PREDICTED_ZERO
    assert classify(5, 4, 3, 3).kind is Verdict.DENSE
    assert classify(3, 3, 2, 2).kind is Verdict.BOUNDARY
    assert classify(1, 0, 2, 2).kind is Verdict.MUTATION_ORBIT
    with pytest.raises(ValueError):
        classify(0, 0, 1, 1)


def test_verdict_to_dict():
    assert classify(1, 2, 2, 2).to_dict() == {
        "kind": "MutationOrbit", "mu": 2, "nu": 2, "direction": [1, 2], "start": [1, 0], "witness": ["T2"],
    }
    assert classify(2, 2, 3, 3).to_dict() == {"kind": "Dense", "mu": 3, "nu": 3, "direction": [2, 2]}


def test_witness_reproduces_target():
    for mu, nu in ((2, 2), (1, 3), (2, 3), (1, 4), (3, 3)):
        for a in range(1, 9):
            for b in range(1, 9):
                found = orbit_witness(a, b, mu, nu)
                if found is None:
                    continue
                v, labels = found
                for name in labels:
                    v = (mutate1 if name == "T1" else mutate2)(v, mu, nu)
                assert v == (a, b)


def _unpruned_orbit(mu, nu, limit, depth=14):
    seen = {(1, 0), (0, 1)}
    frontier = list(seen)
    for _ in range(depth):
        nxt = []
        for v in frontier:
            for op in (mutate1, mutate2):
                w = op(v, mu, nu)
                if w[0] >= 0 and w[1] >= 0 and w not in seen and sum(w) <= 4 * limit:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return {v for v in seen if sum(v) <= limit}


def test_pruned_search_matches_unpruned_enumeration():
    limit = 14
    for mu, nu in ((1, 1), (1, 2), (2, 2), (1, 4), (2, 3), (3, 3), (1, 5)):
        orbit = _unpruned_orbit(mu, nu, limit)
        for a in range(0, limit + 1):
            for b in range(0, limit + 1 - a):
                if (a, b) == (0, 0):
                    continue
                assert (orbit_witness(a, b, mu, nu) is not None) == ((a, b) in orbit), (mu, nu, a, b)


def test_depth_cap():
    with pytest.raises(OrbitSearchError):
        orbit_witness(8, 3, 3, 3, depth_cap=1)


@pytest.mark.parametrize("mu,nu", [(2, 2), (2, 3), (3, 3), (1, 5), (3, 4)])
def test_alpha_beta_monotone(mu, nu):
    alphas, betas = alpha_beta(mu, nu, 20)
    assert alphas[0] == 0 and betas[0] is None
    assert all(x < y for x, y in zip(alphas, alphas[1:]))
    finite = betas[1:]
    assert all(x > y for x, y in zip(finite, finite[1:]))
    if mu * nu > 4:
        # every slope stays outside the dense region: the quadratic form is positive
        assert all(quadratic_form(r.denominator, r.numerator, mu, nu) > 0 for r in alphas[1:] + finite)


def test_alpha_beta_are_orbit_slopes():
    alphas, betas = alpha_beta(2, 3, 6)
    assert alphas[:3] == [0, Fraction(1, 2), Fraction(3, 5)]
    assert betas[:3] == [None, 3, Fraction(5, 2)]
    assert slope(mutate1((0, 1), 2, 3)) == alphas[1]
    assert slope(mutate1(mutate2((1, 0), 2, 3), 2, 3)) == alphas[2]


@pytest.mark.parametrize("mu,nu,order", [(1, 1, 10), (1, 2, 10), (2, 2, 16), (2, 3, 10), (3, 3, 10), (1, 5, 10),
                                         (1, 4, 12), (2, 1, 10), (4, 1, 10)])
def test_classification_has_no_violations(mu, nu, order, cache):
    rep = verify_classification(coefficients(mu, nu, order, cache))
    assert rep.ok, rep.violations
    assert rep.checked == sum(s - 1 for s in range(2, order + 1))


def test_two_two_exempt_diagonal(cache):
    rep = verify_classification(coefficients(2, 2, 16, cache))
    assert {k: v for k, v in rep.exempt.items() if v} == {(1, 1): 4, (2, 2): 4, (4, 4): 4, (8, 8): 4}


@pytest.mark.parametrize("mu,nu", [(2, 2), (2, 3), (3, 3), (1, 4)])
def test_mutation_invariance(mu, nu, cache):
    rep = verify_mutation_invariance(coefficients(mu, nu, 10, cache))
    assert rep.ok and rep.pairs


def test_mutation_pair_example(cache):
    table = coefficients(2, 2, 10, cache)
    assert table.exponents((1, 2)) == table.exponents((3, 2)) == {1: 2}
