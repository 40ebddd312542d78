import math

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from scattering.polyfit import (
    BinomialExpansion,
    InterpolationError,
    MuNuPolynomial,
    from_binomial,
    interpolate,
    interpolate_values,
    to_binomial_basis,
    verify_vanishing,
)
from scattering.standard import coefficients

P = MuNuPolynomial.parse


def test_interpolate_small_cases(cache):
    assert interpolate(1, 1, cache) == P("mu nu")
    assert interpolate(2, 2, cache) == P("mu^2 nu^2 - mu^2 nu - mu nu^2 + mu nu")
    assert interpolate(1, 3, cache) == P("1/6 mu nu^3 - 1/2 mu nu^2 + 1/3 mu nu")


def test_engine_three_three(cache):
    expected = P("3/2 mu^3 nu^3 - 3 mu^3 nu^2 - 3 mu^2 nu^3 + 3/2 mu^3 nu + 9/2 mu^2 nu^2 + 3/2 mu nu^3"
                 " - 3/2 mu^2 nu - 3/2 mu nu^2")
    assert interpolate(3, 3, cache) == expected


def test_polynomial_matches_every_grid_point(cache):
    poly = interpolate(2, 3, cache)
    for mu in range(5):
        for nu in range(5):
            assert poly(mu, nu) == coefficients(mu, nu, 5, cache)[(2, 3)]


def test_interpolation_symmetry(cache):
    for a, b in ((1, 2), (2, 3), (1, 4), (3, 4)):
        assert interpolate(a, b, cache) == interpolate(b, a, cache).swapped()


def test_degrees(cache):
    for a, b in ((1, 2), (2, 2), (2, 4), (3, 3)):
        assert interpolate(a, b, cache).degrees == (a, b)


def test_off_grid_check_fires():
    def value(mu, nu):
        return mu ** 3 * nu

    poly = interpolate_values(value, 2, 1)
    assert poly(3, 1) != value(3, 1)


def test_interpolate_rejects_bad_arguments(cache):
    with pytest.raises(ValueError):
        interpolate(0, 2, cache)


def test_binomial_examples():
    for k in range(1, 5):
        closed = interpolate_values(lambda m, n: m * math.comb(n, k), 1, k)
        assert to_binomial_basis(closed, 1, k).nonzero() == {(1, k): 1}
    c22 = P("mu^2 nu^2 - mu^2 nu - mu nu^2 + mu nu")
    assert to_binomial_basis(c22, 2, 2).nonzero() == {(2, 2): 4}
    assert to_binomial_basis(MuNuPolynomial({}), 2, 2).nonzero() == {}


def test_binomial_box_errors():
    with pytest.raises(InterpolationError):
        to_binomial_basis(P("mu^3 nu"), 2, 2)
    with pytest.raises(InterpolationError):
        to_binomial_basis(P("mu + 1"), 2, 2)


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(st.tuples(st.integers(1, 3), st.integers(1, 3)),
                       st.fractions(-5, 5, max_denominator=6), max_size=6))
def test_binomial_round_trip(lam):
    exp = BinomialExpansion(3, 3, {k: mpq(v.numerator, v.denominator) for k, v in lam.items()})
    poly = from_binomial(exp)
    assert to_binomial_basis(poly, 3, 3).nonzero() == exp.nonzero()


def test_text_format_and_parse():
    poly = P("1/2 mu^2 nu^3 - mu^2 nu^2 - 1/3 mu nu^3 + 1/2 mu^2 nu + 1/2 mu nu^2 - 1/6 mu nu")
    assert poly.to_text() == "1/2 mu^2 nu^3 - mu^2 nu^2 - 1/3 mu nu^3 + 1/2 mu^2 nu + 1/2 mu nu^2 - 1/6 mu nu"
    assert P(poly.to_text()) == poly
    assert P("2*mu*nu - 3") == MuNuPolynomial({(1, 1): 2, (0, 0): -3})
    assert MuNuPolynomial({}).to_text() == "0" and P("0") == MuNuPolynomial({})
    assert P("-mu^2 + 4").to_text() == "-mu^2 + 4"
    with pytest.raises(ValueError):
        P("mu ^^ 2")


def test_vanishing_reports(cache):
    for a, b in ((2, 2), (1, 3), (2, 3), (3, 3), (2, 4)):
        rep = verify_vanishing(a, b, cache)
        assert rep.ok, rep.violations
    rep = verify_vanishing(2, 2, cache)
    assert (1, 1) in rep.zero_cells and rep.lam == {(2, 2): 4}
    rep = verify_vanishing(1, 3, cache)
    assert rep.lam == {(1, 3): 1}
    assert verify_vanishing(3, 3, cache).lam[(3, 3)] != 0


def test_vanishing_detects_negative_lambda(cache):
    fake = from_binomial(BinomialExpansion(2, 2, {(2, 2): mpq(4), (1, 2): mpq(-1)}))
    rep = verify_vanishing(2, 2, cache, fake)
    assert not rep.ok
    kinds = {v[0] for v in rep.violations}
    assert "negative" in kinds
