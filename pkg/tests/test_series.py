from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from scattering.series import (
    ConfigurationError,
    NonUnitError,
    Truncation,
    TruncatedSeries,
    format_rational,
    is_primitive,
    parse_series,
    primitive_part,
    to_mpq,
)

R4 = Truncation(("t",), 4)
R6 = Truncation(("t",), 6)


def gens(ring):
    return ring.x, ring.y, ring.param("t")


def test_product_distributes():
    x, y, t = gens(R4)
    f = (1 + t * x) * (1 + t * y)
    assert f == 1 + t * x + t * y + t * t * x * y
    assert f * R4.one() == f


def test_difference_of_squares():
    x, _, t = gens(R4)
    assert (1 + t * x) * (1 - t * x) == 1 - t * t * x * x


def test_truncation_drops_high_degree():
    x, _, t = gens(R4)
    f = (1 + t * x) ** 6
    assert max(sum(e) for _, _, e in f.terms) == 4
    assert f.coeff(4, 0, {"t": 4}) == 15


def test_geometric_inverse():
    x, _, t = gens(R6)
    inv = (1 - t * x).inverse()
    assert inv == sum((R6.monomial(k, 0, {"t": k}) for k in range(7)), R6.zero())
    assert R6.one().inverse() == R6.one()


def test_inverse_of_square():
    x, _, t = gens(R6)
    inv = ((1 + t * x) ** 2).inverse()
    assert [inv.coeff(k, 0, {"t": k}) for k in range(7)] == [(-1) ** k * (k + 1) for k in range(7)]


def test_non_unit_inverse_raises():
    x, _, t = gens(R4)
    with pytest.raises(NonUnitError):
        (2 + t * x).inverse()
    with pytest.raises(NonUnitError):
        (t * x).log()


def test_mismatched_rings_raise():
    with pytest.raises(ConfigurationError):
        R4.x * R6.x


def test_negative_power_binomial():
    x, y, t = gens(R4)
    f = (1 + t * x * y).pow(-4)
    assert [f.coeff(k, k, {"t": k}) for k in range(5)] == [1, -4, 10, -20, 35]


def test_rational_power_root():
    x, _, t = gens(R6)
    assert ((1 + t * x) ** 2).pow(Fraction(1, 2)) == 1 + t * x
    h = (1 + t * x + 3 * t * t * x * x).pow(Fraction(1, 3))
    assert h ** 3 == 1 + t * x + 3 * t * t * x * x


def test_mercator_series():
    x, _, t = gens(R6)
    log = (1 + t * x).log()
    assert [log.coeff(k, 0, {"t": k}) for k in range(1, 7)] == [mpq((-1) ** (k + 1), k) for k in range(1, 7)]
    assert R6.zero().exp() == R6.one()


def test_log_of_negative_fourth_power():
    x, y, t = gens(R6)
    log = ((1 - t * x * y) ** -4).log()
    assert [log.coeff(k, k, {"t": k}) for k in range(1, 7)] == [mpq(4, k) for k in range(1, 7)]


def test_substitute_examples():
    x, y, t = gens(R4)
    assert (x * y).substitute(x, y * (1 + t * x)) == x * y * (1 + t * x)
    f = 1 + t * x + 2 * t * t * x * y
    assert f.substitute(x, y) == f
    inv_x = R4.monomial(-1, 0)
    got = inv_x.substitute(x * (1 + t * y), y)
    assert got == inv_x * (1 + t * y).inverse()


def test_substitute_rejects_bad_images():
    x, y, t = gens(R4)
    with pytest.raises(NonUnitError):
        (x * y).substitute(2 * x, y)


def test_substitute_is_a_homomorphism():
    x, y, t = gens(R4)
    f, g = 1 + t * x * y, 1 + t * t * x - t * y
    ix, iy = x * (1 + t * y), y * (1 - t * x * x)
    assert (f * g).substitute(ix, iy) == f.substitute(ix, iy) * g.substitute(ix, iy)


def test_specialize():
    ring = Truncation(("t[1,1]", "t[2,1]"), 4)
    f = ring.monomial(1, 1, {"t[1,1]": 1, "t[2,1]": 1})
    g = f.specialize({"t[1,1]": "t", "t[2,1]": "t"})
    assert g == Truncation(("t",), 4).monomial(1, 1, {"t": 2})
    assert (1 + R4.x).specialize({"t": "t"}) == 1 + R4.x
    with pytest.raises(ConfigurationError):
        f.specialize({"t[1,1]": "t"})


def test_two_parameter_product_specializes_to_square():
    ring = Truncation(("a", "b"), 5)
    x = ring.x
    f = (1 + ring.param("a") * x) * (1 + ring.param("b") * x)
    sq = f.specialize({"a": "t", "b": "t"})
    one = Truncation(("t",), 5)
    assert sq == (1 + one.param("t") * one.x) ** 2


def test_caps_quotient():
    ring = Truncation(("a", "b"), 6, caps=(1, 2))
    f = (1 + ring.param("a") * ring.x + ring.param("b") * ring.y) ** 4
    for _, _, (ea, eb) in f.terms:
        assert ea <= 1 and eb <= 2
    assert f.coeff(1, 2, {"a": 1, "b": 2}) == 12


def test_text_round_trip():
    x, y, t = gens(R4)
    f = (1 + t * x.shift(-1, 2)) ** -3 + mpq(1, 7) * t * y
    text = f.to_text()
    assert parse_series(text, R4) == f
    assert R4.zero().to_text() == "0"
    assert (1 + t * x).to_text() == "1 + 1 * t^1 x^1"


def test_map_lattice():
    x, y, t = gens(R4)
    f = 1 + t * x + t * y
    g = f.map_lattice(((1, -1), (0, 4)))
    assert g == 1 + t * x + t * R4.monomial(-1, 4)


def test_helpers():
    assert to_mpq("3/6") == mpq(1, 2)
    assert to_mpq(Fraction(2, 4)) == mpq(1, 2)
    with pytest.raises(TypeError):
        to_mpq(0.5)
    assert format_rational(mpq(-3, 4)) == "-3/4"
    assert format_rational(5) == "5"
    assert is_primitive(0, 1) and not is_primitive(0, 2) and not is_primitive(4, 6)
    assert primitive_part(6, 4) == ((3, 2), 2)
    assert primitive_part(0, -3) == ((0, -1), 3)


def test_ring_configuration_errors():
    with pytest.raises(ConfigurationError):
        Truncation(("t", "t"), 3)
    with pytest.raises(ConfigurationError):
        Truncation(("t",), 3, caps=(1, 2))
    with pytest.raises(ConfigurationError):
        R4.encode({"s": 1})


def test_canonical_form_drops_zeros():
    x, _, t = gens(R4)
    f = t * x - t * x
    assert f == R4.zero() and len(f) == 0 and not f
    assert hash(1 + t * x) == hash(1 + t * x)


# -- properties ---------------------------------------------------------------

RING = Truncation(("t",), 4)
coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=4)
term = st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(0, 4), coeffs)


@st.composite
def series(draw, unit=False, nilpotent=False):
    terms = {}
    for a, b, d, c in draw(st.lists(term, max_size=5)):
        if (unit or nilpotent) and d == 0:
            continue
        terms[(a, b, RING.encode((d,)))] = c
    s = TruncatedSeries(RING, terms)
    return s + 1 if unit else s


@settings(max_examples=40, deadline=None)
@given(series(), series(), series())
def test_ring_axioms(f, g, h):
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == RING.zero()


@settings(max_examples=40, deadline=None)
@given(series(unit=True))
def test_inverse_and_log_exp(f):
    assert f * f.inverse() == RING.one()
    assert f.log().exp() == f


@settings(max_examples=40, deadline=None)
@given(series(nilpotent=True))
def test_exp_log(s):
    assert s.exp().log() == s


@settings(max_examples=25, deadline=None)
@given(series(unit=True), series(unit=True))
def test_log_of_product(f, g):
    assert (f * g).log() == f.log() + g.log()


@settings(max_examples=25, deadline=None)
@given(series(unit=True), st.fractions(-2, 2, max_denominator=3), st.fractions(-2, 2, max_denominator=3),
       st.integers(-3, 3))
def test_power_laws(f, r, s, q):
    assert f.pow(r + s) == f.pow(r) * f.pow(s)
    assert f.pow(r).pow(q) == f.pow(r * q)
    assert f.pow(3) == (f.log() * 3).exp()
