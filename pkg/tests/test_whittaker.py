from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from newform_periods.algebra import QSqrt, q_power
from newform_periods.reps import SatakeParams, make_ramified, make_unramified
from newform_periods.whittaker import essential_value, modulus_exponent, spherical_value


def test_modulus_exponent():
    assert modulus_exponent(2, (1, 0)) == 1
    assert modulus_exponent(3, (2, 1, 0)) == 4
    assert modulus_exponent(1, (5,)) == 0
    with pytest.raises(ValueError):
        modulus_exponent(2, (1,))


def test_gl2_spherical_closed_form():
    # W(diag(p^m, 1)) = q^(-m/2) (a^(m+1) - b^(m+1)) / (a - b)
    a, b, q = F(1, 2), 3, 5
    spec = make_unramified(SatakeParams([a, b], q))
    for m in range(8):
        expected = q_power(q, F(-m, 2)) * ((a ** (m + 1) - b ** (m + 1)) / (a - b))
        assert essential_value(spec, (m,)) == expected
    assert essential_value(spec, (-1,)) == 0


def test_gl2_newform_conductor_one():
    # one unramified parameter: W(diag(p^m, 1)) = q^(-m/2) alpha^m for m >= 0
    a, q = F(-2, 3), 7
    spec = make_ramified(2, 1, SatakeParams([a], q), 1)
    for m in range(8):
        assert essential_value(spec, (m,)) == q_power(q, F(-m, 2)) * a ** m
    assert essential_value(spec, (-1,)) == 0


def test_depth_zero_part_is_constant():
    # r = 0: the essential vector is supported on units with value 1
    spec = make_ramified(3, 2, SatakeParams([], 5), 1)
    assert essential_value(spec, (0, 0)) == 1
    assert essential_value(spec, (1, 0)) == 0


def test_support_conditions():
    spec = make_ramified(4, 1, SatakeParams([2, F(1, 3)], 3), 1)
    assert essential_value(spec, (2, 1, 1)) == 0  # a trailing coordinate is not a unit
    assert essential_value(spec, (1, 2, 0)) == 0  # not dominant
    assert essential_value(spec, (1, -1, 0)) == 0  # r-th coordinate not integral
    assert essential_value(spec, (1, 0, 0)) != 0


def test_length_checks():
    spec = make_unramified(SatakeParams([2, 3], 5))
    with pytest.raises(ValueError):
        essential_value(spec, (1, 0))
    with pytest.raises(ValueError):
        spherical_value(spec.unramified_part, (1,))


def test_spherical_value_may_be_irrational():
    v = spherical_value(SatakeParams([2, 3], 5), (1, 0))
    assert isinstance(v, QSqrt) and v.a == 0 and v.b == F(1)


specs = st.builds(
    lambda vals, extra, c, q: (
        make_unramified(SatakeParams(vals, q))
        if c == 0
        else make_ramified(len(vals) + extra, c, SatakeParams(vals, q), 1)
    ),
    st.lists(st.fractions(-5, 5, max_denominator=5).filter(bool), min_size=1, max_size=3),
    st.integers(0, 2),
    st.integers(0, 2),
    st.sampled_from([2, 3, 5, 7]),
)


@settings(max_examples=60, deadline=None)
@given(specs)
def test_normalized_at_identity(spec):
    assert essential_value(spec, (0,) * (spec.rank - 1)) == 1


@settings(max_examples=60, deadline=None)
@given(specs, st.lists(st.integers(-4, 4), min_size=5, max_size=5))
def test_vanishes_off_support(spec, raw):
    lam = tuple(raw[: spec.rank - 1])
    n, r = spec.rank, spec.r
    if r == n:
        inside = all(lam[i] >= lam[i + 1] for i in range(n - 2)) and (not lam or lam[-1] >= 0)
    else:
        head = lam[:r]
        inside = (
            all(p == 0 for p in lam[r:])
            and all(head[i] >= head[i + 1] for i in range(r - 1))
            and (not head or head[-1] >= 0)
        )
    if not inside:
        assert essential_value(spec, lam) == 0
