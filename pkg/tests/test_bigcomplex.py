from __future__ import annotations

from fractions import Fraction

import mpmath
from hypothesis import given
from hypothesis import strategies as st

from gaussfrac.bigcomplex import BigComplex

mpmath.mp.prec = 600

small = st.fractions(min_value=-50, max_value=50, max_denominator=1000)
nonzero = small.filter(lambda x: x != 0)


def _mp(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def _contains(z: BigComplex, re, im) -> bool:
    """Oracle: the mpmath value lies within the certified disc."""
    cr, ci = z.center()
    d = mpmath.sqrt((mpmath.mpf(cr.numerator) / cr.denominator - re) ** 2
                    + (mpmath.mpf(ci.numerator) / ci.denominator - im) ** 2)
    r = z.radius()
    return d <= mpmath.mpf(r.numerator) / r.denominator + mpmath.mpf(2) ** -580


@given(small, small, small, small, st.sampled_from([53, 64, 192]))
def test_arithmetic_encloses_exact(a, b, c, d, prec):
    x = BigComplex.from_rational(a, b, prec)
    y = BigComplex.from_rational(c, d, prec)
    xa, xb, ya, yb = map(_mp, (a, b, c, d))
    s = x + y
    assert _contains(s, xa + ya, xb + yb)
    p = x * y
    assert _contains(p, xa * ya - xb * yb, xa * yb + xb * ya)
    if c or d:
        q = x / y
        w = mpmath.mpc(xa, xb) / mpmath.mpc(ya, yb)
        assert _contains(q, w.real, w.imag)


@given(nonzero, nonzero)
def test_reciprocal_chain_stays_certified(a, b):
    z = BigComplex.from_rational(a, b, 64)
    w = mpmath.mpc(_mp(a), _mp(b))
    for _ in range(6):
        z = 1 / (z + 3)
        w = 1 / (w + 3)
    assert _contains(z, w.real, w.imag)


@given(small, small)
def test_sqrt_principal(a, b):
    z = BigComplex.from_rational(a, b, 128)
    if not z.is_exact():
        return
    s = z.sqrt()
    w = mpmath.sqrt(mpmath.mpc(_mp(a), _mp(b)))
    assert _contains(s, w.real, w.imag)


def test_sign_predicates():
    z = BigComplex.from_rational(Fraction(1, 3), Fraction(1, 7), 64)
    assert z.sign_linear((1, 0), Fraction(1, 3)) in (None, 0)
    assert z.sign_linear((1, 0), Fraction(1, 4)) == 1
    assert z.sign_circle((0, 0), Fraction(1, 100)) == 1
    assert z.sign_circle((0, 0), 1) == -1
    fuzzy = BigComplex.from_center(Fraction(1, 2), 0, Fraction(1, 10))
    assert fuzzy.sign_linear((1, 0), Fraction(1, 2)) is None
    exact = BigComplex.exact(Fraction(1, 2))
    assert exact.sign_linear((1, 0), Fraction(1, 2)) == 0


def test_float_inputs_are_exact():
    z = BigComplex.exact(0.1 + 0.2j, 64)
    assert z.is_exact() and z.prec >= 53
    assert complex(z) == 0.1 + 0.2j
