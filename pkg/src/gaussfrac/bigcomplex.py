"""Certified complex approximations: a binary-float center plus an error radius.

Every operation computes the exact rational result of the centers, rounds it to
the working precision, and adds the exact rounding error to the propagated bound,
so ``rad`` always dominates the distance to the represented value.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Union

import gmpy2
from gmpy2 import mpfr, mpq

from .errors import PoleHit
from .gaussint import GaussianInt, GaussianRational

DEFAULT_PREC = 192
RAD_PREC = 64

Rat = Union[int, Fraction, "mpq"]


def _q(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def round_up(x: mpq) -> mpfr:
    r = mpfr(x, RAD_PREC)
    if mpq(r) < x:
        r = gmpy2.next_above(r)
    return r


def round_down(x: mpq) -> mpfr:
    r = mpfr(x, RAD_PREC)
    if mpq(r) > x:
        r = gmpy2.next_below(r)
    return r


def sqrt_up(x: mpq) -> mpq:
    """Rational upper bound for sqrt(x), x >= 0."""
    if x <= 0:
        return mpq(0)
    r = gmpy2.sqrt(mpfr(x, RAD_PREC))
    while mpq(r) ** 2 < x:
        r = gmpy2.next_above(r)
    return mpq(r)


def sqrt_down(x: mpq) -> mpq:
    """Rational lower bound for sqrt(x), x >= 0."""
    if x <= 0:
        return mpq(0)
    r = gmpy2.sqrt(mpfr(x, RAD_PREC))
    while r > 0 and mpq(r) ** 2 > x:
        r = gmpy2.next_below(r)
    return max(mpq(0), mpq(r))


def _abs_up(re: mpq, im: mpq) -> mpq:
    return abs(re) + abs(im)


class BigComplex:
    """Center ``re + i im`` at ``prec`` bits with certified radius ``rad``."""

    __slots__ = ("re", "im", "rad", "prec")

    def __init__(self, re: mpfr, im: mpfr, rad: mpfr, prec: int):
        self.re, self.im, self.rad, self.prec = re, im, rad, prec

    @classmethod
    def from_rational(cls, xr: Rat, xi: Rat, prec: int = DEFAULT_PREC, err: Rat = 0) -> BigComplex:
        """Round the exact value xr + i xi; err is an extra bound to carry along."""
        xr, xi = _q(xr), _q(xi)
        cr, ci = mpfr(xr, prec), mpfr(xi, prec)
        e = _q(err) + abs(mpq(cr) - xr) + abs(mpq(ci) - xi)
        return cls(cr, ci, round_up(e) if e else mpfr(0, RAD_PREC), prec)

    @classmethod
    def exact(cls, x, prec: int = DEFAULT_PREC) -> BigComplex:
        if isinstance(x, BigComplex):
            return x
        if isinstance(x, (int, GaussianInt)):
            g = GaussianInt.coerce(x)
            return cls.from_rational(g.re, g.im, prec)
        if isinstance(x, GaussianRational):
            return cls.from_rational(*x.parts(), prec)
        if isinstance(x, Fraction):
            return cls.from_rational(x, 0, prec)
        if isinstance(x, tuple):
            return cls.from_rational(_q(x[0]), _q(x[1]), prec)
        if isinstance(x, (float, complex)):
            z = complex(x)
            return cls.from_rational(mpq(z.real), mpq(z.imag), max(prec, 53))
        raise TypeError(f"cannot convert {x!r} to BigComplex")

    @classmethod
    def from_center(cls, re, im, rad, prec: int = DEFAULT_PREC) -> BigComplex:
        """An arbitrary center and user-supplied radius (e.g. parsed input)."""
        return cls.from_rational(_q(re), _q(im), prec, err=_q(rad))

    # exact views
    def center(self) -> tuple[mpq, mpq]:
        return mpq(self.re), mpq(self.im)

    def radius(self) -> mpq:
        return mpq(self.rad)

    def is_exact(self) -> bool:
        return self.rad == 0

    def _wrap(self, xr: mpq, xi: mpq, err: mpq, prec: int | None = None) -> BigComplex:
        return BigComplex.from_rational(xr, xi, prec or self.prec, err)

    def _p(self, o: BigComplex) -> int:
        return max(self.prec, o.prec)

    def __add__(self, o) -> BigComplex:
        o = _coerce(o, self.prec)
        (ar, ai), (br, bi) = self.center(), o.center()
        return self._wrap(ar + br, ai + bi, self.radius() + o.radius(), self._p(o))

    __radd__ = __add__

    def __neg__(self) -> BigComplex:
        # mpfr's unary minus rounds to the global context precision
        cr, ci = self.center()
        return BigComplex(mpfr(-cr, self.prec), mpfr(-ci, self.prec), self.rad, self.prec)

    def __sub__(self, o) -> BigComplex:
        return self + (-_coerce(o, self.prec))

    def __rsub__(self, o) -> BigComplex:
        return _coerce(o, self.prec) - self

    def __mul__(self, o) -> BigComplex:
        o = _coerce(o, self.prec)
        (ar, ai), (br, bi) = self.center(), o.center()
        ra, rb = self.radius(), o.radius()
        err = _abs_up(ar, ai) * rb + _abs_up(br, bi) * ra + ra * rb
        return self._wrap(ar * br - ai * bi, ar * bi + ai * br, err, self._p(o))

    __rmul__ = __mul__

    def conj(self) -> BigComplex:
        return BigComplex(self.re, mpfr(-mpq(self.im), self.prec), self.rad, self.prec)

    def abs2_bounds(self) -> tuple[mpq, mpq]:
        """Bounds on |z|^2 for z in the disc."""
        cr, ci = self.center()
        m2 = cr * cr + ci * ci
        r = self.radius()
        lo_abs = sqrt_down(m2) - r
        hi_abs = sqrt_up(m2) + r
        lo = lo_abs * lo_abs if lo_abs > 0 else mpq(0)
        return lo, hi_abs * hi_abs

    def abs_bounds(self) -> tuple[mpq, mpq]:
        cr, ci = self.center()
        m2 = cr * cr + ci * ci
        r = self.radius()
        return max(mpq(0), sqrt_down(m2) - r), sqrt_up(m2) + r

    def reciprocal(self) -> BigComplex:
        cr, ci = self.center()
        m2 = cr * cr + ci * ci
        r = self.radius()
        lo = sqrt_down(m2)
        if m2 == 0 or lo <= r:
            raise PoleHit("reciprocal of a disc containing zero")
        err = r / ((lo - r) * lo) if r else mpq(0)
        return self._wrap(cr / m2, -ci / m2, err)

    def __truediv__(self, o) -> BigComplex:
        return self * _coerce(o, self.prec).reciprocal()

    def __rtruediv__(self, o) -> BigComplex:
        return _coerce(o, self.prec) * self.reciprocal()

    def sqrt(self) -> BigComplex:
        """Principal square root; only defined for exact (radius zero) inputs."""
        if not self.is_exact():
            raise ValueError("sqrt is only certified for exact inputs")
        cr, ci = self.center()
        if cr == 0 and ci == 0:
            return self
        p = self.prec + 16
        s = gmpy2.context(precision=p).sqrt(gmpy2.mpc(cr, ci, precision=p))
        sr, si = mpq(s.real), mpq(s.imag)
        er = sr * sr - si * si - cr
        ei = 2 * sr * si - ci
        e = abs(er) + abs(ei)
        s_lo = sqrt_down(sr * sr + si * si)
        if e * 4 > 3 * s_lo * s_lo:
            raise ArithmeticError("square root did not converge")
        return self._wrap(sr, si, e / s_lo if e else mpq(0))

    def with_prec(self, prec: int) -> BigComplex:
        return self._wrap(*self.center(), self.radius(), prec)

    # certified predicates: return -1, 0, 1, or None when undecidable at this precision

    def sign_linear(self, w: tuple, c) -> int | None:
        """sign(Re(z * conj(w)) - c) = sign(x*wr + y*wi - c)."""
        wr, wi = _q(w[0]), _q(w[1])
        cr, ci = self.center()
        f = cr * wr + ci * wi - _q(c)
        bound = self.radius() * (abs(wr) + abs(wi))
        if f > bound:
            return 1
        if f < -bound:
            return -1
        if bound == 0:
            return 0
        return None

    def sign_circle(self, center: tuple, r2) -> int | None:
        """sign(|z - center|^2 - r2)."""
        cr, ci = self.center()
        dr, di = cr - _q(center[0]), ci - _q(center[1])
        f = dr * dr + di * di - _q(r2)
        r = self.radius()
        bound = 2 * (abs(dr) + abs(di)) * r + r * r
        if f > bound:
            return 1
        if f < -bound:
            return -1
        if bound == 0:
            return 0
        return None

    def contains(self, x) -> bool:
        """Whether the exact point x lies in the closed disc."""
        if isinstance(x, GaussianInt):
            xr, xi = mpq(x.re), mpq(x.im)
        elif isinstance(x, GaussianRational):
            xr, xi = (_q(t) for t in x.parts())
        else:
            xr, xi = _q(x[0]), _q(x[1])
        cr, ci = self.center()
        r = self.radius()
        return (cr - xr) ** 2 + (ci - xi) ** 2 <= r * r

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"BigComplex({complex(self)!r} +- {float(self.rad):.3g}, prec={self.prec})"

    def to_json(self, digits: int = 30) -> dict:
        return {
            "re": _dec(self.re, digits),
            "im": _dec(self.im, digits),
            "radius": _dec(self.rad, 6),
        }


def _dec(x: mpfr, digits: int) -> str:
    if x == 0:
        return "0"
    return "{0:.{1}g}".format(x, digits)


def _coerce(o, prec: int) -> BigComplex:
    if isinstance(o, BigComplex):
        return o
    return BigComplex.exact(o, prec)
