"""Exact signs of expressions a + b*sqrt(n) and of Re(lam * sqrt(D)) for Gaussian D."""
from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Union

Rat = Union[int, Fraction]


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def rational_sqrt(x: Rat) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    x = Fraction(x)
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def sign_a_plus_b_sqrt(a: Rat, b: Rat, n: Rat) -> int:
    """sign(a + b*sqrt(n)) for rational a, b and n >= 0."""
    if n < 0:
        raise ValueError("negative radicand")
    sa, sb = _sgn(a), _sgn(b) if n else 0
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    d = Fraction(a) ** 2 - Fraction(b) ** 2 * n
    return sa * _sgn(d)


class QuadReal:
    """a + b*sqrt(n) with rational a, b and a fixed nonnegative integer n."""

    __slots__ = ("a", "b", "n")

    def __init__(self, a: Rat, b: Rat = 0, n: int = 0):
        self.a, self.b, self.n = Fraction(a), Fraction(b), int(n)
        if self.n < 0:
            raise ValueError("negative radicand")

    @staticmethod
    def coerce(x, n: int = 0) -> QuadReal:
        if isinstance(x, QuadReal):
            return x
        if isinstance(x, float):
            return QuadReal(Fraction(x), 0, n)
        return QuadReal(Fraction(x), 0, n)

    def _join(self, o) -> tuple[QuadReal, QuadReal]:
        o = QuadReal.coerce(o, self.n)
        if o.b == 0:
            o = QuadReal(o.a, 0, self.n)
        if self.b == 0 and o.n != self.n:
            return QuadReal(self.a, 0, o.n), o
        if self.n != o.n:
            raise ValueError("incompatible radicands")
        return self, o

    def __add__(self, o):
        x, y = self._join(o)
        return QuadReal(x.a + y.a, x.b + y.b, x.n)

    __radd__ = __add__

    def __neg__(self):
        return QuadReal(-self.a, -self.b, self.n)

    def __sub__(self, o):
        return self + (-QuadReal.coerce(o, self.n))

    def __rsub__(self, o):
        return QuadReal.coerce(o, self.n) - self

    def __mul__(self, o):
        x, y = self._join(o)
        return QuadReal(x.a * y.a + x.b * y.b * x.n, x.a * y.b + x.b * y.a, x.n)

    __rmul__ = __mul__

    def sign(self) -> int:
        return sign_a_plus_b_sqrt(self.a, self.b, self.n)

    def __lt__(self, o):
        return (self - o).sign() < 0

    def __le__(self, o):
        return (self - o).sign() <= 0

    def __gt__(self, o):
        return (self - o).sign() > 0

    def __ge__(self, o):
        return (self - o).sign() >= 0

    def __eq__(self, o):
        try:
            return (self - o).sign() == 0
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.n))

    def __float__(self):
        return float(self.a) + float(self.b) * self.n ** 0.5

    def __repr__(self):
        return f"QuadReal({self.a}, {self.b}, {self.n})"


GOLDEN = QuadReal(Fraction(1, 2), Fraction(1, 2), 5)
SQRT5_MINUS_1 = QuadReal(-1, 1, 5)


def sign_re_lambda_sqrt(lam_re: Rat, lam_im: Rat, p: int, q: int) -> int:
    """sign(Re(lam * sqrt(p + q i))) with the principal square root.

    The principal root is X + iY with X = sqrt((M+p)/2) >= 0, Y = sgn(q) sqrt((M-p)/2),
    M = |p + qi|; on the negative real axis it is i*sqrt(-p).
    """
    A, B = Fraction(lam_re), Fraction(lam_im)
    if q == 0:
        if p > 0:
            return _sgn(A)
        if p < 0:
            return -_sgn(B)
        return 0
    # Re = A*X - B*Y = A*sqrt(u) - B'*sqrt(v) with B' = B*sgn(q), u, v > 0
    Bq = B if q > 0 else -B
    sa, sb = _sgn(A), _sgn(Bq)
    if sa == 0:
        return -sb
    if sb == 0:
        return sa
    if sa != sb:
        return sa
    # both same sign s: sign = s * sign(A^2 u - B'^2 v), 2(A^2 u - B'^2 v) = (A^2-B'^2) M + (A^2+B'^2) p
    A2, B2 = A * A, Bq * Bq
    return sa * sign_a_plus_b_sqrt((A2 + B2) * p, A2 - B2, p * p + q * q)


def is_principal_multiple(lam_re: Rat, lam_im: Rat, p: int, q: int) -> bool:
    """Whether lam * sqrt(D) is the principal root of lam^2 D (D = p + qi nonzero, lam nonzero)."""
    s = sign_re_lambda_sqrt(lam_re, lam_im, p, q)
    if s:
        return s > 0
    # Re = 0: principal iff Im(lam sqrt D) > 0, Im(w) = Re(-i w)
    return sign_re_lambda_sqrt(lam_im, -Fraction(lam_re), p, q) > 0
