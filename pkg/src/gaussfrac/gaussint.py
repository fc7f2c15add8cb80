"""Exact arithmetic on Gaussian integers and Gaussian rationals."""
from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator, Union

from .errors import ZeroDenominator

IntLike = Union[int, "GaussianInt"]


class GaussianInt:
    """x + iy with arbitrary-precision integer parts. Immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re: int = 0, im: int = 0):
        object.__setattr__(self, "re", int(re))
        object.__setattr__(self, "im", int(im))

    def __setattr__(self, key, value):
        raise AttributeError("GaussianInt is immutable")

    @staticmethod
    def coerce(x) -> GaussianInt:
        if isinstance(x, GaussianInt):
            return x
        if isinstance(x, int):
            return GaussianInt(x, 0)
        if isinstance(x, complex) and x.real.is_integer() and x.imag.is_integer():
            return GaussianInt(int(x.real), int(x.imag))
        if isinstance(x, str):
            return parse_gaussian(x)
        raise TypeError(f"cannot convert {x!r} to GaussianInt")

    def __add__(self, o):
        if isinstance(o, int):
            return GaussianInt(self.re + o, self.im)
        if isinstance(o, GaussianInt):
            return GaussianInt(self.re + o.re, self.im + o.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, int):
            return GaussianInt(self.re - o, self.im)
        if isinstance(o, GaussianInt):
            return GaussianInt(self.re - o.re, self.im - o.im)
        return NotImplemented

    def __rsub__(self, o):
        if isinstance(o, int):
            return GaussianInt(o - self.re, -self.im)
        return NotImplemented

    def __mul__(self, o):
        if isinstance(o, int):
            return GaussianInt(self.re * o, self.im * o)
        if isinstance(o, GaussianInt):
            return GaussianInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self):
        return GaussianInt(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __truediv__(self, o):
        return gq_reduce(self, GaussianInt.coerce(o))

    def __rtruediv__(self, o):
        return gq_reduce(GaussianInt.coerce(o), self)

    def conj(self) -> GaussianInt:
        return GaussianInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re or self.im)

    def __eq__(self, o):
        if isinstance(o, GaussianInt):
            return self.re == o.re and self.im == o.im
        if isinstance(o, int):
            return self.im == 0 and self.re == o
        return NotImplemented

    def __hash__(self):
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def key(self) -> tuple[int, int]:
        """Lexicographic tie-break key."""
        return (self.re, self.im)

    def __complex__(self):
        return complex(self.re, self.im)

    def __repr__(self):
        return f"GaussianInt({self.re}, {self.im})"

    def __str__(self):
        return format_gaussian(self)

    def to_json(self) -> dict:
        return {"re": str(self.re), "im": str(self.im)}

    @staticmethod
    def from_json(obj) -> GaussianInt:
        if isinstance(obj, str):
            return parse_gaussian(obj)
        return GaussianInt(int(obj["re"]), int(obj["im"]))


ZERO = GaussianInt(0, 0)
ONE = GaussianInt(1, 0)
I = GaussianInt(0, 1)
UNITS = (ONE, I, -ONE, -I)


def gnorm(a: IntLike) -> int:
    a = GaussianInt.coerce(a)
    return a.re * a.re + a.im * a.im


def is_even_gaussian(a: IntLike) -> bool:
    """Even means divisible by 1+i, i.e. re + im even."""
    a = GaussianInt.coerce(a)
    return (a.re + a.im) % 2 == 0


def sigma_y(a: IntLike) -> GaussianInt:
    """Reflection in the imaginary axis, z -> -conj(z)."""
    a = GaussianInt.coerce(a)
    return GaussianInt(-a.re, a.im)


def sigma_y_pow(a: IntLike, k: int) -> GaussianInt:
    return sigma_y(a) if k % 2 else GaussianInt.coerce(a)


def _round_div(n: int, d: int) -> int:
    """Nearest integer to n/d (d > 0), halves rounded down."""
    return -((-2 * n + d) // (2 * d))


def gdivmod(a: IntLike, b: IntLike) -> tuple[GaussianInt, GaussianInt]:
    """Division with remainder, quotient nearest to a/b, so gnorm(rem) <= gnorm(b)/2."""
    a, b = GaussianInt.coerce(a), GaussianInt.coerce(b)
    nb = b.norm()
    if nb == 0:
        raise ZeroDenominator("division by zero Gaussian integer")
    t = a * b.conj()
    q = GaussianInt(_round_div(t.re, nb), _round_div(t.im, nb))
    return q, a - q * b


def canonical_unit(a: IntLike) -> GaussianInt:
    """The unit u such that a*u lies in {re > 0, im >= 0}; 1 for zero."""
    a = GaussianInt.coerce(a)
    if not a:
        return ONE
    for u in UNITS:
        b = a * u
        if b.re > 0 and b.im >= 0:
            return u
    raise AssertionError("unreachable")


def canonical_associate(a: IntLike) -> GaussianInt:
    a = GaussianInt.coerce(a)
    return a * canonical_unit(a)


def ggcd(*xs: IntLike) -> GaussianInt:
    """Canonical gcd (zero only if every argument is zero)."""
    g = ZERO
    for x in xs:
        b = GaussianInt.coerce(x)
        a = g
        while b:
            a, b = b, gdivmod(a, b)[1]
        g = a
    return canonical_associate(g)


def gaussian_isqrt(a: IntLike) -> GaussianInt | None:
    """A Gaussian integer s with s*s == a, or None."""
    a = GaussianInt.coerce(a)
    n = a.norm()
    m = isqrt(n)
    if m * m != n:
        return None
    if (m + a.re) % 2:
        return None
    x2, y2 = (m + a.re) // 2, (m - a.re) // 2
    x, y = isqrt(x2), isqrt(y2)
    if x * x != x2 or y * y != y2:
        return None
    if a.im < 0:
        y = -y
    s = GaussianInt(x, y)
    return s if s * s == a else None


_TERM = re.compile(r"[+-]?[^+-]*")


def parse_gaussian(text: str) -> GaussianInt:
    """Parse forms like ``3``, ``-2i``, ``1+i``, ``1 - 2i``, ``-1+1i``."""
    s = text.replace(" ", "").replace("j", "i").replace("I", "i")
    if not s:
        raise ValueError("empty Gaussian integer")
    re_part = im_part = 0
    seen_re = seen_im = False
    for term in _TERM.findall(s):
        if not term:
            continue
        if term.endswith("i"):
            coef = term[:-1]
            if coef in ("", "+"):
                v = 1
            elif coef == "-":
                v = -1
            else:
                v = _parse_int(coef, text)
            if seen_im:
                raise ValueError(f"malformed Gaussian integer {text!r}")
            im_part, seen_im = v, True
        else:
            if seen_re or seen_im:
                raise ValueError(f"malformed Gaussian integer {text!r}")
            re_part, seen_re = _parse_int(term, text), True
    return GaussianInt(re_part, im_part)


def _parse_int(s: str, whole: str) -> int:
    if not re.fullmatch(r"[+-]?\d+", s):
        raise ValueError(f"malformed Gaussian integer {whole!r}")
    return int(s)


def format_gaussian(a: IntLike) -> str:
    a = GaussianInt.coerce(a)
    if a.im == 0:
        return str(a.re)
    if a.re == 0:
        return f"{a.im}i"
    sign = "+" if a.im > 0 else "-"
    return f"{a.re}{sign}{abs(a.im)}i"


def parse_block(text: str) -> list[GaussianInt]:
    """Comma separated Gaussian integers; an empty string is the empty block."""
    text = text.strip()
    if not text:
        return []
    return [parse_gaussian(t) for t in text.split(",")]


def gaussians_in_box(n: int) -> Iterator[GaussianInt]:
    for x in range(-n, n + 1):
        for y in range(-n, n + 1):
            yield GaussianInt(x, y)


def gaussians_by_norm(min_norm: int = 0) -> Iterator[GaussianInt]:
    """All Gaussian integers with gnorm >= min_norm, by increasing norm then (re, im)."""
    n = min_norm
    while True:
        r = isqrt(n)
        shell = []
        for x in range(-r, r + 1):
            y2 = n - x * x
            y = isqrt(y2)
            if y * y == y2:
                shell.append(GaussianInt(x, -y))
                if y:
                    shell.append(GaussianInt(x, y))
        yield from sorted(shell, key=GaussianInt.key)
        n += 1


class GaussianRational:
    """num/den in canonical form: gcd a unit, den with re > 0 and im >= 0."""

    __slots__ = ("num", "den")

    def __init__(self, num: GaussianInt, den: GaussianInt, _canonical: bool = False):
        if not _canonical:
            r = gq_reduce(num, den)
            num, den = r.num, r.den
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, key, value):
        raise AttributeError("GaussianRational is immutable")

    @staticmethod
    def coerce(x) -> GaussianRational:
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, GaussianInt)):
            return GaussianRational(GaussianInt.coerce(x), ONE, True)
        if isinstance(x, Fraction):
            return GaussianRational(GaussianInt(x.numerator), GaussianInt(x.denominator), True)
        if isinstance(x, tuple) and len(x) == 2:
            return from_fractions(Fraction(x[0]), Fraction(x[1]))
        if isinstance(x, str):
            return parse_gaussian_rational(x)
        if isinstance(x, (float, complex)):
            # binary floats are exact dyadic rationals
            c = complex(x)
            return from_fractions(Fraction(c.real), Fraction(c.imag))
        raise TypeError(f"cannot convert {x!r} to GaussianRational")

    @property
    def re(self) -> Fraction:
        n = self.num * self.den.conj()
        return Fraction(n.re, self.den.norm())

    @property
    def im(self) -> Fraction:
        n = self.num * self.den.conj()
        return Fraction(n.im, self.den.norm())

    def parts(self) -> tuple[Fraction, Fraction]:
        n = self.num * self.den.conj()
        d = self.den.norm()
        return Fraction(n.re, d), Fraction(n.im, d)

    def is_integer(self) -> bool:
        return self.den == ONE

    def as_gaussian(self) -> GaussianInt:
        if self.den != ONE:
            raise ValueError(f"{self} is not a Gaussian integer")
        return self.num

    def __add__(self, o):
        o = _gq(o)
        if o is None:
            return NotImplemented
        return gq_reduce(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, o):
        o = _gq(o)
        if o is None:
            return NotImplemented
        return gq_reduce(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, o):
        o = _gq(o)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, o):
        o = _gq(o)
        if o is None:
            return NotImplemented
        return gq_reduce(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _gq(o)
        if o is None:
            return NotImplemented
        return gq_reduce(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, o):
        o = _gq(o)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussianRational(-self.num, self.den, True)

    def conj(self) -> GaussianRational:
        return gq_reduce(self.num.conj(), self.den.conj())

    def abs2(self) -> Fraction:
        return Fraction(self.num.norm(), self.den.norm())

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, o):
        o = _gq(o)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self.den == ONE:
            return hash(self.num)
        return hash((self.num, self.den))

    def __complex__(self):
        re_, im_ = self.parts()
        return complex(float(re_), float(im_))

    def __repr__(self):
        return f"GaussianRational({self.num!r}, {self.den!r})"

    def __str__(self):
        """Displayed over a positive integer denominator, e.g. ``(3+1i)/2``."""
        if self.den == ONE:
            return format_gaussian(self.num)
        n = self.num * self.den.conj()
        d = self.den.norm()
        g = gcd(n.re, n.im, d)
        n, d = GaussianInt(n.re // g, n.im // g), d // g
        text = format_gaussian(n)
        if n.re and n.im:
            text = f"({text})"
        return f"{text}/{d}"

    def to_json(self) -> dict:
        return {"num": format_gaussian(self.num), "den": format_gaussian(self.den)}


def _gq(x) -> GaussianRational | None:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, GaussianInt, Fraction)):
        return GaussianRational.coerce(x)
    return None


def gq_reduce(num: IntLike, den: IntLike) -> GaussianRational:
    num, den = GaussianInt.coerce(num), GaussianInt.coerce(den)
    if not den:
        raise ZeroDenominator("zero denominator")
    if not num:
        return GaussianRational(ZERO, ONE, True)
    g = ggcd(num, den)
    if g != ONE:
        num, den = gdivmod(num, g)[0], gdivmod(den, g)[0]
    u = canonical_unit(den)
    return GaussianRational(num * u, den * u, True)


def from_fractions(x: Fraction, y: Fraction) -> GaussianRational:
    x, y = Fraction(x), Fraction(y)
    d = x.denominator * y.denominator
    return gq_reduce(GaussianInt(x.numerator * y.denominator, y.numerator * x.denominator), GaussianInt(d))


_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:/\d+)?"
_IMAG_ONLY = re.compile(rf"([+-]?)({_NUM})?i")
_FULL = re.compile(rf"([+-]?{_NUM})(?:([+-])({_NUM})?i)?")


def parse_complex_rational(text: str) -> tuple[Fraction, Fraction]:
    """Exact parse of ``x``, ``yi``, ``x+yi`` with decimal or p/q parts."""
    s = text.replace(" ", "").replace("j", "i")
    m = _IMAG_ONLY.fullmatch(s)
    if m:
        y = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        return Fraction(0), -y if m.group(1) == "-" else y
    m = _FULL.fullmatch(s)
    if m is None:
        raise ValueError(f"malformed complex number {text!r}")
    x = Fraction(m.group(1))
    if m.group(2) is None:
        return x, Fraction(0)
    y = Fraction(m.group(3)) if m.group(3) else Fraction(1)
    return x, -y if m.group(2) == "-" else y


def parse_gaussian_rational(text: str) -> GaussianRational:
    """Accepts a decimal/fractional complex literal or ``num/den`` with Gaussian parts."""
    s = text.replace(" ", "")
    try:
        return from_fractions(*parse_complex_rational(s))
    except ValueError:
        pass
    m = re.fullmatch(r"\(?([^()/]+?)\)?/\(?([^()/]+?)\)?", s)
    if m is None:
        raise ValueError(f"malformed Gaussian rational {text!r}")
    return gq_reduce(parse_gaussian(m.group(1)), parse_gaussian(m.group(2)))


class Sqrt3Gaussian:
    """(a + b*sqrt3) + i(c + d*sqrt3) with rational a, b, c, d."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))
        object.__setattr__(self, "c", Fraction(c))
        object.__setattr__(self, "d", Fraction(d))

    def __setattr__(self, key, value):
        raise AttributeError("immutable")

    def _t(self):
        return (self.a, self.b, self.c, self.d)

    @staticmethod
    def coerce(x) -> Sqrt3Gaussian:
        if isinstance(x, Sqrt3Gaussian):
            return x
        if isinstance(x, (int, Fraction)):
            return Sqrt3Gaussian(x)
        if isinstance(x, GaussianInt):
            return Sqrt3Gaussian(x.re, 0, x.im, 0)
        if isinstance(x, GaussianRational):
            re_, im_ = x.parts()
            return Sqrt3Gaussian(re_, 0, im_, 0)
        raise TypeError(f"cannot convert {x!r}")

    def __add__(self, o):
        o = Sqrt3Gaussian.coerce(o)
        return Sqrt3Gaussian(*(x + y for x, y in zip(self._t(), o._t())))

    __radd__ = __add__

    def __neg__(self):
        return Sqrt3Gaussian(*(-x for x in self._t()))

    def __sub__(self, o):
        return self + (-Sqrt3Gaussian.coerce(o))

    def __rsub__(self, o):
        return Sqrt3Gaussian.coerce(o) - self

    def __mul__(self, o):
        o = Sqrt3Gaussian.coerce(o)
        # real parts r1 = a + b s, r2 = a' + b' s, with s*s = 3
        def rmul(p, q, r, t):
            return p * r + 3 * q * t, p * t + q * r

        ra, rb = rmul(self.a, self.b, o.a, o.b)
        sa, sb = rmul(self.c, self.d, o.c, o.d)
        ta, tb = rmul(self.a, self.b, o.c, o.d)
        ua, ub = rmul(self.c, self.d, o.a, o.b)
        return Sqrt3Gaussian(ra - sa, rb - sb, ta + ua, tb + ub)

    __rmul__ = __mul__

    def conj(self) -> Sqrt3Gaussian:
        return Sqrt3Gaussian(self.a, self.b, -self.c, -self.d)

    def abs2(self) -> tuple[Fraction, Fraction]:
        """|x|^2 as (rational part, sqrt3 part)."""
        p = self * self.conj()
        return p.a, p.b

    def reciprocal(self) -> Sqrt3Gaussian:
        p, q = self.abs2()
        den = p * p - 3 * q * q
        if den == 0:
            raise ZeroDenominator("reciprocal of zero")
        return self.conj() * Sqrt3Gaussian(p / den, -q / den)

    def __eq__(self, o):
        try:
            o = Sqrt3Gaussian.coerce(o)
        except TypeError:
            return NotImplemented
        return self._t() == o._t()

    def __hash__(self):
        return hash(self._t())

    def halves(self) -> tuple[int, int, int, int]:
        """Integer (u, v, s, t) with value ((u + v sqrt3) + i (s + t sqrt3)) / 2."""
        out = tuple(2 * x for x in self._t())
        if any(x.denominator != 1 for x in out):
            raise ValueError("not in Z[i, sqrt3]/2")
        return tuple(int(x) for x in out)

    def __complex__(self):
        s = 3 ** 0.5
        return complex(float(self.a) + float(self.b) * s, float(self.c) + float(self.d) * s)

    def __repr__(self):
        return f"Sqrt3Gaussian({self.a}, {self.b}, {self.c}, {self.d})"


def _twelfth_roots() -> tuple[Sqrt3Gaussian, ...]:
    w = Sqrt3Gaussian(0, Fraction(1, 2), Fraction(1, 2), 0)
    out, x = [], Sqrt3Gaussian(1)
    for _ in range(12):
        out.append(x)
        x = x * w
    return tuple(out)


TWELFTH_ROOTS: tuple[Sqrt3Gaussian, ...] = _twelfth_roots()
"""e^{ik pi/6} for k = 0..11, exact."""


def unit_distance_gaussians(x: Sqrt3Gaussian, max_norm: int = 8) -> list[GaussianInt]:
    """Nonzero Gaussian integers a with |x - a| = 1 exactly, searched up to gnorm(a) <= max_norm."""
    r = isqrt(max_norm)
    out = []
    for a in gaussians_in_box(r):
        if a and a.norm() <= max_norm and (x - a).abs2() == (1, 0):
            out.append(a)
    return out
