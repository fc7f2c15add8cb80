"""Quadratic surds over the Gaussian integers and periodicity detection.

A surd is stored as a normalized triple (alpha, beta, gamma) together with a
sign s selecting the root (-beta + s*sqrt(D)) / (2 alpha), where sqrt(D) is the
principal square root of D = beta^2 - 4 alpha gamma.  Two surds are equal iff
their normalized triples and signs agree, which makes repeat detection exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor
from typing import Callable, Sequence

from gmpy2 import mpq

from .bigcomplex import DEFAULT_PREC, BigComplex
from .cfalgo import PREC_CAP, Algorithm, choose
from .errors import DegenerateDisc, ExceededBudget, PrecisionExhausted, RationalRoot, ZeroDenominator
from .gaussint import (
    ONE,
    GaussianInt,
    GaussianRational,
    canonical_unit,
    format_gaussian,
    gaussian_isqrt,
    gdivmod,
    ggcd,
    gq_reduce,
    parse_complex_rational,
    parse_gaussian,
)
from .qpair import qpair_states
from .quadreal import is_principal_multiple, sign_re_lambda_sqrt

START_BITS = 64
HALF = Fraction(1, 2)


def _disc(a: GaussianInt, b: GaussianInt, c: GaussianInt) -> GaussianInt:
    return b * b - 4 * a * c


def _check_irreducible(alpha: GaussianInt, disc: GaussianInt) -> None:
    if not alpha:
        raise RationalRoot("leading coefficient is zero")
    if not disc:
        raise DegenerateDisc("repeated root (zero discriminant)")
    if gaussian_isqrt(disc) is not None:
        raise RationalRoot("discriminant is a square; the roots are Gaussian rationals")


def _bits(g: GaussianInt) -> int:
    return max(abs(g.re).bit_length(), abs(g.im).bit_length(), 1)


@lru_cache(maxsize=8192)
def _root_approx(alpha: GaussianInt, beta: GaussianInt, gamma: GaussianInt, sign: int, bits: int) -> BigComplex:
    disc = _disc(alpha, beta, gamma)
    p = bits + _bits(disc) // 2 + 32
    sq = BigComplex.exact(disc, p + _bits(disc) + 2).sqrt().with_prec(p)
    num = (sq if sign > 0 else -sq) - BigComplex.exact(beta, p)
    return (num / BigComplex.exact(2 * alpha, p)).with_prec(bits)


def _scale_to_int(vals: Sequence) -> list[GaussianInt]:
    """Multiply Gaussian rationals (or Fractions) by a common positive integer."""
    qs = [GaussianRational.coerce(v) for v in vals]
    den = 1
    for q in qs:
        d = q.den.norm()
        den = den * d // _igcd(den, d)
    out = []
    for q in qs:
        n = q.num * q.den.conj() * (den // q.den.norm())
        out.append(n)
    return out


def _igcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


class QuadraticSurd:
    """Exact root of alpha z^2 + beta z + gamma, normalized; build with surd_normalize."""

    __slots__ = ("alpha", "beta", "gamma", "sign", "disc")

    def __init__(self, alpha: GaussianInt, beta: GaussianInt, gamma: GaussianInt, sign: int):
        self.alpha, self.beta, self.gamma, self.sign = alpha, beta, gamma, sign
        self.disc = _disc(alpha, beta, gamma)

    # identity
    def key(self) -> tuple:
        return (self.alpha, self.beta, self.gamma, self.sign)

    def __eq__(self, o):
        return isinstance(o, QuadraticSurd) and self.key() == o.key()

    def __hash__(self):
        return hash(self.key())

    def coefficients(self) -> tuple[GaussianInt, GaussianInt, GaussianInt]:
        return (self.alpha, self.beta, self.gamma)

    def other_root(self) -> QuadraticSurd:
        return QuadraticSurd(self.alpha, self.beta, self.gamma, -self.sign)

    # numerics
    def approx(self, bits: int = DEFAULT_PREC) -> BigComplex:
        return _root_approx(self.alpha, self.beta, self.gamma, self.sign, bits)

    @property
    def branch(self) -> BigComplex:
        """Approximation whose radius is below half the root separation."""
        bits = DEFAULT_PREC
        while True:
            z = self.approx(bits)
            sep = (self.approx(bits) - self.other_root().approx(bits)).abs_bounds()[0]
            if z.radius() * 2 < sep:
                return z
            bits *= 2

    def __complex__(self):
        return complex(self.approx(START_BITS))

    def __repr__(self):
        return (
            f"QuadraticSurd({format_gaussian(self.alpha)}, {format_gaussian(self.beta)}, "
            f"{format_gaussian(self.gamma)}, sign={self.sign:+d}) ~ {complex(self):.6g}"
        )

    def to_json(self) -> dict:
        z = complex(self)
        return {
            "alpha": format_gaussian(self.alpha),
            "beta": format_gaussian(self.beta),
            "gamma": format_gaussian(self.gamma),
            "branch_hint": {"re": f"{z.real:.12g}", "im": f"{z.imag:.12g}"},
        }

    # point protocol used by the choice functions
    def near(self) -> tuple[int, int]:
        cr, ci = self.approx(START_BITS).center()
        return floor(cr + HALF), floor(ci + HALF)

    def sign_linear(self, w, c) -> int:
        def on_curve():
            # Re(z conj w) = c  <=>  conj z = (2c - z conj w)/w
            wr, wi = Fraction(w[0]), Fraction(w[1])
            m = _scale_to_int([(-wr, wi), 2 * Fraction(c), 0, (wr, wi)])
            return self._on_conj_curve(*m)

        return self._decide(lambda z: z.sign_linear(w, c), on_curve)

    def sign_circle(self, m, r2) -> int:
        def on_curve():
            # |z - m|^2 = r2  <=>  conj z = (conj(m) z + r2 - |m|^2)/(z - m)
            mr, mi = Fraction(m[0]), Fraction(m[1])
            k = Fraction(r2) - mr * mr - mi * mi
            e = _scale_to_int([(mr, -mi), k, 1, (-mr, -mi)])
            return self._on_conj_curve(*e)

        return self._decide(lambda z: z.sign_circle(m, r2), on_curve)

    def _decide(self, pred: Callable, on_curve: Callable[[], bool]) -> int:
        bits, checked = START_BITS, False
        while True:
            s = pred(self.approx(bits))
            if s is not None:
                return s
            if not checked:
                if on_curve():
                    return 0
                checked = True
            bits *= 2
            if bits > PREC_CAP:
                raise PrecisionExhausted("surd predicate undecided at the precision cap")

    def _on_conj_curve(self, m11, m12, m21, m22) -> bool:
        """Exact test of conj(z) == (m11 z + m12)/(m21 z + m22)."""
        A, B, C = self.alpha.conj(), self.beta.conj(), self.gamma.conj()
        q2 = A * m11 * m11 + B * m11 * m21 + C * m21 * m21
        q1 = 2 * A * m11 * m12 + B * (m11 * m22 + m12 * m21) + 2 * C * m21 * m22
        q0 = A * m12 * m12 + B * m12 * m22 + C * m22 * m22
        a, b, c = self.alpha, self.beta, self.gamma
        if not (q2 * b == q1 * a and q2 * c == q0 * a and q1 * c == q0 * b):
            return False
        # M maps {z, z'} onto {conj z, conj z'}; decide whether z is fixed or swapped
        bits = START_BITS
        while bits <= PREC_CAP:
            z, z2 = self.approx(bits), self.other_root().approx(bits)
            w = (z * BigComplex.exact(m11) + BigComplex.exact(m12)) / (
                z * BigComplex.exact(m21) + BigComplex.exact(m22)
            )
            d_same = (w - z.conj()).abs_bounds()
            d_other = (w - z2.conj()).abs_bounds()
            if d_same[1] < d_other[0]:
                return True
            if d_other[1] < d_same[0]:
                return False
            bits *= 2
        raise PrecisionExhausted("could not separate conjugate roots")

    # dynamics
    def raw_shift_invert(self, a: GaussianInt) -> tuple[GaussianInt, GaussianInt, GaussianInt]:
        al, be, ga = self.alpha, self.beta, self.gamma
        return (al * a * a + be * a + ga, 2 * al * a + be, al)

    def shift_invert(self, a) -> QuadraticSurd:
        """The surd 1/(z - a)."""
        a = GaussianInt.coerce(a)
        A, B, C = self.raw_shift_invert(a)
        # w = (-B - s sqrt D)/(2A): the branch sign flips
        return _normalize_signed(A, B, C, -self.sign)


def _normalize_signed(alpha, beta, gamma, sign: int) -> QuadraticSurd:
    """Normalize a triple whose selected root is (-beta + sign*sqrt(D))/(2 alpha)."""
    disc = _disc(alpha, beta, gamma)
    g = ggcd(alpha, beta, gamma)
    if g != ONE:
        alpha, beta, gamma = (gdivmod(x, g)[0] for x in (alpha, beta, gamma))
    u = canonical_unit(alpha)
    # scaling by lam = u/g turns sqrt(D) into lam*sqrt(D), which may be minus the principal root
    lam = u * g.conj()
    if not is_principal_multiple(lam.re, lam.im, disc.re, disc.im):
        sign = -sign
    return QuadraticSurd(alpha * u, beta * u, gamma * u, sign)


def _default_sign(alpha, beta, gamma) -> int:
    """Root with larger real part, ties by larger imaginary part."""
    disc = _disc(alpha, beta, gamma)
    lam = alpha.conj()  # 1/alpha up to a positive factor
    s = sign_re_lambda_sqrt(lam.re, lam.im, disc.re, disc.im)
    if s == 0:
        mi = lam * GaussianInt(0, -1)
        s = sign_re_lambda_sqrt(mi.re, mi.im, disc.re, disc.im)
    return 1 if s >= 0 else -1


def _as_big(x) -> Callable[[int], BigComplex]:
    if x is None:
        return None
    if callable(x):
        return x
    if isinstance(x, BigComplex):
        return lambda bits: x
    if isinstance(x, str):
        x = complex(*(float(t) for t in parse_complex_rational(x)))
    if isinstance(x, QuadraticSurd):
        return x.approx
    b = BigComplex.exact(x) if not isinstance(x, (complex, float)) else BigComplex.exact(complex(x))
    return lambda bits: b


def _identify(alpha, beta, gamma, approx_fn: Callable[[int], BigComplex]) -> int:
    """Sign of the root closest to the approximations produced by approx_fn."""
    bits = START_BITS
    while bits <= PREC_CAP:
        y = approx_fn(bits)
        rp = _root_approx(alpha, beta, gamma, 1, bits)
        rm = _root_approx(alpha, beta, gamma, -1, bits)
        dp, dm = (y - rp).abs_bounds(), (y - rm).abs_bounds()
        if dp[1] < dm[0]:
            return 1
        if dm[1] < dp[0]:
            return -1
        if y.is_exact() and bits >= 4 * START_BITS and dp[0] <= dm[1] and dm[0] <= dp[1]:
            if abs(dp[1] - dm[1]) < y.radius() + rp.radius() + rm.radius() + mpq(1, 1 << bits):
                raise ValueError("branch hint is equidistant from both roots")
        bits *= 2
    raise PrecisionExhausted("could not identify the root branch")


def surd_normalize(alpha, beta, gamma, approx=None) -> QuadraticSurd:
    """Normalized surd for alpha z^2 + beta z + gamma, branch nearest approx.

    Without approx the root with larger real part (then larger imaginary part) is taken.
    """
    alpha, beta, gamma = (GaussianInt.coerce(x) for x in (alpha, beta, gamma))
    _check_irreducible(alpha, _disc(alpha, beta, gamma))
    fn = _as_big(approx)
    sign = _default_sign(alpha, beta, gamma) if fn is None else _identify(alpha, beta, gamma, fn)
    return _normalize_signed(alpha, beta, gamma, sign)


def surd_shift_invert(s: QuadraticSurd, a) -> QuadraticSurd:
    return s.shift_invert(a)


def surd_eval(s: QuadraticSurd, bits: int = 64) -> BigComplex:
    if bits < 32:
        raise ValueError("bits must be >= 32")
    return s.approx(bits)


def parse_surd(text: str, branch: str | None = None) -> QuadraticSurd:
    parts = [t for t in text.split(",")]
    if len(parts) != 3:
        raise ValueError("surd must be given as three comma-separated coefficients")
    coeffs = [parse_gaussian(t) for t in parts]
    hint = None
    if branch:
        hint = complex(*(float(t) for t in branch.split(","))) if "," in branch else branch
    return surd_normalize(*coeffs, approx=hint)


def surd_from_json(obj: dict) -> QuadraticSurd:
    hint = obj.get("branch_hint")
    if isinstance(hint, dict):
        hint = complex(float(hint["re"]), float(hint["im"]))
    return surd_normalize(parse_gaussian(obj["alpha"]), parse_gaussian(obj["beta"]), parse_gaussian(obj["gamma"]), hint)


# Moebius images -------------------------------------------------------------


def surd_mobius(s: QuadraticSurd, p, q, r, t) -> QuadraticSurd:
    """The surd (p z + q)/(r z + t) for Gaussian integers with p t - q r != 0."""
    p, q, r, t = (GaussianInt.coerce(x) for x in (p, q, r, t))
    if not (p * t - q * r):
        raise ZeroDenominator("singular Moebius map")
    A, B, C = s.alpha, s.beta, s.gamma
    # z = (t y - q)/(-r y + p) is the preimage of y
    a2 = A * t * t - B * t * r + C * r * r
    a1 = -2 * A * t * q + B * (t * p + q * r) - 2 * C * r * p
    a0 = A * q * q - B * q * p + C * p * p

    def approx(bits):
        z = s.approx(bits)
        return (z * BigComplex.exact(p, bits) + BigComplex.exact(q, bits)) / (
            z * BigComplex.exact(r, bits) + BigComplex.exact(t, bits)
        )

    return surd_normalize(a2, a1, a0, approx=approx)


# periodicity ----------------------------------------------------------------


@dataclass(frozen=True)
class Periodic:
    preperiod: int
    period: int
    cycle: tuple
    preblock: tuple
    distinct_states: int
    states: tuple

    def to_json(self) -> dict:
        return {
            "preperiod": self.preperiod,
            "period": self.period,
            "cycle": [format_gaussian(a) for a in self.cycle],
            "preblock": [format_gaussian(a) for a in self.preblock],
            "distinct_states": self.distinct_states,
        }


def default_budget(s: QuadraticSurd) -> int:
    return 10 * (s.disc.norm().bit_length() + 20)


def detect_period(s: QuadraticSurd, alg: Algorithm, max_steps: int | None = None) -> Periodic:
    """Iterate z -> 1/(z - f(z)) exactly until a state repeats."""
    budget = default_budget(s) if max_steps is None else max_steps
    seen = {s.key(): 0}
    states = [s]
    quotients: list[GaussianInt] = []
    cur = s
    d0 = s.disc
    for n in range(budget):
        a = choose(alg, cur)
        quotients.append(a)
        A, B, C = cur.raw_shift_invert(a)
        if B * B - 4 * A * C != cur.disc:
            raise AssertionError("discriminant not conserved by the raw transport")
        cur = cur.shift_invert(a)
        # normalization only rescales by a unit u, so D_n = u^2 D_0 = +-D_0
        if cur.disc != d0 and cur.disc != -d0:
            raise AssertionError("normalized discriminant left the unit-square class")
        k = cur.key()
        if k in seen:
            m = seen[k]
            return Periodic(m, n + 1 - m, tuple(quotients[m:]), tuple(quotients[:m]), len(seen), tuple(states))
        seen[k] = n + 1
        states.append(cur)
    raise ExceededBudget(f"no repeat within {budget} steps", steps=budget)


def _elliptic(t: GaussianInt, det: int) -> bool:
    if det == 1:
        return t.im == 0 and abs(t.re) < 2
    return t.re == 0 and abs(t.im) < 2


def surd_from_periodic(preblock: Sequence, cycle: Sequence) -> QuadraticSurd:
    """The surd whose expansion is preblock followed by cycle repeated forever."""
    cycle = [GaussianInt.coerce(a) for a in cycle]
    preblock = [GaussianInt.coerce(a) for a in preblock]
    if not cycle:
        raise ValueError("cycle must be nonempty")
    st = list(qpair_states(cycle))[-1]
    p1, p2, q1, q2 = st.p_cur, st.p_prev, st.q_cur, st.q_prev
    A, B, C = q1, q2 - p1, -p2
    if not A:
        raise RationalRoot("the cycle's fixed-point equation is linear")
    _check_irreducible(A, _disc(A, B, C))
    det = st.expected_det()
    if _elliptic(p1 + q2, det):
        x = surd_normalize(A, B, C)
    else:
        x = _attracting(A, B, C, q1, q2)
    if not preblock:
        return x
    pre = list(qpair_states(preblock))[-1]
    return surd_mobius(x, pre.p_cur, pre.p_prev, pre.q_cur, pre.q_prev)


def _attracting(A, B, C, q1, q2) -> QuadraticSurd:
    roots = [surd_normalize(A, B, C), None]
    roots[1] = roots[0].other_root()
    bits = START_BITS
    while bits <= PREC_CAP:
        lam = [(r.approx(bits) * BigComplex.exact(q1, bits) + BigComplex.exact(q2, bits)).abs2_bounds() for r in roots]
        for i in (0, 1):
            if lam[i][0] > 1 and lam[1 - i][1] < 1 + (lam[i][0] - 1):
                return roots[i]
        bits *= 2
    raise PrecisionExhausted("could not separate attracting and repelling fixed points")


# exact arithmetic in Q(i)(sqrt D) ---------------------------------------------


class SurdField:
    """Elements u + v*r of Q(i)(r), r the principal square root of a non-square D."""

    def __init__(self, disc: GaussianInt):
        disc = GaussianInt.coerce(disc)
        if gaussian_isqrt(disc) is not None or not disc:
            raise ValueError("D must be a nonzero non-square")
        self.disc = disc

    def elem(self, u=0, v=0) -> SurdElement:
        return SurdElement(self, GaussianRational.coerce(u), GaussianRational.coerce(v))

    def root_of(self, s: QuadraticSurd) -> SurdElement:
        """The surd's root written in this field."""
        # s.disc = w^2 * D for some w in Q(i); sqrt(s.disc) = +-w r
        ratio = gq_reduce(s.disc, ONE) / self.disc
        num_root, den_root = gaussian_isqrt(ratio.num), gaussian_isqrt(ratio.den)
        if num_root is None or den_root is None:
            raise ValueError("surd does not lie in this field")
        w = gq_reduce(num_root, den_root)
        lam = w.num * w.den.conj()
        principal = is_principal_multiple(lam.re, lam.im, self.disc.re, self.disc.im)
        # w * r is principal for s.disc iff principal; the selected root uses s.sign * principal
        sv = s.sign if principal else -s.sign
        two_a = GaussianRational.coerce(2 * s.alpha)
        return SurdElement(self, -GaussianRational.coerce(s.beta) / two_a, w * sv / two_a)


@dataclass(frozen=True)
class SurdElement:
    field: SurdField
    u: GaussianRational
    v: GaussianRational

    def _c(self, o) -> SurdElement:
        if isinstance(o, SurdElement):
            return o
        return self.field.elem(o, 0)

    def __add__(self, o):
        o = self._c(o)
        return SurdElement(self.field, self.u + o.u, self.v + o.v)

    __radd__ = __add__

    def __neg__(self):
        return SurdElement(self.field, -self.u, -self.v)

    def __sub__(self, o):
        return self + (-self._c(o))

    def __rsub__(self, o):
        return self._c(o) - self

    def __mul__(self, o):
        o = self._c(o)
        d = GaussianRational.coerce(self.field.disc)
        return SurdElement(self.field, self.u * o.u + self.v * o.v * d, self.u * o.v + self.v * o.u)

    __rmul__ = __mul__

    def inverse(self) -> SurdElement:
        d = GaussianRational.coerce(self.field.disc)
        n = self.u * self.u - self.v * self.v * d
        if not n:
            raise ZeroDenominator("inverse of zero")
        return SurdElement(self.field, self.u / n, -self.v / n)

    def __truediv__(self, o):
        return self * self._c(o).inverse()

    def __eq__(self, o):
        o = self._c(o)
        return self.u == o.u and self.v == o.v

    def __hash__(self):
        return hash((self.u, self.v))
