"""Choice functions, the expansion driver and iteration-sequence validation.

Every decision is phrased as the sign of one of two predicates on the point z:

* ``sign_linear(w, c)``  = sign(Re(z * conj(w)) - c)
* ``sign_circle(m, r2)`` = sign(|z - m|^2 - r2)

Exact points (Gaussian rationals, quadratic surds) answer these exactly, so ties
are real ties.  ``BigComplex`` points answer only when the error disc is clear of
the boundary and otherwise raise ``AmbiguousChoice``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Iterable, Sequence

from .bigcomplex import DEFAULT_PREC, BigComplex
from .errors import AmbiguousChoice, InexactDegeneracy, PoleHit, PrecisionExhausted
from .gaussint import (
    GaussianInt,
    GaussianRational,
    Sqrt3Gaussian,
    TWELFTH_ROOTS,
    format_gaussian,
    gq_reduce,
    parse_complex_rational,
)
from .qpair import INITIAL, qpair_convergent, qpair_extend
from .quadreal import sign_a_plus_b_sqrt

PREC_CAP = 4096
HALF = Fraction(1, 2)

Vec = tuple  # (Fraction, Fraction)


# points ---------------------------------------------------------------------


class RationalPoint:
    """z = num/den kept unreduced; Euclid-style steps keep the sizes bounded."""

    __slots__ = ("num", "den", "_nr", "_ni", "_d")

    def __init__(self, num: GaussianInt, den: GaussianInt):
        if not den:
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = num, den
        n = num * den.conj()
        self._nr, self._ni, self._d = n.re, n.im, den.norm()

    @classmethod
    def of(cls, x) -> RationalPoint:
        if isinstance(x, RationalPoint):
            return x
        q = GaussianRational.coerce(x)
        return cls(q.num, q.den)

    def sign_linear(self, w: Vec, c) -> int:
        f = self._nr * Fraction(w[0]) + self._ni * Fraction(w[1]) - Fraction(c) * self._d
        return (f > 0) - (f < 0)

    def sign_circle(self, m: Vec, r2) -> int:
        mr, mi = Fraction(m[0]), Fraction(m[1])
        d = self._d
        er, ei = self._nr - mr * d, self._ni - mi * d
        f = er * er + ei * ei - Fraction(r2) * d * d
        return (f > 0) - (f < 0)

    def near(self) -> tuple[int, int]:
        d = self._d
        return (2 * self._nr + d) // (2 * d), (2 * self._ni + d) // (2 * d)

    def equals_gaussian(self, a: GaussianInt) -> bool:
        return self.num == a * self.den

    def step(self, a: GaussianInt) -> RationalPoint:
        return RationalPoint(self.den, self.num - a * self.den)

    def value(self) -> GaussianRational:
        return gq_reduce(self.num, self.den)


class ApproxPoint:
    """Adapter turning undecidable BigComplex predicates into AmbiguousChoice."""

    __slots__ = ("z",)

    def __init__(self, z: BigComplex):
        self.z = z

    def sign_linear(self, w: Vec, c) -> int:
        s = self.z.sign_linear(w, c)
        if s is None:
            raise AmbiguousChoice("error disc straddles a line boundary")
        return s

    def sign_circle(self, m: Vec, r2) -> int:
        s = self.z.sign_circle(m, r2)
        if s is None:
            raise AmbiguousChoice("error disc straddles a circle boundary")
        return s

    def near(self) -> tuple[int, int]:
        cr, ci = self.z.center()
        return floor(cr + HALF), floor(ci + HALF)


def as_point(z):
    if isinstance(z, (RationalPoint, ApproxPoint)):
        return z
    if isinstance(z, BigComplex):
        return ApproxPoint(z)
    if hasattr(z, "sign_linear") and hasattr(z, "near"):
        return z
    if isinstance(z, (complex, float)):
        return ApproxPoint(BigComplex.exact(z))
    return RationalPoint.of(z)


# geometry helpers -------------------------------------------------------------


def _round_set(z, w: Vec, offset, guess: int) -> list[int]:
    """Integers k minimizing |t - k| where t = Re(z conj(w)) - offset."""
    k = guess
    for _ in range(1 << 20):
        lo = z.sign_linear(w, offset + k - HALF)
        if lo < 0:
            k -= 1
            continue
        hi = z.sign_linear(w, offset + k + HALF)
        if hi > 0:
            k += 1
            continue
        if lo == 0:
            return [k - 1, k]
        if hi == 0:
            return [k, k + 1]
        return [k]
    raise AssertionError("rounding did not settle")


def _cmp_dist(z, a: GaussianInt, b: GaussianInt, d: Vec = (0, 0)) -> int:
    """sign(|z - d - a|^2 - |z - d - b|^2)."""
    dr, di = Fraction(d[0]), Fraction(d[1])
    na = (a.re + dr) ** 2 + (a.im + di) ** 2
    nb = (b.re + dr) ** 2 + (b.im + di) ** 2
    return -z.sign_linear((a.re - b.re, a.im - b.im), (na - nb) / 2)


def _tournament(z, cands: Iterable[GaussianInt], d: Vec = (0, 0)) -> list[GaussianInt]:
    best: list[GaussianInt] = []
    for c in cands:
        if not best:
            best = [c]
            continue
        s = _cmp_dist(z, c, best[0], d)
        if s < 0:
            best = [c]
        elif s == 0:
            best.append(c)
    return sorted(best, key=GaussianInt.key)


def _nearest_integers(z) -> list[GaussianInt]:
    cx, cy = z.near()
    xs = _round_set(z, (1, 0), 0, cx)
    ys = _round_set(z, (0, 1), 0, cy)
    return sorted((GaussianInt(x, y) for x in xs for y in ys), key=GaussianInt.key)


def _nearest_in_coset(z, shift: int) -> list[GaussianInt]:
    """Nearest points of shift + (1+i)G; shift 0 gives even, 1 gives odd integers."""
    cx, cy = z.near()
    # u = (z - shift)/(1+i): Re u = (x + y - shift)/2, Im u = (y - x + shift)/2
    ur = _round_set(z, (HALF, HALF), Fraction(shift, 2), (cx + cy - shift) // 2)
    ui = _round_set(z, (-HALF, HALF), Fraction(-shift, 2), (cy - cx + shift) // 2)
    out = [GaussianInt(shift + m - n, m + n) for m in ur for n in ui]
    return sorted(out, key=GaussianInt.key)


# algorithms -----------------------------------------------------------------


class Algorithm:
    name = "?"

    def choice_set(self, z) -> list[GaussianInt]:
        raise NotImplementedError

    def params(self) -> dict:
        return {}

    def to_json(self) -> dict:
        return {"name": self.name, **self.params()}

    @property
    def contractive(self) -> bool:
        """Whether the fundamental set lies in a disc of radius < 1."""
        return False

    def __eq__(self, o):
        return type(self) is type(o) and self.params() == o.params()

    def __hash__(self):
        return hash((self.name, tuple(sorted(self.params().items()))))

    def __repr__(self):
        p = ", ".join(f"{k}={v}" for k, v in self.params().items())
        return f"{type(self).__name__}({p})"


class Hurwitz(Algorithm):
    name = "hurwitz"

    def choice_set(self, z) -> list[GaussianInt]:
        if isinstance(z, RationalPoint):
            d = z._d
            out = []
            for n in (z._nr, z._ni):
                t = 2 * n + d
                k = t // (2 * d)
                out.append([k - 1, k] if t % (2 * d) == 0 else [k])
            return [GaussianInt(x, y) for x in out[0] for y in out[1]]
        return _nearest_integers(z)

    @property
    def contractive(self) -> bool:
        return True


@dataclass(frozen=True, eq=False)
class ShiftedHurwitz(Algorithm):
    """Nearest Gaussian integer to z - d among those within distance r of z."""

    d: tuple = (HALF, Fraction(0))
    r2: Fraction = Fraction(1)
    name = "shifted-hurwitz"

    def __post_init__(self):
        object.__setattr__(self, "d", (Fraction(self.d[0]), Fraction(self.d[1])))
        object.__setattr__(self, "r2", Fraction(self.r2))
        if not (HALF <= self.r2 <= 1):
            raise ValueError("r must lie in [1/sqrt2, 1]")

    @classmethod
    def make(cls, d="1/2", r="1") -> ShiftedHurwitz:
        dv = parse_complex_rational(d) if isinstance(d, str) else d
        if isinstance(dv, (int, float, Fraction)):
            dv = (Fraction(dv), Fraction(0))
        rv = Fraction(r) if not isinstance(r, float) else Fraction(str(r))
        return cls(tuple(dv), rv * rv)

    def params(self) -> dict:
        return {"d": _fmt_complex(self.d), "r2": str(self.r2)}

    def choice_set(self, z) -> list[GaussianInt]:
        cx, cy = z.near()
        cands = [
            GaussianInt(x, y)
            for x in range(cx - 2, cx + 3)
            for y in range(cy - 2, cy + 3)
            if z.sign_circle((x, y), self.r2) <= 0
        ]
        if z.sign_circle((0, 0), 1) >= 0:
            # on |z| = 1 the point 0 can be the nearest candidate; it would stall the iteration
            cands = [a for a in cands if a]
        return _tournament(z, cands, self.d)

    @property
    def contractive(self) -> bool:
        # |d| < 1 - 1/sqrt2  <=>  |d|^2 < 3/2 - sqrt2
        d2 = self.d[0] ** 2 + self.d[1] ** 2
        return sign_a_plus_b_sqrt(d2 - Fraction(3, 2), 1, 2) < 0


class NearestEven(Algorithm):
    name = "nearest-even"

    def choice_set(self, z) -> list[GaussianInt]:
        return _nearest_in_coset(z, 0)


class FirstQuadrant(Algorithm):
    name = "first-quadrant"

    def choice_set(self, z) -> list[GaussianInt]:
        cx, cy = z.near()
        x0 = _floor_coord(z, (1, 0), cx)
        y0 = _floor_coord(z, (0, 1), cy)
        z0 = GaussianInt(x0, y0)
        if z.sign_circle((x0, y0), 1) < 0:
            return [z0]
        s = _cmp_dist(z, z0 + 1, z0 + GaussianInt(0, 1))
        return [z0 + GaussianInt(0, 1)] if s > 0 else [z0 + 1]


def _floor_coord(z, w: Vec, guess: int) -> int:
    k = guess
    while z.sign_linear(w, k) < 0:
        k -= 1
    while z.sign_linear(w, k + 1) >= 0:
        k += 1
    return k


PPOI_P = tuple(
    (Fraction(sx, 6), Fraction(sy, 2)) for sx in (-1, 1) for sy in (-1, 1)
) + tuple((Fraction(sx, 2), Fraction(sy, 6)) for sx in (-1, 1) for sy in (-1, 1))
PPOI_R2 = Fraction(1, 9)
PPOI_CORNERS = tuple((Fraction(sx, 2), Fraction(sy, 2)) for sx in (-1, 1) for sy in (-1, 1))


def _in_R_at(z, c: Vec) -> bool:
    return all(z.sign_circle((c[0] + p[0], c[1] + p[1]), PPOI_R2) >= 0 for p in PPOI_P)


def _in_R_about(z, z0: GaussianInt) -> bool:
    return _in_R_at(z, (z0.re, z0.im))


class PPOI(Algorithm):
    """Nearest integer, unless z sits in the star R about the centre of its unit cell; then nearest odd.

    The cell of z is the square [m, m+1] x [n, n+1] holding it, so the region that
    triggers an odd choice is c + R for the half-odd centres c.
    """

    name = "ppoi"

    def choice_set(self, z) -> list[GaussianInt]:
        cx, cy = z.near()
        c = (_floor_coord(z, (1, 0), cx) + HALF, _floor_coord(z, (0, 1), cy) + HALF)
        if _in_R_at(z, c):
            return _nearest_in_coset(z, 1)
        return _nearest_integers(z)


class PPOILiteral(Algorithm):
    """Variant measuring R about the nearest integer instead of the cell centre.

    Kept for comparison; it produces long runs of unit quotients.
    """

    name = "ppoi-literal"

    def choice_set(self, z) -> list[GaussianInt]:
        near = _nearest_integers(z)
        if _in_R_about(z, near[0]):
            return _nearest_in_coset(z, 1)
        return near


ALGORITHMS = {
    "hurwitz": Hurwitz,
    "shifted-hurwitz": ShiftedHurwitz,
    "nearest-even": NearestEven,
    "first-quadrant": FirstQuadrant,
    "ppoi": PPOI,
    "ppoi-literal": PPOILiteral,
}


def make_algorithm(name: str, d: str = "1/2", r: str = "1") -> Algorithm:
    key = name.lower().replace("_", "-")
    aliases = {"shifted": "shifted-hurwitz", "even": "nearest-even", "firstquadrant": "first-quadrant"}
    key = aliases.get(key, key)
    if key not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {name!r}")
    if key == "shifted-hurwitz":
        return ShiftedHurwitz.make(d, r)
    return ALGORITHMS[key]()


def _fmt_complex(v: Vec) -> str:
    re_, im_ = v
    if im_ == 0:
        return str(re_)
    sign = "+" if im_ > 0 else "-"
    return f"{re_}{sign}{abs(im_)}i" if re_ else f"{im_}i"


def choose(alg: Algorithm, z) -> GaussianInt:
    """The algorithm's partial quotient for z, ties resolved by `pick`."""
    return pick(alg.choice_set(as_point(z)))


def pick(cands: list[GaussianInt]) -> GaussianInt:
    """Tie rule: a nonzero candidate if any, then smallest (re, im).

    Zero only ties when |z| <= 1, and choosing it there would stall the iteration.
    """
    return next((a for a in cands if a), cands[0])


def in_ppoi_R(w) -> bool:
    """Membership of w (already reduced into the unit square) in the region R."""
    return _in_R_about(as_point(w), GaussianInt(0, 0))


# expansions -----------------------------------------------------------------


@dataclass(frozen=True)
class Expansion:
    algorithm: Algorithm
    quotients: tuple
    iterates: tuple
    qpairs: tuple
    terminated: bool
    termination_index: int | None = None
    states: tuple = field(default=(), repr=False)

    def convergents(self) -> list[GaussianRational | None]:
        out = []
        for s in self.qpairs:
            out.append(qpair_convergent(s) if s.q_cur else None)
        return out

    def to_json(self, with_iterates: bool = False, digits: int = 30) -> dict:
        obj = {
            "algorithm": self.algorithm.to_json(),
            "quotients": [format_gaussian(a) for a in self.quotients],
            "convergents": [None if c is None else str(c) for c in self.convergents()],
            "terminated": self.terminated,
        }
        if self.terminated:
            obj["termination_index"] = self.termination_index
        if with_iterates:
            obj["iterates"] = [z.to_json(digits) for z in self.iterates]
        return obj


def expand(
    alg: Algorithm,
    z,
    max_depth: int,
    *,
    prec: int = DEFAULT_PREC,
    cap: int = PREC_CAP,
    keep_iterates: bool = True,
) -> Expansion:
    """Expand z with respect to alg for up to max_depth partial quotients.

    Exact inputs (Gaussian integers/rationals, quadratic surds, exact BigComplex)
    are iterated exactly; a BigComplex with positive radius is iterated with
    certified arithmetic, replaying at doubled precision on ambiguity.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    if hasattr(z, "shift_invert"):
        return _expand_surd(alg, z, max_depth, prec, keep_iterates)
    if isinstance(z, BigComplex):
        if z.is_exact():
            cr, ci = z.center()
            q = GaussianRational.coerce((Fraction(int(cr.numerator), int(cr.denominator)),
                                         Fraction(int(ci.numerator), int(ci.denominator))))
            return _expand_rational(alg, q, max_depth, prec, keep_iterates)
        return _expand_approx(alg, z, max_depth, prec, cap, keep_iterates)
    if isinstance(z, (float, complex)):
        z = GaussianRational.coerce((Fraction(complex(z).real), Fraction(complex(z).imag)))
    return _expand_rational(alg, z, max_depth, prec, keep_iterates)


def _expand_rational(alg, z, max_depth, prec, keep_iterates) -> Expansion:
    point = RationalPoint.of(z)
    quotients, iterates, qpairs = [], [], []
    state = INITIAL
    for n in range(max_depth):
        cs = alg.choice_set(point)
        hit = next((a for a in cs if point.equals_gaussian(a)), None)
        a = hit if hit is not None else pick(cs)
        quotients.append(a)
        state = qpair_extend(state, a)
        qpairs.append(state)
        if keep_iterates:
            iterates.append(BigComplex.exact(point.value(), prec))
        if hit is not None:
            return Expansion(alg, tuple(quotients), tuple(iterates), tuple(qpairs), True, n)
        point = point.step(a)
    return Expansion(alg, tuple(quotients), tuple(iterates), tuple(qpairs), False, None)


def _expand_surd(alg, s, max_depth, prec, keep_iterates) -> Expansion:
    quotients, iterates, qpairs, states = [], [], [], []
    state = INITIAL
    for _ in range(max_depth):
        a = pick(alg.choice_set(s))
        quotients.append(a)
        states.append(s)
        state = qpair_extend(state, a)
        qpairs.append(state)
        if keep_iterates:
            iterates.append(s.approx(prec))
        s = s.shift_invert(a)
    return Expansion(alg, tuple(quotients), tuple(iterates), tuple(qpairs), False, None, tuple(states))


def _expand_approx(alg, z: BigComplex, max_depth, prec, cap, keep_iterates) -> Expansion:
    p = max(prec, z.prec)
    while True:
        try:
            return _run_approx(alg, z.with_prec(p), max_depth, keep_iterates)
        except (AmbiguousChoice, PoleHit) as exc:
            partial = getattr(exc, "partial", ())
            p *= 2
            if p > cap:
                err = PrecisionExhausted(
                    f"undecidable after {len(partial)} quotients at the precision cap {cap}: {exc}"
                )
                err.partial = partial
                raise err from exc


def _run_approx(alg, z: BigComplex, max_depth, keep_iterates) -> Expansion:
    quotients, iterates, qpairs = [], [], []
    state = INITIAL
    for _ in range(max_depth):
        try:
            a = pick(alg.choice_set(ApproxPoint(z)))
        except AmbiguousChoice as exc:
            exc.partial = tuple(quotients)
            raise
        quotients.append(a)
        state = qpair_extend(state, a)
        qpairs.append(state)
        if keep_iterates:
            iterates.append(z)
        try:
            z = (z - a).reciprocal()
        except PoleHit as exc:
            exc.partial = tuple(quotients)
            raise
    return Expansion(alg, tuple(quotients), tuple(iterates), tuple(qpairs), False, None)


# iteration sequences ---------------------------------------------------------


@dataclass(frozen=True)
class IterationVerdict:
    kind: str  # "valid-nondegenerate" | "valid-degenerate" | "invalid"
    index: int | None = None
    reason: str = ""
    quotients: tuple = ()
    degenerate_from: int | None = None

    @property
    def valid(self) -> bool:
        return self.kind != "invalid"

    def to_json(self) -> dict:
        obj = {"verdict": self.kind, "quotients": [format_gaussian(a) for a in self.quotients]}
        if self.kind == "invalid":
            obj.update(index=self.index, reason=self.reason)
        if self.degenerate_from is not None:
            obj["degenerate_from"] = self.degenerate_from
        return obj


def _to_exact(x):
    if isinstance(x, Sqrt3Gaussian):
        return x
    if isinstance(x, BigComplex):
        return x
    return Sqrt3Gaussian.coerce(GaussianRational.coerce(x))


def _s3_gaussian(x: Sqrt3Gaussian) -> GaussianInt | None:
    if x.b or x.d or x.a.denominator != 1 or x.c.denominator != 1:
        return None
    return GaussianInt(int(x.a), int(x.c))


def _unit_cmp_exact(x: Sqrt3Gaussian) -> int:
    p, q = x.abs2()
    return sign_a_plus_b_sqrt(p - 1, q, 3)


def _unit_cmp_approx(x: BigComplex) -> int:
    lo, hi = x.abs2_bounds()
    if lo > 1:
        return 1
    if hi < 1:
        return -1
    raise InexactDegeneracy("|z| = 1 cannot be certified from an approximation")


def _gaussian_near(x: BigComplex) -> GaussianInt | None:
    cr, ci = x.center()
    g = GaussianInt(floor(cr + HALF), floor(ci + HALF))
    return g if x.contains(g) else None


def validate_iteration_sequence(zs: Sequence) -> IterationVerdict:
    """Check z_n - 1/z_{n+1} in G (nonzero for n >= 1) and |z_n| >= 1 for n >= 1."""
    if len(zs) < 2:
        raise ValueError("need at least two terms")
    xs = [_to_exact(z) for z in zs]
    quotients = []
    unit_flags = []
    for n, x in enumerate(xs):
        exact = isinstance(x, Sqrt3Gaussian)
        if n >= 1:
            c = _unit_cmp_exact(x) if exact else _unit_cmp_approx(x)
            if c < 0:
                return IterationVerdict("invalid", n, "modulus < 1", tuple(quotients))
            unit_flags.append(c == 0)
        if n + 1 < len(xs):
            nxt = xs[n + 1]
            if isinstance(nxt, Sqrt3Gaussian) and exact:
                if nxt == Sqrt3Gaussian(0):
                    return IterationVerdict("invalid", n + 1, "zero term", tuple(quotients))
                a = _s3_gaussian(x - nxt.reciprocal())
            else:
                bx = x if isinstance(x, BigComplex) else _s3_to_big(x)
                bn = nxt if isinstance(nxt, BigComplex) else _s3_to_big(nxt)
                try:
                    a = _gaussian_near(bx - bn.reciprocal())
                except PoleHit:
                    return IterationVerdict("invalid", n + 1, "zero term", tuple(quotients))
            if a is None:
                return IterationVerdict("invalid", n, "z_n - 1/z_{n+1} is not a Gaussian integer", tuple(quotients))
            if n >= 1 and not a:
                return IterationVerdict("invalid", n, "zero partial quotient", tuple(quotients))
            quotients.append(a)
    start = None
    for k in range(len(unit_flags) - 1, -1, -1):
        if not unit_flags[k]:
            break
        start = k + 1
    if start is not None:
        return IterationVerdict("valid-degenerate", None, "", tuple(quotients), start)
    return IterationVerdict("valid-nondegenerate", None, "", tuple(quotients))


def _s3_to_big(x: Sqrt3Gaussian, prec: int = DEFAULT_PREC) -> BigComplex:
    s3 = BigComplex.exact(3, prec).sqrt()
    return BigComplex.exact((x.a, x.c), prec) + s3 * BigComplex.exact((x.b, x.d), prec)


def is_twelfth_root(x) -> bool:
    return Sqrt3Gaussian.coerce(x) in TWELFTH_ROOTS
