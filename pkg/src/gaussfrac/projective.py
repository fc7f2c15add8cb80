"""2x2 Gaussian-integer matrices acting on the projective line.

Points of the projective line are pairs (w1 : w2); a complex number z is the
pair (z : 1).  Distances are chordal, so the point at infinity needs no special
case.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2
from gmpy2 import mpc

from .bigcomplex import BigComplex
from .errors import PoleHit, ShapeViolation
from .gaussint import GaussianInt, GaussianRational, gnorm
from .qpair import INITIAL, Block, finite_omega, qpair_states

PROBE_PREC = 256


@dataclass(frozen=True)
class GMatrix:
    p: GaussianInt
    q: GaussianInt
    r: GaussianInt
    s: GaussianInt

    @classmethod
    def of(cls, p, q, r, s) -> GMatrix:
        return cls(*(GaussianInt.coerce(x) for x in (p, q, r, s)))

    def __matmul__(self, o: GMatrix) -> GMatrix:
        return GMatrix(
            self.p * o.p + self.q * o.r,
            self.p * o.q + self.q * o.s,
            self.r * o.p + self.s * o.r,
            self.r * o.q + self.s * o.s,
        )

    def det(self) -> GaussianInt:
        return self.p * self.s - self.q * self.r

    def transpose(self) -> GMatrix:
        return GMatrix(self.p, self.r, self.q, self.s)

    def columns(self) -> tuple[tuple[GaussianInt, GaussianInt], tuple[GaussianInt, GaussianInt]]:
        return (self.p, self.r), (self.q, self.s)

    def rows(self) -> tuple[tuple[GaussianInt, GaussianInt], tuple[GaussianInt, GaussianInt]]:
        return (self.p, self.q), (self.r, self.s)

    def to_json(self) -> list[list[str]]:
        from .gaussint import format_gaussian

        return [[format_gaussian(x) for x in row] for row in self.rows()]


IDENTITY = GMatrix.of(1, 0, 0, 1)
RHO = GMatrix.of(0, -1, 1, 0)


def U(a) -> GMatrix:
    return GMatrix.of(1, a, 0, 1)


def L(a) -> GMatrix:
    return GMatrix.of(1, 0, a, 1)


def g_of_block(block: Iterable) -> GMatrix:
    """U_{b1} L_{b2} U_{b3} ... : factors alternate starting with U."""
    m = IDENTITY
    for k, b in enumerate(block):
        m = m @ (U(b) if k % 2 == 0 else L(b))
    return m


def rho_identity(g: GMatrix) -> bool:
    """t(g) rho g == rho, which holds exactly when det g = 1."""
    return g.transpose() @ RHO @ g == RHO


def mobius_apply(m: GMatrix, z):
    """(p z + q)/(r z + s): exact for Gaussian rationals, certified for BigComplex."""
    if isinstance(z, BigComplex):
        den = z * BigComplex.exact(m.r, z.prec) + BigComplex.exact(m.s, z.prec)
        lo, _ = den.abs_bounds()
        if lo == 0:
            raise PoleHit("r z + s may vanish")
        return (z * BigComplex.exact(m.p, z.prec) + BigComplex.exact(m.q, z.prec)) / den
    if hasattr(z, "shift_invert"):
        from .surd import surd_mobius

        return surd_mobius(z, m.p, m.q, m.r, m.s)
    z = GaussianRational.coerce(z)
    den = z * m.r + m.s
    if not den:
        raise PoleHit("r z + s = 0")
    return (z * m.p + m.q) / den


def remark71_check(block: Iterable) -> bool:
    """Columns of g(block) against the Q-pair of the block read as (a_0, a_1, ...)."""
    block = Block(block)
    g = g_of_block(block)
    l = len(block)
    states = {-1: INITIAL}
    for st in qpair_states(block):
        states[st.n] = st
    if l == 0:
        return g == IDENTITY
    m_odd = l - 1 if (l - 1) % 2 == 1 else l - 2
    m_even = l - 1 if (l - 1) % 2 == 0 else l - 2
    c1, c2 = g.columns()
    s1, s2 = states[m_odd], states[m_even]
    return c1 == (s1.p_cur, s1.q_cur) and c2 == (s2.p_cur, s2.q_cur)


# projective points -------------------------------------------------------------


def _ctx(prec: int):
    return gmpy2.context(precision=prec)


def _to_mpc(x, prec: int) -> mpc:
    if isinstance(x, mpc):
        return x
    if isinstance(x, BigComplex):
        return mpc(x.re, x.im, precision=prec)
    if hasattr(x, "approx"):
        b = x.approx(prec)
        return mpc(b.re, b.im, precision=prec)
    if isinstance(x, (GaussianInt, GaussianRational, int, Fraction)):
        re, im = GaussianRational.coerce(x).parts()
        return mpc(gmpy2.mpq(re.numerator, re.denominator), gmpy2.mpq(im.numerator, im.denominator), precision=prec)
    return mpc(complex(x), precision=prec)


INF = "inf"


def proj_point(z, prec: int = PROBE_PREC) -> tuple[mpc, mpc]:
    """(z : 1), or (1 : 0) for the point at infinity."""
    if isinstance(z, str) and z == INF:
        return mpc(1, precision=prec), mpc(0, precision=prec)
    return _to_mpc(z, prec), mpc(1, precision=prec)


def proj_apply(m: GMatrix, v: tuple[mpc, mpc], prec: int = PROBE_PREC) -> tuple[mpc, mpc]:
    c = _ctx(prec)
    p, q, r, s = (_to_mpc(x, prec) for x in (m.p, m.q, m.r, m.s))
    w1 = c.add(c.mul(p, v[0]), c.mul(q, v[1]))
    w2 = c.add(c.mul(r, v[0]), c.mul(s, v[1]))
    return w1, w2


def chordal(u: tuple[mpc, mpc], v: tuple[mpc, mpc], prec: int = PROBE_PREC) -> float:
    """|u1 v2 - u2 v1| / (|u| |v|); at most 1, zero iff the points coincide."""
    c = _ctx(prec)
    num = c.norm(c.sub(c.mul(u[0], v[1]), c.mul(u[1], v[0])))
    du = c.add(c.norm(u[0]), c.norm(u[1]))
    dv = c.add(c.norm(v[0]), c.norm(v[1]))
    if du == 0 or dv == 0:
        raise ValueError("zero vector is not a projective point")
    return float(c.sqrt(c.div(num, c.mul(du, dv))))


# probes ------------------------------------------------------------------------


@dataclass(frozen=True)
class ProbeTable:
    rows: tuple[tuple, ...]  # (i, label, point, distance)
    passed: bool
    tolerance: float
    detail: dict

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "tolerance": f"{self.tolerance:.3g}",
            "rows": [
                {"i": i, "series": label, "point": pt, "distance": f"{d:.6e}"} for (i, label, pt, d) in self.rows
            ],
            **self.detail,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "series", "point", "distance"])
        for i, label, pt, d in self.rows:
            w.writerow([i, label, pt, f"{d:.6e}"])
        return buf.getvalue()


def _fmt_point(z) -> str:
    if isinstance(z, str):
        return z
    z = complex(z)
    return f"{z.real:.6g}{z.imag:+.6g}i"


def theorem72_probe(
    zeta,
    quotients: Sequence,
    prefix_lengths: Sequence[int],
    test_points: Sequence,
    tolerance: float = 1e-6,
    prec: int = PROBE_PREC,
) -> ProbeTable:
    """Chordal distances from g(prefix)(z) to zeta for growing prefixes of zeta's expansion.

    Passes when, for every test point, the distances strictly decrease along the
    prefix lengths and the last one is below tolerance.
    """
    for z in test_points:
        if abs(complex(z)) <= 1:
            raise ValueError("test points need |z| > 1")
    target = proj_point(zeta, prec)
    rows, ok = [], True
    for z in test_points:
        v = proj_point(z, prec)
        dists = []
        for L_ in prefix_lengths:
            if L_ > len(quotients):
                raise ValueError(f"prefix length {L_} exceeds the {len(quotients)} known quotients")
            img = proj_apply(g_of_block(quotients[:L_]), v, prec)
            d = chordal(img, target, prec)
            dists.append(d)
            rows.append((L_, "g(prefix)(z)->pi(zeta)", _fmt_point(z), d))
        ok &= all(b < a for a, b in zip(dists, dists[1:])) and dists[-1] < tolerance
    return ProbeTable(tuple(rows), ok, tolerance, {"prefix_lengths": list(prefix_lengths)})


def _shape_check(x: Block, alphas: list[Block], betas: list[Block], s_idx: list[int]) -> None:
    for i, (a, b, s) in enumerate(zip(alphas, betas, s_idx)):
        if len(a) % 2 or len(b) % 2 or not a or not b:
            raise ShapeViolation(f"i={i}: alpha and beta blocks must have positive even length", clause="i")
        if gnorm(a[0]) <= 1 or gnorm(b[0]) <= 1:
            raise ShapeViolation(f"i={i}: first entries need modulus > 1", clause="i")
        if gnorm(a[-1]) <= 4:
            raise ShapeViolation(f"i={i}: last entry of alpha block needs modulus > 2", clause="i")
        if s <= 0 or s % 2:
            raise ShapeViolation(f"i={i}: s_i = {s} must be even and positive", clause="ii")
        end = s + len(a) + len(b)
        if tuple(x[s:end]) != tuple(a.reversed() + b):
            raise ShapeViolation(f"i={i}: reversed alpha followed by beta does not occur at {s}", clause="ii")
        if gnorm(x[s - 1]) <= 4:
            raise ShapeViolation(f"i={i}: junction entry x_{s - 1} needs modulus > 2", clause="ii")
        if end >= len(x) or gnorm(x[end]) <= 4:
            raise ShapeViolation(f"i={i}: junction entry x_{end} needs modulus > 2", clause="ii")
        if i + 1 < len(s_idx) and not s_idx[i + 1] > end:
            raise ShapeViolation(f"i={i}: s_(i+1) must exceed {end}", clause="ii")


def prop75_sequence(
    alpha: Sequence, beta: Sequence, lengths: Sequence[int], junction=4, tail: int = 8
) -> tuple[Block, list[int]]:
    """An x sequence containing reversed(alpha_i) beta_i at even offsets s_i, separated by junction entries."""
    alpha, beta = Block(alpha), Block(beta)
    j = GaussianInt.coerce(junction)
    x, s_idx = [GaussianInt(0), j], []
    for l in lengths:
        if len(x) % 2:
            x.append(j)
        s_idx.append(len(x))
        x.extend(alpha[:l].reversed() + beta[:l])
        x.extend([j, j])
    x.extend([j] * tail)
    return Block(x), s_idx


def prop75_probe(
    xseq: Sequence,
    alpha: Sequence,
    beta: Sequence,
    s_indices: Sequence[int],
    lengths: Sequence[int] | None = None,
    sample_points: Sequence = (INF, 0, complex(1, 2)),
    tolerance: float = 1e-3,
    prec: int = PROBE_PREC,
) -> ProbeTable:
    """Track g_i = g(alpha_i) t(g(xi_i)) on generic points and on rho(pi(xi)).

    alpha_i and beta_i are the initial blocks of alpha and beta of length lengths[i]
    (default 2, 4, 6, ...); xi is approximated by the full finite x sequence.
    """
    x, alpha, beta = Block(xseq), Block(alpha), Block(beta)
    s_idx = list(s_indices)
    if not s_idx:
        raise ShapeViolation("need at least one index s_i", clause="ii")
    lengths = list(lengths) if lengths is not None else [2 * (i + 1) for i in range(len(s_idx))]
    alphas = [alpha[:l] for l in lengths]
    betas = [beta[:l] for l in lengths]
    for l in lengths:
        if l > len(alpha) or l > len(beta):
            raise ShapeViolation(f"length {l} exceeds the supplied alpha/beta sequences", clause="i")
    _shape_check(x, alphas, betas, s_idx)
    xi = finite_omega(x)
    alpha_pt = proj_point(finite_omega(alpha), prec)
    beta_rho = proj_apply(RHO, proj_point(finite_omega(beta), prec), prec)
    xi_rho = proj_apply(RHO, proj_point(xi, prec), prec)
    rows = []
    last_generic, last_special = [], None
    for i, (a, s) in enumerate(zip(alphas, s_idx)):
        g = g_of_block(a) @ g_of_block(x[:s]).transpose()
        gen = []
        for z in sample_points:
            d = chordal(proj_apply(g, proj_point(z, prec), prec), alpha_pt, prec)
            rows.append((i, "generic->pi(alpha)", _fmt_point(z), d))
            gen.append(d)
        d = chordal(proj_apply(g, xi_rho, prec), beta_rho, prec)
        rows.append((i, "rho(pi(xi))->rho(pi(beta))", "rho(pi(xi))", d))
        last_generic, last_special = gen, d
    ok = max(last_generic) < tolerance and last_special < tolerance
    return ProbeTable(tuple(rows), ok, tolerance, {"s_indices": s_idx, "lengths": lengths})
