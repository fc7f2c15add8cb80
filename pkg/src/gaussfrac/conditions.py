"""Conditions on consecutive partial quotients, denominator growth and admissible blocks."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import sqrt
from typing import Iterable, Sequence

from scipy.stats import qmc

from .cfalgo import Hurwitz, expand
from .errors import BridgeSearchFailed
from .gaussint import (
    GaussianInt,
    GaussianRational,
    format_gaussian,
    gaussians_by_norm,
    gnorm,
    sigma_y_pow,
)
from .qpair import Block, finite_omega, qpair_states
from .quadreal import GOLDEN, SQRT5_MINUS_1, QuadReal

TAGS = ("H", "H'", "A", "A'")
_TAG_ALIASES = {"h": "H", "hprime": "H'", "h'": "H'", "a": "A", "aprime": "A'", "a'": "A'"}


def normalize_tag(which: str) -> str:
    try:
        return _TAG_ALIASES[which.strip().lower()]
    except KeyError:
        raise ValueError(f"unknown condition {which!r}; expected one of {', '.join(TAGS)}") from None


@dataclass(frozen=True)
class ConditionReport:
    condition: str
    ok: bool
    first_violation: tuple[int, str] | None = None

    def to_json(self) -> dict:
        out = {"condition": self.condition, "ok": self.ok}
        if self.first_violation is not None:
            out["first_violation"] = {"index": self.first_violation[0], "reason": self.first_violation[1]}
        return out


def _fmt(a) -> str:
    return format_gaussian(a)


def _precondition(seq: Sequence[GaussianInt]) -> tuple[int, str] | None:
    for n in range(1, len(seq)):
        if gnorm(seq[n]) <= 1:
            return n, f"|a_{n}| = |{_fmt(seq[n])}| <= 1"
    return None


def _check_H(seq) -> tuple[int, str] | None:
    for j in range(2, len(seq)):
        aj = seq[j]
        if gnorm(aj) != 2:
            continue
        for i in range(j - 1, 0, -1):
            t = sigma_y_pow(aj, j - i)
            if seq[i] == 2 * t:
                continue  # the chain of 2*sigma^k(a_j) continues further back
            if gnorm(seq[i] - t) < 4:
                return i, (
                    f"a_{i} = {_fmt(seq[i])} lies within 2 of sigma_y^{j - i}(a_{j}) = {_fmt(t)} "
                    f"(a_{j} = {_fmt(aj)})"
                )
            break
    return None


def _check_Hprime(seq) -> tuple[int, str] | None:
    for n in range(1, len(seq) - 1):
        nxt = seq[n + 1]
        if gnorm(nxt) == 2 and gnorm(seq[n] + nxt.conj()) < 4:
            return n, f"|a_{n} + conj(a_{n + 1})| = |{_fmt(seq[n] + nxt.conj())}| < 2 with |a_{n + 1}| = sqrt 2"
    return None


def _check_A(seq) -> tuple[int, str] | None:
    for n in range(1, len(seq) - 1):
        a, b = seq[n], seq[n + 1]
        if gnorm(a) > 4:
            continue
        chi = 2 if gnorm(b) == 2 else 0
        re = (a * b).re
        if re < chi:
            return n, f"Re(a_{n} a_{n + 1}) = {re} < {chi}"
    return None


def _check_Aprime(seq) -> tuple[int, str] | None:
    for n in range(1, len(seq) - 1):
        a, b = seq[n], seq[n + 1]
        if gnorm(a) == 2 and gnorm(b) <= 4:
            allowed = (a.conj() - a, a.conj(), a.conj() + a)
            if b not in allowed:
                return n, f"a_{n + 1} = {_fmt(b)} not in {{{', '.join(_fmt(x) for x in allowed)}}}"
    return None


_CHECKS = {"H": _check_H, "H'": _check_Hprime, "A": _check_A, "A'": _check_Aprime}


def check_condition(seq: Iterable, which: str) -> ConditionReport:
    """Exact verdict for one of the four conditions on a finite quotient sequence (a_0, a_1, ...)."""
    tag = normalize_tag(which)
    seq = [GaussianInt.coerce(a) for a in seq]
    bad = _precondition(seq) or _CHECKS[tag](seq)
    return ConditionReport(tag, bad is None, bad)


def forbidden_set(a_next, offset_parity) -> frozenset[GaussianInt]:
    """Immediate predecessors that (H) rules out in front of a_next with |a_next| = sqrt 2."""
    a_next = GaussianInt.coerce(a_next)
    if gnorm(a_next) != 2:
        raise ValueError("forbidden_set needs |a_next| = sqrt 2")
    if isinstance(offset_parity, str):
        p = {"odd": 1, "even": 0}[offset_parity.lower()]
    else:
        p = int(offset_parity) % 2
    t = sigma_y_pow(a_next, p)
    out = set()
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            a = t + GaussianInt(dx, dy)
            if gnorm(a) > 1 and a != 2 * t:
                out.add(a)
    return frozenset(out)


def lemma66_hypothesis(seq: Iterable) -> bool:
    """Forward chain hypothesis that guarantees |p_m/q_m - a_0| < 1 for the finite sequence."""
    seq = [GaussianInt.coerce(a) for a in seq]
    m = len(seq) - 1
    if _precondition(seq):
        return False
    for n in range(1, m + 1):
        if gnorm(seq[n]) != 2:
            continue
        for k in range(1, m - n + 1):
            t = sigma_y_pow(seq[n], k)
            if seq[n + k] == 2 * t:
                continue
            if gnorm(seq[n + k] - t) < 4:
                return False
            break
    return True


# Predecessors excluded after PPOI quotients; closed under the symmetries of the algorithm.
_PPOI_BASE = {
    GaussianInt(1, 1): [(-2, 0), (-1, 1), (0, 2), (-2, 1), (-1, 2), (-2, 2), (-1, -1)],
    GaussianInt(2, 0): [(-2, 0), (-1, 1), (-1, -1)],
    GaussianInt(0, 2): [(0, 2), (1, 1), (-1, 1)],
}


def _ppoi_forbidden() -> dict[GaussianInt, frozenset[GaussianInt]]:
    pairs = set()
    for nxt, prevs in _PPOI_BASE.items():
        for p in prevs:
            pairs.add((GaussianInt(*p), nxt))
    i = GaussianInt(0, 1)
    maps = (
        lambda x, y: (-x, -y),
        lambda x, y: (x.conj(), y.conj()),
        lambda x, y: (i * x, -i * y),
        lambda x, y: (-i * x, i * y),
    )
    while True:
        new = {f(x, y) for (x, y) in pairs for f in maps} - pairs
        if not new:
            break
        pairs |= new
    out: dict[GaussianInt, set] = {}
    for x, y in pairs:
        out.setdefault(y, set()).add(x)
    return {k: frozenset(v) for k, v in out.items()}


PPOI_FORBIDDEN = _ppoi_forbidden()


def ppoi_forbidden_pairs(seq: Iterable) -> list[int]:
    """Indices n >= 1 where (a_n, a_{n+1}) is an excluded PPOI transition."""
    seq = [GaussianInt.coerce(a) for a in seq]
    return [n for n in range(1, len(seq) - 1) if seq[n] in PPOI_FORBIDDEN.get(seq[n + 1], ())]


# growth ---------------------------------------------------------------------

THETAS = {"golden": GOLDEN, "sqrt5-1": SQRT5_MINUS_1}


def parse_theta(text) -> QuadReal:
    if isinstance(text, QuadReal):
        return text
    if isinstance(text, str):
        key = text.strip().lower()
        if key in THETAS:
            return THETAS[key]
        return QuadReal(Fraction(key))
    return QuadReal(Fraction(text))


@dataclass(frozen=True)
class GrowthProfile:
    ratios_1: tuple[float, ...]
    ratios_2: tuple[float, ...]
    monotone: bool
    member: bool
    theta_witness: float | None
    theta_witness_sq: Fraction | None
    zero_index: int | None = None
    first_failure: int | None = None

    def to_json(self) -> dict:
        return {
            "ratios_1": [f"{r:.12g}" for r in self.ratios_1],
            "ratios_2": [f"{r:.12g}" for r in self.ratios_2],
            "monotone": self.monotone,
            "member": self.member,
            "theta_witness": None if self.theta_witness is None else f"{self.theta_witness:.15g}",
            "theta_witness_sq": None if self.theta_witness_sq is None else str(self.theta_witness_sq),
            "zero_index": self.zero_index,
            "first_failure": self.first_failure,
        }


def omega_theta_profile(seq: Iterable, theta=SQRT5_MINUS_1) -> GrowthProfile:
    """Exact test of |q_n| > |q_{n-1}| and |q_n| >= theta |q_{n-2}| along the sequence."""
    th2 = parse_theta(theta)
    th2 = th2 * th2
    norms = [0, 1]  # gnorm(q_{-1}), gnorm(q_0)
    zero_index = None
    for st in qpair_states(seq):
        if st.n == 0:
            continue
        nq = gnorm(st.q_cur)
        if nq == 0 and zero_index is None:
            zero_index = st.n
        norms.append(nq)
    r1, r2 = [], []
    monotone, member, first_failure = True, zero_index is None, None
    wit = None
    for k in range(2, len(norms)):
        n = k - 1
        cur, prev, prev2 = norms[k], norms[k - 1], norms[k - 2]
        if prev:
            r1.append(sqrt(cur / prev))
        if cur <= prev:
            monotone = False
            member = False
            first_failure = first_failure if first_failure is not None else n
        if prev2:
            q = Fraction(cur, prev2)
            r2.append(sqrt(cur / prev2))
            wit = q if wit is None else min(wit, q)
            if (QuadReal(cur) - th2 * prev2).sign() < 0:
                member = False
                first_failure = first_failure if first_failure is not None else n
    return GrowthProfile(
        tuple(r1), tuple(r2), monotone, member,
        None if wit is None else sqrt(wit), wit, zero_index, first_failure,
    )


# admissible blocks ---------------------------------------------------------------

DEFAULT_SAMPLES = 4096
DEFAULT_PERTURB = Fraction(1, 1024)
_GRID = 1 << 30


@dataclass(frozen=True)
class AdmissibleVerdict:
    tag: str  # "admissible" or "unknown"
    samples_tried: int
    witness: GaussianRational | None = None
    radius: Fraction | None = None

    @property
    def admissible(self) -> bool:
        return self.tag == "admissible"

    def to_json(self) -> dict:
        out = {"tag": self.tag, "samples_tried": self.samples_tried}
        if self.witness is not None:
            re, im = self.witness.parts()
            out["witness"] = {"re": f"{float(re):.17g}", "im": f"{float(im):.17g}"}
            out["radius"] = f"{float(self.radius):.6g}"
        return out


def _hurwitz_prefix_is(z: GaussianRational, target: tuple) -> bool:
    ex = expand(Hurwitz(), z, max_depth=len(target))
    return ex.quotients[: len(target)] == target


def _probe_offsets(r: Fraction) -> list[tuple[Fraction, Fraction]]:
    d = r * Fraction(7, 10)  # just inside the circle of radius r on the diagonals
    return [(r, 0), (-r, 0), (0, r), (0, -r), (d, d), (d, -d), (-d, d), (-d, -d)]


def admissible_empirical(
    block: Iterable, samples: int = DEFAULT_SAMPLES, perturb=DEFAULT_PERTURB, seed: int | None = None
) -> AdmissibleVerdict:
    """One-sided evidence that the Hurwitz cylinder of the block has interior.

    Low-discrepancy residuals t in the unit square are pushed forward through the
    block's Moebius map, so every sample lands near the cylinder; a sample is a
    witness when it and 8 compass probes at the perturbation radius all expand
    with the block as prefix.
    """
    block = Block(block)
    target = (GaussianInt(0),) + tuple(block)
    st = list(qpair_states(target))[-1]
    p1, p0, q1, q0 = st.p_cur, st.p_prev, st.q_cur, st.q_prev
    radius = min(Fraction(perturb), Fraction(1, 32 * max(gnorm(q1), 1)))
    engine = qmc.Halton(d=2, scramble=seed is not None, seed=seed)
    pts = engine.random(samples + 1)[1:]
    for k, (hx, hy) in enumerate(pts, start=1):
        t = GaussianRational.coerce((Fraction(round(hx * _GRID), _GRID) - Fraction(1, 2),
                                     Fraction(round(hy * _GRID), _GRID) - Fraction(1, 2)))
        den = GaussianRational.coerce(q1) + t * q0
        if not den:
            continue
        z = (GaussianRational.coerce(p1) + t * p0) / den
        if not _hurwitz_prefix_is(z, target):
            continue
        zr, zi = z.parts()
        if all(
            _hurwitz_prefix_is(GaussianRational.coerce((zr + dx, zi + dy)), target)
            for dx, dy in _probe_offsets(radius)
        ):
            return AdmissibleVerdict("admissible", k, z, radius)
    return AdmissibleVerdict("unknown", samples)


@dataclass(frozen=True)
class GenericPrefix:
    prefix: Block
    offsets: tuple[int, ...]
    bridges: tuple[GaussianInt, ...] = field(default=())

    def value(self) -> GaussianRational:
        """The Gaussian rational [0; prefix], a point of the unit square."""
        return finite_omega((0,) + tuple(self.prefix))

    def to_json(self) -> dict:
        return {
            "prefix": self.prefix.to_json(),
            "offsets": list(self.offsets),
            "bridges": [format_gaussian(b) for b in self.bridges],
        }


BRIDGE_MIN_NORM = 8


def bridge_candidates() -> Iterable[GaussianInt]:
    """Gaussian integers of modulus >= 2 sqrt 2 by increasing norm, lexicographic per shell."""
    return gaussians_by_norm(BRIDGE_MIN_NORM)


def build_generic_prefix(
    blocks: Sequence[Iterable],
    bridge_budget: int = 64,
    samples: int = DEFAULT_SAMPLES,
    perturb=DEFAULT_PERTURB,
) -> GenericPrefix:
    """Concatenate blocks with one searched bridge entry at every junction."""
    blocks = [Block(b) for b in blocks]
    if not blocks:
        raise ValueError("need at least one block")
    for i, b in enumerate(blocks):
        if not admissible_empirical(b, samples, perturb).admissible:
            raise ValueError(f"block {i} {b} is not empirically admissible")
    prefix, offsets, bridges = blocks[0], [0], []
    for j, blk in enumerate(blocks[1:], start=1):
        for k, b in enumerate(bridge_candidates()):
            if k >= bridge_budget:
                raise BridgeSearchFailed(
                    f"no bridge within {bridge_budget} candidates before block {j}", junction=j
                )
            cand = prefix + (b,) + blk
            if admissible_empirical(cand, samples, perturb).admissible:
                offsets.append(len(prefix) + 1)
                bridges.append(b)
                prefix = cand
                break
    return GenericPrefix(prefix, tuple(offsets), tuple(bridges))
