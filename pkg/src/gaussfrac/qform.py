"""Values of binary forms (a - z1 b)(a - z2 b) over pairs of Gaussian integers.

Bulk enumeration runs in float64 through numpy, with a per-value rounding bound
derived from the standard model of floating-point arithmetic.  Quantities that
feed a reported minimum are re-evaluated with certified big-float arithmetic.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np
from gmpy2 import mpq

from .bigcomplex import DEFAULT_PREC, BigComplex
from .gaussint import GaussianInt, GaussianRational

INFINITY = "infinity"
U = 2.0**-53
BATCH = 1 << 20


def _as_zeta(z):
    """Exact rational, irrational handle (surd / approximate BigComplex), or INFINITY."""
    if isinstance(z, str):
        if z.lower() in ("inf", "infinity"):
            return INFINITY
        if z.lower() == "golden":
            from .surd import surd_normalize

            return surd_normalize(1, -1, -1)
        from .gaussint import parse_gaussian_rational

        return parse_gaussian_rational(z)
    if isinstance(z, BigComplex):
        if z.is_exact():
            cr, ci = z.center()
            return GaussianRational.coerce((Fraction(int(cr.numerator), int(cr.denominator)),
                                            Fraction(int(ci.numerator), int(ci.denominator))))
        return z
    if isinstance(z, (float, complex)):
        z = complex(z)
        return GaussianRational.coerce((Fraction(z.real), Fraction(z.imag)))
    if hasattr(z, "approx"):
        return z
    return GaussianRational.coerce(z)


def _is_rational(z) -> bool:
    return isinstance(z, GaussianRational)


def _big(z, prec: int) -> BigComplex:
    if _is_rational(z):
        return BigComplex.exact(z, prec)
    if isinstance(z, BigComplex):
        return z
    return z.approx(prec)


class BinaryForm:
    """(a - zeta1 b)(a - zeta2 b); a zeta equal to INFINITY contributes the factor b."""

    def __init__(self, zeta1, zeta2):
        self.zeta1, self.zeta2 = _as_zeta(zeta1), _as_zeta(zeta2)

    def __repr__(self):
        return f"BinaryForm({self.zeta1!r}, {self.zeta2!r})"

    def zetas(self):
        return (self.zeta1, self.zeta2)

    def factor_is_zero(self, k: int, a: GaussianInt, b: GaussianInt) -> bool:
        z = self.zetas()[k]
        if z == INFINITY:
            return not b
        if _is_rational(z):
            return GaussianRational.coerce(a) == z * b
        return not a and not b  # irrational zeta

    def is_zero(self, a, b) -> bool:
        a, b = GaussianInt.coerce(a), GaussianInt.coerce(b)
        return self.factor_is_zero(0, a, b) or self.factor_is_zero(1, a, b)


def form_value(form: BinaryForm, a, b, prec: int = DEFAULT_PREC) -> BigComplex:
    a, b = GaussianInt.coerce(a), GaussianInt.coerce(b)
    out = None
    for z in form.zetas():
        if z == INFINITY:
            f = BigComplex.exact(b, prec)
        else:
            f = BigComplex.exact(a, prec) - _big(z, prec) * BigComplex.exact(b, prec)
        out = f if out is None else out * f
    return out


# streaming enumeration ----------------------------------------------------------


def box_points(N: int) -> np.ndarray:
    r = np.arange(-N, N + 1, dtype=np.float64)
    x, y = np.meshgrid(r, r, indexing="ij")
    return (x + 1j * y).ravel()


@dataclass
class ValueBatch:
    a: np.ndarray  # complex128 Gaussian integers
    b: np.ndarray
    values: np.ndarray
    err: np.ndarray  # absolute rounding bound per value
    zero: np.ndarray  # value is exactly zero

    def __len__(self):
        return len(self.values)


def _factor(z, A, B):
    """Float factor and its rounding bound (including the rounding of zeta itself)."""
    if z == INFINITY:
        return B.astype(np.complex128), np.zeros(B.shape)
    zc = complex(_big(z, 64))
    f = A - zc * B
    e = 6 * U * (np.abs(A) + abs(zc) * np.abs(B)) + 2 * U * abs(zc) * np.abs(B)
    return f, e


def _zero_mask(form: BinaryForm, k: int, A, B, f, e) -> np.ndarray:
    z = form.zetas()[k]
    if z == INFINITY:
        return B == 0
    if not _is_rational(z):
        return (A == 0) & (B == 0)
    mask = np.zeros(f.shape, dtype=bool)
    # only values within rounding of zero need an exact look
    for idx in np.flatnonzero(np.abs(f) <= e):
        a = GaussianInt(int(A[idx].real), int(A[idx].imag))
        b = GaussianInt(int(B[idx].real), int(B[idx].imag))
        mask[idx] = form.factor_is_zero(k, a, b)
    return mask


def iter_value_batches(form: BinaryForm, N: int, batch: int = BATCH) -> Iterator[ValueBatch]:
    """All pairs (a, b) with |Re|, |Im| <= N, in a fixed order, batch by batch."""
    if N < 1:
        raise ValueError("N must be >= 1")
    pts = box_points(N)
    per = max(1, batch // len(pts))
    for start in range(0, len(pts), per):
        bs = pts[start : start + per]
        A = np.tile(pts, len(bs))
        B = np.repeat(bs, len(pts))
        f1, e1 = _factor(form.zeta1, A, B)
        f2, e2 = _factor(form.zeta2, A, B)
        v = f1 * f2
        err = np.abs(f1) * e2 + np.abs(f2) * e1 + e1 * e2 + 4 * U * np.abs(v)
        zero = _zero_mask(form, 0, A, B, f1, e1) | _zero_mask(form, 1, A, B, f2, e2)
        v = np.where(zero, 0, v)
        err = np.where(zero, 0.0, err)
        yield ValueBatch(A, B, v, err, zero)


@dataclass(frozen=True)
class ValueCloud:
    values: np.ndarray
    err: float

    def __len__(self):
        return len(self.values)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re", "im"])
        for v in self.values:
            w.writerow([repr(float(v.real)), repr(float(v.imag))])
        return buf.getvalue()


def enumerate_values(form: BinaryForm, N: int, dedupe: bool = True) -> ValueCloud:
    """Every value over the box of side 2N+1, merged within twice the rounding bound."""
    vals, emax = [], 0.0
    for bt in iter_value_batches(form, N):
        vals.append(bt.values)
        emax = max(emax, float(bt.err.max()) if len(bt.err) else 0.0)
    v = np.concatenate(vals) if vals else np.zeros(0, np.complex128)
    if dedupe and len(v):
        h = max(2 * emax, np.finfo(float).tiny)
        keys = np.stack([np.round(v.real / h), np.round(v.imag / h)], axis=1)
        _, idx = np.unique(keys, axis=0, return_index=True)
        v = v[np.sort(idx)]
    return ValueCloud(v, emax)


# coverage -----------------------------------------------------------------------


@dataclass(frozen=True)
class CoverageReport:
    N: int | None
    radius: float
    cell: float
    covered: int
    cells: int
    min_nonzero_modulus: float | None

    @property
    def covered_fraction(self) -> Fraction:
        return Fraction(self.covered, self.cells) if self.cells else Fraction(0)

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "radius": repr(self.radius),
            "cell": repr(self.cell),
            "covered_fraction": str(self.covered_fraction),
            "covered_fraction_decimal": f"{float(self.covered_fraction):.6f}",
            "covered_cells": self.covered,
            "disc_cells": self.cells,
            "min_nonzero_modulus": None if self.min_nonzero_modulus is None else repr(self.min_nonzero_modulus),
        }


class _Grid:
    def __init__(self, radius: float, cell: float):
        if cell <= 0:
            raise ValueError("cell must be positive")
        self.radius, self.cell = float(radius), float(cell)
        self.k = int(np.ceil(self.radius / self.cell))
        idx = np.arange(-self.k, self.k)
        cx = (idx + 0.5) * self.cell
        X, Y = np.meshgrid(cx, cx, indexing="ij")
        self.in_disc = X * X + Y * Y <= self.radius**2
        self.hit = np.zeros_like(self.in_disc)
        self.min_nonzero = None

    def add(self, v: np.ndarray, err: np.ndarray | None = None, zero: np.ndarray | None = None) -> None:
        if zero is not None:
            nz = ~zero
            if nz.any():
                lo = np.abs(v[nz]) - (err[nz] if err is not None else 0)
                m = float(max(lo.min(), 0.0))
                self.min_nonzero = m if self.min_nonzero is None else min(self.min_nonzero, m)
        i = np.floor(v.real / self.cell).astype(np.int64) + self.k
        j = np.floor(v.imag / self.cell).astype(np.int64) + self.k
        ok = (i >= 0) & (i < 2 * self.k) & (j >= 0) & (j < 2 * self.k)
        self.hit[i[ok], j[ok]] = True

    def report(self, N) -> CoverageReport:
        return CoverageReport(
            N, self.radius, self.cell, int((self.hit & self.in_disc).sum()), int(self.in_disc.sum()), self.min_nonzero
        )


def coverage(values, radius: float = 2.0, cell: float = 0.25) -> CoverageReport:
    """Fraction of grid cells (centers inside the disc) that contain at least one value."""
    g = _Grid(radius, cell)
    if isinstance(values, ValueCloud):
        v = values.values
    else:
        v = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=np.complex128)
    if len(v):
        nz = v != 0
        g.add(v, np.full(v.shape, values.err if isinstance(values, ValueCloud) else 0.0), ~nz)
    return g.report(None)


def form_coverage(form: BinaryForm, N: int, radius: float = 2.0, cell: float = 0.25) -> CoverageReport:
    """coverage(enumerate_values(form, N)) without materializing the values."""
    g = _Grid(radius, cell)
    for bt in iter_value_batches(form, N):
        g.add(bt.values, bt.err, bt.zero)
    return g.report(N)


# isolation ----------------------------------------------------------------------


@dataclass(frozen=True)
class IsolationReport:
    N: int
    bound: mpq  # certified lower bound for the minimum nonzero |value|
    upper: mpq  # certified upper bound for the same minimum
    argmin: tuple[GaussianInt, GaussianInt]
    caller_asserted_bpq: bool

    def to_json(self) -> dict:
        from .gaussint import format_gaussian

        return {
            "N": self.N,
            "lower_bound": f"{float(self.bound):.17g}",
            "upper_bound": f"{float(self.upper):.17g}",
            "argmin": {"a": format_gaussian(self.argmin[0]), "b": format_gaussian(self.argmin[1])},
            "bounded_partial_quotients": self.caller_asserted_bpq,
        }


def isolation_probe(lam="golden", N: int = 50, bounded_partial_quotients: bool = True,
                    prec: int = 256) -> IsolationReport:
    """Certified min of |(a - lam b) b| over nonzero values with |Re|, |Im| of a, b <= N."""
    if not bounded_partial_quotients:
        raise ValueError("the isolation probe needs a badly approximable lambda (bounded partial quotients)")
    form = BinaryForm(lam, INFINITY)
    best_hi = np.inf
    cands: list[tuple[float, complex, complex]] = []
    for bt in iter_value_batches(form, N):
        nz = ~bt.zero
        if not nz.any():
            continue
        mod = np.abs(bt.values[nz])
        lo, hi = mod - bt.err[nz], mod + bt.err[nz]
        best_hi = min(best_hi, float(hi.min()))
        keep = lo <= best_hi
        A, B = bt.a[nz][keep], bt.b[nz][keep]
        cands.extend(zip(lo[keep], A, B))
        cands = [c for c in cands if c[0] <= best_hi]
    evals = []
    for _, a, b in cands:
        ga = GaussianInt(int(a.real), int(a.imag))
        gb = GaussianInt(int(b.real), int(b.imag))
        lo, hi = form_value(form, ga, gb, prec).abs_bounds()
        evals.append((hi, lo, ga.key(), gb.key(), ga, gb))
    hi, _, _, _, ga, gb = min(evals)
    lo = min(e[1] for e in evals)
    return IsolationReport(N, lo, hi, (ga, gb), bounded_partial_quotients)
