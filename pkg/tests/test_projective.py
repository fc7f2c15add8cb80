from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import gaussians
from gaussfrac.cfalgo import Hurwitz, expand
from gaussfrac.errors import PoleHit, ShapeViolation
from gaussfrac.gaussint import GaussianInt, from_fractions
from gaussfrac.projective import (
    IDENTITY,
    INF,
    RHO,
    GMatrix,
    L,
    U,
    chordal,
    g_of_block,
    mobius_apply,
    proj_point,
    prop75_probe,
    prop75_sequence,
    remark71_check,
    rho_identity,
    theorem72_probe,
)
from gaussfrac.surd import parse_surd

G = GaussianInt
GOLDEN = parse_surd("1,-1,-1")
GOLDEN_Q = list(expand(Hurwitz(), GOLDEN, 30).quotients)


def random_block(rng, max_len=12):
    return [G(rng.randint(-6, 6), rng.randint(-6, 6)) for _ in range(rng.randint(1, max_len))]


def test_g_of_block_examples():
    assert g_of_block([]) == IDENTITY
    assert g_of_block([0, 0]) == IDENTITY
    assert g_of_block([G(2, 1)]) == U(G(2, 1))
    assert g_of_block([1, 1]) == GMatrix.of(2, 1, 1, 1)
    assert g_of_block([1, 2, 3]) == U(1) @ L(2) @ U(3)


def test_mobius_examples():
    z = from_fractions(Fraction(3, 7), Fraction(-2, 5))
    assert mobius_apply(IDENTITY, z) == z
    assert mobius_apply(RHO, z) == -1 / z
    assert mobius_apply(GMatrix.of(2, 1, 1, 1), 1) == Fraction(3, 2)
    with pytest.raises(PoleHit):
        mobius_apply(GMatrix.of(1, 0, 1, 1), -1)


def test_mobius_on_surds():
    w = mobius_apply(GMatrix.of(0, 1, 1, -2), GOLDEN)
    # 1/(phi - 2) = -(3 + sqrt5)/2
    assert abs(complex(w) + (3 + 5 ** 0.5) / 2) < 1e-12


def test_block_columns_examples():
    assert remark71_check([2, -3])
    assert remark71_check([1, 1])
    assert remark71_check([])


def test_block_columns_and_rho_random():
    rng = random.Random(71)
    for _ in range(10_000):
        b = random_block(rng)
        g = g_of_block(b)
        assert g.det() == 1
        assert remark71_check(b)
        assert rho_identity(g)


@given(gaussians(8), gaussians(8), gaussians(8), gaussians(8))
def test_rho_identity_iff_unimodular(p, q, r, s):
    g = GMatrix(p, q, r, s)
    assert rho_identity(g) == (g.det() == 1)


@given(st.lists(gaussians(5), max_size=8), st.lists(gaussians(5), max_size=8))
def test_g_is_multiplicative_on_even_splits(a, b):
    # splitting after an even number of entries keeps the U/L alternation
    if len(a) % 2:
        a = a[:-1]
    assert g_of_block(a + b) == g_of_block(a) @ g_of_block(b)


def test_chordal_basics():
    inf, zero = proj_point(INF), proj_point(0)
    assert chordal(inf, zero) == pytest.approx(1.0)
    assert chordal(proj_point(2), proj_point(2)) == 0
    assert chordal(proj_point(1), proj_point(-1)) == pytest.approx(1.0)


def test_prefix_probe_golden():
    pts = [1.5, 2, 3, 1.5j, -2j, 2 + 2j]
    tab = theorem72_probe(GOLDEN, GOLDEN_Q, [4, 8, 16], pts)
    assert tab.passed
    by_point: dict[str, list[float]] = {}
    for _, _, pt, d in tab.rows:
        by_point.setdefault(pt, []).append(d)
    for ds in by_point.values():
        assert ds[0] > ds[1] > ds[2] and ds[2] < 1e-6


def test_prefix_probe_rejects_inner_points():
    with pytest.raises(ValueError):
        theorem72_probe(GOLDEN, GOLDEN_Q, [4], [0.5])


def test_conjugated_probe_converges():
    alpha = [3, -3, 3, -3, 3, -3]
    beta = [G(2, 1), -3, G(2, 1), -3, G(2, 1), -3]
    x, s = prop75_sequence(alpha, beta, [2, 4, 6])
    tab = prop75_probe(x, alpha, beta, s, [2, 4, 6])
    generic = [d for i, label, _, d in tab.rows if label.startswith("generic")]
    assert tab.passed and max(generic[-3:]) < max(generic[:3])


def test_conjugated_probe_shape_violation_at_junction():
    alpha = [3, -3, 3, -3]
    beta = [G(2, 1), -3, G(2, 1), -3]
    x, s = prop75_sequence(alpha, beta, [2, 4], junction=2)
    with pytest.raises(ShapeViolation) as info:
        prop75_probe(x, alpha, beta, s, [2, 4])
    assert info.value.clause == "ii"
