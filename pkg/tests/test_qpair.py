from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import gaussians
from gaussfrac.errors import ZeroDenominator
from gaussfrac.gaussint import GaussianInt, GaussianRational, gq_reduce
from gaussfrac.qpair import (
    Block,
    finite_omega,
    qpair_convergent,
    qpair_extend,
    qpair_seed,
    qpair_states,
)


def fold(block) -> GaussianRational:
    """Right-to-left evaluation, independent of the recurrence."""
    entries = [GaussianRational.coerce(GaussianInt.coerce(a)) for a in block]
    acc = entries[-1]
    for a in reversed(entries[:-1]):
        acc = a + GaussianRational.coerce(1) / acc
    return acc


def test_seed():
    s = qpair_seed(5)
    assert (s.p_cur, s.q_cur, s.n) == (GaussianInt(5), GaussianInt(1), 0)
    assert qpair_convergent(s) == GaussianRational.coerce(5)


def test_golden_states():
    states = list(qpair_states([2, -3, 3, -3]))
    s1, s2, s3 = states[1], states[2], states[3]
    assert (s1.p_cur, s1.q_cur) == (GaussianInt(-5), GaussianInt(-3))
    assert s1.det() == 1 == s1.expected_det()
    assert (s2.p_cur, s2.q_cur) == (GaussianInt(-13), GaussianInt(-8))
    assert qpair_convergent(s2) == gq_reduce(13, 8)
    assert qpair_convergent(s3) == gq_reduce(34, 21)


@pytest.mark.parametrize(
    "block, value",
    [
        ([GaussianInt(4, -1)], GaussianRational.coerce(GaussianInt(4, -1))),
        ([1, GaussianInt(1, -1)], gq_reduce(GaussianInt(3, 1), 2)),
        ([0, GaussianInt(1, 1)], gq_reduce(GaussianInt(1, -1), 2)),
    ],
)
def test_finite_omega_examples(block, value):
    assert finite_omega(block) == value


def test_finite_omega_zero_denominator_index():
    # 0 + 1/(1 + 1/(-1)) has q_1 = 0
    with pytest.raises(ZeroDenominator) as info:
        finite_omega([0, 1, -1])
    assert info.value.index is not None


def test_determinant_identity_random():
    rng = random.Random(11)
    for _ in range(10_000):
        s = qpair_seed(GaussianInt(rng.randint(-10, 10), rng.randint(-10, 10)))
        for _ in range(rng.randint(1, 6)):
            s = qpair_extend(s, GaussianInt(rng.randint(-10, 10), rng.randint(-10, 10)))
        assert s.det() == s.expected_det() == (-1) ** (s.n - 1)


@given(st.lists(gaussians(10), min_size=2, max_size=12))
def test_telescoping(entries):
    states = list(qpair_states(entries))
    for s, t in zip(states, states[1:]):
        if not (s.q_cur and t.q_cur):
            continue
        diff = qpair_convergent(t) - qpair_convergent(s)
        assert diff == gq_reduce((-1) ** s.n, s.q_cur * t.q_cur)


@given(st.lists(gaussians(8, nonzero=True), min_size=1, max_size=10))
def test_finite_omega_matches_fold(entries):
    try:
        expected = fold(entries)
    except ZeroDivisionError:
        return
    try:
        got = finite_omega(entries)
    except ZeroDenominator:
        # fold may dodge an intermediate pole the recurrence meets
        return
    assert got == expected


def test_block_helpers():
    b = Block.parse("1+1i, -2, 3i")
    assert b.reversed() == Block([GaussianInt(0, 3), -2, GaussianInt(1, 1)])
    assert isinstance(b + [5], Block)
    assert b.to_json() == ["1+1i", "-2", "3i"]
