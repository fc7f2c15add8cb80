"""Q-pair recurrences p_{n+1} = a p_n + p_{n-1}, q_{n+1} = a q_n + q_{n-1}."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import ZeroDenominator
from .gaussint import ONE, ZERO, GaussianInt, GaussianRational, format_gaussian, gq_reduce, parse_gaussian


@dataclass(frozen=True)
class QPairState:
    """(p_{n-1}, p_n, q_{n-1}, q_n) at step n; n = -1 is the empty state."""

    p_prev: GaussianInt
    p_cur: GaussianInt
    q_prev: GaussianInt
    q_cur: GaussianInt
    n: int

    def det(self) -> GaussianInt:
        return self.p_cur * self.q_prev - self.q_cur * self.p_prev

    def expected_det(self) -> int:
        return 1 if (self.n - 1) % 2 == 0 else -1


INITIAL = QPairState(ZERO, ONE, ONE, ZERO, -1)


def qpair_extend(state: QPairState, a) -> QPairState:
    a = GaussianInt.coerce(a)
    return QPairState(
        state.p_cur,
        a * state.p_cur + state.p_prev,
        state.q_cur,
        a * state.q_cur + state.q_prev,
        state.n + 1,
    )


def qpair_seed(a0) -> QPairState:
    return qpair_extend(INITIAL, a0)


def qpair_convergent(state: QPairState) -> GaussianRational:
    if not state.q_cur:
        raise ZeroDenominator(f"q_{state.n} = 0", index=state.n)
    return gq_reduce(state.p_cur, state.q_cur)


def qpair_states(entries: Iterable) -> Iterator[QPairState]:
    s = INITIAL
    for a in entries:
        s = qpair_extend(s, a)
        yield s


def finite_omega(block: Iterable) -> GaussianRational:
    """Value of a_0 + 1/(a_1 + 1/(... + 1/a_m))."""
    last = None
    for s in qpair_states(block):
        if not s.q_cur:
            raise ZeroDenominator(f"q_{s.n} = 0", index=s.n)
        last = s
    if last is None:
        raise ValueError("empty block")
    return qpair_convergent(last)


class Block(tuple):
    """An ordered tuple of Gaussian integers."""

    def __new__(cls, entries: Iterable = ()):
        return super().__new__(cls, (GaussianInt.coerce(a) for a in entries))

    @classmethod
    def parse(cls, text: str) -> Block:
        text = text.strip()
        return cls(parse_gaussian(t) for t in text.split(",")) if text else cls()

    def reversed(self) -> Block:
        return Block(self[::-1])

    def __add__(self, other: Sequence) -> Block:
        return Block(tuple(self) + tuple(other))

    def __getitem__(self, key):
        out = super().__getitem__(key)
        return Block(out) if isinstance(key, slice) else out

    def to_json(self) -> list[str]:
        return [format_gaussian(a) for a in self]

    def __str__(self):
        return "(" + ", ".join(format_gaussian(a) for a in self) + ")"
