from __future__ import annotations

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gaussfrac.gaussint import GaussianInt

settings.register_profile(
    "default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

# acceptance lines collected while the suite runs, echoed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}


def gaussians(bound: int = 10, nonzero: bool = False):
    s = st.builds(GaussianInt, st.integers(-bound, bound), st.integers(-bound, bound))
    return s.filter(bool) if nonzero else s


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])


def random_surd(rng, bound: int = 5):
    """An irreducible quadratic surd with coefficient components in [-bound, bound], either root."""
    from gaussfrac.errors import DegenerateDisc, RationalRoot
    from gaussfrac.surd import surd_normalize

    while True:
        alpha, beta, gamma = (GaussianInt(rng.randint(-bound, bound), rng.randint(-bound, bound)) for _ in range(3))
        if not alpha:
            continue
        try:
            s = surd_normalize(alpha, beta, gamma)
        except (RationalRoot, DegenerateDisc):
            continue
        return s.other_root() if rng.random() < 0.5 else s
