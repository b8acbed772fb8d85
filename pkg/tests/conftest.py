import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from eip.lattice import Config

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def configs(draw, dims=(2, 3, 4), max_side=5, max_points=25, min_points=0):
    d = draw(st.sampled_from(dims))
    pts = draw(st.lists(st.tuples(*[st.integers(-max_side, max_side)] * d),
                        min_size=min_points, max_size=max_points))
    return Config(d, pts)


# acceptance results are collected here and printed at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"CRITERION {k}: {'PASS' if ok else 'FAIL'}  {detail}")
