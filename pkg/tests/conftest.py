import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from srlie.algebra import BasisKind
from srlie.geodesics import GeodesicParams
from srlie.groups import GroupKind, Su2RPoint, covering_pi_tilde

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")

GROUPS = list(GroupKind)
METRICS = list(BasisKind)

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)
angles = st.floats(min_value=-math.pi, max_value=math.pi, allow_nan=False)
groups = st.sampled_from(GROUPS)
metrics = st.sampled_from(METRICS)


@st.composite
def unit_vectors(draw, dim=3):
    v = np.array(draw(st.lists(st.floats(-1.0, 1.0, allow_nan=False), min_size=dim, max_size=dim)))
    n = float(np.linalg.norm(v))
    if n < 1e-3:
        v, n = np.eye(dim)[0], 1.0
    return v / n


@st.composite
def geodesic_params(draw, metric=None, group=None, alpha2_max=0.999, beta_max=4.0):
    a = draw(unit_vectors())
    if abs(a[1]) > alpha2_max:
        a = np.array([1.0, 0.0, 0.0])
    beta = draw(st.floats(-beta_max, beta_max, allow_nan=False))
    return GeodesicParams(a[0], a[1], a[2], beta,
                          draw(metrics) if metric is None else metric,
                          draw(groups) if group is None else group)


@st.composite
def su2r_points(draw, v_max=3.0):
    q = draw(unit_vectors(4))
    v = draw(st.floats(-v_max, v_max, allow_nan=False))
    return Su2RPoint(complex(q[0], q[1]), complex(q[2], q[3]), v)


@st.composite
def points(draw, group):
    p = draw(su2r_points())
    return p if group is GroupKind.SU2R else covering_pi_tilde(p)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def coords_close(p, q, tol):
    from srlie.geodesics import point_coordinates

    return float(np.max(np.abs(point_coordinates(p) - point_coordinates(q)))) <= tol


# one summary line per acceptance criterion, printed after the run
_CRITERIA: dict[int, tuple[bool, str]] = {}


class CriterionRecorder:
    def __init__(self, number: int):
        self.number = number
        _CRITERIA[number] = (False, "did not finish")

    def done(self, ok: bool, detail: str) -> None:
        _CRITERIA[self.number] = (bool(ok), detail)
        print(f"criterion {self.number}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail


@pytest.fixture
def criterion(request):
    return CriterionRecorder(request.node.get_closest_marker("criterion").args[0])


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, detail = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
