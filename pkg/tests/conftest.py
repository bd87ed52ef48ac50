import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


def random_factor(dim, cond, seed, rows=None, complex_=False):
    """Factor with log-spaced singular values 1 .. 1/cond and random singular bases."""
    rng = np.random.default_rng(seed)
    rows = dim if rows is None else rows

    def haar(m, k):
        z = rng.standard_normal((m, k))
        if complex_:
            z = z + 1j * rng.standard_normal((m, k))
        q, _ = np.linalg.qr(z)
        return q

    s = np.logspace(0.0, -np.log10(cond), dim) if dim > 1 else np.ones(1)
    return (haar(rows, dim) * s) @ haar(dim, dim).conj().T


def rand_vec(rng, n, complex_=False):
    v = rng.standard_normal(n)
    if complex_:
        v = v + 1j * rng.standard_normal(n)
    return v


seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=1, max_value=12)
conds = st.sampled_from([1.0, 3.0, 1e1, 1e2, 1e3])


# -- one PASS/FAIL line per acceptance criterion --------------------------------------

_criteria: dict[str, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id): acceptance criterion checked by the test")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when != "call":
        return
    _criteria.setdefault(str(mark.args[0]), []).append(call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(_criteria, key=lambda k: (len(k), k)):
        results = _criteria[key]
        status = "PASS" if all(results) else "FAIL"
        tr.write_line(f"criterion {key}: {status} ({sum(results)}/{len(results)} checks)")
