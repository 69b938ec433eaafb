import numpy as np
import pytest

from diaggates.ensembles import TAG_PROBES, RandomStream


@pytest.fixture
def stream():
    return RandomStream(1234, tag=TAG_PROBES)


def random_hermitian(N, stream):
    G = stream.complex_normal(N * N).reshape(N, N)
    return (G + G.conj().T) / 2


def random_spectrum(N, stream):
    p = stream.uniform(N) + 1e-3
    return np.sort(p / p.sum())[::-1]


_criteria = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    failed_setup = rep.when == "setup" and not rep.passed
    if rep.when == "call" or failed_setup:
        detail = "; ".join(v for k, v in item.user_properties if k == "detail")
        _criteria.append((mark.args[0], mark.args[1], rep.passed, rep.duration, detail))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, passed, dur, detail in sorted(_criteria):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {num:2d} {status}  {title} ({dur:.1f}s)  {detail}")
