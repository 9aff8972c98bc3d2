import numpy as np
import pytest

from paulibound import backend

_ACCEPTANCE = []


@pytest.fixture(params=backend.available())
def each_backend(request):
    previous = backend.use(request.param)
    yield request.param
    backend.use(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


class _Criterion:
    """Record a pass/fail line for the acceptance summary, then assert."""

    def __call__(self, label, ok, detail=""):
        _ACCEPTANCE.append((label, "PASS" if ok else "FAIL", detail))
        assert ok, f"{label}: {detail}"

    def skip(self, label, reason):
        _ACCEPTANCE.append((label, "SKIP", reason))
        pytest.skip(reason)


@pytest.fixture
def criterion():
    return _Criterion()


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, status, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"[{status}] {label}  {detail}")
