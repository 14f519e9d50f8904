import numpy as np
import pytest

from heunflow.params import GsweParams, InceDcheParams, InceGsweParams


def rel(a, b):
    a, b = complex(a), complex(b)
    return abs(a - b) / max(abs(b), 1e-300)


@pytest.fixture
def generic_gswe():
    return GsweParams(B1=-0.5, B2=1.3, B3=0, z0=1, omega=0.7, eta=0.4)


@pytest.fixture
def generic_ince():
    return InceGsweParams(B1=-0.5, B2=1.3, B3=0, z0=1, q=1.1)


@pytest.fixture
def generic_ince_dche():
    return InceDcheParams(B1=-0.5, B2=1.3, B3=0, q=1.1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """record(criterion, ok, detail): one line per sub-check, summarized per criterion."""
    log = request.config.stash.setdefault(_ACCEPTANCE, {})

    def record(criterion: int, ok: bool, detail: str):
        log.setdefault(criterion, []).append((bool(ok), detail))
        print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}")

    return record


def pytest_terminal_summary(terminalreporter, config):
    log = config.stash.get(_ACCEPTANCE, None)
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(log):
        ok = all(r[0] for r in log[c])
        details = "; ".join(("" if r[0] else "[FAIL] ") + r[1] for r in log[c])
        terminalreporter.write_line(f"criterion {c:2d}: {'PASS' if ok else 'FAIL'} | {details}")
