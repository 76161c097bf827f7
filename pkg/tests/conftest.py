import numpy as np
import pytest

from su11lab.gaussian import J


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def assert_symplectic(S, tol=1e-10):
    S = np.asarray(S)
    assert np.max(np.abs(S @ J @ S.T - J)) < tol
    assert abs(np.linalg.det(S) - 1) < tol


# acceptance criteria register their outcome here; printed at the end of the run
CRITERIA: dict[int, list[tuple[bool, str]]] = {}


@pytest.fixture
def criterion():
    def record(number: int, passed: bool, detail: str) -> bool:
        CRITERIA.setdefault(number, []).append((bool(passed), detail))
        return bool(passed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        results = CRITERIA[number]
        ok = all(passed for passed, _ in results)
        failed = [detail for passed, detail in results if not passed]
        shown = failed if failed else [results[-1][1]] if len(results) == 1 else [f"{len(results)} checks"]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {'; '.join(shown)}")
