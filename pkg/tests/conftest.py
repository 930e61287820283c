import numpy as np
import pytest

# A 5x5 worked example whose pixel values were found by search so that its
# diagrams give PD1 = {(3,5),(3,5),(4,5)}, beta0 = [5 4 2 1 1] and
# beta1 = [0 0 2 3 0] on the levels 1..5.
WORKED_IMAGE = np.array(
    [
        [1, 5, 4, 3, 1],
        [2, 2, 4, 5, 4],
        [2, 5, 3, 3, 1],
        [1, 3, 1, 5, 3],
        [5, 4, 3, 1, 1],
    ],
    dtype=np.uint8,
)


@pytest.fixture
def worked_image():
    return WORKED_IMAGE.copy()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_RESULTS = {}


def record_criterion(number, title, passed, detail=""):
    ACCEPTANCE_RESULTS[number] = (title, passed, detail)


class _Criterion:
    """Context manager that records whether the checks inside it held."""

    def __init__(self, number, title):
        self.number, self.title, self.detail = number, title, ""

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc_type is None:
            record_criterion(self.number, self.title, True, self.detail)
        elif issubclass(exc_type, pytest.skip.Exception):
            record_criterion(self.number, self.title, None, str(exc))
        else:
            record_criterion(self.number, self.title, False, self.detail or str(exc)[:200])
        return False


@pytest.fixture
def criterion():
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        title, passed, detail = ACCEPTANCE_RESULTS[number]
        status = {True: "PASS", False: "FAIL", None: "SKIP"}[passed]
        line = f"[{status}] {number}. {title}"
        if detail:
            line += f" -- {detail}"
        terminalreporter.write_line(line)
