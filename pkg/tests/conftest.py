from fractions import Fraction
from importlib import resources

import pytest

from credible import MultiStageGame, StageGame, formats


def fixture_path(name: str) -> str:
    return str(resources.files("credible") / "fixtures" / name)


@pytest.fixture
def fx():
    return fixture_path


@pytest.fixture
def cde() -> StageGame:
    return StageGame.bimatrix(
        "CDE", "CDE",
        [[(4, 4), (0, 0), (0, 5)],
         [(0, 0), (1, 1), (0, 0)],
         [(5, 0), (0, 0), (3, 3)]],
    )


@pytest.fixture
def pd() -> StageGame:
    return StageGame.bimatrix("CD", "CD", [[(3, 3), (0, 5)], [(5, 0), (1, 1)]])


@pytest.fixture
def mp() -> StageGame:
    return StageGame.bimatrix("HT", "HT", [[(1, -1), (-1, 1)], [(-1, 1), (1, -1)]])


@pytest.fixture
def twice_cde(cde) -> MultiStageGame:
    return MultiStageGame.repeated(cde, 2, 1)


@pytest.fixture
def non_nash() -> MultiStageGame:
    return formats.load_game(fixture_path("non_nash.game"))


@pytest.fixture
def pstar():
    return formats.load_profile(fixture_path("pstar.profile"))


F = Fraction


ACCEPTANCE: dict = {}


@pytest.fixture
def record(request):
    """Register an acceptance criterion outcome; a line per criterion is printed at the end."""
    num = request.node.get_closest_marker("acceptance").args[0]
    ACCEPTANCE[num] = ("FAIL", "did not finish")

    def done(detail: str):
        ACCEPTANCE[num] = ("PASS", detail)

    yield done


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        status, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num}: {status} - {detail}")
