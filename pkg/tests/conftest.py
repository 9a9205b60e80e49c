import pytest

_OUTCOMES: list[tuple[int, bool, str]] = []


class CriterionRecorder:
    def __init__(self, number: int):
        self.number = number

    def report(self, passed: bool, detail: str) -> None:
        _OUTCOMES.append((self.number, passed, detail))
        assert passed, f"criterion {self.number}: {detail}"


@pytest.fixture
def criterion(request):
    marker = request.node.get_closest_marker("criterion")
    return CriterionRecorder(marker.args[0])


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(_OUTCOMES):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {detail}")
