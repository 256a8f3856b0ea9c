import pytest

_LINES = pytest.StashKey[list]()


class Criterion:
    """Collects the outcome of one acceptance criterion for the summary table."""

    def __init__(self, number: int, title: str):
        self.number, self.title = number, title
        self.ok: bool | None = None
        self.detail = ""

    def record(self, ok: bool, detail: str = "") -> bool:
        self.ok, self.detail = bool(ok), detail
        return self.ok

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        detail = self.detail or "raised before recording a result"
        return f"ACCEPTANCE {self.number} {verdict}  {self.title}: {detail}"


@pytest.fixture
def criterion(request, capsys):
    made: list[Criterion] = []

    def make(number: int, title: str) -> Criterion:
        made.append(Criterion(number, title))
        return made[-1]

    yield make
    for c in made:
        line = c.line()
        request.config.stash.setdefault(_LINES, []).append(line)
        with capsys.disabled():
            print(f"\n{line}")


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
