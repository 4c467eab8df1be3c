import pytest

from smspin.cli.config import ENV_VAR, load_config

_LINES: list[str] = []


@pytest.fixture(autouse=True)
def _no_env_config(monkeypatch):
    monkeypatch.delenv(ENV_VAR, raising=False)


@pytest.fixture
def cfg():
    return load_config(None)


@pytest.fixture
def report_line():
    """Collects acceptance lines; they are printed after the run even when output is captured."""
    return _LINES.append


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES):
            terminalreporter.write_line(line)
