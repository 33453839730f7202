import sys
from pathlib import Path

import pytest

HERE = Path(__file__).resolve().parent
sys.path.insert(0, str(HERE))

from irrex.io import GoldenFile  # noqa: E402
from irrex.tm import TmConfig, TmSpec, decode_rule  # noqa: E402

GOLDEN = HERE / "golden"


@pytest.fixture
def golden():
    def load(name):
        return GoldenFile.load(GOLDEN / f"{name}.json")
    return load


@pytest.fixture
def rules_2506_3506():
    spec = TmSpec(2, 2)
    return [decode_rule(2506, spec), decode_rule(3506, spec)]


@pytest.fixture
def tape_0100():
    return TmConfig.from_tape([0, 1, 0, 0])


_ACCEPTANCE = []


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
