import functools

import pytest
from hypothesis import settings

from qgdec.codes import get_code
from qgdec.graphext import extract

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

BUILTINS = ("five_qubit", "steane", "noncss11", "noncss17", "noncss25", "noncss29",
            "color:3", "color:5", "surface:3", "surface:5")


@functools.lru_cache(maxsize=None)
def code_and_graph(name: str):
    code = get_code(name)
    return code, extract(code)


@pytest.fixture(params=BUILTINS)
def builtin(request):
    return code_and_graph(request.param)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
