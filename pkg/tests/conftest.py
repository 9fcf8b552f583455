import sys
from pathlib import Path

import pytest

from elimkit.parser import parse_program

KB_TEXT = """\
# the sprinkler knowledge bases
let kb1 = (shoes_are_wet <- grass_is_wet),
          (grass_is_wet <- rained_last_night),
          (grass_is_wet <- sprinkler_was_on).

let kb2 = (shoes_are_wet <- grass_is_wet),
          (grass_is_wet <- sprinkler_was_on, ~sprinkler_was_abnormal1),
          sprinkler_was_on.
"""

SOLVER_DIR = Path(__file__).parent / "solvers"
STUB_SAT_CMD = f"{sys.executable} {SOLVER_DIR / 'stub_sat.py'}"
STUB_QBF_CMD = f"{sys.executable} {SOLVER_DIR / 'stub_qbf.py'}"


@pytest.fixture(scope="session")
def kb_program():
    return parse_program(KB_TEXT)


@pytest.fixture()
def kb_file(tmp_path):
    path = tmp_path / "kb.tel"
    path.write_text(KB_TEXT, encoding="utf-8")
    return str(path)
