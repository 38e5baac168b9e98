import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from machines import MUL2_SOURCE  # noqa: E402

from icrn.compiler import compile_machine  # noqa: E402
from icrn.regmachine import parse_rm  # noqa: E402


@pytest.fixture(scope="session")
def mul2():
    return parse_rm(MUL2_SOURCE)


@pytest.fixture(scope="session")
def mul2_net(mul2):
    return compile_machine(mul2)
