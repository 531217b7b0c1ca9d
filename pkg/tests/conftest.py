import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import kfk


@pytest.fixture(scope="session")
def tables_1e4():
    return {kind: kfk.tabulate(kind, (1, 10**4 + 1)) for kind in kfk.sieve.KINDS}


@pytest.fixture(scope="session")
def phi_1e5():
    return kfk.tabulate("phi", (1, 10**5 + 1))
