import functools
import json
import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

from basgeom import QArray, q  # noqa: E402
from basgeom.connections import Geometry  # noqa: E402
from basgeom.constructions.catalog import catalog_build, catalog_names  # noqa: E402
from basgeom.hermitian import HermitianData  # noqa: E402
from basgeom.lie import LieAlgebra  # noqa: E402

KODAIRA_NAMES = ["z", "w", "e", "Je"]
Z, W, E, JE = range(4)


@functools.lru_cache(maxsize=None)
def entry(name):
    return catalog_build(name)


@functools.lru_cache(maxsize=None)
def geometry(name):
    return Geometry(entry(name).hermitian)


def kodaira():
    return entry("kodaira4").hermitian


def unit(n, i):
    return QArray.eye(n)[i]


def frozen_oracle():
    return json.loads((HERE / "fixtures" / "oracle_frozen.json").read_text())


def rotation_J(n):
    J = [[0] * n for _ in range(n)]
    for a in range(0, n, 2):
        J[a + 1][a] = 1
        J[a][a + 1] = -1
    return QArray.of(J)


def abelian_kahler(n=4):
    return HermitianData(LieAlgebra.abelian(n), "identity", rotation_J(n))


def su2_biinvariant():
    from basgeom.lie import su2

    return su2("x")


@pytest.fixture(scope="session")
def names():
    return catalog_names()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
