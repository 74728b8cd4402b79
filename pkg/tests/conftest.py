import pytest

from kleinring.catalog import ExceptionalPoint, TubeId, atom, make_A, tube_lattice
from kleinring.config import EngineConfig
from kleinring.dvr import TruncatedDVR
from kleinring.lattice import TypedLattice
from kleinring.ring import CharacterType


@pytest.fixture(scope="session")
def config() -> EngineConfig:
    return EngineConfig(p=2)


@pytest.fixture(scope="session")
def config3() -> EngineConfig:
    return EngineConfig(p=3)


@pytest.fixture(scope="session")
def ring(config: EngineConfig) -> TruncatedDVR:
    return config.dvr


@pytest.fixture(scope="session")
def lattice_A(ring: TruncatedDVR) -> TypedLattice:
    return make_A(ring)


@pytest.fixture(scope="session")
def lattice_R_pp(ring: TruncatedDVR) -> TypedLattice:
    return atom(CharacterType.PP, ring)


@pytest.fixture(scope="session")
def lattice_R_00(ring: TruncatedDVR) -> TypedLattice:
    return atom(CharacterType.ZZ, ring)


@pytest.fixture(scope="session")
def mouth(config: EngineConfig) -> TubeId:
    """Quasi-simple of branch 1 at the exceptional point 1."""
    return TubeId(ExceptionalPoint.ONE, 1, 1)


@pytest.fixture(scope="session")
def mouth_lattice(mouth: TubeId, config: EngineConfig) -> TypedLattice:
    return tube_lattice(mouth, config)
