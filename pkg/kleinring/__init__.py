"Lattices over the Kleinian 4-ring and their Tate cohomology."

from kleinring.catalog import (
    ExceptionalPoint,
    FamilyBase,
    FamilyId,
    FreeId,
    SumId,
    TubeId,
    build,
    exceptional_tube,
    homogeneous_tube,
    tube_sequence,
)
from kleinring.cohomology import CheckResult, CheckStatus, expected, fingerprint, tate
from kleinring.config import EngineConfig
from kleinring.dvr import ModuleInvariant, TruncatedDVR
from kleinring.errors import (
    ConfigurationError,
    KleinringError,
    ParseError,
    PrecisionExhausted,
    SemanticError,
)
from kleinring.lattice import (
    ShortExactSeq,
    TypedLattice,
    direct_sum,
    dual,
    lattice_map,
    realize,
    split_sequence,
    syzygy,
    tau,
    tau_inverse,
)
from kleinring.notation import parse_spec
from kleinring.quiver import QuiverRep, VectorRank
from kleinring.ring import CharacterType

__version__ = "0.1.0"

__all__ = [
    "CharacterType",
    "CheckResult",
    "CheckStatus",
    "ConfigurationError",
    "EngineConfig",
    "ExceptionalPoint",
    "FamilyBase",
    "FamilyId",
    "FreeId",
    "KleinringError",
    "ModuleInvariant",
    "ParseError",
    "PrecisionExhausted",
    "QuiverRep",
    "SemanticError",
    "ShortExactSeq",
    "SumId",
    "TruncatedDVR",
    "TubeId",
    "TypedLattice",
    "VectorRank",
    "build",
    "direct_sum",
    "dual",
    "exceptional_tube",
    "expected",
    "fingerprint",
    "homogeneous_tube",
    "lattice_map",
    "parse_spec",
    "realize",
    "split_sequence",
    "syzygy",
    "tate",
    "tau",
    "tau_inverse",
    "tube_sequence",
    "integrations",
]
