"""
Named lattices: the preprojective and preinjective families built from `A` and
the four rank-one lattices `R_αβ`, the tubes, and free modules.

Lattices are described by hashable identifiers (`FamilyId`, `TubeId`,
`FreeId`, `SumId`) and built on demand by `build`, which caches every
construction per configuration.
"""

import logging
from collections.abc import Mapping
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Optional, Union

import numpy as np
from sympy import Poly, symbols

from kleinring.config import EngineConfig
from kleinring.dvr import KMatrix, TruncatedDVR, rank_mod
from kleinring.errors import (
    ExtensionSearchFailed,
    InvalidTube,
    NotHomogeneousPoint,
    TranslateBoundExceeded,
)
from kleinring.lattice import (
    ShortExactSeq,
    TypedLattice,
    direct_sum,
    lattice_map,
    realize,
    syzygy,
    tau_inverse,
)
from kleinring.quiver import (
    QuiverRep,
    RepMorphism,
    VectorRank,
    combinations,
    ext_space,
    extension,
    is_indecomposable,
    search_morphism,
)
from kleinring.ring import TYPES, CharacterType

logger = logging.getLogger(__name__)

_t = symbols("t")

PP, P0, ZP, ZZ = TYPES


class FamilyBase(str, Enum):
    """Starting lattice of a family of translates."""

    A = "A"
    R_PP = "R[pp]"
    R_P0 = "R[p0]"
    R_0P = "R[0p]"
    R_00 = "R[00]"

    @property
    def character(self) -> Optional[CharacterType]:
        """The type `αβ` of `R_αβ`, or `None` for `A`."""
        if self is FamilyBase.A:
            return None
        return CharacterType(self.value[2:4])

    @classmethod
    def of(cls, t: CharacterType) -> "FamilyBase":
        return cls(f"R[{t.value}]")


@dataclass(frozen=True)
class FamilyId:
    """The translate `base^k`: `Ω^k(base)` for `k > 0`, `τ^{-|k|}(base)` for `k < 0`."""

    base: FamilyBase
    k: int = 0

    @property
    def label(self) -> str:
        return self.base.value if self.k == 0 else f"{self.base.value}^{self.k}"


class ExceptionalPoint(str, Enum):
    """The three points of the tube family carrying tubes of rank two."""

    ZERO = "0"
    ONE = "1"
    INFINITY = "inf"


CACHE_SIZE = 256
"""Lattices kept per cached builder; keys include the engine config."""

# Arm permutations carrying the tube at 1 onto the other exceptional tubes.
_POINT_PERMUTATION: dict[ExceptionalPoint, dict[CharacterType, CharacterType]] = {
    ExceptionalPoint.ONE: {},
    ExceptionalPoint.ZERO: {P0: ZZ, ZZ: P0},
    ExceptionalPoint.INFINITY: {P0: ZP, ZP: P0},
}

Coefficients = tuple[int, ...]
"""Polynomial in t over k, coefficients from the leading one down."""


@dataclass(frozen=True)
class TubeId:
    """
    A layer of a tube: `T^f_layer` for a homogeneous point `f`, or
    `T^{λ branch}_layer` for an exceptional point `λ`.
    """

    point: Union[Coefficients, ExceptionalPoint]
    layer: int
    branch: Optional[int] = None

    def __post_init__(self) -> None:
        if self.layer < 1:
            raise InvalidTube(f"layer {self.layer} is not positive")
        if isinstance(self.point, ExceptionalPoint):
            if self.branch not in (1, 2):
                raise InvalidTube(f"branch {self.branch} is not 1 or 2")
        else:
            if self.branch is not None:
                raise InvalidTube("homogeneous tubes have no branch")
            object.__setattr__(self, "point", tuple(int(c) for c in self.point))

    @property
    def is_exceptional(self) -> bool:
        return isinstance(self.point, ExceptionalPoint)

    @property
    def degree(self) -> int:
        """Degree of the point, 1 at exceptional points."""
        if isinstance(self.point, ExceptionalPoint):
            return 1
        return len(self.point) - 1

    @property
    def label(self) -> str:
        if isinstance(self.point, ExceptionalPoint):
            return f"etube(l={self.point.value},i={self.branch},n={self.layer})"
        return f"tube(f={format_poly(self.point)},n={self.layer})"


@dataclass(frozen=True)
class FreeId:
    rank: int

    @property
    def label(self) -> str:
        return f"free({self.rank})"


@dataclass(frozen=True)
class SumId:
    parts: tuple["Description", ...]

    @property
    def label(self) -> str:
        return f"sum({','.join(part.label for part in self.parts)})"


Description = Union[FamilyId, TubeId, FreeId, SumId]


def format_poly(coefficients: Coefficients) -> str:
    """
    Render a polynomial in t, leading coefficient first.

    **Example:**

    ```py
    format_poly((1, 0, 1, 1))  # "t^3+t+1"
    ```
    """
    degree = len(coefficients) - 1
    terms = []
    for index, c in enumerate(coefficients):
        power = degree - index
        if c == 0:
            continue
        scalar = "" if c == 1 and power else str(c)
        if power == 0:
            terms.append(str(c))
        elif power == 1:
            terms.append(f"{scalar}t")
        else:
            terms.append(f"{scalar}t^{power}")
    return "+".join(terms) or "0"


# Base lattices.


def _single_arm_rep(t: CharacterType, p: int) -> QuiverRep:
    return QuiverRep(p, 1, {t: np.ones((1, 1), dtype=np.int64)})


def atom(t: CharacterType, ring: TruncatedDVR) -> TypedLattice:
    """The rank-one lattice `R_αβ`, on which x acts as α and y as β."""
    return realize(_single_arm_rep(t, ring.p), ring, label=FamilyBase.of(t).value)


def make_A(ring: TruncatedDVR) -> TypedLattice:
    """The overring `A = K + Rz`, the residues of whose coordinates all agree."""
    rep = QuiverRep(ring.p, 1, {t: np.ones((1, 1), dtype=np.int64) for t in TYPES})
    return realize(rep, ring, label="A")


def make_free(rank: int, ring: TruncatedDVR) -> TypedLattice:
    return TypedLattice(ring, (), np.zeros((0, 0), dtype=np.int64), free_rank=rank, label=f"free({rank})")


def base_lattice(base: FamilyBase, ring: TruncatedDVR) -> TypedLattice:
    character = base.character
    return make_A(ring) if character is None else atom(character, ring)


# Families of translates.


def displayed_rank(family: FamilyId) -> VectorRank:
    """The vector rank of `base^k` as the closed rank table states it."""
    k = family.k
    if family.base is FamilyBase.A:
        if k == 0:
            return VectorRank(1, 1, 1, 1, 1)
        if k > 0:
            return VectorRank(2 * k - 1, k, k, k, k)
        return VectorRank(1 - 2 * k, 1 - k, 1 - k, 1 - k, 1 - k)
    sign = -1 if k % 2 else 1
    if k == 0:
        pp_form = VectorRank(1, 1, 0, 0, 0)
    elif k > 0:
        half = k // 2
        pp_form = VectorRank(k + 1, half - sign, half, half, half)
    else:
        half = (1 - k) // 2
        pp_form = VectorRank(-k, half + sign, half, half, half)
    character = family.base.character
    assert character is not None
    return pp_form.permuted({PP: character, character: PP})


@dataclass(frozen=True)
class RankComparison:
    """Vector rank of a built translate against the closed rank table."""

    family: FamilyId
    oracle: VectorRank
    displayed: VectorRank

    @property
    def matches(self) -> bool:
        return self.oracle == self.displayed


@lru_cache(maxsize=CACHE_SIZE)
def translate_family(family: FamilyId, config: EngineConfig = EngineConfig()) -> TypedLattice:
    """
    Build `base^k` by repeated syzygies (`k > 0`) or inverse translates (`k < 0`).

    :raises TranslateBoundExceeded: `|k|` exceeds `config.translate_bound`.
    """
    k = family.k
    if abs(k) > config.translate_bound:
        raise TranslateBoundExceeded(
            f"|k| = {abs(k)} exceeds translate bound {config.translate_bound}"
        )
    if k == 0:
        lattice = base_lattice(family.base, config.dvr)
    elif k > 0:
        lattice = syzygy(translate_family(FamilyId(family.base, k - 1), config))
    else:
        lattice = tau_inverse(translate_family(FamilyId(family.base, k + 1), config))
    lattice = lattice.with_label(family.label)
    comparison = RankComparison(family, lattice.vector_rank, displayed_rank(family))
    logger.debug(
        "built %s: vector rank %s, table %s%s",
        family.label,
        comparison.oracle,
        comparison.displayed,
        "" if comparison.matches else " (differs)",
    )
    return lattice


def compare_rank(family: FamilyId, config: EngineConfig = EngineConfig()) -> RankComparison:
    oracle = translate_family(family, config).vector_rank
    return RankComparison(family, oracle, displayed_rank(family))


# Tubes.


def default_homogeneous_points(p: int) -> list[Coefficients]:
    """Two homogeneous points of small degree used by the verification suites."""
    if p == 2:
        return [(1, 1, 1), (1, 0, 1, 1)]
    if p == 3:
        return [(1, 1), (1, 0, 1)]
    return [(1, p - 2), (1, p - 3)]


def _point_poly(coefficients: Coefficients, p: int) -> Poly:
    return Poly([int(c) % p for c in coefficients], _t, modulus=p)


def check_homogeneous_point(coefficients: Coefficients, p: int) -> None:
    """
    :raises NotHomogeneousPoint: The polynomial is `t` or `t - 1`.
    :raises InvalidTube: The polynomial is not monic and irreducible over k.
    """
    reduced = [int(c) % p for c in coefficients]
    while reduced and reduced[0] == 0:
        reduced.pop(0)
    if len(reduced) < 2:
        raise InvalidTube("tube polynomial must have positive degree")
    if reduced[0] != 1:
        raise InvalidTube(f"{format_poly(tuple(reduced))} is not monic")
    if len(reduced) == 2 and reduced[1] in (0, p - 1):
        raise NotHomogeneousPoint(
            f"{format_poly(tuple(reduced))} is an exceptional point; use etube"
        )
    if not _point_poly(tuple(reduced), p).is_irreducible:
        raise InvalidTube(f"{format_poly(tuple(reduced))} is not irreducible over F_{p}")


def companion(coefficients: Coefficients, p: int) -> KMatrix:
    """Companion matrix of a monic polynomial: ones below the diagonal, `-c_i` in the last column."""
    c = [int(v) % p for v in reversed(coefficients)]
    n = len(c) - 1
    f = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        if i + 1 < n:
            f[i + 1, i] = 1
        f[i, n - 1] = -c[i] % p
    return f


def homogeneous_rep(coefficients: Coefficients, layer: int, p: int) -> QuiverRep:
    """
    The representation of `T^f_layer`: arms `(I 0)`, `(0 I)`, `(I I)` and
    `(I F)` on `k^2N`, with `F` the companion matrix of `f^layer`.
    """
    check_homogeneous_point(coefficients, p)
    power = _point_poly(coefficients, p) ** layer
    f = companion(tuple(int(c) % p for c in power.all_coeffs()), p)
    n = f.shape[0]
    identity = np.eye(n, dtype=np.int64)
    zero = np.zeros((n, n), dtype=np.int64)
    maps = {
        PP: np.hstack([identity, zero]),
        P0: np.hstack([zero, identity]),
        ZP: np.hstack([identity, identity]),
        ZZ: np.hstack([identity, f]),
    }
    return QuiverRep(p, 2 * n, maps)


def expected_exceptional_rank(point: ExceptionalPoint, branch: int, layer: int) -> VectorRank:
    """Vector rank of `T^{λ branch}_layer`."""
    half = (layer + 1) // 2
    if layer % 2 == 0:
        rank = VectorRank(layer, half, half, half, half)
    elif branch == 1:
        rank = VectorRank(layer, half, half, half - 1, half - 1)
    else:
        rank = VectorRank(layer, half - 1, half - 1, half, half)
    return rank.permuted(_POINT_PERMUTATION[point])


def _exceptional_base(branch: int, p: int) -> QuiverRep:
    arms = (PP, P0) if branch == 1 else (ZP, ZZ)
    return QuiverRep(p, 1, {t: np.ones((1, 1), dtype=np.int64) for t in arms})


@lru_cache(maxsize=CACHE_SIZE)
def _exceptional_layer(
    branch: int, layer: int, config: EngineConfig
) -> tuple[QuiverRep, Optional[Mapping[CharacterType, KMatrix]]]:
    """
    `T^{1 branch}_layer` with the extension class joining `T^{1 branch}_1`
    below and `T^{1, 3-branch}_{layer-1}` above.
    """
    p = config.p
    if layer == 1:
        return _exceptional_base(branch, p), None
    sub, _ = _exceptional_layer(branch, 1, config)
    quotient, _ = _exceptional_layer(3 - branch, layer - 1, config)
    expected = expected_exceptional_rank(ExceptionalPoint.ONE, branch, layer)
    for eta in combinations(ext_space(quotient, sub), p):
        candidate = extension(quotient, sub, eta)
        if candidate.rank == expected and is_indecomposable(candidate, config):
            logger.debug("exceptional layer %d, branch %d: rank %s", layer, branch, candidate.rank)
            return candidate, eta
    raise ExtensionSearchFailed(f"no indecomposable extension for layer {layer}, branch {branch}")


def exceptional_rep(
    point: ExceptionalPoint, branch: int, layer: int, config: EngineConfig = EngineConfig()
) -> QuiverRep:
    """
    The representation of `T^{λ branch}_layer`.

    **Example:**

    ```py
    exceptional_rep(ExceptionalPoint.ONE, 1, 2).rank  # (2|1,1,1,1)
    ```
    """
    TubeId(point, layer, branch)
    rep, _ = _exceptional_layer(branch, layer, config)
    return rep.permute_arms(_POINT_PERMUTATION[point])


def tube_rep(tube: TubeId, config: EngineConfig = EngineConfig()) -> QuiverRep:
    if isinstance(tube.point, ExceptionalPoint):
        assert tube.branch is not None
        return exceptional_rep(tube.point, tube.branch, tube.layer, config)
    return homogeneous_rep(tube.point, tube.layer, config.p)


@lru_cache(maxsize=CACHE_SIZE)
def tube_lattice(tube: TubeId, config: EngineConfig = EngineConfig()) -> TypedLattice:
    return realize(tube_rep(tube, config), config.dvr, label=tube.label)


def homogeneous_tube(coefficients: Coefficients, layer: int, config: EngineConfig = EngineConfig()) -> TypedLattice:
    return tube_lattice(TubeId(tuple(coefficients), layer), config)


def exceptional_tube(
    point: ExceptionalPoint, branch: int, layer: int, config: EngineConfig = EngineConfig()
) -> TypedLattice:
    return tube_lattice(TubeId(point, layer, branch), config)


# Short exact sequences.


def _block_morphism(sub: QuiverRep, quotient: QuiverRep, into_middle: bool) -> RepMorphism:
    """Inclusion `[I; 0]` of `sub`, or projection `[0 I]` onto `quotient`, for `sub ⊕ quotient`."""

    def block(a: int, b: int) -> KMatrix:
        if into_middle:
            return np.vstack([np.eye(a, dtype=np.int64), np.zeros((b, a), dtype=np.int64)])
        return np.hstack([np.zeros((b, a), dtype=np.int64), np.eye(b, dtype=np.int64)])

    bullet = block(sub.d_bullet, quotient.d_bullet)
    arms = {t: block(sub.dim(t), quotient.dim(t)) for t in TYPES}
    return RepMorphism(bullet, arms)


def extension_sequence(
    quotient: QuiverRep,
    sub: QuiverRep,
    eta: Mapping[CharacterType, KMatrix],
    ring: TruncatedDVR,
    labels: tuple[str, str, str] = ("", "", ""),
) -> ShortExactSeq:
    """The lattice sequence `0 → Ψ(sub) → Ψ(E) → Ψ(quotient) → 0` of an extension class."""
    middle = extension(quotient, sub, eta)
    lattices = [
        realize(rep, ring, label=label) for rep, label in zip((sub, middle, quotient), labels)
    ]
    inclusion = lattice_map(_block_morphism(sub, quotient, True), lattices[0], lattices[1])
    projection = lattice_map(_block_morphism(sub, quotient, False), lattices[1], lattices[2])
    return ShortExactSeq(lattices[0], lattices[1], lattices[2], inclusion, projection)


def _injective(morphism: RepMorphism, p: int) -> bool:
    return all(rank_mod(c, p) == c.shape[1] for c in morphism.components())


def _surjective(morphism: RepMorphism, p: int) -> bool:
    return all(rank_mod(c, p) == c.shape[0] for c in morphism.components())


def tube_sequence(tube: TubeId, config: EngineConfig = EngineConfig()) -> ShortExactSeq:
    """
    The sequence `0 → T_1 → T_m → T_{m-1} → 0` inside a tube, where `T_1` is the
    quasi-simple at the mouth below `T_m`.

    :raises InvalidTube: The layer is 1.
    :raises ExtensionSearchFailed: No inclusion or projection was found.
    """
    m = tube.layer
    if m < 2:
        raise InvalidTube("a tube sequence needs layer at least 2")
    ring = config.dvr
    if isinstance(tube.point, ExceptionalPoint):
        assert tube.branch is not None
        point, branch = tube.point, tube.branch
        sub_id = TubeId(point, 1, branch)
        quotient_id = TubeId(point, m - 1, 3 - branch)
        _, eta = _exceptional_layer(branch, m, config)
        assert eta is not None
        mapping = _POINT_PERMUTATION[point]
        permuted = {mapping.get(t, t): eta[t] for t in TYPES}
        return extension_sequence(
            tube_rep(quotient_id, config),
            tube_rep(sub_id, config),
            permuted,
            ring,
            (sub_id.label, tube.label, quotient_id.label),
        )

    p = config.p
    sub_id, quotient_id = TubeId(tube.point, 1), TubeId(tube.point, m - 1)
    sub, middle, quotient = (tube_rep(i, config) for i in (sub_id, tube, quotient_id))
    inclusion = search_morphism(sub, middle, lambda phi: _injective(phi, p), config)
    projection = search_morphism(middle, quotient, lambda phi: _surjective(phi, p), config)
    if inclusion is None or projection is None:
        raise ExtensionSearchFailed(f"no inclusion and projection found for {tube.label}")
    lattices = [tube_lattice(i, config) for i in (sub_id, tube, quotient_id)]
    return ShortExactSeq(
        lattices[0],
        lattices[1],
        lattices[2],
        lattice_map(inclusion, lattices[0], lattices[1]),
        lattice_map(projection, lattices[1], lattices[2]),
    )


@lru_cache(maxsize=CACHE_SIZE)
def build(description: Description, config: EngineConfig = EngineConfig()) -> TypedLattice:
    """Construct the lattice named by a description."""
    if isinstance(description, FamilyId):
        return translate_family(description, config)
    if isinstance(description, TubeId):
        return tube_lattice(description, config)
    if isinstance(description, FreeId):
        return make_free(description.rank, config.dvr)
    lattice = build(description.parts[0], config)
    for part in description.parts[1:]:
        lattice = direct_sum(lattice, build(part, config))
    return lattice.with_label(description.label)
