"""
Representations of the four-arm star quiver over the residue field k.

A representation has a central space `V_• = k^d_•` and four arm spaces
`V_αβ = k^d_αβ`, with maps `f_αβ: V_• → V_αβ`. Maps act on column vectors:
`f_αβ` is stored as a `d_αβ × d_•` matrix.
"""

import itertools
import logging
from collections.abc import Callable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from sympy import Poly, symbols

from kleinring.config import EngineConfig
from kleinring.dvr import (
    KMatrix,
    gf_matrix,
    kron,
    nullspace,
    rank_mod,
    row_basis,
    rref,
    solve_mod,
)
from kleinring.errors import Inconclusive
from kleinring.ring import TYPES, CharacterType

logger = logging.getLogger(__name__)

_t = symbols("t")


@dataclass(frozen=True)
class VectorRank:
    """The vector rank `(d_• | d_pp, d_p0, d_0p, d_00)`."""

    d_bullet: int
    d_pp: int
    d_p0: int
    d_0p: int
    d_00: int

    @classmethod
    def from_arms(cls, d_bullet: int, arms: Mapping[CharacterType, int]) -> "VectorRank":
        return cls(d_bullet, *(arms.get(t, 0) for t in TYPES))

    @property
    def arms(self) -> tuple[int, int, int, int]:
        return (self.d_pp, self.d_p0, self.d_0p, self.d_00)

    def arm(self, t: CharacterType) -> int:
        return self.arms[TYPES.index(t)]

    @property
    def total(self) -> int:
        return sum(self.arms)

    @property
    def is_regular(self) -> bool:
        return 2 * self.d_bullet == self.total

    def permuted(self, mapping: Mapping[CharacterType, CharacterType]) -> "VectorRank":
        """Move the multiplicity of type `t` to `mapping[t]`."""
        arms = {mapping.get(t, t): self.arm(t) for t in TYPES}
        return VectorRank.from_arms(self.d_bullet, arms)

    def __add__(self, other: "VectorRank") -> "VectorRank":
        return VectorRank(
            self.d_bullet + other.d_bullet,
            *(a + b for a, b in zip(self.arms, other.arms)),
        )

    def __str__(self) -> str:
        return f"({self.d_bullet}|{','.join(str(a) for a in self.arms)})"

    def to_list(self) -> list[int]:
        return [self.d_bullet, *self.arms]


@dataclass(frozen=True, eq=False)
class QuiverRep:
    """A representation of the star quiver over k = Z/p."""

    p: int
    d_bullet: int
    maps: Mapping[CharacterType, KMatrix] = field(repr=False)

    def __post_init__(self) -> None:
        maps = {}
        for t in TYPES:
            m = np.asarray(
                self.maps.get(t, np.zeros((0, self.d_bullet))), dtype=np.int64
            )
            if m.ndim != 2 or m.shape[1] != self.d_bullet:
                raise ValueError(f"arm {t.value} has shape {m.shape}, expected (*, {self.d_bullet})")
            maps[t] = m % self.p
        object.__setattr__(self, "maps", maps)

    @property
    def rank(self) -> VectorRank:
        return VectorRank.from_arms(self.d_bullet, {t: self.dim(t) for t in TYPES})

    def dim(self, t: CharacterType) -> int:
        return self.maps[t].shape[0]

    def vertex_dims(self) -> list[int]:
        """Dimensions in vertex order (•, pp, p0, 0p, 00)."""
        return [self.d_bullet, *(self.dim(t) for t in TYPES)]

    @property
    def f_plus(self) -> KMatrix:
        """The stacked map `V_• → ⊕ V_αβ`."""
        return np.vstack([self.maps[t] for t in TYPES])

    def permute_arms(self, mapping: Mapping[CharacterType, CharacterType]) -> "QuiverRep":
        """Move the arm map of type `t` to type `mapping[t]`."""
        return QuiverRep(
            self.p, self.d_bullet, {mapping.get(t, t): self.maps[t] for t in TYPES}
        )

    def __add__(self, other: "QuiverRep") -> "QuiverRep":
        maps = {}
        for t in TYPES:
            a, b = self.maps[t], other.maps[t]
            block = np.zeros(
                (a.shape[0] + b.shape[0], self.d_bullet + other.d_bullet), dtype=np.int64
            )
            block[: a.shape[0], : self.d_bullet] = a
            block[a.shape[0] :, self.d_bullet :] = b
            maps[t] = block
        return QuiverRep(self.p, self.d_bullet + other.d_bullet, maps)


@dataclass(frozen=True, eq=False)
class RepMorphism:
    """A morphism of representations, one matrix per vertex."""

    bullet: KMatrix
    arms: Mapping[CharacterType, KMatrix]

    def components(self) -> list[KMatrix]:
        return [self.bullet, *(self.arms[t] for t in TYPES)]

    def is_isomorphism(self, p: int) -> bool:
        return all(
            c.shape[0] == c.shape[1] and rank_mod(c, p) == c.shape[0]
            for c in self.components()
        )


@dataclass(frozen=True)
class Validation:
    """Outcome of `validate`; empty `violations` means the representation is admissible."""

    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


def validate(rep: QuiverRep) -> Validation:
    """
    Check that every arm map is surjective and the stacked map is injective.

    The report names each failing arm, the injectivity failure, and trivial
    representations concentrated on a single arm.
    """
    violations = []
    for t in TYPES:
        if rank_mod(rep.maps[t], rep.p) < rep.dim(t):
            violations.append(f"arm {t.value} is not surjective")
    if rank_mod(rep.f_plus, rep.p) < rep.d_bullet:
        violations.append("f_+ is not injective")
    if rep.d_bullet == 0:
        for t in TYPES:
            if rep.dim(t):
                violations.append(f"trivial representation V^{t.value}")
    return Validation(tuple(violations))


def _hom_equations(source: QuiverRep, target: QuiverRep) -> KMatrix:
    """
    Matrix of the commuting-square conditions `φ_αβ·f_αβ = g_αβ·φ_•`.

    Unknowns are `φ_•` then each `φ_αβ`, flattened row-major; rows are the
    entries of `g_αβ·φ_• − φ_αβ·f_αβ`.
    """
    p = source.p
    xb, yb = source.d_bullet, target.d_bullet
    widths = [yb * xb] + [target.dim(t) * source.dim(t) for t in TYPES]
    offsets = np.concatenate([[0], np.cumsum(widths)]).astype(int)
    blocks = []
    for index, t in enumerate(TYPES):
        rows = np.zeros((target.dim(t) * xb, int(offsets[-1])), dtype=np.int64)
        rows[:, offsets[0] : offsets[1]] = kron(target.maps[t], np.eye(xb, dtype=np.int64))
        rows[:, offsets[index + 1] : offsets[index + 2]] = -kron(
            np.eye(target.dim(t), dtype=np.int64), source.maps[t].T
        )
        blocks.append(rows % p)
    return np.vstack(blocks) if blocks else np.zeros((0, int(offsets[-1])), dtype=np.int64)


def _unpack_morphism(vector: KMatrix, source: QuiverRep, target: QuiverRep) -> RepMorphism:
    xb, yb = source.d_bullet, target.d_bullet
    bullet = vector[: yb * xb].reshape(yb, xb)
    arms = {}
    offset = yb * xb
    for t in TYPES:
        size = target.dim(t) * source.dim(t)
        arms[t] = vector[offset : offset + size].reshape(target.dim(t), source.dim(t))
        offset += size
    return RepMorphism(bullet, arms)


def hom_space(rep1: QuiverRep, rep2: QuiverRep) -> list[RepMorphism]:
    """Basis of the homomorphisms `rep1 → rep2`, from the commuting-square system over k."""
    equations = _hom_equations(rep1, rep2)
    return [_unpack_morphism(v, rep1, rep2) for v in nullspace(equations, rep1.p)]


def _combine(basis: list[RepMorphism], coefficients: np.ndarray, p: int) -> RepMorphism:
    bullet = sum(c * m.bullet for c, m in zip(coefficients, basis)) % p
    arms = {t: sum(c * m.arms[t] for c, m in zip(coefficients, basis)) % p for t in TYPES}
    return RepMorphism(np.asarray(bullet, dtype=np.int64), {t: np.asarray(a, dtype=np.int64) for t, a in arms.items()})


def _candidates(
    basis: list[RepMorphism], p: int, config: EngineConfig
) -> tuple[bool, Iterator[RepMorphism]]:
    """Elements of the span of `basis` to try: all of them at desk scale, else a seeded sample."""
    s = len(basis)
    exhaustive = p**s <= config.exhaustive_limit

    def generate() -> Iterator[RepMorphism]:
        if exhaustive:
            for coefficients in itertools.product(range(p), repeat=s):
                if any(coefficients):
                    yield _combine(basis, np.array(coefficients, dtype=np.int64), p)
            return
        yield from basis
        rng = np.random.default_rng(config.seed)
        for _ in range(config.random_trials):
            yield _combine(basis, rng.integers(0, p, size=s), p)

    return exhaustive, generate()


def charpoly_mod(m: KMatrix, p: int) -> Poly:
    """Characteristic polynomial over k."""
    return Poly([int(c) % p for c in gf_matrix(m, p).charpoly()], _t, modulus=p)


def _poly_of_matrix(poly: Poly, m: KMatrix, p: int) -> KMatrix:
    n = m.shape[0]
    out = np.zeros((n, n), dtype=np.int64)
    for c in poly.all_coeffs():
        out = (out @ m + (int(c) % p) * np.eye(n, dtype=np.int64)) % p
    return out


def _splitting_factor(morphism: RepMorphism, p: int) -> Optional[Poly]:
    """An irreducible factor of the characteristic polynomial coprime to the rest, if any."""
    _, factors = charpoly_mod(morphism.bullet, p).factor_list()
    if len(factors) < 2:
        return None
    factor, multiplicity = factors[0]
    return factor**multiplicity


def _find_splitting(
    rep: QuiverRep, config: EngineConfig
) -> tuple[bool, Optional[tuple[RepMorphism, Poly]]]:
    basis = hom_space(rep, rep)
    if len(basis) <= 1:
        return True, None
    exhaustive, candidates = _candidates(basis, rep.p, config)
    for morphism in candidates:
        factor = _splitting_factor(morphism, rep.p)
        if factor is not None:
            return True, (morphism, factor)
    return exhaustive, None


def is_indecomposable(
    rep: QuiverRep, config: EngineConfig = EngineConfig(), *, strict: bool = False
) -> bool:
    """
    Decide indecomposability by Fitting splitting over the endomorphism algebra.

    The representation is assumed admissible, so an endomorphism is determined
    by its central component and splits the representation exactly when the
    characteristic polynomial of that component has two coprime factors.

    :param strict: Raise `Inconclusive` instead of answering when only a random
    sample of the endomorphism algebra could be examined.
    """
    if rep.d_bullet == 0:
        return False
    decided, splitting = _find_splitting(rep, config)
    if splitting is not None:
        return False
    if not decided and strict:
        raise Inconclusive()
    return True


def _restrict(rep: QuiverRep, subspaces: list[KMatrix]) -> QuiverRep:
    """The subrepresentation on `subspaces` (columns spanning each vertex space, • first)."""
    p = rep.p
    bullet = subspaces[0]
    maps = {}
    for index, t in enumerate(TYPES):
        target = subspaces[index + 1]
        images = (rep.maps[t] @ bullet) % p
        coordinates = np.zeros((target.shape[1], bullet.shape[1]), dtype=np.int64)
        for j in range(bullet.shape[1]):
            x = solve_mod(target.T, images[:, j], p)
            if x is None:
                raise ValueError("subspaces are not a subrepresentation")
            coordinates[:, j] = x
        maps[t] = coordinates
    return QuiverRep(p, bullet.shape[1], maps)


def _fitting_summands(rep: QuiverRep, morphism: RepMorphism, factor: Poly) -> tuple[QuiverRep, QuiverRep]:
    p = rep.p
    kernels, images = [], []
    for component in morphism.components():
        n = component.shape[0]
        power = _poly_of_matrix(factor, component, p)
        stable = np.eye(n, dtype=np.int64)
        for _ in range(max(n, 1)):
            stable = (stable @ power) % p
        kernels.append(nullspace(stable, p).T)
        images.append(row_basis(stable.T, p).T)
    return _restrict(rep, kernels), _restrict(rep, images)


def decompose(rep: QuiverRep, config: EngineConfig = EngineConfig()) -> list[QuiverRep]:
    """Split a representation into indecomposable summands."""
    if rep.d_bullet == 0:
        return []
    _, splitting = _find_splitting(rep, config)
    if splitting is None:
        return [rep]
    morphism, factor = splitting
    first, second = _fitting_summands(rep, morphism, factor)
    logger.debug("split %s into %s + %s", rep.rank, first.rank, second.rank)
    return decompose(first, config) + decompose(second, config)


def find_isomorphism(
    rep1: QuiverRep, rep2: QuiverRep, config: EngineConfig = EngineConfig()
) -> Optional[RepMorphism]:
    """Search the homomorphisms `rep1 → rep2` for an invertible one."""
    if rep1.rank != rep2.rank:
        return None
    basis = hom_space(rep1, rep2)
    if not basis and not any(rep1.vertex_dims()):
        return _unpack_morphism(np.zeros(0, dtype=np.int64), rep1, rep2)
    _, candidates = _candidates(basis, rep1.p, config)
    for morphism in candidates:
        if morphism.is_isomorphism(rep1.p):
            return morphism
    return None


def is_isomorphic(rep1: QuiverRep, rep2: QuiverRep, config: EngineConfig = EngineConfig()) -> bool:
    return find_isomorphism(rep1, rep2, config) is not None


def search_morphism(
    source: QuiverRep,
    target: QuiverRep,
    accept: Callable[[RepMorphism], bool],
    config: EngineConfig = EngineConfig(),
) -> Optional[RepMorphism]:
    """First homomorphism `source → target` satisfying `accept`, or `None`."""
    _, candidates = _candidates(hom_space(source, target), source.p, config)
    for morphism in candidates:
        if accept(morphism):
            return morphism
    return None


def ext_space(quotient: QuiverRep, sub: QuiverRep) -> list[dict[CharacterType, KMatrix]]:
    """
    Representatives of a basis of `Ext¹(quotient, sub)`.

    Each representative gives, per arm, a `dim sub_αβ × dim quotient_•` matrix
    `η_αβ`; extensions are the cokernel of the map
    `(φ_•, φ_αβ) ↦ (φ_αβ·f_αβ − g_αβ·φ_•)` into `⊕ Hom(quotient_•, sub_αβ)`.
    """
    p = quotient.p
    equations = _hom_equations(quotient, sub)
    n_rows = equations.shape[0]
    if equations.shape[1]:
        _, pivots = rref(equations.T, p)
    else:
        pivots = []
    complement = [i for i in range(n_rows) if i not in pivots]
    representatives = []
    xb = quotient.d_bullet
    for index in complement:
        eta = {t: np.zeros((sub.dim(t), xb), dtype=np.int64) for t in TYPES}
        offset = 0
        for t in TYPES:
            size = sub.dim(t) * xb
            if index < offset + size:
                row, col = divmod(index - offset, xb)
                eta[t][row, col] = 1
                break
            offset += size
        representatives.append(eta)
    return representatives


def extension(
    quotient: QuiverRep, sub: QuiverRep, eta: Mapping[CharacterType, KMatrix]
) -> QuiverRep:
    """
    Middle term of the extension `0 → sub → E → quotient → 0` with class `eta`.

    `E_• = sub_• ⊕ quotient_•` and `E_αβ = [[g_αβ, η_αβ], [0, f_αβ]]`.
    """
    p = quotient.p
    maps = {}
    for t in TYPES:
        top = np.hstack([sub.maps[t], np.asarray(eta[t], dtype=np.int64).reshape(sub.dim(t), quotient.d_bullet)])
        bottom = np.hstack([np.zeros((quotient.dim(t), sub.d_bullet), dtype=np.int64), quotient.maps[t]])
        maps[t] = np.vstack([top, bottom]) % p
    return QuiverRep(p, sub.d_bullet + quotient.d_bullet, maps)


def combinations(basis: list[dict[CharacterType, KMatrix]], p: int) -> Iterator[dict[CharacterType, KMatrix]]:
    """Nonzero k-combinations of extension representatives in lexicographic order."""
    for coefficients in itertools.product(range(p), repeat=len(basis)):
        if not any(coefficients):
            continue
        yield {
            t: sum(c * eta[t] for c, eta in zip(coefficients, basis)) % p
            for t in TYPES
        }


def random_rep(rng: np.random.Generator, p: int, max_dim: int = 3) -> QuiverRep:
    """A random admissible representation with `d_• ≤ max_dim`, drawn until one validates."""
    while True:
        d_bullet = int(rng.integers(1, max_dim + 1))
        maps = {
            t: rng.integers(0, p, size=(int(rng.integers(0, d_bullet + 1)), d_bullet))
            for t in TYPES
        }
        rep = QuiverRep(p, d_bullet, maps)
        if validate(rep).ok:
            return rep
