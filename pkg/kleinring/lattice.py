"""
Typed lattices and the functors between lattices and quiver representations.

An A-lattice `M` is kept in normalized position: its ambient is the hereditary
hull `M♯ = A♯M = ⊕ R_αβ^d_αβ`, so that `pM♯ ⊆ M ⊆ M♯` and `M` is the preimage
of its reduction `V̄ = M/pM♯ ⊆ k^D`. A free K-summand is carried symbolically
by its rank.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Any, Union

import numpy as np

from kleinring.config import EngineConfig
from kleinring.dvr import (
    KMatrix,
    RMatrix,
    TruncatedDVR,
    block_matrix,
    kernel_basis,
    kron,
    nullspace,
    rank_mod,
    row_basis,
    rref,
    smith,
)
from kleinring.errors import InvalidLattice, InvalidRepresentation, NotNormalized
from kleinring.quiver import (
    QuiverRep,
    RepMorphism,
    VectorRank,
    decompose,
    is_indecomposable,
    validate,
)
from kleinring.ring import TYPES, CharacterType, regular_action, regular_embedding

logger = logging.getLogger(__name__)


def type_columns(types: Sequence[CharacterType]) -> dict[CharacterType, list[int]]:
    """Ambient coordinates of each type."""
    return {t: [i for i, s in enumerate(types) if s == t] for t in TYPES}


@dataclass(frozen=True, eq=False)
class TypedLattice:
    """
    A K-lattice `M ⊕ K^free_rank` with `M` an A-lattice in normalized position.

    The R-basis of `M` is the lift of the reduced echelon rows of `reduction`
    (entries in `0..p-1`), followed by `p·e_j` for every non-pivot column `j`.
    """

    ring: TruncatedDVR
    types: tuple[CharacterType, ...]
    """Type of each ambient coordinate, grouped in the order (pp, p0, 0p, 00)."""
    reduction: KMatrix
    """The subspace `M/pM♯ ⊆ k^D`, as rows in reduced echelon form."""
    free_rank: int = 0
    label: str = ""

    def __post_init__(self) -> None:
        order = [TYPES.index(t) for t in self.types]
        if order != sorted(order):
            raise InvalidLattice("ambient types must be grouped as pp, p0, 0p, 00")
        reduction = np.asarray(self.reduction, dtype=np.int64)
        if not self.types:
            reduction = np.zeros((0, 0), dtype=np.int64)
        elif reduction.ndim != 2 or reduction.shape[1] != len(self.types):
            raise InvalidLattice(f"reduction has shape {reduction.shape} for {len(self.types)} coordinates")
        echelon = row_basis(reduction, self.ring.p)
        if echelon.shape[0] != reduction.shape[0]:
            raise InvalidLattice("reduction rows are linearly dependent")
        object.__setattr__(self, "types", tuple(self.types))
        object.__setattr__(self, "reduction", echelon)

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def D(self) -> int:
        """R-rank of the A-lattice part."""
        return len(self.types)

    @property
    def d_bullet(self) -> int:
        return self.reduction.shape[0]

    @property
    def rank(self) -> int:
        """R-rank of the whole lattice."""
        return self.D + 4 * self.free_rank

    def multiplicity(self, t: CharacterType) -> int:
        return sum(1 for s in self.types if s == t)

    @property
    def vector_rank(self) -> VectorRank:
        r = self.free_rank
        return VectorRank(
            self.d_bullet + r, *(self.multiplicity(t) + r for t in TYPES)
        )

    def with_label(self, label: str) -> "TypedLattice":
        return replace(self, label=label)

    @cached_property
    def pivots(self) -> list[int]:
        return [int(np.nonzero(row)[0][0]) for row in self.reduction]

    @cached_property
    def _non_pivots(self) -> list[int]:
        pivots = set(self.pivots)
        return [j for j in range(self.D) if j not in pivots]

    @cached_property
    def basis(self) -> RMatrix:
        """R-basis of the A-lattice part, as rows in the ambient."""
        b = self.ring.zeros(self.D, self.D)
        b[: self.d_bullet] = self.ring.array(self.reduction)
        for k, j in enumerate(self._non_pivots):
            b[self.d_bullet + k, j] = self.p
        return b

    @cached_property
    def integral_dual(self) -> np.ndarray:
        """`p·basis⁻¹` over the integers, as signed Python ints."""
        g = np.zeros((self.D, self.D), dtype=object)
        for k, j in enumerate(self._non_pivots):
            g[j, self.d_bullet + k] = 1
        for r, c in enumerate(self.pivots):
            g[c, r] = self.p
            for k, j in enumerate(self._non_pivots):
                g[c, self.d_bullet + k] = -int(self.reduction[r, j])
        return g

    @cached_property
    def dual_basis(self) -> RMatrix:
        """`G = p·basis⁻¹`, which is integral."""
        return self.ring.array(self.integral_dual)

    def coordinates(self, vectors: Any) -> RMatrix:
        """
        Coordinates in `basis` of ambient vectors lying in the A-lattice part.

        The product with `G` is taken modulo `p^(N+1)`, so the exact division
        by `p` keeps the top digit.

        :raises InvalidLattice: A vector does not lie in the lattice.
        """
        lifted = np.asarray(self.ring.array(np.atleast_2d(vectors))).astype(object)
        if lifted.size == 0:
            return self.ring.zeros(lifted.shape[0], self.D)
        scaled = lifted.dot(self.integral_dual) % (self.ring.modulus * self.p)
        if any(int(v) % self.p for v in scaled.flat):
            raise InvalidLattice("vector does not lie in the lattice")
        return self.ring.array(scaled // self.p)

    def _a_action(self, eigen_is_p: Sequence[bool]) -> RMatrix:
        flags = np.array([1 if f else 0 for f in eigen_is_p], dtype=np.int64)
        return self.ring.matmul(self.ring.array(self.basis * flags), self.dual_basis)

    def _full(self, a_part: RMatrix, free_block: RMatrix) -> RMatrix:
        r = self.free_rank
        if not r:
            return a_part
        free = kron(np.eye(r, dtype=np.int64), free_block)
        sizes = [self.D, 4 * r]
        return block_matrix({(0, 0): a_part, (1, 1): free}, sizes, sizes, self.ring)

    @cached_property
    def x_action(self) -> RMatrix:
        """Matrix of x on the whole lattice; row i is the image of basis element i."""
        x, _ = regular_action(self.ring)
        return self._full(self._a_action([t.x_is_p for t in self.types]), x)

    @cached_property
    def y_action(self) -> RMatrix:
        _, y = regular_action(self.ring)
        return self._full(self._a_action([t.y_is_p for t in self.types]), y)

    @cached_property
    def z_action(self) -> RMatrix:
        """Matrix of z on the A-lattice part."""
        return self._a_action([t is CharacterType.PP for t in self.types])


def zero_lattice(ring: TruncatedDVR) -> TypedLattice:
    return TypedLattice(ring, (), np.zeros((0, 0), dtype=np.int64), label="0")


def realize(rep: QuiverRep, ring: TruncatedDVR, label: str = "") -> TypedLattice:
    """
    The lattice `Ψ(V)`: the preimage in `⊕ R_αβ^d_αβ` of the image of `f_+`
    under reduction modulo p.

    :raises InvalidRepresentation: The representation is not admissible.
    """
    report = validate(rep)
    if not report.ok:
        raise InvalidRepresentation(list(report.violations))
    types = tuple(t for t in TYPES for _ in range(rep.dim(t)))
    reduction = row_basis(rep.f_plus.T, rep.p)
    return TypedLattice(ring, types, reduction, label=label)


def rep_of(lattice: TypedLattice) -> QuiverRep:
    """
    The representation `Φ(M)` of the A-lattice part, with `f_αβ` the natural
    maps `M/𝔪M → M♯_αβ/pM♯_αβ`.

    :raises NotNormalized: Some arm map is not surjective.
    """
    columns = type_columns(lattice.types)
    maps = {t: lattice.reduction[:, columns[t]].T for t in TYPES}
    rep = QuiverRep(lattice.p, lattice.d_bullet, maps)
    for t in TYPES:
        if rank_mod(rep.maps[t], rep.p) < rep.dim(t):
            raise NotNormalized(f"arm {t.value} is not surjective")
    return rep


def vector_rank(lattice: TypedLattice) -> VectorRank:
    return lattice.vector_rank


def _sum_layout(
    first: Sequence[CharacterType], second: Sequence[CharacterType]
) -> tuple[list[CharacterType], dict[int, int], dict[int, int]]:
    """Grouped types of a direct sum and the position of each summand coordinate."""
    columns1, columns2 = type_columns(first), type_columns(second)
    types: list[CharacterType] = []
    position1, position2 = {}, {}
    for t in TYPES:
        for j in columns1[t]:
            position1[j] = len(types)
            types.append(t)
        for j in columns2[t]:
            position2[j] = len(types)
            types.append(t)
    return types, position1, position2


def direct_sum(first: TypedLattice, second: TypedLattice) -> TypedLattice:
    """Direct sum, with ambient coordinates regrouped by type."""
    types, position1, position2 = _sum_layout(first.types, second.types)
    reduction = np.zeros((first.d_bullet + second.d_bullet, len(types)), dtype=np.int64)
    for j, target in position1.items():
        reduction[: first.d_bullet, target] = first.reduction[:, j]
    for j, target in position2.items():
        reduction[first.d_bullet :, target] = second.reduction[:, j]
    label = " + ".join(part for part in (first.label, second.label) if part)
    return TypedLattice(
        first.ring,
        tuple(types),
        reduction,
        free_rank=first.free_rank + second.free_rank,
        label=label,
    )


def normalize(
    types: Sequence[CharacterType],
    rows: Any,
    ring: TruncatedDVR,
    *,
    free_rank: int = 0,
    label: str = "",
) -> TypedLattice:
    """
    Put the A-lattice spanned by `rows` in normalized position.

    Each type projection is reduced to a basis with the Smith form, which
    gives the hull `A♯M`; the lattice must then contain `p` times its hull.

    :param types: Type of each ambient coordinate of `rows`.
    :param rows: Generators of the lattice, not necessarily independent.
    :raises InvalidLattice: The rows do not span an A-lattice of full rank in its hull.
    """
    rows = ring.array(rows)
    p = ring.p
    blocks = []
    new_types: list[CharacterType] = []
    for t in TYPES:
        index = [i for i, s in enumerate(types) if s == t]
        if not index:
            continue
        projection = rows[:, index]
        form = smith(projection, ring)
        r = form.rank
        if not r:
            continue
        scaled = ring.matmul(projection, form.right)[:, :r]
        scale = np.array([p**e for e in form.pivots[:r]], dtype=ring.dtype)
        blocks.append(scaled // scale)
        new_types.extend([t] * r)
    if not new_types:
        return TypedLattice(ring, (), np.zeros((0, 0), dtype=np.int64), free_rank, label)
    coordinates = ring.array(np.hstack(blocks))
    size = len(new_types)
    form = smith(coordinates, ring)
    if form.rank != size or any(e > 1 for e in form.pivots[:size]):
        raise InvalidLattice("rows do not contain p times their hull")
    reduction = row_basis(ring.residue(coordinates), p)
    logger.debug("normalized %s into %d coordinates, d_bullet %d", label, size, reduction.shape[0])
    return TypedLattice(ring, tuple(new_types), reduction, free_rank, label)


def dual(lattice: TypedLattice) -> TypedLattice:
    """
    The dual lattice `Hom_R(M, R)` with the transposed action, rescaled by p.

    `p·M*` is the preimage of the orthogonal complement of the reduction.
    """
    ring = lattice.ring
    if lattice.D == 0:
        return lattice.with_label(f"dual({lattice.label})")
    orthogonal = nullspace(lattice.reduction, lattice.p)
    generators = np.vstack(
        [ring.array(orthogonal), ring.array(lattice.p * np.eye(lattice.D, dtype=np.int64))]
    )
    return normalize(
        lattice.types,
        generators,
        ring,
        free_rank=lattice.free_rank,
        label=f"dual({lattice.label})",
    )


def projective_cover(lattice: TypedLattice) -> tuple[list[int], RMatrix]:
    """
    Minimal projective cover `K^g → M` of the A-lattice part.

    Generators are the basis elements not in the radical `𝔯M = xM + yM + pM`,
    and the cover matrix has rows `(m, xm, ym, xym)` for each generator `m`,
    in lattice coordinates.
    """
    ring = lattice.ring
    D = lattice.D
    x = lattice.x_action[:D, :D]
    y = lattice.y_action[:D, :D]
    radical = np.vstack([ring.residue(x), ring.residue(y)])
    _, pivots = rref(radical, ring.p)
    generators = [j for j in range(D) if j not in pivots]
    xy = ring.matmul(x, y)
    identity = ring.identity(D)
    rows = [np.vstack([identity[j], x[j], y[j], xy[j]]) for j in generators]
    cover = ring.array(np.vstack(rows)) if rows else ring.zeros(0, D)
    return generators, cover


def generator_count(lattice: TypedLattice) -> int:
    """Minimal number of K-generators, `dim M/𝔯M`."""
    return len(projective_cover(lattice)[0]) + lattice.free_rank


def syzygy(lattice: TypedLattice) -> TypedLattice:
    """
    The syzygy `ΩM`: kernel of the minimal projective cover `K^g → M`,
    with `g = dim M/𝔯M`. The free part is dropped.
    """
    ring = lattice.ring
    D = lattice.D
    label = f"Ω({lattice.label})"
    if D == 0:
        return zero_lattice(ring).with_label(label)
    generators, cover = projective_cover(lattice)
    form = smith(cover, ring)
    if form.rank != D or any(e != 0 for e in form.pivots[:D]):
        raise InvalidLattice("projective cover is not surjective")
    kernel = form.left[D:]
    g = len(generators)
    embedded = ring.matmul(kernel, kron(np.eye(g, dtype=np.int64), regular_embedding(ring)))
    logger.debug("syzygy of %s: %d generators, kernel rank %d", lattice.label, g, kernel.shape[0])
    return normalize(TYPES * g, embedded, ring, label=label)


def tau(lattice: TypedLattice) -> TypedLattice:
    """The translate `τM = ΩM`."""
    return syzygy(lattice).with_label(f"τ({lattice.label})")


def tau_inverse(lattice: TypedLattice) -> TypedLattice:
    """The inverse translate, `dual ∘ Ω ∘ dual`."""
    return dual(syzygy(dual(lattice))).with_label(f"τ⁻¹({lattice.label})")


def eigen_part(
    lattice: TypedLattice, alpha: Union[int, CharacterType], beta: int = 0
) -> RMatrix:
    """
    Basis, in lattice coordinates, of `M_αβ = {m : xm = αm, ym = βm}`.

    `alpha` may be a `CharacterType`, in which case `beta` is ignored.
    """
    ring = lattice.ring
    if isinstance(alpha, CharacterType):
        alpha, beta = alpha.alpha(ring.p), alpha.beta(ring.p)
    n = lattice.rank
    identity = ring.identity(n)
    stacked = np.hstack(
        [
            ring.array(lattice.x_action - alpha * identity),
            ring.array(lattice.y_action - beta * identity),
        ]
    )
    return kernel_basis(stacked, ring)


def is_lattice_indecomposable(lattice: TypedLattice, config: EngineConfig = EngineConfig()) -> bool:
    if lattice.free_rank:
        return lattice.free_rank == 1 and lattice.D == 0
    return is_indecomposable(rep_of(lattice), config)


def is_regular(lattice: TypedLattice, config: EngineConfig = EngineConfig()) -> bool:
    """
    Whether every indecomposable summand lies in a tube.

    An indecomposable A-lattice lies in a tube exactly when its vector rank
    has defect zero, `2d_• = Σ d_αβ`.
    """
    if lattice.free_rank:
        return False
    if not lattice.vector_rank.is_regular:
        return False
    return all(s.rank.is_regular for s in decompose(rep_of(lattice), config))


def lattice_map(morphism: RepMorphism, source: TypedLattice, target: TypedLattice) -> RMatrix:
    """
    Matrix, in lattice coordinates, of the map `Ψ(φ)` induced by a morphism of
    representations on the realized lattices.

    The ambient map is block diagonal over types, each block a lift of `φ_αβ`.
    """
    ring = source.ring
    columns_s, columns_t = type_columns(source.types), type_columns(target.types)
    ambient = ring.zeros(source.D, target.D)
    for t in TYPES:
        if columns_s[t] and columns_t[t]:
            ambient[np.ix_(columns_s[t], columns_t[t])] = ring.array(morphism.arms[t].T)
    return target.coordinates(ring.matmul(source.basis, ambient))


@dataclass(frozen=True, eq=False)
class ShortExactSeq:
    """A sequence `0 → sub → middle → quotient → 0` with maps in lattice coordinates."""

    sub: TypedLattice
    middle: TypedLattice
    quotient: TypedLattice
    inclusion: RMatrix
    projection: RMatrix

    def violations(self) -> list[str]:
        """Reasons the sequence fails to be a short exact sequence of K-lattices."""
        ring = self.middle.ring
        found = []
        if self.inclusion.shape != (self.sub.rank, self.middle.rank):
            return [f"inclusion has shape {self.inclusion.shape}"]
        if self.projection.shape != (self.middle.rank, self.quotient.rank):
            return [f"projection has shape {self.projection.shape}"]
        if self.sub.rank + self.quotient.rank != self.middle.rank:
            found.append("ranks do not add")
        if not ring.is_zero(ring.matmul(self.inclusion, self.projection)):
            found.append("composite is not zero")
        for name, source, matrix, target in (
            ("inclusion", self.sub, self.inclusion, self.middle),
            ("projection", self.middle, self.projection, self.quotient),
        ):
            for action in ("x_action", "y_action"):
                left = ring.matmul(getattr(source, action), matrix)
                right = ring.matmul(matrix, getattr(target, action))
                if not ring.is_zero(left - right):
                    found.append(f"{name} does not commute with {action[0]}")
        form = smith(self.inclusion, ring)
        if form.rank != self.sub.rank or any(form.pivots[: self.sub.rank]):
            found.append("inclusion is not a split injection of R-modules")
        form = smith(self.projection, ring)
        if form.rank != self.quotient.rank or any(form.pivots[: self.quotient.rank]):
            found.append("projection is not surjective")
        return found

    @property
    def is_exact(self) -> bool:
        return not self.violations()


def split_sequence(first: TypedLattice, second: TypedLattice) -> ShortExactSeq:
    """The split sequence `0 → first → first ⊕ second → second → 0` of A-lattices."""
    ring = first.ring
    middle = direct_sum(first, second)
    _, position1, position2 = _sum_layout(first.types, second.types)
    into = ring.zeros(first.D, middle.D)
    for j, target in position1.items():
        into[j, target] = 1
    out = ring.zeros(middle.D, second.D)
    for j, source in position2.items():
        out[source, j] = 1
    inclusion = middle.coordinates(ring.matmul(first.basis, into))
    projection = second.coordinates(ring.matmul(middle.basis, out))
    return ShortExactSeq(first, middle, second, inclusion, projection)
