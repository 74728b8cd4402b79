"""
Explicit cocycles for regular lattices, and exactness checks along short
exact sequences of lattices.

For a regular lattice in a tube and a degree `n`, the slot type `t(n)` is `pp`
in even degrees and `0p` in odd ones (`p0` in the tube at ∞). In positive
degrees an element of the eigen slot `M(n) = M_t(n)` on a single monomial is a
cocycle, and `M(n)/pM(n) → Ĥ^n(M)` is an isomorphism.

In negative degrees a single dual monomial does not carry the classes. There
the slot is the hull component `M♯(n) = M♯_t(n)`: a cocycle is read through the
type-`t(n)` coordinates of its value on `û^{|n|-1}` (`v̂^{|n|-1}` at ∞), which
vanish modulo p on coboundaries, and `ξ̂_a` is a cocycle reading `a`. The map
`M♯(n)/pM♯(n) → Ĥ^n(M)` is then an isomorphism.
"""

import itertools
import logging
from collections.abc import Iterator
from dataclasses import dataclass
from typing import Optional

import numpy as np

from kleinring.catalog import ExceptionalPoint, TubeId
from kleinring.cohomology import (
    CheckResult,
    CheckStatus,
    compare,
    full_coboundary,
    slot_count,
    tate,
)
from kleinring.config import EngineConfig
from kleinring.dvr import (
    KMatrix,
    RMatrix,
    SmithForm,
    TruncatedDVR,
    kernel_basis,
    kron,
    nullspace,
    rank_mod,
    smith,
    solve,
    solve_mod,
)
from kleinring.errors import ElementNotInSlot, NotExact, NotRegular
from kleinring.lattice import (
    ShortExactSeq,
    TypedLattice,
    eigen_part,
    generator_count,
    projective_cover,
    syzygy,
    tau_inverse,
    type_columns,
)
from kleinring.ring import CharacterType

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Cochain:
    """A cochain of degree `degree`: one lattice element (row of `values`) per monomial."""

    lattice: TypedLattice
    degree: int
    values: RMatrix

    @property
    def vector(self) -> RMatrix:
        return self.values.reshape(-1)

    @classmethod
    def from_vector(cls, lattice: TypedLattice, degree: int, vector: RMatrix) -> "Cochain":
        return cls(lattice, degree, lattice.ring.array(vector).reshape(slot_count(degree), lattice.rank))


def slot_type(tube: TubeId, n: int) -> CharacterType:
    if n % 2 == 0:
        return CharacterType.PP
    if tube.point is ExceptionalPoint.INFINITY:
        return CharacterType.P0
    return CharacterType.ZP


def _require_regular(lattice: TypedLattice) -> None:
    if lattice.free_rank or not lattice.vector_rank.is_regular:
        raise NotRegular(f"{lattice.label or 'lattice'} has vector rank {lattice.vector_rank}")


def m_slot(lattice: TypedLattice, tube: TubeId, n: int) -> RMatrix:
    """
    Basis, in lattice coordinates, of the eigen slot `M(n)`.

    :raises NotRegular: The lattice is not regular.
    """
    _require_regular(lattice)
    return eigen_part(lattice, slot_type(tube, n))


def _slot_index(tube: TubeId, n: int) -> int:
    if tube.point is ExceptionalPoint.INFINITY:
        return 0
    return n if n > 0 else -n - 1


def _place(lattice: TypedLattice, tube: TubeId, a: RMatrix, n: int) -> Cochain:
    values = lattice.ring.zeros(slot_count(n), lattice.rank)
    values[_slot_index(tube, n)] = lattice.ring.array(a)
    return Cochain(lattice, n, values)


def _check_slot(lattice: TypedLattice, tube: TubeId, a: RMatrix, n: int) -> None:
    if solve(m_slot(lattice, tube, n), a, lattice.ring) is None:
        raise ElementNotInSlot(f"element is not in M_{slot_type(tube, n).value}")


def xi(lattice: TypedLattice, tube: TubeId, a: RMatrix, n: int) -> Cochain:
    """
    The cocycle `ξ_a` of degree `n > 0`: `a` on `u^n`, or on `v^n` in the tube at ∞.

    :raises ElementNotInSlot: `a` is not in `M(n)`.
    """
    if n <= 0:
        raise ValueError("ξ is defined in positive degrees")
    _check_slot(lattice, tube, a, n)
    return _place(lattice, tube, a, n)


def hull_slot(lattice: TypedLattice, tube: TubeId, n: int) -> RMatrix:
    """
    Basis of the hull component `M♯(n)`, as unit rows in the ambient.

    :raises NotRegular: The lattice is not regular.
    """
    _require_regular(lattice)
    columns = type_columns(lattice.types)[slot_type(tube, n)]
    return lattice.ring.array(np.eye(lattice.D, dtype=np.int64)[columns])


def reading(cochains: RMatrix, lattice: TypedLattice, tube: TubeId, n: int) -> KMatrix:
    """
    Type-`t(n)` coordinates modulo p of the value of each cochain (rows of
    `cochains`) on the distinguished dual monomial.
    """
    ring = lattice.ring
    rows = ring.array(cochains).reshape(-1, slot_count(n), lattice.rank)
    values = rows[:, _slot_index(tube, n), : lattice.D]
    ambient = ring.matmul(values, lattice.basis)
    return ring.residue(ambient[:, type_columns(lattice.types)[slot_type(tube, n)]])


def hat_xi(lattice: TypedLattice, tube: TubeId, a: RMatrix, n: int) -> Cochain:
    """
    The cocycle `ξ̂_a` of degree `n < 0` on the complete resolution.

    `a` is an ambient vector in `M♯(n)`. The cocycle's value on `û^{|n|-1}`, or
    on `v̂^{|n|-1}` in the tube at ∞, has type-`t(n)` coordinates `≡ a` modulo p.

    :raises ElementNotInSlot: `a` is not in `M♯(n)`, or no cocycle reads it.
    """
    if n >= 0:
        raise ValueError("ξ̂ is defined in negative degrees")
    _require_regular(lattice)
    ring = lattice.ring
    target = ring.array(a).reshape(-1)
    columns = type_columns(lattice.types)[slot_type(tube, n)]
    outside = np.ones(lattice.D, dtype=bool)
    outside[columns] = False
    if target.shape[0] != lattice.D or not ring.is_zero(target[outside]):
        raise ElementNotInSlot(f"element is not in M♯_{slot_type(tube, n).value}")
    cycles = kernel_basis(full_coboundary(lattice, n), ring)
    combination = solve_mod(reading(cycles, lattice, tube, n), target[columns], ring.p)
    if combination is None:
        raise ElementNotInSlot(f"no cocycle of degree {n} reads this element")
    vector = ring.matmul(ring.array(combination).reshape(1, -1), cycles)[0]
    return Cochain.from_vector(lattice, n, vector)


def is_cocycle(cochain: Cochain) -> bool:
    ring = cochain.lattice.ring
    return ring.is_zero(
        ring.matmul(cochain.vector.reshape(1, -1), full_coboundary(cochain.lattice, cochain.degree))
    )


def coboundary_witness(cochain: Cochain) -> Optional[Cochain]:
    """A cochain `η` of degree `n - 1` with `δη = ξ`, or `None` when `ξ` is not a coboundary."""
    lattice, n = cochain.lattice, cochain.degree
    solution = solve(full_coboundary(lattice, n - 1), cochain.vector, lattice.ring)
    if solution is None:
        return None
    return Cochain.from_vector(lattice, n - 1, solution)


def _coefficients(s: int, p: int, config: EngineConfig) -> tuple[bool, Iterator[np.ndarray]]:
    exhaustive = s <= 3 and p <= 5

    def generate() -> Iterator[np.ndarray]:
        if exhaustive:
            for combination in itertools.product(range(p), repeat=s):
                if any(combination):
                    yield np.array(combination, dtype=np.int64)
            return
        rng = np.random.default_rng(config.seed)
        for _ in range(config.random_trials):
            draw = rng.integers(0, p, size=s)
            if draw.any():
                yield draw

    return exhaustive, generate()


def _representatives(lattice: TypedLattice, tube: TubeId, n: int) -> RMatrix:
    """Cochain vectors of `ξ_a` (or `ξ̂_a`) over a basis of the slot, one per row."""
    ring = lattice.ring
    basis = m_slot(lattice, tube, n) if n > 0 else hull_slot(lattice, tube, n)
    rows = [
        (_place(lattice, tube, a, n) if n > 0 else hat_xi(lattice, tube, a, n)).vector for a in basis
    ]
    if not rows:
        return ring.zeros(0, slot_count(n) * lattice.rank)
    return ring.array(np.vstack(rows))


def verify_class_iso(
    lattice: TypedLattice, tube: TubeId, n: int, config: EngineConfig = EngineConfig()
) -> CheckResult:
    """
    Check that `a ↦ [ξ_a]` induces `M(n)/pM(n) ≅ Ĥ^n(M)`, or that `a ↦ [ξ̂_a]`
    induces `M♯(n)/pM♯(n) ≅ Ĥ^n(M)` in negative degrees.

    Every basis element must give a cocycle whose p-multiple is a coboundary,
    the dimensions must agree, and no nonzero combination of the basis may be
    a coboundary. Combinations are enumerated when there are few, else sampled.
    """
    if n == 0:
        raise ValueError("cocycle classes are defined away from degree 0")
    ring = lattice.ring
    name = f"cocycle classes {lattice.label} n={n}"
    try:
        representatives = _representatives(lattice, tube, n)
    except ElementNotInSlot as e:
        return CheckResult(name, CheckStatus.FAIL, "cocycle", str(e))
    s = representatives.shape[0]
    group = tate(lattice, n)
    if not group.is_elementary or group.length != s:
        return CheckResult(name, CheckStatus.FAIL, f"k^{s}", str(group), "dimension mismatch")

    incoming = full_coboundary(lattice, n - 1)
    form = smith(incoming, ring)

    def is_coboundary(vector: RMatrix) -> bool:
        return solve(incoming, vector, ring, form) is not None

    for vector in representatives:
        if not is_cocycle(Cochain.from_vector(lattice, n, vector)):
            return CheckResult(name, CheckStatus.FAIL, "cocycle", "not a cocycle")
        if not is_coboundary(ring.array(ring.p * vector)):
            return CheckResult(name, CheckStatus.FAIL, "p·ξ a coboundary", "not a coboundary")

    exhaustive, draws = _coefficients(s, ring.p, config)
    tried = 0
    for coefficients in draws:
        tried += 1
        if is_coboundary(ring.matmul(coefficients.reshape(1, s), representatives)[0]):
            return CheckResult(
                name, CheckStatus.FAIL, "nonzero class", f"coboundary for {coefficients.tolist()}"
            )
    note = "all combinations" if exhaustive else f"{tried} sampled combinations"
    logger.debug("%s: %s", name, note)
    return CheckResult(name, CheckStatus.PASS, f"k^{s}", str(group), note)


# Exactness along short exact sequences.


def _require_exact(seq: ShortExactSeq) -> None:
    violations = seq.violations()
    if violations:
        raise NotExact("; ".join(violations))


@dataclass(frozen=True)
class _ElementaryModel:
    """`Ĥ^n = Z/B` written as `k^z / rowspan(C̄)` over a basis of the cocycles `Z`."""

    cycles: RMatrix
    form: SmithForm
    quotient: KMatrix
    """Columns span the dual of the group: `v ↦ v·quotient` kills exactly `rowspan(C̄)`."""

    @property
    def dimension(self) -> int:
        return self.quotient.shape[1]


def _elementary_model(lattice: TypedLattice, n: int) -> Optional[_ElementaryModel]:
    ring = lattice.ring
    cycles = kernel_basis(full_coboundary(lattice, n), ring)
    form = smith(cycles, ring)
    incoming = full_coboundary(lattice, n - 1)
    z = cycles.shape[0]
    coordinates = ring.zeros(incoming.shape[0], z)
    for index, row in enumerate(incoming):
        solution = solve(cycles, row, ring, form)
        if solution is None:
            return None
        coordinates[index] = solution
    if z:
        relations = smith(coordinates, ring)
        if relations.rank != z or any(e > 1 for e in relations.pivots[:z]):
            return None
    residues = ring.residue(coordinates)
    return _ElementaryModel(cycles, form, nullspace(residues, ring.p).T)


def _induced(
    source: _ElementaryModel,
    target: _ElementaryModel,
    matrix: RMatrix,
    n: int,
    ring: TruncatedDVR,
) -> KMatrix:
    p = ring.p
    cochain_map = ring.array(kron(np.eye(slot_count(n), dtype=np.int64), matrix))
    images = ring.matmul(source.cycles, cochain_map)
    lifted = np.zeros((images.shape[0], target.cycles.shape[0]), dtype=np.int64)
    for index, row in enumerate(images):
        solution = solve(target.cycles, row, ring, target.form)
        if solution is None:
            raise NotExact("map does not carry cocycles to cocycles")
        lifted[index] = ring.residue(solution)
    section = np.zeros((source.dimension, source.cycles.shape[0]), dtype=np.int64)
    for j in range(source.dimension):
        unit = np.zeros(source.dimension, dtype=np.int64)
        unit[j] = 1
        x = solve_mod(source.quotient, unit, p)
        assert x is not None
        section[j] = x
    return (section @ lifted % p) @ target.quotient % p


def les_check(seq: ShortExactSeq, n: int) -> CheckResult:
    """
    Check that `0 → Ĥ^n(sub) → Ĥ^n(middle) → Ĥ^n(quotient) → 0` is exact for a
    sequence of regular lattices whose Tate groups are elementary.

    :raises NotExact: The sequence is not short exact.
    :raises NotRegular: A term is not regular.
    """
    _require_exact(seq)
    for lattice in (seq.sub, seq.middle, seq.quotient):
        _require_regular(lattice)
    name = f"long exact sequence {seq.middle.label} n={n}"
    models = [_elementary_model(lattice, n) for lattice in (seq.sub, seq.middle, seq.quotient)]
    if any(model is None for model in models):
        return CheckResult(name, CheckStatus.FAIL, "elementary groups", "non-elementary group")
    sub, middle, quotient = models  # type: ignore[misc]
    p = seq.middle.p
    into = _induced(sub, middle, seq.inclusion, n, seq.middle.ring)
    onto = _induced(middle, quotient, seq.projection, n, seq.middle.ring)
    problems = []
    if middle.dimension != sub.dimension + quotient.dimension:
        problems.append("dimensions do not add")
    if rank_mod(into, p) != sub.dimension:
        problems.append("induced inclusion is not injective")
    if rank_mod(onto, p) != quotient.dimension:
        problems.append("induced projection is not surjective")
    if into.size and onto.size and np.any(into @ onto % p):
        problems.append("composite is not zero")
    dims = f"{sub.dimension} + {quotient.dimension} = {middle.dimension}"
    if problems:
        return CheckResult(name, CheckStatus.FAIL, "short exact", "; ".join(problems), dims)
    return CheckResult(name, CheckStatus.PASS, "short exact", "short exact", dims)


def omega_exact_check(seq: ShortExactSeq) -> list[CheckResult]:
    """
    Check that the syzygy functor keeps the sequence exact: the horseshoe cover
    of the middle term is minimal, it maps onto the syzygy of the quotient, and
    vector ranks of syzygies and cosyzygies add.

    :raises NotExact: The sequence is not short exact.
    :raises NotRegular: A term is not regular.
    """
    _require_exact(seq)
    for lattice in (seq.sub, seq.middle, seq.quotient):
        _require_regular(lattice)
    sub, middle, quotient = seq.sub, seq.middle, seq.quotient
    ring = middle.ring
    label = middle.label
    results = []

    generators_sub, _ = projective_cover(sub)
    generators_quotient, cover_quotient = projective_cover(quotient)
    results.append(
        compare(
            f"generators add {label}",
            generator_count(sub) + generator_count(quotient),
            generator_count(middle),
        )
    )

    lifts = []
    form = smith(seq.projection, ring)
    identity = ring.identity(quotient.rank)
    for j in generators_quotient:
        lift = solve(seq.projection, identity[j], ring, form)
        if lift is None:
            raise NotExact("projection is not surjective")
        lifts.append(lift)
    vectors = [seq.inclusion[j] for j in generators_sub] + lifts
    x, y = middle.x_action, middle.y_action
    rows = []
    for v in vectors:
        v = v.reshape(1, -1)
        vx = ring.matmul(v, x)
        rows.extend([v, vx, ring.matmul(v, y), ring.matmul(vx, y)])
    cover = ring.array(np.vstack(rows)) if rows else ring.zeros(0, middle.rank)
    horseshoe = smith(cover, ring)
    D = middle.rank
    surjects = horseshoe.rank == D and not any(horseshoe.pivots[:D])
    onto = False
    if surjects:
        kernel = horseshoe.left[D:]
        projected = kernel[:, 4 * len(generators_sub) :]
        projected_form = smith(projected, ring)
        onto = all(
            solve(projected, row, ring, projected_form) is not None
            for row in kernel_basis(cover_quotient, ring)
        )
    results.append(
        CheckResult(
            f"horseshoe {label}",
            CheckStatus.PASS if surjects and onto else CheckStatus.FAIL,
            "cover onto middle, syzygy onto syzygy",
            f"cover onto: {surjects}, syzygy onto: {onto}",
        )
    )
    results.append(
        compare(
            f"syzygy ranks add {label}",
            syzygy(sub).vector_rank + syzygy(quotient).vector_rank,
            syzygy(middle).vector_rank,
        )
    )
    results.append(
        compare(
            f"cosyzygy ranks add {label}",
            tau_inverse(sub).vector_rank + tau_inverse(quotient).vector_rank,
            tau_inverse(middle).vector_rank,
        )
    )
    return results
