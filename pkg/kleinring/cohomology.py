"""
Homology, cohomology and Tate cohomology of K-lattices.

The projective resolution of the trivial module R is the Koszul-type complex
`P_n = ⊕_{i+j=n} K·u^i v^j` with `d(u^i v^j) = C_i(x) u^{i-1} v^j + (-1)^i C_j(y) u^i v^{j-1}`,
where `C_i(z) = z` for even `i` and `z - p` for odd `i`. Gluing it to its dual
gives the complete resolution used for Tate cohomology. A cochain in degree
`n` is a tuple of `slot_count(n)` elements of the lattice, one per monomial.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Any, Optional

import numpy as np

from kleinring.catalog import (
    Description,
    ExceptionalPoint,
    FamilyBase,
    FamilyId,
    FreeId,
    SumId,
    TubeId,
)
from kleinring.dvr import ModuleInvariant, RMatrix, block_matrix, subquotient_invariant
from kleinring.errors import UnknownFamily
from kleinring.lattice import TypedLattice, dual, tau, tau_inverse
from kleinring.quiver import VectorRank

logger = logging.getLogger(__name__)

FINGERPRINT_DEGREES = range(-4, 5)


def _c(action: RMatrix, i: int, lattice: TypedLattice) -> RMatrix:
    if i % 2 == 0:
        return action
    ring = lattice.ring
    return ring.array(action - ring.p * ring.identity(lattice.rank))


def _neg(matrix: RMatrix, i: int, lattice: TypedLattice) -> RMatrix:
    return lattice.ring.array(-matrix) if i % 2 else matrix


def slot_count(n: int) -> int:
    """Number of monomials carried by a cochain of degree `n` of the complete resolution."""
    return n + 1 if n >= 0 else -n


def hom_coboundary(lattice: TypedLattice, n: int) -> RMatrix:
    """
    The coboundary `δ_n: Hom(P_n, M) → Hom(P_{n+1}, M)` for `n ≥ 0`.

    Slot `i` of a cochain is its value on `u^i v^{n-i}`.
    """
    if n < 0:
        raise ValueError("hom complex starts in degree 0")
    x, y = lattice.x_action, lattice.y_action
    blocks = {}
    for i in range(1, n + 2):
        blocks[(i - 1, i)] = _c(x, i, lattice)
    for i in range(n + 1):
        blocks[(i, i)] = _neg(_c(y, n + 1 - i, lattice), i, lattice)
    m = lattice.rank
    return block_matrix(blocks, [m] * (n + 1), [m] * (n + 2), lattice.ring)


def tensor_boundary(lattice: TypedLattice, n: int) -> RMatrix:
    """The boundary `∂_n: P_n ⊗ M → P_{n-1} ⊗ M`; `∂_0` has no target."""
    if n < 0:
        raise ValueError("tensor complex starts in degree 0")
    m = lattice.rank
    if n == 0:
        return lattice.ring.zeros(m, 0)
    x, y = lattice.x_action, lattice.y_action
    blocks = {}
    for i in range(1, n + 1):
        blocks[(i, i - 1)] = _c(x, i, lattice)
    for i in range(n):
        blocks[(i, i)] = _neg(_c(y, n - i, lattice), i, lattice)
    return block_matrix(blocks, [m] * (n + 1), [m] * n, lattice.ring)


def full_coboundary(lattice: TypedLattice, n: int) -> RMatrix:
    """
    Coboundary `δ_n` of `Hom(P̂, M)` for the complete resolution `P̂`, any `n`.

    In degrees `n ≥ 0` this is `hom_coboundary`; `δ_{-1}` is multiplication by
    `xy`, the norm; below that the dual complex, whose slot `i` is the value on
    the dual monomial `û^i v̂^{|n|-1-i}`.
    """
    if n >= 0:
        return hom_coboundary(lattice, n)
    ring = lattice.ring
    x, y = lattice.x_action, lattice.y_action
    if n == -1:
        return ring.matmul(x, y)
    k = -n - 2
    blocks = {}
    for i in range(k + 1):
        blocks[(i + 1, i)] = _c(x, i + 1, lattice)
        blocks[(i, i)] = _neg(_c(y, k - i + 1, lattice), i, lattice)
    m = lattice.rank
    return block_matrix(blocks, [m] * (k + 2), [m] * (k + 1), ring)


@lru_cache(maxsize=4096)
def homology_H(lattice: TypedLattice, n: int) -> ModuleInvariant:
    """`H_n(K, M) = Tor_n(R, M)`."""
    if n < 0:
        return ModuleInvariant()
    return subquotient_invariant(
        tensor_boundary(lattice, n), tensor_boundary(lattice, n + 1), lattice.ring
    )


@lru_cache(maxsize=4096)
def cohomology_H(lattice: TypedLattice, n: int) -> ModuleInvariant:
    """`H^n(K, M) = Ext^n(R, M)`."""
    if n < 0:
        return ModuleInvariant()
    if n == 0:
        incoming = lattice.ring.zeros(0, lattice.rank)
    else:
        incoming = hom_coboundary(lattice, n - 1)
    return subquotient_invariant(hom_coboundary(lattice, n), incoming, lattice.ring)


@lru_cache(maxsize=4096)
def tate(lattice: TypedLattice, n: int) -> ModuleInvariant:
    """
    Tate cohomology `Ĥ^n(K, M)`.

    Degree 0 is `M^K / xyM` and degree -1 is `ker(xy) / ((x-p)M + (y-p)M)`;
    above, ordinary cohomology, and below, homology `H_{-n-1}`.

    **Example:**

    ```py
    config = EngineConfig(p=3)
    str(tate(make_A(config.dvr), 3))  # "k^4"
    ```
    """
    ring = lattice.ring
    x, y = lattice.x_action, lattice.y_action
    if n == 0:
        fixed = np.hstack([_c(x, 1, lattice), _c(y, 1, lattice)])
        return subquotient_invariant(fixed, ring.matmul(x, y), ring)
    if n == -1:
        coinvariants = np.vstack([_c(x, 1, lattice), _c(y, 1, lattice)])
        return subquotient_invariant(ring.matmul(x, y), coinvariants, ring)
    if n > 0:
        return cohomology_H(lattice, n)
    return homology_H(lattice, -n - 1)


def tate_via_full_resolution(lattice: TypedLattice, n: int) -> ModuleInvariant:
    """`Ĥ^n` computed directly from the complete resolution."""
    return subquotient_invariant(
        full_coboundary(lattice, n), full_coboundary(lattice, n - 1), lattice.ring
    )


def homology_bar(lattice: TypedLattice, n: int, variable: str = "x") -> ModuleInvariant:
    """
    Homology over the one-variable ring `R[z]/z(z-p)`, with `z` acting as
    `x` or `y`, from its periodic resolution.
    """
    if variable not in ("x", "y"):
        raise ValueError(f"unknown variable {variable!r}")
    if n < 0:
        return ModuleInvariant()
    action = lattice.x_action if variable == "x" else lattice.y_action

    def boundary(k: int) -> RMatrix:
        if k == 0:
            return lattice.ring.zeros(lattice.rank, 0)
        return _c(action, k, lattice)

    return subquotient_invariant(boundary(n), boundary(n + 1), lattice.ring)


# Closed forms.


def _k(dimension: int) -> ModuleInvariant:
    return ModuleInvariant.elementary(dimension)


def _family_tate(family: FamilyId, n: int) -> ModuleInvariant:
    k = family.k
    if family.base is FamilyBase.A:
        return _k(n - k + 1) if n >= k else _k(k - n)
    d = abs(n - k)
    if family.base is FamilyBase.R_PP:
        if d == 0:
            return ModuleInvariant(0, (2,))
        return _k(d // 2 + 1) if d % 2 == 0 else _k(d // 2)
    return _k((d + 1) // 2)


def _tube_tate(tube: TubeId, n: int) -> ModuleInvariant:
    m = tube.layer
    if not isinstance(tube.point, ExceptionalPoint):
        return _k(tube.degree * m)
    if m % 2 == 0:
        return _k(m // 2)
    assert tube.branch is not None
    sign = 1 if (n + tube.branch) % 2 == 0 else -1
    return _k((m - sign) // 2)


def expected(description: Description, n: int) -> ModuleInvariant:
    """
    Closed form of `Ĥ^n` for a named lattice.

    :raises UnknownFamily: No closed form covers the description.
    """
    if isinstance(description, FamilyId):
        return _family_tate(description, n)
    if isinstance(description, TubeId):
        return _tube_tate(description, n)
    if isinstance(description, FreeId):
        return ModuleInvariant()
    if isinstance(description, SumId):
        total = ModuleInvariant()
        for part in description.parts:
            total = total + expected(part, n)
        return total
    raise UnknownFamily(f"no closed form for {description!r}")


def expected_homology(base: FamilyBase, n: int) -> ModuleInvariant:
    """Closed form of `H_n(K, M)` for `A` and the rank-one lattices `R_αβ`."""
    if n < 0:
        return ModuleInvariant()
    if base is FamilyBase.A:
        return ModuleInvariant(1, (1,)) if n == 0 else _k(n + 1)
    if base is FamilyBase.R_PP:
        if n == 0:
            return ModuleInvariant(1)
        return _k((n + 3) // 2) if n % 2 else _k(n // 2)
    return _k((n + 2) // 2)


def expected_homology_bar(eigenvalue_is_p: bool, n: int) -> ModuleInvariant:
    """One-variable homology of a rank-one lattice on which the variable acts as `p` or `0`."""
    if n < 0:
        return ModuleInvariant()
    if eigenvalue_is_p:
        if n == 0:
            return ModuleInvariant(1)
        return _k(1) if n % 2 else ModuleInvariant()
    return ModuleInvariant() if n % 2 else _k(1)


@dataclass(frozen=True)
class Fingerprint:
    """Vector rank and Tate groups in a fixed degree window; an isomorphism invariant."""

    vector_rank: VectorRank
    groups: tuple[ModuleInvariant, ...]


def fingerprint(lattice: TypedLattice) -> Fingerprint:
    return Fingerprint(
        lattice.vector_rank, tuple(tate(lattice, n) for n in FINGERPRINT_DEGREES)
    )


# Checks.


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    DISCREPANCY = "discrepancy"


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one verification, as reported by the CLI."""

    name: str
    status: CheckStatus
    expected: Optional[str] = None
    computed: Optional[str] = None
    note: str = ""

    @property
    def failed(self) -> bool:
        return self.status is CheckStatus.FAIL

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "status": self.status.value,
            "expected": self.expected,
            "computed": self.computed,
            "note": self.note,
        }


def compare(name: str, expected_value: Any, computed_value: Any, note: str = "") -> CheckResult:
    status = CheckStatus.PASS if expected_value == computed_value else CheckStatus.FAIL
    return CheckResult(name, status, str(expected_value), str(computed_value), note)


@lru_cache(maxsize=256)
def _tau(lattice: TypedLattice) -> TypedLattice:
    return tau(lattice)


@lru_cache(maxsize=256)
def _tau_inverse(lattice: TypedLattice) -> TypedLattice:
    return tau_inverse(lattice)


@lru_cache(maxsize=256)
def _dual(lattice: TypedLattice) -> TypedLattice:
    return dual(lattice)


def check_shift(lattice: TypedLattice, n: int) -> CheckResult:
    """`Ĥ^n(M)`, `Ĥ^{n+1}(τM)` and `Ĥ^{n-1}(τ⁻¹M)` agree."""
    here = tate(lattice, n)
    up = tate(_tau(lattice), n + 1)
    down = tate(_tau_inverse(lattice), n - 1)
    name = f"shift {lattice.label} n={n}"
    if here == up == down:
        return CheckResult(name, CheckStatus.PASS, str(here), str(here))
    return CheckResult(
        name, CheckStatus.FAIL, str(here), f"τ: {up}, τ⁻¹: {down}"
    )


def check_duality(lattice: TypedLattice, n: int) -> CheckResult:
    """`Ĥ^n(M*) ≅ Ĥ^{-n}(M)`."""
    return compare(
        f"duality {lattice.label} n={n}", tate(lattice, -n), tate(_dual(lattice), n)
    )


def check_kill(lattice: TypedLattice, n: int) -> CheckResult:
    """
    `p²` kills every Tate group of a lattice. `Ĥ^n(M) ≅ Ĥ^0(τ^{-n}M)`, and
    `p` already kills it when `xy` acts as zero on `τ^{-n}M`.
    """
    group = tate(lattice, n)
    shifted = lattice
    for _ in range(abs(n)):
        shifted = _tau_inverse(shifted) if n > 0 else _tau(shifted)
    xy_kills = shifted.free_rank == 0 and lattice.ring.is_zero(shifted.z_action)
    bound = 1 if xy_kills else 2
    ok = group.free_rank == 0 and all(e <= bound for e in group.torsion)
    return CheckResult(
        f"annihilation {lattice.label} n={n}",
        CheckStatus.PASS if ok else CheckStatus.FAIL,
        f"exponents ≤ {bound}",
        str(group),
    )


def check_resolutions(lattice: TypedLattice, n: int) -> CheckResult:
    """The dimension-shifting definition of `Ĥ^n` agrees with the complete resolution."""
    return compare(
        f"complete resolution {lattice.label} n={n}",
        tate(lattice, n),
        tate_via_full_resolution(lattice, n),
    )


def check_differentials(lattice: TypedLattice, n: int) -> CheckResult:
    """Consecutive differentials of all three complexes compose to zero at degree `n`."""
    ring = lattice.ring
    failures = []
    if not ring.is_zero(ring.matmul(full_coboundary(lattice, n - 1), full_coboundary(lattice, n))):
        failures.append("complete")
    if n >= 1:
        if not ring.is_zero(ring.matmul(hom_coboundary(lattice, n - 1), hom_coboundary(lattice, n))):
            failures.append("hom")
        if not ring.is_zero(ring.matmul(tensor_boundary(lattice, n + 1), tensor_boundary(lattice, n))):
            failures.append("tensor")
    return CheckResult(
        f"differentials {lattice.label} n={n}",
        CheckStatus.FAIL if failures else CheckStatus.PASS,
        "0",
        ", ".join(failures) or "0",
    )
