"""
Exact linear algebra over the truncated discrete valuation ring R = Z/p^N
and over its residue field k = Z/p.

Vectors are rows: a matrix `M` of shape `(m, n)` is the map `v ↦ v·M` from
`R^m` to `R^n`. Matrices are plain `numpy` arrays; their dtype is `int64`
when products cannot overflow and `object` (Python integers) otherwise.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Optional

import numpy as np
import numpy.typing as npt
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from kleinring.errors import CompositionNonZero, PrecisionExhausted

logger = logging.getLogger(__name__)

RMatrix = npt.NDArray[Any]
"""Matrix over R, entries are residues in `0..p^N - 1`."""
KMatrix = npt.NDArray[np.int64]
"""Matrix over k = Z/p, entries are residues in `0..p - 1`."""

_INT64_HEADROOM = 2**63 // 4096
_to_int = np.frompyfunc(int, 1, 1)


@dataclass(frozen=True)
class TruncatedDVR:
    """
    The ring R modelled as Z/p^N with a guard band of `guard` valuations.

    Any pivot whose valuation falls in `(N - guard, N)` is ambiguous and
    aborts the computation with `PrecisionExhausted`.
    """

    p: int
    precision: int = 16
    guard: int = 4

    @cached_property
    def modulus(self) -> int:
        return self.p**self.precision

    @cached_property
    def dtype(self) -> Any:
        return np.int64 if self.modulus**2 < _INT64_HEADROOM else object

    def scalar(self, value: int) -> "TruncScalar":
        return TruncScalar(value, self)

    def array(self, data: Any) -> RMatrix:
        """Coerce `data` to a reduced matrix of this ring's dtype."""
        a = np.asarray(data)
        if self.dtype is object:
            if a.size == 0:
                return np.zeros(a.shape, dtype=object)
            return np.asarray(_to_int(a) % self.modulus, dtype=object)
        if a.dtype == object:
            a = a % self.modulus
        return a.astype(np.int64) % self.modulus

    def zeros(self, rows: int, cols: int) -> RMatrix:
        return np.zeros((rows, cols), dtype=self.dtype)

    def identity(self, n: int) -> RMatrix:
        return self.array(np.eye(n, dtype=np.int64))

    def matmul(self, a: Any, b: Any) -> RMatrix:
        a, b = self.array(a), self.array(b)
        if a.shape[-1] == 0 or 0 in a.shape[:-1] or 0 in b.shape[1:]:
            return self.zeros(a.shape[0], b.shape[1])
        return (a @ b) % self.modulus

    def valuation(self, value: int) -> int:
        value = int(value) % self.modulus
        if value == 0:
            return self.precision
        v = 0
        while value % self.p == 0:
            value //= self.p
            v += 1
        return v

    def residue(self, a: Any) -> KMatrix:
        """Reduce a matrix over R modulo p."""
        return np.asarray(np.asarray(a) % self.p).astype(np.int64)

    def is_zero(self, a: Any) -> bool:
        return not bool(np.any(self.array(a)))


@dataclass(frozen=True)
class TruncScalar:
    """An element of R, with valuation tracking."""

    value: int
    ring: TruncatedDVR = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", int(self.value) % self.ring.modulus)

    @property
    def valuation(self) -> int:
        return self.ring.valuation(self.value)

    def is_unit(self) -> bool:
        return self.value % self.ring.p != 0

    def inverse(self) -> "TruncScalar":
        return TruncScalar(pow(self.value, -1, self.ring.modulus), self.ring)

    def _coerce(self, other: Any) -> int:
        if isinstance(other, TruncScalar):
            return other.value
        return int(other)

    def __add__(self, other: Any) -> "TruncScalar":
        return TruncScalar(self.value + self._coerce(other), self.ring)

    __radd__ = __add__

    def __sub__(self, other: Any) -> "TruncScalar":
        return TruncScalar(self.value - self._coerce(other), self.ring)

    def __rsub__(self, other: Any) -> "TruncScalar":
        return TruncScalar(self._coerce(other) - self.value, self.ring)

    def __mul__(self, other: Any) -> "TruncScalar":
        return TruncScalar(self.value * self._coerce(other), self.ring)

    __rmul__ = __mul__

    def __neg__(self) -> "TruncScalar":
        return TruncScalar(-self.value, self.ring)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, TruncScalar):
            return self.value == other.value and self.ring == other.ring
        if isinstance(other, int):
            return self.value == other % self.ring.modulus
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.ring))

    def __int__(self) -> int:
        return self.value


@dataclass(frozen=True)
class SmithForm:
    """
    Smith normal form `U·M·V = diag(p^pivots)` of a matrix over R.

    `pivots` has one entry per diagonal position, `N` standing for zero.
    """

    left: RMatrix
    right: RMatrix
    left_inverse: RMatrix
    right_inverse: RMatrix
    pivots: tuple[int, ...]
    precision: int

    @property
    def rank(self) -> int:
        return sum(1 for e in self.pivots if e < self.precision)

    def diagonal(self, ring: TruncatedDVR) -> RMatrix:
        m, n = self.left.shape[0], self.right.shape[0]
        d = ring.zeros(m, n)
        for i, e in enumerate(self.pivots):
            if e < self.precision:
                d[i, i] = ring.p**e
        return d


@dataclass(frozen=True)
class ModuleInvariant:
    """
    Isomorphism invariant of a finitely generated R-module,
    `R^free_rank ⊕ R/p^e_1 ⊕ ... ⊕ R/p^e_s`.
    """

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "torsion", tuple(sorted(self.torsion)))

    @classmethod
    def elementary(cls, dimension: int) -> "ModuleInvariant":
        """The k-vector space k^dimension."""
        return cls(0, (1,) * max(dimension, 0))

    @property
    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_elementary(self) -> bool:
        return self.free_rank == 0 and all(e == 1 for e in self.torsion)

    @property
    def length(self) -> int:
        """Number of cyclic summands (the k-dimension when elementary)."""
        return self.free_rank + len(self.torsion)

    def __add__(self, other: "ModuleInvariant") -> "ModuleInvariant":
        return ModuleInvariant(
            self.free_rank + other.free_rank, self.torsion + other.torsion
        )

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        if self.free_rank:
            parts.append("R" if self.free_rank == 1 else f"R^{self.free_rank}")
        for e in sorted(set(self.torsion)):
            count = self.torsion.count(e)
            base = "k" if e == 1 else f"R/p^{e}"
            if count == 1:
                parts.append(base)
            elif e == 1:
                parts.append(f"k^{count}")
            else:
                parts.append(f"({base})^{count}")
        return " + ".join(parts)

    def to_dict(self) -> dict[str, Any]:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def smith(m: Any, ring: TruncatedDVR) -> SmithForm:
    """
    Smith normal form of `m` over R.

    Pivots are chosen with minimal valuation, ties broken in row-major order.

    :param m: Matrix over R.
    :param ring: The truncated ring.
    :raises PrecisionExhausted: A pivot valuation falls in the guard band.
    """
    a = ring.array(m).copy()
    rows, cols = a.shape
    q, p, n_prec = ring.modulus, ring.p, ring.precision
    u, u_inv = ring.identity(rows), ring.identity(rows)
    v, v_inv = ring.identity(cols), ring.identity(cols)
    pivots: list[int] = []

    for t in range(min(rows, cols)):
        sub = a[t:, t:]
        if not np.any(sub):
            break
        e = 0
        while True:
            mask = np.asarray(sub % p ** (e + 1) != 0, dtype=bool)
            if mask.any():
                break
            e += 1
        if e > n_prec - ring.guard:
            raise PrecisionExhausted(e, n_prec)
        i, j = divmod(int(np.argmax(mask)), sub.shape[1])
        i, j = i + t, j + t

        if i != t:
            a[[t, i]] = a[[i, t]]
            u[[t, i]] = u[[i, t]]
            u_inv[:, [t, i]] = u_inv[:, [i, t]]
        if j != t:
            a[:, [t, j]] = a[:, [j, t]]
            v[:, [t, j]] = v[:, [j, t]]
            v_inv[[t, j]] = v_inv[[j, t]]

        pe = p**e
        unit = int(a[t, t]) // pe
        inv = pow(unit, -1, q)
        a[t] = a[t] * inv % q
        u[t] = u[t] * inv % q
        u_inv[:, t] = u_inv[:, t] * unit % q

        f = a[t + 1 :, t] // pe
        if np.any(f):
            a[t + 1 :] = (a[t + 1 :] - np.outer(f, a[t])) % q
            u[t + 1 :] = (u[t + 1 :] - np.outer(f, u[t])) % q
            u_inv[:, t] = (u_inv[:, t] + u_inv[:, t + 1 :] @ f) % q

        g = a[t, t + 1 :] // pe
        if np.any(g):
            a[t, t + 1 :] = 0
            v[:, t + 1 :] = (v[:, t + 1 :] - np.outer(v[:, t], g)) % q
            v_inv[t] = (v_inv[t] + g @ v_inv[t + 1 :]) % q

        pivots.append(e)

    pivots.extend([n_prec] * (min(rows, cols) - len(pivots)))
    logger.debug("smith %dx%d: pivots %s", rows, cols, pivots)
    return SmithForm(u, v, u_inv, v_inv, tuple(pivots), n_prec)


def kernel_basis(m: Any, ring: TruncatedDVR) -> RMatrix:
    """
    Basis (as rows) of the left kernel `{v : v·m = 0}` of `m` over R.

    The basis is saturated: it spans the kernel of the exact map.
    """
    form = smith(m, ring)
    return form.left[form.rank :]


def subquotient_invariant(
    d_out: Any, d_in: Any, ring: TruncatedDVR
) -> ModuleInvariant:
    """
    Invariant of `ker(d_out) / im(d_in)` for a pair of composable maps
    `R^a --d_in--> R^b --d_out--> R^c`.

    :raises CompositionNonZero: `d_in·d_out` is not zero.
    :raises PrecisionExhausted: A pivot valuation falls in the guard band.
    """
    d_out, d_in = ring.array(d_out), ring.array(d_in)
    b = d_out.shape[0]
    if d_in.shape[1] != b:
        raise ValueError(f"shape mismatch: {d_in.shape} then {d_out.shape}")
    if not ring.is_zero(ring.matmul(d_in, d_out)):
        raise CompositionNonZero()
    outer = smith(d_out, ring)
    r = outer.rank
    coords = ring.matmul(d_in, outer.left_inverse)[:, r:]
    if coords.shape[1] == 0:
        return ModuleInvariant()
    inner = smith(coords, ring)
    torsion = tuple(e for e in inner.pivots if 0 < e < ring.precision)
    return ModuleInvariant((b - r) - inner.rank, torsion)


def solve(
    m: Any,
    b: Any,
    ring: TruncatedDVR,
    smith_form: Optional[SmithForm] = None,
) -> Optional[RMatrix]:
    """
    Solve `x·m = b` over R.

    :param smith_form: Precomputed Smith form of `m`, reused across right-hand sides.
    :return: A solution vector, or `None` when `b` is not in the row space of `m`.
    """
    m = ring.array(m)
    form = smith_form if smith_form is not None else smith(m, ring)
    rows, cols = m.shape
    c = ring.matmul(ring.array(b).reshape(1, cols), form.right)[0]
    y = ring.zeros(1, rows)[0]
    for i in range(cols):
        e = form.pivots[i] if i < len(form.pivots) else ring.precision
        value = int(c[i])
        if e >= ring.precision:
            if value != 0:
                return None
            continue
        pe = ring.p**e
        if value % pe != 0:
            return None
        y[i] = value // pe
    return ring.matmul(y.reshape(1, rows), form.left)[0]


# Linear algebra over the residue field k = Z/p.


def gf_matrix(a: Any, p: int) -> DomainMatrix:
    """`a` as a `DomainMatrix` over `GF(p)`."""
    a = np.asarray(a)
    gf = GF(p)
    return DomainMatrix([[gf(int(v) % p) for v in row] for row in a], a.shape, gf)


def from_gf(m: DomainMatrix, p: int) -> KMatrix:
    rows, cols = m.shape
    entries = [[int(v) % p for v in row] for row in m.to_Matrix().tolist()]
    return np.array(entries, dtype=np.int64).reshape(rows, cols)


def rref(a: Any, p: int) -> tuple[KMatrix, list[int]]:
    """Reduced row echelon form over k, with the list of pivot columns."""
    r = np.asarray(np.asarray(a) % p).astype(np.int64)
    if r.ndim != 2:
        r = r.reshape(0, 0) if r.size == 0 else r.reshape(1, -1)
    if r.size == 0:
        return r.copy(), []
    reduced, pivots = gf_matrix(r, p).rref()
    return from_gf(reduced, p), [int(c) for c in pivots]


def rank_mod(a: Any, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def row_basis(a: Any, p: int) -> KMatrix:
    """Rows of the reduced echelon form spanning the row space over k."""
    a = np.asarray(a)
    if a.size == 0:
        return np.zeros((0, a.shape[1] if a.ndim == 2 else 0), dtype=np.int64)
    r, pivots = rref(a, p)
    return r[: len(pivots)]


def nullspace(a: Any, p: int) -> KMatrix:
    """Rows spanning `{v : a·v = 0}` over k."""
    a = np.asarray(a)
    cols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, c in enumerate(pivots):
            basis[k, c] = -r[i, f] % p
    return basis


def left_nullspace(a: Any, p: int) -> KMatrix:
    """Rows spanning `{v : v·a = 0}` over k."""
    return nullspace(np.asarray(a).T, p)


def inverse_mod(a: Any, p: int) -> KMatrix:
    a = np.asarray(a) % p
    n = a.shape[0]
    r, pivots = rref(np.hstack([a, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular over k")
    return r[:, n:]


def solve_mod(a: Any, b: Any, p: int) -> Optional[KMatrix]:
    """Solve `x·a = b` over k, returning `None` when inconsistent."""
    a = np.asarray(a) % p
    b = np.asarray(b).reshape(1, -1) % p
    rows = a.shape[0]
    if rows == 0:
        return np.zeros(0, dtype=np.int64) if not b.any() else None
    aug = np.hstack([a.T, b.T])
    r, pivots = rref(aug, p)
    if rows in pivots:
        return None
    x = np.zeros(rows, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = r[i, rows]
    return x


def kron(a: Any, b: Any) -> npt.NDArray[Any]:
    a, b = np.asarray(a), np.asarray(b)
    shape = (a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])
    if 0 in shape:
        return np.zeros(shape, dtype=np.result_type(a, b))
    return np.kron(a, b)


def block_matrix(
    blocks: dict[tuple[int, int], Any],
    row_sizes: Sequence[int],
    col_sizes: Sequence[int],
    ring: TruncatedDVR,
) -> RMatrix:
    """Assemble a matrix over R from sparse `(block_row, block_col) -> block` entries."""
    row_offsets = np.concatenate([[0], np.cumsum(row_sizes)]).astype(int)
    col_offsets = np.concatenate([[0], np.cumsum(col_sizes)]).astype(int)
    out = ring.zeros(int(row_offsets[-1]), int(col_offsets[-1]))
    for (i, j), block in blocks.items():
        r0, r1 = row_offsets[i], row_offsets[i + 1]
        c0, c1 = col_offsets[j], col_offsets[j + 1]
        if r1 > r0 and c1 > c0:
            out[r0:r1, c0:c1] = ring.array(block)
    return out
