"""
Arithmetic of the Kleinian 4-ring K = R[x, y]/(x(x - p), y(y - p)), its
overring A = K + Rz and the coordinate embedding K ⊂ A ⊂ R^4.

The four coordinates of R^4 are indexed by character types, always in the
order (pp, p0, 0p, 00): on a type-(α, β) coordinate, x acts as α and y as β.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Union

import numpy as np

from kleinring.dvr import RMatrix, TruncatedDVR


class CharacterType(str, Enum):
    """Eigenvalue pair (α, β) of x and y, each in {p, 0}."""

    PP = "pp"
    P0 = "p0"
    ZP = "0p"
    ZZ = "00"

    @property
    def x_is_p(self) -> bool:
        return self.value[0] == "p"

    @property
    def y_is_p(self) -> bool:
        return self.value[1] == "p"

    def alpha(self, p: int) -> int:
        return p if self.x_is_p else 0

    def beta(self, p: int) -> int:
        return p if self.y_is_p else 0

    def z_value(self, p: int) -> int:
        return p if self is CharacterType.PP else 0


TYPES: tuple[CharacterType, ...] = tuple(CharacterType)


@dataclass(frozen=True)
class QuadCoord:
    """A point of R^4 in character-type coordinates."""

    values: tuple[int, int, int, int]
    ring: TruncatedDVR = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "values", tuple(int(v) % self.ring.modulus for v in self.values)
        )

    def __getitem__(self, t: CharacterType) -> int:
        return self.values[TYPES.index(t)]

    def __mul__(self, other: "QuadCoord") -> "QuadCoord":
        return QuadCoord(
            tuple(a * b for a, b in zip(self.values, other.values)),  # type: ignore[arg-type]
            self.ring,
        )

    def __add__(self, other: "QuadCoord") -> "QuadCoord":
        return QuadCoord(
            tuple(a + b for a, b in zip(self.values, other.values)),  # type: ignore[arg-type]
            self.ring,
        )

    def __sub__(self, other: "QuadCoord") -> "QuadCoord":
        return QuadCoord(
            tuple(a - b for a, b in zip(self.values, other.values)),  # type: ignore[arg-type]
            self.ring,
        )


@dataclass(frozen=True)
class KElem:
    """Element `c1 + cx·x + cy·y + cxy·xy` of K."""

    c1: int
    cx: int
    cy: int
    cxy: int
    ring: TruncatedDVR = field(repr=False)

    def __post_init__(self) -> None:
        for name in ("c1", "cx", "cy", "cxy"):
            object.__setattr__(self, name, int(getattr(self, name)) % self.ring.modulus)

    @classmethod
    def one(cls, ring: TruncatedDVR) -> "KElem":
        return cls(1, 0, 0, 0, ring)

    @classmethod
    def x(cls, ring: TruncatedDVR) -> "KElem":
        return cls(0, 1, 0, 0, ring)

    @classmethod
    def y(cls, ring: TruncatedDVR) -> "KElem":
        return cls(0, 0, 1, 0, ring)

    @property
    def coefficients(self) -> tuple[int, int, int, int]:
        return (self.c1, self.cx, self.cy, self.cxy)

    def __add__(self, other: "KElem") -> "KElem":
        return KElem(*(a + b for a, b in zip(self.coefficients, other.coefficients)), self.ring)

    def __sub__(self, other: "KElem") -> "KElem":
        return KElem(*(a - b for a, b in zip(self.coefficients, other.coefficients)), self.ring)

    def scale(self, c: int) -> "KElem":
        return KElem(*(c * a for a in self.coefficients), self.ring)

    def __mul__(self, other: "KElem") -> "KElem":
        p = self.ring.p
        # monomial x^i y^j sits at index i + 2j
        out = [0, 0, 0, 0]
        for a_index, a in enumerate(self.coefficients):
            if not a:
                continue
            i, j = a_index % 2, a_index // 2
            for b_index, b in enumerate(other.coefficients):
                if not b:
                    continue
                k, l = b_index % 2, b_index // 2
                factor = (p if i and k else 1) * (p if j and l else 1)
                out[min(i + k, 1) + 2 * min(j + l, 1)] += factor * a * b
        return KElem(*out, self.ring)

    def to_A(self) -> "AElem":
        """The same element in the basis (1, x, y, z) of A, using xy = pz."""
        return AElem(self.c1, self.cx, self.cy, self.ring.p * self.cxy, self.ring)


# Products of non-unit A-basis elements (1, x, y, z) are p times the basis
# element at the given index: x² = px, y² = py, xy = xz = yz = z² = pz.
_A_TABLE: dict[tuple[int, int], int] = {
    (1, 1): 1,
    (2, 2): 2,
    (1, 2): 3,
    (2, 1): 3,
    (1, 3): 3,
    (3, 1): 3,
    (2, 3): 3,
    (3, 2): 3,
    (3, 3): 3,
}


@dataclass(frozen=True)
class AElem:
    """Element `c1 + cx·x + cy·y + cz·z` of A = K + Rz."""

    c1: int
    cx: int
    cy: int
    cz: int
    ring: TruncatedDVR = field(repr=False)

    def __post_init__(self) -> None:
        for name in ("c1", "cx", "cy", "cz"):
            object.__setattr__(self, name, int(getattr(self, name)) % self.ring.modulus)

    @classmethod
    def z(cls, ring: TruncatedDVR) -> "AElem":
        return cls(0, 0, 0, 1, ring)

    @property
    def coefficients(self) -> tuple[int, int, int, int]:
        return (self.c1, self.cx, self.cy, self.cz)

    def __add__(self, other: "AElem") -> "AElem":
        return AElem(*(a + b for a, b in zip(self.coefficients, other.coefficients)), self.ring)

    def __mul__(self, other: "AElem") -> "AElem":
        p = self.ring.p
        out = [0, 0, 0, 0]
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                if not (a and b):
                    continue
                if i == 0 or j == 0:
                    out[i + j] += a * b
                else:
                    out[_A_TABLE[(i, j)]] += p * a * b
        return AElem(*out, self.ring)

    def in_K(self) -> bool:
        return self.cz % self.ring.p == 0

    def to_K(self) -> KElem:
        if not self.in_K():
            raise ValueError("element does not lie in K")
        return KElem(self.c1, self.cx, self.cy, self.cz // self.ring.p, self.ring)


def embed(e: Union[KElem, AElem]) -> QuadCoord:
    """
    Image of an element of K or A in R^4.

    **Example:**

    ```py
    ring = TruncatedDVR(5)
    embed(KElem.x(ring) * KElem.y(ring))  # (25, 0, 0, 0)
    ```
    """
    p = e.ring.p
    if isinstance(e, KElem):
        c1, cx, cy, cxy = e.coefficients
        top = c1 + p * cx + p * cy + p * p * cxy
    else:
        c1, cx, cy, cz = e.coefficients
        top = c1 + p * cx + p * cy + p * cz
    return QuadCoord((top, c1 + p * cx, c1 + p * cy, c1), e.ring)


def act(e: QuadCoord, v: Any, types: Sequence[CharacterType]) -> RMatrix:
    """Act with `e` on a vector whose coordinates carry `types`."""
    scale = e.ring.array([e[t] for t in types])
    return e.ring.array(e.ring.array(v) * scale)


def type_values(types: Sequence[CharacterType], p: int) -> tuple[list[int], list[int], list[int]]:
    """Per-coordinate eigenvalues of x, y and z."""
    return (
        [t.alpha(p) for t in types],
        [t.beta(p) for t in types],
        [t.z_value(p) for t in types],
    )


def regular_action(ring: TruncatedDVR) -> tuple[RMatrix, RMatrix]:
    """Matrices of x and y on K in the basis (1, x, y, xy), rows as images."""
    p = ring.p
    x = ring.array([[0, 1, 0, 0], [0, p, 0, 0], [0, 0, 0, 1], [0, 0, 0, p]])
    y = ring.array([[0, 0, 1, 0], [0, 0, 0, 1], [0, 0, p, 0], [0, 0, 0, p]])
    return x, y


def regular_embedding(ring: TruncatedDVR) -> RMatrix:
    """Rows are the images in R^4 of the basis (1, x, y, xy) of K."""
    p = ring.p
    return ring.array(
        np.array([[1, 1, 1, 1], [p, p, 0, 0], [p, 0, p, 0], [p * p, 0, 0, 0]], dtype=object)
    )
