"""
Parser for the lattice description language.

```
spec   := sum "(" spec ("," spec)* ")"
        | "A" ["^" int] | "R[" type "]" ["^" int]
        | "free(" int ")"
        | "tube(f=" poly ",n=" int ")"
        | "etube(l=" point ",i=" int ",n=" int ")"
type   := "pp" | "p0" | "0p" | "00"
point  := "0" | "1" | "inf"
poly   := polynomial in t with integer coefficients, read modulo p
```

Whitespace is ignored between tokens.
"""

import re
from typing import Optional

from kleinring.catalog import (
    Description,
    ExceptionalPoint,
    FamilyBase,
    FamilyId,
    FreeId,
    SumId,
    TubeId,
    check_homogeneous_point,
)
from kleinring.errors import InvalidTube, ParseError, SemanticError

_INTEGER = re.compile(r"[+-]?\d+")
_DIGITS = re.compile(r"\d+")
_WORD = re.compile(r"[A-Za-z]+|∞")
_TYPES = ("pp", "p0", "0p", "00")


class _Parser:
    def __init__(self, text: str, p: int) -> None:
        self.text = text
        self.p = p
        self.pos = 0

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def accept(self, literal: str) -> bool:
        self.skip()
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal: str) -> None:
        if not self.accept(literal):
            found = self.peek() or "end of input"
            raise ParseError(f"expected {literal!r}, found {found!r}", self.pos)

    def integer(self) -> int:
        self.skip()
        match = _INTEGER.match(self.text, self.pos)
        if not match:
            raise ParseError("expected an integer", self.pos)
        self.pos = match.end()
        return int(match.group())

    def word(self) -> str:
        self.skip()
        match = _WORD.match(self.text, self.pos)
        if not match:
            raise ParseError("expected a name", self.pos)
        self.pos = match.end()
        return match.group()

    def end(self) -> None:
        self.skip()
        if self.pos != len(self.text):
            raise ParseError(f"unexpected {self.text[self.pos]!r}", self.pos)

    def spec(self) -> Description:
        self.skip()
        start = self.pos
        name = self.word()
        if name == "sum":
            self.expect("(")
            parts = [self.spec()]
            while self.accept(","):
                parts.append(self.spec())
            self.expect(")")
            return SumId(tuple(parts))
        if name == "A":
            return FamilyId(FamilyBase.A, self.exponent())
        if name == "R":
            self.expect("[")
            self.skip()
            type_start = self.pos
            for t in _TYPES:
                if self.accept(t):
                    break
            else:
                raise ParseError("expected one of pp, p0, 0p, 00", type_start)
            self.expect("]")
            return FamilyId(FamilyBase(f"R[{t}]"), self.exponent())
        if name == "free":
            self.expect("(")
            rank_start = self.pos
            rank = self.integer()
            self.expect(")")
            if rank < 0:
                raise SemanticError("free rank must be non-negative", rank_start)
            return FreeId(rank)
        if name == "tube":
            return self.tube()
        if name == "etube":
            return self.etube()
        raise ParseError(f"unknown lattice {name!r}", start)

    def exponent(self) -> int:
        if self.accept("^"):
            return self.integer()
        return 0

    def layer(self) -> int:
        self.expect("n")
        self.expect("=")
        self.skip()
        start = self.pos
        layer = self.integer()
        if layer < 1:
            raise SemanticError("tube layer must be positive", start)
        return layer

    def tube(self) -> TubeId:
        self.expect("(")
        self.expect("f")
        self.expect("=")
        self.skip()
        start = self.pos
        coefficients = self.polynomial()
        self.expect(",")
        layer = self.layer()
        self.expect(")")
        try:
            check_homogeneous_point(coefficients, self.p)
        except InvalidTube as e:
            raise SemanticError(str(e), start) from e
        return TubeId(tuple(c % self.p for c in coefficients), layer)

    def etube(self) -> TubeId:
        self.expect("(")
        self.expect("l")
        self.expect("=")
        self.skip()
        start = self.pos
        if self.accept("inf") or self.accept("∞"):
            point = ExceptionalPoint.INFINITY
        elif self.accept("0"):
            point = ExceptionalPoint.ZERO
        elif self.accept("1"):
            point = ExceptionalPoint.ONE
        else:
            raise ParseError("expected exceptional point 0, 1 or inf", start)
        self.expect(",")
        self.expect("i")
        self.expect("=")
        self.skip()
        branch_start = self.pos
        branch = self.integer()
        if branch not in (1, 2):
            raise SemanticError("branch must be 1 or 2", branch_start)
        self.expect(",")
        layer = self.layer()
        self.expect(")")
        return TubeId(point, layer, branch)

    def monomial(self) -> tuple[int, int]:
        """A term `c`, `t`, `c*t`, `ct^e` or `t^e`, as (coefficient, degree)."""
        self.skip()
        coefficient: Optional[int] = None
        match = _DIGITS.match(self.text, self.pos)
        if match:
            coefficient = int(match.group())
            self.pos = match.end()
            self.accept("*")
        if not self.accept("t"):
            if coefficient is None:
                raise ParseError("expected a polynomial term", self.pos)
            return coefficient, 0
        degree = 1
        if self.accept("^"):
            self.skip()
            match = _DIGITS.match(self.text, self.pos)
            if not match:
                raise ParseError("expected an exponent", self.pos)
            degree = int(match.group())
            self.pos = match.end()
        return (1 if coefficient is None else coefficient), degree

    def polynomial(self) -> tuple[int, ...]:
        terms: dict[int, int] = {}
        sign = -1 if self.accept("-") else 1
        while True:
            coefficient, degree = self.monomial()
            terms[degree] = terms.get(degree, 0) + sign * coefficient
            if self.accept("+"):
                sign = 1
            elif self.accept("-"):
                sign = -1
            else:
                break
        top = max((d for d, c in terms.items() if c % self.p), default=0)
        return tuple(terms.get(d, 0) % self.p for d in range(top, -1, -1))


def parse_spec(text: str, p: int) -> Description:
    """
    Parse a lattice description.

    **Example:**

    ```py
    parse_spec("sum(A^2, etube(l=1,i=2,n=3))", 2)
    ```

    :raises ParseError: The text is malformed; the message carries the position.
    :raises SemanticError: The text names no lattice, e.g. a reducible tube polynomial.
    """
    parser = _Parser(text, p)
    description = parser.spec()
    parser.end()
    return description
