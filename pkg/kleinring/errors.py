from typing import Optional


class KleinringError(Exception):
    """Base kleinring error."""


class PrecisionExhausted(KleinringError):
    """A pivot valuation fell inside the guard band, so zero cannot be told apart from a small entry."""

    def __init__(self, valuation: int, precision: int) -> None:
        self.valuation = valuation
        self.precision = precision
        self.message = (
            f"pivot of valuation {valuation} is ambiguous at precision {precision}"
        )
        super().__init__(self.message)


class CompositionNonZero(KleinringError):
    """The incoming differential followed by the outgoing one is not zero."""


class InvalidRepresentation(KleinringError):
    """The quiver representation is not in the admissible class."""

    def __init__(self, violations: list[str]) -> None:
        self.violations = violations
        self.message = "; ".join(violations)
        super().__init__(self.message)


class NotNormalized(KleinringError):
    """The lattice ambient is larger than the hereditary hull of the lattice."""


class InvalidLattice(KleinringError):
    """The rows do not describe a lattice in the expected position."""


class Inconclusive(KleinringError):
    """The randomized indecomposability test could not decide."""


class InvalidTube(KleinringError):
    """The tube parameters do not name a tube layer."""


class NotHomogeneousPoint(InvalidTube):
    """The polynomial sits at an exceptional point of the tube family."""


class ExtensionSearchFailed(KleinringError):
    """No extension class produced an indecomposable of the expected rank."""


class TranslateBoundExceeded(KleinringError):
    """The translate exponent exceeds the configured bound."""


class UnknownFamily(KleinringError):
    """No closed form is known for this lattice description."""


class NotRegular(KleinringError):
    """The lattice is not regular."""


class NotExact(KleinringError):
    """The maps do not form a short exact sequence."""


class ElementNotInSlot(KleinringError):
    """The element does not lie in the eigen slot of its degree."""


class ParseError(KleinringError):
    """The lattice description is malformed."""

    def __init__(self, message: str, position: int) -> None:
        self.position = position
        self.message = f"{message} at position {position}"
        super().__init__(self.message)


class SemanticError(KleinringError):
    """The lattice description is well formed but names nothing."""

    def __init__(self, message: str, position: Optional[int] = None) -> None:
        self.position = position
        self.message = message if position is None else f"{message} at position {position}"
        super().__init__(self.message)


class ConfigurationError(KleinringError):
    """The engine configuration is invalid."""
