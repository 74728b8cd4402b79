from dataclasses import dataclass
from functools import cached_property
from typing import Any

from sympy import isprime

from kleinring.dvr import TruncatedDVR
from kleinring.errors import ConfigurationError


@dataclass(frozen=True)
class EngineConfig:
    """
    Settings shared by every construction and computation.

    The configuration is hashable, so it can key the construction caches.
    """

    p: int = 2
    """Prime of the valuation ring."""
    precision: int = 16
    """Exponent N of the model R = Z/p^N."""
    guard: int = 4
    """Width of the band of ambiguous valuations below N."""
    window: tuple[int, int] = (-6, 6)
    """Inclusive degree window for tables and suites."""
    translate_bound: int = 4
    """Largest |k| accepted when translating a family."""
    exhaustive_limit: int = 512
    """Endomorphism algebras with at most this many elements are enumerated."""
    random_trials: int = 64
    """Random endomorphisms tried above the exhaustive limit."""
    seed: int = 0
    """Seed of every random generator."""

    def __post_init__(self) -> None:
        if not isprime(self.p):
            raise ConfigurationError(f"p = {self.p} is not prime")
        if self.guard < 1 or self.precision <= self.guard + 2:
            raise ConfigurationError(
                f"precision {self.precision} leaves no room above guard {self.guard}"
            )
        low, high = self.window
        if low > high:
            raise ConfigurationError(f"empty window [{low}, {high}]")
        if self.translate_bound < 0:
            raise ConfigurationError("translate bound must be non-negative")

    @cached_property
    def dvr(self) -> TruncatedDVR:
        return TruncatedDVR(self.p, self.precision, self.guard)

    @property
    def degrees(self) -> range:
        return range(self.window[0], self.window[1] + 1)

    def to_dict(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "precision": self.precision,
            "window": list(self.window),
        }
