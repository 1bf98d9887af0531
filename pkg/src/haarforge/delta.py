"""The complex bias parameter delta = a + ib, a > -1/2."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class DeltaParameter:
    a: float
    b: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        if not self.a > -0.5:
            raise DomainError(f"Re(delta) must exceed -1/2, got {self.a}")

    @classmethod
    def coerce(cls, value) -> "DeltaParameter":
        if isinstance(value, DeltaParameter):
            return value
        if isinstance(value, (tuple, list)):
            return cls(*value)
        z = complex(value)
        return cls(z.real, z.imag)

    @property
    def value(self) -> complex:
        return complex(self.a, self.b)

    @property
    def conj(self) -> complex:
        return complex(self.a, -self.b)

    @property
    def s(self) -> float:
        """delta + conj(delta) = 2a."""
        return 2.0 * self.a

    def __str__(self) -> str:
        return f"{self.a:g}{self.b:+g}i"
