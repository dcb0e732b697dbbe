"""Coefficient rings for algebra elements.

Only exact rings are provided: the integers and the integers modulo ``m``.
Values are plain Python ints kept in normalized form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import ParseError


@dataclass(frozen=True)
class IntegerRing:
    """The ring of integers."""

    name: str = "int"

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def normalize(self, value: int) -> int:
        return int(value)

    def add(self, x: int, y: int) -> int:
        return x + y

    def mul(self, x: int, y: int) -> int:
        return x * y

    def neg(self, x: int) -> int:
        return -x

    def is_zero(self, x: int) -> bool:
        return x == 0

    def __str__(self) -> str:
        return "Z"


@dataclass(frozen=True)
class ModularRing:
    """Integers modulo ``modulus``; ``modulus == 1`` is the zero ring."""

    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ParseError("ring", f"modulus must be positive, got {self.modulus}")

    @property
    def name(self) -> str:
        return f"mod:{self.modulus}"

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1 % self.modulus

    def normalize(self, value: int) -> int:
        return int(value) % self.modulus

    def add(self, x: int, y: int) -> int:
        return (x + y) % self.modulus

    def mul(self, x: int, y: int) -> int:
        return (x * y) % self.modulus

    def neg(self, x: int) -> int:
        return (-x) % self.modulus

    def is_zero(self, x: int) -> bool:
        return x % self.modulus == 0

    def __str__(self) -> str:
        return f"Z/{self.modulus}Z"


CoefficientRing = Union[IntegerRing, ModularRing]
INTEGERS = IntegerRing()


def parse_ring(name: str) -> CoefficientRing:
    """Parse ``int`` or ``mod:m`` into a ring instance."""
    text = (name or "int").strip().lower()
    if text in ("int", "z", "integers"):
        return INTEGERS
    if text.startswith("mod:"):
        try:
            modulus = int(text[4:])
        except ValueError as exc:
            raise ParseError("ring", f"invalid modulus in {name!r}") from exc
        return ModularRing(modulus)
    raise ParseError("ring", f"expected 'int' or 'mod:m', got {name!r}")


__all__ = ["CoefficientRing", "IntegerRing", "ModularRing", "INTEGERS", "parse_ring"]
