"""Coefficient rings for morphism spaces: the integers, the rationals and F2."""

from __future__ import annotations

from fractions import Fraction


class Ring:
    """A small exact coefficient ring.

    Elements are plain Python numbers (``int`` for Z and F2, ``Fraction`` for Q)
    so arithmetic stays cheap; :meth:`normalize` is applied after every sum or
    product that might leave the canonical range.
    """

    __slots__ = ("name",)

    def __init__(self, name: str):
        if name not in ("Z", "Q", "F2"):
            raise ValueError(f"unknown ring {name!r}")
        self.name = name

    def __repr__(self) -> str:
        return f"Ring({self.name!r})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Ring) and other.name == self.name

    def __hash__(self) -> int:
        return hash(self.name)

    @property
    def is_field(self) -> bool:
        return self.name != "Z"

    def normalize(self, x):
        if self.name == "F2":
            return x % 2
        if self.name == "Q" and not isinstance(x, Fraction):
            return Fraction(x)
        return x

    def is_unit(self, x) -> bool:
        if self.name == "Z":
            return x == 1 or x == -1
        if self.name == "F2":
            return x % 2 == 1
        return x != 0

    def inv(self, x):
        if not self.is_unit(x):
            raise ZeroDivisionError(f"{x} is not a unit in {self.name}")
        if self.name == "Q":
            return 1 / Fraction(x)
        return x if self.name == "Z" else 1

    def to_json(self, x) -> int | str:
        if isinstance(x, Fraction):
            return str(x) if x.denominator != 1 else x.numerator
        return int(x)

    def from_json(self, x):
        if isinstance(x, str):
            return self.normalize(Fraction(x))
        return self.normalize(x)


ZZ = Ring("Z")
QQ = Ring("Q")
F2 = Ring("F2")


def get_ring(name: str | Ring) -> Ring:
    if isinstance(name, Ring):
        return name
    return {"Z": ZZ, "Q": QQ, "F2": F2}[name]
