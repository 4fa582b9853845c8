"""Exact dyadic points and intervals on the half-line.

Everything here is integer arithmetic. A point is ``n / 2**q`` and an
interval ``I(j, k)`` is ``[k 2^-j, (k+1) 2^-j)``; membership is half-open,
so a boundary point belongs to the cell on its right.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import EqualPoints

__all__ = [
    "DyadicPoint",
    "DyadicInterval",
    "ButterflyClass",
    "cell_at",
    "ancestor",
    "dilate",
    "min_common_interval",
    "delta",
    "classify",
]

_POINT_RE = re.compile(r"^\s*(\d+)\s*(?:/\s*(?:2\^(\d+)|(\d+)))?\s*$")


@dataclass(frozen=True, order=False)
class DyadicPoint:
    """The nonnegative dyadic rational ``numerator / 2**scale``.

    Instances are kept canonical (odd numerator, or scale 0) so that
    equality of values is equality of fields. Use :meth:`of` to build one
    from a non-canonical pair.
    """

    numerator: int
    scale: int = 0

    def __post_init__(self):
        if self.numerator < 0 or self.scale < 0:
            raise ValueError(f"dyadic point must be nonnegative: {self.numerator}/2^{self.scale}")
        if self.scale > 0 and self.numerator % 2 == 0:
            raise ValueError(
                f"non-canonical dyadic point {self.numerator}/2^{self.scale}; use DyadicPoint.of"
            )

    @classmethod
    def of(cls, numerator: int, scale: int = 0) -> "DyadicPoint":
        numerator = int(numerator)
        if numerator < 0:
            raise ValueError("dyadic point must be nonnegative")
        if scale < 0:
            return cls(numerator << -scale, 0)
        if numerator == 0:
            return cls(0, 0)
        tz = (numerator & -numerator).bit_length() - 1
        drop = min(tz, scale)
        return cls(numerator >> drop, scale - drop)

    @classmethod
    def from_fraction(cls, value) -> "DyadicPoint":
        value = Fraction(value)
        den = value.denominator
        if den & (den - 1):
            raise ValueError(f"{value} is not a dyadic rational")
        return cls.of(value.numerator, den.bit_length() - 1)

    @classmethod
    def parse(cls, text: str) -> "DyadicPoint":
        """Parse ``"n/2^q"``, ``"n/d"`` with ``d`` a power of two, or ``"n"``."""
        m = _POINT_RE.match(text)
        if m is None:
            raise ValueError(f"cannot parse dyadic point {text!r}")
        n = int(m.group(1))
        if m.group(2) is not None:
            return cls.of(n, int(m.group(2)))
        if m.group(3) is not None:
            return cls.from_fraction(Fraction(n, int(m.group(3))))
        return cls.of(n, 0)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.scale)

    def scaled(self, l: int) -> "DyadicPoint":
        """Return ``2**l * self``."""
        if l >= 0:
            return DyadicPoint.of(self.numerator << l, self.scale)
        return DyadicPoint.of(self.numerator, self.scale - l)

    def __float__(self):
        return float(self.value)

    def __lt__(self, other: "DyadicPoint") -> bool:
        return self.value < other.value

    def __str__(self):
        return f"{self.numerator}/2^{self.scale}"


@dataclass(frozen=True)
class DyadicInterval:
    """``I(j, k) = [k 2^-j, (k+1) 2^-j)``; level may be negative."""

    level: int
    position: int

    def __post_init__(self):
        if self.position < 0:
            raise ValueError("dyadic interval position must be nonnegative")

    @property
    def measure(self) -> Fraction:
        return Fraction(2) ** (-self.level)

    @property
    def left(self) -> DyadicPoint:
        return DyadicPoint.of(self.position, self.level)

    @property
    def right(self) -> DyadicPoint:
        return DyadicPoint.of(self.position + 1, self.level)

    def contains(self, x: DyadicPoint) -> bool:
        return cell_at(x, self.level).position == self.position

    def children(self) -> tuple["DyadicInterval", "DyadicInterval"]:
        k = 2 * self.position
        return DyadicInterval(self.level + 1, k), DyadicInterval(self.level + 1, k + 1)

    def contains_interval(self, other: "DyadicInterval") -> bool:
        d = other.level - self.level
        return d >= 0 and other.position >> d == self.position

    def to_json(self) -> dict:
        return {"j": self.level, "k": self.position}

    @classmethod
    def from_json(cls, obj) -> "DyadicInterval":
        return cls(int(obj["j"]), int(obj["k"]))

    def __str__(self):
        return f"I^{self.level}_{self.position}"


@dataclass(frozen=True)
class ButterflyClass:
    """Label of an off-diagonal pair: dilation class ``Gamma_k`` and level set ``Lambda_j``."""

    class_index: int
    level_index: int


def cell_at(x: DyadicPoint, j: int) -> DyadicInterval:
    """The level-``j`` dyadic interval containing ``x``."""
    shift = j - x.scale
    k = x.numerator << shift if shift >= 0 else x.numerator >> -shift
    return DyadicInterval(j, k)


def ancestor(interval: DyadicInterval, l: int = 1) -> DyadicInterval:
    if l < 1:
        raise ValueError("ancestor order must be >= 1")
    return DyadicInterval(interval.level - l, interval.position >> l)


def dilate(interval: DyadicInterval, l: int = 1) -> DyadicInterval:
    """``2**l * I``: the level drops by ``l`` and the position is unchanged."""
    return DyadicInterval(interval.level - l, interval.position)


def _aligned(x: DyadicPoint, y: DyadicPoint) -> tuple[int, int, int]:
    q = max(x.scale, y.scale)
    return x.numerator << (q - x.scale), y.numerator << (q - y.scale), q


def min_common_interval(x: DyadicPoint, y: DyadicPoint) -> DyadicInterval:
    """Smallest dyadic interval containing both points.

    With both points written over a common denominator ``2**q`` as
    integers ``a`` and ``b``, the two share a level ``q - d`` cell exactly
    when ``a >> d == b >> d``, so the first shared level comes from the
    bit length of ``a ^ b``.
    """
    a, b, q = _aligned(x, y)
    if a == b:
        raise EqualPoints(f"I(x, x) is undefined (x = {x})")
    d = (a ^ b).bit_length()
    return DyadicInterval(q - d, a >> d)


def delta(x: DyadicPoint, y: DyadicPoint) -> Fraction:
    """The dyadic ultrametric; ``delta(x, x) == 0``."""
    if x == y:
        return Fraction(0)
    return min_common_interval(x, y).measure


def classify(x: DyadicPoint, y: DyadicPoint) -> ButterflyClass:
    interval = min_common_interval(x, y)
    return ButterflyClass(class_index=interval.position, level_index=interval.level)
