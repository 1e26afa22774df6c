"""Arithmetic on a circle of circumference ``C``.

Positions live in ``[0, C)``. Intervals are closed arcs described by a start
point and a non-negative length measured in the positive direction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

EPS = 1e-9


class GeometryError(ValueError):
    pass


class CoordinationError(GeometryError):
    """Two defended intervals overlap beyond tolerance."""


@dataclass(frozen=True)
class CircPos:
    value: float
    circumference: float

    def __post_init__(self):
        if not self.circumference > 0:
            raise GeometryError(f"circumference must be positive, got {self.circumference}")
        if not 0.0 <= self.value < self.circumference:
            raise GeometryError(f"position {self.value} outside [0, {self.circumference})")

    def __float__(self) -> float:
        return self.value

    def shifted(self, delta: float) -> "CircPos":
        return wrap(self.value + delta, self.circumference)


@dataclass(frozen=True)
class CircInterval:
    start: CircPos
    length: float

    def __post_init__(self):
        if not 0.0 <= self.length <= self.start.circumference:
            raise GeometryError(
                f"interval length {self.length} outside [0, {self.start.circumference}]"
            )

    @property
    def circumference(self) -> float:
        return self.start.circumference

    @property
    def end(self) -> CircPos:
        return self.start.shifted(self.length)


def wrap(raw: float, circumference: float) -> CircPos:
    """Reduce ``raw`` modulo ``circumference`` into ``[0, circumference)``."""
    if not (math.isfinite(circumference) and circumference > 0):
        raise GeometryError(f"circumference must be positive and finite, got {circumference}")
    if not math.isfinite(raw):
        raise GeometryError(f"cannot wrap non-finite position {raw}")
    value = math.fmod(raw, circumference)
    if value < 0:
        value += circumference
    # fmod of a tiny negative number plus C can round up to exactly C
    if value >= circumference:
        value = 0.0
    return CircPos(value, circumference)


def _same_circle(*points: CircPos) -> float:
    c = points[0].circumference
    for p in points[1:]:
        if p.circumference != c:
            raise GeometryError(
                f"mismatched circumferences {c} and {p.circumference}"
            )
    return c


def directed_arc(start: CircPos, stop: CircPos, direction: int = 1) -> float:
    """Arc length travelled from ``start`` to ``stop`` moving in ``direction``.

    >>> directed_arc(CircPos(2, 10), CircPos(5, 10), -1)
    7.0
    """
    c = _same_circle(start, stop)
    if direction not in (1, -1):
        raise GeometryError(f"direction must be +1 or -1, got {direction}")
    return wrap(direction * (stop.value - start.value), c).value


def contains(interval: CircInterval, p: CircPos, eps: float = 0.0) -> bool:
    """True iff ``p`` lies in the closed interval widened by ``eps`` at both ends."""
    c = _same_circle(interval.start, p)
    if interval.length + 2 * eps >= c:
        return True
    # measure from the widened start so that wrapped intervals need no special case
    offset = wrap(p.value - interval.start.value + eps, c).value
    return offset <= interval.length + 2 * eps


def gap_after(a: CircInterval, b: CircInterval, eps: float = EPS) -> float:
    """Uncovered arc between the positive end of ``a`` and the start of ``b``.

    ``b`` is taken to be the next interval after ``a`` going in the positive
    direction. Touching intervals give 0. Raises :class:`CoordinationError`
    when ``b`` starts inside ``a`` by more than ``eps``.
    """
    _same_circle(a.start, b.start)
    arc = directed_arc(a.start, b.start, 1)
    gap = arc - a.length
    if gap < -eps:
        raise CoordinationError(
            f"interval starting at {b.start.value} overlaps the one at {a.start.value} by {-gap}"
        )
    return max(gap, 0.0)
