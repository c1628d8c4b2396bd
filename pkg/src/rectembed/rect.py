"""Sorted rectangles and overflow-safe products of side lengths."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DimensionError, ValidationError


@dataclass(frozen=True)
class Rectangle:
    """An axis-aligned box [0, d_1] x ... x [0, d_n] with d_1 <= ... <= d_n.

    ``perm[i]`` is the caller's original axis index of ``dims[i]``.
    """

    dims: tuple[float, ...]
    perm: tuple[int, ...] = field(default=(), compare=False)

    def __post_init__(self):
        dims = tuple(float(d) for d in self.dims)
        if not dims:
            raise ValidationError("rectangle needs at least one side", index=None)
        for i, d in enumerate(dims):
            if not math.isfinite(d) or d <= 0:
                raise ValidationError(f"side {i} must be positive and finite, got {d!r}", index=i)
        if any(dims[i] > dims[i + 1] for i in range(len(dims) - 1)):
            raise ValidationError("dims must be sorted ascending; use normalize()")
        object.__setattr__(self, "dims", dims)
        if not self.perm:
            object.__setattr__(self, "perm", tuple(range(len(dims))))

    @property
    def n(self) -> int:
        return len(self.dims)

    def __len__(self):
        return len(self.dims)

    def __getitem__(self, i):
        return self.dims[i]

    def __iter__(self):
        return iter(self.dims)

    @property
    def logs(self) -> tuple[float, ...]:
        return tuple(math.log(d) for d in self.dims)

    @property
    def volume(self) -> float:
        return math.exp(log_prefix_volume(self, self.n))

    def scaled(self, factor: float) -> "Rectangle":
        return Rectangle(tuple(factor * d for d in self.dims), self.perm)

    def to_json(self) -> dict:
        return {"dims": list(self.dims)}

    @classmethod
    def from_json(cls, obj) -> "Rectangle":
        if isinstance(obj, dict):
            obj = obj["dims"]
        return normalize(obj)


def normalize(raw_dims: Sequence[float] | Rectangle) -> Rectangle:
    """Validate and sort side lengths, remembering where each one came from."""
    if isinstance(raw_dims, Rectangle):
        return raw_dims
    vals = []
    for i, d in enumerate(raw_dims):
        try:
            x = float(d)
        except (TypeError, ValueError):
            raise ValidationError(f"side {i} is not a number: {d!r}", index=i) from None
        if not math.isfinite(x) or x <= 0:
            raise ValidationError(f"side {i} must be positive and finite, got {d!r}", index=i)
        vals.append(x)
    if not vals:
        raise ValidationError("rectangle needs at least one side")
    order = sorted(range(len(vals)), key=lambda i: (vals[i], i))
    return Rectangle(tuple(vals[i] for i in order), tuple(order))


def log_prefix_volume(R: Rectangle, l: int) -> float:
    """Natural log of R_1 * ... * R_l (0 for the empty product)."""
    if not 0 <= l <= R.n:
        raise IndexError(f"prefix length {l} outside [0, {R.n}]")
    return math.fsum(math.log(d) for d in R.dims[:l])


def log_range_volume(R: Rectangle, lo: int, hi: int) -> float:
    """Natural log of R_{lo+1} * ... * R_hi (1-based, empty when lo >= hi)."""
    return math.fsum(math.log(d) for d in R.dims[lo:hi])


def check_same_n(S: Rectangle, R: Rectangle) -> None:
    if S.n != R.n:
        raise DimensionError(f"dimension mismatch: {S.n} vs {R.n}")


def quotients(S: Rectangle, R: Rectangle) -> list[float]:
    check_same_n(S, R)
    return [s / r for s, r in zip(S.dims, R.dims)]


def parse_dims(text: str) -> Rectangle:
    """Parse a comma separated list like ``"1,2.5,3"``."""
    parts = [p for p in text.replace(" ", "").split(",") if p]
    return normalize(parts)
