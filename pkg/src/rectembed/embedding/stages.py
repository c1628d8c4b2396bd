"""Primitive map stages and their composition.

Every stage acts on an (m, n) array of points and returns images plus
Jacobians of shape (m, n, n). Boxes are per-axis extents in the stage's own
axis order; they are not re-sorted between stages.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import ClassVar, Sequence, Union

import numpy as np

from ..errors import DomainError, SeamError, ValidationError
from ..rect import Rectangle, normalize

BOX_RTOL = 1e-12


def _close(a: float, b: float, rtol: float = 1e-9) -> bool:
    return abs(a - b) <= rtol * max(abs(a), abs(b), 1e-300)


@dataclass(frozen=True)
class DiagonalScale:
    factors: tuple[float, ...]
    kind: ClassVar[str] = "scale"

    def __post_init__(self):
        f = tuple(float(x) for x in self.factors)
        if any(not (x > 0 and math.isfinite(x)) for x in f):
            raise ValidationError("scale factors must be positive and finite")
        object.__setattr__(self, "factors", f)

    def output_box(self, box):
        self._check_n(box)
        return tuple(b * f for b, f in zip(box, self.factors))

    def _check_n(self, box):
        if len(box) != len(self.factors):
            raise ValidationError("scale stage dimension mismatch")

    def apply(self, X):
        return X * np.asarray(self.factors)

    def jacobian(self, X, side=0):
        return np.broadcast_to(np.diag(self.factors), (X.shape[0],) + (len(self.factors),) * 2).copy()

    def inverse(self, Y):
        return Y / np.asarray(self.factors)

    def seams(self, box):
        return []

    def to_json(self):
        return {"type": self.kind, "factors": list(self.factors)}


@dataclass(frozen=True)
class PermuteAxes:
    """Output axis i carries input axis ``perm[i]``."""

    perm: tuple[int, ...]
    kind: ClassVar[str] = "permute"

    def __post_init__(self):
        p = tuple(int(i) for i in self.perm)
        if sorted(p) != list(range(len(p))):
            raise ValidationError(f"not a permutation: {p}")
        object.__setattr__(self, "perm", p)

    def output_box(self, box):
        if len(box) != len(self.perm):
            raise ValidationError("permute stage dimension mismatch")
        return tuple(box[i] for i in self.perm)

    def apply(self, X):
        return X[:, list(self.perm)]

    def jacobian(self, X, side=0):
        n = len(self.perm)
        P = np.zeros((n, n))
        P[np.arange(n), list(self.perm)] = 1.0
        return np.broadcast_to(P, (X.shape[0], n, n)).copy()

    def inverse(self, Y):
        X = np.empty_like(Y)
        X[:, list(self.perm)] = Y
        return X

    def seams(self, box):
        return []

    def to_json(self):
        return {"type": self.kind, "perm": list(self.perm)}


@dataclass(frozen=True)
class Translate:
    offset: tuple[float, ...]
    kind: ClassVar[str] = "translate"

    def __post_init__(self):
        o = tuple(float(x) for x in self.offset)
        if any(not math.isfinite(x) or x < 0 for x in o):
            raise ValidationError("translation offsets must be finite and non-negative")
        object.__setattr__(self, "offset", o)

    def output_box(self, box):
        if len(box) != len(self.offset):
            raise ValidationError("translate stage dimension mismatch")
        return tuple(b + o for b, o in zip(box, self.offset))

    def apply(self, X):
        return X + np.asarray(self.offset)

    def jacobian(self, X, side=0):
        n = len(self.offset)
        return np.broadcast_to(np.eye(n), (X.shape[0], n, n)).copy()

    def inverse(self, Y):
        return Y - np.asarray(self.offset)

    def seams(self, box):
        return []

    def to_json(self):
        return {"type": self.kind, "offset": list(self.offset)}


@dataclass(frozen=True)
class Fold2D:
    """Snake a strip into a box in the (axis_a, axis_b) plane; identity elsewhere.

    After prescaling, input axis a is the strip's cross coordinate u in
    [0, strip_width] and input axis b its length coordinate v. The strip runs
    as ``strip_count`` straight columns parallel to axis b, stacked along axis a
    with gaps of 2 * inner_turn_radius, joined by half-annulus U-turns whose
    arcs are parametrized by inner-arc length. Radial stretch is 1 and
    tangential stretch is rho / inner_turn_radius >= 1, so the stage never
    contracts length when both prescale factors are >= 1.
    """

    axis_a: int
    axis_b: int
    strip_width: float
    inner_turn_radius: float
    strip_count: int
    prescale_a: float
    prescale_b: float
    straight_length: float
    source_a: float
    source_b: float
    target_a: float
    target_b: float
    kind: ClassVar[str] = "fold2d"

    def __post_init__(self):
        if self.axis_a == self.axis_b:
            raise ValidationError("fold axes must differ")
        for name in ("strip_width", "inner_turn_radius", "prescale_a", "prescale_b", "straight_length",
                     "source_a", "source_b", "target_a", "target_b"):
            v = float(getattr(self, name))
            if not (v > 0 and math.isfinite(v)):
                raise ValidationError(f"fold field {name} must be positive, got {v!r}")
            object.__setattr__(self, name, v)
        if int(self.strip_count) < 1:
            raise ValidationError("strip_count must be >= 1")
        object.__setattr__(self, "strip_count", int(self.strip_count))
        if not _close(self.strip_width, self.prescale_a * self.source_a):
            raise ValidationError("strip_width must equal prescale_a * source_a")
        used_a, used_b = self.used_extents
        if used_a > self.target_a * (1 + BOX_RTOL) or used_b > self.target_b * (1 + BOX_RTOL):
            raise ValidationError(
                f"fold image ({used_a:.6g}, {used_b:.6g}) exceeds target ({self.target_a:.6g}, {self.target_b:.6g})"
            )
        if self.length > self.capacity * (1 + 1e-12):
            raise ValidationError("strip length exceeds the layout capacity")

    # geometry helpers
    @property
    def pitch(self):
        return self.strip_width + 2 * self.inner_turn_radius

    @property
    def edge(self):
        return self.inner_turn_radius + self.strip_width

    @property
    def turn_length(self):
        return math.pi * self.inner_turn_radius

    @property
    def cycle(self):
        return self.straight_length + self.turn_length

    @property
    def length(self):
        return self.prescale_b * self.source_b

    @property
    def capacity(self):
        N = self.strip_count
        if N == 1:
            return self.straight_length
        return N * self.straight_length + (N - 1) * self.turn_length

    @property
    def used_extents(self):
        N = self.strip_count
        if N == 1:
            return self.strip_width, self.straight_length
        return (N - 1) * self.pitch + self.strip_width, self.straight_length + 2 * self.edge

    def output_box(self, box):
        box = list(box)
        if not (_close(box[self.axis_a], self.source_a) and _close(box[self.axis_b], self.source_b)):
            raise ValidationError(
                f"fold expects input extents ({self.source_a}, {self.source_b}) on axes "
                f"({self.axis_a}, {self.axis_b}), got ({box[self.axis_a]}, {box[self.axis_b]})"
            )
        box[self.axis_a] = self.target_a
        box[self.axis_b] = self.target_b
        return tuple(box)

    def _segments(self, v, side=0):
        """Column index and offset: returns (i, s, in_turn)."""
        N, cyc, h = self.strip_count, self.cycle, self.straight_length
        if N == 1:
            return np.zeros(v.shape, dtype=int), v, np.zeros(v.shape, dtype=bool)
        i = np.floor(v / cyc).astype(int)
        i = np.clip(i, 0, N - 1)
        s = v - i * cyc
        in_turn = (s > h) & (i < N - 1)
        if side:
            # at a seam, pick the piece on the requested side
            at_start = np.isclose(s, 0.0, atol=1e-15 * cyc) & (i > 0)
            at_h = np.isclose(s, h, atol=1e-15 * cyc) & (i < N - 1)
            if side < 0:
                i = np.where(at_start, i - 1, i)
                s = np.where(at_start, cyc, s)
                in_turn = np.where(at_start, True, in_turn)
                in_turn = np.where(at_h, False, in_turn)
            else:
                in_turn = np.where(at_h, True, in_turn)
        return i, s, in_turn

    def on_seam(self, X, atol=1e-13):
        v = X[:, self.axis_b] * self.prescale_b
        if self.strip_count == 1:
            return np.zeros(len(v), dtype=bool)
        cyc, h = self.cycle, self.straight_length
        i = np.clip(np.round(v / cyc), 0, self.strip_count - 1)
        near_start = np.abs(v - i * cyc) <= atol * cyc
        j = np.clip(np.round((v - h) / cyc), 0, self.strip_count - 2)
        near_h = np.abs(v - (j * cyc + h)) <= atol * cyc
        return (near_start & (v > 0) & (v < self.length)) | near_h

    def _local(self, X, side=0):
        u = X[:, self.axis_a] * self.prescale_a
        v = X[:, self.axis_b] * self.prescale_b
        i, s, in_turn = self._segments(v, side)
        return u, v, i, s, in_turn

    def apply(self, X, side=0):
        X = np.asarray(X, dtype=float)
        u, v, i, s, in_turn = self._local(X, side)
        w, r, P, e, h = self.strip_width, self.inner_turn_radius, self.pitch, self.edge, self.straight_length
        even = (i % 2) == 0
        if self.strip_count == 1:
            A, B = u, v
        else:
            A = np.where(even, i * P + u, i * P + w - u)
            B = np.where(even, e + s, e + h - s)
            sig = s - h
            ac = i * P + w + r
            rho = np.where(even, r + w - u, r + u)
            th = np.where(even, np.pi - sig / r, np.pi + sig / r)
            base = np.where(even, e + h, e)
            A = np.where(in_turn, ac + rho * np.cos(th), A)
            B = np.where(in_turn, base + rho * np.sin(th), B)
        Y = X.copy()
        Y[:, self.axis_a] = A
        Y[:, self.axis_b] = B
        return Y

    def jacobian(self, X, side=0):
        X = np.asarray(X, dtype=float)
        m, n = X.shape
        u, v, i, s, in_turn = self._local(X, side)
        w, r, h = self.strip_width, self.inner_turn_radius, self.straight_length
        pa, pb = self.prescale_a, self.prescale_b
        J = np.broadcast_to(np.eye(n), (m, n, n)).copy()
        a, b = self.axis_a, self.axis_b
        if self.strip_count == 1:
            J[:, a, a], J[:, b, b] = pa, pb
            return J
        even = (i % 2) == 0
        sgn = np.where(even, 1.0, -1.0)
        daa, dba = sgn * pa, np.zeros(m)
        dab, dbb = np.zeros(m), sgn * pb
        sig = s - h
        rho = np.where(even, r + w - u, r + u)
        th = np.where(even, np.pi - sig / r, np.pi + sig / r)
        c, sn = np.cos(th), np.sin(th)
        # d/du: even turns shrink rho, odd turns grow it; d/dsigma: tangential at speed rho / r
        t_daa = np.where(even, -c, c) * pa
        t_dba = np.where(even, -sn, sn) * pa
        t_dab = np.where(even, rho * sn / r, -rho * sn / r) * pb
        t_dbb = np.where(even, -rho * c / r, rho * c / r) * pb
        J[:, a, a] = np.where(in_turn, t_daa, daa)
        J[:, b, a] = np.where(in_turn, t_dba, dba)
        J[:, a, b] = np.where(in_turn, t_dab, dab)
        J[:, b, b] = np.where(in_turn, t_dbb, dbb)
        return J

    def inverse(self, Y, tol=1e-12):
        """Preimage of each point, NaN rows for points outside the image."""
        Y = np.asarray(Y, dtype=float)
        A, B = Y[:, self.axis_a], Y[:, self.axis_b]
        w, r, P, e, h, N = self.strip_width, self.inner_turn_radius, self.pitch, self.edge, self.straight_length, self.strip_count
        cyc, ell = self.cycle, self.length
        scale = max(self.target_a, self.target_b)
        eps = tol * scale
        u = np.full(A.shape, np.nan)
        v = np.full(A.shape, np.nan)
        if N == 1:
            ok = (A >= -eps) & (A <= w + eps) & (B >= -eps) & (B <= ell + eps)
            u = np.where(ok, A, np.nan)
            v = np.where(ok, B, np.nan)
        else:
            # straight columns; the shift by r keeps edge points away from floor() boundaries
            i = np.floor((A + r) / P).astype(int)
            loc = A - i * P
            straight = (B >= e - eps) & (B <= e + h + eps) & (i >= 0) & (i < N) & (loc >= -eps) & (loc <= w + eps)
            ev = (i % 2) == 0
            us = np.where(ev, loc, w - loc)
            ss = np.where(ev, B - e, e + h - B)
            u = np.where(straight, us, u)
            v = np.where(straight, i * cyc + ss, v)
            # top turns after even columns
            it = 2 * np.floor((A + r) / (2 * P)).astype(int)
            dx, dy = A - (it * P + w + r), B - (e + h)
            rho = np.hypot(dx, dy)
            th = np.arctan2(dy, dx)
            top = (~straight) & (B > e + h) & (it <= N - 2) & (it >= 0) & (rho >= r - eps) & (rho <= r + w + eps)
            u = np.where(top, r + w - rho, u)
            v = np.where(top, it * cyc + h + (np.pi - th) * r, v)
            # bottom turns after odd columns
            ib = 2 * np.floor((A - P + r) / (2 * P)).astype(int) + 1
            dx, dy = A - (ib * P + w + r), B - e
            rho = np.hypot(dx, dy)
            th = np.arctan2(dy, dx) + 2 * np.pi
            bot = (~straight) & (B < e) & (ib <= N - 2) & (ib >= 1) & (rho >= r - eps) & (rho <= r + w + eps)
            u = np.where(bot, rho - r, u)
            v = np.where(bot, ib * cyc + h + (th - np.pi) * r, v)
        bad = ~((v >= -eps) & (v <= ell + eps * 10) & (u >= -eps) & (u <= w + eps))
        X = Y.copy()
        X[:, self.axis_a] = np.clip(u, 0, w) / self.prescale_a
        X[:, self.axis_b] = np.clip(v, 0, ell) / self.prescale_b
        X[bad | np.isnan(u) | np.isnan(v)] = np.nan
        return X

    def seams(self, box):
        """Hyperplanes (axis, coordinate) in the stage's input coordinates."""
        if self.strip_count == 1:
            return []
        out = []
        for i in range(self.strip_count - 1):
            for v in (i * self.cycle + self.straight_length, (i + 1) * self.cycle):
                if v < self.length:
                    out.append((self.axis_b, v / self.prescale_b))
        return out

    def to_json(self):
        d = {"type": self.kind}
        for name in ("axis_a", "axis_b", "strip_width", "inner_turn_radius", "strip_count", "prescale_a",
                     "prescale_b", "straight_length", "source_a", "source_b", "target_a", "target_b"):
            d[name] = getattr(self, name)
        return d


MapStage = Union[DiagonalScale, PermuteAxes, Translate, Fold2D]

_KINDS = {cls.kind: cls for cls in (DiagonalScale, PermuteAxes, Translate, Fold2D)}


def stage_from_json(obj) -> MapStage:
    obj = dict(obj)
    cls = _KINDS.get(obj.pop("type", None))
    if cls is None:
        raise ValidationError(f"unknown stage type in {obj!r}")
    if cls is DiagonalScale:
        return DiagonalScale(tuple(obj["factors"]))
    if cls is PermuteAxes:
        return PermuteAxes(tuple(obj["perm"]))
    if cls is Translate:
        return Translate(tuple(obj["offset"]))
    return Fold2D(**obj)


@dataclass(frozen=True)
class PiecewiseMap:
    domain: Rectangle
    codomain: Rectangle
    stages: tuple = ()
    boxes: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "domain", normalize(self.domain))
        object.__setattr__(self, "codomain", normalize(self.codomain))
        object.__setattr__(self, "stages", tuple(self.stages))
        box = tuple(self.domain.dims)
        boxes = [box]
        for st in self.stages:
            box = st.output_box(box)
            boxes.append(box)
        for i, (b, c) in enumerate(zip(box, self.codomain.dims)):
            if b > c * (1 + BOX_RTOL):
                raise ValidationError(f"final box exceeds codomain on axis {i}: {b} > {c}")
        if len(box) != self.codomain.n:
            raise ValidationError("codomain dimension mismatch")
        object.__setattr__(self, "boxes", tuple(boxes))

    @property
    def n(self):
        return self.domain.n


def _points(m: PiecewiseMap, x, check=True):
    X = np.atleast_2d(np.asarray(x, dtype=float))
    if X.shape[1] != m.n:
        raise DomainError(f"points must have {m.n} coordinates")
    if check:
        hi = np.asarray(m.domain.dims)
        tol = 1e-12 * hi
        if np.any(X < -tol) or np.any(X > hi + tol):
            raise DomainError("point outside the domain box")
    return X


def evaluate(m: PiecewiseMap, x, side: int = 0):
    """Image of one point (shape (n,)) or many (shape (k, n))."""
    single = np.ndim(x) == 1
    Y = _points(m, x)
    for st in m.stages:
        Y = st.apply(Y, side) if isinstance(st, Fold2D) else st.apply(Y)
    return Y[0] if single else Y


def differential(m: PiecewiseMap, x, side: int = 0, strict: bool = False):
    """Product of stage Jacobians (chain rule). ``side`` picks one-sided pieces at seams."""
    single = np.ndim(x) == 1
    Y = _points(m, x)
    J = np.broadcast_to(np.eye(m.n), (Y.shape[0], m.n, m.n)).copy()
    for st in m.stages:
        if isinstance(st, Fold2D):
            if strict and not side and np.any(st.on_seam(Y)):
                raise SeamError("point lies on a fold seam; pass side=+1 or -1")
            Js = st.jacobian(Y, side)
            Y = st.apply(Y, side)
        else:
            Js = st.jacobian(Y)
            Y = st.apply(Y)
        J = Js @ J
    return J[0] if single else J


def pull_back(m: PiecewiseMap, stage_index: int, Z):
    """Map points given in the input coordinates of ``stages[stage_index]`` back to the domain."""
    X = np.asarray(Z, dtype=float)
    for st in reversed(m.stages[:stage_index]):
        X = st.inverse(X)
    return X


def map_to_json(m: PiecewiseMap) -> dict:
    return {
        "domain": m.domain.to_json(),
        "codomain": m.codomain.to_json(),
        "stages": [s.to_json() for s in m.stages],
    }


def map_from_json(obj) -> PiecewiseMap:
    return PiecewiseMap(
        Rectangle.from_json(obj["domain"]),
        Rectangle.from_json(obj["codomain"]),
        tuple(stage_from_json(s) for s in obj["stages"]),
    )


def save_map(m: PiecewiseMap, path) -> None:
    with open(path, "w") as fh:
        json.dump(map_to_json(m), fh, indent=1)


def load_map(path) -> PiecewiseMap:
    with open(path) as fh:
        return map_from_json(json.load(fh))
