"""Upper-bound shape of the isoperimetric profile of a rectangle, and its witnesses.

For 1 <= k <= n-1 and a relative k-cycle volume V the bound is
C R_1..R_j rho^(k-j+1) where (j, rho) solve V = c R_1..R_j rho^(k-j) with
R_j <= rho <= R_{j+1} (R_0 = 0), as long as V <= c R_1..R_k; beyond that it is
C R_{k+1} V. The constants c and C are inputs: this computes the formula's
shape, not a certified continuum bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DimensionError, DomainError
from .rect import Rectangle, normalize

TIE = 1e-12


@dataclass(frozen=True)
class IsoProfilePoint:
    V: float
    j: int
    rho: float
    bound: float
    regime: str  # "small" or "large"

    def to_row(self) -> list:
        return [self.V, self.j, self.rho, self.bound, self.regime]


@dataclass(frozen=True)
class Witness:
    kind: str
    volume: float
    filling: float
    description: str


@dataclass(frozen=True)
class WitnessDescription:
    sphere: Witness | None
    multiplicity: Witness | None


def _prefix(R: Rectangle) -> list[float]:
    out = [0.0]
    for d in R.dims:
        out.append(out[-1] + math.log(d))
    return out


def _check(R: Rectangle, k: int) -> None:
    if not 1 <= k <= R.n - 1:
        raise DimensionError(f"k={k} must lie in [1, {R.n - 1}] (R_(k+1) is needed)")


def bound_at(R, k: int, j: int, rho: float, C: float = 1.0) -> float:
    """C R_1..R_j rho^(k-j+1) evaluated in the log domain."""
    R = normalize(R)
    return C * math.exp(_prefix(R)[j] + (k - j + 1) * math.log(rho))


def profile_upper(R, k: int, V: float, c: float = 1.0, C: float = 1.0) -> IsoProfilePoint:
    R = normalize(R)
    _check(R, k)
    if not (V > 0 and math.isfinite(V)):
        raise DomainError(f"V must be positive, got {V!r}")
    P = _prefix(R)
    logV, logc = math.log(V), math.log(c)
    tol = TIE * max(1.0, abs(logV))
    if logV > logc + P[k] + tol:
        return IsoProfilePoint(V, k, R.dims[k], C * R.dims[k] * V, "large")
    for j in range(k):
        upper = logc + P[j] + (k - j) * math.log(R.dims[j])  # rho = R_{j+1}
        if logV <= upper + tol or j == k - 1:
            log_rho = (logV - logc - P[j]) / (k - j)
            rho = math.exp(log_rho)
            return IsoProfilePoint(V, j, rho, C * math.exp(P[j] + (k - j + 1) * log_rho), "small")
    raise AssertionError("unreachable")


def profile_sweep(R, k: int, volumes, c: float = 1.0, C: float = 1.0) -> list[IsoProfilePoint]:
    return [profile_upper(R, k, V, c, C) for V in volumes]


def sphere_area(m: int, radius: float = 1.0) -> float:
    """Area of the round m-sphere of the given radius."""
    return 2 * math.pi ** ((m + 1) / 2) / math.gamma((m + 1) / 2) * radius**m


def ball_volume(m: int, radius: float = 1.0) -> float:
    """Volume of the m-ball of the given radius."""
    return math.pi ** (m / 2) / math.gamma(m / 2 + 1) * radius**m


def witness_cycles(R, k: int, j: int | None = None, rho: float | None = None, M: int | None = None) -> WitnessDescription:
    """The two families of cycles showing the profile shape is attained up to constants.

    Slab x sphere: [0,R_1] x .. x [0,R_j] x S^(k-j)(rho), filled by the slab x ball.
    Multiplicity slab: M copies of [0,R_1] x .. x [0,R_k] x {centre}, filled by sweeping
    across axis k+1.
    """
    R = normalize(R)
    _check(R, k)
    sphere = multi = None
    if j is not None:
        if not 0 <= j <= k - 1:
            raise DomainError(f"j={j} outside [0, {k - 1}]")
        lo = R.dims[j - 1] if j > 0 else 0.0
        hi = R.dims[j] / 10
        if rho is None or not (lo <= rho <= hi):
            raise DomainError(f"rho must lie in [{lo}, {hi}] for the slab x sphere witness")
        slab = math.prod(R.dims[:j])
        m = k - j
        sphere = Witness(
            "slab_x_sphere",
            slab * sphere_area(m, rho),
            slab * ball_volume(m + 1, rho),
            f"[0,R_1]x..x[0,R_{j}] x S^{m}({rho:g})",
        )
    if M is not None:
        if int(M) != M or M < 1:
            raise DomainError("multiplicity M must be a positive integer")
        V = M * math.prod(R.dims[:k])
        multi = Witness("multiplicity_slab", V, R.dims[k] * V, f"{int(M)} x [0,R_1]x..x[0,R_{k}] x centre")
    return WitnessDescription(sphere, multi)


def profile_special_case(R, p: int, j: int, V: float, c: float = 1.0, C: float = 1.0) -> float:
    """C R_j V for small cycles with V <= c R_1..R_j R_j^(p-j), j >= 1."""
    R = normalize(R)
    _check(R, p)
    if not 1 <= j <= p:
        raise DomainError(f"j={j} outside [1, {p}]")
    P = _prefix(R)
    cap = math.log(c) + P[j] + (p - j) * math.log(R.dims[j - 1])
    if not (V > 0 and math.log(V) <= cap + TIE * max(1.0, abs(cap))):
        raise DomainError(f"V={V} exceeds c R_1..R_j R_j^(p-j) = {math.exp(cap)}")
    out = C * R.dims[j - 1] * V
    pt = profile_upper(R, p, V, c, C)
    assert pt.bound <= out / c * (1 + 1e-12), "special case should dominate the profile bound"
    return out
