"""End-to-end construction S -> T -> R and numerical certification."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from ..dilation import batch_k_expansion
from ..errors import (
    CertificationError,
    ConstructionError,
    DimensionError,
    FoldInfeasibleError,
    InfeasibleError,
    InvariantViolation,
)
from ..feasibility import check_inequalities, pair_sides
from ..rect import Rectangle, check_same_n, normalize
from .balance import balance_linear
from .fold import fold_embed
from .stages import DiagonalScale, Fold2D, PiecewiseMap, differential, evaluate, pull_back

PASS_TOL = 1e-9
SEAM_OFFSET = 1e-7
DEFAULT_SAMPLES = 10_000
MAX_SAMPLES = 2_000_000


@dataclass(frozen=True)
class CertificationReport:
    passed: bool
    min_expansion: float
    worst_point: tuple
    n_samples: int
    contained: bool
    injective: bool
    stage_minima: list = field(default_factory=list)

    @property
    def stage_bound(self) -> float:
        """Product of per-stage minima: a lower bound for the composite minimum."""
        return math.prod(self.stage_minima) if self.stage_minima else 1.0

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "min_expansion": self.min_expansion,
            "worst_point": list(self.worst_point),
            "n_samples": self.n_samples,
            "contained": self.contained,
            "injective": self.injective,
            "stage_minima": list(self.stage_minima),
        }


def effective_margin(S, R, k: int, margin: float = 16.0) -> float:
    """Largest inflation mu <= margin with the constant-1 system still holding for mu * S.

    Scaling S by mu raises the log right-hand side of pair (j, l) by
    mu-exponent k (l - j) / (k - j).
    """
    S, R = normalize(S), normalize(R)
    mu_log = math.log(margin)
    for j in range(k):
        for l in range(k, S.n + 1):
            lhs, rhs = pair_sides(S, R, k, j, l)
            mu_log = min(mu_log, (lhs - rhs) * (k - j) / (k * (l - j)))
    return math.exp(max(mu_log, 0.0))


def _grid(box, s):
    axes = [np.linspace(0.0, d, s) for d in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=1)


def _samples_per_axis(n, total=DEFAULT_SAMPLES):
    return max(2, math.ceil(total ** (1.0 / n) - 1e-9))


def sample_points(m: PiecewiseMap, samples_per_axis: int | None = None, seam_offset: float = SEAM_OFFSET):
    """Deterministic domain grid plus points just either side of every fold seam."""
    n = m.n
    s = samples_per_axis or _samples_per_axis(n)
    if s ** n > MAX_SAMPLES:
        raise ValueError(f"{s}^{n} samples exceeds the cap of {MAX_SAMPLES}")
    pts = [_grid(m.domain.dims, s)]
    hi = np.asarray(m.domain.dims)
    for idx, st in enumerate(m.stages):
        if not isinstance(st, Fold2D):
            continue
        box = m.boxes[idx]
        for axis, c in st.seams(box):
            sub = list(box)
            sub[axis] = 1.0
            base = _grid(sub, s) if n > 1 else np.zeros((1, 1))
            base = base[base[:, axis] == 0.0] if n > 1 else base
            for sign in (-1.0, 1.0):
                Z = base.copy()
                Z[:, axis] = c + sign * seam_offset * box[axis]
                X = pull_back(m, idx, Z)
                X = X[~np.isnan(X).any(axis=1)]
                pts.append(np.clip(X, 0.0, hi))
    X = np.unique(np.concatenate(pts), axis=0)
    return X


def verify_k_expanding(m: PiecewiseMap, k: int, samples_per_axis: int | None = None) -> CertificationReport:
    """Sampled certificate that m is a k-expanding embedding."""
    if not 1 <= k <= m.n:
        raise DimensionError(f"k={k} outside [1, {m.n}]")
    X = sample_points(m, samples_per_axis)
    J = differential(m, X)
    e = batch_k_expansion(J, k)
    worst = int(np.argmin(e))
    min_e = float(e[worst])

    Y = evaluate(m, X)
    hi = np.asarray(m.codomain.dims)
    contained = bool(np.all(Y >= -1e-12 * hi) and np.all(Y <= hi * (1 + 1e-12)))

    injective = True
    if len(X) > 1:
        d, _ = cKDTree(Y).query(Y, k=2)
        injective = bool(np.min(d[:, 1]) > 0.0)
        back = pull_back(m, len(m.stages), Y)
        scale = float(np.max(m.domain.dims))
        injective = injective and bool(np.all(np.abs(back - X) <= 1e-8 * scale))

    minima = []
    Z = X
    for st in m.stages:
        minima.append(float(np.min(batch_k_expansion(st.jacobian(Z), k))))
        Z = st.apply(Z)

    passed = min_e >= 1 - PASS_TOL and contained and injective
    return CertificationReport(passed, min_e, tuple(float(v) for v in X[worst]), len(X), contained, injective, minima)


def construct_embedding(S, R, k: int, margin: float = 16.0, samples_per_axis: int | None = None,
                        certify: bool = True) -> PiecewiseMap:
    """Fold S into a balanced rectangle T, then undo the balancing T -> R."""
    S, R = normalize(S), normalize(R)
    check_same_n(S, R)
    if not 1 <= k <= S.n:
        raise DimensionError(f"k={k} outside [1, {S.n}]")
    if margin < 1:
        raise ValueError("margin must be >= 1")
    if all(s <= r for s, r in zip(S.dims, R.dims)):
        return PiecewiseMap(S, R, ())
    report = check_inequalities(S, R, k, 1.0)
    if not report.passed:
        pairs = [(v.j, v.l) for v in report.violations]
        raise InfeasibleError(f"no k-expanding embedding certified: inequalities fail at (j, l) = {pairs}",
                              report.violations)
    mu = effective_margin(S, R, k, margin)
    try:
        bal = balance_linear(R, S.scaled(mu), k)
    except (InfeasibleError, InvariantViolation) as exc:
        raise ConstructionError(f"balance stage failed: {exc}") from exc
    try:
        folds = fold_embed(S, bal.T_axes)
    except (ConstructionError, FoldInfeasibleError) as exc:
        raise ConstructionError(f"fold stage failed (inflation {mu:.6g}): {exc}") from exc
    unbalance = [DiagonalScale(tuple(1.0 / f for f in st.factors)) for st in reversed(bal.stages)]
    m = PiecewiseMap(S, R, tuple(folds) + tuple(unbalance))
    if certify:
        cert = verify_k_expanding(m, k, samples_per_axis)
        if not cert.passed:
            raise CertificationError(
                f"certification failed: min expansion {cert.min_expansion:.12g} at {cert.worst_point}", cert
            )
    return m
