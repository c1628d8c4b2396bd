"""Inequality systems for k-expanding embeddings and k-dilation lower bounds.

Everything is evaluated on natural logs of side-length products. The unknown
dimensional constants appear as a single ``constant`` argument (default 1),
so the functions compute the scale-free core of each inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DimensionError, DomainError, ValidationError
from .rect import Rectangle, check_same_n, normalize

SLACK = 1e-12


@dataclass(frozen=True)
class Violation:
    j: int
    l: int
    lhs_log: float
    rhs_log: float

    def to_json(self) -> dict:
        return {"j": self.j, "l": self.l, "lhs_log": self.lhs_log, "rhs_log": self.rhs_log}


@dataclass(frozen=True)
class FeasibilityReport:
    passed: bool
    violations: list[Violation] = field(default_factory=list)
    checked_pairs: int = 0

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "violations": [v.to_json() for v in self.violations],
            "checked_pairs": self.checked_pairs,
        }


@dataclass(frozen=True)
class DilationBound:
    value: float
    arg_j: int
    arg_l: int
    degree_used: int = 1
    log_value: float = 0.0

    def to_json(self) -> dict:
        return {"value": self.value, "j": self.arg_j, "l": self.arg_l, "degree": self.degree_used}


@dataclass(frozen=True)
class EmbeddingQuery:
    S: Rectangle
    R: Rectangle
    k: int
    constant: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "S", normalize(self.S))
        object.__setattr__(self, "R", normalize(self.R))
        check_same_n(self.S, self.R)
        _check_k(self.k, self.S.n)
        if not (self.constant > 0 and math.isfinite(self.constant)):
            raise ValidationError(f"constant must be positive, got {self.constant!r}")


def _check_k(k: int, n: int) -> None:
    if not 1 <= k <= n:
        raise DimensionError(f"k={k} outside [1, {n}]")


def _prefix_logs(X: Rectangle) -> list[float]:
    out = [0.0]
    for d in X.dims:
        out.append(out[-1] + math.log(d))
    return out


def _geq(lhs: float, rhs: float, strict: bool) -> bool:
    if strict:
        return lhs >= rhs
    return lhs >= rhs - SLACK * max(1.0, abs(lhs), abs(rhs))


def pair_sides(S, R, k, j, l, constant=1.0) -> tuple[float, float]:
    """Log of both sides of the (j, l) inequality.

    lhs = ((l-j)/(k-j)) log(R_1..R_j) + log(R_{j+1}..R_l), rhs likewise for S plus log(constant).
    """
    pR, pS = _prefix_logs(R), _prefix_logs(S)
    a = (l - j) / (k - j)
    lhs = a * pR[j] + (pR[l] - pR[j])
    rhs = math.log(constant) + a * pS[j] + (pS[l] - pS[j])
    return lhs, rhs


def check_inequalities(S, R, k: int, constant: float = 1.0, strict: bool = False) -> FeasibilityReport:
    """Test every inequality with 0 <= j < k <= l <= n."""
    q = EmbeddingQuery(S, R, k, constant)
    S, R, n = q.S, q.R, q.S.n
    pR, pS = _prefix_logs(R), _prefix_logs(S)
    logc = math.log(constant)
    violations = []
    checked = 0
    for j in range(k):
        for l in range(k, n + 1):
            a = (l - j) / (k - j)
            lhs = a * pR[j] + (pR[l] - pR[j])
            rhs = logc + a * pS[j] + (pS[l] - pS[j])
            checked += 1
            if not _geq(lhs, rhs, strict):
                violations.append(Violation(j, l, lhs, rhs))
    return FeasibilityReport(not violations, violations, checked)


def rewritten_pair_holds(S, R, k: int, j: int, l: int, constant: float = 1.0) -> bool:
    """The ratio form of the (j, l) inequality, valid for 0 < j < k < l.

    [(R_1..R_j)/(S_1..S_j)]^(1/(k-j)) >= c' [(S_1..S_l)/(R_1..R_l)]^(1/(l-k)),
    with c' = constant^(1/(l-k)) so that it decides exactly the same pairs.
    """
    S, R = normalize(S), normalize(R)
    check_same_n(S, R)
    if not 0 < j < k < l <= S.n:
        raise DomainError("ratio form needs 0 < j < k < l <= n")
    pR, pS = _prefix_logs(R), _prefix_logs(S)
    lhs = (pR[j] - pS[j]) / (k - j)
    rhs = math.log(constant) / (l - k) + (pS[l] - pR[l]) / (l - k)
    return _geq(lhs, rhs, strict=False)


def _argmax(cands):
    """cands: list of (log_value, j, l, degree) in preference order; ties keep the first."""
    best = max(c[0] for c in cands)
    tol = SLACK * max(1.0, abs(best))
    for c in cands:
        if c[0] >= best - tol:
            return c
    raise AssertionError("unreachable")


def _estimate1_candidates(Q_logs, n, k):
    pQ = [0.0]
    for x in Q_logs:
        pQ.append(pQ[-1] + x)
    out = []
    for j in range(k):
        for l in range(k, n + 1):
            v = pQ[j] + (pQ[l] - pQ[j]) * (k - j) / (l - j)
            out.append((v, j, l, 1))
    return out, pQ


def _bound(c) -> DilationBound:
    return DilationBound(math.exp(c[0]), c[1], c[2], c[3], c[0])


def _qlogs(S: Rectangle, R: Rectangle) -> list[float]:
    return [math.log(s) - math.log(r) for s, r in zip(S.dims, R.dims)]


def dilation_lower_bound(S, R, k: int) -> DilationBound:
    """max over (j, l) of Q_1..Q_j (Q_{j+1}..Q_l)^((k-j)/(l-j)), Q_i = S_i / R_i."""
    S, R = normalize(S), normalize(R)
    check_same_n(S, R)
    _check_k(k, S.n)
    cands, _ = _estimate1_candidates(_qlogs(S, R), S.n, k)
    return _bound(_argmax(cands))


def dilation_lower_bound_degree(S, R, k: int, D: int) -> DilationBound:
    """The degree-strengthened bound, maxed with the plain one.

    For each j < k: |D|^((k-j)/(n-j)) Q_1..Q_j (Q_{j+1}..Q_n)^((k-j)/(n-j)).
    """
    if int(D) != D or D == 0:
        raise DomainError("degree must be a nonzero integer")
    D = int(D)
    S, R = normalize(S), normalize(R)
    check_same_n(S, R)
    _check_k(k, S.n)
    n = S.n
    cands, pQ = _estimate1_candidates(_qlogs(S, R), n, k)
    logD = math.log(abs(D))
    for j in range(k):
        e = (k - j) / (n - j)
        cands.append((e * logD + pQ[j] + (pQ[n] - pQ[j]) * e, j, n, D))
    return _bound(_argmax(cands))


def ellipsoid_dilation_lower_bound(E, E_prime, k: int, D: int = 1, includes_zeroth_axis: bool = False) -> DilationBound:
    """Same bounds for ellipsoids, with Q_i the ratio of principal axes.

    When ``includes_zeroth_axis`` is set the inputs list E_0 <= ... <= E_n and
    the smallest axis is dropped, since only E_1..E_n enter the quotients.
    """
    E, E_prime = normalize(E), normalize(E_prime)
    if includes_zeroth_axis:
        E = Rectangle(E.dims[1:])
        E_prime = Rectangle(E_prime.dims[1:])
    return dilation_lower_bound_degree(E_prime, E, k, D)


@dataclass(frozen=True)
class JSelection:
    j_star: int
    L: float
    log_L: float


def select_j(S, R, k: int, delta: float = 1.0) -> JSelection:
    """Pick j minimizing [(R_1..R_j)/(S_1..S_j)]^(1/(k-j)) and solve for the block side L.

    L solves R_1..R_j L^(k-j) = delta S_1..S_j S_j^(k-j). For j = 0 the
    missing S_0 is read as S_1, which keeps L scale-covariant: L = delta^(1/k) S_1.
    """
    S, R = normalize(S), normalize(R)
    check_same_n(S, R)
    _check_k(k, S.n)
    if not delta > 0:
        raise ValidationError("delta must be positive")
    pR, pS = _prefix_logs(R), _prefix_logs(S)
    vals = [((pR[j] - pS[j]) / (k - j), j) for j in range(k)]
    best = min(v for v, _ in vals)
    tol = SLACK * max(1.0, abs(best))
    j_star = next(j for v, j in vals if v <= best + tol)
    s_j = math.log(S.dims[j_star - 1]) if j_star > 0 else math.log(S.dims[0])
    log_L = (math.log(delta) + pS[j_star] + (k - j_star) * s_j - pR[j_star]) / (k - j_star)
    return JSelection(j_star, math.exp(log_L), log_L)
