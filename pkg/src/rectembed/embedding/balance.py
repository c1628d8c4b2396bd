"""Balancing a target rectangle by a k-contracting diagonal map.

Given R and S satisfying the constant-1 inequality system, find diagonal
stages R -> R(1) -> ... -> T whose product has k-dilation 1 and with
T_1..T_p >= S_1..S_p for every p. Stage q scales axes 1..q (relative to the
current recursion offset) up by lambda and the following axes down by
lambda^(q/(k-q)); the run stops once the first m = max(b, q) sides carry the
same volume as S's, then recurses on the remaining axes with k - m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import InfeasibleError, InvariantViolation
from ..feasibility import check_inequalities
from ..rect import Rectangle, check_same_n, normalize
from .stages import DiagonalScale

TOL = 1e-12


@dataclass(frozen=True)
class BalanceResult:
    T: Rectangle
    stages: list = field(default_factory=list)
    lambdas: list = field(default_factory=list)
    c: int = 0
    T_axes: tuple = ()
    offsets: list = field(default_factory=list)


def _tol(*vals):
    return TOL * max(1.0, *(abs(v) for v in vals))


def _first_excess(x, s):
    px = ps = 0.0
    for p in range(len(x)):
        px += x[p]
        ps += s[p]
        if ps > px + _tol(px, ps):
            return p + 1
    return None


def _run(x, s, k, offset, out):
    """Balance log sides ``x`` against ``s``; append (offset, q, log_lambda) to ``out``."""
    b = _first_excess(x, s)
    if b is None:
        return x
    if b >= k:
        raise InvariantViolation(f"first excess index b={b} is not below k={k} (offset {offset})")
    q = 1
    while True:
        if q >= k:
            raise InvariantViolation(f"balancing did not stop with c <= k-1 (k={k}, offset {offset})")
        m = max(b, q)
        log_max = (x[q] - x[q - 1]) * (k - q) / k
        log_f = math.fsum(s[:m]) - math.fsum(x[:m])
        log_t = log_f * (k - q) / (q * (k - m))
        stop = log_t <= log_max + _tol(log_t, log_max)
        lam = max(min(log_t, log_max) if stop else log_max, 0.0)
        shrink = lam * q / (k - q)
        x = [xi + lam for xi in x[:q]] + [xi - shrink for xi in x[q:]]
        out.append((offset, q, k, lam))
        if stop:
            break
        q += 1
    m = max(b, q)
    return x[:m] + _run(x[m:], s[m:], k - m, offset + m, out)


def balance_linear(R, S, k: int) -> BalanceResult:
    """Diagonal k-contracting balancing of R against S.

    Raises InfeasibleError (listing the failing (j, l)) when the constant-1
    system does not hold.
    """
    R, S = normalize(R), normalize(S)
    check_same_n(S, R)
    n = R.n
    report = check_inequalities(S, R, k, 1.0)
    if not report.passed:
        pairs = [(v.j, v.l) for v in report.violations]
        raise InfeasibleError(f"inequality system fails at (j, l) = {pairs}", report.violations)
    raw = []
    _run(list(R.logs), list(S.logs), k, 0, raw)

    stages, lambdas, offsets = [], [], []
    T = list(R.dims)
    for off, q, kk, lam in raw:
        up = math.exp(lam)
        down = math.exp(-lam * q / (kk - q))
        f = [1.0] * off + [up] * q + [down] * (n - off - q)
        stages.append(DiagonalScale(tuple(f)))
        lambdas.append(up)
        offsets.append(off)
        T = [t * fi for t, fi in zip(T, f)]

    # postconditions, checked on the composed (non-log) values
    pT = pS = 0.0
    for p in range(n):
        pT += math.log(T[p])
        pS += math.log(S.dims[p])
        if pT < pS - 1e-12 * max(1.0, abs(pS)) - 1e-12:
            raise InvariantViolation(f"balanced target fails partial product p={p + 1}")
    before = math.fsum(math.log(d) for d in R.dims[:k])
    after = math.fsum(math.log(t) for t in T[:k])
    if abs(after - before) > 1e-12 * max(1.0, abs(before)):
        raise InvariantViolation("product of the first k sides changed")
    T_rect = normalize(T)
    return BalanceResult(T_rect, stages, lambdas, len(stages), tuple(T), offsets)
