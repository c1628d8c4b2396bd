"""Planning pairwise folds and the greedy multi-axis fold schedule."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import ConstructionError, FoldInfeasibleError, ValidationError
from .stages import Fold2D, PermuteAxes

TURN_RATIO = 1.0 / 16.0  # inner turn radius as a fraction of the strip width
FIT_RTOL = 1e-12


@dataclass(frozen=True)
class FoldPlan:
    strip_count: int
    straight_length: float
    used_a: float
    used_b: float
    full: bool


def plan_fold(s_a, s_b, t_a, t_b, p_a=1.0, p_b=1.0, turn_ratio=TURN_RATIO):
    """Lay out an (s_a * p_a) x (s_b * p_b) strip in a t_a-wide box.

    Returns the fewest-column layout whose height fits t_b (``full=True``),
    otherwise the layout using every column that fits across (``full=False``,
    height above t_b). Returns None when not even two columns fit across or the
    turns alone exceed t_b.
    """
    w, ell = p_a * s_a, p_b * s_b
    if w <= t_a * (1 + FIT_RTOL) and ell <= t_b * (1 + FIT_RTOL):
        return FoldPlan(1, ell, w, ell, True)
    r = turn_ratio * w
    P, e, turn = w + 2 * r, r + w, math.pi * r
    if t_a < P + w:
        return None
    n_max = int(math.floor((t_a - w) / P * (1 + FIT_RTOL))) + 1
    h_max = t_b - 2 * e
    full = False
    if h_max > 0:
        need = max(2, math.ceil((ell + turn) / (h_max + turn) * (1 - FIT_RTOL)))
        if need <= n_max:
            n_cols, full = need, True
    if not full:
        n_cols = n_max
    h = (ell - (n_cols - 1) * turn) / n_cols
    if h <= 0:
        return None
    used_a = (n_cols - 1) * P + w
    used_b = h + 2 * e
    if full and used_b > t_b * (1 + FIT_RTOL):
        full = False
    return FoldPlan(n_cols, h, used_a, used_b, full)


def _stage(axis_a, axis_b, s_a, s_b, plan, p_a=1.0, p_b=1.0, target=None):
    w = p_a * s_a
    t_a, t_b = target if target else (plan.used_a, plan.used_b)
    return Fold2D(
        axis_a=axis_a,
        axis_b=axis_b,
        strip_width=w,
        inner_turn_radius=TURN_RATIO * w,
        strip_count=plan.strip_count,
        prescale_a=p_a,
        prescale_b=p_b,
        straight_length=plan.straight_length,
        source_a=s_a,
        source_b=s_b,
        target_a=max(t_a, plan.used_a),
        target_b=max(t_b, plan.used_b),
    )


def make_fold2d(s_a, s_b, t_a, t_b, axis_a=0, axis_b=1):
    """One fold of [0,s_a] x [0,s_b] into [0,t_a] x [0,t_b] under the 3 / 9 slack conditions."""
    s_a, s_b, t_a, t_b = (float(v) for v in (s_a, s_b, t_a, t_b))
    if min(s_a, s_b, t_a, t_b) <= 0:
        raise ValidationError("fold extents must be positive")
    if s_a <= t_a and s_b <= t_b:
        plan = FoldPlan(1, s_b, s_a, s_b, True)
        return _stage(axis_a, axis_b, s_a, s_b, plan, target=(t_a, t_b))
    if not t_a > 3 * s_a:
        raise FoldInfeasibleError(f"need t_a > 3 s_a, got {t_a} <= {3 * s_a}")
    if not t_a * t_b > 9 * s_a * s_b:
        raise FoldInfeasibleError(f"need t_a t_b > 9 s_a s_b, got {t_a * t_b} <= {9 * s_a * s_b}")
    plan = plan_fold(s_a, s_b, t_a, t_b)
    if plan is None or not plan.full:
        # reachable only when t_b is too short for a single U-turn of the strip
        raise FoldInfeasibleError(f"box height {t_b} cannot hold the U-turns of a width-{s_a} strip")
    return _stage(axis_a, axis_b, s_a, s_b, plan, target=(t_a, t_b))


def fold_embed(S, T, max_folds=64):
    """Greedy schedule of pairwise folds taking box S (per-axis extents) inside box T.

    S's sides are first matched to T's by rank (a permutation stage when that
    reorders them); then axis i must end up within T_i. Each step folds the
    axis with the largest overshoot B_b / T_b into the axis with the most
    slack T_a / B_a. Folds are full when the layout fits, otherwise partial
    (all columns that fit across, progress required along b).
    """
    B = [float(v) for v in (S.dims if hasattr(S, "dims") else S)]
    Tt = [float(v) for v in (T.dims if hasattr(T, "dims") else T)]
    if len(B) != len(Tt):
        raise ValidationError("fold_embed dimension mismatch")
    n = len(B)
    stages = []
    # pair sides by rank first: the k-th shortest side of S goes to the k-th shortest side of T
    s_order = sorted(range(n), key=lambda i: (B[i], i))
    t_order = sorted(range(n), key=lambda i: (Tt[i], i))
    perm = [0] * n
    for r in range(n):
        perm[t_order[r]] = s_order[r]
    if perm != list(range(n)) and any(B[perm[i]] != B[i] for i in range(n)):
        stages.append(PermuteAxes(tuple(perm)))
        B = [B[perm[i]] for i in range(n)]
    for _ in range(max_folds):
        over = [i for i in range(n) if B[i] > Tt[i] * (1 + FIT_RTOL)]
        if not over:
            return stages
        b = max(over, key=lambda i: (B[i] / Tt[i], i))
        cands = sorted((i for i in range(n) if i != b), key=lambda i: (Tt[i] / B[i], i), reverse=True)
        done = False
        for a in cands:
            plan = plan_fold(B[a], B[b], Tt[a], Tt[b])
            if plan is None or plan.strip_count < 2:
                continue
            if not plan.full and plan.used_b >= B[b]:
                continue
            st = _stage(a, b, B[a], B[b], plan)
            stages.append(st)
            B[a], B[b] = plan.used_a, plan.used_b
            done = True
            break
        if not done:
            a = cands[0] if cands else b
            raise ConstructionError(
                f"no fold makes progress on axis {b} (best partner axis {a}): "
                f"box {B[b]:.6g} vs target {Tt[b]:.6g}"
            )
    raise ConstructionError(f"fold schedule exceeded {max_folds} folds")
