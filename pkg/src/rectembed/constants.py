"""Pinned implementation constants, measured by scripts/measure_constants.py.

These are properties of this implementation (fold layout, snap push, sweep
filling) on the documented test families, not dimensional constants of the underlying
inequality.
"""

# Per-axis inflation under which the greedy fold schedule succeeded on every
# sampled sorted instance (T_1..T_p >= C_FOLD^p S_1..S_p); measured 3, pinned 4.
C_FOLD = 4.0

# Constant used to check the numerical consistency of construct_embedding with
# the necessary conditions: every certified construction satisfies the system at this constant.
C_EMP = 1.0

# Filling volume / profile_upper(dims, p, V, 1, 1) on grids with <= 3 cells per
# axis, per-axis scales spread up to 16x, spacing ratio <= 2; measured max 22.6
# over 80k samples, pinned 32.
C_IMPL = 32.0

# Snap push on refinements of ratio <= 3: volume(z') / volume(z) measured max
# 3.86, homology volume / (L volume(z)) measured max 1.75.
C_PUSH_VOLUME = 6.0
C_PUSH_HOMOLOGY = 2.5

# Tightening threshold constant and the pinned factor for the discrete sweepout scenario.
C_TEST = 4.0
