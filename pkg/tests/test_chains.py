import json
import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rectembed.chains import (
    Cell,
    CubicalChain,
    CubicalGrid,
    boundary,
    ff_push,
    fill_relative_cycle,
    in_coarse_skeleton,
    is_relative_cycle,
    minimal_filling_oracle,
    random_chain,
    random_relative_cycle,
    rel,
    sweep,
    volume,
)
from rectembed.errors import CapacityError, DomainError, GridError

SQ = CubicalGrid.uniform((2.0, 2.0), 2)


def column():
    return CubicalChain(1, {Cell((1, 0), (1,)): 1, Cell((1, 1), (1,)): 1})


def test_segment_and_square_boundaries():
    e = CubicalChain(1, {Cell((0, 0), (0,)): 1})
    assert boundary(e) == CubicalChain(0, {Cell((1, 0), ()): 1, Cell((0, 0), ()): -1})
    sq = CubicalChain(2, {Cell((0, 0), (0, 1)): 1})
    b = boundary(sq)
    assert len(b) == 4 and set(b.coeffs.values()) == {1, -1}
    assert boundary(b).is_zero()
    assert boundary(CubicalChain(0, {Cell((0, 0), ()): 1})).p == -1


def test_shared_edge_cancels():
    two = CubicalChain(2, {Cell((0, 0), (0, 1)): 1, Cell((1, 0), (0, 1)): 1})
    b = boundary(two)
    assert Cell((1, 0), (1,)) not in b.coeffs and len(b) == 6


def test_volume():
    g = CubicalGrid(2, (2, 2), ((0.5, 1.0), (2.0, 1.0)))
    assert volume(CubicalChain.zero(2), g) == 0
    assert volume(CubicalChain(2, {Cell((1, 1), (0, 1)): 3}), g) == 3.0
    assert volume(CubicalChain(2, {Cell((0, 0), (0, 1)): -1}), g) == 1.0


def test_relative_cycles():
    assert is_relative_cycle(column(), SQ)
    assert not is_relative_cycle(CubicalChain(1, {Cell((1, 1), (1,)): 1}), SQ)
    top = CubicalChain(2, {c: 1 for c in SQ.cells(2)})
    assert is_relative_cycle(top, SQ)


def test_grid_validation_and_capacity(monkeypatch):
    with pytest.raises(GridError):
        CubicalGrid(1, (2,), ((1.0, 2.5),))
    monkeypatch.setenv("RECTEMBED_CAPACITY", "100")
    with pytest.raises(CapacityError):
        CubicalGrid.uniform((1.0, 1.0, 1.0), 5)


def test_json_round_trip():
    z = random_relative_cycle(CubicalGrid.uniform((1.0, 2.0, 3.0), 3), 1, np.random.default_rng(2))
    assert CubicalChain.from_json(json.loads(json.dumps(z.to_json()))) == z
    g = CubicalGrid(2, (2, 1), ((0.5, 1.0), (2.0,)))
    assert CubicalGrid.from_json(json.loads(json.dumps(g.to_json()))) == g


grids = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.integers(1, 3), min_size=n, max_size=n).map(lambda m: CubicalGrid.uniform([1.0] * len(m), m))
)


@settings(max_examples=200, deadline=None)
@given(grids, st.data())
def test_boundary_squared_is_zero(g, data):
    p = data.draw(st.integers(1, g.n))
    seed = data.draw(st.integers(0, 2**31))
    z = random_chain(g, p, np.random.default_rng(seed), n_cells=5)
    assert boundary(boundary(z)).is_zero()


def test_volume_additive_on_disjoint_support():
    g = CubicalGrid.uniform((1.0, 2.0, 3.0), 3)
    rng = np.random.default_rng(5)
    a = random_chain(g, 2, rng, 4)
    b = random_chain(g, 2, rng, 4)
    b = CubicalChain(2, {c: v for c, v in b.coeffs.items() if c not in a.coeffs})
    assert volume(a + b, g) == pytest.approx(volume(a, g) + volume(b, g))


@settings(max_examples=100, deadline=None)
@given(grids, st.data())
def test_prism_identity(g, data):
    p = data.draw(st.integers(0, g.n))
    axis = data.draw(st.integers(0, g.n - 1))
    m = g.cells_per_axis[axis]
    g_map = sorted(data.draw(st.lists(st.integers(0, m), min_size=m + 1, max_size=m + 1)))
    z = random_chain(g, p, np.random.default_rng(data.draw(st.integers(0, 2**31))), 4)
    fz, hz = sweep(z, g, axis, g_map)
    lhs = z - fz
    rhs = boundary(hz) + (sweep(boundary(z), g, axis, g_map)[1] if p > 0 else CubicalChain.zero(p))
    assert lhs == rhs


def test_fill_examples():
    assert fill_relative_cycle(CubicalChain.zero(1), SQ).chain.is_zero()
    r = fill_relative_cycle(column(), SQ)
    assert r.volume == 2.0
    top = CubicalChain(2, {c: 1 for c in SQ.cells(2)})
    with pytest.raises(DomainError):
        fill_relative_cycle(top, SQ)
    with pytest.raises(DomainError):
        fill_relative_cycle(CubicalChain(1, {Cell((1, 1), (1,)): 1}), SQ)


def test_fill_matches_boundary_and_beats_oracle():
    rng = np.random.default_rng(11)
    for trial in range(60):
        n = 2 + trial % 2
        g = CubicalGrid(n, (3,) * n, tuple(tuple(rng.uniform(1.0, 2.0, 3)) for _ in range(n)))
        p = int(rng.integers(0, n))
        z = random_relative_cycle(g, p, rng)
        r = fill_relative_cycle(z, g)
        assert rel(boundary(r.chain) - z, g).is_zero()
        o = minimal_filling_oracle(z, g)
        assert o.min_volume <= r.volume + 1e-12


def test_oracle_examples():
    assert minimal_filling_oracle(CubicalChain.zero(1), SQ).min_volume == 0
    o = minimal_filling_oracle(column(), SQ)
    assert o.min_volume == 2.0 and o.method == "gf2-enumerate"
    oi = minimal_filling_oracle(column(), SQ, mode="int")
    assert oi.min_volume == 2.0
    assert rel(boundary(oi.chain) - column(), SQ).is_zero()


def test_oracle_milp_path_agrees_with_enumeration():
    from rectembed.chains import oracle

    g = CubicalGrid.uniform((3.0, 3.0, 3.0), 3)
    rng = np.random.default_rng(4)
    for _ in range(10):
        z = random_relative_cycle(g, 1, rng)
        a = minimal_filling_oracle(z, g)
        old = oracle.MAX_ENUM_DIM
        oracle.MAX_ENUM_DIM = -1
        try:
            b = minimal_filling_oracle(z, g)
        finally:
            oracle.MAX_ENUM_DIM = old
        assert b.method == "gf2-milp"
        assert a.min_volume == pytest.approx(b.min_volume, abs=1e-9)


def test_oracle_budget():
    g = CubicalGrid.uniform((3.0, 3.0, 3.0), 3)
    z = random_relative_cycle(g, 1, np.random.default_rng(0))
    with pytest.raises(CapacityError):
        minimal_filling_oracle(z, g, budget=10)


FINE = CubicalGrid.uniform((4.0, 4.0), 4)
COARSE = CubicalGrid.uniform((4.0, 4.0), 2)


def test_push_fixed_point_and_small_loop():
    z = CubicalChain(1, {Cell((2, 0), (1,)): 1, Cell((2, 1), (1,)): 1, Cell((2, 2), (1,)): 1, Cell((2, 3), (1,)): 1})
    r = ff_push(z, FINE, COARSE, 1)
    assert r.z_prime == z and r.homology.is_zero()
    loop = boundary(CubicalChain(2, {Cell((1, 1), (0, 1)): 1}))
    r = ff_push(loop, FINE, COARSE, 1)
    assert r.z_prime.is_zero()
    assert rel(boundary(r.homology) - (r.z_prime - loop), FINE).is_zero()


def test_push_rejects_non_refining():
    with pytest.raises(GridError):
        ff_push(CubicalChain.zero(1), FINE, CubicalGrid.uniform((4.0, 4.0), 3), 1)


def test_push_contracts():
    from rectembed.constants import C_PUSH_HOMOLOGY, C_PUSH_VOLUME

    rng = np.random.default_rng(8)
    for _ in range(200):
        n = int(rng.integers(2, 4))
        cm = [int(rng.integers(1, 3)) for _ in range(n)]
        fine = CubicalGrid.uniform([float(m) for m in cm], [m * int(rng.integers(1, 4)) for m in cm])
        coarse = CubicalGrid.uniform([float(m) for m in cm], cm)
        p = int(rng.integers(1, n))
        z = random_relative_cycle(fine, p, rng)
        if z.is_zero():
            continue
        r = ff_push(z, fine, coarse, p)
        assert in_coarse_skeleton(r.z_prime, fine, coarse)
        assert rel(boundary(r.homology) - (r.z_prime - z), fine).is_zero()
        assert r.volume_ratio <= C_PUSH_VOLUME
        assert r.homology_ratio <= C_PUSH_HOMOLOGY
