import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rectembed.chains import CubicalChain, CubicalGrid, boundary, rel, volume
from rectembed.complexes import (
    BlockComplex,
    ComplexParams,
    CycleComplex,
    build_homotopy,
    degree,
    generate_test_complex,
    glue,
    sweepout_scenario,
    perturb,
    tighten,
    top_class,
    validate,
)
from rectembed.constants import C_IMPL
from rectembed.errors import DomainError, GridError, NotACycleError
from rectembed.rect import normalize


def ident(**kw):
    return generate_test_complex("identity", **kw)


def zero_like(c):
    return CycleComplex(c.param, c.target, {})


def small(seed, n, D):
    R = (2.0, 2.0) if n == 2 else (2.0, 2.0, 3.0)
    cells = tuple(4 * round(r) for r in R)
    return generate_test_complex("random_small", R=R, S=(2.0,) * n, target_cells=cells, seed=seed, D=D)


def test_block_complex_faces_are_interior():
    B = BlockComplex(normalize((1, 4, 6)), 1, 2.0)
    assert B.grid.cells_per_axis == (1, 2, 3)
    assert B.faces(0) == []
    assert len(B.faces(1)) == 2
    assert all(0 in F.dirs for p in (1, 2, 3) for F in B.faces(p))
    assert len(B.faces(3)) == 6


def test_block_adjustment_recorded():
    B = BlockComplex(normalize((1, 5)), 0, 2.0)
    assert B.grid.cells_per_axis == (1, 2)
    assert B.adjust[1] == pytest.approx(1.25)
    assert all(0.5 <= a <= 2 for a in B.adjust)


def test_zero_and_identity_valid():
    c = ident()
    assert validate(c).valid and validate(zero_like(c)).valid
    assert degree(c) == 1 and degree(zero_like(c)) == 0


@pytest.mark.parametrize("D", [2, 3, -1])
def test_degree_d(D):
    assert degree(generate_test_complex("degree_D", D=D)) == D


def test_negated_face_breaks_law():
    c = ident(R=(3.0, 3.0), S=(3.0, 3.0))
    F = c.param.faces(1)[0]
    bad = dict(c.assignment)
    bad[F] = -bad[F]
    rep = validate(CycleComplex(c.param, c.target, bad))
    assert not rep.valid
    assert F in rep.violations
    assert all(G == F or F in c.param.face_boundary(G).coeffs for G in rep.violations)


def test_non_constant_top_raises():
    g = CubicalGrid.uniform((2.0, 2.0), 2)
    z = CubicalChain(2, {c: 1 for c in list(g.cells(2))[:3]})
    with pytest.raises(NotACycleError):
        top_class(z, g)


@settings(max_examples=30, deadline=None)
@given(st.integers(-3, 3), st.lists(st.sampled_from([(2.0, 2.0), (1.0, 3.0), (3.0, 1.5)]), min_size=1, max_size=1))
def test_top_class_volume_exact(D, dims):
    g = CubicalGrid.uniform(dims[0], (2, 3))
    z = CubicalChain(2, {c: D for c in g.cells(2)}) if D else CubicalChain.zero(2)
    assert top_class(z, g) == D
    assert volume(z, g) == pytest.approx(abs(D) * math.prod(g.dims), rel=1e-12)


@pytest.mark.parametrize("seed", range(6))
def test_glue_preserves_degree(seed):
    c = small(seed, 3, 1 + seed % 2)
    for l in range(c.param.j, 4):
        g = glue(c, c.param.coarsen(l))
        assert validate(g).valid and degree(g) == degree(c)


def test_glue_identity_and_subadditive():
    c = small(0, 2, 1)
    same = glue(c, c.param.coarsen(c.param.j))
    assert same.assignment == c.assignment
    g = glue(c, c.param.coarsen(2))
    (F,) = g.param.faces(2)
    assert volume(g.chain(F), g.target) <= sum(c.face_volumes(2).values()) + 1e-12


def test_glue_incompatible():
    c = ident()
    with pytest.raises(GridError):
        glue(c, BlockComplex(normalize((2.0, 3.0)), 0, 1.0))


def test_tighten_zero_and_k_range():
    c = zero_like(ident())
    assert tighten(c, 1, 0.5).complex.assignment == {}
    with pytest.raises(DomainError):
        tighten(ident(), 0, 0.5)


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize("n", [2, 3])
def test_tighten_keeps_low_skeleton_and_degree(seed, n):
    c = small(seed, n, 1 + seed % 2)
    for k in range(1, n):
        res = tighten(c, k, 0.5)
        t = res.complex
        assert validate(t).valid
        assert degree(t) == degree(c)
        for F, z in c.assignment.items():
            if len(F.dirs) <= k:
                assert t.chain(F) == z
        for f in res.faces:
            assert f.volume <= C_IMPL * f.threshold


def test_tighten_fixed_point_volumes():
    c = tighten(small(1, 3, 1), 2, 0.5).complex
    again = tighten(c, 2, 0.5).complex
    for F in c.param.faces(3):
        assert volume(again.chain(F), c.target) <= volume(c.chain(F), c.target) + 1e-12


def test_scrunched_inflates_k_volume():
    p = dict(R=(1.0, 4.0, 12.0), S=(2.0, 2.0, 2.0), j=1, L=2.0, target_cells=(2, 2, 2))
    a = ident(**p)
    z = generate_test_complex("scrunched", ComplexParams(**p, laps=(1, 1, 3)))
    assert degree(z) == 1 and validate(z).valid
    zv, av = z.face_volumes(2), a.face_volumes(2)
    long = [F for F in zv if 2 in F.dirs]
    assert sum(zv[F] for F in long) / sum(av[F] for F in long) == pytest.approx(3.0)


def test_homotopy_trivial_cases():
    c = small(2, 2, 1)
    h = build_homotopy(c, c)
    assert h.success and all(z.is_zero() for z in h.prisms.values())
    z = zero_like(c)
    assert build_homotopy(z, z).success


@pytest.mark.parametrize("D", [1, 2, -1])
def test_homotopy_obstruction(D):
    c = generate_test_complex("degree_D", D=D)
    h = build_homotopy(c, zero_like(c))
    assert not h.success and h.failure_dimension == c.param.n
    assert abs(h.obstruction) >= 1
    assert h.obstruction_volume >= math.prod(c.target.dims) - 1e-12


@pytest.mark.parametrize("seed", range(5))
def test_homotopy_to_tightened(seed):
    c = small(seed, 3, 1)
    t = tighten(c, 2, 0.5).complex
    h = build_homotopy(c, t)
    assert h.success
    for F, y in h.prisms.items():
        p = len(F.dirs)
        lower = c.param.face_boundary(F) if p else CubicalChain.zero(0)
        hb = CubicalChain.zero(p)
        for G, v in lower.coeffs.items():
            hb = hb + v * h.prisms[G]
        sign = -1 if p % 2 else 1
        want = rel(hb + sign * (t.chain(F) - c.chain(F)), c.target) if p else rel(t.chain(F) - c.chain(F), c.target)
        assert rel(boundary(y) - want, c.target).is_zero()


def test_perturb_is_homotopic():
    rng = np.random.default_rng(3)
    c = ident(R=(3.0, 3.0), S=(3.0, 3.0))
    d = perturb(c, rng, n_faces=2)
    assert validate(d).valid and degree(d) == 1
    assert build_homotopy(c, d).success


def test_json_round_trip():
    c = small(4, 2, 2)
    back = CycleComplex.from_json(json.loads(json.dumps(c.to_json())))
    assert back.assignment == c.assignment and back.param == c.param and degree(back) == 2


@pytest.mark.parametrize("fold", [1, 3])
def test_sweepout_scenario(fold):
    rep = sweepout_scenario(fold)
    assert rep.degree_before == rep.degree_after == rep.degree_glued == 1
    assert rep.glued_volume <= rep.v_bound
    assert rep.tracking <= 4.0
