import numpy as np
import pytest

from cleftlab import harness as H
from cleftlab import linalg as la
from cleftlab import cleft as C
from cleftlab.algebra import Algebra, field_algebra, isomorphic_by_permutation, product, semisimple, type_a
from cleftlab.homology import minimal_presentation, projective, simple
from cleftlab.rep import (Bimodule, Module, ThetaData, cokernel_module, direct_sum_module, hom_basis, is_isomorphic)
from conftest import kx2


def same_algebra(a, b):
    return isomorphic_by_permutation(a, b) is not None


@pytest.fixture(scope="module")
def dr():
    return H.shipped("trivial-kA2").inst


def test_trivial_extension_of_field(k):
    inst = C.trivial_extension(k, Bimodule.regular(k))
    assert inst.total.dim == 2 and same_algebra(inst.total, kx2())


def test_zero_bimodule_gives_base(a2):
    inst = C.trivial_extension(a2, Bimodule.zero(a2, a2))
    assert np.array_equal(inst.total.mult, a2.mult)


def test_semisimple_with_arrow_is_a2():
    r = semisimple(2)
    m = C.arrow_bimodule(r, [("1", "2")])
    inst = C.trivial_extension(r, m)
    assert same_algebra(inst.total, type_a(2))


def test_dual_extension_is_symmetric(dr):
    assert dr.total.dim == 6 and dr.validate().ok
    assert {(s, t) for _, s, t, _ in dr.total.arrows} == {(0, 1), (1, 0)}


def test_tensor_rings():
    r = semisimple(2)
    inst = C.tensor_ring(r, C.arrow_bimodule(r, [("1", "2")]), 2)
    assert same_algebra(inst.total, type_a(2))
    r3 = semisimple(3)
    inst = C.tensor_ring(r3, C.arrow_bimodule(r3, [("1", "2"), ("2", "3")]), 3)
    assert inst.total.dim == 6 and same_algebra(inst.total, type_a(3))
    a2 = type_a(2)
    inst = C.tensor_ring(a2, Bimodule.zero(a2, a2), 1)
    assert np.array_equal(inst.total.mult, a2.mult)


def test_tensor_ring_requires_nilpotent():
    r = semisimple(2)
    with pytest.raises(Exception):
        C.tensor_ring(r, C.arrow_bimodule(r, [("1", "2")]), 1)


def test_triangular():
    k = field_algebra(2)
    inst = C.triangular_matrix(k, k, Bimodule.regular(k))
    assert same_algebra(inst.total, type_a(2))
    a2 = type_a(2)
    inst = C.triangular_matrix(a2, k, Bimodule.zero(a2, k))
    assert np.array_equal(inst.total.mult, product(a2, k).mult)
    inst = C.triangular_matrix(a2, k, Bimodule.from_left_module(projective(a2, 0), k))
    assert inst.total.dim == 6 and inst.validate().ok


def test_functor_l_examples(k, dr):
    inst = C.trivial_extension(k, Bimodule.regular(k))
    assert C.functor_l(inst, Module.zero(k)).module.dim == 0
    assert is_isomorphic(C.functor_l(inst, Module.regular(k)).module, Module.regular(inst.total))
    for s in H.SHIPPED:
        inst = H.shipped(s).inst
        assert is_isomorphic(C.functor_l(inst, Module.regular(inst.base)).module, Module.regular(inst.total))


@pytest.mark.parametrize("key", H.SHIPPED)
def test_functor_identities(key):
    s = H.shipped(key)
    inst = s.inst
    for y in s.cat_r:
        ly = C.functor_l(inst, y)
        assert is_isomorphic(C.functor_q(inst, C.functor_i(inst, y))[0], y)
        assert is_isomorphic(C.functor_q(inst, ly)[0], y)
        assert is_isomorphic(C.functor_e(inst, ly), direct_sum_module([y, C.functor_F(inst, y)], inst.base))
        mu, le = C.counit_mu(inst, C.functor_i(inst, y))
        assert mu.is_surjective() and mu.source.dim - mu.rank == C.functor_F(inst, y).dim
        mu, le = C.counit_mu(inst, ly)
        assert mu.is_surjective()
        assert mu.source.dim - mu.rank == le.dim - ly.dim
        back = hom_basis(ly.module, mu.source)
        cols = np.stack([((mu.matrix @ h.matrix) % inst.p).reshape(-1) for h in back], axis=1) if back \
            else la.zeros(ly.dim * ly.dim, 0)
        assert la.solve(cols, la.identity(ly.dim).reshape(-1), inst.p) is not None


@pytest.mark.parametrize("key", H.SHIPPED)
def test_pair_round_trip(key):
    s = H.shipped(key)
    for t in s.cat_t:
        pm = C.as_pair(s.inst, t)
        assert all(pm.law().values())
        assert np.array_equal(pm.module.action, t.action)


@pytest.mark.parametrize("key", ["trivial-kA2", "triangular"])
def test_exactness_bookkeeping(key):
    """``e`` is exact, ``l`` and ``q`` preserve cokernels, on every catalog map."""
    s = H.shipped(key)
    inst = s.inst
    for x in s.cat_r:
        for y in s.cat_r:
            for f in hom_basis(x, y):
                c, _ = cokernel_module(f)
                lf = C.functor_l_map(inst, f)
                lc, _ = cokernel_module(lf)
                assert is_isomorphic(lc, C.functor_l(inst, c).module)
    for x in s.cat_t:
        for y in s.cat_t:
            for f in hom_basis(x, y):
                ef = C.functor_e_map(inst, f)
                assert ef.rank == f.rank
                qf = C.functor_q_map(inst, f)
                qc, _ = cokernel_module(qf)
                assert is_isomorphic(qc, C.functor_q(inst, cokernel_module(f)[0])[0])


def test_lift_presentation(dr, a2):
    p1 = projective(a2, 0)
    lifted = C.lift_presentation(dr, minimal_presentation(p1))
    assert lifted.sigma.source.dim == 0
    s1 = simple(a2, 0)
    lifted = C.lift_presentation(dr, minimal_presentation(s1))
    assert is_isomorphic(cokernel_module(lifted.sigma)[0], C.functor_l(dr, s1).module)


@pytest.mark.parametrize("key", H.SHIPPED)
def test_lift_minimality_flag(key):
    """The flag agrees with a direct minimal presentation of ``l(y)``; augmented inputs stay non-minimal."""
    s = H.shipped(key)
    for idx, y in H.basic_modules(s.cat_r):
        pres = minimal_presentation(y)
        lifted = C.lift_presentation(s.inst, pres)
        direct = minimal_presentation(lifted.lifted_module.module)
        assert lifted.minimal and lifted.p1 == direct.p1
        aug = C.lift_presentation(s.inst, pres.augmented([0]))
        assert not aug.minimal


@pytest.mark.parametrize("key", H.SHIPPED)
def test_lifted_projectives_split(key):
    inst = H.shipped(key).inst
    for i in range(inst.base.n_vertices):
        assert C.lifted_projective_splits(inst, i)


def test_opposite_instance(dr):
    op = dr.opposite
    assert op.validate().ok and op.opposite is dr
    assert op.total.key == dr.total.opposite.key


def _corrupt(a: Algebra, idx):
    mult = a.mult.copy()
    mult[idx] = (mult[idx] + 1) % a.p
    return Algebra(mult, a.unit, a.idempotents, a.radical, a.p, a.labels, a.vertices, a.name)


@pytest.mark.parametrize("key", H.SHIPPED)
def test_mutations_are_caught(key):
    inst = H.shipped(key).inst
    rng = np.random.default_rng(7)
    for _ in range(6):
        i = tuple(int(v) for v in rng.integers(0, inst.nR, 3))
        bad = C.CleftInstance(_corrupt(inst.base, i), inst.theta, inst.total)
        assert not bad.validate().ok
        i = tuple(int(v) for v in rng.integers(0, inst.total.dim, 3))
        bad = C.CleftInstance(inst.base, inst.theta, _corrupt(inst.total, i))
        assert not bad.validate().ok
    if inst.nM:
        t = inst.theta.table.copy()
        t[0, 0, 0] = (t[0, 0, 0] + 1) % inst.p
        bad = C.CleftInstance(inst.base, ThetaData(inst.bimodule, t, inst.theta.nilpotency), inst.total)
        assert not bad.validate().ok
        with pytest.raises(C.InstanceError):
            C.theta_extension(inst.base, ThetaData(inst.bimodule, t, inst.theta.nilpotency))
