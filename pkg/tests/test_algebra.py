import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cleftlab.algebra import (Algebra, IdealIsWholeAlgebra, InadmissibleBound, Quiver, Relation, RelationError,
                              field_algebra, isomorphic_by_permutation, linear_quiver, path_algebra, product,
                              quotient_by_ideal, semisimple, type_a)
from conftest import kx2


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_dim_type_a(n):
    assert type_a(n).dim == n * (n + 1) // 2


def test_path_algebra_examples():
    a = type_a(2)
    assert a.dim == 3 and a.labels == ("e1", "e2", "a1")
    assert kx2().dim == 2
    assert field_algebra(3).dim == 1


def test_arrow_convention(a2):
    vec, s, t, label = a2.arrows[0]
    assert (s, t, label) == (0, 1, "a1")
    e1, e2 = a2.idempotents
    assert np.array_equal(a2.mul(a2.mul(e2, vec), e1), vec)
    assert not a2.mul(e1, vec).any()


def test_relation_not_parallel():
    q = Quiver(["1", "2", "3"], [("a", "1", "2"), ("b", "2", "3"), ("c", "1", "3"), ("d", "3", "3")])
    with pytest.raises(RelationError, match="not parallel"):
        path_algebra(q, [Relation(((1, ("a", "b")), (1, ("d", "d"))))], 4)


def test_relation_not_composable():
    with pytest.raises(RelationError, match="composable"):
        path_algebra(linear_quiver(3), [Relation(((1, ("a2", "a1")),))], 3)


def test_inadmissible_bound_has_witness():
    loop = Quiver(["1"], [("x", "1", "1")])
    with pytest.raises(InadmissibleBound) as e:
        path_algebra(loop, [], 3)
    assert e.value.witness == ["x", "x", "x"]


def test_quotient_examples(a2, dual_numbers):
    b, proj = quotient_by_ideal(a2, [])
    assert b.dim == 3 and np.array_equal(proj, np.eye(3, dtype=np.int64))
    b, _ = quotient_by_ideal(a2, [a2.idempotents[1]])
    assert b.dim == 1 and b.validate().ok and b.vertices == ("1",)
    x = dual_numbers.basis_vector(1)
    b, _ = quotient_by_ideal(dual_numbers, [x])
    assert b.dim == 1 and isomorphic_by_permutation(b, field_algebra(2)) is not None
    with pytest.raises(IdealIsWholeAlgebra):
        quotient_by_ideal(a2, [a2.unit])


def test_opposite(a2):
    op = a2.opposite
    assert op.opposite is a2
    rev = type_a(2, 2, "l")
    assert isomorphic_by_permutation(op, rev) is not None
    assert op.validate().ok


def test_validate_valid():
    for a in (type_a(2), type_a(3, 3), kx2(5), semisimple(3), product(type_a(2), field_algebra(2))):
        assert a.validate().ok, a.validate().render()


def test_validate_corrupt_associativity(a2):
    mult = a2.mult.copy()
    mult[2, 2, 2] = (mult[2, 2, 2] + 1) % 2
    bad = Algebra(mult, a2.unit, a2.idempotents, a2.radical, 2, a2.labels, a2.vertices)
    rep = bad.validate()
    assert not rep.ok
    assoc = [c for c in rep.checks if c.name == "associativity"][0]
    assert not assoc.passed and len(assoc.witness) == 3


def test_validate_radical_missing_vector(dual_numbers):
    bad = Algebra(dual_numbers.mult, dual_numbers.unit, dual_numbers.idempotents, np.zeros((2, 0)), 2,
                  dual_numbers.labels, dual_numbers.vertices)
    rep = bad.validate()
    failed = {c.name: c for c in rep.failures}
    assert "radical_maximal" in failed
    assert "maximal-nilpotent" in failed["radical_maximal"].message


def test_product_labels_are_distinct(a2):
    b = product(a2, a2)
    assert len(set(b.labels)) == b.dim == 6 and len(set(b.vertices)) == 4


def test_word_table_reconstructs_basis(a2):
    words, coef = type_a(3).word_table
    a = type_a(3)
    gens = a.generators
    recon = np.zeros((a.dim, a.dim), dtype=np.int64)
    for w, row in zip(words, coef):
        v = a.unit
        for g in w:
            v = a.mul(v, gens[g])
        recon += np.outer(row, v)
    assert np.array_equal(recon % a.p, np.eye(a.dim, dtype=np.int64))


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 4), st.sampled_from([2, 3, 5, 7]), st.text("rl", min_size=3, max_size=3))
def test_type_a_all_orientations_valid(n, p, o):
    a = type_a(n, p, o[:n - 1])
    assert a.dim == n * (n + 1) // 2 if o[:n - 1] in ("", "r" * (n - 1), "l" * (n - 1)) else a.dim >= n
    rep = a.validate()
    assert rep.ok, rep.render()
    assert a.opposite.validate().ok
