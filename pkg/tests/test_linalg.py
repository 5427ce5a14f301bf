import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from cleftlab import linalg as la


def mats(p, max_rows=6, max_cols=6):
    return st.tuples(st.integers(0, max_rows), st.integers(0, max_cols)).flatmap(
        lambda s: arrays(np.int64, s, elements=st.integers(0, p - 1)))


primes = st.sampled_from(la.PRIMES)


def test_rank_examples():
    assert la.rank(la.identity(3), 2) == 3
    assert la.rank(la.zeros(2, 4), 2) == 0
    assert la.rank([[1, 1], [1, 1]], 2) == 1


def test_kernel_examples():
    assert la.kernel(la.identity(2), 2).shape == (2, 0)
    assert la.kernel(la.zeros(2, 3), 2).shape == (3, 3)
    k = la.kernel([[1, 1]], 2)
    assert k.shape == (2, 1) and list(k[:, 0]) == [1, 1]


def test_solve_examples():
    b = np.array([1, 0, 1])
    assert list(la.solve(la.identity(3), b, 2)) == [1, 0, 1]
    assert la.solve(la.zeros(2, 2), [1, 0], 3) is None
    assert list(la.solve([[1, 1], [0, 1]], [2, 1], 3)) == [1, 1]


def test_quotient_examples():
    proj, d = la.quotient(3, la.zeros(3, 0), 2)
    assert d == 3 and np.array_equal(proj, la.identity(3))
    proj, d = la.quotient(2, la.identity(2), 2)
    assert d == 0 and proj.shape == (0, 2)
    proj, d = la.quotient(2, [[1], [0]], 5)
    assert d == 1 and not (proj @ [1, 0]).any() % 5


def test_unsupported_prime():
    with pytest.raises(ValueError):
        la.rref(la.identity(2), 11)


def test_inverse_singular():
    with pytest.raises(np.linalg.LinAlgError):
        la.inverse([[1, 1], [1, 1]], 2)


@settings(max_examples=150, deadline=None)
@given(primes.flatmap(lambda p: st.tuples(st.just(p), mats(p))))
def test_rank_nullity(pm):
    p, m = pm
    assert la.rank(m, p) + la.kernel(m, p).shape[1] == m.shape[1]
    assert not ((m @ la.kernel(m, p)) % p).any()


@settings(max_examples=150, deadline=None)
@given(primes.flatmap(lambda p: st.tuples(st.just(p), mats(p), st.integers(0, 2**31))))
def test_solve_sound(pmx):
    p, m, seed = pmx
    rng = np.random.default_rng(seed)
    x0 = rng.integers(0, p, m.shape[1])
    b = (m @ x0) % p
    x = la.solve(m, b, p)
    assert x is not None and np.array_equal((m @ x) % p, b)


@settings(max_examples=150, deadline=None)
@given(primes.flatmap(lambda p: st.tuples(st.just(p), mats(p))))
def test_quotient_exact(pm):
    p, m = pm
    n = m.shape[0]
    sub = la.column_space(m, p)
    proj, section, d = la.quotient_with_section(n, sub, p)
    assert d == n - sub.shape[1]
    assert not ((proj @ sub) % p).any()
    assert np.array_equal((proj @ section) % p, la.identity(d))
    assert la.rank(proj, p) == d


@settings(max_examples=100, deadline=None)
@given(primes.flatmap(lambda p: st.tuples(st.just(p), mats(p, 5, 5))))
def test_rref_is_reduced_and_row_equivalent(pm):
    p, m = pm
    r, piv = la.rref(m, p)
    for i, c in enumerate(piv):
        assert r[i, c] == 1 and np.count_nonzero(r[:, c]) == 1
    assert piv == sorted(piv)
    if m.size:
        assert la.rank(np.concatenate([m, r], axis=0), p) == len(piv)


@settings(max_examples=80, deadline=None)
@given(primes.flatmap(lambda p: st.tuples(st.just(p), mats(p, 5, 4), mats(p, 5, 4))))
def test_intersection_in_both(pab):
    p, a, b = pab
    if a.shape[0] != b.shape[0]:
        return
    i = la.intersect(a, b, p)
    for c in range(i.shape[1]):
        assert la.in_span(a, i[:, c], p) and la.in_span(b, i[:, c], p)
    ra, rb = la.rank(a, p), la.rank(b, p)
    joint = la.rank(np.concatenate([a, b], axis=1), p) if a.size + b.size else 0
    assert i.shape[1] == ra + rb - joint
