import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from caminalab import fpla


def matrices(p, max_dim=4):
    dims = st.tuples(st.integers(1, max_dim), st.integers(1, max_dim))
    return dims.flatmap(lambda d: st.lists(st.integers(0, p - 1), min_size=d[0] * d[1], max_size=d[0] * d[1])
                        .map(lambda xs: np.array(xs, dtype=np.int64).reshape(d)))


def test_rank_examples():
    assert fpla.mat_rank(np.eye(2, dtype=np.int64), 3) == 2
    assert fpla.mat_rank(np.zeros((2, 2), dtype=np.int64), 3) == 0
    assert fpla.mat_rank([[1, 2], [2, 4]], 5) == 1


def test_kernel_examples():
    (v,) = fpla.kernel_basis([[1, 1]], 3)
    assert tuple(v) == (1, 2)
    assert fpla.kernel_basis(np.eye(3, dtype=np.int64), 3) == []
    basis = fpla.kernel_basis(np.zeros((1, 2), dtype=np.int64), 5)
    assert sorted(tuple(b) for b in basis) == [(0, 1), (1, 0)]


def test_solve_examples():
    b = np.array([1, 2, 0])
    assert tuple(fpla.solve(np.eye(3, dtype=np.int64), b, 3)) == (1, 2, 0)
    assert fpla.solve(np.zeros((2, 2), dtype=np.int64), np.array([1, 0]), 3) is None
    assert tuple(fpla.solve([[1, 1]], np.array([2]), 3)) == (2, 0)


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        fpla.solve(np.eye(2, dtype=np.int64), np.array([1, 2, 3]), 3)


def test_gl_generators_small():
    (g,) = fpla.gl_generators(1, 3)
    assert g.tolist() == [[2]]
    gens = fpla.gl_generators(2, 3)
    assert [m.tolist() for m in gens] == [[[1, 1], [0, 1]], [[1, 0], [1, 1]], [[2, 0], [0, 1]]]


@pytest.mark.parametrize("d,p", [(1, 3), (1, 5), (2, 3), (2, 5), (3, 3)])
def test_gl_generators_generate(d, p):
    gens = fpla.gl_generators(d, p)
    assert all(fpla.mat_rank(g, p) == d for g in gens)
    seen = {np.eye(d, dtype=np.int64).tobytes()}
    frontier = [np.eye(d, dtype=np.int64)]
    while frontier:
        nxt = []
        for M in frontier:
            for g in gens:
                N = fpla.mat_mul(g, M, p)
                key = N.tobytes()
                if key not in seen:
                    seen.add(key)
                    nxt.append(N)
        frontier = nxt
    assert len(seen) == fpla.gl_order(d, p)
    if (d, p) == (2, 3):
        assert len(seen) == 48


def test_projective_functionals():
    assert [tuple(v) for v in fpla.projective_functionals(1, 3)] == [(1,)]
    assert [tuple(v) for v in fpla.projective_functionals(2, 3)] == [(0, 1), (1, 0), (1, 1), (1, 2)]
    assert len(fpla.projective_functionals(2, 5)) == 6


def test_encode_matches_all_vectors():
    V = fpla.all_vectors(3, 3)
    assert np.array_equal(fpla.encode(V, 3), np.arange(27))
    assert np.array_equal(fpla.decode(17, 3, 3), V[17])


def test_gl_elements_matches_brute_force():
    brute = [M for M in itertools.product(range(3), repeat=4) if (M[0] * M[3] - M[1] * M[2]) % 3]
    assert len(fpla.gl_elements(2, 3)) == len(brute) == 48


def test_check_prime_rejects():
    for bad in (2, 4, 9, 1):
        with pytest.raises(ValueError):
            fpla.check_prime(bad)


@settings(max_examples=60, deadline=None)
@given(matrices(5))
def test_rank_nullity(M):
    assert fpla.mat_rank(M, 5) + len(fpla.kernel_basis(M, 5)) == M.shape[1]
    for v in fpla.kernel_basis(M, 5):
        assert not (M @ v % 5).any()


@settings(max_examples=60, deadline=None)
@given(matrices(3), st.integers(0, 10**6))
def test_solve_consistent_rhs(M, seed):
    x = np.random.default_rng(seed).integers(0, 3, M.shape[1])
    b = M @ x % 3
    y = fpla.solve(M, b, 3)
    assert y is not None and np.array_equal(M @ y % 3, b)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10**6))
def test_inverse(d, seed):
    rng = np.random.default_rng(seed)
    M = rng.integers(0, 5, (d, d))
    if fpla.is_invertible(M, 5):
        assert np.array_equal(fpla.mat_mul(M, fpla.mat_inverse(M, 5), 5), np.eye(d, dtype=np.int64))
    else:
        with pytest.raises(ValueError):
            fpla.mat_inverse(M, 5)
