from fractions import Fraction

import numpy as np
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from tcfield.core import block_for, cooperation_numbers
from tcfield.spectral import (SpectralCache, build_block_matrix, eigensystem,
                              verify_block)


def test_matrix_entries_n1():
    # one molecule, c = n + 1/2: photons n, n+1 coupled by sqrt(n+1)
    mat = build_block_matrix(block_for(Fraction(1, 2), Fraction(7, 2)), 0.3)
    assert_allclose(mat.diag, [-3 * 0.3, -4 * 0.3])
    assert_allclose(mat.offdiag, [2.0])


def test_matrix_entries_n2():
    mat = build_block_matrix(block_for(1, 3), 0.0)
    assert_allclose(mat.offdiag, [np.sqrt(2 * 3), np.sqrt(2 * 4)])


def test_n1_eigenvalues():
    es = eigensystem(Fraction(1, 2), Fraction(9, 2), 0.0)
    assert_allclose(es.q, [np.sqrt(5), -np.sqrt(5)], atol=1e-14)


def test_n2_eigenvalues_match_closed_roots():
    es = eigensystem(1, 4, 0.0)
    s = np.sqrt(4 * 3 + 6)
    assert_allclose(es.q, [s, 0.0, -s], atol=1e-13)


def test_descending_and_sign_convention():
    es = eigensystem(2, 7, 1.3)
    assert np.all(np.diff(es.q) < 0)
    for j in range(es.dim):
        col = es.A[:, j]
        first = col[np.abs(col) > 1e-12][0]
        assert first > 0


def test_matches_dense_solver():
    es = eigensystem(Fraction(5, 2), Fraction(13, 2), -0.8)
    K = build_block_matrix(es.block, -0.8).dense()
    w = np.linalg.eigvalsh(K)[::-1]
    assert_allclose(es.q, w, atol=1e-12)


def test_truncated_block_below_floor():
    es = eigensystem(2, -1, 0.0)  # photons 0..1
    assert es.dim == 2
    assert es.block.n_min == 0


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10), st.integers(0, 200), st.floats(-20, 20), st.data())
def test_block_invariants(N, n, beta, data):
    r = data.draw(st.sampled_from(cooperation_numbers(N)))
    es = eigensystem(r, n + r, beta)
    d = verify_block(es)
    scale = max(1.0, np.max(np.abs(es.q)))
    assert d.orthonormality < 1e-10
    assert d.eigen_residual < 1e-10 * scale
    assert d.trace < 1e-9 * scale * es.dim


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10), st.integers(0, 200), st.data())
def test_resonant_symmetry_and_parity(N, n, data):
    r = data.draw(st.sampled_from(cooperation_numbers(N)))
    d = verify_block(eigensystem(r, n + r, 0.0))
    assert d.symmetry < 1e-10
    assert d.parity < 1e-10


def test_parity_not_reported_off_resonance():
    assert np.isnan(verify_block(eigensystem(1, 2, 0.5)).parity)


def test_cache_hits_and_put():
    cache = SpectralCache()
    a = cache.get(1, 3, 0.5)
    b = cache.get(Fraction(1), Fraction(3), 0.5)
    assert a is b and len(cache) == 1
    flipped = a.with_column_sign(1)
    cache.put(flipped)
    assert cache.get(1, 3, 0.5) is flipped
    assert_allclose(flipped.A[:, 1], -a.A[:, 1])
    cache.clear()
    assert len(cache) == 0


def test_cache_is_shared_across_N():
    # the (r, c) block is the same matrix whatever N it came from
    cache = SpectralCache()
    cache.get(1, 4, 0.0)
    cache.get(1, 4, 0.0)
    assert len(cache) == 1
