import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.stats import poisson

from tcfield.core import ParameterError, TruncationError
from tcfield.distributions import coherent, fock, from_spec, thermal


def test_fock():
    d = fock(3)
    assert_allclose(d.diag, [0, 0, 0, 1])
    assert d.superdiag.shape == (3,) and not d.has_coherence()
    assert d.truncated_mean == 3.0
    with pytest.raises(ParameterError):
        fock(-1)


@pytest.mark.parametrize("nbar", [0.5, 4.0, 100.0])
def test_coherent_normalization_and_tail(nbar):
    d = coherent(nbar)
    assert d.tail_mass <= 1e-12
    assert abs(d.diag.sum() - 1) < 1e-11
    assert abs(d.truncated_mean - nbar) < 1e-8
    assert_allclose(d.diag, poisson.pmf(np.arange(d.n_trunc + 1), nbar), rtol=1e-10, atol=1e-300)
    assert_allclose(d.superdiag, np.sqrt(d.diag[:-1] * d.diag[1:]), rtol=1e-12)


def test_coherent_cutoff_is_minimal():
    d = coherent(10.0)
    assert poisson.sf(d.n_trunc - 1, 10.0) > 1e-12 or d.n_trunc == math.ceil(10 + 10 * math.sqrt(10) + 25)


def test_coherent_vacuum():
    d = coherent(0.0)
    assert d.diag[0] == 1.0 and not d.has_coherence()


def test_thermal():
    d = thermal(3.0)
    assert abs(d.diag.sum() - 1) < 1e-11
    assert_allclose(d.diag[:3], [0.25, 0.1875, 0.140625])
    assert not d.has_coherence()


def test_user_cutoff_too_small():
    with pytest.raises(TruncationError):
        coherent(100.0, n_trunc=50)
    assert coherent(4.0, n_trunc=80).n_trunc == 80


def test_from_spec():
    assert from_spec("fock:4").diag[4] == 1.0
    assert from_spec("coherent:9").nbar == 9.0
    assert from_spec("thermal:2").nbar == 2.0
    for bad in ("poisson:3", "fock:x", "fock:-2", "coherent:-1"):
        with pytest.raises(ParameterError):
            from_spec(bad)
