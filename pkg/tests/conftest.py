import functools

import pytest

from slinverse import dirichlet_data, periodic_spectrum, witness


@functools.lru_cache(maxsize=None)
def forward(name, N=40, M=1024):
    """(q, Dirichlet data with N+1 entries, periodic spectrum with N gaps)."""
    q = witness(name, M=M)
    dd = dirichlet_data(q, N + 1)
    bs = periodic_spectrum(q, N, gamma=dd.gamma)
    return q, dd, bs


@pytest.fixture(scope="session")
def fwd():
    return forward
