import numpy as np
import pytest

from slinverse import Potential, bvpb_spectrum, matrix_spectrum, witness
from slinverse.oracle import discretize


def test_zero_dirichlet():
    assert matrix_spectrum(Potential.constant(0.0), "dirichlet", M=2000, N=5) == pytest.approx(
        [1, 4, 9, 16, 25], abs=1e-5
    )


def test_zero_periodic_and_antiperiodic():
    q = Potential.constant(0.0)
    assert matrix_spectrum(q, "periodic", M=2000, N=5) == pytest.approx([0, 4, 4, 16, 16], abs=1e-4)
    assert matrix_spectrum(q, "antiperiodic_like", M=2000, N=4) == pytest.approx([1, 1, 9, 9], abs=1e-4)


def test_bvpb_against_shooting():
    q = witness("mathieu")
    bb = bvpb_spectrum(q, 1.0, -1.0, 6)
    assert matrix_spectrum(q, "bvpb", M=2000, N=6, a=1.0, b=-1.0) == pytest.approx(bb.mu[:6], abs=1e-4)


def test_matrices_symmetric():
    q = witness("xsin", M=256)
    for cond in ("dirichlet", "periodic", "antiperiodic_like", "bvpb"):
        A = discretize(q, cond, 64, a=0.5, b=1.0).matrix
        assert abs(A - A.T).max() == 0.0


def test_second_order_convergence():
    q = witness("mathieu")
    ref = matrix_spectrum(q, "dirichlet", M=4000, N=4)
    e1 = np.abs(matrix_spectrum(q, "dirichlet", M=200, N=4, extrapolate=False) - ref)
    e2 = np.abs(matrix_spectrum(q, "dirichlet", M=400, N=4, extrapolate=False) - ref)
    assert np.all(e1 / e2 >= 3.5)


def test_mesh_requirement():
    with pytest.raises(ValueError):
        matrix_spectrum(Potential.constant(0.0), "dirichlet", M=100, N=10)
    with pytest.raises(ValueError):
        discretize(Potential.constant(0.0), "neumann", 100)
