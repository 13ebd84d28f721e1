import numpy as np
import pytest

from cpstensor.tensor import DenseTensor, hermitian_part, symmetrize_ps


def random_cps_tensor(n: int, seed: int, d: int = 2) -> DenseTensor:
    rng = np.random.default_rng(seed)
    shape = (n,) * (2 * d)
    w = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return hermitian_part(symmetrize_ps(DenseTensor(n, 2 * d, w)))


def random_ps_tensor(n: int, seed: int, d: int = 2) -> DenseTensor:
    rng = np.random.default_rng(seed)
    shape = (n,) * (2 * d)
    w = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return symmetrize_ps(DenseTensor(n, 2 * d, w))


def random_unit(n: int, rng) -> np.ndarray:
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return x / np.linalg.norm(x)


@pytest.fixture
def gap_tensor() -> DenseTensor:
    """Order-4 CPS tensor with entries (1,1,2,2) and (2,2,1,1) set to one.

    Its largest C-eigenvalue is 1/2, its squared norm is 2, and its rank
    differs from its CPS rank, which makes it the standard stress instance
    for decomposition and approximation code paths.
    """
    e = np.zeros((2, 2, 2, 2), dtype=complex)
    e[0, 0, 1, 1] = 1
    e[1, 1, 0, 0] = 1
    return DenseTensor(2, 4, e)


@pytest.fixture
def rank_deceptive_tensor() -> DenseTensor:
    """conj(A) (x) A for symmetric A = [[1, 1+i], [1+i, 2]].

    The standard matricization is rank-one even though the tensor is not,
    which is exactly what the canonical permutation is designed to detect.
    """
    a = np.array([[1.0, 1.0 + 1.0j], [1.0 + 1.0j, 2.0]], dtype=complex)
    return DenseTensor(2, 4, np.multiply.outer(np.conj(a), a))
