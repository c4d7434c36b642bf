import numpy as np
import pytest

from qdiscord import DensityMatrix, haar_random_unitary, random_density_matrix


def random_classical_quantum_state(n_b_qubits: int, seed: int) -> DensityMatrix:
    """rho = sum_k q_k |k><k|_A (+) sigma_k with {|k>} a random orthonormal
    A basis: zero discord by construction."""
    rng = np.random.default_rng(seed)
    ua = haar_random_unitary(2, seed)
    q = rng.dirichlet([2.0, 2.0])
    db = 2**n_b_qubits
    rho = np.zeros((2 * db, 2 * db), dtype=complex)
    for k in range(2):
        vec = ua[:, k]
        proj = np.outer(vec, vec.conj())
        sigma = random_density_matrix((n_b_qubits,), seed=10_000 + 7 * seed + k).entries
        rho += q[k] * np.kron(proj, sigma)
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho, (1, n_b_qubits))


def random_product_state(n_b_qubits: int, seed: int) -> DensityMatrix:
    a = random_density_matrix((1,), seed=seed).entries
    b = random_density_matrix((n_b_qubits,), seed=seed + 500_000).entries
    return DensityMatrix(np.kron(a, b), (1, n_b_qubits))


@pytest.fixture
def rng():
    return np.random.default_rng(0)
