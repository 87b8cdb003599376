"""Lowest eigenpair of a restricted Hamiltonian.

Two paths: a dense symmetric eigendecomposition for desk-scale matrices and
a seeded Lanczos iteration with full reorthogonalization for anything
larger.  Full reorthogonalization is deliberate: at these dimensions the
extra matvec-free cost is negligible and ghost eigenvalues would corrupt
three-decimal energy tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import CapacityError, ConvergenceError
from .hamiltonian import SparseHamiltonian

DENSE_CAP = 4096
DEGENERACY_WINDOW = 1e-9


class Method(Enum):
    DENSE = "dense"
    LANCZOS = "lanczos"


@dataclass(frozen=True)
class GroundStateResult:
    energy: float
    amplitudes: np.ndarray  # unit 2-norm coefficients over basis indices
    degeneracy_count: int
    method: Method
    iterations: int = 0

    def residual_norm(self, h: SparseHamiltonian) -> float:
        m = h.to_csr()
        return float(np.linalg.norm(m @ self.amplitudes - self.energy * self.amplitudes))


def solve_dense(h: SparseHamiltonian, dense_cap: int = DENSE_CAP) -> GroundStateResult:
    """Full symmetric eigendecomposition; ground eigenpair of the matrix."""
    if h.dim > dense_cap:
        raise CapacityError(
            f"dimension {h.dim} exceeds the dense cap {dense_cap}; use solve_lanczos"
        )
    eigenvalues, eigenvectors = np.linalg.eigh(h.to_dense())
    energy = float(eigenvalues[0])
    degenerate = int(np.sum(eigenvalues - energy < DEGENERACY_WINDOW))
    return GroundStateResult(
        energy=energy,
        amplitudes=eigenvectors[:, 0],
        degeneracy_count=degenerate,
        method=Method.DENSE,
    )


def solve_lanczos(
    h: SparseHamiltonian,
    seed: int = 0,
    tol: float = 1e-10,
    max_iter: int = 500,
) -> GroundStateResult:
    """Seeded Lanczos with full reorthogonalization.

    Converged once successive Ritz minima differ by less than ``tol``.
    """
    if h.dim < 2:
        raise ValueError("Lanczos needs dimension >= 2; use solve_dense")
    if tol <= 0:
        raise ValueError("tol must be positive")
    matrix = h.to_csr()
    n = h.dim
    max_iter = min(max_iter, n)
    rng = np.random.default_rng(seed)

    basis_vectors = np.zeros((max_iter, n))
    alphas, betas = [], []
    q = rng.standard_normal(n)
    q /= np.linalg.norm(q)
    basis_vectors[0] = q
    previous_ritz = np.inf

    for it in range(max_iter):
        w = matrix @ basis_vectors[it]
        alphas.append(float(basis_vectors[it] @ w))
        # full reorthogonalization against every stored Lanczos vector
        w -= basis_vectors[: it + 1].T @ (basis_vectors[: it + 1] @ w)
        w -= basis_vectors[: it + 1].T @ (basis_vectors[: it + 1] @ w)
        beta = float(np.linalg.norm(w))

        theta, s = np.linalg.eigh(_tridiagonal(alphas, betas))
        ritz = float(theta[0])
        # standard Lanczos residual bound for the lowest Ritz pair
        residual_bound = beta * abs(float(s[-1, 0]))
        exhausted = beta < 1e-14 or it + 1 == n
        converged = (
            abs(previous_ritz - ritz) < tol
            and residual_bound <= 1e-9 * max(1.0, abs(ritz))
        )
        if converged or exhausted:
            vector = basis_vectors[: it + 1].T @ s[:, 0]
            vector /= np.linalg.norm(vector)
            degenerate = int(np.sum(theta - ritz < DEGENERACY_WINDOW))
            return GroundStateResult(
                energy=ritz,
                amplitudes=vector,
                degeneracy_count=degenerate,
                method=Method.LANCZOS,
                iterations=it + 1,
            )
        previous_ritz = ritz
        if it + 1 < max_iter:
            betas.append(beta)
            basis_vectors[it + 1] = w / beta

    raise ConvergenceError(
        f"Lanczos did not converge within {max_iter} iterations", best_value=previous_ritz
    )


def _tridiagonal(alphas, betas) -> np.ndarray:
    k = len(alphas)
    t = np.diag(alphas)
    if betas:
        t += np.diag(betas, 1) + np.diag(betas, -1)
    return t


def solve(h: SparseHamiltonian, method=None, seed: int = 0, tol: float = 1e-10,
          max_iter: int = 500) -> GroundStateResult:
    """Dense below the cap, Lanczos above, unless a method is forced."""
    if method is None:
        method = Method.DENSE if h.dim <= DENSE_CAP else Method.LANCZOS
    if method is Method.DENSE:
        return solve_dense(h)
    if h.dim < 2:
        return solve_dense(h)
    return solve_lanczos(h, seed=seed, tol=tol, max_iter=max_iter)
