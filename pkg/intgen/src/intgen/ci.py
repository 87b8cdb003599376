"""Full configuration interaction over molecular orbitals.

Determinants factor into alpha and beta occupation strings; the Hamiltonian
acts through spin-summed single-replacement operators E_pq, so the sigma
vector is a handful of sparse string-replacement matmuls plus one dense
contraction with the two-electron integrals:

    H = E_core + sum_pq k_pq E_pq + 1/2 sum_pqrs (pq|rs) E_pq E_rs,
    k_pq = h_pq - 1/2 sum_r (pr|rq).

The lowest eigenvalue is found in the minimal-|Sz| sector, which always
contains the ground state of a particle-number-conserving Hamiltonian.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import LinearOperator, eigsh


def _strings(m, n):
    """All n-electron occupation bitmasks over m orbitals, ascending."""
    return sorted(sum(1 << i for i in occ) for occ in combinations(range(m), n))


def _replacement_matrices(m, strings):
    """Sparse matrices of E_pq restricted to one spin: E[p,q][J,I] = <J|a+_p a_q|I>."""
    index = {s: i for i, s in enumerate(strings)}
    rows = [[[] for _ in range(m)] for _ in range(m)]
    cols = [[[] for _ in range(m)] for _ in range(m)]
    signs = [[[] for _ in range(m)] for _ in range(m)]
    for i, s in enumerate(strings):
        occ = [p for p in range(m) if (s >> p) & 1]
        for q in occ:
            for p in range(m):
                if p != q and (s >> p) & 1:
                    continue
                target = s ^ (1 << q) | (1 << p)
                lo, hi = sorted((p, q))
                between = bin(s & ((1 << hi) - 1) & ~((1 << (lo + 1)) - 1)).count("1")
                sign = 1 if p == q else (-1) ** between
                j = index[target]
                rows[p][q].append(j)
                cols[p][q].append(i)
                signs[p][q].append(sign)
    n = len(strings)
    return [
        [
            sp.csr_matrix((signs[p][q], (rows[p][q], cols[p][q])), shape=(n, n))
            for q in range(m)
        ]
        for p in range(m)
    ]


class FciSector:
    """Hamiltonian action on the (n_alpha, n_beta) determinant sector."""

    def __init__(self, h, g, e_core, n_alpha, n_beta):
        self.m = h.shape[0]
        self.e_core = e_core
        self.g = g
        self.k = h - 0.5 * np.einsum("prrq->pq", g)
        self.alpha_strings = _strings(self.m, n_alpha)
        self.beta_strings = _strings(self.m, n_beta)
        self.e_alpha = _replacement_matrices(self.m, self.alpha_strings)
        self.e_beta = _replacement_matrices(self.m, self.beta_strings)
        self.shape = (len(self.alpha_strings), len(self.beta_strings))
        self.dim = self.shape[0] * self.shape[1]

    def _replace(self, p, q, c):
        return self.e_alpha[p][q] @ c + c @ self.e_beta[p][q].T

    def sigma(self, vector):
        c = vector.reshape(self.shape)
        m = self.m
        d = np.empty((m, m) + self.shape)
        for p in range(m):
            for q in range(m):
                d[p, q] = self._replace(p, q, c)
        out = self.e_core * c + np.einsum("pq,pqab->ab", self.k, d)
        f = np.tensordot(self.g, d, axes=([2, 3], [0, 1]))  # f[p,q] = sum_rs (pq|rs) d[r,s]
        for p in range(m):
            for q in range(m):
                out += 0.5 * self._replace(p, q, f[p, q])
        return out.reshape(-1)

    def dense(self):
        h = np.empty((self.dim, self.dim))
        e = np.eye(self.dim)
        for i in range(self.dim):
            h[:, i] = self.sigma(e[:, i])
        return h

    def ground_state_energy(self):
        if self.dim == 1:
            return float(self.sigma(np.ones(1))[0])
        if self.dim <= 400:
            return float(np.linalg.eigh(self.dense())[0][0])
        op = LinearOperator((self.dim, self.dim), matvec=self.sigma)
        # deterministic but unstructured start vector: a symmetric guess (for
        # instance a uniform one) can be exactly orthogonal to a triplet
        # ground state in the Sz = 0 sector and trap the iteration
        v0 = np.random.default_rng(12345).standard_normal(self.dim)
        values = eigsh(op, k=1, which="SA", v0=v0, maxiter=5000, tol=1e-11,
                       return_eigenvectors=False)
        return float(values[0])


def fci_ground_state(h, g, e_core, n_electrons, ms2=None):
    """Lowest eigenvalue over the minimal-|Sz| sector (or a requested one)."""
    if ms2 is None:
        ms2 = n_electrons % 2
    n_alpha = (n_electrons + ms2) // 2
    n_beta = n_electrons - n_alpha
    return FciSector(h, g, e_core, n_alpha, n_beta).ground_state_energy()
