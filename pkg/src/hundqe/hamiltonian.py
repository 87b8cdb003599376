"""Second-quantized molecular Hamiltonian action and subspace restriction.

The Hamiltonian is taken in the standard chemist form

    H = E_core + sum_pq h_pq sum_s a+_ps a_qs
        + 1/2 sum_pqrs (pq|rs) sum_st a+_ps a+_rt a_st a_qs

with spatial orbital p and spin s mapping to mode 2p + s.  Every term is
applied to a whole determinant array at once through the vectorized ladder
kernels in :mod:`hundqe.fock`; restriction to a basis is a binary search of
the targets into the sorted basis, dropping everything that lands outside.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import fock
from .errors import DimensionError, HundqeError
from .fcidump import IntegralTable
from .fock import FermionicOp, SubspaceBasis

PRUNE_THRESHOLD = 1e-14

_EVEN_MASK = np.uint64(fock._EVEN_MASK)


@dataclass(frozen=True)
class SparseHamiltonian:
    """Coordinate-form restricted Hamiltonian over a SubspaceBasis."""

    dim: int
    rows: np.ndarray
    cols: np.ndarray
    values: np.ndarray
    basis: SubspaceBasis

    @property
    def entries(self):
        return list(zip(self.rows.tolist(), self.cols.tolist(), self.values.tolist()))

    def to_csr(self) -> sp.csr_matrix:
        m = sp.coo_matrix((self.values, (self.rows, self.cols)), shape=(self.dim, self.dim))
        return m.tocsr()

    def to_dense(self) -> np.ndarray:
        return self.to_csr().toarray()

    def shifted(self, c: float) -> "SparseHamiltonian":
        """Add c times the identity."""
        rows = np.concatenate([self.rows, np.arange(self.dim)])
        cols = np.concatenate([self.cols, np.arange(self.dim)])
        values = np.concatenate([self.values, np.full(self.dim, c)])
        return _collect(rows, cols, values, self.dim, self.basis)


def _hamiltonian_terms(table: IntegralTable):
    """Yield (amplitude, operator string) for every nonzero Hamiltonian term."""
    m = table.n_orbitals
    h = table.one_body
    for p in range(m):
        for q in range(m):
            if abs(h[p, q]) > PRUNE_THRESHOLD:
                for s in (0, 1):
                    yield h[p, q], [
                        FermionicOp.creation(2 * p + s),
                        FermionicOp.annihilation(2 * q + s),
                    ]
    eri = table.dense_eri()
    for p, q, r, s in np.argwhere(np.abs(eri) > PRUNE_THRESHOLD):
        v = 0.5 * eri[p, q, r, s]
        for sig in (0, 1):
            for tau in (0, 1):
                yield v, [
                    FermionicOp.creation(2 * p + sig),
                    FermionicOp.creation(2 * r + tau),
                    FermionicOp.annihilation(2 * s + tau),
                    FermionicOp.annihilation(2 * q + sig),
                ]


def _check_modes(table: IntegralTable, n_modes: int) -> None:
    if n_modes != 2 * table.n_orbitals:
        raise DimensionError(
            f"determinant has {n_modes} modes but the table describes {2 * table.n_orbitals}"
        )


def apply_hamiltonian(table: IntegralTable, d: fock.Determinant):
    """All determinants reachable from d by one Hamiltonian term, amplitudes summed."""
    _check_modes(table, d.n_modes)
    bits = np.array([d.bits], dtype=np.uint64)
    amplitudes = {d.bits: table.core_energy}
    for coeff, ops in _hamiltonian_terms(table):
        src, targets, phases = fock.apply_string_array(ops, bits)
        if src.size:
            t = int(targets[0])
            amplitudes[t] = amplitudes.get(t, 0.0) + coeff * int(phases[0])
    return [
        (fock.Determinant(b, d.n_modes), a)
        for b, a in sorted(amplitudes.items())
        if abs(a) > PRUNE_THRESHOLD
    ]


def _collect(rows, cols, values, dim, basis) -> SparseHamiltonian:
    """Merge duplicate coordinates deterministically and prune tiny entries."""
    coo = sp.coo_matrix((values, (rows, cols)), shape=(dim, dim))
    coo.sum_duplicates()
    keep = np.abs(coo.data) > PRUNE_THRESHOLD
    order = np.lexsort((coo.col[keep], coo.row[keep]))
    return SparseHamiltonian(
        dim=dim,
        rows=coo.row[keep][order],
        cols=coo.col[keep][order],
        values=coo.data[keep][order],
        basis=basis,
    )


def restrict_hamiltonian(table: IntegralTable, basis: SubspaceBasis) -> SparseHamiltonian:
    """Matrix of H projected onto the basis: entry (i, j) = <b_i|H|b_j>."""
    _check_modes(table, basis.n_modes)
    if basis.size == 0:
        raise HundqeError("cannot restrict to an empty basis")
    bits = basis.bit_array
    dim = basis.size
    rows = [np.arange(dim)]
    cols = [np.arange(dim)]
    vals = [np.full(dim, table.core_energy)]
    for coeff, ops in _hamiltonian_terms(table):
        src, targets, phases = fock.apply_string_array(ops, bits)
        if src.size == 0:
            continue
        # project: keep only targets that are themselves basis members
        pos = np.searchsorted(bits, targets)
        pos[pos >= dim] = dim - 1
        inside = bits[pos] == targets
        if not inside.any():
            continue
        rows.append(pos[inside])
        cols.append(src[inside])
        vals.append(coeff * phases[inside])
    return _collect(
        np.concatenate(rows), np.concatenate(cols), np.concatenate(vals), dim, basis
    )


def sector_split(basis: SubspaceBasis) -> list[SubspaceBasis]:
    """Partition a basis by its (N_up, N_down) spin occupation sector.

    The molecular Hamiltonian conserves both counts separately, so the
    restricted matrix is block diagonal across the returned parts.
    """
    if basis.selector.kind is fock.SelectorKind.FULL:
        raise ValueError("sector_split expects a particle-conserving or Hund basis")
    bits = basis.bit_array
    n_up = np.bitwise_count(bits & _EVEN_MASK)
    n_down = np.bitwise_count(bits & ~_EVEN_MASK)
    parts = []
    for nd in np.unique(n_down):
        for nu in np.unique(n_up[n_down == nd]):
            sel = (n_down == nd) & (n_up == nu)
            parts.append(SubspaceBasis(bits[sel], basis.n_modes, basis.selector))
    return parts
