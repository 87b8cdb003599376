"""Restricted (and restricted open-shell) Hartree-Fock in an AO basis.

DIIS-accelerated SCF with an optional level shift fallback.  The open-shell
path is Roothaan single-Fock ROHF with Guest-Saunders-style block coupling,
used for odd-electron molecules (doublets); everything else is closed-shell
RHF.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class ScfResult:
    energy: float  # electronic + nuclear
    mo_coefficients: np.ndarray  # AO x MO
    orbital_energies: np.ndarray
    n_alpha: int
    n_beta: int
    converged: bool
    iterations: int


class ScfError(RuntimeError):
    pass


def _symmetric_orthogonalizer(s):
    w, u = np.linalg.eigh(s)
    if w.min() < 1e-10:
        raise ScfError("AO overlap matrix is near-singular")
    return u @ np.diag(w**-0.5) @ u.T


class _Diis:
    def __init__(self, max_size=8):
        self.errors = []
        self.matrices = []
        self.max_size = max_size

    def update(self, f, error):
        self.errors.append(error)
        self.matrices.append(f)
        if len(self.errors) > self.max_size:
            self.errors.pop(0)
            self.matrices.pop(0)
        k = len(self.errors)
        if k < 2:
            return f
        b = -np.ones((k + 1, k + 1))
        b[k, k] = 0.0
        for i in range(k):
            for j in range(k):
                b[i, j] = np.sum(self.errors[i] * self.errors[j])
        rhs = np.zeros(k + 1)
        rhs[k] = -1.0
        try:
            c = np.linalg.solve(b, rhs)[:k]
        except np.linalg.LinAlgError:
            return f
        return sum(ci * fi for ci, fi in zip(c, self.matrices))


def _fock_pieces(h_core, g, d_alpha, d_beta):
    j = np.einsum("pqrs,rs->pq", g, d_alpha + d_beta)
    k_alpha = np.einsum("prqs,rs->pq", g, d_alpha)
    k_beta = np.einsum("prqs,rs->pq", g, d_beta)
    return h_core + j - k_alpha, h_core + j - k_beta


def _density(c, n_occ):
    occ = c[:, :n_occ]
    return occ @ occ.T


def run_scf(s, t, v, g, n_electrons, ms2=0, e_nuc=0.0, max_iter=500, conv=1e-10,
            level_shift=0.0, guess="core"):
    """SCF over AO integrals; returns total energy and canonical MOs."""
    n_alpha = (n_electrons + ms2) // 2
    n_beta = n_electrons - n_alpha
    if n_alpha - n_beta != ms2:
        raise ScfError(f"cannot place {n_electrons} electrons with ms2={ms2}")
    h_core = t + v
    x = _symmetric_orthogonalizer(s)

    if guess == "gwh":
        diag = np.diag(h_core)
        f0 = 0.875 * s * (diag[:, None] + diag[None, :])
        np.fill_diagonal(f0, diag)
    else:
        f0 = h_core
    e_orb, c_prime = np.linalg.eigh(x.T @ f0 @ x)
    c = x @ c_prime
    diis = _Diis()
    energy = 0.0
    for it in range(1, max_iter + 1):
        d_alpha = _density(c, n_alpha)
        d_beta = _density(c, n_beta)
        f_alpha, f_beta = _fock_pieces(h_core, g, d_alpha, d_beta)
        energy_new = 0.5 * (
            np.sum((d_alpha + d_beta) * h_core)
            + np.sum(d_alpha * f_alpha)
            + np.sum(d_beta * f_beta)
        ) + e_nuc

        if n_alpha == n_beta:
            f_eff = f_alpha
        else:
            f_eff = _rohf_effective_fock(f_alpha, f_beta, c, s, n_alpha, n_beta)

        error = f_eff @ (d_alpha + d_beta) @ s - s @ (d_alpha + d_beta) @ f_eff
        f_use = diis.update(f_eff, x.T @ error @ x)
        f_prime = x.T @ f_use @ x
        if level_shift:
            shift = np.zeros_like(f_prime)
            occ_proj = x.T @ s @ _density(c, n_alpha) @ s @ x
            shift = level_shift * (np.eye(len(f_prime)) - occ_proj)
            f_prime = f_prime + shift
        e_orb, c_prime = np.linalg.eigh(f_prime)
        c = x @ c_prime

        if abs(energy_new - energy) < conv and it > 2:
            return ScfResult(float(energy_new), c, e_orb, n_alpha, n_beta, True, it)
        energy = energy_new
    return ScfResult(float(energy), c, e_orb, n_alpha, n_beta, False, max_iter)


def _rohf_effective_fock(f_alpha, f_beta, c, s, n_alpha, n_beta):
    """Guest-Saunders coupled single Fock matrix in the AO basis."""
    n = f_alpha.shape[0]
    f_avg = 0.5 * (f_alpha + f_beta)
    fa_mo = c.T @ f_alpha @ c
    fb_mo = c.T @ f_beta @ c
    favg_mo = 0.5 * (fa_mo + fb_mo)
    eff = favg_mo.copy()
    closed = slice(0, n_beta)
    open_ = slice(n_beta, n_alpha)
    virt = slice(n_alpha, n)
    eff[closed, open_] = fb_mo[closed, open_]
    eff[open_, closed] = fb_mo[open_, closed]
    eff[open_, virt] = fa_mo[open_, virt]
    eff[virt, open_] = fa_mo[virt, open_]
    # back to AO: eff_AO = S C eff C^T S
    return s @ c @ eff @ c.T @ s


def converge(s, t, v, g, n_electrons, ms2=0, e_nuc=0.0):
    """Best converged SCF over a small ladder of guesses and level shifts.

    The core guess can settle on an excited SCF solution for multiply bonded
    diatomics, so both guesses are always tried and the lowest converged
    energy wins.
    """
    best = None
    for guess in ("core", "gwh"):
        for shift in (0.0, 0.3, 1.0, 2.0):
            result = run_scf(s, t, v, g, n_electrons, ms2=ms2, e_nuc=e_nuc,
                             level_shift=shift, guess=guess)
            if result.converged:
                if best is None or result.energy < best.energy:
                    best = result
                break
    if best is None:
        raise ScfError("SCF failed to converge with every guess/shift combination")
    return best
