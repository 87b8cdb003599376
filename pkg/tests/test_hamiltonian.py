import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hundqe import fcidump, fock, hamiltonian
from hundqe.errors import DimensionError, HundqeError

from conftest import load_table, random_table
from jw_oracle import hamiltonian_matrix


def slater_condon_diagonal(table, bits: int) -> float:
    """Independent diagonal matrix element for one determinant.

    <D|H|D> = E_core + sum_i h_ii + sum_{i<j} [(ii|jj) - delta_spin (ij|ji)]
    over occupied spin orbitals i = 2p + s.
    """
    occupied = [i for i in range(2 * table.n_orbitals) if (bits >> i) & 1]
    total = table.core_energy
    for i in occupied:
        total += table.one_body[i // 2, i // 2]
    for a, i in enumerate(occupied):
        for j in occupied[:a]:
            p, q = i // 2, j // 2
            total += table.get_eri(p, p, q, q)
            if i % 2 == j % 2:
                total -= table.get_eri(p, q, q, p)
    return total


class TestApplyHamiltonian:
    def test_vacuum_sees_only_core(self):
        table = random_table(np.random.default_rng(0), 3)
        result = hamiltonian.apply_hamiltonian(table, fock.Determinant(0, 6))
        assert len(result) == 1
        d, amp = result[0]
        assert d.bits == 0
        assert amp == pytest.approx(table.core_energy)

    def test_h2_sigma_g_diagonal(self):
        table = load_table("h2")
        result = dict(hamiltonian.apply_hamiltonian(table, fock.Determinant(0b0011, 4)))
        diagonal = result[fock.Determinant(0b0011, 4)]
        expected = 2 * table.one_body[0, 0] + table.get_eri(0, 0, 0, 0) + table.core_energy
        assert diagonal == pytest.approx(expected, abs=1e-12)

    def test_single_mode_table(self):
        table = fcidump.IntegralTable(n_orbitals=1, n_electrons=1, core_energy=0.25)
        table.set_h(0, 0, -0.75)
        result = dict(hamiltonian.apply_hamiltonian(table, fock.Determinant(0b01, 2)))
        assert result[fock.Determinant(0b01, 2)] == pytest.approx(-0.5)

    def test_mode_mismatch(self):
        table = random_table(np.random.default_rng(0), 2)
        with pytest.raises(DimensionError):
            hamiltonian.apply_hamiltonian(table, fock.Determinant(0, 6))

    @given(st.integers(0, 2**32), st.integers(1, 3), st.data())
    @settings(max_examples=25, deadline=None)
    def test_diagonal_matches_slater_condon(self, seed, m, data):
        table = random_table(np.random.default_rng(seed), m)
        bits = data.draw(st.integers(0, (1 << (2 * m)) - 1))
        d = fock.Determinant(bits, 2 * m)
        amplitudes = dict(hamiltonian.apply_hamiltonian(table, d))
        assert amplitudes.get(d, 0.0) == pytest.approx(
            slater_condon_diagonal(table, bits), abs=1e-10
        )


class TestRestrictHamiltonian:
    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_full_basis_equals_jw_oracle(self, m):
        table = random_table(np.random.default_rng(m), m)
        basis = fock.enumerate_subspace(2 * m, fock.Selector.full())
        built = hamiltonian.restrict_hamiltonian(table, basis).to_dense()
        oracle = hamiltonian_matrix(table, 2 * m).toarray()
        assert np.max(np.abs(built - oracle)) < 1e-12

    def test_projection_of_oracle_matches_hund_restriction(self):
        table = random_table(np.random.default_rng(11), 3)
        basis = fock.enumerate_subspace(6, fock.Selector.hund(3))
        built = hamiltonian.restrict_hamiltonian(table, basis).to_dense()
        oracle = hamiltonian_matrix(table, 6).toarray()
        idx = basis.bit_array.astype(int)
        assert np.max(np.abs(built - oracle[np.ix_(idx, idx)])) < 1e-12

    def test_h2_variational_ordering(self):
        table = load_table("h2")
        hund = fock.enumerate_subspace(4, fock.Selector.hund(2))
        pc = fock.enumerate_subspace(4, fock.Selector.particle_conserving(2))
        e_hund = np.linalg.eigvalsh(hamiltonian.restrict_hamiltonian(table, hund).to_dense())[0]
        e_fci = np.linalg.eigvalsh(hamiltonian.restrict_hamiltonian(table, pc).to_dense())[0]
        assert e_hund >= e_fci - 1e-12

    def test_single_closed_shell_determinant(self):
        table = load_table("h2")
        bits = 0b0011
        basis = fock.SubspaceBasis(
            np.array([bits], dtype=np.uint64), 4, fock.Selector.particle_conserving(2)
        )
        matrix = hamiltonian.restrict_hamiltonian(table, basis).to_dense()
        assert matrix.shape == (1, 1)
        assert matrix[0, 0] == pytest.approx(slater_condon_diagonal(table, bits), abs=1e-12)

    def test_hermitian(self):
        table = random_table(np.random.default_rng(3), 3)
        basis = fock.enumerate_subspace(6, fock.Selector.hund(4))
        dense = hamiltonian.restrict_hamiltonian(table, basis).to_dense()
        assert np.max(np.abs(dense - dense.T)) < 1e-10

    def test_empty_basis_rejected(self):
        table = random_table(np.random.default_rng(0), 2)
        basis = fock.SubspaceBasis(
            np.array([], dtype=np.uint64), 4, fock.Selector.particle_conserving(1)
        )
        with pytest.raises(HundqeError):
            hamiltonian.restrict_hamiltonian(table, basis)

    def test_linearity_under_scaling(self):
        rng = np.random.default_rng(5)
        table = random_table(rng, 2)
        scaled = fcidump.IntegralTable(
            n_orbitals=2, n_electrons=2, core_energy=3.0 * table.core_energy
        )
        scaled.one_body = 3.0 * table.one_body
        scaled.two_body = {k: 3.0 * v for k, v in table.two_body.items()}
        basis = fock.enumerate_subspace(4, fock.Selector.hund(2))
        a = hamiltonian.restrict_hamiltonian(table, basis).to_dense()
        b = hamiltonian.restrict_hamiltonian(scaled, basis).to_dense()
        assert np.max(np.abs(b - 3.0 * a)) < 1e-10

    def test_entries_block_diagonal_over_sectors(self):
        table = load_table("h2o")
        basis = fock.enumerate_subspace(14, fock.Selector.hund(10))
        matrix = hamiltonian.restrict_hamiltonian(table, basis)
        bits = basis.bit_array
        even = np.uint64(sum(1 << i for i in range(0, 64, 2)))
        n_up = np.bitwise_count(bits & even)
        for r, c in zip(matrix.rows, matrix.cols):
            assert n_up[r] == n_up[c]


class TestSectorSplit:
    def test_h2_hund_sectors(self):
        basis = fock.enumerate_subspace(4, fock.Selector.hund(2))
        sizes = sorted(p.size for p in hamiltonian.sector_split(basis))
        assert sizes == [1, 2]  # k=1 doubly occupied, k=0 two spin-up

    def test_single_determinant(self):
        basis = fock.SubspaceBasis(
            np.array([0b0011], dtype=np.uint64), 4, fock.Selector.particle_conserving(2)
        )
        assert len(hamiltonian.sector_split(basis)) == 1

    def test_h2o_hund_sector_sizes(self):
        basis = fock.enumerate_subspace(14, fock.Selector.hund(10))
        sizes = sorted(p.size for p in hamiltonian.sector_split(basis))
        assert sizes == [21, 35, 105]  # k = 5, 3, 4 spin-down electrons

    def test_partition_is_exact(self):
        basis = fock.enumerate_subspace(12, fock.Selector.hund(6))
        parts = hamiltonian.sector_split(basis)
        merged = sorted(b for p in parts for b in p.bit_array.tolist())
        assert merged == basis.bit_array.tolist()

    def test_full_selector_rejected(self):
        basis = fock.enumerate_subspace(4, fock.Selector.full())
        with pytest.raises(ValueError):
            hamiltonian.sector_split(basis)

    def test_sector_minima_cover_global_minimum(self):
        table = load_table("h2o")
        basis = fock.enumerate_subspace(14, fock.Selector.hund(10))
        whole = np.linalg.eigvalsh(hamiltonian.restrict_hamiltonian(table, basis).to_dense())[0]
        per_sector = min(
            np.linalg.eigvalsh(hamiltonian.restrict_hamiltonian(table, part).to_dense())[0]
            for part in hamiltonian.sector_split(basis)
        )
        assert whole == pytest.approx(per_sector, abs=1e-10)
