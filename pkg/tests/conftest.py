import json
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hundqe import fcidump, fock, hamiltonian, spectra

FIXTURES = Path(__file__).parent.parent / "fixtures"
MOLECULES = FIXTURES / "molecules"
SCANS = FIXTURES / "scans"

MOLECULE_NAMES = [
    "beh2", "bh3", "ch4", "co", "h2", "h2co", "h2o", "h2o2",
    "heh+", "hf", "lih", "n2", "nh3", "no", "o2",
]


def load_table(name: str) -> fcidump.IntegralTable:
    return fcidump.parse_fcidump((MOLECULES / f"{name}.fcidump").read_text())


def load_sidecar(name: str) -> dict:
    return json.loads((MOLECULES / f"{name}.json").read_text())


def random_table(rng: np.random.Generator, m: int) -> fcidump.IntegralTable:
    """Random symmetric integrals with the full 8-fold ERI symmetry."""
    table = fcidump.IntegralTable(n_orbitals=m, n_electrons=m, core_energy=float(rng.normal()))
    h = rng.normal(size=(m, m))
    table.one_body = (h + h.T) / 2
    for p in range(m):
        for q in range(p + 1):
            for r in range(m):
                for s in range(r + 1):
                    if (p, q) >= (r, s):
                        table.set_eri(p, q, r, s, float(rng.normal()))
    return table


class _SolveCache:
    """Hund-basis matrix and ground state per fixture, built once per session."""

    def __init__(self):
        self._store = {}

    def entry(self, name: str):
        if name not in self._store:
            table = load_table(name)
            selector = fock.Selector.hund(table.n_electrons)
            basis = fock.enumerate_subspace(2 * table.n_orbitals, selector)
            matrix = hamiltonian.restrict_hamiltonian(table, basis)
            result = spectra.solve(matrix)
            self._store[name] = (table, basis, matrix, result)
        return self._store[name]


@pytest.fixture(scope="session")
def hund_cache():
    return _SolveCache()
