"""Molecular ground states on Hund-restricted subspaces, with Pauli export."""

from .errors import (
    CapacityError,
    ConvergenceError,
    DimensionError,
    FcidumpParseError,
    HundqeError,
)
from .fcidump import IntegralTable, parse_fcidump, write_fcidump
from .fock import (
    Determinant,
    FermionicOp,
    Selector,
    SubspaceBasis,
    apply_fermionic_op,
    apply_fermionic_string,
    basis_ratio,
    enumerate_subspace,
    hund_count,
    hund_satisfied,
    pc_count,
    qubit_requirement,
)
from .hamiltonian import (
    SparseHamiltonian,
    apply_hamiltonian,
    restrict_hamiltonian,
    sector_split,
)
from .spectra import GroundStateResult, Method, solve, solve_dense, solve_lanczos
from .encode import (
    EncodingMap,
    ExtendedHamiltonian,
    PauliTerm,
    apply_encoding,
    export_pauli,
    minimal_extend,
    parse_pauli,
    pauli_decompose,
)

__all__ = [name for name in dir() if not name.startswith("_")]
