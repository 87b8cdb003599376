"""Power-of-two extension, encoding maps, and Pauli-string decomposition.

A restricted Hamiltonian of dimension k is zero-padded to the next
power-of-two dimension 2**n (the padding block is exactly zero, so the
spectrum only gains zeros), optionally conjugated by a permutation
encoding map, and decomposed over tensor products of {I, X, Y, Z}.

Coefficients are Hilbert-Schmidt projections c_P = tr(P A) / 2**n,
computed by recursive single-qubit block reduction in O(n 4**n) instead of
forming each Pauli matrix.  The leftmost character of a string acts on the
highest-order bit of the computational index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import CapacityError, DimensionError
from .hamiltonian import SparseHamiltonian

DECOMPOSE_QUBIT_CAP = 14
DENSE_EXTEND_CAP = 4096
COEFF_PRUNE = 1e-12

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class ExtendedHamiltonian:
    """A Hermitian 2**n x 2**n matrix whose top-left k x k block is the payload.

    The matrix is dense up to DENSE_EXTEND_CAP rows and scipy CSR above it.
    """

    n_qubits: int
    matrix: object
    original_dim: int

    def to_dense(self) -> np.ndarray:
        if sp.issparse(self.matrix):
            return self.matrix.toarray()
        return np.asarray(self.matrix)


@dataclass(frozen=True)
class PauliTerm:
    coefficient: float
    string: str


@dataclass(frozen=True)
class EncodingMap:
    """Permutation from extended-space index to computational-basis index."""

    permutation: np.ndarray

    @classmethod
    def identity(cls, n_qubits: int) -> "EncodingMap":
        return cls(np.arange(1 << n_qubits))

    def __post_init__(self):
        perm = np.asarray(self.permutation)
        if sorted(perm.tolist()) != list(range(perm.shape[0])):
            raise ValueError("encoding map must be a permutation")


def minimal_extend(h: SparseHamiltonian) -> ExtendedHamiltonian:
    """Embed the matrix into the smallest whole-qubit register that fits it."""
    if h.dim < 1:
        raise ValueError("empty Hamiltonian")
    n = max(h.dim - 1, 0).bit_length()
    size = 1 << n
    if size > DENSE_EXTEND_CAP:
        full = sp.csr_matrix(
            (h.values, (h.rows, h.cols)), shape=(size, size)
        )
    else:
        full = np.zeros((size, size))
        full[: h.dim, : h.dim] = h.to_dense()
    return ExtendedHamiltonian(n_qubits=n, matrix=full, original_dim=h.dim)


def apply_encoding(eh: ExtendedHamiltonian, e: EncodingMap) -> ExtendedHamiltonian:
    """Conjugate by the permutation; the spectrum is unchanged."""
    perm = np.asarray(e.permutation)
    size = eh.matrix.shape[0]
    if perm.shape[0] != size:
        raise DimensionError(
            f"encoding map of size {perm.shape[0]} does not fit 2^{eh.n_qubits}"
        )
    if sp.issparse(eh.matrix):
        p = sp.csr_matrix(
            (np.ones(size), (perm, np.arange(size))), shape=(size, size)
        )
        out = p @ eh.matrix @ p.T
    else:
        out = np.zeros_like(eh.matrix)
        out[np.ix_(perm, perm)] = eh.matrix
    return ExtendedHamiltonian(eh.n_qubits, out, eh.original_dim)


def _decompose_block(a: np.ndarray, prefix: str, out: list) -> None:
    if a.shape[0] == 1:
        out.append((prefix, complex(a[0, 0])))
        return
    half = a.shape[0] // 2
    a00, a01 = a[:half, :half], a[:half, half:]
    a10, a11 = a[half:, :half], a[half:, half:]
    blocks = (
        ("I", (a00 + a11) / 2),
        ("X", (a01 + a10) / 2),
        ("Y", 1j * (a01 - a10) / 2),
        ("Z", (a00 - a11) / 2),
    )
    for label, block in blocks:
        # every coefficient below is an average of block entries, so a
        # uniformly tiny block cannot produce a surviving term
        if np.max(np.abs(block)) > COEFF_PRUNE:
            _decompose_block(block, prefix + label, out)


def pauli_decompose(eh: ExtendedHamiltonian) -> list[PauliTerm]:
    """Hilbert-Schmidt projection of a Hermitian matrix onto Pauli strings."""
    if eh.n_qubits > DECOMPOSE_QUBIT_CAP:
        raise CapacityError(
            f"{eh.n_qubits} qubits exceed the dense decomposition cap {DECOMPOSE_QUBIT_CAP}"
        )
    raw: list[tuple[str, complex]] = []
    _decompose_block(eh.to_dense().astype(complex), "", raw)
    terms = []
    for string, c in raw:
        if abs(c) <= COEFF_PRUNE:
            continue
        if abs(c.imag) > 1e-12:
            raise ValueError(f"non-Hermitian input: coefficient {c} for {string}")
        terms.append(PauliTerm(float(c.real), string))
    terms.sort(key=lambda t: t.string)
    return terms


def pauli_matrix(string: str) -> np.ndarray:
    """Dense matrix of a Pauli string (leftmost char = highest-order bit)."""
    m = np.eye(1, dtype=complex)
    for ch in string:
        m = np.kron(m, _PAULI[ch])
    return m


def reconstruct(terms: list[PauliTerm], n_qubits: int) -> np.ndarray:
    total = np.zeros((1 << n_qubits, 1 << n_qubits), dtype=complex)
    for t in terms:
        total += t.coefficient * pauli_matrix(t.string)
    return total


def export_pauli(terms: list[PauliTerm], fmt: str = "text") -> str:
    """One 'coefficient<TAB>string' line per term, or a JSON document."""
    terms = sorted(terms, key=lambda t: t.string)
    if fmt == "json":
        doc = {
            "n_qubits": len(terms[0].string) if terms else 0,
            "terms": [{"coefficient": t.coefficient, "string": t.string} for t in terms],
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    return "".join(f"{t.coefficient!r}\t{t.string}\n" for t in terms)


def parse_pauli(text: str) -> list[PauliTerm]:
    """Inverse of the text export."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(text)
        return [PauliTerm(t["coefficient"], t["string"]) for t in doc["terms"]]
    terms = []
    for line in text.splitlines():
        if not line.strip():
            continue
        coeff, string = line.split("\t")
        terms.append(PauliTerm(float(coeff), string))
    return terms
