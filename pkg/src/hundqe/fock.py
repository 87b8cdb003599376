"""Fermionic Fock-space basics on occupation bitstrings.

A determinant over 2M spin orbitals is stored as an unsigned integer whose
bit ``2p`` is the spin-up occupation of spatial orbital ``p`` and bit
``2p + 1`` the spin-down occupation.  With that interleaved layout the
generalized Hund predicate ("a spin-down electron only where a spin-up one
already sits") is a two-bit mask test per orbital.

Ladder operators follow the Jordan-Wigner sign convention: acting on mode
``j`` picks up ``(-1)**popcount(bits below j)``.  The array-valued kernels
apply one operator to every determinant of a basis at once using numpy
bit operations, which is what makes restricted-Hamiltonian assembly cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import CapacityError

MAX_MODES = 63  # a determinant must fit one machine word

_EVEN_MASK = sum(1 << i for i in range(0, 64, 2))  # spin-up positions


def _check_modes(n_modes: int) -> None:
    if n_modes > MAX_MODES:
        raise CapacityError(f"{n_modes} spin orbitals exceed the {MAX_MODES}-bit determinant capacity")
    if n_modes < 0:
        raise ValueError("n_modes must be nonnegative")


@dataclass(frozen=True)
class Determinant:
    """One occupation-number basis state over ``n_modes`` spin orbitals."""

    bits: int
    n_modes: int

    def __post_init__(self):
        _check_modes(self.n_modes)
        if self.bits < 0 or self.bits >> self.n_modes:
            raise ValueError(f"bits 0b{self.bits:b} has occupation outside {self.n_modes} modes")

    @property
    def n_electrons(self) -> int:
        return self.bits.bit_count()

    def occupied_modes(self) -> list[int]:
        return [i for i in range(self.n_modes) if (self.bits >> i) & 1]

    def __repr__(self):
        return f"Determinant(0b{self.bits:0{self.n_modes}b})"


def hund_satisfied(d: Determinant) -> bool:
    """True iff every spin-down electron shares its orbital with a spin-up one."""
    up = d.bits & _EVEN_MASK
    down = (d.bits >> 1) & _EVEN_MASK
    return down & ~up == 0


class SelectorKind(Enum):
    HUND = "hund"
    PARTICLE_CONSERVING = "pc"
    FULL = "full"


@dataclass(frozen=True)
class Selector:
    """Subspace selection predicate: Hund(N), ParticleConserving(N) or Full."""

    kind: SelectorKind
    n_electrons: int | None = None

    @classmethod
    def hund(cls, n_electrons: int) -> "Selector":
        return cls(SelectorKind.HUND, n_electrons)

    @classmethod
    def particle_conserving(cls, n_electrons: int) -> "Selector":
        return cls(SelectorKind.PARTICLE_CONSERVING, n_electrons)

    @classmethod
    def full(cls) -> "Selector":
        return cls(SelectorKind.FULL)

    def admits(self, d: Determinant) -> bool:
        if self.kind is SelectorKind.FULL:
            return True
        if d.n_electrons != self.n_electrons:
            return False
        return self.kind is SelectorKind.PARTICLE_CONSERVING or hund_satisfied(d)


@dataclass(frozen=True)
class SubspaceBasis:
    """Exhaustive, strictly increasing list of admitted determinants.

    The position of a determinant in ``bit_array`` is its encoding index.
    """

    bit_array: np.ndarray  # uint64, strictly increasing
    n_modes: int
    selector: Selector

    @property
    def size(self) -> int:
        return int(self.bit_array.shape[0])

    @property
    def determinants(self) -> list[Determinant]:
        return [Determinant(int(b), self.n_modes) for b in self.bit_array]

    def index_of(self, bits: int) -> int:
        """Encoding index of a determinant, or -1 when outside the basis."""
        i = int(np.searchsorted(self.bit_array, np.uint64(bits)))
        if i < self.size and int(self.bit_array[i]) == bits:
            return i
        return -1

    def __len__(self):
        return self.size


def _pc_bitstrings(n_modes: int, n: int) -> list[int]:
    return [sum(1 << i for i in occ) for occ in combinations(range(n_modes), n)]


def _hund_bitstrings(n_orbitals: int, n: int) -> list[int]:
    # N - k spin-up electrons choose their orbitals, then k of those
    # orbitals also take a spin-down electron.
    out = []
    for k in range(n // 2 + 1):
        n_up = n - k
        if n_up > n_orbitals:
            continue
        for up in combinations(range(n_orbitals), n_up):
            up_bits = sum(1 << (2 * p) for p in up)
            for down in combinations(up, k):
                out.append(up_bits + sum(1 << (2 * p + 1) for p in down))
    return out


def enumerate_subspace(n_modes: int, selector: Selector) -> SubspaceBasis:
    """All determinants admitted by the selector, in ascending bit order."""
    _check_modes(n_modes)
    if selector.kind is SelectorKind.FULL:
        bits = np.arange(1 << n_modes, dtype=np.uint64)
        return SubspaceBasis(bits, n_modes, selector)
    n = selector.n_electrons
    if n is None or not 0 <= n <= n_modes:
        raise ValueError(f"electron count {n} outside [0, {n_modes}]")
    if selector.kind is SelectorKind.HUND:
        if n_modes % 2:
            raise ValueError("Hund selector needs an even number of spin orbitals")
        raw = _hund_bitstrings(n_modes // 2, n)
    else:
        raw = _pc_bitstrings(n_modes, n)
    bits = np.array(sorted(raw), dtype=np.uint64)
    return SubspaceBasis(bits, n_modes, selector)


def hund_count(m: int, n: int) -> int:
    """Number of N-electron determinants over M orbitals obeying the Hund rule.

    Exact integer sum over k spin-down electrons: C(M, N-k) * C(N-k, k).
    """
    if not 0 <= n <= 2 * m:
        raise ValueError(f"electron count {n} outside [0, {2 * m}]")
    return sum(math.comb(m, n - k) * math.comb(n - k, k) for k in range(n // 2 + 1))


def pc_count(m: int, n: int) -> int:
    """Particle-conserving basis size C(2M, N)."""
    if not 0 <= n <= 2 * m:
        raise ValueError(f"electron count {n} outside [0, {2 * m}]")
    return math.comb(2 * m, n)


def basis_ratio(m: int, n: int) -> Fraction:
    """Exact ratio of the particle-conserving count to the Hund count."""
    return Fraction(pc_count(m, n), hund_count(m, n))


def qubit_requirement(basis_size: int) -> int:
    """Qubits needed to index a basis: ceil(log2(size)), 0 for a single state."""
    if basis_size < 1:
        raise ValueError("basis_size must be positive")
    return (basis_size - 1).bit_length()


@dataclass(frozen=True)
class FermionicOp:
    """A single creation or annihilation operator on one mode."""

    create: bool
    mode: int

    @classmethod
    def creation(cls, mode: int) -> "FermionicOp":
        return cls(True, mode)

    @classmethod
    def annihilation(cls, mode: int) -> "FermionicOp":
        return cls(False, mode)


def apply_op_array(op: FermionicOp, bits: np.ndarray):
    """Vectorized ladder operator on an array of determinants.

    Returns ``(source_indices, target_bits, phases)`` covering exactly the
    determinants on which the operator does not vanish.
    """
    j = op.mode
    mask = np.uint64(1 << j)
    occupied = (bits & mask) != 0
    keep = ~occupied if op.create else occupied
    src = np.nonzero(keep)[0]
    kept = bits[src]
    parity = np.bitwise_count(kept & np.uint64((1 << j) - 1)).astype(np.int8) & 1
    phases = 1 - 2 * parity.astype(np.int64)
    return src, kept ^ mask, phases


def apply_fermionic_op(op: FermionicOp, basis: SubspaceBasis):
    """Operator action on every basis determinant, omitting vanishing ones."""
    if op.mode >= basis.n_modes:
        raise ValueError(f"mode {op.mode} outside {basis.n_modes} modes")
    src, targets, phases = apply_op_array(op, basis.bit_array)
    return [
        (int(i), Determinant(int(t), basis.n_modes), int(p))
        for i, t, p in zip(src, targets, phases)
    ]


def apply_string_array(ops, bits: np.ndarray):
    """Vectorized right-to-left product of ladder operators.

    ``ops`` is in operator order (leftmost acts last).  Returns
    ``(source_indices, target_bits, phases)`` for the surviving determinants.
    """
    src = np.arange(bits.shape[0])
    phases = np.ones(bits.shape[0], dtype=np.int64)
    for op in reversed(ops):
        sub, bits, step_phases = apply_op_array(op, bits)
        src = src[sub]
        phases = phases[sub] * step_phases
        if src.size == 0:
            break
    return src, bits, phases


def apply_fermionic_string(ops, d: Determinant):
    """Apply an operator product to one determinant.

    Returns ``(Determinant, phase)`` or ``None`` when any factor vanishes.
    """
    for op in ops:
        if op.mode >= d.n_modes:
            raise ValueError(f"mode {op.mode} outside {d.n_modes} modes")
    src, bits, phases = apply_string_array(ops, np.array([d.bits], dtype=np.uint64))
    if src.size == 0:
        return None
    return Determinant(int(bits[0]), d.n_modes), int(phases[0])
