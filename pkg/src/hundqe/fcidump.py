"""FCIDUMP reading and writing.

The FCIDUMP text format carries a namelist header (NORB, NELEC, MS2, ...)
followed by records ``value i j k l`` with 1-based orbital indices:
``i j 0 0`` is a one-electron integral, all-zero indices the core energy,
anything else a chemist-notation two-electron integral (ij|kl).  Two-body
values are stored once under a canonical index; the accessor resolves all
eight symmetry-equivalent index images to that slot.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import FcidumpParseError


def canonical_eri_index(p: int, q: int, r: int, s: int) -> tuple[int, int, int, int]:
    """Representative of the 8-fold symmetry class of (pq|rs)."""
    a = (p, q) if p >= q else (q, p)
    b = (r, s) if r >= s else (s, r)
    return a + b if a >= b else b + a


@dataclass
class IntegralTable:
    """Molecular integrals in the spatial-orbital basis (chemist notation)."""

    n_orbitals: int
    n_electrons: int
    ms2: int = 0
    core_energy: float = 0.0
    one_body: np.ndarray = None
    two_body: dict = field(default_factory=dict)  # canonical (p,q,r,s) -> value

    def __post_init__(self):
        if self.one_body is None:
            self.one_body = np.zeros((self.n_orbitals, self.n_orbitals))

    def set_h(self, p: int, q: int, value: float) -> None:
        self.one_body[p, q] = value
        self.one_body[q, p] = value

    def set_eri(self, p: int, q: int, r: int, s: int, value: float) -> None:
        self.two_body[canonical_eri_index(p, q, r, s)] = value

    def get_eri(self, p: int, q: int, r: int, s: int) -> float:
        return self.two_body.get(canonical_eri_index(p, q, r, s), 0.0)

    def dense_eri(self) -> np.ndarray:
        """Expand the canonical store into a full (M,M,M,M) array."""
        m = self.n_orbitals
        eri = np.zeros((m, m, m, m))
        for (p, q, r, s), v in self.two_body.items():
            for a, b in ((p, q), (q, p)):
                for c, d in ((r, s), (s, r)):
                    eri[a, b, c, d] = v
                    eri[c, d, a, b] = v
        return eri


_NUM = re.compile(r"[-+]?(\d+\.?\d*|\.\d+)([EeDd][-+]?\d+)?$")


def _to_float(token: str) -> float:
    return float(token.replace("D", "E").replace("d", "e"))


def parse_fcidump(text) -> IntegralTable:
    """Parse FCIDUMP text (str or bytes) into an IntegralTable."""
    if isinstance(text, bytes):
        text = text.decode("ascii")
    lines = text.splitlines()

    header_lines = []
    body_start = None
    for ln, line in enumerate(lines):
        stripped = line.strip()
        header_lines.append(stripped)
        if "&END" in stripped.upper() or stripped == "/" or stripped.endswith("/"):
            body_start = ln + 1
            break
    if body_start is None:
        raise FcidumpParseError("header not terminated by &END or /")

    header = " ".join(header_lines)

    def header_int(key):
        m = re.search(rf"{key}\s*=\s*([-+]?\d+)", header, re.IGNORECASE)
        return int(m.group(1)) if m else None

    norb = header_int("NORB")
    nelec = header_int("NELEC")
    if norb is None or nelec is None:
        raise FcidumpParseError("header is missing NORB or NELEC", line=1)
    ms2 = header_int("MS2") or 0

    table = IntegralTable(n_orbitals=norb, n_electrons=nelec, ms2=ms2)

    for ln in range(body_start, len(lines)):
        tokens = lines[ln].split()
        if not tokens:
            continue
        if len(tokens) != 5:
            raise FcidumpParseError(f"expected 'value i j k l', got {lines[ln]!r}", line=ln + 1)
        if not _NUM.match(tokens[0]):
            raise FcidumpParseError(f"non-numeric value {tokens[0]!r}", line=ln + 1)
        try:
            value = _to_float(tokens[0])
            i, j, k, l = (int(t) for t in tokens[1:])
        except ValueError:
            raise FcidumpParseError(f"malformed record {lines[ln]!r}", line=ln + 1)
        for idx in (i, j, k, l):
            if not 0 <= idx <= norb:
                raise FcidumpParseError(f"orbital index {idx} outside [0, {norb}]", line=ln + 1)
        if i == j == k == l == 0:
            table.core_energy = value
        elif k == 0 and l == 0:
            if i == 0 or j == 0:
                raise FcidumpParseError(f"one-body record with zero index: {lines[ln]!r}", line=ln + 1)
            table.set_h(i - 1, j - 1, value)
        else:
            if 0 in (i, j, k, l):
                raise FcidumpParseError(f"two-body record with zero index: {lines[ln]!r}", line=ln + 1)
            table.set_eri(i - 1, j - 1, k - 1, l - 1, value)
    return table


def format_record(value: float, i: int, j: int, k: int, l: int) -> str:
    return f"{value:23.16E} {i:4d} {j:4d} {k:4d} {l:4d}"


def write_fcidump(table: IntegralTable) -> str:
    """Canonical FCIDUMP text: header, two-body, one-body, core energy last."""
    m = table.n_orbitals
    out = [
        f"&FCI NORB={m},NELEC={table.n_electrons},MS2={table.ms2},",
        " ORBSYM=" + "1," * m,
        " ISYM=1,",
        "&END",
    ]
    for key in sorted(table.two_body):
        v = table.two_body[key]
        if v != 0.0:
            p, q, r, s = key
            out.append(format_record(v, p + 1, q + 1, r + 1, s + 1))
    for p in range(m):
        for q in range(p + 1):
            v = table.one_body[p, q]
            if v != 0.0:
                out.append(format_record(v, p + 1, q + 1, 0, 0))
    out.append(format_record(table.core_energy, 0, 0, 0, 0))
    return "\n".join(out) + "\n"
