"""Canonical FCIDUMP emission.

The record layout (header, two-body records in canonical index order,
one-body records, core energy last, fixed-width value formatting) is the
interchange contract with the consuming solver: a file written here must
survive its parse -> write cycle byte-identically.
"""

from __future__ import annotations

import numpy as np

WRITE_THRESHOLD = 1e-12


def canonical_eri_index(p, q, r, s):
    a = (p, q) if p >= q else (q, p)
    b = (r, s) if r >= s else (s, r)
    return a + b if a >= b else b + a


def format_record(value, i, j, k, l):
    return f"{value:23.16E} {i:4d} {j:4d} {k:4d} {l:4d}"


def fcidump_text(h_mo: np.ndarray, g_mo: np.ndarray, e_core: float,
                 n_electrons: int, ms2: int = 0) -> str:
    m = h_mo.shape[0]
    lines = [
        f"&FCI NORB={m},NELEC={n_electrons},MS2={ms2},",
        " ORBSYM=" + "1," * m,
        " ISYM=1,",
        "&END",
    ]
    two_body = {}
    for p in range(m):
        for q in range(p + 1):
            for r in range(m):
                for s in range(r + 1):
                    if (p, q) < (r, s):
                        continue
                    v = g_mo[p, q, r, s]
                    if abs(v) > WRITE_THRESHOLD:
                        two_body[(p, q, r, s)] = v
    for key in sorted(two_body):
        p, q, r, s = key
        lines.append(format_record(two_body[key], p + 1, q + 1, r + 1, s + 1))
    for p in range(m):
        for q in range(p + 1):
            if abs(h_mo[p, q]) > WRITE_THRESHOLD:
                lines.append(format_record(h_mo[p, q], p + 1, q + 1, 0, 0))
    lines.append(format_record(e_core, 0, 0, 0, 0))
    return "\n".join(lines) + "\n"
