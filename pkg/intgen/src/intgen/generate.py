"""Batch fixture generation from a geometry manifest.

Reads a JSON manifest describing molecules (Cartesian geometries, Angstrom)
and scan families (diatomic bond stretches, small water grids), and writes
FCIDUMP files, RHF/FCI sidecar records, and scan manifests into an output
directory.  Idempotent per output path; a failed scan family is removed so
no partial grids are left behind.
"""

from __future__ import annotations

import argparse
import json
import math
import shutil
import sys
from pathlib import Path

import numpy as np

from .basis import ANGSTROM_TO_BOHR, ATOMIC_NUMBER, build_basis
from .ci import fci_ground_state
from .emit import fcidump_text
from .integrals import integral_tables, moment_tables, nuclear_repulsion
from .scf import ScfError, converge


def _to_bohr(atoms):
    return [(el, tuple(c * ANGSTROM_TO_BOHR for c in xyz)) for el, *xyz in atoms]


DEGENERACY_TOL = 1e-7


def _split_diagonalize(block, operators, tol=DEGENERACY_TOL):
    """Resolve a degenerate orbital block by diagonalizing operators in turn."""
    if not operators:
        return block
    op = operators[0]
    m = block.T @ op @ block
    w, u = np.linalg.eigh((m + m.T) / 2)
    block = block @ u
    pieces = []
    i = 0
    while i < len(w):
        j = i
        while j + 1 < len(w) and w[j + 1] - w[i] < tol:
            j += 1
        sub = block[:, i : j + 1]
        if j > i:
            sub = _split_diagonalize(sub, operators[1:], tol)
        pieces.append(sub)
        i = j + 1
    return np.hstack(pieces)


def _canonicalize_orbitals(c, orbital_energies, dipoles, n_alpha, n_beta):
    """Deterministic orbital choice inside degenerate canonical blocks.

    Eigensolvers return an arbitrary rotation within each degenerate orbital
    energy block, and downstream consumers that select determinant subspaces
    are sensitive to it.  Diagonalizing the dipole operators (x, then y, then
    z on remaining ties) pins the rotation to the molecular geometry.  Blocks
    are cut at the occupation boundaries so occupied and empty orbitals never
    mix, keeping the mean-field energy intact.
    """
    c = c.copy()
    n = c.shape[1]
    boundaries = {n_beta, n_alpha}
    i = 0
    while i < n:
        j = i
        while (
            j + 1 < n
            and orbital_energies[j + 1] - orbital_energies[i] < DEGENERACY_TOL
            and j + 1 not in boundaries
        ):
            j += 1
        if j > i:
            c[:, i : j + 1] = _split_diagonalize(c[:, i : j + 1], list(dipoles))
        i = j + 1
    # sign convention: largest-magnitude coefficient positive
    for k in range(n):
        pivot = np.argmax(np.abs(c[:, k]))
        if c[pivot, k] < 0:
            c[:, k] = -c[:, k]
    return c


def compute_molecule(atoms, charge=0, ms2=None):
    """Integrals in the RHF MO basis plus reference energies, from Angstrom geometry."""
    atoms_bohr = _to_bohr(atoms)
    n_electrons = sum(ATOMIC_NUMBER[el] for el, _ in atoms_bohr) - charge
    if ms2 is None:
        ms2 = n_electrons % 2
    charges = [(ATOMIC_NUMBER[el], np.array(xyz)) for el, xyz in atoms_bohr]
    functions = build_basis(atoms_bohr)
    s, t, v, g = integral_tables(functions, charges)
    e_nuc = nuclear_repulsion(charges)
    scf = converge(s, t, v, g, n_electrons, ms2=ms2, e_nuc=e_nuc)
    c = _canonicalize_orbitals(
        scf.mo_coefficients, scf.orbital_energies, moment_tables(functions),
        scf.n_alpha, scf.n_beta,
    )
    h_mo = c.T @ (t + v) @ c
    g_mo = np.einsum("pi,qj,rk,sl,pqrs->ijkl", c, c, c, c, g, optimize=True)
    e_fci = fci_ground_state(h_mo, g_mo, e_nuc, n_electrons, ms2=ms2)
    return {
        "h_mo": h_mo,
        "g_mo": g_mo,
        "e_nuc": e_nuc,
        "n_orbitals": h_mo.shape[0],
        "n_electrons": n_electrons,
        "ms2": ms2,
        "e_rhf": scf.energy,
        "e_fci": e_fci,
    }


def generate_fixture(spec, out_dir: Path, skip_existing=False):
    name = spec["name"]
    fcidump_path = out_dir / f"{name}.fcidump"
    sidecar_path = out_dir / f"{name}.json"
    if skip_existing and fcidump_path.exists() and sidecar_path.exists():
        return json.loads(sidecar_path.read_text())
    data = compute_molecule(spec["atoms"], charge=spec.get("charge", 0),
                            ms2=spec.get("ms2"))
    out_dir.mkdir(parents=True, exist_ok=True)
    fcidump_path.write_text(
        fcidump_text(data["h_mo"], data["g_mo"], data["e_nuc"],
                     data["n_electrons"], data["ms2"])
    )
    sidecar = {
        "name": name,
        "basis": "STO-3G",
        "charge": spec.get("charge", 0),
        "ms2": data["ms2"],
        "n_orbitals": data["n_orbitals"],
        "n_electrons": data["n_electrons"],
        "e_nuc": data["e_nuc"],
        "e_rhf": data["e_rhf"],
        "e_fci": data["e_fci"],
        "geometry_angstrom": spec["atoms"],
    }
    sidecar_path.write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    print(f"  {name}: M={data['n_orbitals']} N={data['n_electrons']} "
          f"E_RHF={data['e_rhf']:.6f} E_FCI={data['e_fci']:.6f}")
    return sidecar


def _diatomic_atoms(elements, r):
    a, b = elements
    return [[a, 0.0, 0.0, 0.0], [b, 0.0, 0.0, r]]


def _water_atoms(r, angle_deg):
    half = math.radians(angle_deg) / 2
    return [
        ["O", 0.0, 0.0, 0.0],
        ["H", r * math.sin(half), 0.0, r * math.cos(half)],
        ["H", -r * math.sin(half), 0.0, r * math.cos(half)],
    ]


def _grid_values(lo, hi, step):
    # absolute multiples of the step inside [lo, hi]
    first = math.ceil(round(lo / step, 6))
    last = math.floor(round(hi / step, 6))
    return [round(k * step, 6) for k in range(first, last + 1)]


def generate_scan_family(spec, out_dir: Path, skip_existing=False):
    """Coarse pre-scan grid plus refinement tiers around the coarse FCI minimum."""
    name = spec["name"]
    family_dir = out_dir / name
    manifest_path = family_dir / "manifest.json"
    if skip_existing and manifest_path.exists():
        return
    lo, hi = spec["range"]
    protocol = spec["protocol"]
    try:
        family_dir.mkdir(parents=True, exist_ok=True)
        coarse = _grid_values(lo, hi, protocol["prescan_step"])
        energies = {}
        points = {}
        for r in coarse:
            points[r] = _scan_point(spec, r, family_dir)
            energies[r] = points[r]["e_fci"]
        center = min(energies, key=energies.get)
        print(f"  {name}: coarse minimum near {center} (E_FCI {energies[center]:.6f})")
        for tier in sorted(protocol["tiers"], key=lambda t: t["within"]):
            for r in _grid_values(max(lo, center - tier["within"]),
                                  min(hi, center + tier["within"]), tier["step"]):
                if r not in points:
                    points[r] = _scan_point(spec, r, family_dir)
        manifest = {
            "molecule": name,
            "parameter": "bond_length_angstrom",
            "protocol": protocol,
            "points": [
                {"value": r, "path": points[r]["path"]} for r in sorted(points)
            ],
        }
        manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        print(f"  {name}: {len(points)} grid points")
    except Exception:
        shutil.rmtree(family_dir, ignore_errors=True)
        raise


def _scan_point(spec, r, family_dir: Path):
    atoms = _diatomic_atoms(spec["elements"], r)
    data = compute_molecule(atoms, charge=spec.get("charge", 0))
    file_name = f"r{r:.3f}.fcidump"
    (family_dir / file_name).write_text(
        fcidump_text(data["h_mo"], data["g_mo"], data["e_nuc"],
                     data["n_electrons"], data["ms2"])
    )
    return {"path": file_name, "e_fci": data["e_fci"]}


def generate_water_grid(spec, out_dir: Path, skip_existing=False):
    """Small 2D (bond length, bond angle) water surface for grid-scan consumers."""
    name = spec["name"]
    family_dir = out_dir / name
    manifest_path = family_dir / "manifest.json"
    if skip_existing and manifest_path.exists():
        return
    try:
        family_dir.mkdir(parents=True, exist_ok=True)
        entries = []
        for r in spec["bond_lengths"]:
            for angle in spec["bond_angles"]:
                data = compute_molecule(_water_atoms(r, angle))
                file_name = f"r{r:.3f}_a{angle:.1f}.fcidump"
                (family_dir / file_name).write_text(
                    fcidump_text(data["h_mo"], data["g_mo"], data["e_nuc"],
                                 data["n_electrons"], data["ms2"])
                )
                entries.append({"value": [r, angle], "path": file_name})
        manifest = {
            "molecule": name,
            "parameters": ["bond_length_angstrom", "bond_angle_deg"],
            "points": entries,
        }
        manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        print(f"  {name}: {len(entries)} grid points")
    except Exception:
        shutil.rmtree(family_dir, ignore_errors=True)
        raise


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("manifest", help="geometry manifest (JSON)")
    parser.add_argument("-o", "--out", required=True, help="output directory")
    parser.add_argument("--only", default=None, help="generate a single named entry")
    parser.add_argument("--skip-existing", action="store_true")
    args = parser.parse_args(argv)

    manifest = json.loads(Path(args.manifest).read_text())
    out = Path(args.out)
    try:
        for spec in manifest.get("fixtures", []):
            if args.only and spec["name"] != args.only:
                continue
            print(f"fixture {spec['name']}")
            generate_fixture(spec, out / "molecules", skip_existing=args.skip_existing)
        for spec in manifest.get("scans", []):
            if args.only and spec["name"] != args.only:
                continue
            print(f"scan {spec['name']}")
            if spec.get("type") == "water_grid":
                generate_water_grid(spec, out / "scans", skip_existing=args.skip_existing)
            else:
                generate_scan_family(spec, out / "scans", skip_existing=args.skip_existing)
    except ScfError as exc:
        print(f"generation failed: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
