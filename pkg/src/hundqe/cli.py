"""Command-line pipeline: counting, solving, Pauli export, PES scanning.

Exit codes: 0 success, 1 input/parse failure, 2 usage error, 3 capacity
limit exceeded.
"""

from __future__ import annotations

import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from . import encode, fock, hamiltonian, spectra
from .errors import CapacityError, FcidumpParseError, HundqeError
from .fcidump import parse_fcidump

SELECTORS = {
    "hund": fock.Selector.hund,
    "pc": fock.Selector.particle_conserving,
    "full": lambda n: fock.Selector.full(),
}


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(3 if isinstance(exc, CapacityError) else 1)


def _load_table(path: str):
    try:
        if path == "-":
            return parse_fcidump(sys.stdin.read())
        return parse_fcidump(Path(path).read_text())
    except (OSError, FcidumpParseError) as exc:
        _fail(exc)


def _build(table, selector_name: str):
    selector = SELECTORS[selector_name](table.n_electrons)
    basis = fock.enumerate_subspace(2 * table.n_orbitals, selector)
    matrix = hamiltonian.restrict_hamiltonian(table, basis)
    return basis, matrix


def _solve(matrix, method, seed, tol):
    forced = None if method == "auto" else spectra.Method(method)
    return spectra.solve(matrix, method=forced, seed=seed, tol=tol)


@click.group()
def main():
    """Hund-restricted molecular ground states and Pauli exports."""


@main.command()
@click.argument("m", type=int)
@click.argument("n", type=int)
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
def count(m, n, as_json):
    """Basis sizes and qubit requirements for M orbitals, N electrons."""
    if not 0 <= n <= 2 * m:
        raise click.UsageError(f"N={n} outside [0, {2 * m}]")
    hund = fock.hund_count(m, n)
    pc = fock.pc_count(m, n)
    full = 1 << (2 * m)
    ratio = fock.basis_ratio(m, n)
    report = {
        "orbitals": m,
        "electrons": n,
        "hund": {"basis_size": hund, "qubits": fock.qubit_requirement(hund)},
        "pc": {"basis_size": pc, "qubits": fock.qubit_requirement(pc)},
        "full": {"basis_size": full, "qubits": 2 * m},
        "ratio_pc_over_hund": float(ratio),
    }
    if as_json:
        click.echo(json.dumps(report, sort_keys=True))
        return
    click.echo(f"M={m} orbitals, N={n} electrons")
    click.echo(f"  hund basis {hund}  qubits {report['hund']['qubits']}")
    click.echo(f"  pc   basis {pc}  qubits {report['pc']['qubits']}")
    click.echo(f"  full basis {full}  qubits {2 * m}")
    click.echo(f"  ratio pc/hund {float(ratio):.6g}")


@main.command("compare-grid")
@click.argument("m_max", type=int)
@click.option("--output", type=click.Path(), default=None, help="write CSV here instead of stdout")
def compare_grid(m_max, output):
    """CSV of qubit-requirement differences (PC-Hund, JW-Hund) over the (M, N) grid."""
    if m_max < 1:
        raise click.UsageError("M_MAX must be >= 1")
    rows = ["M,N,pc_minus_hund,jw_minus_hund"]
    for m in range(1, m_max + 1):
        for n in range(0, 2 * m + 1):
            hund_q = fock.qubit_requirement(fock.hund_count(m, n))
            pc_q = fock.qubit_requirement(fock.pc_count(m, n))
            rows.append(f"{m},{n},{pc_q - hund_q},{2 * m - hund_q}")
    text = "\n".join(rows) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)


def _sector_breakdown(basis):
    parts = hamiltonian.sector_split(basis)
    out = []
    for part in parts:
        bits = int(part.bit_array[0])
        n_up = bin(bits & fock._EVEN_MASK).count("1")
        n_down = bin(bits & ~fock._EVEN_MASK & ((1 << part.n_modes) - 1)).count("1")
        out.append({"n_up": n_up, "n_down": n_down, "size": part.size})
    return out


@main.command()
@click.argument("fcidump_path")
@click.option("--selector", type=click.Choice(list(SELECTORS)), default="hund")
@click.option("--method", type=click.Choice(["auto", "dense", "lanczos"]), default="auto")
@click.option("--seed", type=int, default=0)
@click.option("--tol", type=float, default=1e-10)
@click.option("--json", "as_json", is_flag=True)
def solve(fcidump_path, selector, method, seed, tol, as_json):
    """Ground-state energy of an FCIDUMP on the selected subspace."""
    table = _load_table(fcidump_path)
    try:
        basis, matrix = _build(table, selector)
        result = _solve(matrix, method, seed, tol)
    except HundqeError as exc:
        _fail(exc)
    residual = result.residual_norm(matrix)
    qubits = fock.qubit_requirement(basis.size)
    sectors = _sector_breakdown(basis) if selector != "full" else []
    if as_json:
        amps = [
            {"index": i, "determinant": f"{int(basis.bit_array[i]):0{basis.n_modes}b}",
             "amplitude": float(a)}
            for i, a in enumerate(result.amplitudes)
            if abs(a) > 1e-6
        ]
        click.echo(json.dumps({
            "energy": result.energy,
            "basis_size": basis.size,
            "qubits": qubits,
            "selector": selector,
            "method": result.method.value,
            "iterations": result.iterations,
            "degeneracy_count": result.degeneracy_count,
            "residual": residual,
            "sectors": sectors,
            "amplitudes": amps,
        }, sort_keys=True))
        return
    click.echo(f"energy      {result.energy:.9f} Hartree")
    click.echo(f"basis size  {basis.size}  ({selector})")
    click.echo(f"qubits      {qubits}")
    click.echo(f"method      {result.method.value}  residual {residual:.2e}")
    for s in sectors:
        click.echo(f"  sector up={s['n_up']} down={s['n_down']} size={s['size']}")


@main.command()
@click.argument("fcidump_path")
@click.option("--selector", type=click.Choice(list(SELECTORS)), default="hund")
@click.option("--output", type=click.Path(), default=None)
@click.option("--json", "as_json", is_flag=True, help="structured-document export format")
def pauli(fcidump_path, selector, output, as_json):
    """Spectrum-preserving Pauli decomposition of the restricted Hamiltonian."""
    table = _load_table(fcidump_path)
    try:
        basis, matrix = _build(table, selector)
        extended = encode.minimal_extend(matrix)
        encoded = encode.apply_encoding(extended, encode.EncodingMap.identity(extended.n_qubits))
        terms = encode.pauli_decompose(encoded)
    except HundqeError as exc:
        _fail(exc)
    text = encode.export_pauli(terms, fmt="json" if as_json else "text")
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)
    click.echo(f"n_qubits {extended.n_qubits}  terms {len(terms)}", err=True)


def _load_manifest(path: str):
    manifest_path = Path(path)
    try:
        doc = json.loads(manifest_path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        _fail(exc)
    base = manifest_path.parent
    points = []
    for entry in doc["points"]:
        value = entry["value"]
        value = tuple(value) if isinstance(value, list) else (value,)
        points.append((value, base / entry["path"]))
    points.sort(key=lambda p: p[0])
    values = [p[0] for p in points]
    if len(set(values)) != len(values):
        _fail(HundqeError("duplicate geometry values in manifest"))
    return doc, points


def _on_grid(value: float, step: float) -> bool:
    return abs(value / step - round(value / step)) < 1e-6


def _protocol_values(doc, points, coarse_min):
    """Grid values the two-tier refinement protocol asks for."""
    tiers = doc["protocol"].get("tiers", [])
    prescan = doc["protocol"]["prescan_step"]
    wanted = []
    for (value,), _ in points:
        distance = abs(value - coarse_min)
        step = prescan
        for tier in sorted(tiers, key=lambda t: t["within"]):
            if distance <= tier["within"]:
                step = tier["step"]
                break
        if _on_grid(value, step):
            wanted.append(value)
    return wanted


@main.command()
@click.argument("manifest_path")
@click.option("--selector", type=click.Choice(list(SELECTORS)), default="hund")
@click.option("--method", type=click.Choice(["auto", "dense", "lanczos"]), default="auto")
@click.option("--seed", type=int, default=0)
@click.option("--tol", type=float, default=1e-10)
@click.option("--jobs", type=int, default=1)
@click.option("--output", type=click.Path(), default=None, help="per-point CSV path")
@click.option("--json", "as_json", is_flag=True)
def scan(manifest_path, selector, method, seed, tol, jobs, output, as_json):
    """Potential-energy-surface scan over a fixture manifest."""
    doc, points = _load_manifest(manifest_path)
    by_value = {v: p for v, p in points}
    is_1d = all(len(v) == 1 for v in by_value)

    def solve_point(value):
        path = by_value[value]
        if not path.exists():
            raise HundqeError(f"missing grid point {value}: {path}")
        table = parse_fcidump(path.read_text())
        _, matrix = _build(table, selector)
        return value, _solve(matrix, method, seed, tol).energy

    def solve_many(values):
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(solve_point, values))
        else:
            results = [solve_point(v) for v in values]
        return dict(results)

    try:
        if is_1d and "protocol" in doc:
            prescan = doc["protocol"]["prescan_step"]
            coarse = [v for v in by_value if _on_grid(v[0], prescan)]
            energies = solve_many(sorted(coarse))
            coarse_min = min(energies, key=lambda v: (energies[v], v))[0]
            refined = [(v,) for v in _protocol_values(doc, points, coarse_min)]
            remaining = [v for v in refined if v not in energies]
            energies.update(solve_many(sorted(remaining)))
        else:
            energies = solve_many([v for v, _ in points])
    except HundqeError as exc:
        _fail(exc)

    solved = sorted(energies)
    r_eq = min(solved, key=lambda v: (energies[v], v))
    r_max = solved[-1]
    summary = {
        "equilibrium": list(r_eq) if len(r_eq) > 1 else r_eq[0],
        "equilibrium_energy": energies[r_eq],
        "asymptote": list(r_max) if len(r_max) > 1 else r_max[0],
        "asymptote_energy": energies[r_max],
        "dissociation_energy": energies[r_max] - energies[r_eq],
        "points_scanned": len(solved),
    }
    header = (doc.get("parameter") or ",".join(doc.get("parameters", ["value"]))) + ",energy"
    csv_lines = [header] + [
        ",".join(f"{x:g}" for x in v) + f",{energies[v]!r}" for v in solved
    ]
    csv_text = "\n".join(csv_lines) + "\n"
    if output:
        Path(output).write_text(csv_text)
    if as_json:
        click.echo(json.dumps(summary, sort_keys=True))
    else:
        if not output:
            click.echo(csv_text, nl=False)
        click.echo(f"r_eq {summary['equilibrium']}  E(r_eq) {energies[r_eq]:.6f}")
        click.echo(f"D    {summary['dissociation_energy']:.6f} Hartree"
                   f"  (asymptote at {summary['asymptote']})")


if __name__ == "__main__":
    main()
