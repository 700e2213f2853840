"""Regenerate the FCIDUMP fixtures under data/fcidump and their reference values.

Requires pyscf. Geometries are in Angstrom; all integrals are in the canonical
RHF molecular-orbital basis (STO-3G).
"""
import json
import math
import pathlib

from pyscf import fci, gto, scf
from pyscf.tools import fcidump

OUT = pathlib.Path(__file__).resolve().parents[2] / "data" / "fcidump"


def h2(r):
    return f"H 0 0 0; H 0 0 {r}"


def h2o(r, angle=107.6):
    half = math.radians(angle) / 2.0
    return (f"O 0 0 0; H {r * math.sin(half)} {r * math.cos(half)} 0; "
            f"H {-r * math.sin(half)} {r * math.cos(half)} 0")


def n2(r):
    return f"N 0 0 0; N 0 0 {r}"


def build(name, atom):
    mol = gto.M(atom=atom, basis="sto-3g", unit="Angstrom", symmetry=False, verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    # Retry from a stability-corrected guess for stretched geometries.
    mo1, _, stable, _ = mf.stability(return_status=True)
    if not stable:
        dm = mf.make_rdm1(mo1, mf.mo_occ)
        mf.kernel(dm)
    path = OUT / f"{name}.fcidump"
    fcidump.from_scf(mf, str(path), tol=1e-15)
    solver = fci.direct_spin1.FCI(mol)
    solver.conv_tol = 1e-12
    h1 = mf.mo_coeff.T @ mf.get_hcore() @ mf.mo_coeff
    from pyscf import ao2mo
    eri = ao2mo.full(mol, mf.mo_coeff)
    norb = mf.mo_coeff.shape[1]
    nelec = mol.nelectron
    e_sz0, _ = solver.kernel(h1, eri, norb, nelec, ecore=mol.energy_nuc(), nroots=1)
    singlet = fci.addons.fix_spin_(fci.direct_spin1.FCI(mol), ss=0, shift=0.5)
    singlet.conv_tol = 1e-12
    e_singlet, civec = singlet.kernel(h1, eri, norb, nelec, ecore=mol.energy_nuc())
    ss, _ = singlet.spin_square(civec, norb, nelec)
    return {
        "file": path.name,
        "n_orb": int(norb),
        "n_elec": int(nelec),
        "e_hf": float(mf.e_tot),
        "e_fci_sz0": float(e_sz0),
        "e_fci_singlet": float(e_singlet),
        "singlet_s2": float(ss),
        "mo_energies": [float(e) for e in mf.mo_energy],
    }


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    ref = {}
    for r in (0.5, 0.7414, 1.0, 1.5, 2.0):
        ref[f"h2_{r}"] = build(f"h2_{r}", h2(r)) | {"bond": r}
    for r in (1.0, 1.5, 2.1, 2.5, 3.0):
        ref[f"h2o_{r}"] = build(f"h2o_{r}", h2o(r)) | {"bond": r}
    for r in (1.0, 1.2):
        ref[f"n2_{r}"] = build(f"n2_{r}", n2(r)) | {"bond": r}
    (OUT / "reference.json").write_text(json.dumps(ref, indent=2) + "\n")
    for k, v in ref.items():
        print(k, v["e_hf"], v["e_fci_sz0"], v["e_fci_singlet"], v["singlet_s2"])


if __name__ == "__main__":
    main()
