"""Regenerate the bundled qubit Hamiltonians.

Requires pyscf. Integrals are computed in the STO-3G basis, mapped to
spin orbitals (mode 2i = spatial orbital i spin up, 2i+1 = spin down),
Jordan-Wigner encoded with qubit 0 as the leftmost character, and expanded
in the Pauli basis by trace projection of the dense 16x16 matrix.

    python3 data/generate_hamiltonians.py
"""

import itertools
import os

import numpy as np
from pyscf import ao2mo, fci, gto, mcscf, scf

HERE = os.path.dirname(os.path.abspath(__file__))
PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
}


def kron_all(mats):
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def annihilator(p, n):
    # a_p = Z..Z (X + iY)/2 on qubit p; qubit 0 is the most significant bit.
    lower = (PAULI["X"] + 1j * PAULI["Y"]) / 2
    mats = [PAULI["Z"]] * p + [lower] + [PAULI["I"]] * (n - p - 1)
    return kron_all(mats)


def spin_orbital_hamiltonian(constant, h1, h2):
    """h1[i,j] spatial one-body, h2 chemist-notation (ij|kl) spatial."""
    norb = h1.shape[0]
    n = 2 * norb
    a = [annihilator(p, n) for p in range(n)]
    ad = [m.conj().T for m in a]
    dim = 2 ** n
    mat = constant * np.eye(dim, dtype=complex)
    for p in range(n):
        for q in range(n):
            if p % 2 != q % 2:
                continue
            v = h1[p // 2, q // 2]
            if abs(v) > 1e-14:
                mat += v * ad[p] @ a[q]
    for p, q, r, s in itertools.product(range(n), repeat=4):
        # 1/2 sum (pr|qs) a+_p a+_q a_s a_r
        if p % 2 != r % 2 or q % 2 != s % 2:
            continue
        v = h2[p // 2, r // 2, q // 2, s // 2]
        if abs(v) > 1e-14:
            mat += 0.5 * v * ad[p] @ ad[q] @ a[s] @ a[r]
    return mat


def pauli_decompose(mat, n):
    terms = []
    for axes in itertools.product("IXYZ", repeat=n):
        p = kron_all([PAULI[c] for c in axes])
        c = np.trace(p @ mat) / 2 ** n
        if abs(c) > 1e-12:
            terms.append(("".join(axes), c))
    return terms


def write_file(path, header, terms):
    with open(path, "w") as fh:
        fh.write(header + "\n")
        fh.write("# generated by data/generate_hamiltonians.py (pyscf, STO-3G, Jordan-Wigner)\n")
        for axes, c in terms:
            fh.write(f"{c.real:.16e} {0.0:.1f} {axes}\n")


def h2(r):
    mol = gto.M(atom=f"H 0 0 0; H 0 0 {r}", basis="sto-3g", unit="Angstrom", verbose=0)
    mf = scf.RHF(mol).run()
    c = mf.mo_coeff
    h1 = c.T @ mf.get_hcore() @ c
    h2e = ao2mo.restore(1, ao2mo.full(mol, c), c.shape[1])
    mat = spin_orbital_hamiltonian(mol.energy_nuc(), h1, h2e)
    e_fci = fci.FCI(mf).kernel()[0]
    return mat, e_fci


def lih(r):
    mol = gto.M(atom=f"Li 0 0 0; H 0 0 {r}", basis="sto-3g", unit="Angstrom", verbose=0)
    mf = scf.RHF(mol).run()
    cas = mcscf.CASCI(mf, 2, 2)
    h1, ecore = cas.get_h1eff()
    h2e = ao2mo.restore(1, cas.get_h2eff(), 2)
    mat = spin_orbital_hamiltonian(ecore, h1, h2e)
    e_cas = cas.kernel()[0]
    return mat, e_cas


def main():
    out = os.path.join(HERE, "h2")
    os.makedirs(out, exist_ok=True)
    # 0.1..2.5 scan grid plus the 0.74 equilibrium point
    for r in [step / 10 for step in range(1, 26)] + [0.74]:
        mat, e_ref = h2(r)
        terms = pauli_decompose(mat, 4)
        assert np.allclose(mat, mat.conj().T)
        lowest = np.linalg.eigvalsh(mat)[0]
        assert abs(lowest - e_ref) < 1e-8, (r, lowest, e_ref)
        write_file(
            os.path.join(out, f"h2_r{r:.2f}.txt"),
            f"# label=H2 r={r:.2f} electrons=2 units=hartree",
            terms,
        )
    r = 1.6
    mat, e_ref = lih(r)
    terms = pauli_decompose(mat, 4)
    os.makedirs(os.path.join(HERE, "lih"), exist_ok=True)
    write_file(
        os.path.join(HERE, "lih", f"lih_r{r:.2f}.txt"),
        f"# label=LiH r={r:.2f} electrons=2 units=hartree",
        terms,
    )
    print("CASCI(2,2) LiH", e_ref)


if __name__ == "__main__":
    main()
