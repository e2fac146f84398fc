"""Published benchmark values shipped with the package.

``reference_table1.csv`` holds the Coulomb-like comparison (numerical and
closed-form energies for omega in {2, 3, 4}, n in {0, 1, 2}, m in {1, 2, 3}).
``reference_table2.csv`` holds the five lowest twisted-oscillator levels at
25 torsion values.  Both are transcriptions, used only for comparison.
"""

from __future__ import annotations

import csv
from importlib import resources

import numpy as np

TABLE1_K = 5.0e9
TABLE2_K = 1.0e9
TABLE2_OMEGA0 = 2.0 * np.pi * 5.0e14
TABLE2_M = 1


def _rows(name: str) -> list[dict[str, str]]:
    with resources.files("hqm.data").joinpath(name).open(newline="") as fh:
        return list(csv.DictReader(fh))


def load_table1() -> list[dict]:
    out = []
    for row in _rows("reference_table1.csv"):
        out.append(
            {
                "omega": float(row["omega"]),
                "n": int(row["n"]),
                "m": int(row["m"]),
                "E_num": float(row["E_num"]),
                "E_analyt": float(row["E_analyt"]),
                "dE": float(row["dE"]),
            }
        )
    return out


def load_table2() -> tuple[np.ndarray, np.ndarray]:
    """Return (omegas, energies) with energies shaped (25, 5), in eV."""
    rows = _rows("reference_table2.csv")
    omegas = np.array([float(r["omega"]) for r in rows])
    energies = np.array([[float(r[f"E{i}"]) for i in range(5)] for r in rows])
    return omegas, energies
