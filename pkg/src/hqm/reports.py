"""Row builders behind the ``hqm`` subcommands.

Each builder returns a :class:`Report`: an ordered list of flat dict rows,
the column order, and any per-row warnings.  Energies are in eV, lengths in
nm, probability densities in 1/nm.  The CLI only serializes these.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from hqm import analytic, fd
from hqm.constants import ELECTRON_MASS, EV
from hqm.errors import DomainError, NoBoundStateError
from hqm.potentials import (
    ModelParams,
    oscillator_parameters,
    v_eff_coulomb,
    v_eff_oscillator,
)
from hqm.reference import TABLE1_K, TABLE2_K, TABLE2_M, TABLE2_OMEGA0, load_table1, load_table2

NM = 1e-9
NO_BOUND_STATE = "no bound state"

# figure/table -> (subcommand, example invocation)
REPRODUCTIONS = [
    ("Fig. 1", "potential", "hqm potential --model coulomb --omega 0.3,0.5,0.7 --m 1 --k 5e9"),
    ("Fig. 2", "density", "hqm density --omega 0.3,0.5,0.7 --m 1 --n-max 2 --k 5e9"),
    ("Fig. 3", "sweep", "hqm sweep --variable m --values 1:6 --omega 2,3,4 --n-max 2"),
    ("Fig. 4", "sweep", "hqm sweep --variable omega --values 0.5:5:10 --m 1,2,3 --n-max 2"),
    ("Table I", "table1", "hqm table1"),
    ("Fig. 5", "potential", "hqm potential --model oscillator --omega 1,2,3,4,5 --k 1e10 --omega0 5.0265e13"),
    ("Fig. 6", "sweep", "hqm sweep --model oscillator --method fd --variable m --values -6:6 --omega 5 --k 1e9"),
    ("Fig. 7", "oscillator", "hqm oscillator --omega 1:30:50"),
    ("Table II", "oscillator", "hqm oscillator"),
]


@dataclass
class Report:
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def _sign(convention: str) -> float:
    if convention not in ("paper", "physical"):
        raise DomainError(f"convention must be 'paper' or 'physical', got {convention!r}")
    return 1.0 if convention == "paper" else -1.0


def spectrum_report(omegas, ms, n_max: int, k: float, mu: float = ELECTRON_MASS, convention: str = "paper") -> Report:
    """Closed-form energies on an (omega, m, n) grid.

    Rows without a bound state keep their place and carry a status marker.
    """
    sign = _sign(convention)
    rep = Report(["omega", "m", "n", "E", "status"])
    for omega in omegas:
        for m in ms:
            p = ModelParams(omega, k, m, mu)
            for n in range(n_max + 1):
                try:
                    analytic.require_bound_state(p)
                except NoBoundStateError as exc:
                    rep.rows.append({"omega": omega, "m": m, "n": n, "E": None, "status": NO_BOUND_STATE})
                    rep.warnings.append(f"omega={omega:g} m={m} n={n}: {exc}")
                    continue
                rep.rows.append(
                    {"omega": omega, "m": m, "n": n, "E": sign * analytic.energy_paper(n, p), "status": "ok"}
                )
    return rep


def table1_report(
    npts: int = 24000,
    r_max: float = 12e-9,
    mu: float = ELECTRON_MASS,
    convention: str = "paper",
    analytic_only: bool = False,
    workers: int = 1,
) -> Report:
    """Finite-difference vs closed-form energies for the 27 benchmark triples.

    E_num is the FD eigenvalue of the physical operator, negated into the
    published convention (unless ``convention='physical'``).
    """
    sign = _sign(convention)
    ref = load_table1()
    grid = fd.RadialGrid(r_max, npts)
    rep = Report(["omega", "n", "m", "E_num", "E_analyt", "dE", "E_num_ref", "E_analyt_ref"])

    numeric: dict[tuple[float, int], list[float]] = {}
    if not analytic_only:
        keys = sorted({(r["omega"], r["m"]) for r in ref})
        n_needed = {key: 1 + max(r["n"] for r in ref if (r["omega"], r["m"]) == key) for key in keys}
        jobs = [(ModelParams(w, TABLE1_K, m, mu), grid, n_needed[(w, m)]) for w, m in keys]
        if workers > 1:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(max_workers=workers) as pool:
                solved = list(pool.map(fd._solve_point, jobs))
        else:
            solved = [fd._solve_point(j) for j in jobs]
        numeric = {key: energies for key, (energies, _) in zip(keys, solved)}

    for r in ref:
        p = ModelParams(r["omega"], TABLE1_K, r["m"], mu)
        e_an = analytic.energy_paper(r["n"], p)
        row = {
            "omega": r["omega"],
            "n": r["n"],
            "m": r["m"],
            "E_num": None,
            "E_analyt": sign * e_an,
            "dE": None,
            "E_num_ref": sign * r["E_num"],
            "E_analyt_ref": sign * r["E_analyt"],
        }
        levels = numeric.get((r["omega"], r["m"]))
        if levels is not None:
            if r["n"] < len(levels):
                e_num = -levels[r["n"]]  # physical -> published convention
                row["E_num"] = sign * e_num
                row["dE"] = abs(e_num - e_an)
            else:
                rep.warnings.append(f"FD found fewer than {r['n'] + 1} bound states at omega={r['omega']:g}, m={r['m']}")
        rep.rows.append(row)
    return rep


def _r_values(r_min: float, r_max: float, npts: int) -> np.ndarray:
    if not (r_min > 0 and r_max > r_min):
        raise DomainError("radial range must satisfy 0 < r_min < r_max")
    if npts < 2:
        raise DomainError("need at least two sample points")
    return np.linspace(r_min, r_max, npts)


def potential_report(
    model: str,
    omegas,
    m: int,
    k: float,
    r_min: float,
    r_max: float,
    npts: int,
    omega0: float | None = None,
    mu: float = ELECTRON_MASS,
) -> Report:
    r = _r_values(r_min, r_max, npts)
    rep = Report(["model", "omega", "r_nm", "V"])
    for omega in omegas:
        p = ModelParams(omega, k, m, mu)
        if model == "coulomb":
            v = v_eff_coulomb(r, p)
        elif model == "oscillator":
            if omega0 is None:
                raise DomainError("oscillator model needs omega0")
            v = v_eff_oscillator(r, oscillator_parameters(p, omega0))
        else:
            raise DomainError(f"unknown model {model!r}")
        for ri, vi in zip(r, np.atleast_1d(v)):
            rep.rows.append({"model": model, "omega": omega, "r_nm": ri / NM, "V": vi / EV})
    return rep


def density_report(omegas, m: int, n_max: int, k: float, npts: int = 2000, r_max: float | None = None, mu: float = ELECTRON_MASS) -> Report:
    """Normalized P(r) samples for n = 0..n_max at each omega.

    The default range reaches 12/rho of the most extended requested state.
    """
    rep = Report(["omega", "m", "n", "r_nm", "P", "peak_r_nm"])
    for omega in omegas:
        p = ModelParams(omega, k, m, mu)
        try:
            analytic.require_bound_state(p)
        except NoBoundStateError as exc:
            rep.warnings.append(f"omega={omega:g} m={m}: {exc}")
            rep.rows.append({"omega": omega, "m": m, "n": None, "r_nm": None, "P": None, "peak_r_nm": None})
            continue
        top = r_max or 12.0 / analytic.coulomb_parameters(n_max, p).rho
        r = np.linspace(0.0, top, npts)
        for n in range(n_max + 1):
            prof = analytic.probability_density(n, p, r)
            if prof.warning:
                rep.warnings.append(f"omega={omega:g} n={n}: {prof.warning}")
            peak = prof.peak_radius / NM
            for ri, pi in zip(r, prof.density):
                rep.rows.append({"omega": omega, "m": m, "n": n, "r_nm": ri / NM, "P": pi * NM, "peak_r_nm": peak})
    return rep


def parse_values(text: str, integer: bool = False) -> list:
    """Parse '1,2,3' or 'start:stop[:count]'.

    Without a count an integer range is implied with unit steps; with a
    count the range is split into that many equally spaced values.
    """
    text = text.strip()
    if ":" in text:
        parts = [float(x) for x in text.split(":")]
        if len(parts) == 2:
            start, stop = parts
            count = int(round(stop - start)) + 1
        elif len(parts) == 3:
            start, stop, count = parts
            count = int(count)
        else:
            raise DomainError(f"bad range {text!r}")
        if count < 1:
            raise DomainError(f"empty range {text!r}")
        vals = list(np.linspace(start, stop, count))
    else:
        vals = [float(x) for x in text.split(",") if x.strip()]
    if not vals:
        raise DomainError("empty value list")
    if not all(math.isfinite(v) for v in vals):
        raise DomainError(f"non-finite value in {text!r}")
    if integer:
        if any(v != int(v) for v in vals):
            raise DomainError(f"expected integers, got {text!r}")
        return [int(v) for v in vals]
    return [float(v) for v in vals]


def _common_grid(param_sets, count):
    grids = [fd.default_grid(p, count) for p in param_sets if fd.resolution_length(p) is not None]
    if not grids:
        return fd.RadialGrid(12e-9, 24000)
    r_max = max(g.r_max for g in grids)
    h = min(g.h for g in grids)
    return fd.RadialGrid(r_max, int(math.ceil(r_max / h)))


def sweep_report(
    variable: str,
    values,
    omegas,
    ms,
    k: float,
    n_max: int,
    model: str = "coulomb",
    method: str = "analytic",
    omega0: float | None = None,
    mu: float = ELECTRON_MASS,
    convention: str = "paper",
    grid: fd.RadialGrid | None = None,
    workers: int = 1,
) -> Report:
    """Energies along a sweep in omega or m.

    ``values`` are the swept values; the other variable is held at each of
    ``omegas`` or ``ms`` in turn (one series per held value).  The FD path
    follows states by eigenvector overlap and reports the linking overlap.
    """
    sign = _sign(convention)
    if variable not in ("omega", "m"):
        raise DomainError("sweep variable must be 'omega' or 'm'")
    if len(values) < 2:
        raise DomainError("a sweep needs at least two steps")
    if method not in ("analytic", "fd"):
        raise DomainError(f"unknown method {method!r}")
    if model == "oscillator" and method == "analytic":
        raise DomainError("the oscillator model has no closed form; use --method fd")
    if model == "oscillator" and omega0 is None:
        raise DomainError("oscillator model needs omega0")
    held_values = ms if variable == "omega" else omegas
    held_name = "m" if variable == "omega" else "omega"
    rep = Report(["series", held_name, "step", variable, "track", "E", "overlap", "status"])
    count = n_max + 1

    for held in held_values:
        def params_at(x):
            omega, m = (x, held) if variable == "omega" else (held, x)
            return ModelParams(omega, k, int(m), mu)

        if method == "analytic":
            for step, x in enumerate(values):
                p = params_at(x)
                for n in range(count):
                    row = {"series": held, held_name: held, "step": step, variable: x, "track": n, "overlap": None}
                    try:
                        analytic.require_bound_state(p)
                        row["E"] = sign * analytic.energy_paper(n, p)
                        row["status"] = "ok"
                    except NoBoundStateError:
                        row["E"] = None
                        row["status"] = NO_BOUND_STATE
                        rep.warnings.append(f"{held_name}={held:g} {variable}={x:g} n={n}: no bound state")
                    rep.rows.append(row)
            continue

        kept, skipped = [], []
        for x in values:
            p = params_at(x)
            if model == "oscillator":
                if p.m == 0:
                    skipped.append((x, "iota undefined for m = 0"))
                    continue
                kept.append((x, oscillator_parameters(p, omega0)))
            else:
                try:
                    analytic.require_bound_state(p)
                except NoBoundStateError:
                    skipped.append((x, NO_BOUND_STATE))
                    continue
                kept.append((x, p))
        for x, why in skipped:
            rep.warnings.append(f"{held_name}={held:g} {variable}={x:g}: {why}")
        if len(kept) < 2:
            rep.warnings.append(f"{held_name}={held:g}: fewer than two solvable steps")
            continue
        g = grid or _common_grid([p for _, p in kept], count)
        res = fd.sweep([p for _, p in kept], g, count, labels=[x for x, _ in kept], workers=workers)
        rep.warnings.extend(res.warnings)
        for step, x in enumerate(res.parameters):
            for t in range(res.energies.shape[0]):
                e = res.energies[t, step]
                if model == "coulomb":
                    e = sign * -e  # physical -> chosen convention
                ov = res.overlaps[t, step - 1] if step > 0 else None
                rep.rows.append(
                    {"series": held, held_name: held, "step": step, variable: x, "track": t, "E": e, "overlap": ov, "status": "ok"}
                )
    return rep


def oscillator_grid(omega0: float, m: int = TABLE2_M, mu: float = ELECTRON_MASS, npts: int = 2000, r_max: float | None = None) -> fd.RadialGrid:
    length = oscillator_parameters(ModelParams(0.0, 0.0, m or 1, mu), omega0).length
    return fd.RadialGrid(r_max or 10.0 * length, npts)


def oscillator_report(
    omegas=None,
    m: int = TABLE2_M,
    k: float = TABLE2_K,
    omega0: float = TABLE2_OMEGA0,
    mu: float = ELECTRON_MASS,
    grid: fd.RadialGrid | None = None,
    workers: int = 1,
) -> Report:
    """Five lowest twisted-oscillator levels per omega, beside the reference table.

    Reference columns are filled where omega matches a tabulated value to
    1e-6; deviations are ours minus reference.
    """
    ref_omegas, ref_energies = load_table2()
    if omegas is None:
        omegas = list(ref_omegas)
    grid = grid or oscillator_grid(omega0, m, mu)
    params = [oscillator_parameters(ModelParams(w, k, m, mu), omega0) for w in omegas]
    res = fd.sweep(params, grid, 5, labels=list(omegas), workers=workers)
    cols = ["omega"] + [f"E{i}" for i in range(5)] + [f"ref_E{i}" for i in range(5)] + [f"dev_E{i}" for i in range(5)]
    rep = Report(cols, warnings=list(res.warnings))
    for j, w in enumerate(omegas):
        row = {"omega": w}
        match = np.flatnonzero(np.abs(ref_omegas - w) <= 1e-6)
        for i in range(5):
            e = float(res.energies[i, j])
            row[f"E{i}"] = e
            if match.size:
                ref = float(ref_energies[match[0], i])
                row[f"ref_E{i}"] = ref
                row[f"dev_E{i}"] = e - ref
            else:
                row[f"ref_E{i}"] = None
                row[f"dev_E{i}"] = None
        rep.rows.append(row)
    return rep


def reproductions_report() -> Report:
    rep = Report(["artifact", "subcommand", "example"])
    for art, sub, ex in REPRODUCTIONS:
        rep.rows.append({"artifact": art, "subcommand": sub, "example": ex})
    return rep
