import csv
import io
import json

import numpy as np
import pytest
from click.testing import CliRunner

from hqm.cli import cli
from hqm.reports import REPRODUCTIONS, parse_values


def run(*args):
    return CliRunner().invoke(cli, list(args), catch_exceptions=False)


def rows(result):
    return list(csv.DictReader(io.StringIO(result.stdout)))


def test_spectrum_paper_values():
    res = run("spectrum", "--omega", "2", "--k", "5e9", "--m", "1", "--n-max", "2")
    assert res.exit_code == 0
    energies = [float(r["E"]) for r in rows(res)]
    assert energies == pytest.approx([-3.0692, -4.1529, -4.4515], abs=1e-3)
    assert res.stdout.splitlines()[0] == "omega,m,n,E,status"


def test_spectrum_physical_flips_sign():
    paper = [float(r["E"]) for r in rows(run("spectrum", "--n-max", "2"))]
    phys = [float(r["E"]) for r in rows(run("spectrum", "--n-max", "2", "--convention", "physical"))]
    assert phys == [-e for e in paper]


def test_spectrum_no_bound_state_row():
    res = run("spectrum", "--m", "0,1", "--n-max", "0")
    assert res.exit_code == 4
    out = rows(res)
    assert out[0]["status"] == "no bound state" and out[0]["E"] == ""
    assert out[1]["status"] == "ok"
    assert "warning" in res.stderr


def test_output_is_deterministic_and_formatted():
    a = run("spectrum", "--omega", "2:4:3", "--m", "1,2")
    b = run("spectrum", "--omega", "2:4:3", "--m", "1,2")
    assert a.stdout == b.stdout
    assert "-3.069152e+00" in a.stdout


def test_json_sorted_keys():
    res = run("--format", "json", "spectrum", "--n-max", "0")
    data = json.loads(res.stdout)
    assert list(data[0]) == sorted(data[0])
    sub = run("spectrum", "--n-max", "0", "--format", "json")
    assert sub.stdout == res.stdout


def test_out_file(tmp_path):
    target = tmp_path / "s.csv"
    res = run("spectrum", "--out", str(target))
    assert res.exit_code == 0 and res.stdout == ""
    assert target.read_text().startswith("omega,m,n,E,status")


def test_invalid_configuration_exit_code():
    assert run("spectrum", "--mu", "-1").exit_code == 2
    assert run("potential", "--rmin", "0").exit_code == 2
    assert run("spectrum", "--omega", "a,b").exit_code == 2
    assert run("sweep", "--variable", "omega", "--values", "1:2:3", "--method", "fd", "--rmax", "1e-9").exit_code == 2


def test_under_resolved_grid_exit_code():
    res = run("sweep", "--variable", "omega", "--values", "2,3", "--method", "fd", "--rmax", "12e-9", "--npts", "100")
    assert res.exit_code == 2
    assert "npts" in res.stderr


def test_table1_analytic_only():
    res = run("table1", "--analytic-only")
    out = rows(res)
    assert res.exit_code == 0 and len(out) == 27
    first = out[0]
    assert (float(first["omega"]), int(first["n"]), int(first["m"])) == (2.0, 0, 1)
    assert float(first["E_analyt"]) == pytest.approx(-3.0692, abs=1e-3)
    row401 = next(r for r in out if (float(r["omega"]), r["n"], r["m"]) == (4.0, "0", "1"))
    assert float(row401["E_analyt"]) == pytest.approx(-9.4191, abs=1e-3)
    assert all(r["E_num"] == "" for r in out)


def test_potential_coulomb_well_deepens():
    res = run("potential", "--omega", "0.3,0.5,0.7", "--rmin", "1e-11", "--rmax", "3e-9", "--npts", "3000")
    out = rows(res)
    depth = {}
    for r in out:
        w = float(r["omega"])
        depth[w] = min(depth.get(w, np.inf), float(r["V"]))
    assert depth[0.3] > depth[0.5] > depth[0.7]


def test_potential_oscillator_shifts_upward():
    res = run("potential", "--model", "oscillator", "--omega", "1:5:5", "--rmin", "1e-9", "--rmax", "3e-9", "--npts", "20")
    v = np.array([float(r["V"]) for r in rows(res)]).reshape(5, 20)
    assert np.all(np.diff(v, axis=0) > 0)


def test_potential_torsion_free_no_well():
    res = run("potential", "--omega", "0", "--k", "0", "--npts", "200")
    v = np.array([float(r["V"]) for r in rows(res)])
    assert np.all(v > 0) and np.all(np.diff(v) < 0)


def test_density_peak_and_nodes():
    res = run("density", "--omega", "0.5", "--m", "1", "--n-max", "2", "--npts", "6001")
    out = rows(res)
    assert res.exit_code == 0
    r = np.array([float(x["r_nm"]) for x in out if x["n"] == "0"])
    assert float(out[0]["peak_r_nm"]) == pytest.approx(0.9, abs=r[1] - r[0])
    p2 = np.array([float(x["P"]) for x in out if x["n"] == "2"])
    mid = p2[1:-1]
    minima = np.flatnonzero((mid < p2[:-2]) & (mid < p2[2:]) & (mid < 1e-3 * p2.max()))
    assert len(minima) == 2


def test_density_peak_moves_inward():
    res = run("density", "--omega", "0.3,0.5,0.7", "--n-max", "0")
    peaks = {float(x["omega"]): float(x["peak_r_nm"]) for x in rows(res)}
    assert peaks[0.3] > peaks[0.5] > peaks[0.7]


def test_sweep_analytic_m_splitting():
    res = run("sweep", "--variable", "m", "--values", "1:6", "--omega", "2,3,4", "--n-max", "0")
    e = np.array([float(r["E"]) for r in rows(res)]).reshape(3, 6)
    assert np.all(np.diff(e, axis=1) != 0)
    assert np.all(np.diff(e, axis=0) < 0)


def test_sweep_analytic_omega_magnitude_grows():
    res = run("sweep", "--variable", "omega", "--values", "0.5:4:8", "--m", "1", "--n-max", "0")
    e = np.array([float(r["E"]) for r in rows(res)])
    assert np.all(np.diff(np.abs(e)) > 0)


def test_sweep_fd_oscillator_tracks():
    res = run("sweep", "--variable", "omega", "--values", "1:3:5", "--model", "oscillator", "--method", "fd", "--n-max", "2")
    assert res.exit_code == 0
    out = rows(res)
    assert {r["track"] for r in out} == {"0", "1", "2"}


def test_list_reproductions():
    res = run("--list-reproductions")
    out = rows(res)
    assert res.exit_code == 0
    assert len(out) == len(REPRODUCTIONS)
    artifacts = [r["artifact"] for r in out]
    assert len(set(artifacts)) == len(artifacts)
    assert run("list-reproductions").stdout == res.stdout


def test_oscillator_reference_columns():
    res = run("oscillator", "--omega", "1", "--npts", "600")
    out = rows(res)
    assert float(out[0]["ref_E0"]) == pytest.approx(112.1989)
    assert float(out[0]["ref_E4"]) == pytest.approx(1010.0567)


def test_parse_values():
    assert parse_values("1,2.5") == [1.0, 2.5]
    assert parse_values("1:3") == [1.0, 2.0, 3.0]
    assert parse_values("0:1:5") == pytest.approx([0, 0.25, 0.5, 0.75, 1])
    assert parse_values("1:4", integer=True) == [1, 2, 3, 4]
