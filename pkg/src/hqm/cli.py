"""``hqm`` command-line interface.

Subcommands: spectrum, table1, potential, density, sweep, oscillator,
list-reproductions.  Output is CSV (header row, floats as %.6e, empty cell
for missing values) or JSON (array of records with sorted keys).

CSV columns per subcommand:

    spectrum    omega, m, n, E, status
    table1      omega, n, m, E_num, E_analyt, dE, E_num_ref, E_analyt_ref
    potential   model, omega, r_nm, V
    density     omega, m, n, r_nm, P, peak_r_nm
    sweep       series, <held>, step, <variable>, track, E, overlap, status
    oscillator  omega, E0..E4, ref_E0..ref_E4, dev_E0..dev_E4
    list-reproductions  artifact, subcommand, example

Energies are eV, radii nm, densities 1/nm.

Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
4 output written but some rows carry warnings.
"""

from __future__ import annotations

import csv
import io
import json
import logging

import click

from hqm import reports
from hqm.constants import ELECTRON_MASS
from hqm.errors import ConvergenceError, DomainError
from hqm.fd import RadialGrid
from hqm.reference import TABLE2_OMEGA0

EXIT_INVALID = 2
EXIT_NUMERICAL = 3
EXIT_PARTIAL = 4

log = logging.getLogger("hqm")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return "%.6e" % value
    return str(value)


def render(rep: reports.Report, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(rep.columns)
        for row in rep.rows:
            writer.writerow([_fmt(_plain(row.get(c))) for c in rep.columns])
        return buf.getvalue()
    records = [{c: _plain(row.get(c)) for c in rep.columns} for row in rep.rows]
    return json.dumps(records, sort_keys=True, indent=1) + "\n"


def _plain(value):
    # numpy scalars -> builtins so formatting and json are uniform
    if hasattr(value, "item"):
        return value.item()
    return value


def _values(text, integer=False):
    try:
        return reports.parse_values(text, integer=integer)
    except (ValueError, DomainError) as exc:
        raise click.BadParameter(str(exc)) from exc


def _emit(ctx, rep: reports.Report):
    opts = ctx.obj
    text = render(rep, opts["format"])
    if opts["out"]:
        with open(opts["out"], "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    for w in rep.warnings:
        click.echo(f"warning: {w}", err=True)
    if rep.warnings:
        ctx.exit(EXIT_PARTIAL)


def _run(ctx, build):
    try:
        rep = build()
    except DomainError as exc:
        click.echo(f"error: {exc}", err=True)
        ctx.exit(EXIT_INVALID)
    except ConvergenceError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        ctx.exit(EXIT_NUMERICAL)
    _emit(ctx, rep)


def _grid(rmax, npts):
    if rmax is None and npts is None:
        return None
    if rmax is None or npts is None:
        raise click.UsageError("--rmax and --npts must be given together")
    try:
        return RadialGrid(rmax, npts)
    except DomainError as exc:
        raise click.UsageError(str(exc)) from exc


@click.group(invoke_without_command=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None, help="Write to PATH instead of stdout.")
@click.option("--list-reproductions", "list_repro", is_flag=True, help="List figure/table -> subcommand mapping and exit.")
@click.option("-v", "--verbose", is_flag=True)
@click.pass_context
def cli(ctx, fmt, out, list_repro, verbose):
    """Bound states of a particle in a helically twisted space."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    ctx.ensure_object(dict)
    ctx.obj.update(format=fmt, out=out)
    if list_repro:
        _emit(ctx, reports.reproductions_report())
        ctx.exit(0)
    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())


def output_options(f):
    # subcommand-level copies so flags may follow the subcommand name
    f = click.option("--out", "sub_out", type=click.Path(dir_okay=False, writable=True), default=None)(f)
    f = click.option("--format", "sub_fmt", type=click.Choice(["csv", "json"]), default=None)(f)
    return f


def _apply_output(ctx, sub_fmt, sub_out):
    if sub_fmt:
        ctx.obj["format"] = sub_fmt
    if sub_out:
        ctx.obj["out"] = sub_out


convention_option = click.option(
    "--convention", type=click.Choice(["paper", "physical"]), default="paper", show_default=True,
    help="paper: published sign convention; physical: eigenvalues of the radial operator.",
)
mu_option = click.option("--mu", type=float, default=ELECTRON_MASS, show_default=True, help="Effective mass in kg.")


@cli.command()
@click.option("--omega", default="2", show_default=True, help="Torsion values: list 'a,b' or range 'start:stop[:count]'.")
@click.option("--k", type=float, default=5e9, show_default=True, help="Longitudinal wavenumber (1/m).")
@click.option("--m", "m_text", default="1", show_default=True, help="Azimuthal numbers.")
@click.option("--n-max", type=click.IntRange(min=0), default=2, show_default=True)
@mu_option
@convention_option
@output_options
@click.pass_context
def spectrum(ctx, omega, k, m_text, n_max, mu, convention, sub_fmt, sub_out):
    """Closed-form energies E(n, m)."""
    _apply_output(ctx, sub_fmt, sub_out)
    omegas, ms = _values(omega), _values(m_text, integer=True)
    _run(ctx, lambda: reports.spectrum_report(omegas, ms, n_max, k, mu, convention))


@cli.command()
@click.option("--npts", type=click.IntRange(min=1), default=24000, show_default=True)
@click.option("--rmax", type=float, default=12e-9, show_default=True, help="Grid extent (m).")
@click.option("--analytic-only", is_flag=True, help="Skip the finite-difference column.")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@mu_option
@convention_option
@output_options
@click.pass_context
def table1(ctx, npts, rmax, analytic_only, jobs, mu, convention, sub_fmt, sub_out):
    """Finite-difference vs closed-form energies for the 27 benchmark cases."""
    _apply_output(ctx, sub_fmt, sub_out)
    _run(ctx, lambda: reports.table1_report(npts, rmax, mu, convention, analytic_only, jobs))


@cli.command()
@click.option("--model", type=click.Choice(["coulomb", "oscillator"]), default="coulomb", show_default=True)
@click.option("--omega", default="0.3,0.5,0.7", show_default=True)
@click.option("--k", type=float, default=5e9, show_default=True)
@click.option("--m", type=int, default=1, show_default=True)
@click.option("--omega0", type=float, default=None, help="Oscillator frequency (rad/s).")
@click.option("--rmin", type=float, default=0.02e-9, show_default=True, help="Smallest radius (m).")
@click.option("--rmax", type=float, default=3e-9, show_default=True, help="Largest radius (m).")
@click.option("--npts", type=click.IntRange(min=2), default=300, show_default=True)
@mu_option
@output_options
@click.pass_context
def potential(ctx, model, omega, k, m, omega0, rmin, rmax, npts, mu, sub_fmt, sub_out):
    """Sampled effective potential V(r) for each omega."""
    _apply_output(ctx, sub_fmt, sub_out)
    omegas = _values(omega)
    if model == "oscillator" and omega0 is None:
        omega0 = TABLE2_OMEGA0
    _run(ctx, lambda: reports.potential_report(model, omegas, m, k, rmin, rmax, npts, omega0, mu))


@cli.command()
@click.option("--omega", default="0.3,0.5,0.7", show_default=True)
@click.option("--k", type=float, default=5e9, show_default=True)
@click.option("--m", type=int, default=1, show_default=True)
@click.option("--n-max", type=click.IntRange(min=0), default=2, show_default=True)
@click.option("--rmax", type=float, default=None, help="Grid extent (m); default 12/rho of the widest state.")
@click.option("--npts", type=click.IntRange(min=2), default=2000, show_default=True)
@mu_option
@output_options
@click.pass_context
def density(ctx, omega, k, m, n_max, rmax, npts, mu, sub_fmt, sub_out):
    """Normalized radial probability densities P(r)."""
    _apply_output(ctx, sub_fmt, sub_out)
    omegas = _values(omega)
    _run(ctx, lambda: reports.density_report(omegas, m, n_max, k, npts, rmax, mu))


@cli.command()
@click.option("--variable", type=click.Choice(["omega", "m"]), required=True)
@click.option("--values", "values_text", required=True, help="Swept values: list or 'start:stop[:count]'.")
@click.option("--model", type=click.Choice(["coulomb", "oscillator"]), default="coulomb", show_default=True)
@click.option("--method", type=click.Choice(["analytic", "fd"]), default="analytic", show_default=True)
@click.option("--omega", default="2", show_default=True, help="Held torsion values when sweeping m.")
@click.option("--m", "m_text", default="1", show_default=True, help="Held azimuthal numbers when sweeping omega.")
@click.option("--k", type=float, default=5e9, show_default=True)
@click.option("--n-max", type=click.IntRange(min=0), default=2, show_default=True)
@click.option("--omega0", type=float, default=None, help="Oscillator frequency (rad/s).")
@click.option("--rmax", type=float, default=None)
@click.option("--npts", type=int, default=None)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@mu_option
@convention_option
@output_options
@click.pass_context
def sweep(ctx, variable, values_text, model, method, omega, m_text, k, n_max, omega0, rmax, npts, jobs, mu, convention, sub_fmt, sub_out):
    """Energy tracks along omega or m, with overlap state-following for FD."""
    _apply_output(ctx, sub_fmt, sub_out)
    values = _values(values_text, integer=(variable == "m"))
    omegas, ms = _values(omega), _values(m_text, integer=True)
    if model == "oscillator" and omega0 is None:
        omega0 = TABLE2_OMEGA0
    grid = _grid(rmax, npts)
    _run(
        ctx,
        lambda: reports.sweep_report(
            variable, values, omegas, ms, k, n_max, model, method, omega0, mu, convention, grid, jobs
        ),
    )


@cli.command()
@click.option("--omega", default=None, help="Torsion values; default the 25 tabulated values.")
@click.option("--k", type=float, default=1e9, show_default=True)
@click.option("--m", type=int, default=1, show_default=True)
@click.option("--omega0", type=float, default=TABLE2_OMEGA0, show_default=True)
@click.option("--rmax", type=float, default=None, help="Grid extent (m); default 10 oscillator lengths.")
@click.option("--npts", type=click.IntRange(min=1), default=2000, show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@mu_option
@output_options
@click.pass_context
def oscillator(ctx, omega, k, m, omega0, rmax, npts, jobs, mu, sub_fmt, sub_out):
    """Five lowest twisted-oscillator levels per omega, beside the reference table."""
    _apply_output(ctx, sub_fmt, sub_out)
    omegas = _values(omega) if omega else None

    def build():
        grid = reports.oscillator_grid(omega0, m, mu, npts, rmax)
        return reports.oscillator_report(omegas, m, k, omega0, mu, grid, jobs)

    _run(ctx, build)


@cli.command("list-reproductions")
@output_options
@click.pass_context
def list_reproductions(ctx, sub_fmt, sub_out):
    """Which subcommand regenerates which figure or table."""
    _apply_output(ctx, sub_fmt, sub_out)
    _emit(ctx, reports.reproductions_report())


def main(argv=None):
    cli.main(args=argv, prog_name="hqm")


if __name__ == "__main__":
    main()
