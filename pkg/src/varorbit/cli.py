"""Command-line interface: check, minimize, sample, serve.

Exit codes: 0 success, 1 usage/parse error, 2 computation failure.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

import click
import numpy as np

from .errors import (
    CapExceeded,
    CollisionError,
    InitFailure,
    InvalidGenerator,
    ShapeError,
    SymmetryViolation,
    VarorbitError,
)
from .groups import is_coercive, kernel_projector, load_group_file
from .optimize import MinimizeConfig, minimize, random_init, verify
from .paths import FourierPath, QuadratureParams, default_nu
from .records import (
    OrbitRecord,
    read_orbit,
    write_history_csv,
    write_orbit,
    write_trajectory_csv,
)

PARSE_ERRORS = (InvalidGenerator, ShapeError, OSError, ValueError)
COMPUTE_ERRORS = (CapExceeded, CollisionError, InitFailure, SymmetryViolation)


@dataclass
class RunManifest:
    group_file: str
    s: int
    nu: int
    seed: int
    restarts: int
    max_iters: int
    grad_tol: float
    amplitude: float
    out_dir: str


@click.group()
def cli():
    """Search for symmetric periodic orbits of the n-body problem."""


@cli.command("check")
@click.option("--group", "group_file", required=True, type=click.Path())
def cmd_check(group_file):
    """Validate a group file and print its diagnostics."""
    group = load_group_file(group_file)
    PK = kernel_projector(group)
    dim_fixed = int(round(float(np.trace(PK))))
    coercive = is_coercive(group)
    click.echo(f"name:            {group.name or '(unnamed)'}")
    click.echo(f"bodies/dim:      n={group.system.n} d={group.system.d} "
               f"alpha={group.system.alpha}")
    click.echo(f"group order:     {group.order}")
    click.echo(f"kernel order:    {len(group.kernel)}")
    click.echo(f"type:            {group.gtype}")
    click.echo(f"l (time image):  {group.l}")
    click.echo(f"dim (E^n)^K:     {dim_fixed}")
    click.echo(f"coercive:        {'yes' if coercive else 'no — minimizers may escape'}")


@cli.command("minimize")
@click.option("--group", "group_file", required=True, type=click.Path())
@click.option("--s", "s", default=8, show_default=True)
@click.option("--nu", default=0, help="quadrature subintervals (0 = auto)")
@click.option("--seed", default=0, show_default=True)
@click.option("--restarts", default=1, show_default=True)
@click.option("--max-iters", default=2000, show_default=True)
@click.option("--grad-tol", default=1e-8, show_default=True)
@click.option("--amplitude", default=1.0, show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
def cmd_minimize(group_file, s, nu, seed, restarts, max_iters, grad_tol,
                 amplitude, out_dir):
    """Run seeded random restarts and write orbit records plus a summary."""
    if restarts < 1:
        raise click.UsageError("--restarts must be >= 1")
    manifest = RunManifest(group_file, s, nu or default_nu(s), seed, restarts,
                           max_iters, grad_tol, amplitude, out_dir)
    out = Path(manifest.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    probe = out / ".write_probe"
    try:
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise click.ClickException(f"output dir not writable: {exc}")
    group = load_group_file(manifest.group_file)
    if not is_coercive(group):
        click.echo("warning: action is not coercive for this group", err=True)
    quad = QuadratureParams(manifest.nu)
    rows = []
    for k in range(manifest.restarts):
        run_seed = manifest.seed + k
        cfg = MinimizeConfig(max_iters=manifest.max_iters,
                             grad_tol=manifest.grad_tol, seed=run_seed,
                             amplitude=manifest.amplitude)
        try:
            path0 = random_init(group, manifest.s, seed=run_seed,
                                amplitude=manifest.amplitude, nu=manifest.nu)
            outcome = minimize(path0, quad, cfg)
        except VarorbitError as exc:
            rows.append((run_seed, f"error: {exc}", "", "", ""))
            continue
        rep = outcome.report
        rows.append((run_seed, outcome.status, repr(rep.action),
                     repr(rep.grad_norm), repr(rep.min_mutual_distance)))
        write_history_csv(outcome.history, out / f"history_seed{run_seed}.csv")
        if outcome.status == "converged":
            rec = OrbitRecord(group, outcome.path, manifest.nu, rep.action,
                              rep.grad_norm, rep.min_mutual_distance)
            write_orbit(rec, out / f"orbit_seed{run_seed}.json")
    with open(out / "summary.csv", "w") as f:
        f.write("seed,status,action,grad_norm,min_distance\n")
        for row in rows:
            f.write(",".join(str(v) for v in row) + "\n")
    for row in rows:
        click.echo(f"seed {row[0]}: {row[1]}"
                   + (f" action={row[2]}" if row[2] else ""))


@cli.command("sample")
@click.option("--orbit", "orbit_file", required=True, type=click.Path())
@click.option("--resolution", default=0,
              help="samples per fundamental domain (0 = stored nu)")
@click.option("--out", "out_file", required=True, type=click.Path())
def cmd_sample(orbit_file, resolution, out_file):
    """Export the full-period trajectory of an orbit record as CSV."""
    rec = read_orbit(orbit_file)
    nu = resolution or rec.nu
    write_trajectory_csv(rec.path, nu, out_file)
    click.echo(f"wrote {nu * rec.group.l + 1} samples to {out_file}")


@cli.command("verify")
@click.option("--orbit", "orbit_file", required=True, type=click.Path())
@click.option("--residual-tol", default=1e-2, show_default=True,
              help="accept max residual below this fraction of the "
                   "gradient scale")
def cmd_verify(orbit_file, residual_tol):
    """Newton-residual and symmetry verification of an orbit record."""
    rec = read_orbit(orbit_file)
    rep = verify(rec.path, QuadratureParams(rec.nu),
                 residual_rel_tol=residual_tol)
    click.echo(f"newton residual max: {rep.residual_max:.3e} "
               f"(scale {rep.residual_scale:.3e})")
    click.echo(f"symmetry violation:  {rep.symmetry_max:.3e}")
    click.echo(f"min distance:        {rep.min_distance:.6f}")
    click.echo("verdict:             " + ("pass" if rep.passed else "fail"))
    if not rep.passed:
        sys.exit(2)


@cli.command("serve")
@click.option("--port", default=8787, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
def cmd_serve(port, host):
    """Start the steering service for the browser UI."""
    import uvicorn

    from .server import create_app

    click.echo(f"serving on http://{host}:{port}")
    uvicorn.run(create_app(), host=host, port=port, log_level="warning")


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except SystemExit as exc:
        return exc.code or 0
    except COMPUTE_ERRORS as exc:
        click.echo(f"computation failed: {exc}", err=True)
        return 2
    except PARSE_ERRORS as exc:
        click.echo(f"error: {exc}", err=True)
        return 1


if __name__ == "__main__":
    sys.exit(main())
