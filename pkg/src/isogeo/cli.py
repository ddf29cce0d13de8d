"""isogeo command line: run configs, validate them, sample geodesics."""

import sys

import click
import numpy as np

from . import experiments
from .config import ConfigError, load_config
from .diffeos import make_diffeomorphism, registered_names
from .pullback import PullbackManifold
from .serialize import fmt


@click.group()
def main():
    """Iso-Riemannian geometry experiments on pullback manifolds."""


@main.command()
@click.argument("config_file", type=click.Path(exists=True, dir_okay=False))
def run(config_file):
    """Run the experiment described by CONFIG_FILE."""
    try:
        config = load_config(config_file)
    except ConfigError as exc:
        for problem in exc.problems:
            click.echo(f"error: {problem}", err=True)
        sys.exit(experiments.EXIT_USAGE)
    sys.exit(experiments.run(config))


@main.command()
@click.argument("config_file", type=click.Path(exists=True, dir_okay=False))
def validate(config_file):
    """Check CONFIG_FILE and report problems without running anything."""
    try:
        config = load_config(config_file)
    except ConfigError as exc:
        for problem in exc.problems:
            click.echo(f"error: {problem}", err=True)
        sys.exit(experiments.EXIT_USAGE)
    click.echo(f"ok: {config.experiment} experiment on "
               f"{config.geometry_name} geometry -> {config.output_dir}")


def _parse_coords(raw, label):
    try:
        return np.array([float(part) for part in raw.split(",")])
    except ValueError:
        raise click.UsageError(f"{label} must be comma-separated floats, got {raw!r}")


@main.command()
@click.option("--geometry", required=True, type=click.Choice(registered_names()))
@click.option("--beta", type=float, default=None, help="river/spiral parameter")
@click.option("--eta", type=float, default=None, help="river parameter")
@click.option("-a", "--a", "a_param", type=float, default=None, help="banana shear")
@click.option("-z", "--z", "z_param", type=float, default=None, help="banana offset")
@click.option("--dim", type=int, default=None, help="identity dimension")
@click.option("--from", "start", required=True, help="start point x1,x2,...")
@click.option("--to", "end", required=True, help="end point y1,y2,...")
@click.option("--samples", type=int, default=100, show_default=True)
@click.option("--iso/--levi-civita", default=False,
              help="sample the constant-speed geodesic instead of the Levi-Civita one")
@click.option("--output", type=click.Path(dir_okay=False), default=None,
              help="CSV destination (default: stdout)")
def geodesic(geometry, beta, eta, a_param, z_param, dim, start, end, samples,
             iso, output):
    """Sample a geodesic between two points and emit (t, coords) CSV rows."""
    params = {k: v for k, v in
              (("beta", beta), ("eta", eta), ("a", a_param), ("z", z_param),
               ("dim", dim)) if v is not None}
    try:
        diffeo = make_diffeomorphism(geometry, params)
    except TypeError as exc:
        raise click.UsageError(f"bad parameters for {geometry}: {exc}")
    M = PullbackManifold(diffeo)
    x = _parse_coords(start, "--from")
    y = _parse_coords(end, "--to")
    if len(x) != M.dim or len(y) != M.dim:
        raise click.UsageError(f"{geometry} needs {M.dim}-dimensional points")
    rows = experiments.geodesic_rows(M, x, y, samples, iso)
    header = ["t"] + [f"x{i}" for i in range(M.dim)]
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if output is None:
        click.echo(text, nl=False)
    else:
        with open(output, "w") as fh:
            fh.write(text)


if __name__ == "__main__":
    main()
