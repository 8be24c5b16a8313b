"""``lempert-lab <experiment> --config <path> --out <dir>``."""

from __future__ import annotations

import sys

import click

from ..errors import LempertLabError
from .config import EXPERIMENTS, default_config, load_config
from .runners import run_experiment


@click.command(context_settings={"help_option_names": ["-h", "--help"]})
@click.argument("experiment", type=click.Choice(EXPERIMENTS))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="JSON config; defaults to the bundled one.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), default="out", show_default=True, help="Output directory.")
@click.option("--quiet", is_flag=True, help="Only print the overall verdict.")
def main(experiment, config_path, out_dir, quiet):
    """Run EXPERIMENT and write report.csv, report.json and plots/*.svg.

    Exits 0 iff every verdict passes.
    """
    try:
        cfg = load_config(config_path) if config_path else default_config(experiment)
    except (LempertLabError, ValueError, OSError) as exc:
        raise click.UsageError(f"bad config: {exc}") from None
    if cfg.experiment != experiment:
        raise click.UsageError(f"config is for {cfg.experiment!r}, not {experiment!r}")
    rep = run_experiment(cfg, out_dir)
    if not quiet:
        for v in rep.verdicts:
            click.echo(v.line())
        if rep.failures:
            click.echo(f"{len(rep.failures)} sample failures recorded")
    click.echo(f"{experiment}: {'PASS' if rep.passed else 'FAIL'} ({len(rep.rows)} rows) -> {out_dir}")
    sys.exit(0 if rep.passed else 1)


if __name__ == "__main__":
    main()
