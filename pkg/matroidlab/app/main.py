from __future__ import annotations

import sys
from pathlib import Path
from typing import Optional, Sequence

import click

from .commands.common import create_run_context
from .commands.gen import gen
from .commands.minor import minor
from .commands.multilabel import multilabel
from .commands.proximity import check_proximity
from .commands.reproduce import reproduce
from .commands.sat import sat
from .commands.sibo import sibo
from .errors import EXIT_PASS, EXIT_USAGE
from .version import get_version


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--config", "config_path", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Settings file (default: config/config.base.yaml)")
@click.option("--no-run-logs", is_flag=True, help="Do not write a run directory under the log dir")
@click.version_option(get_version(), prog_name="matroidlab")
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[Path], no_run_logs: bool) -> None:
    """Matroid basis toolkit: proximity, SI-orderings, SAT encodings, multi-label exchanges."""
    ctx.obj = create_run_context(config_path, run_logs=not no_run_logs)
    ctx.call_on_close(ctx.obj.close)


cli.add_command(gen)
cli.add_command(check_proximity)
cli.add_command(sibo)
cli.add_command(sat)
cli.add_command(multilabel)
cli.add_command(minor)
cli.add_command(reproduce)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code instead of exiting."""
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        rv = cli.main(args=args, prog_name="matroidlab", standalone_mode=False)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    return rv if isinstance(rv, int) else EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
