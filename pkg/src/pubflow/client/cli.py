"""`pubflow` command line interface.

Exit codes: 0 success, 2 usage error, 3 transport failure, 4 server-reported
error.
"""

from __future__ import annotations

import json as jsonlib
import sys
from pathlib import Path

import click

from pubflow.client.stub import Client, ServerError, StubConfig, TransportError


def _emit(ctx, data, human: str) -> None:
    if ctx.obj["json"]:
        click.echo(jsonlib.dumps(data, sort_keys=True))
    else:
        click.echo(human)


@click.group()
@click.option("--server", envvar="PUBFLOW_SERVER", default="http://127.0.0.1:8420")
@click.option("--user", envvar="PUBFLOW_USER", required=True)
@click.option("--password", envvar="PUBFLOW_PASSWORD", required=True)
@click.option("--json", "json_output", is_flag=True, help="machine-readable output")
@click.pass_context
def cli(ctx, server, user, password, json_output):
    ctx.obj = {
        "client": Client(StubConfig(base_url=server, username=user, password=password)),
        "json": json_output,
    }


@cli.command()
@click.argument("archive", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def deploy(ctx, archive):
    """Deploy a process archive (zip)."""
    result = ctx.obj["client"].deploy_archive(Path(archive))
    _emit(ctx, result, f"deployed {result['name']} version {result['version']}")


@cli.command()
@click.pass_context
def ingest(ctx):
    """Create a fresh repository object, print its PID."""
    pid = ctx.obj["client"].ingest_new_object()
    _emit(ctx, {"pid": pid}, pid)


@cli.group()
def dc():
    """Dublin Core metadata commands."""


@dc.command("set")
@click.argument("pid")
@click.argument("pairs", nargs=-1, required=True)
@click.pass_context
def dc_set(ctx, pid, pairs):
    """Set DC fields from k=v pairs; repeat a key for repeated values."""
    fields: dict[str, list[str]] = {}
    for pair in pairs:
        if "=" not in pair:
            raise click.UsageError(f"expected key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        fields.setdefault(key, []).append(value)
    ok = ctx.obj["client"].change_dc(pid, fields)
    if not ok:
        raise ServerError(400, "CHANGE_DC_FAILED", f"could not update DC of {pid}")
    _emit(ctx, {"success": True}, f"updated DC of {pid}")


@cli.group()
def article():
    """Article file commands."""


@article.command("put")
@click.argument("pid")
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def article_put(ctx, pid, file):
    """Stage a file, then save it as the object's ARTICLE datastream."""
    client = ctx.obj["client"]
    path = Path(file)
    staged = client.upload_staging(path.name, path.read_bytes())
    version = client.save_article(pid, staged, client._config.username)
    _emit(ctx, {"versionNo": version}, f"saved ARTICLE version {version}")


@cli.command()
@click.argument("field")
@click.argument("operator")
@click.argument("value")
@click.option("--max-results", default=100, show_default=True)
@click.pass_context
def query(ctx, field, operator, value, max_results):
    """Run a single-condition field search."""
    rows = ctx.obj["client"].do_query(field, operator, value, max_results)
    human = "\n".join(
        f"{r['pid']}  {r['label']}  {'; '.join(r.get('title', []))}" for r in rows
    )
    _emit(ctx, {"rows": rows}, human or "(no matches)")


@cli.command()
@click.argument("action", type=click.Choice(["advance", "stop"]))
@click.argument("instance")
@click.pass_context
def admin(ctx, action, instance):
    """Advance or stop a process instance."""
    result = ctx.obj["client"].administer(instance, action)
    _emit(ctx, result, f"instance {instance} is now {result['state']}")


def main(argv: list[str] | None = None) -> int:
    try:
        cli(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return 2
    except click.Abort:
        return 2
    except TransportError as exc:
        click.echo(f"transport error: {exc}", err=True)
        return 3
    except ServerError as exc:
        click.echo(f"server error: {exc}", err=True)
        if exc.detail:
            for item in exc.detail if isinstance(exc.detail, list) else [exc.detail]:
                click.echo(f"  {item}", err=True)
        return 4


if __name__ == "__main__":
    sys.exit(main())
