"""Command line for the locker.

Every command builds the HTTP app in process and talks to it through the
test transport, so CLI runs and a deployed server exercise the same code
path.  State lives in the store directory; each invocation reloads it.

Output is one ``key=value`` line per field (or a JSON object with
``--format json``).  Failures print ``error=<code>`` on stderr and exit
with the status mapped to that code.
"""

from __future__ import annotations

import functools
import hashlib
import json as jsonlib
import os
import random
import shlex
import sys
from pathlib import Path

import click

from . import records
from .client import LockerClient
from .errors import LockerError, MalformedEncodingError, ValidationFailure, exit_code_for
from .locker import describe_store
from .service import DEFAULT_STORE, create_app


def _client(ctx: click.Context) -> LockerClient:
    obj = ctx.obj
    rng = random.Random(obj["seed"]) if obj["seed"] is not None else None
    app = create_app(store_dir=obj["store"], backend_name=obj["backend"], rng=rng)
    return LockerClient(app=app)


def _emit(ctx: click.Context, data: dict) -> None:
    if ctx.obj["format"] == "json":
        click.echo(jsonlib.dumps(data, sort_keys=True))
        return
    for key, value in data.items():
        if isinstance(value, bool):
            value = "true" if value else "false"
        elif isinstance(value, (list, tuple)):
            value = ",".join(str(v) for v in value)
        click.echo(f"{key}={value}")


def locker_command(fn):
    """Convert domain errors into stderr codes and mapped exit statuses."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except LockerError as err:
            click.echo(f"error={err.code}", err=True)
            if err.message and err.message != err.code:
                click.echo(f"detail={err.message}", err=True)
            sys.exit(exit_code_for(err))

    return wrapper


@click.group()
@click.option(
    "--store",
    envvar="PRIVLOCKER_STORE",
    default=DEFAULT_STORE,
    show_default=True,
    help="Store directory.",
)
@click.option(
    "--backend",
    default="bn256",
    type=click.Choice(["bn256", "toy"]),
    show_default=True,
    help="Group backend used when the store is first set up.",
)
@click.option(
    "--seed",
    type=int,
    default=None,
    help="Deterministic RNG; only honored with PRIVLOCKER_TEST_MODE=1.",
)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "json"]),
    default="text",
    show_default=True,
)
@click.pass_context
def main(ctx: click.Context, store: str, backend: str, seed: int | None, fmt: str) -> None:
    """Digital locker for policy-encrypted documents."""
    if seed is not None and not os.environ.get("PRIVLOCKER_TEST_MODE"):
        raise click.UsageError(
            "--seed is a test hook; set PRIVLOCKER_TEST_MODE=1 to allow it"
        )
    ctx.obj = {"store": store, "backend": backend, "seed": seed, "format": fmt}


@main.command()
@click.pass_context
@locker_command
def setup(ctx: click.Context) -> None:
    """Create the master key pair if the store has none."""
    with _client(ctx) as c:
        _emit(ctx, c.setup())


@main.command()
@click.pass_context
@locker_command
def stats(ctx: click.Context) -> None:
    """Show store counters."""
    with _client(ctx) as c:
        _emit(ctx, c.stats())


@main.command("register-issuer")
@click.argument("issuer_id")
@click.option(
    "--attr",
    "-a",
    "attrs",
    multiple=True,
    help="Attribute name the issuer may grant; repeatable.",
)
@click.pass_context
@locker_command
def register_issuer(ctx: click.Context, issuer_id: str, attrs: tuple[str, ...]) -> None:
    """Register an issuer together with its attribute catalog."""
    with _client(ctx) as c:
        body = c.register_issuer(issuer_id, list(attrs))
    _emit(ctx, {"issuer_id": body["issuer_id"], "catalog": body["catalog"]})


@main.command("push-attrs")
@click.argument("issuer_id")
@click.argument("identity")
@click.argument("names", nargs=-1)
@click.pass_context
@locker_command
def push_attrs(ctx: click.Context, issuer_id: str, identity: str, names: tuple[str, ...]) -> None:
    """Record attribute grants for an identity (an empty push registers it)."""
    with _client(ctx) as c:
        attrs = c.push_attrs(issuer_id, identity, list(names))
    _emit(ctx, {"identity": identity, "attributes": attrs})


@main.command("pull-attrs")
@click.argument("identity")
@click.pass_context
@locker_command
def pull_attrs(ctx: click.Context, identity: str) -> None:
    """List the attributes recorded for an identity."""
    with _client(ctx) as c:
        attrs = c.pull_attrs(identity)
    _emit(ctx, {"identity": identity, "attributes": attrs})


@main.command("gen-token")
@click.option("--subscriber", required=True)
@click.option("--issuer", required=True)
@click.option("--subscriber-policy", required=True, help="Subscriber's policy subtree.")
@click.option("--issuer-policy", required=True, help="Issuer's policy subtree.")
@click.pass_context
@locker_command
def gen_token(
    ctx: click.Context, subscriber: str, issuer: str, subscriber_policy: str, issuer_policy: str
) -> None:
    """Run (or reuse) the two-party token handshake for a policy pair."""
    with _client(ctx) as c:
        body = c.prepare_token(subscriber, issuer, subscriber_policy, issuer_policy)
    _emit(ctx, {"fingerprint": body["fingerprint"], "cached": body["cached"]})


@main.command("issue-doc")
@click.option("--issuer", required=True)
@click.option("--subscriber", required=True)
@click.option("--issuer-policy", required=True)
@click.option("--subscriber-policy", required=True)
@click.option(
    "--in",
    "in_file",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Document file to encrypt.",
)
@click.option("--text", "text_doc", help="Inline document text instead of a file.")
@click.option(
    "--edoc-out",
    type=click.Path(dir_okay=False, path_type=Path),
    help="Also write the encrypted document record here.",
)
@click.pass_context
@locker_command
def issue_doc(
    ctx: click.Context,
    issuer: str,
    subscriber: str,
    issuer_policy: str,
    subscriber_policy: str,
    in_file: Path | None,
    text_doc: str | None,
    edoc_out: Path | None,
) -> None:
    """Encrypt a document under both policies and store it."""
    if (in_file is None) == (text_doc is None):
        raise ValidationFailure("pass exactly one of --in or --text")
    document = in_file.read_bytes() if in_file is not None else text_doc.encode()
    with _client(ctx) as c:
        body = c.issue_document(issuer, subscriber, issuer_policy, subscriber_policy, document)
        out = {
            "uri": body["uri"],
            "token_cache": "hit" if body["token_cached"] else "miss",
            "sha256": hashlib.sha256(document).hexdigest(),
            "bytes": len(document),
        }
        if edoc_out is not None:
            edoc_out.write_bytes(c.export_edocument(body["uri"]))
            out["edoc_out"] = str(edoc_out)
    _emit(ctx, out)


@main.command("gen-key")
@click.argument("identity")
@click.argument("issuers", nargs=-1, required=True)
@click.pass_context
@locker_command
def gen_key(ctx: click.Context, identity: str, issuers: tuple[str, ...]) -> None:
    """Generate (or reuse) the identity's attribute key over the given issuers."""
    with _client(ctx) as c:
        body = c.gen_key(identity, list(issuers))
    _emit(
        ctx,
        {
            "handle": body["handle"],
            "created": body["created"],
            "issuers": body["issuers"],
            "attributes": body["attributes"],
            "evicted": len(body["evicted"]),
        },
    )


@main.command("fetch-doc")
@click.argument("uri")
@click.option("--requester", required=True)
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    help="Write the decrypted document here.",
)
@click.pass_context
@locker_command
def fetch_doc(ctx: click.Context, uri: str, requester: str, out: Path | None) -> None:
    """Fetch and decrypt a stored document with the requester's best key."""
    with _client(ctx) as c:
        document = c.fetch_document(requester, uri)
    result = {
        "uri": uri,
        "sha256": hashlib.sha256(document).hexdigest(),
        "bytes": len(document),
    }
    if out is not None:
        out.write_bytes(document)
        result["out"] = str(out)
    _emit(ctx, result)


@main.command()
@click.argument(
    "path", type=click.Path(exists=True, dir_okay=False, path_type=Path)
)
@click.pass_context
@locker_command
def inspect(ctx: click.Context, path: Path) -> None:
    """Describe a record or store file without decrypting anything."""
    data = path.read_bytes()
    if data[:4] == b"PVLK":
        _emit(ctx, records.describe(data))
    elif data[:4] == b"PLKS":
        _emit(ctx, describe_store(data))
    else:
        raise MalformedEncodingError("not a privlocker record or store file")


def _split_expect(line: str) -> tuple[str, str | None]:
    marker = "# expect:"
    if marker in line:
        cmd, _, expect = line.partition(marker)
        return cmd.strip(), expect.strip()
    return line.strip(), None


@main.command("run-scenario")
@click.argument(
    "script", type=click.Path(exists=True, dir_okay=False, path_type=Path)
)
@click.pass_context
@locker_command
def run_scenario(ctx: click.Context, script: Path) -> None:
    """Replay a scripted CLI session, checking inline expectations.

    Each non-comment line is a privlocker command line.  A trailing
    ``# expect: ok`` / ``# expect: error=<code>`` / ``# expect: key=value``
    states what the step must produce (default: ok).  ``{name}`` in a line
    substitutes the most recent ``name=...`` output of earlier steps.
    """
    from click.testing import CliRunner

    try:
        runner = CliRunner(mix_stderr=False)
    except TypeError:
        runner = CliRunner()
    captured: dict[str, str] = {}
    steps = 0
    failures = 0
    for lineno, raw in enumerate(script.read_text().splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        cmd, expect = _split_expect(stripped)
        steps += 1
        try:
            cmd = cmd.format(**captured)
            want = expect.format(**captured) if expect else None
        except (KeyError, ValueError, IndexError) as exc:
            failures += 1
            click.echo(f"step {steps} line {lineno}: FAIL (unknown placeholder {exc})")
            continue
        argv = ["--store", str(ctx.obj["store"]), "--backend", ctx.obj["backend"]]
        if ctx.obj["seed"] is not None:
            argv += ["--seed", str(ctx.obj["seed"] + steps)]
        argv += shlex.split(cmd)
        result = runner.invoke(main, argv)
        stdout_lines = result.output.splitlines()
        try:
            stderr_lines = result.stderr.splitlines()
        except ValueError:
            stderr_lines = []
        if want is None or want == "ok":
            ok = result.exit_code == 0
        elif want.startswith("error="):
            ok = result.exit_code != 0 and want in stderr_lines
        else:
            ok = result.exit_code == 0 and want in stdout_lines
        if result.exit_code == 0:
            for out_line in stdout_lines:
                key, sep, value = out_line.partition("=")
                if sep and key and " " not in key:
                    captured[key] = value
        click.echo(f"step {steps} line {lineno}: {'ok' if ok else 'FAIL'} ({cmd})")
        if not ok:
            failures += 1
            click.echo(f"  exit={result.exit_code} expected={want or 'ok'}")
            for out_line in stdout_lines:
                click.echo(f"  out: {out_line}")
            for err_line in stderr_lines:
                click.echo(f"  err: {err_line}")
    click.echo(
        f"scenario={'pass' if failures == 0 else 'fail'} steps={steps} failures={failures}"
    )
    if failures:
        sys.exit(1)


if __name__ == "__main__":
    main()
