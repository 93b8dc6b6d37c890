"""Command-line interface tests driven through click's runner."""

import json

import pytest
from click.testing import CliRunner

from privlocker.cli import main


@pytest.fixture(autouse=True)
def test_mode(monkeypatch):
    monkeypatch.setenv("PRIVLOCKER_TEST_MODE", "1")


@pytest.fixture
def runner():
    try:
        return CliRunner(mix_stderr=False)
    except TypeError:
        return CliRunner()


@pytest.fixture
def store(tmp_path):
    return str(tmp_path / "store")


def run(runner, store, *args, seed="7"):
    base = ["--store", store, "--backend", "toy"]
    if seed is not None:
        base += ["--seed", seed]
    return runner.invoke(main, base + list(args))


def lines(result):
    return dict(
        line.split("=", 1) for line in result.output.strip().splitlines() if "=" in line
    )


def seed_store(runner, store):
    assert run(runner, store, "setup").exit_code == 0
    assert run(runner, store, "register-issuer", "EDU", "-a", "degree", "-a", "honors").exit_code == 0
    assert run(runner, store, "register-issuer", "GOV", "-a", "auditor").exit_code == 0
    assert run(runner, store, "push-attrs", "EDU", "r-audit", "degree").exit_code == 0
    assert run(runner, store, "push-attrs", "GOV", "r-audit", "auditor").exit_code == 0
    assert run(runner, store, "push-attrs", "EDU", "sub-alice").exit_code == 0


def test_happy_path(runner, store, tmp_path):
    result = run(runner, store, "setup")
    assert result.exit_code == 0
    assert lines(result)["created"] == "true"

    seed_store(runner, store)
    result = run(runner, store, "pull-attrs", "r-audit")
    assert lines(result)["attributes"] == "EDU/degree,GOV/auditor"

    result = run(runner, store, "gen-key", "r-audit", "EDU", "GOV")
    assert result.exit_code == 0
    assert lines(result)["created"] == "true"

    result = run(
        runner,
        store,
        "gen-token",
        "--subscriber", "sub-alice",
        "--issuer", "GOV",
        "--subscriber-policy", "EDU/degree",
        "--issuer-policy", "GOV/auditor",
    )
    assert lines(result)["cached"] == "false"

    result = run(
        runner,
        store,
        "issue-doc",
        "--issuer", "GOV",
        "--subscriber", "sub-alice",
        "--issuer-policy", "GOV/auditor",
        "--subscriber-policy", "EDU/degree",
        "--text", "cli payload",
    )
    assert result.exit_code == 0
    issued = lines(result)
    assert issued["token_cache"] == "hit"

    out_file = tmp_path / "fetched.bin"
    result = run(
        runner, store, "fetch-doc", issued["uri"], "--requester", "r-audit",
        "--out", str(out_file),
    )
    assert result.exit_code == 0
    assert lines(result)["sha256"] == issued["sha256"]
    assert out_file.read_bytes() == b"cli payload"

    result = run(runner, store, "stats")
    assert lines(result)["documents"] == "1"


def test_file_document_roundtrip(runner, store, tmp_path):
    seed_store(runner, store)
    run(runner, store, "gen-key", "r-audit", "EDU", "GOV")
    doc = tmp_path / "doc.bin"
    doc.write_bytes(bytes(range(256)) * 4)
    edoc = tmp_path / "doc.edoc"
    result = run(
        runner,
        store,
        "issue-doc",
        "--issuer", "GOV",
        "--subscriber", "sub-alice",
        "--issuer-policy", "GOV/auditor",
        "--subscriber-policy", "EDU/degree",
        "--in", str(doc),
        "--edoc-out", str(edoc),
    )
    issued = lines(result)
    assert issued["bytes"] == "1024"
    assert edoc.exists()

    result = run(runner, store, "inspect", str(edoc))
    info = lines(result)
    assert info["type"] == "e-document"
    assert info["policy"] == "ALLOF(EDU/degree, GOV/auditor)"

    out = tmp_path / "out.bin"
    run(runner, store, "fetch-doc", issued["uri"], "--requester", "r-audit", "--out", str(out))
    assert out.read_bytes() == doc.read_bytes()


def test_json_format(runner, store):
    result = run(runner, store, "--format", "json", "setup")
    body = json.loads(result.output)
    assert body["created"] is True
    assert body["backend"] == "toy"


def test_inspect_store_file(runner, store, tmp_path):
    run(runner, store, "setup")
    result = run(runner, store, "inspect", str(tmp_path / "store" / "master.plks"))
    info = lines(result)
    assert info["type"] == "store/master"
    assert info["checksum"] == "ok"


# ---- exit codes --------------------------------------------------------------------


def stderr_lines(result):
    text = result.stderr if result.stderr else result.output
    return dict(
        line.split("=", 1) for line in text.strip().splitlines() if "=" in line
    )


def test_exit_codes(runner, store, tmp_path):
    seed_store(runner, store)

    result = run(runner, store, "register-issuer", "EDU")
    assert result.exit_code == 41
    assert stderr_lines(result)["error"] == "duplicate-issuer"

    result = run(
        runner, store, "gen-token",
        "--subscriber", "sub-alice", "--issuer", "GOV",
        "--subscriber-policy", "EDU/degree AND", "--issuer-policy", "GOV/auditor",
    )
    assert result.exit_code == 20
    assert stderr_lines(result)["error"] == "policy-syntax"

    result = run(runner, store, "fetch-doc", "GOV::PRIV::eeeeeeeeeeeeeeee", "--requester", "r-audit")
    assert result.exit_code == 44
    assert stderr_lines(result)["error"] == "unknown-uri"

    result = run(runner, store, "fetch-doc", "GOV::PUB::eeeeeeeeeeeeeeee", "--requester", "r-audit")
    assert result.exit_code == 45

    # issue a document, then exercise the key-related failures
    issued = lines(
        run(
            runner, store, "issue-doc",
            "--issuer", "GOV", "--subscriber", "sub-alice",
            "--issuer-policy", "GOV/auditor", "--subscriber-policy", "EDU/degree",
            "--text", "x",
        )
    )
    result = run(runner, store, "fetch-doc", issued["uri"], "--requester", "r-audit")
    assert result.exit_code == 46
    assert stderr_lines(result)["error"] == "no-covering-key"

    result = run(
        runner, store, "issue-doc",
        "--issuer", "GOV", "--subscriber", "sub-alice",
        "--issuer-policy", "GOV/auditor", "--subscriber-policy", "EDU/degree",
    )
    assert result.exit_code == 40  # neither --in nor --text

    garbage = tmp_path / "garbage.bin"
    garbage.write_bytes(b"not a record at all")
    result = run(runner, store, "inspect", str(garbage))
    assert result.exit_code == 10

    run(runner, store, "push-attrs", "EDU", "r-poor", "honors")
    run(runner, store, "push-attrs", "GOV", "r-poor", "auditor")
    run(runner, store, "gen-key", "r-poor", "EDU", "GOV")
    result = run(runner, store, "fetch-doc", issued["uri"], "--requester", "r-poor")
    assert result.exit_code == 30
    assert stderr_lines(result)["error"] == "policy-not-satisfied"


def test_seed_flag_gated_by_env(runner, store, monkeypatch):
    monkeypatch.delenv("PRIVLOCKER_TEST_MODE")
    result = run(runner, store, "setup")
    assert result.exit_code == 2
    result = run(runner, store, "setup", seed=None)
    assert result.exit_code == 0


def test_seeded_setup_is_deterministic(runner, tmp_path):
    a, b = str(tmp_path / "a"), str(tmp_path / "b")
    for target in (a, b):
        assert run(runner, target, "setup", seed="42").exit_code == 0
    blob_a = (tmp_path / "a" / "master.plks").read_bytes()
    blob_b = (tmp_path / "b" / "master.plks").read_bytes()
    assert blob_a == blob_b
    c = str(tmp_path / "c")
    run(runner, c, "setup", seed="43")
    assert (tmp_path / "c" / "master.plks").read_bytes() != blob_a


# ---- scenario runner ---------------------------------------------------------------

PASSING_SCENARIO = """\
# a comment line
setup  # expect: created=true
register-issuer EDU -a degree
push-attrs EDU r1 degree
push-attrs EDU s1
gen-key r1 EDU  # expect: created=true
issue-doc --issuer EDU --subscriber s1 --issuer-policy EDU/degree --subscriber-policy EDU/degree --text hello
fetch-doc {uri} --requester r1  # expect: sha256={sha256}
fetch-doc EDU::PRIV::dddddddddddddddd --requester r1  # expect: error=unknown-uri
"""


def test_scenario_passes(runner, store, tmp_path):
    script = tmp_path / "scenario.txt"
    script.write_text(PASSING_SCENARIO)
    result = run(runner, store, "run-scenario", str(script))
    assert result.exit_code == 0, result.output
    assert "scenario=pass" in result.output


def test_scenario_failure_sets_exit_code(runner, store, tmp_path):
    script = tmp_path / "scenario.txt"
    script.write_text("setup  # expect: created=false\n")
    result = run(runner, store, "run-scenario", str(script))
    assert result.exit_code == 1
    assert "scenario=fail" in result.output


def test_bundled_demo_scenario(runner, store):
    result = run(runner, store, "run-scenario", "scenarios/demo.txt")
    assert result.exit_code == 0, result.output
    assert "scenario=pass steps=" in result.output
