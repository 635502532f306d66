"""Command line front end against frozen golden transcripts.

Byte identity with the goldens pins the output contract: key order, float
rendering, exact-rational strings, and the schema tag.  Any formatting
drift shows up as a diff here before it reaches a downstream parser.
"""

import json
import subprocess
import sys

import pytest

from cli_cases import EXIT_CASES, GOLDEN_CASES, GOLDEN_DIR, SUBCOMMANDS, run_cli


@pytest.mark.parametrize(
    "name,argv", GOLDEN_CASES, ids=[case[0] for case in GOLDEN_CASES]
)
def test_golden_transcript(name, argv):
    code, out, err = run_cli(argv)
    assert code == 0
    assert err == ""
    assert out == (GOLDEN_DIR / name).read_text()


def test_every_subcommand_has_a_golden():
    assert {argv[0] for _, argv in GOLDEN_CASES} == SUBCOMMANDS


def test_runs_are_deterministic():
    # repeat every golden case; output must be byte-identical across runs
    for name, argv in GOLDEN_CASES:
        assert run_cli(argv) == run_cli(argv), name


def test_json_documents_are_canonical():
    for name, _ in GOLDEN_CASES:
        if not name.endswith(".json"):
            continue
        text = (GOLDEN_DIR / name).read_text()
        doc = json.loads(text)
        assert doc["schema"] == "padlab/1"
        assert "command" in doc and "p" in doc and "precision" in doc
        # emitted with sorted keys and two-space indent, nothing else
        assert text == json.dumps(doc, sort_keys=True, indent=2) + "\n"


def test_text_format_flattens_the_same_document():
    doc = json.loads((GOLDEN_DIR / "xi_k1.json").read_text())
    lines = (GOLDEN_DIR / "xi_k1_text.txt").read_text().splitlines()
    assert lines == [f"{key} = {doc[key]}" for key in sorted(doc)]


@pytest.mark.parametrize(
    "argv,want",
    EXIT_CASES,
    ids=[f"exit{want}-{argv[0] if argv else 'noargs'}" for argv, want in EXIT_CASES],
)
def test_documented_exit_codes(argv, want):
    code, out, err = run_cli(argv)
    assert code == want
    assert out == ""  # failures never emit a document
    assert err != ""  # but always say why on stderr


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "padlab", "xi", "--p", "3", "--k", "0"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN_DIR / "xi_k0.json").read_text()
