from __future__ import annotations

from pathlib import Path

import pytest

from procco import parse

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = Path(__file__).parent / "golden"


def load_fixture(name: str):
    """Parse a fixture file, failing the test on any diagnostic error."""
    graph, diagnostics = parse(FIXTURES.joinpath(name).read_text(encoding="utf-8"))
    assert graph is not None, f"fixture {name} failed to parse: {diagnostics}"
    return graph


@pytest.fixture
def run_cli(capsys):
    """Invoke the CLI in-process; returns (exit_code, stdout, stderr)."""
    from procco.cli import main

    def run(*argv: str):
        code = main(list(argv))
        captured = capsys.readouterr()
        return int(code), captured.out, captured.err

    return run
