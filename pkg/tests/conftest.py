"""Shared fixtures: data paths, CLI runner, backend parametrization."""
from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from growthlab import HAS_NUMBA

DATA = Path(__file__).parent / "data"

BACKENDS = ("numpy", "numba") if HAS_NUMBA else ("numpy",)


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(params=BACKENDS)
def backend(request) -> str:
    return request.param


def run_cli(*args: str, timeout: float = 300.0) -> subprocess.CompletedProcess:
    """Run the installed CLI in a subprocess and capture output."""
    return subprocess.run(
        [sys.executable, "-m", "growthlab", *args],
        capture_output=True,
        text=True,
        timeout=timeout,
    )


def cli_json(*args: str, timeout: float = 300.0) -> tuple[int, dict]:
    proc = run_cli(*args, timeout=timeout)
    assert proc.stdout.strip(), f"no stdout; stderr: {proc.stderr}"
    return proc.returncode, json.loads(proc.stdout)


@pytest.fixture(scope="session")
def cli():
    return run_cli
