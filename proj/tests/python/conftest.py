import json
import os
import pathlib

import pytest

ROOT = pathlib.Path(os.environ.get("OBSTOWER_ROOT", pathlib.Path(__file__).resolve().parents[2]))


def load(rel):
    return json.loads((ROOT / rel).read_text())


@pytest.fixture(scope="session")
def root():
    return ROOT


@pytest.fixture(scope="session")
def schemas():
    return {name: load(f"schemas/{name}.schema.json") for name in ("spec", "report", "error")}


@pytest.fixture(scope="session")
def specs():
    return {p.stem: json.loads(p.read_text()) for p in sorted((ROOT / "examples_specs").glob("*.json"))}


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("OBSTOWER_CLI")
    if not path:
        pytest.skip("OBSTOWER_CLI not set")
    return path
