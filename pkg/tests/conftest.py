"""Shared fixtures: the packaged example maps, parsed and resolved."""

from __future__ import annotations

from pathlib import Path

import pytest

from lawmap import parse_set, resolve_set

FIXTURES = Path(__file__).resolve().parent.parent / "src" / "lawmap" / "fixtures"


def load_fixture_set(name: str):
    path = FIXTURES / name
    lawmap_set, diagnostics = parse_set(path.read_text(encoding="utf-8"), str(path))
    assert lawmap_set is not None, [d.render() for d in diagnostics]
    errors = [d for d in diagnostics if d.severity.value == "error"]
    assert not errors, [d.render() for d in errors]
    return lawmap_set


def resolve_fixture_set(name: str):
    lawmap_set = load_fixture_set(name)
    rs, diagnostics = resolve_set(lawmap_set)
    assert rs is not None, [d.render() for d in diagnostics]
    return rs


@pytest.fixture(scope="session")
def s24c_set():
    return load_fixture_set("s24c.lawmap")


@pytest.fixture(scope="session")
def s24c_rs():
    return resolve_fixture_set("s24c.lawmap")


@pytest.fixture(scope="session")
def conveyancing_set():
    return load_fixture_set("conveyancing.lawmap")


@pytest.fixture(scope="session")
def conveyancing_rs():
    return resolve_fixture_set("conveyancing.lawmap")


@pytest.fixture(scope="session")
def listing_text():
    return (FIXTURES / "s24c_listing.lwo").read_text(encoding="utf-8")
