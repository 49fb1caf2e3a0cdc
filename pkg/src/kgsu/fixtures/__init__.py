"""Bundled fixture data: CSV tables, the mapping, shapes, and queries.

The fixture models a handful of publications and one dataset with the
link, role, plot, and unit structures the competency-question queries
reference; executing the bundled mapping over the bundled tables yields
the dataset every query fixture runs against.
"""

from __future__ import annotations

import importlib.resources
from pathlib import Path

_ROOT = importlib.resources.files(__name__)

QUERY_NAMES = [
    "unit_triples",
    "unit_associations",
    "authors_roles_direct",
    "authors_roles_units",
    "dataset_links_direct",
    "dataset_links_units",
    "plot_environment_direct",
    "plot_environment_units",
    "subject_units",
    "remote_sensing_pubs_direct",
    "remote_sensing_pubs_units",
    "links_unit_construct",
]


def fixture_path(*parts: str) -> Path:
    return Path(str(_ROOT.joinpath(*parts)))


def read_text(*parts: str) -> str:
    return _ROOT.joinpath(*parts).read_text(encoding="utf-8")


def query_text(name: str) -> str:
    return read_text("queries", f"{name}.rq")


def mapping_text() -> str:
    return read_text("mapping.ttl")


def shapes_text() -> str:
    return read_text("shapes.ttl")


def tables_dir() -> Path:
    return fixture_path("tables")


def build_fixture_dataset(backend=None):
    """Execute the bundled mapping over the bundled tables."""
    from kgsu.mapping import execute, load_tables_dir, parse_mapping

    doc = parse_mapping(mapping_text())
    tables = load_tables_dir(tables_dir())
    return execute(doc, tables, backend=backend)
