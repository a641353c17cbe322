"""Shipped molecule fixtures: the three C20 isomers (ring, bowl, fullerene)
with HOMO / HOMO-1 coefficient vectors and published ionization potentials.

Regenerate with tools/make_fixtures.py (see that script for the construction
and its assumptions).
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..ingest import parse_native
from ..molecule import Molecule

FIXTURE_NAMES = ("ring", "bowl", "fullerene")


def fixture_path(name: str) -> Path:
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; available: {FIXTURE_NAMES}")
    return Path(str(resources.files(__package__).joinpath(f"{name}.json")))


def load_fixture(name: str) -> Molecule:
    return parse_native(fixture_path(name).read_text(encoding="utf-8"), check_norms=False)
