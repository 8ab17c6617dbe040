from __future__ import annotations

from pathlib import Path

import pytest

from koszul.dsl import parse_presentation
from koszul.linalg import QQ

ROOT = Path(__file__).resolve().parent.parent

BISERIAL = (ROOT / "presentations" / "biserial.kz").read_text()
MULTISERIAL = (ROOT / "presentations" / "multiserial.kz").read_text()
KRONECKER = (ROOT / "presentations" / "kronecker.kz").read_text()
EMPTY = (ROOT / "presentations" / "empty.kz").read_text()


@pytest.fixture(scope="session")
def biserial():
    return parse_presentation(BISERIAL, QQ, degree_cap=10)


@pytest.fixture(scope="session")
def multiserial():
    return parse_presentation(MULTISERIAL, QQ, degree_cap=16)


@pytest.fixture(scope="session")
def kronecker():
    return parse_presentation(KRONECKER, QQ, degree_cap=10)


def presentations_dir() -> Path:
    return ROOT / "presentations"
