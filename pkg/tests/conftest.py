import json
from pathlib import Path

import pytest

import hdabisim as hb

MODELS = Path(__file__).resolve().parent.parent / "models"


def load(name: str) -> hb.LoadedModel:
    return hb.load_model(MODELS / name)


def model_dict(name: str) -> dict:
    with open(MODELS / name, encoding="utf-8") as handle:
        return json.load(handle)


@pytest.fixture(scope="session")
def models_dir() -> Path:
    return MODELS


@pytest.fixture(scope="session")
def fig1_left() -> hb.LoadedModel:
    return load("fig1_left.json")


@pytest.fixture(scope="session")
def fig1_right() -> hb.LoadedModel:
    return load("fig1_right.json")


@pytest.fixture(scope="session")
def fig2() -> hb.LoadedModel:
    return load("fig2_square.json")


@pytest.fixture(scope="session")
def fig3() -> hb.LoadedModel:
    return load("fig3.json")


@pytest.fixture(scope="session")
def fig5_x() -> hb.LoadedModel:
    return load("fig5_x.json")


@pytest.fixture(scope="session")
def fig5_y() -> hb.LoadedModel:
    return load("fig5_y.json")


@pytest.fixture(scope="session")
def ab_square() -> hb.LoadedModel:
    return load("ab_square_abc.json")


@pytest.fixture(scope="session")
def ac_square() -> hb.LoadedModel:
    return load("ac_square_abc.json")


def square_homotopy_chain(space: hb.PrecubicalSet) -> list[hb.CubePath]:
    """The four-path homotopy chain across the filled part of the model in
    fig3.json, in drawing order."""
    seqs = [
        ("i", "a", "x", "b", "bc", "c", "z", "d"),
        ("i", "a", "x", "cb", "bc", "c", "z", "d"),
        ("i", "a", "x", "cb", "bc", "tb", "z", "d"),
        ("i", "a", "x", "cb", "y", "tb", "z", "d"),
    ]
    return [hb.CubePath(space, seq) for seq in seqs]
