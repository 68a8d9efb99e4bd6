"""Shared fixtures: session-scoped demo datasets (generation is the costly
part, so tests and the acceptance suite reuse one copy)."""

import os

import pytest

from holoqa.synth import generate_demo_dataset


@pytest.fixture(scope="session")
def demo_dataset(tmp_path_factory):
    """Standard demo dataset: 4 holograms x 3 distortion levels."""
    root = str(tmp_path_factory.mktemp("demo"))
    manifest = generate_demo_dataset(root, seed=1234)
    return {"root": root, "manifest": manifest,
            "mos": os.path.join(root, "mos.csv")}


@pytest.fixture(scope="session")
def monotonicity_dataset(tmp_path_factory):
    """Structured dataset for the monotonicity criterion: 3 holograms x
    requantization levels {7, 6, 5, 4} bits."""
    root = str(tmp_path_factory.mktemp("mono"))
    manifest = generate_demo_dataset(
        root, scenes=("bars", "grid", "spokes"), bits_levels=(7, 6, 5, 4),
        seed=1234,
    )
    return {"root": root, "manifest": manifest,
            "mos": os.path.join(root, "mos.csv")}
