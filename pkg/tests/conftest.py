import csv
from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def reference_geometry():
    """n -> (W, H) at the published 5-decimal precision."""
    table = {}
    with open(DATA_DIR / "reference_geometry.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            table[int(row["n"])] = (float(row["W"]), float(row["H"]))
    return table


@pytest.fixture(scope="session")
def reference_eigenvalues():
    """(n, m) -> even Steklov eigenvalue at 5 decimals, n=2..20, m=2..10."""
    table = {}
    with open(DATA_DIR / "reference_eigenvalues.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            table[(int(row["n"]), int(row["m"]))] = float(row["lambda"])
    return table


@pytest.fixture(scope="session")
def reference_index():
    """n -> (K0, MI) exact integers for n = 2..100."""
    table = {}
    with open(DATA_DIR / "reference_index.csv", newline="") as fh:
        for row in csv.DictReader(fh):
            table[int(row["n"])] = (int(row["K0"]), int(row["MI"]))
    return table
