"""Regenerate the golden CSV files. Run only when the format deliberately changes."""

import shutil
import tempfile
from pathlib import Path

from specdecay.cli import main

GOLDEN = Path(__file__).parent / "golden"

CASES = {
    "extremes": ["extremes", "--L", "3", "--alpha", "0.25", "--delta", "1", "--trials", "4",
                 "--master-seed", "5"],
    "free_ids": ["free-ids", "--d", "1", "--resolution", "16", "--L", "20"],
    "ids": ["ids", "--L", "2", "--alpha", "1", "--trials", "2", "--master-seed", "3"],
}


def generate(name, argv, dest):
    with tempfile.TemporaryDirectory() as tmp:
        assert main(argv + ["--out", tmp]) == 0
        for f in ("trials.csv", "curves.csv"):
            src = Path(tmp) / f
            if src.exists():
                shutil.copy(src, dest / f"{name}_{f}")


if __name__ == "__main__":
    for name, argv in CASES.items():
        generate(name, argv, GOLDEN)
