"""
Fixed CLI configurations whose outputs are committed under tests/golden.

Run ``python3 tests/golden_cases.py`` to regenerate the files after an
intentional output change.
"""

import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
GOLDEN_DIR = os.path.join(HERE, "golden")

STATIC = ["--M", "1", "--J", "0", "--l", "1"]
ROT = ["--M", "1", "--J", "1", "--l", "2"]
EXTREMAL = ["--M", "1", "--J", "1", "--l", "1"]

CASES = {
    "geometry_static.csv": ["geometry", *STATIC, "--points", "5", "--r-max", "3"],
    "geometry_rotating.json": ["geometry", *ROT, "--points", "8", "--format", "json"],
    "geometry_extremal.csv": ["geometry", *EXTREMAL, "--points", "6", "--no-log-grid", "--r-max", "4"],
    "potentials_static.csv": ["potentials", *STATIC, "--mu", "1", "--k", "2", "--points", "6"],
    "potentials_kg.json": ["potentials", *ROT, "--mu", "0.8", "--k", "-3", "--field", "kg",
                           "--points", "5", "--format", "json"],
    "potentials_hbar.csv": ["potentials", *ROT, "--mu", "1", "--k", "1", "--hbar", "0.5", "--points", "5"],
    "scan_static.json": ["scan-crossing", *STATIC, "--mu", "1", "--k", "2", "--points", "10",
                         "--format", "json"],
    "scan_extremal.csv": ["scan-crossing", "--M", "1", "--J", "-1", "--l", "1", "--mu", "0.2",
                          "--k", "-1", "--points", "10"],
    "scan_kg.csv": ["scan-crossing", *ROT, "--mu", "1", "--k", "1", "--field", "kg", "--points", "10"],
    "classify_lcc.csv": ["classify", *STATIC, "--mu", "0.3", "--k", "1"],
    "classify_lpc.json": ["classify", *ROT, "--mu", "1", "--k", "1", "--format", "json"],
    "classify_extremal.csv": ["classify", *EXTREMAL, "--mu", "1", "--k", "1"],
    "integrate_static.csv": ["integrate", *STATIC, "--mu", "1", "--k", "1", "--r-start", "2",
                             "--r-end", "20", "--points", "8"],
    "integrate_inward.json": ["integrate", *ROT, "--mu", "1", "--k", "-1", "--r-start", "40",
                              "--r-end", "3", "--points", "6", "--g1", "1", "--g2", "-1",
                              "--format", "json"],
    "integrate_lambda.csv": ["integrate", *ROT, "--mu", "0.7", "--k", "2", "--lambda", "0.3",
                             "--r-start", "3", "--r-end", "10", "--points", "5"],
    "verify_static.csv": ["verify", *STATIC, "--mu", "1", "--k", "1"],
    "verify_rotating.json": ["verify", *ROT, "--mu", "2", "--k", "-1", "--format", "json"],
    "verify_extremal.csv": ["verify", *EXTREMAL, "--mu", "1", "--k", "1"],
}


def regenerate() -> None:
    sys.path.insert(0, os.path.join(HERE, "..", "src"))
    from btzdirac.cli import main

    os.makedirs(GOLDEN_DIR, exist_ok=True)
    for name, argv in CASES.items():
        code = main([*argv, "--out", os.path.join(GOLDEN_DIR, name)])
        if code != 0:
            raise SystemExit(f"{name}: exit {code}")


if __name__ == "__main__":
    regenerate()
