"""Regenerate the frozen regression tables in tests/data.

The brute-force oracle must pass first; nothing is written otherwise.
"""
import sys
from pathlib import Path

from symmagic.oracle import verify_equivalence
from symmagic.runner import run_sweep

DATA = Path(__file__).resolve().parents[1] / "tests" / "data"
TABLES = {
    "regression_lmg.csv": ("lmg", 2, [8, 20, 50], [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0]),
    "regression_pspin3.csv": ("pspin", 3, [8, 20, 50], [0.3, 0.6, 0.65, 0.7, 1.0, 1.5]),
}


def main():
    for N in range(2, 9):
        bad = [r for r in verify_equivalence(N, 20, seed=N) if not r.passed(1e-10)]
        if bad:
            print(f"oracle failed at N={N}: {bad[0]}", file=sys.stderr)
            return 1
    DATA.mkdir(parents=True, exist_ok=True)
    for name, (model, p, sizes, gammas) in TABLES.items():
        path = DATA / name
        path.unlink(missing_ok=True)
        run_sweep(model, p, sizes, gammas, path)
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
