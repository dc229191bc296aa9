"""Sorted Pauli spectra of LMG ground states (one file per field).

    python scripts/dump_spectra.py --n 100 --gamma 0,0.5,1,2 --out-dir results/spectra
"""
import argparse
from pathlib import Path

from symmagic.measures import spectrum_summary
from symmagic.runner import fmt, model_ground_state, parse_range, write_spectrum


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--model", choices=["lmg", "pspin"], default="lmg")
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--gamma", default="0,0.5,1,2")
    ap.add_argument("--out-dir", default="results/spectra")
    args = ap.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for g in parse_range(args.gamma):
        state = model_ground_state(args.model, args.p, args.n, g).state
        path = out_dir / f"{args.model}_N{args.n}_gamma{fmt(g)}.csv"
        spec = write_spectrum(spectrum_summary(state), path)
        print(f"gamma={g:g}: {len(spec)} values, {int((spec > 1 - 1e-9).sum())} ones -> {path}")


if __name__ == "__main__":
    main()
