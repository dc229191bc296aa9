"""Ground-state magic of the LMG model over sizes and fields, plus power-law fits.

    python scripts/lmg_sweep.py --out results/lmg.csv --threads 4
"""
import argparse
from pathlib import Path

from symmagic.runner import parse_range, run_scaling, run_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", default="10:100:5")
    ap.add_argument("--gamma", default="0:2:0.05")
    ap.add_argument("--fit-n", default="40:160:20", help="sizes for the scaling fits")
    ap.add_argument("--fit-gamma", default="0.25,0.5,1.0,2.0")
    ap.add_argument("--out", default="results/lmg.csv")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    n = run_sweep("lmg", 2, parse_range(args.n, int), parse_range(args.gamma), out, args.threads)
    print(f"sweep: {n} new rows -> {out}")

    fit_gammas = parse_range(args.fit_gamma)
    fit_csv = out.with_name(out.stem + "_fitpoints.csv")
    run_sweep("lmg", 2, parse_range(args.fit_n, int), fit_gammas, fit_csv, args.threads)
    fits = run_scaling(fit_csv, fit_gammas, out.with_name(out.stem + "_scaling.csv"))
    for _, _, f in fits:
        print(f"gamma={f.gamma:g}  beta={f.beta:.4f}  r2={f.r_squared:.5f}")


if __name__ == "__main__":
    main()
