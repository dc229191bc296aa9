"""Command-line entry point: ``symmagic <subcommand> ...``.

A ``--config FILE`` of ``key = value`` lines supplies defaults for any long
option (dashes or underscores); flags on the command line win.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import cache as cache_mod
from .dicke import named_state
from .measures import magic_report, spectrum_summary
from .oracle import MAX_VERIFY, verify_equivalence
from .runner import (
    evaluate_state,
    model_ground_state,
    parse_range,
    run_scaling,
    run_sweep,
    write_oracle_table,
    write_spectrum,
)


def read_config(path) -> dict:
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SystemExit(f"{path}:{lineno}: expected key = value, got {line!r}")
        key, value = (t.strip() for t in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _add_model_args(p):
    p.add_argument("--model", choices=["lmg", "pspin"], default="lmg")
    p.add_argument("--p", type=int, default=3, help="interaction order (pspin only)")


def _add_backend_args(p):
    p.add_argument("--backend", choices=["kernel", "cache"], default="kernel",
                   help="factorised kernel (default) or stored representative matrices")
    p.add_argument("--cache-dir", default=None, help="cache directory (default $CACHE_DIR or ./cache)")
    p.add_argument("--build-missing", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symmagic", description=__doc__.splitlines()[0])
    parser.add_argument("--config", default=None)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("cache", help="manage Pauli representation caches")
    csub = c.add_subparsers(dest="action", required=True)
    cb = csub.add_parser("build", help="build the cache file for one N")
    cb.add_argument("--n", type=int, required=True)
    cb.add_argument("--force", action="store_true")
    cb.add_argument("--threads", type=int, default=1)
    cb.add_argument("--cache-dir", default=None)

    s = sub.add_parser("sweep", help="ground-state magic over sizes and fields")
    _add_model_args(s)
    s.add_argument("--n", required=True, help="sizes, 'a:b:step' or comma list")
    s.add_argument("--gamma", required=True, help="fields, 'start:stop:step' or comma list")
    s.add_argument("--out", required=True)
    s.add_argument("--threads", type=int, default=1)
    _add_backend_args(s)

    sc = sub.add_parser("scaling", help="fit m2 ~ N^beta at fixed gamma")
    sc.add_argument("--in", dest="in_csv", required=True)
    sc.add_argument("--gamma", required=True, help="one or more fields, comma separated")
    sc.add_argument("--n", default=None, help="restrict to these sizes")
    sc.add_argument("--out", required=True)

    sp = sub.add_parser("spectrum", help="sorted Pauli spectrum of a ground state or named state")
    _add_model_args(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--gamma", type=float, default=None)
    sp.add_argument("--state", default=None, help="named state instead of a model ground state")
    sp.add_argument("--out", required=True)
    _add_backend_args(sp)

    st = sub.add_parser("state", help="print the magic report of a named state")
    st.add_argument("--kind", required=True, help="ghz | w | dicke:n | t | up")
    st.add_argument("--n", type=int, required=True)
    st.add_argument("--n-a", type=int, default=None, help="bipartition size (default N//2)")
    st.add_argument("--tol", type=float, default=1e-9)

    o = sub.add_parser("oracle", help="cross-check against brute-force enumeration")
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--trials", type=int, default=20)
    o.add_argument("--seed", type=int, default=42)
    o.add_argument("--tol", type=float, default=1e-10)
    o.add_argument("--out", default=None, help="CSV path (default stdout)")
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        conf = read_config(args.config)
        explicit = {a.split("=", 1)[0].lstrip("-").replace("-", "_")
                    for a in (argv if argv is not None else sys.argv[1:]) if a.startswith("--")}
        for key, value in conf.items():
            if key in explicit or not hasattr(args, key):
                continue
            current = getattr(args, key)
            if isinstance(current, bool):
                value = value.lower() in ("1", "true", "yes", "on")
            elif isinstance(current, int):
                value = int(value)
            elif isinstance(current, float):
                value = float(value)
            setattr(args, key, value)
    return args


def cmd_cache_build(args) -> int:
    directory = Path(args.cache_dir) if args.cache_dir else cache_mod.default_cache_dir()
    directory.mkdir(parents=True, exist_ok=True)
    path = cache_mod.cache_path(directory, args.n)
    if path.exists() and not args.force:
        try:
            cache_mod.cache_read(args.n, path)
        except cache_mod.CacheError as exc:
            print(f"existing cache is corrupt ({exc}); rebuilding", file=sys.stderr)
        else:
            print(f"cache up to date: {path}")
            return 0
    cache = cache_mod.build_cache(args.n, n_jobs=args.threads)
    cache_mod.cache_write(cache, path)
    print(f"wrote {path} ({len(cache)} records, {cache.offsets[-1]} nonzeros)")
    return 0


def cmd_sweep(args) -> int:
    sizes = parse_range(args.n, int)
    gammas = parse_range(args.gamma)
    n = run_sweep(args.model, args.p, sizes, gammas, args.out, threads=args.threads,
                  backend=args.backend, cache_dir=args.cache_dir,
                  build_missing=args.build_missing)
    print(f"{n} new rows -> {args.out}")
    return 0


def cmd_scaling(args) -> int:
    gammas = [float(g) for g in args.gamma.split(",")]
    sizes = set(parse_range(args.n, int)) if args.n else None
    for model, p, fit in run_scaling(args.in_csv, gammas, args.out, sizes=sizes):
        print(f"{model} p={p} gamma={fit.gamma:g}: beta={fit.beta:.4f} r2={fit.r_squared:.5f}")
    return 0


def cmd_spectrum(args) -> int:
    if args.state:
        state = named_state(args.n, args.state)
    else:
        if args.gamma is None:
            raise SystemExit("spectrum: give --gamma for a model ground state, or --state")
        state = model_ground_state(args.model, args.p, args.n, args.gamma).state
    summary = evaluate_state(state, args.backend, args.cache_dir, args.build_missing)
    spec = write_spectrum(summary, args.out)
    print(f"{len(spec)} values -> {args.out}")
    return 0


def cmd_state(args) -> int:
    state = named_state(args.n, args.kind)
    rep = magic_report(spectrum_summary(state), n_a=args.n_a, tol=args.tol)
    for key, value in vars(rep).items():
        print(f"{key} = {value}")
    return 0


def cmd_oracle(args) -> int:
    if args.n > MAX_VERIFY:
        print(f"oracle: size guard, N={args.n} exceeds the brute-force limit N <= {MAX_VERIFY}",
              file=sys.stderr)
        return 2
    results = verify_equivalence(args.n, args.trials, args.seed, args.tol)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            ok = write_oracle_table(results, args.tol, fh)
    else:
        ok = write_oracle_table(results, args.tol, sys.stdout)
    n_pass = sum(r.passed(args.tol) for r in results)
    print(f"oracle N={args.n}: {n_pass}/{len(results)} passed", file=sys.stderr)
    return 0 if ok else 1


COMMANDS = {
    "sweep": cmd_sweep,
    "scaling": cmd_scaling,
    "spectrum": cmd_spectrum,
    "state": cmd_state,
    "oracle": cmd_oracle,
}


def main(argv=None) -> int:
    args = parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "cache":
        return cmd_cache_build(args)
    return COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
