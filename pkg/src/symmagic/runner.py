"""Sweeps, scaling fits and spectrum dumps behind the command-line tool."""
from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from functools import lru_cache
from pathlib import Path

import numpy as np

from .cache import build_cache, cache_path, cache_read, cache_write, default_cache_dir
from .dicke import DickeState, entanglement_entropy, reduced_density_matrix
from .measures import magic_report, sorted_spectrum, spectrum_summary
from .models import ModelSpec, build_hamiltonian, ground_state, order_parameter

log = logging.getLogger(__name__)


def fmt(x) -> str:
    """17 significant digits: doubles survive the CSV round trip exactly."""
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def parse_range(text: str, kind=float) -> list:
    """``"a:b:step"`` (inclusive of b) or ``"a,b,c"``."""
    text = text.strip()
    if ":" in text:
        start, stop, step = (float(t) for t in text.split(":"))
        if step <= 0:
            raise ValueError(f"step must be positive in {text!r}")
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        vals = np.round(start + step * np.arange(n), 12)
    else:
        vals = [float(t) for t in text.split(",") if t.strip()]
    if kind is int:
        return [int(round(v)) for v in vals]
    return [float(v) for v in vals]


@dataclass(frozen=True)
class SweepRow:
    model: str
    p: int
    N: int
    gamma: float
    energy: float
    m2: float
    m2_density: float
    nullity: int
    is_pow2: bool
    m_lin: float
    avg_flatness: float
    flatness_rescaled: float
    entropy_half: float
    order_param: float

    @classmethod
    def header(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def as_csv(self) -> list[str]:
        return [fmt(v) for v in asdict(self).values()]


@lru_cache(maxsize=2)
def _load_cache(n_qubits: int, cache_dir: str, build_missing: bool):
    path = cache_path(cache_dir, n_qubits)
    if not path.exists():
        if not build_missing:
            raise FileNotFoundError(
                f"missing cache {path}; run `cache build --n {n_qubits}` or pass --build-missing"
            )
        log.info("building cache for N=%d", n_qubits)
        cache_write(build_cache(n_qubits), path)
    return cache_read(n_qubits, path)


def evaluate_state(state: DickeState, backend: str = "kernel", cache_dir=None,
                   build_missing: bool = False):
    cache = None
    if backend == "cache":
        cache = _load_cache(state.n_qubits, str(cache_dir or default_cache_dir()), build_missing)
    elif backend != "kernel":
        raise ValueError(f"unknown backend {backend!r}")
    return spectrum_summary(state, cache)


def model_ground_state(model: str, p: int, n_qubits: int, gamma: float):
    spec = ModelSpec(model, gamma, n_qubits, p)
    return ground_state(build_hamiltonian(spec), n_qubits)


def sweep_point(model: str, p: int, n_qubits: int, gamma: float, backend: str = "kernel",
                cache_dir=None, build_missing: bool = False) -> SweepRow:
    gs = model_ground_state(model, p, n_qubits, gamma)
    summary = evaluate_state(gs.state, backend, cache_dir, build_missing)
    rep = magic_report(summary)
    s_half = (
        entanglement_entropy(reduced_density_matrix(gs.state, n_qubits // 2))
        if n_qubits >= 2 else 0.0
    )
    return SweepRow(
        model=model, p=p if model == "pspin" else 2, N=n_qubits, gamma=float(gamma),
        energy=gs.energy, m2=rep.m2, m2_density=rep.m2_density, nullity=rep.nullity,
        is_pow2=rep.nullity_count_is_pow2, m_lin=rep.m_lin, avg_flatness=rep.avg_flatness,
        flatness_rescaled=rep.flatness_rescaled, entropy_half=s_half,
        order_param=order_parameter(gs.state),
    )


def _row_key(model, p, N, gamma) -> tuple:
    return (model, int(p), int(N), fmt(float(gamma)))


def _point_task(args):
    return sweep_point(*args)


def run_sweep(model: str, p: int, sizes, gammas, out_csv, threads: int = 1,
              backend: str = "kernel", cache_dir=None, build_missing: bool = False) -> int:
    """Append one row per (N, gamma), N outer; rows already in ``out_csv`` are skipped.

    Returns the number of rows written. Workers may finish out of order, the
    ordered ``map`` keeps the file deterministic.
    """
    out_csv = Path(out_csv)
    p = p if model == "pspin" else 2
    done = set()
    fresh = not out_csv.exists() or out_csv.stat().st_size == 0
    if not fresh:
        with out_csv.open(newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != SweepRow.header():
                raise ValueError(f"{out_csv} has unexpected columns {reader.fieldnames}")
            for row in reader:
                done.add(_row_key(row["model"], row["p"], row["N"], row["gamma"]))
    todo = [
        (model, p, N, g, backend, cache_dir, build_missing)
        for N in sizes for g in gammas
        if _row_key(model, p, N, g) not in done
    ]
    if not todo:
        return 0
    with out_csv.open("a", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if fresh:
            writer.writerow(SweepRow.header())
        if threads > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                results = pool.map(_point_task, todo)
                for row in results:
                    writer.writerow(row.as_csv())
                    fh.flush()
        else:
            for task in todo:
                writer.writerow(_point_task(task).as_csv())
                fh.flush()
    return len(todo)


@dataclass(frozen=True)
class ScalingFit:
    gamma: float
    sizes: tuple
    beta: float
    intercept: float
    r_squared: float


def fit_power_law(sizes, values, gamma: float = float("nan")) -> ScalingFit:
    """Least squares of ``ln value`` on ``ln N``."""
    sizes = np.asarray(sizes, dtype=float)
    values = np.asarray(values, dtype=float)
    keep = values > 0
    if keep.sum() < 3:
        raise ValueError(f"need at least 3 sizes with positive values, got {int(keep.sum())}")
    x, y = np.log(sizes[keep]), np.log(values[keep])
    beta, intercept = np.polyfit(x, y, 1)
    resid = y - (beta * x + intercept)
    ss_tot = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - np.sum(resid**2) / ss_tot if ss_tot > 0 else 1.0
    return ScalingFit(float(gamma), tuple(int(n) for n in sizes[keep]), float(beta),
                      float(intercept), float(r2))


def run_scaling(in_csv, gammas, out_csv, column: str = "m2", sizes=None) -> list[tuple]:
    """Fit ``column ~ N^beta`` per (model, p, gamma); writes and returns the fits."""
    with Path(in_csv).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    groups = sorted({(r["model"], int(r["p"])) for r in rows})
    fits = []
    for model, p in groups:
        for g in gammas:
            pts = {
                int(r["N"]): float(r[column]) for r in rows
                if r["model"] == model and int(r["p"]) == p and abs(float(r["gamma"]) - g) < 1e-9
                and (sizes is None or int(r["N"]) in sizes)
            }
            if len(pts) < 3:
                raise ValueError(
                    f"insufficient data: {len(pts)} sizes for model={model} p={p} gamma={g}"
                )
            Ns = sorted(pts)
            fits.append((model, p, fit_power_law(Ns, [pts[n] for n in Ns], g)))
    with Path(out_csv).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["model", "p", "gamma", "sizes", "beta", "intercept", "r_squared"])
        for model, p, f in fits:
            w.writerow([model, p, fmt(f.gamma), ";".join(map(str, f.sizes)),
                        fmt(f.beta), fmt(f.intercept), fmt(f.r_squared)])
    return fits


def write_spectrum(summary, out_csv) -> np.ndarray:
    spec = sorted_spectrum(summary)
    with Path(out_csv).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["rank", "r"])
        for i, r in enumerate(spec, start=1):
            w.writerow([i, fmt(r)])
    return spec


def write_oracle_table(results, tol: float, out) -> bool:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["trial", "N", "m2_sym", "m2_brute", "abs_dm2", "nullity_sym",
                "nullity_brute", "max_spectrum_dev", "groups_ok", "pass"])
    ok = True
    for r in results:
        passed = r.passed(tol)
        ok &= passed
        w.writerow([r.trial, r.n_qubits, fmt(r.m2_sym), fmt(r.m2_brute),
                    fmt(abs(r.m2_sym - r.m2_brute)), r.nullity_sym, r.nullity_brute,
                    fmt(r.max_spectrum_dev), fmt(r.groups_ok), fmt(passed)])
    return ok
