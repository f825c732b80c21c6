"""Reconstruction-time benchmark: one-shot IDFT versus iterative CS solvers."""
from __future__ import annotations

import logging
import statistics
import time
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from . import cs, fileio, scenes
from .acquisition import DetectorModel, MeasurementRecord, acquire_scanline
from .config import RunConfig
from .illumination import Phase, plan_frequencies
from .reconstruction import reconstruct_from_records

log = logging.getLogger(__name__)

METHODS = ("idft", "twist", "gpsr")


def prepare_inputs(cfg: RunConfig, workdir: Path) -> tuple[Path, Path]:
    """Write per-run records and CS measurements to disk.

    Warm-up runs get negative run numbers. Run ``r`` draws its scene, noise
    and sensing matrix from seed ``cfg.seed + cfg.warmup + r``.
    """
    workdir.mkdir(parents=True, exist_ok=True)
    plan = plan_frequencies(cfg.m, cfg.n)
    rec_rows, y_rows = [], []
    for run in range(-cfg.warmup, cfg.runs):
        s = cfg.seed + cfg.warmup + run
        scene = scenes.smooth_scene(s, cfg.n)
        records = acquire_scanline(scene, plan, DetectorModel(cfg.gain_k, cfg.noise_sigma, s),
                                   offset_a=cfg.offset_a, contrast_b=cfg.contrast_b,
                                   pulse_period=1 / cfg.f_rep)
        rec_rows += [(run, r.seq, r.t, r.k, int(r.phase), r.value) for r in records]
        phi = cs.SensingMatrix(cfg.m, cfg.n, s, cfg.matrix_kind)
        y = cs.sense(phi, scene, cfg.noise_sigma, s)
        y_rows += [(run, i, v) for i, v in enumerate(y.tolist())]
    rec_path = workdir / "bench_records.csv"
    y_path = workdir / "bench_measurements.csv"
    fileio.write_csv(rec_path, ["run"] + fileio.RECORD_HEADER, rec_rows)
    fileio.write_csv(y_path, ["run", "i", "value"], y_rows)
    return rec_path, y_path


def load_inputs(rec_path: Path, y_path: Path):
    records: dict[int, list] = {}
    for run, seq, t, k, ph, v in fileio.read_csv(
            rec_path, ["run"] + fileio.RECORD_HEADER, [int, int, float, int, int, float]):
        records.setdefault(run, []).append(MeasurementRecord(k, Phase(ph), v, seq, t))
    ys: dict[int, list] = {}
    for run, i, v in fileio.read_csv(y_path, ["run", "i", "value"], [int, int, float]):
        ys.setdefault(run, []).append(v)
    return records, {r: np.array(v) for r, v in ys.items()}


def run_bench(cfg: RunConfig, workdir: Path) -> tuple[list[tuple[str, int, float]], dict]:
    """Time every method on every run, single-threaded.

    The IDFT path times ``reconstruct_from_records`` end to end. The CS
    paths time only the solver's iterative loop; matrix generation and the
    power-iteration norm estimate happen before the clock starts.
    """
    records, ys = load_inputs(*prepare_inputs(cfg, workdir))
    solver_cfg = cs.SolverConfig(lam=cfg.lam, tol=cfg.tol, max_iter=cfg.max_iter,
                                 basis=cfg.basis, relative_lam=cfg.relative_lam)
    methods = ["idft"] + [s for s in ("twist", "gpsr") if s in cfg.solvers]
    rows = []
    iterations: dict[str, list[int]] = {m: [] for m in methods}
    with threadpool_limits(limits=1):
        for run in range(-cfg.warmup, cfg.runs):
            s = cfg.seed + cfg.warmup + run
            phi = cs.SensingMatrix(cfg.m, cfg.n, s, cfg.matrix_kind)
            for method in methods:
                if method == "idft":
                    t0 = time.perf_counter()
                    reconstruct_from_records(records[run], cfg.n, cfg.gain_k, cfg.contrast_b)
                    seconds = time.perf_counter() - t0
                    its = 1
                else:
                    solve = cs.solve_twist if method == "twist" else cs.solve_gpsr
                    report = solve(ys[run], phi, solver_cfg)
                    seconds, its = report.wall_time, report.iterations
                if run >= 0:
                    rows.append((method, run, seconds))
                    iterations[method].append(its)
    summary = {
        "median_seconds": {m: statistics.median(r[2] for r in rows if r[0] == m) for m in methods},
        "median_iterations": {m: statistics.median(v) for m, v in iterations.items()},
        "cost_model": {m: cs.estimate_iteration_cost(m, cfg.m, cfg.n) for m in methods},
        "warmup_runs_excluded": cfg.warmup,
    }
    log.info("bench medians: %s", summary["median_seconds"])
    return rows, summary
