"""``fourierspi`` command line: patterns, acquire, reconstruct, sweep, bench, flow.

Exit codes: 0 success, 1 validation failure, 2 I/O failure,
3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, bench, fileio, flowsim, metrics, scenes
from .acquisition import DetectorModel, acquire_scanline
from .config import FIELDS, ConfigError, RunConfig, load_config
from .illumination import PatternError, full_band_plan, plan_frequencies
from .reconstruction import RecordError, reconstruct_from_records
from .spectral import Scene1D, SpectrumError

log = logging.getLogger("fourierspi")

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_INTERNAL = 0, 1, 2, 3


def write_manifest(out: Path, command: str, cfg: RunConfig, **extra) -> Path:
    manifest = {
        "command": command,
        "version": __version__,
        "created": datetime.now(timezone.utc).isoformat(),
        "config": cfg.as_dict(),
        **extra,
    }
    path = out / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=_json_default) + "\n")
    return path


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    return str(obj)


def _detector(cfg: RunConfig) -> DetectorModel:
    return DetectorModel(cfg.gain_k, cfg.noise_sigma, cfg.seed)


# commands -----------------------------------------------------------------

def cmd_patterns(cfg: RunConfig, out: Path) -> dict:
    plan = plan_frequencies(cfg.m, cfg.n)
    patterns = plan.patterns(cfg.offset_a, cfg.contrast_b)
    files = []
    for p in patterns:
        name = f"pattern_k{p.k:04d}_p{int(p.phase)}.csv"
        fileio.write_pattern_csv(out / name, p)
        files.append(name)
    fileio.write_pattern_manifest(out / "patterns_manifest.txt", patterns)
    return {"pattern_files": len(files), "indices": list(plan.indices)}


def cmd_acquire(cfg: RunConfig, out: Path, scene_path: Path) -> dict:
    # a file scene is a light intensity: even length, non-negative
    scene = Scene1D(fileio.read_scene(scene_path)).pixels
    if scene.size != cfg.n:
        log.info("scene has %d pixels; overriding n=%d", scene.size, cfg.n)
        cfg.n = scene.size
        cfg.validate()
    plan = plan_frequencies(cfg.m, cfg.n)
    records = acquire_scanline(scene, plan, _detector(cfg), offset_a=cfg.offset_a,
                               contrast_b=cfg.contrast_b, pulse_period=1 / cfg.f_rep)
    fileio.write_records_csv(out / "records.csv", records)
    return {"records": len(records), "scene": str(scene_path)}


def cmd_reconstruct(cfg: RunConfig, out: Path, records_path: Path) -> dict:
    records = fileio.read_records_csv(records_path)
    t0 = time.perf_counter()
    result = reconstruct_from_records(records, cfg.n, cfg.gain_k, cfg.contrast_b)
    wall = time.perf_counter() - t0
    fileio.write_scene_csv(out / "scene.csv", result.scene.pixels)
    fileio.write_spectrum_csv(out / "spectrum.csv", result.spectrum)
    return {"wall_time_s": wall, "residual_imag": result.residual_imag,
            "scale_k": result.spectrum.scale_k, "records": len(records)}


def sweep_m(ratio, n: int) -> int:
    """Measurement count for a ratio: rounded down to a multiple of 4, capped at full band."""
    full = 4 * (n // 2 + 1)
    if ratio == "full":
        return full
    return min(int(math.floor(ratio * n + 1e-9)) // 4 * 4, full)


def _reconstruct_image(image: np.ndarray, m: int, cfg: RunConfig) -> np.ndarray:
    n = image.shape[1]
    plan = plan_frequencies(m, n) if m < 4 * (n // 2 + 1) else full_band_plan(n)
    det = _detector(cfg)
    rng = det.rng()
    rows = []
    for row in image:
        recs = acquire_scanline(row, plan, det, offset_a=cfg.offset_a, contrast_b=cfg.contrast_b,
                                pulse_period=1 / cfg.f_rep, rng=rng)
        rows.append(reconstruct_from_records(recs, n, cfg.gain_k, cfg.contrast_b).scene.pixels)
    return np.stack(rows)


def _sweep_row(args):
    ratio, image, cfg = args
    m = sweep_m(ratio, image.shape[1])
    return m, metrics.psnr(image, _reconstruct_image(image, m, cfg))


def _load_sweep_image(path: Path | None) -> np.ndarray:
    if path is None:
        return scenes.chart_image()
    if str(path).lower().endswith(".csv") and Path(path).read_text().startswith("value"):
        return fileio.read_scene_csv(path)[None, :]
    return fileio.read_image(path)


def _map(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def cmd_sweep(cfg: RunConfig, out: Path, scene_path: Path | None) -> dict:
    image = _load_sweep_image(scene_path)
    if image.shape[1] % 2 or image.shape[1] < 4:
        raise ConfigError(f"scan lines must have an even length >= 4, got {image.shape[1]}")
    ordered = sorted(cfg.ratios, key=lambda r: math.inf if r == "full" else r)
    results = _map(_sweep_row, [(r, image, cfg) for r in ordered], cfg.jobs)
    # 'full' is listed under the ratio its measurement count implies
    rows = [(float(metrics.compression_ratio(m, image.shape[1])) if r == "full" else r, m, p)
            for r, (m, p) in zip(ordered, results)]
    fileio.write_csv(out / "sweep.csv", ["ratio", "m", "psnr_db"], rows)
    return {"image_shape": list(image.shape), "rows": len(rows),
            "scene": str(scene_path) if scene_path else "stored 21x21 chart"}


def cmd_bench(cfg: RunConfig, out: Path) -> dict:
    rows, summary = bench.run_bench(cfg, out / "bench_inputs")
    fileio.write_csv(out / "bench.csv", ["method", "run", "seconds"], rows)
    return summary


def _flow_one(args):
    flow, m, cfg = args
    # a static flow has no traversal time; give it one frame per image row
    n_frames = flow.rows if flow.flow_speed == 0 else None
    return m, flowsim.run_flow_experiment(
        flow, m, _detector(cfg), cfg.f_rep, n_frames=n_frames, offset_a=cfg.offset_a,
        contrast_b=cfg.contrast_b, freeze_within_frame=cfg.freeze_within_frame)


def cmd_flow(cfg: RunConfig, out: Path, image_path: Path | None) -> dict:
    image = fileio.read_image(image_path) if image_path else flowsim.cell_image(cfg.seed, n=cfg.n)
    flow = flowsim.FlowScene(image, cfg.pixel_pitch, cfg.flow_speed)
    ms = sorted(set(cfg.m_values) | {cfg.m})
    results = dict(_map(_flow_one, [(flow, m, cfg) for m in ms], cfg.jobs))
    primary = results[cfg.m]
    fileio.write_pgm(out / "flow_reconstruction.pgm", np.clip(primary.image, 0, None),
                     lo=0.0, hi=float(image.max()))
    fileio.write_pgm(out / "flow_original.pgm", image, lo=0.0, hi=float(image.max()))
    fileio.write_csv(out / "frames.csv", ["frame", "m", "psnr_db"],
                     ((i, cfg.m, p) for i, p in enumerate(primary.psnr_vs_truth)))
    sweep_rows = [(m, float(np.mean(r.psnr_vs_truth)), float(np.std(r.psnr_vs_truth)))
                  for m, r in sorted(results.items())]
    fileio.write_csv(out / "flow_sweep.csv", ["m", "mean_psnr", "std_psnr"], sweep_rows)
    return {
        "frames": len(primary.frames),
        "frame_rate_hz": primary.frame_rate,
        "records_consumed": primary.records_consumed,
        "throughput_cells_per_s": primary.throughput,
        "mean_psnr_vs_lowpass": {m: float(np.mean(r.psnr_vs_lowpass)) for m, r in results.items()},
    }


# argument handling ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fourierspi", description="Fourier-sampling single-pixel imaging simulator.")
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key = value config file")
    common.add_argument("-o", "--out", help="output directory")
    common.add_argument("-v", "--verbose", action="store_true")
    for name, f in FIELDS.items():
        if name == "out":
            continue
        common.add_argument(f"--{name.replace('_', '-')}", dest=name, default=None,
                            metavar=type(f.default).__name__.upper())
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("patterns", parents=[common], help="write illumination patterns")
    p = sub.add_parser("acquire", parents=[common], help="simulate detector records for a scene")
    p.add_argument("scene", type=Path)
    p = sub.add_parser("reconstruct", parents=[common], help="reconstruct a scanline from records")
    p.add_argument("records", type=Path)
    p = sub.add_parser("sweep", parents=[common], help="PSNR versus compression ratio")
    p.add_argument("scene", type=Path, nargs="?")
    sub.add_parser("bench", parents=[common], help="time IDFT against TwIST and GPSR")
    p = sub.add_parser("flow", parents=[common], help="flow-imaging simulation and M sweep")
    p.add_argument("image", type=Path, nargs="?")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    overrides = {k: getattr(args, k) for k in FIELDS if getattr(args, k, None) is not None}
    try:
        cfg = load_config(args.config, overrides)
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        if args.command == "patterns":
            info = cmd_patterns(cfg, out)
        elif args.command == "acquire":
            info = cmd_acquire(cfg, out, args.scene)
        elif args.command == "reconstruct":
            info = cmd_reconstruct(cfg, out, args.records)
        elif args.command == "sweep":
            info = cmd_sweep(cfg, out, args.scene)
        elif args.command == "bench":
            info = cmd_bench(cfg, out)
        else:
            info = cmd_flow(cfg, out, args.image)
        write_manifest(out, args.command, cfg, result=info)
    except (SpectrumError, AssertionError) as exc:
        # user input cannot reach these; they signal a broken invariant
        print(f"fourierspi {args.command}: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ConfigError, PatternError, RecordError, fileio.FormatError, ValueError) as exc:
        print(f"fourierspi {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"fourierspi {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
