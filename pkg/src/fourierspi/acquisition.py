"""Bucket-detector forward model.

Each pulse carries one pattern; the detector reads
``gain_k * <scene, pattern> + noise``. Noise is zero-mean Gaussian drawn from
numpy's PCG64 generator (``numpy.random.default_rng(seed)``), whose stream is
fixed across platforms for a given seed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .illumination import FOUR_STEP, FrequencyPlan, Phase, SinusoidPattern
from .spectral import Scene1D

DEFAULT_F_REP = 50e6
DEFAULT_PULSE_PERIOD = 1 / DEFAULT_F_REP


class AcquisitionError(ValueError):
    pass


@dataclass(frozen=True)
class MeasurementRecord:
    k: int
    phase: Phase
    value: float
    seq: int
    t: float


@dataclass(frozen=True)
class DetectorModel:
    gain_k: float = 1.0
    noise_sigma: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        if not self.gain_k > 0:
            raise AcquisitionError(f"gain_k must be positive, got {self.gain_k}")
        if not self.noise_sigma >= 0:
            raise AcquisitionError(f"noise_sigma must be >= 0, got {self.noise_sigma}")

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.rng_seed)


@dataclass
class AcquisitionRun:
    plan: FrequencyPlan
    detector: DetectorModel
    pulse_period: float
    records: list[MeasurementRecord] = field(default_factory=list)

    def frames(self) -> list[list[MeasurementRecord]]:
        m = self.plan.m
        return [self.records[i:i + m] for i in range(0, len(self.records), m)]


def _pixels(scene) -> np.ndarray:
    return scene.pixels if isinstance(scene, Scene1D) else np.asarray(scene, float)


def _noise(detector: DetectorModel, rng: np.random.Generator | None, size: int):
    if detector.noise_sigma == 0:
        return np.zeros(size)
    if rng is None:
        rng = detector.rng()
    return rng.normal(0.0, detector.noise_sigma, size)


def measure(scene, pattern: SinusoidPattern, detector: DetectorModel,
            rng: np.random.Generator | None = None) -> float:
    """One detector reading: ``gain_k * sum(I * C) + noise``."""
    x = _pixels(scene)
    if x.size != pattern.n:
        raise AcquisitionError(f"scene length {x.size} != pattern length {pattern.n}")
    value = detector.gain_k * float(np.dot(x, pattern.samples))
    return value + float(_noise(detector, rng, 1)[0])


def _tags(plan: FrequencyPlan):
    return [(k, p) for k in plan.indices for p in FOUR_STEP]


def _records(plan, values, seq0, pulse_period):
    return [
        MeasurementRecord(k, p, float(v), seq0 + i, (seq0 + i) * pulse_period)
        for i, ((k, p), v) in enumerate(zip(_tags(plan), values))
    ]


def acquire_scanline(scene, plan: FrequencyPlan, detector: DetectorModel,
                     seq0: int = 0, *, offset_a: float = 1.0,
                     contrast_b: float = 1.0,
                     pulse_period: float = DEFAULT_PULSE_PERIOD,
                     rng: np.random.Generator | None = None) -> list[MeasurementRecord]:
    """Measure a static scanline with every pattern of ``plan``.

    Records come out in (k ascending, phase 0..3) order, one per pulse.
    """
    x = _pixels(scene)
    if x.size != plan.n:
        raise AcquisitionError(f"scene length {x.size} != plan length {plan.n}")
    values = detector.gain_k * (plan.pattern_matrix(offset_a, contrast_b) @ x)
    values = values + _noise(detector, rng, plan.m)
    return _records(plan, values, seq0, pulse_period)


SceneSource = Callable[[float], "Scene1D | np.ndarray"]


def acquire_stream(scene_source: SceneSource, plan: FrequencyPlan,
                   detector: DetectorModel, n_frames: int, *, seq0: int = 0,
                   offset_a: float = 1.0, contrast_b: float = 1.0,
                   pulse_period: float = DEFAULT_PULSE_PERIOD,
                   freeze_within_frame: bool = False) -> AcquisitionRun:
    """Acquire ``n_frames`` consecutive scanlines from a time-varying scene.

    Every record samples ``scene_source`` at its own timestamp, so a scene
    that moves during a frame blurs that frame. ``freeze_within_frame``
    samples once per frame instead (debugging aid).
    Out-of-range times raise whatever the source raises.
    """
    if n_frames < 1:
        raise AcquisitionError(f"n_frames must be >= 1, got {n_frames}")
    patterns = detector.gain_k * plan.pattern_matrix(offset_a, contrast_b)
    m = plan.m
    rng = detector.rng()
    run = AcquisitionRun(plan, detector, pulse_period)
    for f in range(n_frames):
        start = seq0 + f * m
        if freeze_within_frame:
            x = _pixels(scene_source(start * pulse_period))
            values = patterns @ x
        else:
            values = np.array([
                patterns[i] @ _pixels(scene_source((start + i) * pulse_period))
                for i in range(m)
            ])
        values = values + _noise(detector, rng, m)
        run.records.extend(_records(plan, values, start, pulse_period))
    return run
