"""Image-quality and system-parameter formulas."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


def _pair(original, estimate):
    a = np.asarray(original, dtype=float)
    b = np.asarray(estimate, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def mse(original, estimate) -> float:
    a, b = _pair(original, estimate)
    return float(np.mean((a - b) ** 2))


def psnr(original, estimate, max_i: float | None = None) -> float:
    """Peak signal-to-noise ratio in dB; ``inf`` for a perfect match.

    ``max_i`` defaults to the largest pixel of ``original``.
    """
    a, b = _pair(original, estimate)
    if max_i is None:
        max_i = float(a.max())
    if not max_i > 0:
        raise ValueError(f"max_i must be positive, got {max_i}")
    err = mse(a, b)
    if err == 0:
        return math.inf
    return 10 * math.log10(max_i ** 2 / err)


def compression_ratio(m: int, n: int) -> Fraction:
    """``M/N`` as an exact rational (``float()`` it for tables)."""
    if n <= 0:
        raise ValueError(f"pixel count must be positive, got {n}")
    if not 0 <= m <= 4 * (n // 2 + 1):
        raise ValueError(f"measurement count must be in [0, 4*(n/2+1)], got {m}")
    return Fraction(m, n)


def frame_rate(f_rep: float, m: int) -> float:
    if m < 1:
        raise ValueError(f"measurements per frame must be >= 1, got {m}")
    return f_rep / m


@dataclass(frozen=True)
class SystemParams:
    """Time-stretch front end. Units: nm, ps/nm, samples/s, Hz."""

    spectral_width_nm: float = 15.0
    dispersion_ps_per_nm: float = 1368.0
    adc_rate: float = 40e9
    f_rep: float = 50e6

    def __post_init__(self):
        if self.spectral_width_nm < 0 or self.adc_rate <= 0 or self.f_rep <= 0:
            raise ValueError("system parameters must be positive")


@dataclass(frozen=True)
class PixelCount:
    raw: float
    nominal: int


def pixel_count(params: SystemParams) -> PixelCount:
    """Samples per stretched pulse: ``width * |D| * f_s``.

    ``nominal`` floors ``raw`` to a whole hundred, the granularity at which
    the experiment size is quoted (820.8 -> 800).
    """
    stretch_s = params.spectral_width_nm * abs(params.dispersion_ps_per_nm) * 1e-12
    raw = stretch_s * params.adc_rate
    return PixelCount(raw, int(math.floor(raw / 100 + 1e-9)) * 100)


def max_velocity(delta_l: float, pulse_period: float, m: int) -> float:
    """Fastest object that moves at most ``delta_l`` during one frame."""
    if delta_l <= 0 or pulse_period <= 0 or m <= 0:
        raise ValueError("delta_l, pulse_period and m must be positive")
    return delta_l / (m * pulse_period)


def throughput(flow_speed: float, cell_pitch: float) -> float:
    """Objects per second passing the scan line."""
    return flow_speed / cell_pitch
