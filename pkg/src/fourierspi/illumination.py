"""Four-step phase-shifting sinusoidal illumination patterns.

Pixel ``n`` of the scan line sits at coordinate ``x = n`` (unit pitch), so a
pattern of frequency index ``k`` completes ``k`` cycles across ``N`` pixels.
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


class Phase(enum.IntEnum):
    """Pattern phase, stored as a number of quarter turns."""

    P0 = 0
    P90 = 1
    P180 = 2
    P270 = 3

    @property
    def radians(self) -> float:
        return self.value * math.pi / 2


FOUR_STEP = (Phase.P0, Phase.P90, Phase.P180, Phase.P270)


class PatternError(ValueError):
    pass


def _check_index(k: int, n: int):
    if n < 4 or n % 2:
        raise PatternError(f"scan length must be even and >= 4, got {n}")
    if not 0 <= k <= n // 2:
        raise PatternError(f"frequency index {k} outside [0, {n // 2}]")


def sample_pattern(k: int, phase: Phase, n: int, a: float, b: float) -> np.ndarray:
    """``a + b*cos(2*pi*k*x/n + phase)`` on ``x = 0..n-1``."""
    x = np.arange(n)
    return a + b * np.cos(2 * np.pi * k * x / n + Phase(phase).radians)


@dataclass(frozen=True)
class SinusoidPattern:
    k: int
    phase: Phase
    n: int
    offset_a: float = 1.0
    contrast_b: float = 1.0

    @property
    def samples(self) -> np.ndarray:
        return sample_pattern(self.k, self.phase, self.n, self.offset_a, self.contrast_b)

    def manifest_line(self) -> str:
        return f"{self.k} {int(self.phase)} {self.offset_a!r} {self.contrast_b!r} {self.n}"

    @classmethod
    def from_manifest_line(cls, line: str) -> "SinusoidPattern":
        k, phase, a, b, n = line.split()
        return cls(int(k), Phase(int(phase)), int(n), float(a), float(b))


def make_pattern(k: int, phase: Phase, n: int, a: float = 1.0, b: float = 1.0,
                 physical: bool = False) -> SinusoidPattern:
    """Build one sampled pattern.

    Raises:
        PatternError: for ``k`` outside ``[0, n/2]`` or, with ``physical``
            set, when ``a < |b|`` would imply negative light.
    """
    _check_index(k, n)
    if physical and (a < abs(b) or a < 0):
        raise PatternError(f"physical pattern needs a >= |b|, got a={a}, b={b}")
    return SinusoidPattern(int(k), Phase(phase), int(n), float(a), float(b))


def four_step_set(k: int, n: int, a: float = 1.0, b: float = 1.0,
                  physical: bool = False) -> list[SinusoidPattern]:
    return [make_pattern(k, p, n, a, b, physical) for p in FOUR_STEP]


@dataclass(frozen=True)
class ModulationConfig:
    """Intensity-modulator depth; maps to pattern offset and contrast.

    ``P_out = P_in/2 * (1 + alpha*cos(...))`` gives ``a = P_in/2`` and
    ``b = alpha*P_in/2``.
    """

    alpha: float = 1.0
    p_in: float = 1.0

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise PatternError(f"alpha must lie in (0, 1], got {self.alpha}")

    @property
    def offset_a(self) -> float:
        return self.p_in / 2

    @property
    def contrast_b(self) -> float:
        return self.alpha * self.p_in / 2


@dataclass(frozen=True)
class FrequencyPlan:
    """Ordered frequency indices to acquire, four phases each."""

    indices: tuple[int, ...]
    n: int

    def __post_init__(self):
        idx = tuple(int(k) for k in self.indices)
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise PatternError("plan indices must be strictly increasing")
        for k in idx:
            _check_index(k, self.n)
        object.__setattr__(self, "indices", idx)

    @property
    def m(self) -> int:
        return 4 * len(self.indices)

    @property
    def compression_ratio(self) -> Fraction:
        return Fraction(self.m, self.n)

    def __len__(self):
        return len(self.indices)

    def patterns(self, a: float = 1.0, b: float = 1.0) -> list[SinusoidPattern]:
        return [p for k in self.indices for p in four_step_set(k, self.n, a, b)]

    def pattern_matrix(self, a: float = 1.0, b: float = 1.0) -> np.ndarray:
        """All patterns in acquisition order as a read-only ``(m, n)`` array."""
        return _pattern_matrix(self, float(a), float(b))


@functools.lru_cache(maxsize=64)
def _pattern_matrix(plan: FrequencyPlan, a: float, b: float) -> np.ndarray:
    if not plan.indices:
        mat = np.zeros((0, plan.n))
    else:
        mat = np.stack([p.samples for p in plan.patterns(a, b)])
    mat.setflags(write=False)
    return mat


def plan_frequencies(m: int, n: int) -> FrequencyPlan:
    """Lowest ``m/4`` frequency indices for a budget of ``m`` measurements.

    Never rounds: ``m`` must be a multiple of four.
    """
    if m < 0 or m % 4:
        raise PatternError(
            f"measurement count M={m} must be a non-negative multiple of 4 "
            "(four phases per frequency)"
        )
    if m // 4 > n // 2 + 1:
        raise PatternError(f"M={m} exceeds the full band 4*(N/2+1)={4 * (n // 2 + 1)}")
    return FrequencyPlan(tuple(range(m // 4)), n)


def full_band_plan(n: int) -> FrequencyPlan:
    return plan_frequencies(4 * (n // 2 + 1), n)
