"""Four-step coefficient extraction and inverse-DFT reconstruction."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, replace
from typing import Iterable

import numpy as np

from .acquisition import MeasurementRecord
from .spectral import (Scene1D, SpectrumError, SpectrumEstimate,
                       hermitian_complete, hermitian_defect, idft)

HERMITIAN_RTOL = 1e-9


class RecordError(ValueError):
    pass


@dataclass(frozen=True)
class CoefficientQuad:
    k: int
    v0: float
    v90: float
    v180: float
    v270: float


@dataclass(frozen=True)
class ReconstructionResult:
    scene: Scene1D
    spectrum: SpectrumEstimate
    residual_imag: float


def extract_coefficient(quad: CoefficientQuad) -> complex:
    """``(V0 - V180) + j(V90 - V270)``.

    For noiseless readings taken with gain ``K`` and contrast ``b`` this is
    ``2*K*b*X(k)``; the ``2Kb`` factor is removed by :func:`calibrate`.
    """
    return complex(quad.v0 - quad.v180, quad.v90 - quad.v270)


def group_quads(records: Iterable[MeasurementRecord]) -> list[CoefficientQuad]:
    """Collect records into one quad per frequency index, sorted by ``k``.

    Raises:
        RecordError: on duplicate ``(k, phase)`` pairs or incomplete quads.
    """
    by_k: dict[int, dict[int, float]] = defaultdict(dict)
    dupes = []
    for r in records:
        slot = by_k[r.k]
        phase = int(r.phase)
        if phase in slot:
            dupes.append((r.k, phase))
        slot[phase] = r.value
    if dupes:
        raise RecordError(f"duplicate (k, phase) records: {dupes}")
    incomplete = sorted(k for k, slot in by_k.items() if len(slot) != 4)
    if incomplete:
        raise RecordError(f"incomplete four-step quads for k={incomplete}")
    return [CoefficientQuad(k, *(by_k[k][p] for p in range(4))) for k in sorted(by_k)]


def assemble(records: Iterable[MeasurementRecord], n: int) -> SpectrumEstimate:
    """Place each extracted coefficient at its bin and mirror it (scale_k = 1)."""
    quads = group_quads(records)
    too_high = [q.k for q in quads if not 0 <= q.k <= n // 2]
    if too_high:
        raise RecordError(f"frequency indices outside [0, {n // 2}]: {too_high}")
    bins = {q.k: extract_coefficient(q) for q in quads}
    return hermitian_complete(SpectrumEstimate.from_bins(n, bins))


def calibrate(spectrum: SpectrumEstimate, detector_gain: float,
              contrast_b: float) -> SpectrumEstimate:
    if not detector_gain > 0:
        raise ValueError(f"detector gain must be positive, got {detector_gain}")
    if contrast_b == 0:
        raise ValueError("contrast_b must be non-zero")
    scale = 2 * detector_gain * contrast_b
    if scale < 0:
        # a negative contrast flips the sign of every coefficient
        return SpectrumEstimate(-spectrum.coefficients, spectrum.measured_mask, -scale)
    return replace(spectrum, scale_k=scale)


def reconstruct(spectrum: SpectrumEstimate) -> ReconstructionResult:
    """Inverse DFT divided by ``scale_k``. Negative pixels are kept.

    Raises:
        SpectrumError: when the spectrum is not conjugate-symmetric, which
            would yield a materially complex image.
    """
    c = spectrum.coefficients
    peak = float(np.max(np.abs(c))) if c.size else 0.0
    defect = hermitian_defect(c)
    if defect > HERMITIAN_RTOL * max(peak, 1e-300):
        raise SpectrumError(f"spectrum is not Hermitian (defect {defect:.3g})")
    raw = idft(c)
    pixels = raw.real / spectrum.scale_k
    return ReconstructionResult(
        Scene1D(pixels, physical=False), spectrum, float(np.max(np.abs(raw.imag)))
    )


def reconstruct_from_records(records: Iterable[MeasurementRecord], n: int,
                             detector_gain: float = 1.0,
                             contrast_b: float = 1.0) -> ReconstructionResult:
    return reconstruct(calibrate(assemble(records, n), detector_gain, contrast_b))
