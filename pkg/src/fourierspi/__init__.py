"""Fourier-sampling single-pixel imaging: simulation, reconstruction and CS baselines."""

__version__ = "0.1.0"

from .spectral import Scene1D, SpectrumEstimate, dft, hermitian_complete, idft, lowpass_projection
from .illumination import (FrequencyPlan, ModulationConfig, Phase, SinusoidPattern,
                           four_step_set, make_pattern, plan_frequencies)
from .acquisition import (AcquisitionRun, DetectorModel, MeasurementRecord, acquire_scanline,
                          acquire_stream, measure)
from .reconstruction import (CoefficientQuad, ReconstructionResult, assemble, calibrate,
                             extract_coefficient, reconstruct, reconstruct_from_records)
from .metrics import (SystemParams, compression_ratio, frame_rate, max_velocity, mse,
                      pixel_count, psnr)

__all__ = [
    "Scene1D", "SpectrumEstimate", "dft", "hermitian_complete", "idft", "lowpass_projection",
    "FrequencyPlan", "ModulationConfig", "Phase", "SinusoidPattern", "four_step_set",
    "make_pattern", "plan_frequencies",
    "AcquisitionRun", "DetectorModel", "MeasurementRecord", "acquire_scanline",
    "acquire_stream", "measure",
    "CoefficientQuad", "ReconstructionResult", "assemble", "calibrate", "extract_coefficient",
    "reconstruct", "reconstruct_from_records",
    "SystemParams", "compression_ratio", "frame_rate", "max_velocity", "mse", "pixel_count",
    "psnr",
]
