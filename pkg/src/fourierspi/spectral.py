"""Discrete Fourier mathematics shared by every other module.

Convention: the forward transform is unnormalized with kernel
``exp(-2j*pi*k*n/N)``; the inverse carries the ``1/N`` factor.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class SpectrumError(ValueError):
    """Raised when a spectrum violates the index convention or symmetry."""


@dataclass(frozen=True)
class Scene1D:
    """A single scanline of intensities.

    ``physical=True`` asserts non-negative pixels (a real scene);
    reconstructions and synthetic test signals use ``physical=False``.
    """

    pixels: np.ndarray
    physical: bool = True

    def __post_init__(self):
        px = np.array(self.pixels, dtype=float)
        if px.ndim != 1:
            raise ValueError(f"scene must be 1-D, got shape {px.shape}")
        n = px.size
        if n < 4 or n % 2:
            raise ValueError(f"scene length must be even and >= 4, got {n}")
        if self.physical and np.any(px < 0):
            raise ValueError("physical scene has negative pixels")
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def n(self) -> int:
        return self.pixels.size

    def __len__(self):
        return self.pixels.size


def _as_array(x) -> np.ndarray:
    if isinstance(x, Scene1D):
        return x.pixels
    return np.asarray(x)


def dft(scene) -> np.ndarray:
    """Forward DFT ``X(k) = sum_n x(n) exp(-2j pi k n / N)``.

    Accepts a :class:`Scene1D` or any 1-D array-like of length >= 1.
    """
    return np.fft.fft(_as_array(scene).astype(complex))


def idft(spectrum) -> np.ndarray:
    """Inverse DFT with the ``1/N`` factor. Returns the complex result.

    Callers that need a :class:`Scene1D` take the real part and keep the
    imaginary residue for reporting (see ``reconstruction.reconstruct``).
    """
    return np.fft.ifft(np.asarray(spectrum, dtype=complex))


@dataclass(frozen=True)
class SpectrumEstimate:
    """Partially measured spectrum of a real scanline.

    Attributes:
        coefficients: complex vector of length N.
        measured_mask: True where a coefficient was measured or mirrored
            from a measurement; every other entry of ``coefficients`` is
            exactly zero.
        scale_k: calibration constant dividing the inverse transform.
    """

    coefficients: np.ndarray
    measured_mask: np.ndarray
    scale_k: float = 1.0

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=complex)
        mask = np.array(self.measured_mask, dtype=bool)
        if c.ndim != 1 or c.shape != mask.shape:
            raise SpectrumError("coefficients and mask must be 1-D of equal length")
        if c.size < 4 or c.size % 2:
            raise SpectrumError(f"spectrum length must be even and >= 4, got {c.size}")
        if not self.scale_k > 0:
            raise SpectrumError(f"scale_k must be positive, got {self.scale_k}")
        if np.any(c[~mask] != 0):
            raise SpectrumError("unmeasured coefficients must be exactly zero")
        c.setflags(write=False)
        mask.setflags(write=False)
        object.__setattr__(self, "coefficients", c)
        object.__setattr__(self, "measured_mask", mask)

    @property
    def n(self) -> int:
        return self.coefficients.size

    @classmethod
    def empty(cls, n: int) -> "SpectrumEstimate":
        return cls(np.zeros(n, complex), np.zeros(n, bool))

    @classmethod
    def from_bins(cls, n: int, bins: dict[int, complex], scale_k: float = 1.0):
        c = np.zeros(n, complex)
        mask = np.zeros(n, bool)
        for k, value in bins.items():
            c[k] = value
            mask[k] = True
        return cls(c, mask, scale_k)

    def measured_indices(self) -> np.ndarray:
        return np.flatnonzero(self.measured_mask)


def hermitian_complete(partial: SpectrumEstimate) -> SpectrumEstimate:
    """Mirror measured non-negative bins onto their negative-frequency partners.

    Bin ``N-k`` receives ``conj(X(k))`` for every measured ``k`` in
    ``1..N/2-1``; DC and Nyquist bins are forced real.

    Raises:
        SpectrumError: if any bin above ``N/2`` is already marked measured.
    """
    n = partial.n
    half = n // 2
    idx = partial.measured_indices()
    if np.any(idx > half):
        raise SpectrumError(
            f"measured indices above N/2={half}: {idx[idx > half].tolist()}"
        )
    c = partial.coefficients.copy()
    mask = partial.measured_mask.copy()
    for k in (0, half):
        if mask[k]:
            c[k] = c[k].real
    inner = idx[(idx >= 1) & (idx < half)]
    c[n - inner] = np.conj(c[inner])
    mask[n - inner] = True
    return SpectrumEstimate(c, mask, partial.scale_k)


def hermitian_defect(coefficients: np.ndarray) -> float:
    """Largest violation of ``X(N-k) = conj(X(k))`` including DC/Nyquist imag."""
    c = np.asarray(coefficients, dtype=complex)
    mirrored = np.conj(c[(-np.arange(c.size)) % c.size])
    return float(np.max(np.abs(c - mirrored))) if c.size else 0.0


def lowpass_projection(scene, indices) -> np.ndarray:
    """Zero every DFT bin outside ``indices`` and their mirrors, then invert.

    This is what an ideal noiseless Fourier-sampling system returns, and is
    the reference the acquisition pipeline is tested against.
    """
    x = np.asarray(_as_array(scene), dtype=float)
    n = x.size
    keep = np.zeros(n, bool)
    idx = np.asarray(list(indices), dtype=int)
    keep[idx] = True
    keep[(-idx) % n] = True
    spectrum = np.where(keep, dft(x), 0)
    return idft(spectrum).real
