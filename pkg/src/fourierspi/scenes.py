"""Test scenes: the stored 21x21 QR-style chart and simple 1-D signals."""
from __future__ import annotations

from importlib import resources

import numpy as np

CHART_FILE = "qr_chart_21.txt"


def make_qr_like(seed: int = 2016, size: int = 21) -> np.ndarray:
    """Version-1-sized QR layout: three finder squares, timing lines, random data."""
    rng = np.random.default_rng(seed)
    grid = rng.integers(0, 2, size=(size, size))
    finder = np.ones((7, 7), int)
    finder[1:6, 1:6] = 0
    finder[2:5, 2:5] = 1
    for r0, c0 in ((0, 0), (0, size - 7), (size - 7, 0)):
        grid[r0:r0 + 7, c0:c0 + 7] = finder
    # white separators around the finders
    grid[7, :8] = grid[:8, 7] = 0
    grid[7, size - 8:] = grid[:8, size - 8] = 0
    grid[size - 8, :8] = grid[size - 8:, 7] = 0
    timing = (np.arange(8, size - 8) + 1) % 2
    grid[6, 8:size - 8] = timing
    grid[8:size - 8, 6] = timing
    return grid


def load_chart() -> np.ndarray:
    """The stored chart as a 21x21 array of 0 (white) / 1 (dark) modules."""
    text = resources.files("fourierspi.data").joinpath(CHART_FILE).read_text()
    rows = [line.strip() for line in text.splitlines() if line.strip() and not line.startswith("#")]
    return np.array([[int(ch) for ch in row] for row in rows], dtype=int)


def render_chart(modules: np.ndarray, n: int = 800, rows_per_module: int = 5,
                 dark: float = 0.0, light: float = 1.0) -> np.ndarray:
    """Nearest-neighbour render of the modules: ``n`` columns per scan line.

    Dark modules reflect little light, so they map to ``dark``.
    """
    modules = np.asarray(modules)
    cols = (np.arange(n) * modules.shape[1]) // n
    img = np.where(modules[:, cols] == 1, dark, light)
    return np.repeat(img, rows_per_module, axis=0).astype(float)


def chart_image(n: int = 800, rows_per_module: int = 5) -> np.ndarray:
    return render_chart(load_chart(), n, rows_per_module)


def smooth_scene(seed: int, n: int = 800, bumps: int = 8, background: float = 0.1) -> np.ndarray:
    """Non-negative sum of Gaussian bumps; used by the benchmark."""
    rng = np.random.default_rng(seed)
    x = np.arange(n)
    out = np.full(n, background)
    for _ in range(bumps):
        c = rng.uniform(0.05 * n, 0.95 * n)
        w = rng.uniform(0.0125 * n, 0.05 * n)
        out += rng.uniform(0.3, 1.0) * np.exp(-((x - c) / w) ** 2 / 2)
    return out
