"""Independent oracles shared by the test modules.

None of these call ``numpy.fft``; the package's transforms are checked
against literal sums and a hand-written radix-2 FFT.
"""
import cmath

import numpy as np
import pytest


def literal_dft(x):
    """Double loop over ``x(n) * W_N^{kn}``."""
    n = len(x)
    out = []
    for k in range(n):
        acc = 0j
        for i in range(n):
            acc += x[i] * cmath.exp(-2j * cmath.pi * k * i / n)
        out.append(acc)
    return np.array(out)


def radix2_fft(x):
    """Recursive decimation-in-time FFT for power-of-two lengths."""
    x = [complex(v) for v in x]
    n = len(x)
    if n == 1:
        return x
    even = radix2_fft(x[0::2])
    odd = radix2_fft(x[1::2])
    tw = [cmath.exp(-2j * cmath.pi * k / n) * odd[k] for k in range(n // 2)]
    return [even[k] + tw[k] for k in range(n // 2)] + [even[k] - tw[k] for k in range(n // 2)]


def dft_matrix(n):
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n)


def lowpass_oracle(x, indices):
    """Keep only bins ``indices`` and their mirrors, by explicit matrix products."""
    x = np.asarray(x, float)
    n = x.size
    W = dft_matrix(n)
    X = W @ x
    keep = np.zeros(n, bool)
    for k in indices:
        keep[k] = keep[(n - k) % n] = True
    X[~keep] = 0
    return (np.conj(W) @ X / n).real


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance criteria register one line each; printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
