"""Iterative l1 baselines over random sensing matrices: TwIST and GPSR-BB.

Both solve ``min_s 0.5*||y - Phi Psi s||^2 + lam*||s||_1`` where ``Psi`` is
an orthonormal synthesis basis and return ``Psi s``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np
from scipy import fft as sfft

KINDS = ("rademacher", "bernoulli01")
BASES = ("identity", "dct", "fourier")


@dataclass(frozen=True, eq=False)
class SensingMatrix:
    m: int
    n: int
    seed: int = 0
    kind: str = "rademacher"
    entries: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown matrix kind {self.kind!r}; choose from {KINDS}")
        if self.m < 1 or self.n < 1:
            raise ValueError(f"matrix must be at least 1x1, got {self.m}x{self.n}")
        rng = np.random.default_rng(self.seed)
        phi = self._draw(rng, (self.m, self.n))
        # an all-zero row measures nothing; redraw it from the same stream
        while True:
            dead = ~phi.any(axis=1)
            if not dead.any():
                break
            phi[dead] = self._draw(rng, (int(dead.sum()), self.n))
        phi.setflags(write=False)
        object.__setattr__(self, "entries", phi)

    def _draw(self, rng, shape):
        bits = rng.integers(0, 2, size=shape).astype(float)
        return 2 * bits - 1 if self.kind == "rademacher" else bits

    @classmethod
    def from_array(cls, entries, seed: int = -1, kind: str = "rademacher"):
        a = np.array(entries, dtype=float)
        obj = object.__new__(cls)
        for name, value in (("m", a.shape[0]), ("n", a.shape[1]), ("seed", seed),
                            ("kind", kind), ("entries", a)):
            object.__setattr__(obj, name, value)
        return obj


def sense(matrix: SensingMatrix, scene, noise_sigma: float = 0.0, seed: int = 0) -> np.ndarray:
    """``y = Phi x + N(0, sigma^2)``."""
    x = np.asarray(getattr(scene, "pixels", scene), dtype=float)
    if x.shape != (matrix.n,):
        raise ValueError(f"scene length {x.size} != matrix columns {matrix.n}")
    y = matrix.entries @ x
    if noise_sigma > 0:
        y = y + np.random.default_rng(seed).normal(0.0, noise_sigma, matrix.m)
    return y


def shrink(v: np.ndarray, lam: float) -> np.ndarray:
    """Soft threshold: ``sign(v) * max(|v| - lam, 0)``."""
    return np.sign(v) * np.maximum(np.abs(v) - lam, 0.0)


def _hartley(x):
    f = sfft.fft(x)
    return (f.real - f.imag) / math.sqrt(x.size)


def basis_ops(basis: str):
    """``(synthesis, analysis)`` pair for an orthonormal basis."""
    if basis == "identity":
        return (lambda s: s), (lambda x: x)
    if basis == "dct":
        return (lambda s: sfft.idct(s, norm="ortho")), (lambda x: sfft.dct(x, norm="ortho"))
    if basis == "fourier":
        # the orthonormal Hartley transform is real, symmetric and its own inverse
        return _hartley, _hartley
    raise ValueError(f"unknown basis {basis!r}; choose from {BASES}")


@dataclass
class SolverConfig:
    lam: float = 1e-2
    tol: float = 1e-4
    max_iter: int = 2000
    basis: str = "dct"
    # TwIST: lower spectral bound of the normalized operator; alpha_t/beta_t
    # override the values derived from it when given
    twist_lam1: float = 1e-4
    alpha_t: float | None = None
    beta_t: float | None = None
    power_iters: int = 50
    # interpret lam as a fraction of ||A^T y||_inf (lam_max)
    relative_lam: bool = False

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.lam > 0:
            raise ValueError("lam must be positive")
        if self.basis not in BASES:
            raise ValueError(f"unknown basis {self.basis!r}")

    def twist_params(self) -> tuple[float, float]:
        lam1, lam_n = self.twist_lam1, 1.0
        rho0 = (1 - lam1 / lam_n) / (1 + lam1 / lam_n)
        alpha = 2 / (1 + math.sqrt(1 - rho0 ** 2))
        beta = alpha * 2 / (lam1 + lam_n)
        return (self.alpha_t if self.alpha_t is not None else alpha,
                self.beta_t if self.beta_t is not None else beta)


@dataclass
class SolverReport:
    estimate: np.ndarray
    coefficients: np.ndarray
    iterations: int
    wall_time: float
    objective_trace: np.ndarray
    elapsed_trace: np.ndarray
    converged: bool
    lam: float

    def trace_rows(self):
        return list(zip(range(len(self.objective_trace)), self.objective_trace,
                        self.elapsed_trace))


class _Operator:
    def __init__(self, matrix: SensingMatrix, basis: str):
        self.phi = np.asarray(matrix.entries)
        self.synth, self.analyze = basis_ops(basis)

    def A(self, s):
        return self.phi @ self.synth(s)

    def AT(self, r):
        return self.analyze(self.phi.T @ r)


def operator_norm_sq(matrix: SensingMatrix, basis: str = "identity",
                     iters: int = 50, seed: int = 0) -> float:
    """Largest eigenvalue of ``A^T A`` by power iteration (fixed step count)."""
    op = _Operator(matrix, basis)
    v = np.random.default_rng(seed).standard_normal(matrix.n)
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(iters):
        w = op.AT(op.A(v))
        est = float(np.linalg.norm(w))
        if est == 0:
            return 0.0
        v = w / est
    return est


def _setup(y, matrix, config):
    y = np.asarray(y, dtype=float)
    if y.shape != (matrix.m,):
        raise ValueError(f"measurement length {y.size} != matrix rows {matrix.m}")
    op = _Operator(matrix, config.basis)
    lam = config.lam
    if config.relative_lam:
        lam = lam * float(np.max(np.abs(op.AT(y))))
    norm_sq = operator_norm_sq(matrix, config.basis, config.power_iters)
    return y, op, lam, max(norm_sq, 1e-300)


def _objective(resid, s, lam):
    return 0.5 * float(resid @ resid) + lam * float(np.abs(s).sum())


def solve_twist(y, matrix: SensingMatrix, config: SolverConfig | None = None) -> SolverReport:
    """Monotone two-step iterative shrinkage/thresholding.

    The operator is normalized by a power-iteration estimate of ``||A||^2``.
    A two-step update that raises the objective is replaced by a plain IST
    step; an IST step that raises it doubles the normalization. The
    objective trace is therefore non-increasing from the first iterate.
    """
    config = config or SolverConfig()
    y, op, lam, L = _setup(y, matrix, config)
    alpha, beta = config.twist_params()
    t0 = time.perf_counter()
    xm1 = np.zeros(matrix.n)
    xm2 = xm1
    resid = y.copy()
    f = _objective(resid, xm1, lam)
    trace, elapsed = [f], [0.0]
    twist_iters = ist_iters = 0
    converged = False
    it = 0
    while it < config.max_iter:
        it += 1
        grad = op.AT(resid)
        for _ in range(64):
            x_ist = shrink(xm1 + grad / L, lam / L)
            if ist_iters >= 2 or twist_iters != 0:
                x_new = (alpha - beta) * xm1 + (1 - alpha) * xm2 + beta * x_ist
                r_new = y - op.A(x_new)
                f_new = _objective(r_new, x_new, lam)
                if f_new > f:
                    twist_iters = 0
                    continue
                twist_iters += 1
                ist_iters = 0
                break
            x_new = x_ist
            r_new = y - op.A(x_new)
            f_new = _objective(r_new, x_new, lam)
            if f_new > f:
                L *= 2
                ist_iters = twist_iters = 0
                continue
            twist_iters += 1
            break
        else:
            # no descent possible at working precision
            converged = True
            break
        xm2, xm1, resid = xm1, x_new, r_new
        change = abs(f_new - f) / f if f > 0 else 0.0
        f = f_new
        trace.append(f)
        elapsed.append(time.perf_counter() - t0)
        if change < config.tol:
            converged = True
            break
    wall = time.perf_counter() - t0
    return SolverReport(op.synth(xm1), xm1, it, wall, np.array(trace), np.array(elapsed),
                        converged, lam)


def solve_gpsr(y, matrix: SensingMatrix, config: SolverConfig | None = None,
               alpha_min: float = 1e-30, alpha_max: float = 1e30) -> SolverReport:
    """GPSR-BB, monotone variant.

    Works on the split ``s = u - v`` with ``u, v >= 0``. Each step projects a
    Barzilai-Borwein gradient step onto the non-negative orthant and takes
    the exact minimizing step length in ``[0, 1]`` along the result, so the
    traced objective ``0.5||r||^2 + lam*sum(u + v)`` never increases.
    """
    config = config or SolverConfig()
    y, op, lam, L = _setup(y, matrix, config)
    t0 = time.perf_counter()
    n = matrix.n
    u = np.zeros(n)
    v = np.zeros(n)
    resid = y.copy()
    f = 0.5 * float(resid @ resid)
    trace, elapsed = [f], [0.0]
    step = 1.0 / L
    converged = False
    it = 0
    while it < config.max_iter:
        it += 1
        g = op.AT(resid)
        gu = lam - g
        gv = lam + g
        du = np.maximum(u - step * gu, 0.0) - u
        dv = np.maximum(v - step * gv, 0.0) - v
        a_dx = op.A(du - dv)
        gamma = float(a_dx @ a_dx)
        slope = float(gu @ du + gv @ dv)
        if slope >= 0:
            converged = True
            break
        t = 1.0 if gamma <= 0 else min(max(-slope / gamma, 0.0), 1.0)
        u = u + t * du
        v = v + t * dv
        resid = resid - t * a_dx
        dz_sq = float(du @ du + dv @ dv)
        step = alpha_max if gamma <= 0 else min(max(dz_sq / gamma, alpha_min), alpha_max)
        f_new = 0.5 * float(resid @ resid) + lam * float(u.sum() + v.sum())
        change = abs(f_new - f) / f if f > 0 else 0.0
        f = f_new
        trace.append(f)
        elapsed.append(time.perf_counter() - t0)
        if change < config.tol:
            converged = True
            break
    s = u - v
    wall = time.perf_counter() - t0
    return SolverReport(op.synth(s), s, it, wall, np.array(trace), np.array(elapsed),
                        converged, lam)


def estimate_iteration_cost(solver: str, m: int, n: int, c: float = 1.0) -> float:
    """Per-iteration operation-count model used for reporting.

    ``twist`` and ``idft`` scale as ``c*n*log2(n)`` (the ``idft`` figure is
    for the whole one-shot reconstruction), ``gpsr`` as ``c*m*n``.
    """
    if m == 0 or n == 0:
        return 0.0
    if solver in ("twist", "idft"):
        return c * n * math.log2(n)
    if solver == "gpsr":
        return c * m * n
    raise ValueError(f"unknown solver {solver!r}")
