"""Run configuration: flat ``key = value`` files plus command-line overrides."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path


class ConfigError(ValueError):
    pass


def _floats(text: str) -> tuple:
    out = []
    for tok in text.replace(",", " ").split():
        out.append(tok if tok == "full" else float(tok))
    return tuple(out)


def _ints(text: str) -> tuple:
    return tuple(int(t) for t in text.replace(",", " ").split())


@dataclass
class RunConfig:
    n: int = 800
    m: int = 80
    f_rep: float = 50e6
    noise_sigma: float = 0.0
    gain_k: float = 1.0
    offset_a: float = 1.0
    contrast_b: float = 1.0
    seed: int = 0
    plan: str = "lowpass"
    # CS baselines
    solver: str = "twist,gpsr"
    lam: float = 1e-3
    relative_lam: bool = True
    tol: float = 1e-4
    max_iter: int = 2000
    basis: str = "dct"
    matrix_kind: str = "rademacher"
    # bench
    runs: int = 52
    warmup: int = 3
    # sweep / flow
    ratios: tuple = (0.05, 0.075, 0.10, 0.15, 0.25)
    m_values: tuple = (20, 40, 80, 160, 400)
    flow_speed: float = 1.0
    pixel_pitch: float = 1.6e-6
    freeze_within_frame: bool = False
    jobs: int = 1
    out: str = "out"

    def validate(self) -> "RunConfig":
        problems = []
        if self.n < 4 or self.n % 2:
            problems.append(f"n must be even and >= 4 (got {self.n})")
        if self.m < 0 or self.m % 4:
            problems.append(f"m must be a non-negative multiple of 4, one four-step quad per frequency (got {self.m})")
        if self.f_rep <= 0:
            problems.append("f_rep must be positive")
        if self.noise_sigma < 0:
            problems.append("noise_sigma must be >= 0")
        if self.gain_k <= 0:
            problems.append("gain_k must be positive")
        if self.contrast_b == 0:
            problems.append("contrast_b must be non-zero")
        if self.plan != "lowpass":
            problems.append(f"unknown plan policy {self.plan!r} (only 'lowpass')")
        for s in self.solvers:
            if s not in ("twist", "gpsr"):
                problems.append(f"unknown solver {s!r}")
        if self.basis not in ("identity", "dct", "fourier"):
            problems.append(f"unknown basis {self.basis!r}")
        if self.lam <= 0 or self.tol <= 0 or self.max_iter < 1:
            problems.append("lam and tol must be positive, max_iter >= 1")
        if self.runs < 1 or self.warmup < 0:
            problems.append("runs must be >= 1 and warmup >= 0")
        if any(mv % 4 or mv < 4 for mv in self.m_values):
            problems.append(f"m_values must be positive multiples of 4 (got {self.m_values})")
        if any(r != "full" and not r > 0 for r in self.ratios):
            problems.append("ratios must be positive or 'full'")
        if self.flow_speed < 0 or self.pixel_pitch <= 0:
            problems.append("flow_speed must be >= 0 and pixel_pitch > 0")
        if self.jobs < 1:
            problems.append("jobs must be >= 1")
        if problems:
            raise ConfigError("; ".join(problems))
        return self

    @property
    def solvers(self) -> list[str]:
        return [s.strip() for s in self.solver.split(",") if s.strip()]

    def as_dict(self) -> dict:
        return {k: list(v) if isinstance(v, tuple) else v
                for k, v in dataclasses.asdict(self).items()}


def _parser_for(f: dataclasses.Field):
    default = f.default
    if f.name == "ratios":
        return _floats
    if f.name == "m_values":
        return _ints
    if isinstance(default, bool):
        return lambda s: {"1": True, "true": True, "yes": True,
                          "0": False, "false": False, "no": False}[s.strip().lower()]
    return type(default)


FIELDS = {f.name: f for f in dataclasses.fields(RunConfig)}


def coerce(key: str, text: str):
    if key not in FIELDS:
        raise ConfigError(f"unknown config key {key!r}")
    try:
        return _parser_for(FIELDS[key])(text)
    except (ValueError, KeyError):
        raise ConfigError(f"bad value for {key}: {text!r}") from None


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> RunConfig:
    values = {}
    if path is not None:
        for i, raw in enumerate(Path(path).read_text().splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{i}: expected key = value")
            key, text = (s.strip() for s in line.split("=", 1))
            values[key] = coerce(key, text)
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = coerce(key, value) if isinstance(value, str) else value
    return RunConfig(**values).validate()
