"""Flat run configuration: built-in defaults < JSON config file < CLI flags."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields

from .errors import AliasRisk, ConfigError, InvalidBand
from .lda import WEIGHTINGS
from .signal_core import PipelineConfig
from .synthgen import SynthConfig


@dataclass(frozen=True)
class RunConfig:
    # preprocessing
    low_cut_hz: float = 0.5
    high_cut_hz: float = 12.0
    filter_order: int = 4
    decimation: int = 10
    window_s: float = 0.6
    standardize: bool = True
    # classifier
    shrinkage: float = 1e-3
    sb_weighting: str = "paper_unweighted"
    # speller / synthetic data
    repetitions: int = 10
    sample_rate_hz: float = 250.0
    n_channels: int = 4
    p300_amplitude_uv: float = 5.0
    p300_latency_s: float = 0.30
    p300_width_s: float = 0.08
    background_noise_uv_rms: float = 2.0
    isi_s: float = 0.4
    n_target: int = 50
    n_nontarget: int = 150
    student_id: str = "student"
    seed: int = 0

    @property
    def pipeline(self) -> PipelineConfig:
        return PipelineConfig(
            self.low_cut_hz, self.high_cut_hz, self.filter_order,
            self.decimation, self.window_s, self.standardize,
        )

    @property
    def synth(self) -> SynthConfig:
        return SynthConfig(
            self.sample_rate_hz, self.n_channels, self.p300_amplitude_uv,
            self.p300_latency_s, self.p300_width_s, self.background_noise_uv_rms,
            self.repetitions, self.isi_s, self.window_s, self.seed,
        )

    def validate(self):
        """Check every module precondition up front; raises ConfigError naming the field."""
        try:
            self.pipeline.filter_spec.validate(self.sample_rate_hz)
        except InvalidBand as exc:
            field = "filter_order" if "order" in str(exc) else "high_cut_hz"
            if self.low_cut_hz <= 0 or self.low_cut_hz >= self.high_cut_hz:
                field = "low_cut_hz"
            raise ConfigError(field, str(exc)) from exc
        if not isinstance(self.decimation, int) or self.decimation < 1:
            raise ConfigError("decimation", "must be a positive integer")
        new_nyquist = self.sample_rate_hz / self.decimation / 2
        if self.decimation > 1 and not self.high_cut_hz < new_nyquist:
            raise ConfigError(
                "high_cut_hz",
                str(AliasRisk(f"{self.high_cut_hz} Hz is not below the decimated Nyquist {new_nyquist} Hz")),
            )
        if self.shrinkage < 0:
            raise ConfigError("shrinkage", "must be >= 0")
        if self.sb_weighting not in WEIGHTINGS:
            raise ConfigError("sb_weighting", f"must be one of {WEIGHTINGS}")
        if self.n_target < 2:
            raise ConfigError("n_target", "must be >= 2")
        if self.n_nontarget < 2:
            raise ConfigError("n_nontarget", "must be >= 2")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed", "must be an unsigned 64-bit integer")
        self.synth.validate()
        return self


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(name, value):
    kind = _TYPES[name]
    try:
        if kind == "bool":
            if isinstance(value, bool):
                return value
            if str(value).lower() in ("1", "true", "yes", "on"):
                return True
            if str(value).lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(value)
        if kind == "int":
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(value)
            return int(value)
        if kind == "float":
            return float(value)
        return str(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(name, f"cannot interpret {value!r} as {kind}") from exc


def build_config(file_values=None, overrides=None) -> RunConfig:
    values = asdict(RunConfig())
    for source in (file_values or {}, overrides or {}):
        for key, val in source.items():
            if val is None:
                continue
            if key not in values:
                raise ConfigError(key, "unknown configuration key")
            values[key] = _coerce(key, val)
    return RunConfig(**values).validate()


def load_config_file(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config", "expected a flat JSON object")
    return data
