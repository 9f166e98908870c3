"""EEG data model and the preprocessing chain.

Band-pass (Butterworth, bilinear transform, second-order sections), causal
filtering, decimation, post-stimulus segmentation, feature flattening and
periodogram band power.  Event timing is kept in sample indices so that
decimation remaps onsets exactly.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np
from scipy import signal as sps

from .errors import AliasRisk, InvalidBand, SchemaError, WindowOutOfRange

OPTIONS = ("A", "B", "C", "D")
ALPHA_BAND = (8.0, 12.0)


def _frozen(a, ndim):
    arr = np.array(a, dtype=float)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class StimulusEvent:
    onset_sample: int
    question_id: str
    option: str
    is_target: Optional[bool] = None

    def __post_init__(self):
        if self.option not in OPTIONS:
            raise ValueError(f"option must be one of A-D, got {self.option!r}")


@dataclass(frozen=True)
class Recording:
    """Multichannel samples (``[n_samples, n_channels]``, microvolts) plus events.

    ``band_limit_hz`` is set by :func:`apply_filter` and consulted by
    :func:`decimate`; raw recordings carry ``None``.
    """

    sample_rate_hz: float
    channels: tuple
    samples: np.ndarray
    events: tuple = ()
    band_limit_hz: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(self.channels))
        object.__setattr__(self, "events", tuple(self.events))
        object.__setattr__(self, "samples", _frozen(self.samples, 2))
        if not self.sample_rate_hz > 0:
            raise ValueError("sample_rate_hz must be positive")
        if len(self.channels) < 1:
            raise ValueError("at least one channel is required")
        if len(set(self.channels)) != len(self.channels):
            raise ValueError("duplicate channel labels")
        if self.samples.shape[1] != len(self.channels):
            raise ValueError(
                f"samples have {self.samples.shape[1]} columns for {len(self.channels)} channels"
            )
        n = self.samples.shape[0]
        for ev in self.events:
            if not 0 <= ev.onset_sample < n:
                raise ValueError(f"event onset {ev.onset_sample} outside [0, {n})")

    @property
    def n_samples(self):
        return self.samples.shape[0]

    @property
    def n_channels(self):
        return self.samples.shape[1]


@dataclass(frozen=True)
class FilterSpec:
    low_cut_hz: float = 0.5
    high_cut_hz: float = 30.0
    order: int = 4

    def validate(self, fs):
        if not isinstance(self.order, (int, np.integer)) or self.order < 2 or self.order % 2:
            raise InvalidBand(f"order must be an even positive integer, got {self.order!r}")
        if not 0 < self.low_cut_hz < self.high_cut_hz < fs / 2:
            raise InvalidBand(
                f"need 0 < low_cut ({self.low_cut_hz}) < high_cut ({self.high_cut_hz})"
                f" < fs/2 ({fs / 2})"
            )


@dataclass(frozen=True)
class FilterCoefficients:
    """Cascade of biquads, one row ``[b0, b1, b2, 1, a1, a2]`` per section."""

    sos: np.ndarray
    sample_rate_hz: float
    low_cut_hz: float
    high_cut_hz: float

    def __post_init__(self):
        object.__setattr__(self, "sos", _frozen(self.sos, 2))


@dataclass(frozen=True)
class Epoch:
    question_id: str
    option: str
    data: np.ndarray
    effective_rate_hz: float
    is_target: Optional[bool] = None

    def __post_init__(self):
        object.__setattr__(self, "data", _frozen(self.data, 2))


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    provenance: tuple = ("", "")

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, 1))


# --------------------------------------------------------------------------
# filter design


def _butter_sections(n, k, highpass):
    """Digital Butterworth biquads for normalised prewarped cutoff ``k = tan(pi fc / fs)``."""
    rows = []
    k2 = k * k
    for i in range(1, n // 2 + 1):
        # s^2 + q s + 1 is the i-th conjugate pole pair of the analogue prototype
        q = 2.0 * math.sin((2 * i - 1) * math.pi / (2 * n))
        a0 = 1.0 + q * k + k2
        a1 = 2.0 * (k2 - 1.0) / a0
        a2 = (1.0 - q * k + k2) / a0
        if highpass:
            g = 1.0 / a0
            rows.append([g, -2.0 * g, g, 1.0, a1, a2])
        else:
            g = k2 / a0
            rows.append([g, 2.0 * g, g, 1.0, a1, a2])
    return rows


def design_bandpass(spec: FilterSpec, fs: float) -> FilterCoefficients:
    """Butterworth band-pass as an order-``spec.order`` high-pass at ``low_cut_hz``
    cascaded with an order-``spec.order`` low-pass at ``high_cut_hz``.

    Cutoffs are prewarped so the -3 dB points land exactly on the requested
    frequencies after the bilinear transform.
    """
    spec.validate(fs)
    k_lo = math.tan(math.pi * spec.low_cut_hz / fs)
    k_hi = math.tan(math.pi * spec.high_cut_hz / fs)
    sos = _butter_sections(spec.order, k_lo, True) + _butter_sections(spec.order, k_hi, False)
    return FilterCoefficients(np.array(sos), float(fs), spec.low_cut_hz, spec.high_cut_hz)


def frequency_response(coeffs: FilterCoefficients, freqs_hz) -> np.ndarray:
    """Complex ``H(e^{jw})`` of the cascade at the given frequencies."""
    z = np.exp(-2j * np.pi * np.asarray(freqs_hz, dtype=float) / coeffs.sample_rate_hz)
    h = np.ones_like(z)
    for b0, b1, b2, a0, a1, a2 in coeffs.sos:
        h = h * (b0 + b1 * z + b2 * z * z) / (a0 + a1 * z + a2 * z * z)
    return h


def apply_filter(coeffs: FilterCoefficients, recording: Recording) -> Recording:
    """Causal single pass, zero initial state, each channel independently."""
    if not math.isclose(coeffs.sample_rate_hz, recording.sample_rate_hz):
        raise InvalidBand(
            f"filter designed for {coeffs.sample_rate_hz} Hz, recording is {recording.sample_rate_hz} Hz"
        )
    out = sps.sosfilt(np.array(coeffs.sos), np.array(recording.samples), axis=0)
    limit = coeffs.high_cut_hz
    if recording.band_limit_hz is not None:
        limit = min(limit, recording.band_limit_hz)
    return replace(recording, samples=out, band_limit_hz=limit)


def decimate(recording: Recording, factor: int) -> Recording:
    if factor < 1:
        raise ValueError("factor must be >= 1")
    if factor == 1:
        return recording
    new_fs = recording.sample_rate_hz / factor
    if recording.band_limit_hz is None or not recording.band_limit_hz < new_fs / 2:
        raise AliasRisk(
            f"band limit {recording.band_limit_hz} Hz is not below the new Nyquist "
            f"{new_fs / 2} Hz; filter before decimating"
        )
    events = [replace(ev, onset_sample=ev.onset_sample // factor) for ev in recording.events]
    return replace(
        recording, sample_rate_hz=new_fs, samples=recording.samples[::factor], events=events
    )


def window_samples(window_seconds, fs):
    return int(round(window_seconds * fs))


def segment(recording: Recording, window_seconds: float) -> list:
    """One :class:`Epoch` per event, in event order."""
    if not window_seconds > 0:
        raise ValueError("window_seconds must be positive")
    fs = recording.sample_rate_hz
    n = window_samples(window_seconds, fs)
    epochs = []
    for i, ev in enumerate(recording.events):
        stop = ev.onset_sample + n
        if stop > recording.n_samples:
            raise WindowOutOfRange(
                f"event {i} (question {ev.question_id!r}, option {ev.option}) at sample "
                f"{ev.onset_sample} needs {n} samples, recording has {recording.n_samples}"
            )
        epochs.append(
            Epoch(ev.question_id, ev.option, recording.samples[ev.onset_sample:stop], fs, ev.is_target)
        )
    return epochs


def _standardize_rows(x):
    mu = x.mean(axis=-1, keepdims=True)
    sd = x.std(axis=-1, keepdims=True)
    # constant rows can show a rounding-level std; test spread exactly
    varies = np.ptp(x, axis=-1, keepdims=True) > 0
    safe = np.where(varies, sd, 1.0)
    return np.where(varies, (x - mu) / safe, 0.0)


def feature_matrix(data, standardize=True) -> np.ndarray:
    """Batch flattening: ``[n_epochs, n_samples, n_channels]`` -> ``[n_epochs, d]``."""
    data = np.asarray(data, dtype=float)
    flat = np.swapaxes(data, -1, -2).reshape(data.shape[0], -1)
    return _standardize_rows(flat) if standardize else flat


def features(epoch: Epoch, standardize: bool = True) -> FeatureVector:
    """Channel-major concatenation; optional per-vector z-score (population std)."""
    values = feature_matrix(epoch.data[None], standardize)[0]
    return FeatureVector(values, (epoch.question_id, epoch.option))


def band_power(epoch: Epoch, band_low_hz: float, band_high_hz: float) -> np.ndarray:
    """Per-channel power in ``[band_low_hz, band_high_hz]`` from the one-sided
    periodogram ``|X_k|^2 / n`` (non-DC, non-Nyquist bins doubled)."""
    fs = epoch.effective_rate_hz
    if not 0 <= band_low_hz < band_high_hz <= fs / 2:
        raise InvalidBand(f"need 0 <= {band_low_hz} < {band_high_hz} <= {fs / 2}")
    n = epoch.data.shape[0]
    spec = np.fft.rfft(epoch.data, axis=0)
    pxx = (spec.real ** 2 + spec.imag ** 2) / n
    weights = np.full(pxx.shape[0], 2.0)
    weights[0] = 1.0
    if n % 2 == 0:
        weights[-1] = 1.0
    freqs = np.fft.rfftfreq(n, d=1.0 / fs)
    mask = (freqs >= band_low_hz) & (freqs <= band_high_hz)
    return (weights[mask, None] * pxx[mask]).sum(axis=0)


def alpha_power(epoch: Epoch) -> np.ndarray:
    return band_power(epoch, *ALPHA_BAND)


# --------------------------------------------------------------------------
# pipeline


@dataclass(frozen=True)
class PipelineConfig:
    """Preprocessing parameters shared by training and evaluation."""

    low_cut_hz: float = 0.5
    high_cut_hz: float = 12.0
    filter_order: int = 4
    decimation: int = 10
    window_s: float = 0.6
    standardize: bool = True

    @property
    def filter_spec(self):
        return FilterSpec(self.low_cut_hz, self.high_cut_hz, self.filter_order)


def preprocess(recording: Recording, config: PipelineConfig = PipelineConfig()) -> list:
    """Band-pass, decimate and segment ``recording`` into epochs."""
    coeffs = design_bandpass(config.filter_spec, recording.sample_rate_hz)
    filtered = apply_filter(coeffs, recording)
    return segment(decimate(filtered, config.decimation), config.window_s)


def stack_epochs(epochs: Sequence[Epoch]) -> np.ndarray:
    if not epochs:
        return np.zeros((0, 0, 0))
    return np.stack([e.data for e in epochs])


# --------------------------------------------------------------------------
# JSON


def recording_to_dict(rec: Recording) -> dict:
    events = []
    for ev in rec.events:
        d = {"onset_sample": ev.onset_sample, "question_id": ev.question_id, "option": ev.option}
        if ev.is_target is not None:
            d["is_target"] = ev.is_target
        events.append(d)
    out = {
        "sample_rate_hz": rec.sample_rate_hz,
        "channels": list(rec.channels),
        "samples": rec.samples.tolist(),
        "events": events,
    }
    if rec.band_limit_hz is not None:
        out["band_limit_hz"] = rec.band_limit_hz
    return out


def _require(obj, key, path, kind):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{path}.{key}" if path else key, "missing")
    val = obj[key]
    if kind is float:
        ok = isinstance(val, (int, float)) and not isinstance(val, bool)
    else:
        ok = isinstance(val, kind) and not (kind is int and isinstance(val, bool))
    if not ok:
        raise SchemaError(f"{path}.{key}" if path else key, f"expected {kind.__name__}")
    return val


def recording_from_dict(d: dict) -> Recording:
    fs = _require(d, "sample_rate_hz", "", float)
    channels = _require(d, "channels", "", list)
    rows = _require(d, "samples", "", list)
    evs = _require(d, "events", "", list)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != len(channels):
            raise SchemaError(f"samples[{i}]", f"expected a row of {len(channels)} numbers")
    events = []
    for i, e in enumerate(evs):
        path = f"events[{i}]"
        onset = _require(e, "onset_sample", path, int)
        qid = _require(e, "question_id", path, str)
        opt = _require(e, "option", path, str)
        if opt not in OPTIONS:
            raise SchemaError(f"{path}.option", f"must be one of A-D, got {opt!r}")
        tgt = e.get("is_target")
        if tgt is not None and not isinstance(tgt, bool):
            raise SchemaError(f"{path}.is_target", "expected bool")
        events.append(StimulusEvent(onset, qid, opt, tgt))
    samples = np.array(rows, dtype=float).reshape(len(rows), len(channels))
    try:
        return Recording(float(fs), channels, samples, events, d.get("band_limit_hz"))
    except ValueError as exc:
        raise SchemaError("recording", str(exc)) from exc


def save_recording(rec: Recording, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(recording_to_dict(rec), fh, separators=(",", ":"))
        fh.write("\n")


def load_recording(path) -> Recording:
    with open(path, encoding="utf-8") as fh:
        return recording_from_dict(json.load(fh))
