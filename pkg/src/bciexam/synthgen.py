"""Seeded synthetic P300 sessions.

Target flashes add a Gaussian bump ``A * exp(-(t - latency)^2 / (2 width^2))``
to every channel; white Gaussian background noise of the configured RMS is
added everywhere.  The bump is truncated at ``latency +- 3 width`` so it
cannot reach past the epoch window.
"""
from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from . import rng as _rng
from .errors import ConfigError
from .exam import Exam
from .lda import LabeledDataset
from .signal_core import (
    OPTIONS,
    PipelineConfig,
    Recording,
    StimulusEvent,
    feature_matrix,
    preprocess,
    stack_epochs,
)
from .speller import make_schedule

TARGET = "target"
NONTARGET = "nontarget"

# 10/20 labels, metadata only
DEFAULT_CHANNELS = ("Fz", "Cz", "Pz", "Oz", "C3", "C4", "P3", "P4", "O1", "O2", "F3", "F4")

LEAD_IN_S = 2.0
QUESTION_GAP_S = 1.0
TAIL_S = 1.0


@dataclass(frozen=True)
class SynthConfig:
    sample_rate_hz: float = 250.0
    n_channels: int = 4
    p300_amplitude_uv: float = 5.0
    p300_latency_s: float = 0.30
    p300_width_s: float = 0.08
    background_noise_uv_rms: float = 2.0
    repetitions: int = 10
    isi_s: float = 0.4
    window_s: float = 0.6
    seed: int = 0

    def validate(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name in ("seed",):
                if v < 0:
                    raise ConfigError(f.name, "must be >= 0")
            elif f.name in ("background_noise_uv_rms", "p300_amplitude_uv"):
                if v < 0:
                    raise ConfigError(f.name, "must be >= 0")
            elif not v > 0:
                raise ConfigError(f.name, "must be positive")
        if not isinstance(self.n_channels, (int, np.integer)):
            raise ConfigError("n_channels", "must be an integer")
        if not isinstance(self.repetitions, (int, np.integer)):
            raise ConfigError("repetitions", "must be an integer")
        if not self.p300_latency_s + 3 * self.p300_width_s < self.window_s:
            raise ConfigError(
                "p300_latency_s", "latency + 3*width must fall inside the epoch window"
            )


def template(config: SynthConfig) -> np.ndarray:
    """Single-channel P300 bump sampled from the flash onset, truncated at 3 widths."""
    fs = config.sample_rate_hz
    n = int(np.ceil((config.p300_latency_s + 3 * config.p300_width_s) * fs)) + 1
    t = np.arange(n) / fs
    bump = config.p300_amplitude_uv * np.exp(
        -((t - config.p300_latency_s) ** 2) / (2 * config.p300_width_s ** 2)
    )
    bump[np.abs(t - config.p300_latency_s) > 3 * config.p300_width_s] = 0.0
    return bump


def _render(config, flashes, n_samples, noise_label):
    """Samples for ``flashes`` = [(onset_sample, is_target), ...]."""
    samples = np.zeros((n_samples, config.n_channels))
    bump = template(config)
    for onset, is_target in flashes:
        if is_target:
            stop = min(onset + bump.size, n_samples)
            samples[onset:stop] += bump[: stop - onset, None]
    if config.background_noise_uv_rms > 0:
        gen = _rng.generator(config.seed, noise_label)
        samples += config.background_noise_uv_rms * gen.standard_normal(samples.shape)
    return samples


def _channels(n):
    if n <= len(DEFAULT_CHANNELS):
        return DEFAULT_CHANNELS[:n]
    return tuple(f"Ch{i + 1}" for i in range(n))


def gen_session(exam: Exam, target_answers: dict, config: SynthConfig = SynthConfig()) -> Recording:
    """Continuous recording of every question's flash schedule.

    ``target_answers`` maps question id to the option the simulated student
    attends to; those flashes carry the P300 bump.
    """
    config.validate()
    missing = [q for q in exam.question_ids if q not in target_answers]
    if missing:
        raise ConfigError("target_answers", f"no target for question(s) {missing}")
    bad = [q for q, o in target_answers.items() if o not in OPTIONS]
    if bad:
        raise ConfigError("target_answers", f"options must be A-D for {bad}")
    fs = config.sample_rate_hz
    isi = int(round(config.isi_s * fs))
    t = int(round(LEAD_IN_S * fs))
    events, flashes = [], []
    for qi, qid in enumerate(exam.question_ids):
        if qi:
            t += int(round(QUESTION_GAP_S * fs))
        sched = make_schedule(qid, config.repetitions, config.seed)
        target = target_answers[qid]
        for opt in sched.flashes():
            hit = opt == target
            events.append(StimulusEvent(t, qid, opt, hit))
            flashes.append((t, hit))
            t += isi
    n_samples = t + int(round((config.window_s + TAIL_S) * fs))
    samples = _render(config, flashes, n_samples, f"session-noise:{exam.exam_id}")
    return Recording(fs, _channels(config.n_channels), samples, events)


def gen_training_recording(config: SynthConfig, n_target: int, n_nontarget: int) -> Recording:
    """Calibration run: ``n_target + n_nontarget`` flashes in seeded random order."""
    config.validate()
    if n_target < 2 or n_nontarget < 2:
        raise ConfigError("n_target" if n_target < 2 else "n_nontarget", "must be >= 2")
    fs = config.sample_rate_hz
    isi = int(round(config.isi_s * fs))
    labels = np.array([True] * n_target + [False] * n_nontarget)
    labels = labels[_rng.generator(config.seed, "training-order").permutation(labels.size)]
    t0 = int(round(LEAD_IN_S * fs))
    events, flashes = [], []
    opts = _rng.generator(config.seed, "training-options").integers(0, 4, labels.size)
    for i, hit in enumerate(labels):
        onset = t0 + i * isi
        events.append(StimulusEvent(onset, f"cal{i // 4:04d}", OPTIONS[int(opts[i])], bool(hit)))
        flashes.append((onset, bool(hit)))
    n_samples = t0 + labels.size * isi + int(round((config.window_s + TAIL_S) * fs))
    samples = _render(config, flashes, n_samples, "training-noise")
    return Recording(fs, _channels(config.n_channels), samples, events)


def gen_training_set(
    config: SynthConfig = SynthConfig(),
    n_target: int = 50,
    n_nontarget: int = 150,
    pipeline: PipelineConfig | None = None,
) -> LabeledDataset:
    """Labelled feature vectors from a synthetic calibration run.

    Labels are ``"target"`` / ``"nontarget"``; rows follow flash order.
    """
    if pipeline is None:
        pipeline = PipelineConfig(window_s=config.window_s)
    rec = gen_training_recording(config, n_target, n_nontarget)
    epochs = preprocess(rec, pipeline)
    X = feature_matrix(stack_epochs(epochs), pipeline.standardize)
    return LabeledDataset(X, [TARGET if e.is_target else NONTARGET for e in epochs])


def answer_key(exam: Exam) -> dict:
    return {q.question_id: q.answer for q in exam.questions}


def make_exam(n_questions: int, exam_id: str = "synthetic", seed: int = 0) -> Exam:
    """Placeholder exam with seeded answer keys, for benchmarks and demos."""
    from .exam import Question

    gen = _rng.generator(seed, "exam-key", exam_id)
    keys = gen.integers(0, 4, n_questions)
    questions = [
        Question(
            f"q{i + 1:03d}",
            f"Question {i + 1}",
            {o: f"Option {o}" for o in OPTIONS},
            OPTIONS[int(k)],
        )
        for i, k in enumerate(keys)
    ]
    return Exam(exam_id, f"Synthetic exam ({n_questions} questions)", questions)
