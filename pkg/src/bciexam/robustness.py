"""Accuracy under injected noise.

Evaluation epochs are blended with white Gaussian noise whose RMS matches
the epoch's own RMS: ``x -> (1 - a) x + a e`` with ``a = level / 100``.
The model is trained on clean data and never sees the noise.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import rng as _rng
from .exam import Exam, answer_all, group_epochs
from .lda import LdaModel, score_matrix
from .signal_core import Epoch, PipelineConfig, feature_matrix, preprocess, stack_epochs
from .speller import answer_from_scores


@dataclass(frozen=True)
class SweepReport:
    levels: tuple
    accuracy_pct: tuple
    clean_accuracy_pct: float
    trials_per_level: int
    seed: int

    def as_dict(self):
        return dict(zip(self.levels, self.accuracy_pct))


def _check_level(level):
    if not 0 <= level <= 100:
        raise ValueError(f"noise level must be in [0, 100], got {level}")


def inject_noise_batch(data: np.ndarray, level_pct: int, gen: np.random.Generator) -> np.ndarray:
    """Noise injection over a stack of epochs ``[n, samples, channels]``.

    RMS is measured per epoch; all-zero epochs receive noise of RMS 1 uV.
    """
    _check_level(level_pct)
    data = np.asarray(data, dtype=float)
    if level_pct == 0:
        return data
    alpha = level_pct / 100.0
    rms = np.sqrt(np.mean(data ** 2, axis=(1, 2), keepdims=True))
    rms = np.where(rms > 0, rms, 1.0)
    eps = gen.standard_normal(data.shape)
    eps_rms = np.sqrt(np.mean(eps ** 2, axis=(1, 2), keepdims=True))
    eps = eps * (rms / eps_rms)
    return (1.0 - alpha) * data + alpha * eps


def inject_noise(epoch: Epoch, level_pct: int, noise_stream: np.random.Generator) -> Epoch:
    if level_pct == 0:
        _check_level(level_pct)
        return epoch
    noisy = inject_noise_batch(epoch.data[None], level_pct, noise_stream)[0]
    return replace(epoch, data=noisy)


def level_seed(base_seed, level, trial):
    return _rng.mix(base_seed, level * 10**6 + trial)


def _prepared(exam, sessions, config):
    """Clean epoch stacks per session, grouped per exam question."""
    out = []
    for rec in sessions:
        groups = group_epochs(exam, preprocess(rec, config))
        data = stack_epochs([e for g in groups for e in g])
        sizes = [len(g) for g in groups]
        options = [[e.option for e in g] for g in groups]
        out.append((groups, data, sizes, options))
    return out


def _correct(exam, model, data, sizes, options, standardize):
    scores = score_matrix(model, feature_matrix(data, standardize))
    n, start = 0, 0
    for q, size, opts in zip(exam.questions, sizes, options):
        sel = answer_from_scores(q.question_id, opts, scores[start:start + size])
        n += sel.selected == q.answer
        start += size
    return n


def noise_sweep(
    model: LdaModel,
    exam: Exam,
    sessions,
    levels=range(0, 101),
    trials: int = 5,
    seed: int = 0,
    config: PipelineConfig = PipelineConfig(),
) -> SweepReport:
    """Per-question accuracy at each noise level, averaged over ``trials``.

    Each (level, trial) pair draws from its own derived stream, so any
    subset of levels reproduces the same numbers.
    """
    levels = tuple(int(l) for l in levels)
    for l in levels:
        _check_level(l)
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must be strictly increasing")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    prepared = _prepared(exam, sessions, config)
    n_questions = len(exam.questions) * len(prepared)

    clean = 0
    for groups, _, _, _ in prepared:
        clean += sum(
            s.selected == q.answer
            for s, q in zip(answer_all(model, groups, config.standardize), exam.questions)
        )
    clean_pct = 100.0 * clean / n_questions

    accuracies = []
    for level in levels:
        if level == 0:
            accuracies.append(clean_pct)
            continue
        per_trial = []
        for trial in range(trials):
            gen = np.random.Generator(np.random.PCG64(level_seed(seed, level, trial)))
            hits = 0
            for _, data, sizes, options in prepared:
                noisy = inject_noise_batch(data, level, gen)
                hits += _correct(exam, model, noisy, sizes, options, config.standardize)
            per_trial.append(100.0 * hits / n_questions)
        accuracies.append(float(np.mean(per_trial)))
    return SweepReport(levels, tuple(accuracies), clean_pct, trials, seed)


def smoothed(values, width=5):
    """Centred moving average; the window shrinks at the ends."""
    values = np.asarray(values, dtype=float)
    half = width // 2
    return np.array(
        [values[max(0, i - half): i + half + 1].mean() for i in range(values.size)]
    )


def parse_levels(spec: str) -> list:
    """``"0..100"``, ``"0..100:5"`` or ``"0,50,100"``."""
    spec = spec.strip()
    if ".." in spec:
        lo, _, rest = spec.partition("..")
        hi, _, step = rest.partition(":")
        lo, hi, step = int(lo), int(hi), int(step or 1)
        if step < 1 or hi < lo:
            raise ValueError(f"bad level range {spec!r}")
        out = list(range(lo, hi + 1, step))
    else:
        out = [int(tok) for tok in spec.split(",") if tok.strip()]
    if not out:
        raise ValueError("empty level list")
    for l in out:
        _check_level(l)
    return out


# --------------------------------------------------------------------------
# report files


def write_report_csv(report: SweepReport, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["noise_pct", "accuracy_pct"])
        for level, acc in zip(report.levels, report.accuracy_pct):
            w.writerow([level, f"{acc:.2f}"])


def read_report_csv(path) -> list:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [(int(r["noise_pct"]), float(r["accuracy_pct"])) for r in rows]


_W, _H, _M = 640, 420, 60


def render_curve_svg(report: SweepReport, path) -> None:
    """Accuracy-vs-noise polyline, both axes fixed to 0-100."""
    pw, ph = _W - 2 * _M, _H - 2 * _M

    def xy(level, acc):
        return _M + pw * level / 100.0, _H - _M - ph * acc / 100.0

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<line x1="{_M}" y1="{_H - _M}" x2="{_W - _M}" y2="{_H - _M}" stroke="black"/>',
        f'<line x1="{_M}" y1="{_M}" x2="{_M}" y2="{_H - _M}" stroke="black"/>',
    ]
    for tick in range(0, 101, 20):
        x, _ = xy(tick, 0)
        _, y = xy(0, tick)
        parts.append(f'<text x="{x:.1f}" y="{_H - _M + 18}" font-size="12" text-anchor="middle">{tick}</text>')
        parts.append(f'<text x="{_M - 8}" y="{y + 4:.1f}" font-size="12" text-anchor="end">{tick}</text>')
    parts.append(
        f'<text x="{_W / 2:.1f}" y="{_H - 15}" font-size="14" text-anchor="middle">noise (%)</text>'
    )
    parts.append(
        f'<text x="18" y="{_H / 2:.1f}" font-size="14" text-anchor="middle" '
        f'transform="rotate(-90 18 {_H / 2:.1f})">accuracy (%)</text>'
    )
    pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in (xy(l, a) for l, a in zip(report.levels, report.accuracy_pct)))
    parts.append(f'<polyline fill="none" stroke="#c0392b" stroke-width="2" points="{pts}"/>')
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")
