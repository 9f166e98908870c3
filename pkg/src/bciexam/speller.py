"""Four-option (A-D) P300 answer selector.

Each question flashes every option once per repetition block, in a seeded
random order.  Per-flash classifier scores are averaged per option and the
option with the highest mean is selected.
"""
from __future__ import annotations

import math
from dataclasses import dataclass


from . import rng as _rng
from .errors import MissingOption
from .lda import LdaModel, score_matrix
from .signal_core import OPTIONS, feature_matrix, stack_epochs


@dataclass(frozen=True)
class FlashSchedule:
    question_id: str
    blocks: tuple  # R tuples, each a permutation of OPTIONS
    seed: int

    @property
    def repetitions(self):
        return len(self.blocks)

    def flashes(self):
        return [opt for block in self.blocks for opt in block]


@dataclass(frozen=True)
class OptionScores:
    scores: dict  # option -> tuple of per-flash scores
    aggregate: dict  # option -> mean score
    question_id: str = ""


@dataclass(frozen=True)
class AnswerSelection:
    question_id: str
    selected: str
    margin: float
    tie: bool


def make_schedule(question_id, repetitions: int = 10, seed: int = 0) -> FlashSchedule:
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    gen = _rng.generator(seed, "schedule", question_id)
    blocks = tuple(tuple(OPTIONS[i] for i in gen.permutation(4)) for _ in range(repetitions))
    return FlashSchedule(question_id, blocks, seed)


def aggregate(scores, question_id: str = "") -> OptionScores:
    """Mean score per option from ``(option, score)`` pairs."""
    per = {o: [] for o in OPTIONS}
    for opt, s in scores:
        per[opt].append(float(s))
    missing = [o for o in OPTIONS if not per[o]]
    if missing:
        raise MissingOption(f"no scores for option(s) {', '.join(missing)}")
    # fsum keeps the mean independent of score order
    agg = {o: math.fsum(v) / len(v) for o, v in per.items()}
    return OptionScores({o: tuple(v) for o, v in per.items()}, agg, question_id)


def select(option_scores: OptionScores) -> AnswerSelection:
    """Argmax of the aggregates; exact ties go to the earliest letter and set ``tie``."""
    agg = option_scores.aggregate
    ranked = sorted(OPTIONS, key=lambda o: (-agg[o], o))
    best, runner_up = ranked[0], ranked[1]
    margin = float(agg[best] - agg[runner_up])
    return AnswerSelection(option_scores.question_id, best, margin, margin == 0.0)


def answer_question(model: LdaModel, epochs, standardize: bool = True) -> AnswerSelection:
    """Features -> per-flash score -> per-option mean -> argmax."""
    if not epochs:
        raise MissingOption("no epochs for question")
    X = feature_matrix(stack_epochs(epochs), standardize)
    return answer_from_scores(
        epochs[0].question_id, [e.option for e in epochs], score_matrix(model, X)
    )


def answer_from_scores(question_id, options, scores) -> AnswerSelection:
    return select(aggregate(zip(options, scores), question_id))
