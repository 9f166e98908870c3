import dataclasses
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from bciexam import exam as exam_mod, synthgen
from bciexam.errors import MissingOption
from bciexam.signal_core import OPTIONS, PipelineConfig, preprocess
from bciexam.speller import aggregate, answer_question, make_schedule, select


def test_single_block_is_permutation():
    s = make_schedule("q1", 1, seed=123)
    assert len(s.blocks) == 1 and sorted(s.blocks[0]) == list(OPTIONS)


def test_schedule_deterministic():
    assert make_schedule("q7", 10, 99) == make_schedule("q7", 10, 99)
    assert make_schedule("q7", 10, 99) != make_schedule("q8", 10, 99)


def test_schedule_blocks_are_permutations():
    s = make_schedule("q", 25, 4)
    assert s.repetitions == 25
    assert all(sorted(b) == list(OPTIONS) for b in s.blocks)


def test_first_position_uniform():
    # P(|Bin(1000, 1/4) - 250| > 50) < 1e-6
    s = make_schedule("q", 1000, 2024)
    counts = {o: sum(b[0] == o for b in s.blocks) for o in OPTIONS}
    assert all(abs(c - 250) <= 50 for c in counts.values()), counts


def test_aggregate_means():
    agg = aggregate([("A", 1.0), ("B", 0.0), ("C", 0.0), ("D", 0.0)]).aggregate
    assert agg == {"A": 1.0, "B": 0.0, "C": 0.0, "D": 0.0}
    agg = aggregate([("A", 1), ("A", 3), ("B", 0), ("C", 0), ("D", 0)]).aggregate
    assert agg["A"] == 2.0


@given(st.lists(st.tuples(st.sampled_from(OPTIONS), st.floats(-1e6, 1e6)), min_size=1, max_size=40), st.randoms())
def test_aggregate_order_independent(pairs, rnd):
    pairs = pairs + [(o, 0.5) for o in OPTIONS]
    shuffled = list(pairs)
    rnd.shuffle(shuffled)
    assert aggregate(pairs).aggregate == aggregate(shuffled).aggregate


def test_missing_option():
    with pytest.raises(MissingOption, match="D"):
        aggregate([("A", 1.0), ("B", 1.0), ("C", 1.0)])


def _sel(a, b, c, d):
    return select(aggregate(zip(OPTIONS, (a, b, c, d)), "q"))


def test_select_clear_winner():
    s = _sel(0.9, 0.1, 0.1, 0.1)
    assert (s.selected, s.tie) == ("A", False)
    assert s.margin == pytest.approx(0.8)


def test_select_tie_goes_alphabetical():
    s = _sel(0.5, 0.5, 0.1, 0.1)
    assert (s.selected, s.margin, s.tie) == ("A", 0.0, True)


def test_select_last():
    assert _sel(0.1, 0.1, 0.1, 0.7).selected == "D"


@given(st.lists(st.floats(-100, 100), min_size=4, max_size=4), st.floats(0.1, 10), st.floats(-5, 5))
def test_select_invariant_under_increasing_maps(vals, scale, shift):
    base = _sel(*vals)
    mapped = _sel(*[scale * v + shift for v in vals])
    if not base.tie and not mapped.tie:
        assert base.selected == mapped.selected
    cubed = _sel(*[v ** 3 for v in vals])
    if not base.tie and not cubed.tie:
        assert base.selected == cubed.selected


# ---- answer_question


def _question_epochs(exam, rec, qid):
    return [e for e in preprocess(rec, PipelineConfig()) if e.question_id == qid]


def test_clean_question_selects_target(default_model, exam5, clean_session):
    for q in exam5.questions:
        sel = answer_question(default_model, _question_epochs(exam5, clean_session, q.question_id))
        assert sel.selected == q.answer and not sel.tie


def test_zero_projection_model_ties_to_a(default_model, exam5, clean_session):
    m = dataclasses.replace(default_model, projection=np.zeros_like(default_model.projection))
    sel = answer_question(m, _question_epochs(exam5, clean_session, exam5.questions[0].question_id))
    assert (sel.selected, sel.tie, sel.margin) == ("A", True, 0.0)


def test_epoch_order_irrelevant(default_model, exam5, noisy_session):
    eps = _question_epochs(exam5, noisy_session, exam5.questions[1].question_id)
    shuffled = list(eps)
    random.Random(3).shuffle(shuffled)
    assert answer_question(default_model, eps) == answer_question(default_model, shuffled)
    assert answer_question(default_model, eps) == answer_question(default_model, list(eps))


def test_accuracy_non_decreasing_in_repetitions(default_model):
    exam = synthgen.make_exam(200, "reps", seed=8)
    key = synthgen.answer_key(exam)
    acc = []
    for reps in (1, 5, 10):
        cfg = synthgen.SynthConfig(seed=5, repetitions=reps, background_noise_uv_rms=12.0)
        acc.append(exam_mod.run_session(exam, default_model, synthgen.gen_session(exam, key, cfg)).grade_percent)
    inversions = [(a, b) for a, b in zip(acc, acc[1:]) if b < a]
    assert len(inversions) <= 1 and all(a - b <= 2 for a, b in inversions), acc
    assert acc[-1] > acc[0]
