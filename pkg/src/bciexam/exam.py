"""Multiple-choice exams, the on-disk exam store, session grading."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

from .errors import DuplicateQuestionId, MissingQuestionEpochs, QuestionMismatch, SchemaError
from .signal_core import OPTIONS, PipelineConfig, Recording, preprocess, stack_epochs, feature_matrix
from .speller import AnswerSelection, answer_from_scores
from .lda import LdaModel, score_matrix


@dataclass(frozen=True)
class Question:
    question_id: str
    stem: str
    options: dict  # "A".."D" -> text
    answer: str


@dataclass(frozen=True)
class Exam:
    exam_id: str
    title: str
    questions: tuple

    def __post_init__(self):
        object.__setattr__(self, "questions", tuple(self.questions))
        if not self.questions:
            raise SchemaError("questions", "at least one question is required")
        seen = set()
        for i, q in enumerate(self.questions):
            if q.question_id in seen:
                raise DuplicateQuestionId(f"questions[{i}].question_id", q.question_id)
            seen.add(q.question_id)

    @property
    def question_ids(self):
        return [q.question_id for q in self.questions]


@dataclass(frozen=True)
class SessionResult:
    exam_id: str
    student_id: str
    selections: tuple
    grade_percent: float
    n_correct: int


# --------------------------------------------------------------------------
# JSON


def _str(obj, key, path):
    if not isinstance(obj, dict):
        raise SchemaError(path or "$", "expected an object")
    if key not in obj:
        raise SchemaError(f"{path}.{key}" if path else key, "missing")
    if not isinstance(obj[key], str):
        raise SchemaError(f"{path}.{key}" if path else key, "expected a string")
    return obj[key]


def exam_from_dict(d) -> Exam:
    exam_id = _str(d, "exam_id", "")
    title = _str(d, "title", "")
    qs = d.get("questions")
    if not isinstance(qs, list):
        raise SchemaError("questions", "missing or not a list")
    questions = []
    for i, q in enumerate(qs):
        path = f"questions[{i}]"
        qid = _str(q, "question_id", path)
        stem = _str(q, "stem", path)
        opts = q.get("options")
        if not isinstance(opts, dict):
            raise SchemaError(f"{path}.options", "missing or not an object")
        for letter in OPTIONS:
            if letter not in opts:
                raise SchemaError(f"{path}.options.{letter}", "missing")
            if not isinstance(opts[letter], str) or not opts[letter]:
                raise SchemaError(f"{path}.options.{letter}", "must be a nonempty string")
        extra = sorted(set(opts) - set(OPTIONS))
        if extra:
            raise SchemaError(f"{path}.options.{extra[0]}", "unexpected option")
        answer = _str(q, "answer", path)
        if answer not in OPTIONS:
            raise SchemaError(f"{path}.answer", f"must be one of A-D, got {answer!r}")
        questions.append(Question(qid, stem, {k: opts[k] for k in OPTIONS}, answer))
    return Exam(exam_id, title, questions)


def exam_to_dict(exam: Exam) -> dict:
    return {
        "exam_id": exam.exam_id,
        "title": exam.title,
        "questions": [
            {
                "question_id": q.question_id,
                "stem": q.stem,
                "options": {k: q.options[k] for k in OPTIONS},
                "answer": q.answer,
            }
            for q in exam.questions
        ],
    }


def _dump(obj, path):
    text = json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    Path(path).write_text(text, encoding="utf-8")


def save_exam(exam: Exam, path) -> None:
    _dump(exam_to_dict(exam), path)


def load_exam(path) -> Exam:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"invalid JSON: {exc}") from exc
    return exam_from_dict(data)


class ExamStore:
    """Directory of ``<exam_id>.json`` files."""

    def __init__(self, root):
        self.root = Path(root)

    def path_for(self, exam_id):
        if not exam_id or os.sep in exam_id or exam_id.startswith("."):
            raise SchemaError("exam_id", f"not usable as a file name: {exam_id!r}")
        return self.root / f"{exam_id}.json"

    def put(self, exam: Exam):
        self.root.mkdir(parents=True, exist_ok=True)
        save_exam(exam, self.path_for(exam.exam_id))

    def get(self, exam_id) -> Exam:
        return load_exam(self.path_for(exam_id))

    def list(self):
        if not self.root.is_dir():
            return []
        return sorted(p.stem for p in self.root.glob("*.json"))


def result_to_dict(result: SessionResult) -> dict:
    return {
        "exam_id": result.exam_id,
        "student_id": result.student_id,
        "grade_percent": result.grade_percent,
        "n_correct": result.n_correct,
        "selections": [
            {"question_id": s.question_id, "selected": s.selected, "margin": s.margin, "tie": s.tie}
            for s in result.selections
        ],
    }


def result_from_dict(d) -> SessionResult:
    sels = tuple(
        AnswerSelection(s["question_id"], s["selected"], float(s["margin"]), bool(s["tie"]))
        for s in d["selections"]
    )
    return SessionResult(d["exam_id"], d["student_id"], sels, float(d["grade_percent"]), int(d["n_correct"]))


def save_result(result: SessionResult, path) -> None:
    _dump(result_to_dict(result), path)


def load_result(path) -> SessionResult:
    with open(path, encoding="utf-8") as fh:
        return result_from_dict(json.load(fh))


# --------------------------------------------------------------------------
# grading and sessions


def grade(exam: Exam, selections, student_id: str = "student") -> SessionResult:
    selections = tuple(selections)
    if len(selections) != len(exam.questions):
        raise QuestionMismatch(
            f"{len(selections)} selections for {len(exam.questions)} questions"
        )
    n_correct = 0
    for i, (q, s) in enumerate(zip(exam.questions, selections)):
        if s.question_id != q.question_id:
            raise QuestionMismatch(
                f"selection {i} is for {s.question_id!r}, exam expects {q.question_id!r}"
            )
        n_correct += s.selected == q.answer
    return SessionResult(
        exam.exam_id, student_id, selections, 100.0 * n_correct / len(exam.questions), n_correct
    )


def group_epochs(exam: Exam, epochs) -> list:
    """Epochs per exam question, in exam order.

    Raises QuestionMismatch for epochs of questions the exam does not have,
    and MissingQuestionEpochs for the first question without any.
    """
    by_q = {}
    for e in epochs:
        by_q.setdefault(e.question_id, []).append(e)
    unknown = [qid for qid in by_q if qid not in set(exam.question_ids)]
    if unknown:
        raise QuestionMismatch(
            f"recording has events for question(s) not in exam {exam.exam_id!r}: {unknown[:5]}"
        )
    groups = []
    for qid in exam.question_ids:
        if qid not in by_q:
            raise MissingQuestionEpochs(qid)
        groups.append(by_q[qid])
    return groups


def answer_all(model: LdaModel, groups, standardize=True) -> list:
    out = []
    for group in groups:
        X = feature_matrix(stack_epochs(group), standardize)
        out.append(
            answer_from_scores(group[0].question_id, [e.option for e in group], score_matrix(model, X))
        )
    return out


def run_session(
    exam: Exam,
    model: LdaModel,
    recording: Recording,
    config: PipelineConfig = PipelineConfig(),
    student_id: str = "student",
) -> SessionResult:
    """Preprocess, segment, answer every question, grade."""
    if not recording.events:
        raise MissingQuestionEpochs(exam.questions[0].question_id)
    groups = group_epochs(exam, preprocess(recording, config))
    return grade(exam, answer_all(model, groups, config.standardize), student_id)
