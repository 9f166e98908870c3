"""
Taking an exam with the P300 answer selector
============================================

Author an exam, simulate a student who attends to chosen answers, grade it.
"""
# %%
import tempfile
from pathlib import Path

from bciexam import exam as exam_mod, lda, synthgen
from bciexam.exam import Exam, ExamStore, Question

questions = [
    Question("q1", "Which lobe handles vision?", {"A": "Frontal", "B": "Temporal", "C": "Occipital", "D": "Parietal"}, "C"),
    Question("q2", "P300 latency is about", {"A": "30 ms", "B": "300 ms", "C": "3 s", "D": "30 s"}, "B"),
    Question("q3", "LDA maximises", {"A": "Entropy", "B": "Margin", "C": "Likelihood", "D": "Between/within scatter"}, "D"),
    Question("q4", "Butterworth filters are", {"A": "Maximally flat", "B": "Equiripple", "C": "Linear phase", "D": "FIR"}, "A"),
]
exam = Exam("neuro101", "Neuro 101 quiz", questions)

# %%
# The exam database is a directory of JSON files.
store = ExamStore(Path(tempfile.mkdtemp()) / "exams")
store.put(exam)
print("stored exams:", store.list())

# %%
# Calibrate, then let the student deliberately answer q4 wrong.
cfg = synthgen.SynthConfig(seed=5)
model = lda.fit(synthgen.gen_training_set(cfg, 50, 150))
intended = {"q1": "C", "q2": "B", "q3": "D", "q4": "B"}
rec = synthgen.gen_session(store.get("neuro101"), intended, cfg)

result = exam_mod.run_session(exam, model, rec, student_id="s-001")
for q, s in zip(exam.questions, result.selections):
    print(f"{q.question_id}: picked {s.selected} (key {q.answer}) margin {s.margin:.2f}")
print(f"grade {result.grade_percent:.1f}% ({result.n_correct}/{len(exam.questions)})")
