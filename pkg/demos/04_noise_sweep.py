"""
Accuracy as noise is blended into the evaluation epochs
=======================================================

The model is trained clean; every evaluation epoch is mixed with
RMS-matched white noise at 0..100 %.  Writes a CSV and an SVG chart.
"""
# %%
import sys
from pathlib import Path

from bciexam import lda, robustness, synthgen

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
out.mkdir(parents=True, exist_ok=True)

cfg = synthgen.SynthConfig(seed=2024)
model = lda.fit(synthgen.gen_training_set(cfg, 50, 150))
exam = synthgen.make_exam(20, "sweep", seed=2024)
key = synthgen.answer_key(exam)
sessions = [synthgen.gen_session(exam, key, synthgen.SynthConfig(seed=7000 + i)) for i in range(4)]

# %%
report = robustness.noise_sweep(model, exam, sessions, range(0, 101, 5), trials=5, seed=77)
for level, acc in zip(report.levels, report.accuracy_pct):
    print(f"{level:3d}% noise  {acc:6.2f}%  " + "#" * int(acc / 2))

# %%
robustness.write_report_csv(report, out / "noise_sweep.csv")
robustness.render_curve_svg(report, out / "noise_sweep.svg")
print("wrote", out / "noise_sweep.csv", "and", out / "noise_sweep.svg")
