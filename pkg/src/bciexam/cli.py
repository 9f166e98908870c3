"""Command-line entry point: ``bciexam {synth,train,exam-run,sweep}``.

Exit codes: 0 success, 2 usage/config error, 3 domain error, 4 I/O error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import exam as exam_mod
from . import lda, robustness, signal_core, synthgen
from .config import build_config, load_config_file
from .errors import ConfigError, DomainError

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_IO = 0, 2, 3, 4


class _NotFound(Exception):
    pass


def _input(path, kind):
    p = Path(path)
    if not p.is_file():
        raise _NotFound(f"{kind} not found: {path}")
    return p


def _config(args, **overrides):
    file_values = load_config_file(_input(args.config, "config")) if args.config else {}
    overrides["seed"] = args.seed
    return build_config(file_values, overrides)


def cmd_synth(args):
    exam = exam_mod.load_exam(_input(args.exam, "exam"))
    cfg = _config(args, repetitions=args.repetitions, background_noise_uv_rms=args.noise_rms)
    targets = synthgen.answer_key(exam)
    if args.answers:
        if len(args.answers) != len(exam.questions):
            raise ConfigError("answers", f"expected {len(exam.questions)} letters")
        targets = dict(zip(exam.question_ids, args.answers.upper()))
    rec = synthgen.gen_session(exam, targets, cfg.synth)
    ds = synthgen.gen_training_set(cfg.synth, cfg.n_target, cfg.n_nontarget, cfg.pipeline)
    signal_core.save_recording(rec, args.out_recording)
    lda.save_dataset(ds, args.out_training)
    print(
        f"synth: exam={exam.exam_id} questions={len(exam.questions)} events={len(rec.events)} "
        f"samples={rec.n_samples} training={len(ds.labels)}x{ds.d} seed={cfg.seed}"
    )
    return EXIT_OK


def cmd_train(args):
    ds = lda.load_dataset(_input(args.training, "training set"))
    cfg = _config(args, shrinkage=args.shrinkage, sb_weighting=args.weighting)
    model = lda.fit(ds, cfg.shrinkage, cfg.sb_weighting)
    lda.save_model(model, args.model_out)
    print(f"train_acc={lda.accuracy(model, ds):.2f}")
    return EXIT_OK


def cmd_exam_run(args):
    exam = exam_mod.load_exam(_input(args.exam, "exam"))
    model = lda.load_model(_input(args.model, "model"))
    rec = signal_core.load_recording(_input(args.recording, "recording"))
    cfg = _config(args, student_id=args.student_id)
    result = exam_mod.run_session(exam, model, rec, cfg.pipeline, cfg.student_id)
    exam_mod.save_result(result, args.result_out)
    print(f"grade={result.grade_percent:.2f} correct={result.n_correct}/{len(exam.questions)}")
    return EXIT_OK


def cmd_sweep(args):
    exam = exam_mod.load_exam(_input(args.exam, "exam"))
    model = lda.load_model(_input(args.model, "model"))
    sessions = [signal_core.load_recording(_input(p, "recording")) for p in args.recording]
    cfg = _config(args)
    try:
        levels = robustness.parse_levels(args.levels)
    except ValueError as exc:
        raise ConfigError("levels", str(exc)) from exc
    if args.trials < 1:
        raise ConfigError("trials", "must be >= 1")
    report = robustness.noise_sweep(model, exam, sessions, levels, args.trials, cfg.seed, cfg.pipeline)
    if args.csv:
        robustness.write_report_csv(report, args.csv)
    if args.svg:
        robustness.render_curve_svg(report, args.svg)
    print(
        f"sweep: levels={len(levels)} trials={args.trials} clean={report.clean_accuracy_pct:.2f} "
        f"last={report.accuracy_pct[-1]:.2f}"
    )
    return EXIT_OK


def build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--seed", type=int, default=None, help="unsigned 64-bit seed")
    shared.add_argument("--config", default=None, help="flat JSON config file")

    p = argparse.ArgumentParser(prog="bciexam", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", parents=[shared], help="generate a synthetic session and training set")
    s.add_argument("--exam", required=True)
    s.add_argument("--out-recording", required=True)
    s.add_argument("--out-training", required=True)
    s.add_argument("--answers", help="intended answers, one letter per question (default: answer key)")
    s.add_argument("--repetitions", type=int)
    s.add_argument("--noise-rms", type=float)
    s.set_defaults(func=cmd_synth)

    t = sub.add_parser("train", parents=[shared], help="fit the LDA model")
    t.add_argument("--training", required=True)
    t.add_argument("--model-out", required=True)
    t.add_argument("--shrinkage", type=float)
    t.add_argument("--weighting", choices=lda.WEIGHTINGS)
    t.set_defaults(func=cmd_train)

    e = sub.add_parser("exam-run", parents=[shared], help="answer and grade an exam session")
    e.add_argument("--exam", required=True)
    e.add_argument("--model", required=True)
    e.add_argument("--recording", required=True)
    e.add_argument("--result-out", required=True)
    e.add_argument("--student-id")
    e.set_defaults(func=cmd_exam_run)

    w = sub.add_parser("sweep", parents=[shared], help="accuracy versus injected noise")
    w.add_argument("--exam", required=True)
    w.add_argument("--model", required=True)
    w.add_argument("--recording", required=True, action="append", help="repeatable")
    w.add_argument("--levels", default="0..100")
    w.add_argument("--trials", type=int, default=5)
    w.add_argument("--csv")
    w.add_argument("--svg")
    w.set_defaults(func=cmd_sweep)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (_NotFound, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
