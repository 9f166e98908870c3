import json

import pytest

from bciexam import cli, exam as exam_mod, lda, synthgen


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    exam_mod.save_exam(synthgen.make_exam(4, "cli", seed=1), d / "exam.json")
    assert cli.main(["synth", "--exam", str(d / "exam.json"), "--out-recording", str(d / "rec.json"),
                     "--out-training", str(d / "train.json"), "--seed", "5"]) == 0
    assert cli.main(["train", "--training", str(d / "train.json"), "--model-out", str(d / "model.json")]) == 0
    return d


def test_synth_outputs(workdir, capsys):
    out = workdir / "again"
    out.mkdir(exist_ok=True)
    rc = cli.main(["synth", "--exam", str(workdir / "exam.json"), "--out-recording", str(out / "r.json"),
                   "--out-training", str(out / "t.json"), "--seed", "5"])
    assert rc == 0
    assert (out / "r.json").read_bytes() == (workdir / "rec.json").read_bytes()
    assert (out / "t.json").read_bytes() == (workdir / "train.json").read_bytes()
    assert capsys.readouterr().out.count("\n") == 1


def test_synth_missing_exam(tmp_path, capsys):
    rc = cli.main(["synth", "--exam", str(tmp_path / "nope.json"), "--out-recording", str(tmp_path / "r"),
                   "--out-training", str(tmp_path / "t")])
    assert rc == 2
    assert "exam not found" in capsys.readouterr().err


def test_synth_bad_band(workdir, tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"high_cut_hz": 30.0}))
    rc = cli.main(["synth", "--exam", str(workdir / "exam.json"), "--out-recording", str(tmp_path / "r"),
                   "--out-training", str(tmp_path / "t"), "--config", str(cfg)])
    assert rc == 2
    assert "high_cut_hz" in capsys.readouterr().err
    cfg.write_text(json.dumps({"low_cut_hz": 0.0}))
    assert cli.main(["synth", "--exam", str(workdir / "exam.json"), "--out-recording", str(tmp_path / "r"),
                     "--out-training", str(tmp_path / "t"), "--config", str(cfg)]) == 2
    assert "low_cut_hz" in capsys.readouterr().err


def test_config_precedence(workdir, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"seed": 1, "repetitions": 3}))
    rc = cli.main(["synth", "--exam", str(workdir / "exam.json"), "--out-recording", str(tmp_path / "r.json"),
                   "--out-training", str(tmp_path / "t.json"), "--config", str(cfg), "--repetitions", "2"])
    assert rc == 0
    rec = json.loads((tmp_path / "r.json").read_text())
    assert len(rec["events"]) == 4 * 4 * 2


def test_train_reports_accuracy(workdir, tmp_path, capsys):
    rc = cli.main(["train", "--training", str(workdir / "train.json"), "--model-out", str(tmp_path / "m.json")])
    assert rc == 0
    line = capsys.readouterr().out.strip()
    model = lda.load_model(tmp_path / "m.json")
    expected = lda.accuracy(model, lda.load_dataset(workdir / "train.json"))
    assert line == f"train_acc={expected:.2f}"


def test_train_degenerate(tmp_path, capsys):
    p = tmp_path / "deg.json"
    p.write_text(json.dumps({"feature_dim": 2, "labels": ["a", "a", "b", "b"],
                             "vectors": [[0, 0], [2, 2], [2, 0], [0, 2]]}))
    assert cli.main(["train", "--training", str(p), "--model-out", str(tmp_path / "m.json")]) == 3
    assert "DegenerateClasses" in capsys.readouterr().err


def test_exam_run_full_marks(workdir, tmp_path):
    noiseless = tmp_path / "clean.json"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"background_noise_uv_rms": 0.0}))
    assert cli.main(["synth", "--exam", str(workdir / "exam.json"), "--out-recording", str(noiseless),
                     "--out-training", str(tmp_path / "t.json"), "--config", str(cfg)]) == 0
    out = tmp_path / "res.json"
    assert cli.main(["exam-run", "--exam", str(workdir / "exam.json"), "--model", str(workdir / "model.json"),
                     "--recording", str(noiseless), "--result-out", str(out)]) == 0
    assert json.loads(out.read_text())["grade_percent"] == 100.0


def test_exam_run_mismatch(workdir, tmp_path, capsys):
    other = synthgen.make_exam(4, "other", seed=1)
    other = exam_mod.Exam("other", "o", [exam_mod.Question("z" + q.question_id, q.stem, q.options, q.answer)
                                          for q in other.questions])
    exam_mod.save_exam(other, tmp_path / "other.json")
    rc = cli.main(["exam-run", "--exam", str(tmp_path / "other.json"), "--model", str(workdir / "model.json"),
                   "--recording", str(workdir / "rec.json"), "--result-out", str(tmp_path / "r.json")])
    assert rc == 3
    assert "QuestionMismatch" in capsys.readouterr().err


def sweep(workdir, tmp_path, name, levels, trials="5"):
    csv, svg = tmp_path / f"{name}.csv", tmp_path / f"{name}.svg"
    rc = cli.main(["sweep", "--exam", str(workdir / "exam.json"), "--model", str(workdir / "model.json"),
                   "--recording", str(workdir / "rec.json"), "--levels", levels, "--trials", trials,
                   "--seed", "9", "--csv", str(csv), "--svg", str(svg)])
    assert rc == 0
    return csv, svg


def test_sweep_full_range(workdir, tmp_path):
    csv, svg = sweep(workdir, tmp_path, "full", "0..100")
    assert len(csv.read_text().splitlines()) == 102
    assert svg.read_text().startswith("<svg")


def test_sweep_three_levels(workdir, tmp_path):
    csv, _ = sweep(workdir, tmp_path, "three", "0,50,100")
    assert [l.split(",")[0] for l in csv.read_text().splitlines()[1:]] == ["0", "50", "100"]


def test_sweep_bad_levels(workdir, tmp_path, capsys):
    rc = cli.main(["sweep", "--exam", str(workdir / "exam.json"), "--model", str(workdir / "model.json"),
                   "--recording", str(workdir / "rec.json"), "--levels", "0..200"])
    assert rc == 2
    assert "levels" in capsys.readouterr().err


def test_unwritable_output(workdir, tmp_path):
    rc = cli.main(["train", "--training", str(workdir / "train.json"),
                   "--model-out", str(tmp_path / "missing-dir" / "m.json")])
    assert rc == 4


def test_usage_error():
    with pytest.raises(SystemExit) as info:
        cli.main(["train"])
    assert info.value.code == 2
