import numpy as np
import pytest

from bciexam import robustness as rb, synthgen
from bciexam.signal_core import Epoch, PipelineConfig, preprocess


@pytest.fixture(scope="module")
def epochs(noisy_session):
    return preprocess(noisy_session, PipelineConfig())


def test_level_zero_identity(epochs):
    gen = np.random.default_rng(0)
    assert rb.inject_noise(epochs[0], 0, gen) is epochs[0]


def test_level_out_of_range(epochs):
    with pytest.raises(ValueError):
        rb.inject_noise(epochs[0], 101, np.random.default_rng(0))


def test_level_100_decorrelates():
    # mean signed correlation; |corr| of two independent 60-sample vectors averages ~0.1 by itself
    g = np.random.default_rng(1)
    corrs = []
    for _ in range(1000):
        ep = Epoch("q", "A", g.normal(size=(15, 4)) + np.linspace(0, 3, 15)[:, None], 25.0)
        out = rb.inject_noise(ep, 100, g)
        corrs.append(np.corrcoef(out.data.ravel(), ep.data.ravel())[0, 1])
    assert abs(np.mean(corrs)) < 0.05


def test_level_50_rms_ratio():
    g = np.random.default_rng(2)
    for _ in range(1000):
        ep = Epoch("q", "A", g.normal(scale=g.uniform(0.1, 10), size=(15, 4)), 25.0)
        out = rb.inject_noise(ep, 50, g)
        ratio = np.sqrt(np.mean(out.data ** 2)) / np.sqrt(np.mean(ep.data ** 2))
        assert 0.5 <= ratio <= 1.3


def test_zero_epoch_gets_unit_rms_noise():
    ep = Epoch("q", "A", np.zeros((15, 4)), 25.0)
    out = rb.inject_noise(ep, 100, np.random.default_rng(3))
    assert np.sqrt(np.mean(out.data ** 2)) == pytest.approx(1.0, rel=1e-12)


def test_batch_matches_single(epochs):
    data = np.stack([e.data for e in epochs[:3]])
    a = rb.inject_noise_batch(data, 40, np.random.default_rng(4))
    assert a.shape == data.shape
    assert not np.array_equal(a, data)


# ---- sweep


@pytest.fixture(scope="module")
def sweep_inputs(default_model, exam5):
    key = synthgen.answer_key(exam5)
    sessions = [synthgen.gen_session(exam5, key, synthgen.SynthConfig(seed=40 + i)) for i in range(4)]
    return default_model, exam5, sessions


def test_level_zero_is_clean_accuracy(sweep_inputs):
    m, e, s = sweep_inputs
    r = rb.noise_sweep(m, e, s, [0], trials=3, seed=1)
    assert r.accuracy_pct == (r.clean_accuracy_pct,)


def test_level_100_near_chance(sweep_inputs):
    m, e, s = sweep_inputs
    r = rb.noise_sweep(m, e, s, [100], trials=20, seed=2)  # 5 q * 4 sessions * 20 = 400
    assert abs(r.accuracy_pct[0] - 25.0) <= 7.0


def test_sweep_deterministic_and_level_independent(sweep_inputs):
    m, e, s = sweep_inputs
    a = rb.noise_sweep(m, e, s, [0, 60, 90], trials=2, seed=3)
    b = rb.noise_sweep(m, e, s, [0, 60, 90], trials=2, seed=3)
    c = rb.noise_sweep(m, e, s, [90], trials=2, seed=3)
    assert a == b
    assert a.accuracy_pct[-1] == c.accuracy_pct[0]


def test_sweep_rejects_bad_levels(sweep_inputs):
    m, e, s = sweep_inputs
    with pytest.raises(ValueError):
        rb.noise_sweep(m, e, s, [10, 5], trials=1)
    with pytest.raises(ValueError):
        rb.noise_sweep(m, e, s, [0], trials=0)


def test_smoothed():
    np.testing.assert_allclose(rb.smoothed([0, 0, 5, 0, 0]), [5 / 3, 5 / 4, 1, 5 / 4, 5 / 3])


@pytest.mark.parametrize("spec,expected", [
    ("0..3", [0, 1, 2, 3]), ("0..100:25", [0, 25, 50, 75, 100]), ("0,50,100", [0, 50, 100]),
])
def test_parse_levels(spec, expected):
    assert rb.parse_levels(spec) == expected


@pytest.mark.parametrize("spec", ["0..101", "5..1", "", "a,b"])
def test_parse_levels_bad(spec):
    with pytest.raises(ValueError):
        rb.parse_levels(spec)


# ---- report files

REPORT = rb.SweepReport((0, 50), (91.0, 54.1234), 91.0, 5, 0)


def test_csv_two_levels(tmp_path):
    p = tmp_path / "r.csv"
    rb.write_report_csv(REPORT, p)
    assert p.read_text() == "noise_pct,accuracy_pct\n0,91.00\n50,54.12\n"


def test_report_files_byte_identical(tmp_path):
    for writer, ext in ((rb.write_report_csv, "csv"), (rb.render_curve_svg, "svg")):
        a, b = tmp_path / f"a.{ext}", tmp_path / f"b.{ext}"
        writer(REPORT, a)
        writer(REPORT, b)
        assert a.read_bytes() == b.read_bytes()


def test_csv_round_trip(tmp_path):
    r = rb.SweepReport(tuple(range(0, 101, 10)), tuple(np.linspace(91, 0, 11)), 91.0, 5, 0)
    p = tmp_path / "r.csv"
    rb.write_report_csv(r, p)
    rows = rb.read_report_csv(p)
    assert [l for l, _ in rows] == list(r.levels)
    assert [a for _, a in rows] == [round(a, 2) for a in r.accuracy_pct]


def test_svg_structure(tmp_path):
    import xml.etree.ElementTree as ET

    p = tmp_path / "r.svg"
    rb.render_curve_svg(REPORT, p)
    root = ET.parse(p).getroot()
    lines = root.findall("{http://www.w3.org/2000/svg}polyline")
    assert len(lines) == 1
    pts = [tuple(map(float, xy.split(","))) for xy in lines[0].get("points").split()]
    assert len(pts) == 2
    # x = 0 % sits on the y axis, 91 % accuracy sits 91 % of the way up the plot
    assert pts[0][0] == 60.0
    assert pts[0][1] == pytest.approx(420 - 60 - 300 * 0.91)
