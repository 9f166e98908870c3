import pytest

from bciexam import lda, synthgen


@pytest.fixture(scope="session")
def default_model():
    ds = synthgen.gen_training_set(synthgen.SynthConfig(seed=11), 50, 150)
    return lda.fit(ds)


@pytest.fixture(scope="session")
def exam5():
    return synthgen.make_exam(5, "exam5", seed=2)


@pytest.fixture(scope="session")
def clean_session(exam5):
    cfg = synthgen.SynthConfig(seed=21, background_noise_uv_rms=0.0)
    return synthgen.gen_session(exam5, synthgen.answer_key(exam5), cfg)


@pytest.fixture(scope="session")
def noisy_session(exam5):
    return synthgen.gen_session(exam5, synthgen.answer_key(exam5), synthgen.SynthConfig(seed=22))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
