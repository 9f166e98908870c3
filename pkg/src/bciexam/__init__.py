"""P300 exam toolkit: EEG preprocessing, LDA, a four-option speller,
grading and noise-robustness sweeps, all offline and seeded."""
from .errors import *  # noqa: F401,F403
from .signal_core import (
    Epoch, FeatureVector, FilterSpec, PipelineConfig, Recording, StimulusEvent,
    apply_filter, band_power, decimate, design_bandpass, features, preprocess, segment,
)
from .lda import LabeledDataset, LdaModel, classify, fit, scatter_matrices, score
from .speller import AnswerSelection, answer_question, make_schedule
from .exam import Exam, Question, SessionResult, grade, load_exam, run_session, save_exam
from .synthgen import SynthConfig, gen_session, gen_training_set
from .robustness import SweepReport, inject_noise, noise_sweep

__version__ = "0.1.0"
