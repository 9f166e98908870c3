"""
Preprocessing a synthetic P300 recording
========================================

Band-pass, decimate, cut post-stimulus epochs and look at what survives.
"""
# %%
# A five-question session at 250 Hz with the default 2 uV background noise.
import numpy as np

from bciexam import synthgen
from bciexam.signal_core import (
    FilterSpec, PipelineConfig, alpha_power, apply_filter, decimate,
    design_bandpass, frequency_response, segment,
)

exam = synthgen.make_exam(5, "demo", seed=1)
rec = synthgen.gen_session(exam, synthgen.answer_key(exam), synthgen.SynthConfig(seed=1))
print(f"{rec.n_samples} samples x {rec.n_channels} channels, {len(rec.events)} flashes")

# %%
# The default chain keeps 0.5-12 Hz so that a decimation by 10 (to 25 Hz)
# stays below the new Nyquist frequency.
cfg = PipelineConfig()
coeffs = design_bandpass(cfg.filter_spec, rec.sample_rate_hz)
for f in (0.0, 0.5, 3.0, 12.0, 20.0, 60.0):
    print(f"|H({f:5.1f} Hz)| = {abs(frequency_response(coeffs, [f])[0]):.4f}")

# %%
# The wider 0.5-30 Hz ERP band is available too, but cannot be decimated by 10.
wide = design_bandpass(FilterSpec(0.5, 30.0, 4), 250.0)
print("60 Hz attenuation:", -20 * np.log10(abs(frequency_response(wide, [60.0])[0])), "dB")

# %%
filtered = apply_filter(coeffs, rec)
small = decimate(filtered, cfg.decimation)
epochs = segment(small, cfg.window_s)
print(f"{len(epochs)} epochs of shape {epochs[0].data.shape} at {small.sample_rate_hz} Hz")

# %%
# Averaging target and non-target epochs separately shows the P300 bump,
# delayed a little by the causal filter.
tgt = np.mean([e.data for e in epochs if e.is_target], axis=0)[:, 0]
non = np.mean([e.data for e in epochs if not e.is_target], axis=0)[:, 0]
t_ms = 1000 * np.arange(tgt.size) / small.sample_rate_hz
for t, a, b in zip(t_ms, tgt, non):
    print(f"{t:6.0f} ms  target {a:+6.2f}  non-target {b:+6.2f}")

# %%
# Alpha (8-12 Hz) power per channel of the first epoch.
print("alpha power:", alpha_power(epochs[0]))
