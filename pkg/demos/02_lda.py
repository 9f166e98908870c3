"""
Fisher LDA on P300 features
===========================

Fit the shrunk two-class discriminant and check it against brute force.
"""
# %%
import numpy as np

from bciexam import lda, synthgen

ds = synthgen.gen_training_set(synthgen.SynthConfig(seed=3), n_target=50, n_nontarget=150)
print("classes:", ds.classes, "dimension:", ds.d)

# %%
# Paper-style between-class scatter (no count weighting) versus count-weighted.
for weighting in lda.WEIGHTINGS:
    model = lda.fit(ds, shrinkage=1e-3, weighting=weighting)
    print(f"{weighting:17s} train accuracy {lda.accuracy(model, ds):.1f}%  bias {model.bias:+.3f}")

# %%
# No random direction beats the fitted one on the regularised Rayleigh quotient.
model = lda.fit(ds)
sp = lda.scatter_matrices(ds)
s_w, _ = lda.regularized_within(sp.s_w, model.shrinkage_used)
best = lda.rayleigh_quotient(model.projection[0], sp.s_b, s_w)
g = np.random.default_rng(0)
probes = g.normal(size=(2000, ds.d))
rand = max(lda.rayleigh_quotient(w, sp.s_b, s_w) for w in probes)
print(f"fitted quotient {best:.4g}, best of 2000 random directions {rand:.4g}")

# %%
# Three or more classes go through Cholesky whitening and Jacobi rotations.
centres = g.normal(scale=4, size=(3, 6))
X = np.vstack([g.normal(size=(30, 6)) + c for c in centres])
multi = lda.LabeledDataset(X, [i // 30 for i in range(90)])
m3 = lda.fit(multi)
print("projection shape:", m3.projection.shape, "accuracy:", lda.accuracy(m3, multi))
