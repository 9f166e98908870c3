"""Linear discriminant analysis from scatter matrices.

Class means, within/between scatter, and the projection maximising
``w' S_B w / w' S_W w``.  The within-class scatter is shrunk towards a
scaled identity, ``S_W + lam * (trace(S_W) / d) * I``, because it is
singular whenever the feature dimension exceeds the number of epochs.

Binary problems use the closed form ``w ~ S_W^-1 (mu_pos - mu_neg)``.
Multiclass problems whiten by the Cholesky factor of the regularised
``S_W`` and diagonalise the whitened ``S_B`` with cyclic Jacobi rotations.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import (
    DegenerateClasses,
    DimensionMismatch,
    EmptyClass,
    SchemaError,
    SingularWithin,
)

PAPER_UNWEIGHTED = "paper_unweighted"
COUNT_WEIGHTED = "count_weighted"
WEIGHTINGS = (PAPER_UNWEIGHTED, COUNT_WEIGHTED)


def _label_key(label):
    return (type(label).__name__, str(label))


@dataclass(frozen=True)
class LabeledDataset:
    """Feature matrix ``[n, d]`` with one label per row.

    Class order is the sorted order of the distinct labels; for binary
    problems the last class is the positive ("target") class.
    """

    vectors: np.ndarray
    labels: tuple

    def __post_init__(self):
        x = np.array(self.vectors, dtype=float)
        if x.ndim != 2:
            raise DimensionMismatch(f"vectors must be 2-d, got shape {x.shape}")
        x.setflags(write=False)
        object.__setattr__(self, "vectors", x)
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.labels) != x.shape[0]:
            raise DimensionMismatch(f"{x.shape[0]} vectors but {len(self.labels)} labels")

    @classmethod
    def from_features(cls, feats, labels):
        return cls(np.stack([f.values for f in feats]), labels)

    @property
    def d(self):
        return self.vectors.shape[1]

    @property
    def classes(self):
        return sorted(set(self.labels), key=_label_key)

    @property
    def C(self):
        return len(set(self.labels))

    def validate(self):
        if self.C < 2:
            raise EmptyClass(f"need at least 2 classes, found {self.C}")
        for c in self.classes:
            n = sum(_label_key(l) == _label_key(c) for l in self.labels)
            if n < 2:
                raise EmptyClass(f"class {c!r} has {n} sample(s); at least 2 required")


@dataclass(frozen=True)
class ScatterPair:
    s_w: np.ndarray
    s_b: np.ndarray
    grand_mean: np.ndarray
    class_means: np.ndarray
    class_counts: tuple
    weighting: str = PAPER_UNWEIGHTED


@dataclass(frozen=True)
class LdaModel:
    projection: np.ndarray  # [k, d], one unit-norm direction per row
    class_means_projected: np.ndarray  # [C, k]
    bias: float
    shrinkage_used: float
    sb_weighting: str
    class_labels: tuple

    @property
    def feature_dim(self):
        return self.projection.shape[1]

    @property
    def is_binary(self):
        return len(self.class_labels) == 2


def _split(dataset):
    dataset.validate()
    keys = [_label_key(l) for l in dataset.labels]
    groups = []
    for c in dataset.classes:
        mask = np.array([k == _label_key(c) for k in keys], dtype=bool)
        groups.append(dataset.vectors[mask])
    return groups


def class_means(dataset: LabeledDataset):
    """Per-class means (divided by each class's own count), counts, grand mean."""
    groups = _split(dataset)
    means = np.stack([g.mean(axis=0) for g in groups])
    counts = tuple(int(g.shape[0]) for g in groups)
    return means, counts, dataset.vectors.mean(axis=0)


def scatter_matrices(dataset: LabeledDataset, weighting: str = PAPER_UNWEIGHTED) -> ScatterPair:
    if weighting not in WEIGHTINGS:
        raise ValueError(f"weighting must be one of {WEIGHTINGS}")
    groups = _split(dataset)
    d = dataset.d
    grand = dataset.vectors.mean(axis=0)
    s_w = np.zeros((d, d))
    s_b = np.zeros((d, d))
    means = []
    for g in groups:
        mu = g.mean(axis=0)
        means.append(mu)
        centred = g - mu
        s_w += centred.T @ centred
        diff = (mu - grand)[:, None]
        s_b += (g.shape[0] if weighting == COUNT_WEIGHTED else 1.0) * (diff @ diff.T)
    # exact symmetry; the products above are symmetric only up to rounding
    s_w = 0.5 * (s_w + s_w.T)
    s_b = 0.5 * (s_b + s_b.T)
    counts = tuple(int(g.shape[0]) for g in groups)
    return ScatterPair(s_w, s_b, grand, np.stack(means), counts, weighting)


def cholesky(a, pivot_floor):
    """Lower Cholesky factor; raises SingularWithin when a pivot is <= ``pivot_floor``."""
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    L = np.zeros_like(a)
    for j in range(n):
        pivot = a[j, j] - L[j, :j] @ L[j, :j]
        if not pivot > pivot_floor:
            raise SingularWithin(
                f"within-class scatter pivot {pivot:.3e} at index {j} is below "
                f"{pivot_floor:.3e}; increase shrinkage"
            )
        L[j, j] = np.sqrt(pivot)
        L[j + 1:, j] = (a[j + 1:, j] - L[j + 1:, :j] @ L[j, :j]) / L[j, j]
    return L


def jacobi_eigh(a, tol=1e-12, max_sweeps=100):
    """Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps until the off-diagonal Frobenius norm drops below
    ``tol * ||a||_F``.  Returns ``(eigenvalues, eigenvectors)`` sorted by
    descending eigenvalue, eigenvectors in columns.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    target = tol * np.linalg.norm(a)
    for _ in range(max_sweeps):
        off = np.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-18 * abs(diff):
                    # theta would overflow; small-angle limit of t
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = np.sign(theta) / (abs(theta) + np.hypot(theta, 1.0)) if theta else 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q].copy()
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
    w = np.diag(a).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def regularized_within(s_w, shrinkage):
    d = s_w.shape[0]
    scale = np.trace(s_w) / d
    return s_w + shrinkage * scale * np.eye(d), scale


def fit(dataset: LabeledDataset, shrinkage: float = 1e-3, weighting: str = PAPER_UNWEIGHTED) -> LdaModel:
    if shrinkage < 0:
        raise ValueError("shrinkage must be >= 0")
    sp = scatter_matrices(dataset, weighting)
    labels = tuple(dataset.classes)
    d = dataset.d
    spread = np.max(np.abs(sp.class_means - sp.grand_mean))
    if not spread > 1e-12 * max(np.max(np.abs(dataset.vectors)), np.finfo(float).tiny):
        raise DegenerateClasses("all class means coincide; between-class scatter is zero")
    s_w_reg, scale = regularized_within(sp.s_w, shrinkage)
    L = cholesky(s_w_reg, 1e-12 * scale)

    if len(labels) == 2:
        delta = sp.class_means[1] - sp.class_means[0]
        y = solve_triangular(L, delta, lower=True)
        w = solve_triangular(L.T, y, lower=False)
        w = w / np.linalg.norm(w)
        if w @ delta < 0:
            w = -w
        W = w[None, :]
        bias = float(-w @ (sp.class_means[0] + sp.class_means[1]) / 2.0)
    else:
        k = min(len(labels) - 1, d)
        # L^-1 S_B L^-T, then back-transform eigenvectors with L^-T
        tmp = solve_triangular(L, sp.s_b, lower=True)
        whitened = solve_triangular(L, tmp.T, lower=True)
        whitened = 0.5 * (whitened + whitened.T)
        _, vecs = jacobi_eigh(whitened)
        W = solve_triangular(L.T, vecs[:, :k], lower=False).T
        W = _orthonormal_rows(W)
        bias = 0.0
    W.setflags(write=False)
    projected = sp.class_means @ W.T
    return LdaModel(W, projected, bias, float(shrinkage), weighting, labels)


def _orthonormal_rows(W):
    """Modified Gram-Schmidt on rows, keeping each row's orientation and order."""
    out = np.array(W, dtype=float)
    for i in range(out.shape[0]):
        for j in range(i):
            out[i] -= (out[i] @ out[j]) * out[j]
        out[i] /= np.linalg.norm(out[i])
    return out


def _check_dim(model, x):
    x = np.asarray(getattr(x, "values", x), dtype=float)
    if x.shape[-1] != model.feature_dim:
        raise DimensionMismatch(f"expected {model.feature_dim} features, got {x.shape[-1]}")
    return x


def score(model: LdaModel, x) -> float:
    """``w . x + bias`` for a binary model; positive means target-like."""
    if not model.is_binary:
        raise ValueError("score is defined for binary models only")
    x = _check_dim(model, x)
    return float(model.projection[0] @ x + model.bias)


def score_matrix(model: LdaModel, X) -> np.ndarray:
    """Vectorised :func:`score` over the rows of ``X``."""
    X = _check_dim(model, X)
    return X @ model.projection[0] + model.bias


def classify(model: LdaModel, x):
    x = _check_dim(model, x)
    if model.is_binary:
        return model.class_labels[1] if score(model, x) > 0 else model.class_labels[0]
    z = model.projection @ x
    dist = np.sum((model.class_means_projected - z) ** 2, axis=1)
    return model.class_labels[int(np.argmin(dist))]


def accuracy(model: LdaModel, dataset: LabeledDataset) -> float:
    preds = [classify(model, x) for x in dataset.vectors]
    return 100.0 * sum(p == l for p, l in zip(preds, dataset.labels)) / len(preds)


def rayleigh_quotient(w, s_b, s_w):
    w = np.asarray(w, dtype=float)
    return float((w @ s_b @ w) / (w @ s_w @ w))


# --------------------------------------------------------------------------
# JSON


def model_to_dict(model: LdaModel) -> dict:
    return {
        "projection": model.projection.tolist(),
        "bias": model.bias,
        "shrinkage_used": model.shrinkage_used,
        "sb_weighting": model.sb_weighting,
        "feature_dim": model.feature_dim,
        "class_labels": list(model.class_labels),
        "class_means_projected": np.asarray(model.class_means_projected).tolist(),
    }


def model_from_dict(d: dict) -> LdaModel:
    for key in ("projection", "bias", "shrinkage_used", "sb_weighting", "feature_dim",
                "class_labels", "class_means_projected"):
        if key not in d:
            raise SchemaError(key, "missing")
    W = np.array(d["projection"], dtype=float)
    if W.ndim != 2 or W.shape[1] != d["feature_dim"]:
        raise SchemaError("projection", f"expected rows of length {d['feature_dim']}")
    if d["sb_weighting"] not in WEIGHTINGS:
        raise SchemaError("sb_weighting", f"must be one of {WEIGHTINGS}")
    W.setflags(write=False)
    return LdaModel(
        W,
        np.array(d["class_means_projected"], dtype=float),
        float(d["bias"]),
        float(d["shrinkage_used"]),
        d["sb_weighting"],
        tuple(d["class_labels"]),
    )


def save_model(model: LdaModel, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path) -> LdaModel:
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))


def dataset_to_dict(ds: LabeledDataset) -> dict:
    return {"feature_dim": ds.d, "labels": list(ds.labels), "vectors": ds.vectors.tolist()}


def dataset_from_dict(d: dict) -> LabeledDataset:
    for key in ("feature_dim", "labels", "vectors"):
        if key not in d:
            raise SchemaError(key, "missing")
    x = np.array(d["vectors"], dtype=float).reshape(len(d["vectors"]), d["feature_dim"])
    return LabeledDataset(x, d["labels"])


def save_dataset(ds: LabeledDataset, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(dataset_to_dict(ds), fh, separators=(",", ":"))
        fh.write("\n")


def load_dataset(path) -> LabeledDataset:
    with open(path, encoding="utf-8") as fh:
        return dataset_from_dict(json.load(fh))
