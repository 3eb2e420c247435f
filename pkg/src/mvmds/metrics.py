"""Embedding quality metrics: retrieval (NN/FT/ST/DCG) and clustering
(ACC/NMI/Purity) with a deterministic k-means.

Rankings break distance ties by ascending point index, so every score is
a pure function of the embedding and the labels.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist

from .errors import DimensionMismatchError, KOutOfRangeError, LengthMismatchError


@dataclass(frozen=True, eq=False)
class LabeledEmbedding:
    """Coordinates plus integer class labels, aligned by row."""

    x: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        labels = np.array(self.labels, dtype=int)
        if x.ndim != 2:
            raise DimensionMismatchError("coordinates must be 2-d")
        if labels.ndim != 1 or labels.size != x.shape[0]:
            raise LengthMismatchError(
                f"{labels.size} labels for {x.shape[0]} points"
            )
        x.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return self.x.shape[0]


@dataclass(frozen=True)
class RetrievalScores:
    """Mean NN / FT / ST / DCG over all queries, each in [0, 1].

    ft_st_skipped counts queries whose class is a singleton; those are
    excluded from the FT and ST means (they are undefined there).
    """

    nn: float
    ft: float
    st: float
    dcg: float
    ft_st_skipped: int = 0


@dataclass(frozen=True)
class ClusteringScores:
    acc: float
    nmi: float
    purity: float


def retrieval_scores(emb: LabeledEmbedding) -> RetrievalScores:
    """Labelled nearest-neighbor retrieval quality of an embedding.

    Every point queries the rest, ranked by Euclidean distance (ties by
    ascending index).  With C the query's class size: NN is the top-1
    class match; FT is the same-class fraction in the top C-1; ST in the
    top 2(C-1), capped at 1; DCG scores the whole ranking with the query
    itself counted as the guaranteed rank-1 hit and is normalized by the
    ideal ranking of the same class size.
    """
    n = emb.n
    if n < 2:
        raise DimensionMismatchError("retrieval needs at least 2 points")
    d = cdist(emb.x, emb.x)
    labels = emb.labels
    _, inverse, class_counts = np.unique(labels, return_inverse=True, return_counts=True)
    # discount for combined rank j = non-self rank + 1 (self occupies rank 1)
    discounts = 1.0 / np.log2(np.arange(2, n + 1))
    ideal = {}
    for c in np.unique(class_counts):
        ideal[int(c)] = 1.0 + discounts[: c - 1].sum()

    indices = np.arange(n)
    nn_sum = 0.0
    ft_sum = 0.0
    st_sum = 0.0
    dcg_sum = 0.0
    skipped = 0
    for q in range(n):
        order = np.lexsort((indices, d[q]))
        order = order[order != q]
        rel = labels[order] == labels[q]
        c = int(class_counts[inverse[q]])
        nn_sum += 1.0 if rel[0] else 0.0
        if c >= 2:
            ft_sum += float(rel[: c - 1].sum()) / (c - 1)
            st_sum += min(1.0, float(rel[: 2 * (c - 1)].sum()) / (c - 1))
        else:
            skipped += 1
        dcg_sum += (1.0 + float(np.sum(rel * discounts))) / ideal[c]

    scored = n - skipped
    return RetrievalScores(
        nn=nn_sum / n,
        ft=ft_sum / scored if scored else 0.0,
        st=st_sum / scored if scored else 0.0,
        dcg=dcg_sum / n,
        ft_st_skipped=skipped,
    )


def _kmeans_pp_centers(x: np.ndarray, k: int, rng) -> np.ndarray:
    n = x.shape[0]
    centers = np.empty((k, x.shape[1]))
    centers[0] = x[int(rng.integers(n))]
    d2 = ((x - centers[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = float(d2.sum())
        if total > 0:
            idx = int(rng.choice(n, p=d2 / total))
        else:
            idx = int(rng.integers(n))
        centers[c] = x[idx]
        d2 = np.minimum(d2, ((x - centers[c]) ** 2).sum(axis=1))
    return centers


def _lloyd(x: np.ndarray, k: int, rng, max_iter: int = 300):
    n = x.shape[0]
    centers = _kmeans_pp_centers(x, k, rng)
    labels = None
    for _ in range(max_iter):
        d2 = cdist(x, centers, "sqeuclidean")
        new_labels = d2.argmin(axis=1)
        assigned = d2[np.arange(n), new_labels].copy()
        for c in range(k):
            if not np.any(new_labels == c):
                far = int(assigned.argmax())
                new_labels[far] = c
                assigned[far] = -1.0  # claimed, never re-picked
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for c in range(k):
            members = labels == c
            if members.any():
                centers[c] = x[members].mean(axis=0)
    wcss = float(((x - centers[labels]) ** 2).sum())
    return labels, wcss


def kmeans(x, k: int, seed: int, restarts: int = 10) -> np.ndarray:
    """Lloyd's algorithm with k-means++ seeding, best of `restarts` by
    within-cluster sum of squares.  Deterministic given the seed; empty
    clusters are refilled with the point farthest from its centroid."""
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    if not 1 <= k <= n:
        raise KOutOfRangeError(f"k={k} outside [1, {n}]")
    if restarts < 1:
        raise KOutOfRangeError(f"restarts must be >= 1, got {restarts}")
    rng = np.random.default_rng(seed)
    best_labels = None
    best_wcss = np.inf
    for _ in range(restarts):
        labels, wcss = _lloyd(x, k, rng)
        if wcss < best_wcss:
            best_labels, best_wcss = labels, wcss
    return best_labels


def clustering_scores(pred, truth) -> ClusteringScores:
    """Agreement between a predicted partition and true labels.

    ACC maximizes the matched fraction over cluster-class assignments
    (Hungarian method); NMI uses the symmetric sqrt normalization with
    natural logs and 0/0 -> 0; Purity is the dominant-class fraction.
    """
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape or pred.ndim != 1:
        raise LengthMismatchError(
            f"pred has shape {pred.shape}, truth has shape {truth.shape}"
        )
    n = pred.size
    if n == 0:
        raise LengthMismatchError("empty partitions")
    _, pi = np.unique(pred, return_inverse=True)
    _, ti = np.unique(truth, return_inverse=True)
    conf = np.zeros((pi.max() + 1, ti.max() + 1))
    np.add.at(conf, (pi, ti), 1.0)

    rows, cols = linear_sum_assignment(-conf)
    acc = float(conf[rows, cols].sum()) / n
    purity = float(conf.max(axis=1).sum()) / n

    joint = conf / n
    pr = joint.sum(axis=1)
    pc = joint.sum(axis=0)
    nz = joint > 0
    mi = float(np.sum(joint[nz] * np.log(joint[nz] / np.outer(pr, pc)[nz])))
    hp = -float(np.sum(pr[pr > 0] * np.log(pr[pr > 0])))
    ht = -float(np.sum(pc[pc > 0] * np.log(pc[pc > 0])))
    if hp <= 0.0 or ht <= 0.0:
        nmi = 0.0
    else:
        nmi = min(1.0, max(0.0, mi / np.sqrt(hp * ht)))
    return ClusteringScores(acc=acc, nmi=nmi, purity=purity)
