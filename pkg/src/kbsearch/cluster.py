"""Cluster analysis: PCA to 2-D, seeded k-means, and facet-purity scoring.

The reducer is deterministic PCA over the column-centered covariance;
k-means uses k-means++ initialization from a seeded generator so runs
are bitwise reproducible.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInput, LengthMismatch, TooFewPoints


@dataclass(frozen=True)
class ReducedPoints:
    points: np.ndarray                      # n x 2, float64
    explained_variance_ratio: tuple[float, float]
    components: np.ndarray                  # 2 x d, orthonormal rows


@dataclass(frozen=True)
class ClusterAssignment:
    labels: np.ndarray
    centroids: np.ndarray
    inertia: float
    k: int
    seed: int
    inertia_history: tuple[float, ...] = field(default=(), compare=False)


def pca_reduce(matrix, out_dim: int = 2) -> ReducedPoints:
    """Project rows onto the top principal components of the covariance.

    Sign convention: each component's largest-magnitude entry is
    positive, so the projection is unique.
    """
    x = np.asarray(matrix, dtype=np.float64)
    if x.ndim != 2:
        raise DegenerateInput("input must be a 2-D matrix")
    n, d = x.shape
    if n < 2:
        raise DegenerateInput("need at least 2 rows")
    if d < out_dim:
        raise DegenerateInput(f"need at least {out_dim} columns")
    if not np.all(np.isfinite(x)):
        raise DegenerateInput("input contains non-finite values")

    centered = x - x.mean(axis=0)
    cov = centered.T @ centered / (n - 1)
    trace = float(np.trace(cov))
    if trace <= 0.0:
        raise DegenerateInput("zero covariance: all rows identical")

    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1][:out_dim]
    components = eigvecs[:, order].T.copy()          # out_dim x d
    for row in components:
        j = int(np.argmax(np.abs(row)))
        if row[j] < 0:
            row *= -1.0
    top_vals = np.clip(eigvals[order], 0.0, None)
    ratios = tuple(float(v / trace) for v in top_vals)
    return ReducedPoints(points=centered @ components.T,
                         explained_variance_ratio=ratios,
                         components=components)


def _kmeans_pp_init(points: np.ndarray, k: int, rng) -> np.ndarray:
    n = points.shape[0]
    centroids = np.empty((k, points.shape[1]), dtype=np.float64)
    centroids[0] = points[rng.integers(n)]
    dist_sq = ((points - centroids[0]) ** 2).sum(axis=1)
    for i in range(1, k):
        total = dist_sq.sum()
        if total > 0:
            idx = rng.choice(n, p=dist_sq / total)
        else:
            idx = rng.integers(n)
        centroids[i] = points[idx]
        dist_sq = np.minimum(dist_sq, ((points - centroids[i]) ** 2).sum(axis=1))
    return centroids


def kmeans(points, k: int = 10, seed: int = 0, max_iter: int = 300,
           tol: float = 1e-6) -> ClusterAssignment:
    """Lloyd's algorithm with k-means++ seeding and squared-Euclidean cost.

    Empty clusters are repaired by reseeding with the point farthest
    from its assigned centroid. Per-iteration inertia is recorded in
    inertia_history and is non-increasing.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2:
        raise ValueError("points must be a 2-D array")
    n = points.shape[0]
    if n < k:
        raise TooFewPoints(f"{n} points for k={k}")
    if k < 1:
        raise ValueError("k must be >= 1")

    rng = np.random.default_rng(seed)
    centroids = _kmeans_pp_init(points, k, rng)
    history = []
    labels = np.zeros(n, dtype=np.int64)

    for _ in range(max_iter):
        dists = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        labels = dists.argmin(axis=1)
        point_cost = dists[np.arange(n), labels]
        history.append(float(point_cost.sum()))

        new_centroids = centroids.copy()
        for j in range(k):
            mask = labels == j
            if mask.any():
                new_centroids[j] = points[mask].mean(axis=0)
        for j in range(k):
            if not (labels == j).any():
                far = int(point_cost.argmax())
                new_centroids[j] = points[far]
                labels[far] = j
                point_cost[far] = 0.0

        shift = float(np.linalg.norm(new_centroids - centroids))
        centroids = new_centroids
        if shift < tol:
            break

    dists = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    labels = dists.argmin(axis=1)
    inertia = float(dists[np.arange(n), labels].sum())
    history.append(inertia)
    return ClusterAssignment(labels=labels, centroids=centroids,
                             inertia=inertia, k=k, seed=seed,
                             inertia_history=tuple(history))


@dataclass(frozen=True)
class FacetPurityReport:
    facet: str
    per_cluster: dict
    purity: float


def facet_purity(labels, facet_values, facet_name: str = "facet") -> FacetPurityReport:
    """Majority-facet fraction per cluster and the point-weighted mean."""
    labels = list(labels)
    facet_values = list(facet_values)
    if len(labels) != len(facet_values):
        raise LengthMismatch(
            f"{len(labels)} labels vs {len(facet_values)} facet values")
    clusters = {}
    for label, value in zip(labels, facet_values):
        clusters.setdefault(label, {}).setdefault(value, 0)
        clusters[label][value] += 1
    per_cluster = {}
    weighted = 0.0
    for label, counts in sorted(clusters.items()):
        size = sum(counts.values())
        share = max(counts.values()) / size
        per_cluster[label] = share
        weighted += share * size
    total = len(labels)
    return FacetPurityReport(facet=facet_name, per_cluster=per_cluster,
                             purity=weighted / total if total else 0.0)


def cluster_export(reduced: ReducedPoints, assignment: ClusterAssignment,
                   manifest) -> list[dict]:
    """Per-item plot-ready records in manifest order."""
    n = reduced.points.shape[0]
    if len(assignment.labels) != n or len(manifest.items) != n:
        raise LengthMismatch(
            f"reduced={n}, labels={len(assignment.labels)}, "
            f"items={len(manifest.items)}")
    records = []
    for i, item in enumerate(manifest.items):
        records.append({
            "id": item.id,
            "x": float(reduced.points[i, 0]),
            "y": float(reduced.points[i, 1]),
            "cluster": int(assignment.labels[i]),
            "language": item.language,
            "image_kind": item.image_kind,
        })
    return records


def export_to_csv(records: list[dict]) -> str:
    """CSV text for export records; floats use shortest round-trip form."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", "x", "y", "cluster", "language", "image_kind"])
    for rec in records:
        writer.writerow([rec["id"], repr(rec["x"]), repr(rec["y"]),
                         rec["cluster"], rec["language"], rec["image_kind"]])
    return buf.getvalue()


def export_from_csv(text: str) -> list[dict]:
    reader = csv.DictReader(io.StringIO(text))
    records = []
    for row in reader:
        records.append({
            "id": row["id"],
            "x": float(row["x"]),
            "y": float(row["y"]),
            "cluster": int(row["cluster"]),
            "language": row["language"],
            "image_kind": row["image_kind"],
        })
    return records
