"""Automatic selection of contrast parameters.

A grid of alpha values is swept; each value yields a component subspace.
Pairs of subspaces are compared through their principal angles, whose cosine
product gives an affinity in [0, 1]. Spectral clustering of the affinity
matrix groups alphas whose subspaces nearly coincide, and the medoid of each
cluster (the member maximizing total within-cluster affinity) is returned as
a representative alpha.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import cpca
from .errors import ValidationError
from .linalg import Subspace, as_matrix, center_columns, covariance
from .parallel import ordered_map

KMEANS_RESTARTS = 10
KMEANS_MAX_ITER = 100


def log_grid(lo: float, hi: float, count: int) -> np.ndarray:
    """``count`` logarithmically spaced values from ``lo`` to ``hi`` inclusive."""
    if lo <= 0:
        raise ValidationError(f"grid lower bound must be > 0, got {lo}")
    if hi <= lo:
        raise ValidationError(f"grid upper bound must exceed lower bound, got {lo}..{hi}")
    if count < 2:
        raise ValidationError(f"grid needs at least 2 values, got {count}")
    return np.geomspace(lo, hi, count)


def validate_grid(values) -> np.ndarray:
    grid = np.asarray(values, dtype=np.float64)
    if grid.ndim != 1 or grid.size == 0:
        raise ValidationError("alpha grid must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(grid)) or np.any(grid <= 0):
        raise ValidationError("alpha grid values must be finite and > 0")
    if np.any(np.diff(grid) <= 0):
        raise ValidationError("alpha grid must be strictly increasing")
    return grid


def principal_angles(v1: Subspace, v2: Subspace) -> np.ndarray:
    """Principal angles between two equal-rank subspaces, ascending, in [0, pi/2].

    theta_h = arccos(sigma_h) for the singular values sigma_h of B1^T B2,
    clamped into [0, 1]. arccos near sigma = 1 only resolves angles down to
    sqrt(machine eps), so angles below 45 degrees are refined through the
    sine route: the singular values of B2 - B1 (B1^T B2) are sin(theta_h),
    which stays accurate as theta -> 0.
    """
    if v1.dim != v2.dim or v1.k != v2.k:
        raise ValidationError(
            f"subspaces must share ambient dimension and rank: "
            f"({v1.dim}, {v1.k}) vs ({v2.dim}, {v2.k})"
        )
    cross = v1.basis.T @ v2.basis
    sigma = np.linalg.svd(cross, compute_uv=False)  # descending cosines
    theta = np.arccos(np.clip(sigma, 0.0, 1.0))  # ascending angles
    small = sigma * sigma > 0.5
    if np.any(small):
        sines = np.linalg.svd(v2.basis - v1.basis @ cross, compute_uv=False)[::-1]
        theta[small] = np.arcsin(np.clip(sines[small], 0.0, 1.0))
    return theta


def subspace_affinity(v1: Subspace, v2: Subspace) -> float:
    """Product of the cosines of all principal angles; 1 iff identical subspaces."""
    sigma = np.linalg.svd(v1.basis.T @ v2.basis, compute_uv=False)
    return float(np.prod(np.clip(sigma, 0.0, 1.0)))


def affinity_matrix(subspaces: list[Subspace]) -> np.ndarray:
    """Symmetric pairwise-affinity matrix with a unit diagonal."""
    n = len(subspaces)
    a = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            a[i, j] = a[j, i] = subspace_affinity(subspaces[i], subspaces[j])
    return a


def _farthest_point_init(points: np.ndarray, p: int, rng: np.random.Generator) -> np.ndarray:
    """Greedy farthest-point seeding: random first center, then repeatedly the
    point farthest from its nearest chosen center."""
    n = points.shape[0]
    centers = [int(rng.integers(n))]
    d2 = np.sum((points - points[centers[0]]) ** 2, axis=1)
    while len(centers) < p:
        nxt = int(np.argmax(d2))
        centers.append(nxt)
        d2 = np.minimum(d2, np.sum((points - points[nxt]) ** 2, axis=1))
    return points[centers].copy()


def _lloyd(points: np.ndarray, centers: np.ndarray, max_iter: int) -> tuple[np.ndarray, float]:
    p = centers.shape[0]
    labels = np.full(points.shape[0], -1)
    for _ in range(max_iter):
        d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_labels = np.argmin(d2, axis=1)
        for c in range(p):
            mask = new_labels == c
            if not np.any(mask):
                # revive an empty cluster at the currently worst-fit point
                worst = int(np.argmax(d2[np.arange(len(new_labels)), new_labels]))
                new_labels[worst] = c
                mask = new_labels == c
            centers[c] = points[mask].mean(axis=0)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    inertia = float(d2[np.arange(len(labels)), labels].sum())
    return labels, inertia


def _kmeans(points: np.ndarray, p: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    best_labels, best_inertia = None, np.inf
    for _ in range(KMEANS_RESTARTS):
        centers = _farthest_point_init(points, p, rng)
        labels, inertia = _lloyd(points, centers, KMEANS_MAX_ITER)
        if inertia < best_inertia:
            best_labels, best_inertia = labels, inertia
    return best_labels


def spectral_cluster(affinity, p: int, seed: int = 0) -> np.ndarray:
    """Ng-Jordan-Weiss spectral clustering of an affinity matrix into p clusters.

    L = D^(-1/2) A D^(-1/2) with D the diagonal of row sums; the rows of the
    top-p eigenvector matrix are normalized to unit length and clustered with
    k-means (greedy farthest-point seeding, 10 restarts). Deterministic for a
    fixed seed. An isolated point (zero row sum) is given degree 1.
    """
    a = np.asarray(affinity, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"affinity must be square, got shape {a.shape}")
    n = a.shape[0]
    if not 1 <= p <= n:
        raise ValidationError(f"cluster count must be in [1, {n}], got {p}")
    deg = a.sum(axis=1)
    deg[deg <= 0] = 1.0
    inv_sqrt = 1.0 / np.sqrt(deg)
    lap = a * inv_sqrt[:, None] * inv_sqrt[None, :]
    lap = (lap + lap.T) / 2.0
    w, v = np.linalg.eigh(lap)
    embedding = v[:, -p:]  # top-p eigenvectors as columns
    norms = np.linalg.norm(embedding, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    embedding = embedding / norms
    return _kmeans(embedding, p, seed)


@dataclass(frozen=True)
class SelectionResult:
    """Output of the full alpha-selection pipeline.

    Clusters are relabeled so that label order follows ascending medoid
    alpha; ``medoid_alphas`` is therefore sorted ascending.
    """

    medoid_alphas: np.ndarray
    medoid_subspaces: list[Subspace]
    cluster_labels: np.ndarray
    affinity: np.ndarray
    per_alpha_models: list[cpca.CpcaModel]

    @property
    def alphas(self) -> np.ndarray:
        return np.array([m.alpha for m in self.per_alpha_models])


def sweep_covariances(cx, cy, grid, k: int = cpca.DEFAULT_K,
                      target_mean=None, background_mean=None) -> list[cpca.CpcaModel]:
    """Fit one model per grid alpha on a shared covariance pair."""
    grid = validate_grid(grid)
    return ordered_map(
        lambda alpha: cpca.fit_covariances(cx, cy, alpha, k, target_mean, background_mean),
        list(grid),
    )


def sweep(target, background, grid, k: int = cpca.DEFAULT_K) -> list[cpca.CpcaModel]:
    """Fit one model per grid alpha; the covariances are computed once."""
    target = as_matrix(target, "target")
    background = as_matrix(background, "background")
    tc, tmean = center_columns(target)
    bc, bmean = center_columns(background)
    return sweep_covariances(covariance(tc), covariance(bc), grid, k, tmean, bmean)


def _medoid_index(affinity: np.ndarray, members: np.ndarray) -> int:
    """Cluster member maximizing its within-cluster affinity sum.

    Ties resolve to the smallest grid index, i.e. the smallest alpha.
    """
    sums = affinity[np.ix_(members, members)].sum(axis=1)
    return int(members[np.argmax(sums)])


def select_from_models(models: list[cpca.CpcaModel], p: int, seed: int = 0) -> SelectionResult:
    """Cluster already-fitted per-alpha models and pick medoid alphas."""
    if p > len(models):
        raise ValidationError(f"cannot form {p} clusters from {len(models)} alphas")
    affinity = affinity_matrix([m.subspace for m in models])
    raw_labels = spectral_cluster(affinity, p, seed)
    medoid_idx = [
        _medoid_index(affinity, np.flatnonzero(raw_labels == c)) for c in range(p)
    ]
    order = np.argsort([models[i].alpha for i in medoid_idx], kind="stable")
    relabel = np.empty(p, dtype=int)
    relabel[order] = np.arange(p)
    labels = relabel[raw_labels]
    medoid_idx = [medoid_idx[i] for i in order]
    return SelectionResult(
        medoid_alphas=np.array([models[i].alpha for i in medoid_idx]),
        medoid_subspaces=[models[i].subspace for i in medoid_idx],
        cluster_labels=labels,
        affinity=affinity,
        per_alpha_models=models,
    )


def auto_select(target, background, grid, k: int = cpca.DEFAULT_K,
                p: int = 3, seed: int = 0) -> SelectionResult:
    """Full pipeline: sweep the grid, build affinities, cluster, return medoids."""
    models = sweep(target, background, grid, k)
    return select_from_models(models, p, seed)
