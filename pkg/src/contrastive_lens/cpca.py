"""Contrastive PCA for a fixed contrast parameter.

Given a target dataset X and a background dataset Y, the contrastive
components for contrast parameter alpha are the leading eigenvectors of
C = C_X - alpha * C_Y, trading off high target variance against low
background variance. alpha = 0 recovers plain PCA of the target;
alpha = infinity projects the target onto the null space of the background
covariance and runs PCA there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .linalg import (
    Subspace,
    as_matrix,
    center_columns,
    check_symmetric,
    covariance,
    project,
    sym_eigh,
    top_subspace,
)

DEFAULT_K = 2
DEFAULT_NULL_TOL = 1e-10

# quadratic forms of a PSD matrix may come out a hair below zero
_VAR_CLAMP = 1e-12


@dataclass(frozen=True)
class CpcaModel:
    """A fitted contrastive-PCA model.

    ``alpha`` is a non-negative float, or ``math.inf`` for the null-space
    variant. ``eigenvalues`` are the k leading eigenvalues of
    C_X - alpha * C_Y (for the infinite case, the eigenvalues of the
    target covariance restricted to the background null space).
    ``variance_pairs`` has shape (k, 2): column 0 the target variance and
    column 1 the background variance of each component.
    """

    alpha: float
    subspace: Subspace
    eigenvalues: np.ndarray
    variance_pairs: np.ndarray
    target_mean: np.ndarray
    background_mean: np.ndarray

    @property
    def k(self) -> int:
        return self.subspace.k

    @property
    def dim(self) -> int:
        return self.subspace.dim


def contrastive_matrix(cx, cy, alpha: float) -> np.ndarray:
    """Entrywise C_X - alpha * C_Y."""
    cx = check_symmetric(cx, "target covariance")
    cy = check_symmetric(cy, "background covariance")
    if cx.shape != cy.shape:
        raise ValidationError(
            f"covariance shapes differ: {cx.shape} vs {cy.shape}"
        )
    if not math.isfinite(alpha) or alpha < 0:
        raise ValidationError(f"alpha must be finite and >= 0, got {alpha}")
    return cx - alpha * cy


def _variance_pairs(basis: np.ndarray, cx: np.ndarray, cy: np.ndarray) -> np.ndarray:
    """(v^T C_X v, v^T C_Y v) per basis column, clamped at zero from below."""
    tv = np.einsum("ij,jk,ki->i", basis.T, cx, basis)
    bv = np.einsum("ij,jk,ki->i", basis.T, cy, basis)
    pairs = np.column_stack([tv, bv])
    pairs[(pairs < 0) & (pairs > -_VAR_CLAMP)] = 0.0
    return pairs


def fit_covariances(
    cx,
    cy,
    alpha: float,
    k: int = DEFAULT_K,
    target_mean=None,
    background_mean=None,
) -> CpcaModel:
    """Fit from precomputed covariance matrices.

    Used by the alpha sweep and the HTTP service, which compute the
    covariance pair once and reuse it across many alpha values. ``fit``
    delegates here after centering raw data.
    """
    c = contrastive_matrix(cx, cy, alpha)
    d = c.shape[0]
    if not 1 <= k <= d:
        raise ValidationError(f"k must be in [1, {d}], got {k}")
    spectrum = sym_eigh(c)
    subspace = top_subspace(spectrum, k)
    if target_mean is None:
        target_mean = np.zeros(d)
    if background_mean is None:
        background_mean = np.zeros(d)
    return CpcaModel(
        alpha=float(alpha),
        subspace=subspace,
        eigenvalues=spectrum.eigenvalues[:k].copy(),
        variance_pairs=_variance_pairs(subspace.basis, np.asarray(cx, float), np.asarray(cy, float)),
        target_mean=np.asarray(target_mean, dtype=np.float64),
        background_mean=np.asarray(background_mean, dtype=np.float64),
    )


def _centered_covariances(target, background):
    target = as_matrix(target, "target")
    background = as_matrix(background, "background")
    if target.shape[1] != background.shape[1]:
        raise ValidationError(
            f"target has {target.shape[1]} features, background has {background.shape[1]}"
        )
    if target.shape[0] < 2 or background.shape[0] < 2:
        raise ValidationError("target and background each need at least 2 rows")
    tc, tmean = center_columns(target)
    bc, bmean = center_columns(background)
    return covariance(tc), covariance(bc), tmean, bmean


def fit(target, background, alpha: float, k: int = DEFAULT_K) -> CpcaModel:
    """Contrastive PCA of ``target`` against ``background`` at a given alpha.

    Each dataset is centered by its own mean; covariances use 1/n. The
    returned model spans the top-k eigenvectors of C_X - alpha * C_Y.
    """
    if isinstance(alpha, float) and math.isinf(alpha):
        raise ValidationError("alpha=inf is handled by fit_infinite")
    cx, cy, tmean, bmean = _centered_covariances(target, background)
    return fit_covariances(cx, cy, alpha, k, tmean, bmean)


def fit_infinite(
    target, background, k: int = DEFAULT_K, null_tol: float = DEFAULT_NULL_TOL
) -> CpcaModel:
    """The alpha = infinity limit of contrastive PCA.

    Any direction with background variance receives an infinite penalty, so
    the target is first projected onto the null space of C_Y (eigenvalues
    <= null_tol * lambda_max(C_Y)) and PCA runs inside that null space. The
    components are mapped back to the ambient space.
    """
    if null_tol <= 0:
        raise ValidationError(f"null_tol must be > 0, got {null_tol}")
    cx, cy, tmean, bmean = _centered_covariances(target, background)
    spec_y = sym_eigh(cy)
    lam_max = float(spec_y.eigenvalues[0])
    threshold = null_tol * max(lam_max, 0.0)
    null_mask = spec_y.eigenvalues <= threshold
    null_dim = int(np.count_nonzero(null_mask))
    if null_dim < k:
        raise ValidationError(
            f"background null space dimension {null_dim} is smaller than k={k}"
        )
    null_basis = spec_y.eigenvectors[:, null_mask]  # d x null_dim
    projected = (as_matrix(target) - tmean) @ null_basis
    spec_proj = sym_eigh(covariance(projected))
    inner = top_subspace(spec_proj, k)
    basis = null_basis @ inner.basis  # orthonormal: product of orthonormal maps
    return CpcaModel(
        alpha=math.inf,
        subspace=Subspace(basis=basis),
        eigenvalues=spec_proj.eigenvalues[:k].copy(),
        variance_pairs=_variance_pairs(basis, cx, cy),
        target_mean=tmean,
        background_mean=bmean,
    )


def transform(model: CpcaModel, data, use_background_mean: bool = False) -> np.ndarray:
    """Project rows of ``data`` onto the model's components.

    Data is centered by the stored target mean by default, so background
    points can be overlaid in the same coordinates; pass
    ``use_background_mean=True`` to center by the background mean instead.
    """
    mean = model.background_mean if use_background_mean else model.target_mean
    return project(data, model.subspace, mean)


def feature_weights(model: CpcaModel, component: int = 0) -> np.ndarray:
    """Per-feature contribution to one component: squared weights rescaled
    so the maximum is exactly 1."""
    if not 0 <= component < model.k:
        raise ValidationError(
            f"component must be in [0, {model.k}), got {component}"
        )
    v = model.subspace.basis[:, component]
    sq = v * v
    return sq / sq.max()


def denoise(model: CpcaModel, data) -> np.ndarray:
    """Reconstruct ``data`` keeping only the model's components.

    Returns target_mean + (data - target_mean) B B^T, the rank-k
    reconstruction in the original feature space.
    """
    coords = project(data, model.subspace, model.target_mean)
    return model.target_mean + coords @ model.subspace.basis.T
