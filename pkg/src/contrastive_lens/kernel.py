"""Kernelized contrastive PCA via the dual eigenproblem.

Components in the kernel-induced feature space are expansions
v = sum_i a_i Phi(Z_i) over the stacked training points Z = (X; Y). The
dual coefficient vectors solve lambda a = K~ a, where K~ is the centered
Gram matrix with its target rows scaled by 1/n and its background rows by
-alpha/m. K~ is not symmetric, so a general real eigensolver is used and
numerically-real eigenpairs are kept, normalized to a^T K a = 1 on the
centered kernel.

Centering is per dataset: each Gram block is double-centered against its
own dataset means, i.e. the blocks become Grams of Phi(x) - mu_X and
Phi(y) - mu_Y. The block means are kept so out-of-sample points can be
projected consistently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ValidationError
from .linalg import as_matrix

KINDS = ("linear", "polynomial", "rbf")

# eigenvalues are accepted as real when |Im| <= this times (1 + |Re|)
IMAG_TOL = 1e-8
# dual vectors with a^T K a at or below this are null-space artifacts
NULL_QUAD_TOL = 1e-12


@dataclass(frozen=True)
class KernelSpec:
    """Kernel function selector.

    linear:      h(u, w) = u . w
    polynomial:  h(u, w) = (u . w + coef0)^degree
    rbf:         h(u, w) = exp(-gamma ||u - w||^2)
    """

    kind: str = "polynomial"
    degree: int = 2
    coef0: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"kernel kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind == "polynomial" and (self.degree < 1 or self.degree != int(self.degree)):
            raise ValidationError(f"polynomial degree must be an integer >= 1, got {self.degree}")
        if self.kind == "rbf" and not self.gamma > 0:
            raise ValidationError(f"rbf gamma must be > 0, got {self.gamma}")


def gram(z1, z2, spec: KernelSpec) -> np.ndarray:
    """Gram matrix with entry (i, j) = h(z1_i, z2_j)."""
    z1 = as_matrix(z1, "z1")
    z2 = as_matrix(z2, "z2")
    if z1.shape[1] != z2.shape[1]:
        raise ValidationError(
            f"feature counts differ: {z1.shape[1]} vs {z2.shape[1]}"
        )
    if spec.kind == "linear":
        return z1 @ z2.T
    if spec.kind == "polynomial":
        return (z1 @ z2.T + spec.coef0) ** spec.degree
    sq = (
        np.sum(z1 * z1, axis=1)[:, None]
        + np.sum(z2 * z2, axis=1)[None, :]
        - 2.0 * (z1 @ z2.T)
    )
    return np.exp(-spec.gamma * np.maximum(sq, 0.0))


@dataclass(frozen=True)
class CenteringStats:
    """Block means of the training Gram matrix, kept for out-of-sample use.

    ``target_col_means`` / ``background_col_means`` are the column means of
    the diagonal blocks K_X and K_Y; ``cross_col_means`` averages the cross
    block K_XY over target rows (length m) and ``cross_row_means`` over
    background columns (length n). Grand means accompany each block.
    """

    target_col_means: np.ndarray
    target_grand_mean: float
    background_col_means: np.ndarray
    background_grand_mean: float
    cross_col_means: np.ndarray
    cross_row_means: np.ndarray
    cross_grand_mean: float


def center_blocks(k, n: int, m: int) -> tuple[np.ndarray, CenteringStats]:
    """Double-center each block of a stacked Gram matrix per dataset.

    The target block becomes the Gram of Phi(x) - mu_X, the background
    block the Gram of Phi(y) - mu_Y, and the cross block the Gram between
    the two centered families. Symmetry of the input is preserved.
    """
    k = as_matrix(k, "kernel matrix")
    if k.shape != (n + m, n + m):
        raise ValidationError(
            f"kernel matrix shape {k.shape} does not match n+m = {n + m}"
        )
    kx = k[:n, :n]
    ky = k[n:, n:]
    kxy = k[:n, n:]
    cmx = kx.mean(axis=0)
    gmx = float(kx.mean())
    cmy = ky.mean(axis=0)
    gmy = float(ky.mean())
    cm_xy = kxy.mean(axis=0)  # over target rows, length m
    rm_xy = kxy.mean(axis=1)  # over background columns, length n
    gm_xy = float(kxy.mean())

    out = np.empty_like(k)
    out[:n, :n] = kx - cmx[None, :] - cmx[:, None] + gmx
    out[n:, n:] = ky - cmy[None, :] - cmy[:, None] + gmy
    cross = kxy - cm_xy[None, :] - rm_xy[:, None] + gm_xy
    out[:n, n:] = cross
    out[n:, :n] = cross.T
    stats = CenteringStats(
        target_col_means=cmx,
        target_grand_mean=gmx,
        background_col_means=cmy,
        background_grand_mean=gmy,
        cross_col_means=cm_xy,
        cross_row_means=rm_xy,
        cross_grand_mean=gm_xy,
    )
    return out, stats


def build_ktilde(k_centered, n: int, m: int, alpha: float) -> np.ndarray:
    """Scale the top n rows by 1/n and the bottom m rows by -alpha/m."""
    k_centered = as_matrix(k_centered, "centered kernel")
    if k_centered.shape != (n + m, n + m):
        raise ValidationError(
            f"centered kernel shape {k_centered.shape} does not match n+m = {n + m}"
        )
    if not math.isfinite(alpha) or alpha < 0:
        raise ValidationError(f"alpha must be finite and >= 0, got {alpha}")
    scale = np.concatenate([np.full(n, 1.0 / n), np.full(m, -alpha / m)])
    return k_centered * scale[:, None]


@dataclass(frozen=True)
class KernelCpcaModel:
    """Fitted kernel contrastive-PCA model.

    ``training_points`` stacks target rows then background rows (N x d);
    ``dual_coeffs`` holds one column per component (N x k), each normalized
    to a^T K_centered a = 1.
    """

    spec: KernelSpec
    alpha: float
    training_points: np.ndarray
    n: int
    m: int
    dual_coeffs: np.ndarray
    eigenvalues: np.ndarray
    centering_stats: CenteringStats

    @property
    def k(self) -> int:
        return self.dual_coeffs.shape[1]


def _realify(vec: np.ndarray) -> np.ndarray:
    """Rotate a complex eigenvector of a real matrix onto the real axis."""
    if not np.iscomplexobj(vec):
        return vec.astype(np.float64)
    pivot = vec[np.argmax(np.abs(vec))]
    if pivot != 0:
        vec = vec * (pivot.conjugate() / abs(pivot))
    return np.real(vec)


def _centered_training_kernel(model: "KernelCpcaModel") -> np.ndarray:
    pts = model.training_points
    centered, _ = center_blocks(gram(pts, pts, model.spec), model.n, model.m)
    return centered


def fit_kernel(
    target, background, spec: KernelSpec, alpha: float, k: int = 2
) -> KernelCpcaModel:
    """Fit kernel contrastive PCA at a given alpha.

    Solves the general eigenproblem on the row-scaled centered kernel,
    keeps eigenpairs that are numerically real and outside the kernel's
    null space, sorts them by descending real part, and keeps the top k.
    """
    target = as_matrix(target, "target")
    background = as_matrix(background, "background")
    if target.shape[1] != background.shape[1]:
        raise ValidationError(
            f"target has {target.shape[1]} features, background has {background.shape[1]}"
        )
    n, m = target.shape[0], background.shape[0]
    if k < 1 or k > n + m:
        raise ValidationError(f"k must be in [1, {n + m}], got {k}")
    points = np.vstack([target, background])
    k_centered, stats = center_blocks(gram(points, points, spec), n, m)
    ktilde = build_ktilde(k_centered, n, m, alpha)
    try:
        eigvals, eigvecs = np.linalg.eig(ktilde)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"dual eigenproblem failed to converge: {exc}") from exc

    admissible: list[tuple[float, np.ndarray]] = []
    for i in range(len(eigvals)):
        lam = eigvals[i]
        if abs(lam.imag) > IMAG_TOL * (1.0 + abs(lam.real)):
            continue
        a = _realify(eigvecs[:, i])
        quad = float(a @ k_centered @ a)
        if quad <= NULL_QUAD_TOL:
            continue
        a = a / math.sqrt(quad)
        pivot = a[np.argmax(np.abs(a))]
        if pivot < 0:
            a = -a
        admissible.append((float(lam.real), a))
    if len(admissible) < k:
        raise NumericError(
            f"only {len(admissible)} admissible eigenpairs (need {k}): "
            "the kernel's effective rank is too small"
        )
    admissible.sort(key=lambda t: -t[0])
    top = admissible[:k]
    return KernelCpcaModel(
        spec=spec,
        alpha=float(alpha),
        training_points=points,
        n=n,
        m=m,
        dual_coeffs=np.column_stack([a for _, a in top]),
        eigenvalues=np.array([lam for lam, _ in top]),
        centering_stats=stats,
    )


def training_projection(model: KernelCpcaModel) -> np.ndarray:
    """Project the training points: exactly K_centered @ A, shape (N, k).

    Target rows are centered by the target's feature-space mean and
    background rows by the background's, matching the centered kernel.
    """
    return _centered_training_kernel(model) @ model.dual_coeffs


def transform_kernel(
    model: KernelCpcaModel, data, use_background_mean: bool = False
) -> np.ndarray:
    """Project new points onto the kernel components.

    New points are centered (in feature space) by the target mean by
    default, so a training target row passed here reproduces its row of
    ``training_projection``; with ``use_background_mean=True`` the
    background mean is used and training background rows reproduce theirs.
    """
    data = as_matrix(data, "data")
    d = model.training_points.shape[1]
    if data.shape[1] != d:
        raise ValidationError(f"data has {data.shape[1]} features, model expects {d}")
    s = model.centering_stats
    kx = gram(data, model.training_points[: model.n], model.spec)
    ky = gram(data, model.training_points[model.n :], model.spec)
    if not use_background_mean:
        # (Phi(z) - mu_X) . (Phi(x_i) - mu_X)  and  (Phi(z) - mu_X) . (Phi(y_j) - mu_Y)
        t1 = kx - kx.mean(axis=1, keepdims=True) - s.target_col_means[None, :] + s.target_grand_mean
        t2 = ky - ky.mean(axis=1, keepdims=True) - s.cross_col_means[None, :] + s.cross_grand_mean
    else:
        # (Phi(z) - mu_Y) . (Phi(x_i) - mu_X)  and  (Phi(z) - mu_Y) . (Phi(y_j) - mu_Y)
        t1 = kx - kx.mean(axis=1, keepdims=True) - s.cross_row_means[None, :] + s.cross_grand_mean
        t2 = ky - ky.mean(axis=1, keepdims=True) - s.background_col_means[None, :] + s.background_grand_mean
    return np.hstack([t1, t2]) @ model.dual_coeffs
