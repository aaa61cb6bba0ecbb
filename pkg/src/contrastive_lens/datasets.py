"""Synthetic dataset generators used by the tests, the CLI, and the demos.

All generators are pure functions of their seed: the same seed gives
bit-identical arrays. Normal distributions are parameterized as
N(mean, standard deviation) throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

# group label encoding for the four-subgroup toy target
GROUP_NAMES = ("red", "blue", "black", "yellow")


@dataclass(frozen=True)
class LabeledDataset:
    """A data matrix with optional integer group labels per row."""

    data: np.ndarray
    labels: np.ndarray | None
    name: str = ""

    def __post_init__(self):
        if self.labels is not None and len(self.labels) != self.data.shape[0]:
            raise ValidationError(
                f"label count {len(self.labels)} does not match {self.data.shape[0]} rows"
            )


def gen_toy_appendix_a(seed: int = 0) -> tuple[LabeledDataset, np.ndarray]:
    """Four-subgroup toy data: 400 target points in 30 dimensions.

    Target groups of 100 points each: dims 0-9 are N(0,1) for red/blue and
    N(6,1) for black/yellow; dims 10-19 are N(0,1) for red/yellow and N(3,1)
    for black/blue; dims 20-29 are N(0,10) for everyone, so plain PCA locks
    onto that high-variance noise. The 400-point background has N(0,3) on
    dims 0-9, N(0,1) on dims 10-19 and the same N(0,10) tail, which lets the
    contrast peel the noise away and expose the subgroups.
    """
    rng = np.random.default_rng(seed)
    per_group, d = 100, 30
    labels = np.repeat(np.arange(4), per_group)

    means = np.zeros((400, d))
    means[(labels == 2) | (labels == 3), 0:10] = 6.0  # black, yellow
    means[(labels == 2) | (labels == 1), 10:20] = 3.0  # black, blue
    stds = np.ones(d)
    stds[20:30] = 10.0
    target = means + rng.standard_normal((400, d)) * stds

    bg_stds = np.concatenate([np.full(10, 3.0), np.ones(10), np.full(10, 10.0)])
    background = rng.standard_normal((400, d)) * bg_stds
    return LabeledDataset(target, labels, name="toy-a"), background


def _disk_points(rng: np.random.Generator, count: int, r2_lo: float, r2_hi: float) -> np.ndarray:
    """Uniform-by-area points with squared radius in [r2_lo, r2_hi]."""
    r = np.sqrt(rng.uniform(r2_lo, r2_hi, count))
    theta = rng.uniform(0.0, 2.0 * np.pi, count)
    return np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def gen_toy_kernel(seed: int = 0) -> tuple[LabeledDataset, np.ndarray]:
    """Nonlinear two-subgroup toy data in 10 dimensions.

    The first two target dimensions hold the structure: group 0 is uniform
    on the unit disk and group 1 on the annulus with radii 2..3, so no line
    separates them but a threshold on x1^2 + x2^2 does. Dims 2-9 are N(0,1)
    noise. The background fills the disk of radius 3 with N(0,3) noise dims,
    swamping every raw direction the subgroups don't need.
    """
    rng = np.random.default_rng(seed)
    inner = _disk_points(rng, 200, 0.0, 1.0)
    outer = _disk_points(rng, 200, 4.0, 9.0)
    target_noise = rng.standard_normal((400, 8))
    target = np.hstack([np.vstack([inner, outer]), target_noise])
    labels = np.repeat([0, 1], 200)

    bg_xy = _disk_points(rng, 400, 0.0, 9.0)
    background = np.hstack([bg_xy, rng.standard_normal((400, 8)) * 3.0])
    return LabeledDataset(target, labels, name="toy-kernel"), background


def gen_random_pair(d: int, simdiag: bool = False, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """A random covariance pair, optionally sharing one eigenbasis.

    General case: C = A^T A / d from standard-normal A, independently for
    target and background. Simultaneously diagonalizable case: a single
    random orthogonal basis (QR of a Gaussian matrix, sign-fixed so the
    factorization is unique) with eigenvalues drawn uniform(0.1, 3).
    """
    if d < 2:
        raise ValidationError(f"need d >= 2, got {d}")
    rng = np.random.default_rng(seed)
    if not simdiag:
        a = rng.standard_normal((d, d))
        b = rng.standard_normal((d, d))
        cx = a.T @ a / d
        cy = b.T @ b / d
    else:
        q, r = np.linalg.qr(rng.standard_normal((d, d)))
        q = q * np.sign(np.diag(r))
        lx = rng.uniform(0.1, 3.0, d)
        ly = rng.uniform(0.1, 3.0, d)
        cx = (q * lx) @ q.T
        cy = (q * ly) @ q.T
    return (cx + cx.T) / 2.0, (cy + cy.T) / 2.0
