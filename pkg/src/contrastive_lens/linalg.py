"""Dense real-matrix primitives: centering, covariance, symmetric
eigendecomposition, and subspace projection.

All functions are pure and operate on float64 numpy arrays. Matrices are
row-major, rows = samples, columns = features. Eigenvectors follow a
deterministic sign convention (largest-magnitude entry positive) so repeated
calls are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericError, ValidationError

# Relative tolerance accepted when checking that a matrix is symmetric.
SYMMETRY_RTOL = 1e-12


def as_matrix(values, name: str = "matrix") -> np.ndarray:
    """Validate and convert input to a 2-D float64 array with finite entries."""
    m = np.asarray(values, dtype=np.float64)
    if m.ndim != 2:
        raise ValidationError(f"{name} must be 2-dimensional, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValidationError(f"{name} must have at least one row and column, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name} contains non-finite entries (NaN or Inf)")
    return m


def check_symmetric(c: np.ndarray, name: str = "matrix") -> np.ndarray:
    """Validate that ``c`` is square and symmetric within tolerance."""
    c = as_matrix(c, name)
    if c.shape[0] != c.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {c.shape}")
    scale = max(1.0, float(np.max(np.abs(c))))
    asym = float(np.max(np.abs(c - c.T)))
    if asym > SYMMETRY_RTOL * scale:
        raise ValidationError(
            f"{name} is not symmetric: max |C - C^T| = {asym:.3e} exceeds "
            f"{SYMMETRY_RTOL * scale:.3e}"
        )
    return c


@dataclass(frozen=True)
class Spectrum:
    """Full eigendecomposition of a symmetric matrix.

    ``eigenvalues`` are sorted descending; ``eigenvectors`` holds the matching
    unit eigenvectors as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class Subspace:
    """A k-dimensional subspace of R^d given by an orthonormal d x k basis."""

    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def k(self) -> int:
        return self.basis.shape[1]

    def __post_init__(self):
        b = self.basis
        if b.ndim != 2 or b.shape[1] < 1 or b.shape[1] > b.shape[0]:
            raise ValidationError(f"subspace basis must be d x k with 1 <= k <= d, got {b.shape}")
        gram_err = float(np.max(np.abs(b.T @ b - np.eye(b.shape[1]))))
        if gram_err > 1e-10:
            raise ValidationError(f"subspace basis is not orthonormal: max |B^T B - I| = {gram_err:.3e}")


def center_columns(m) -> tuple[np.ndarray, np.ndarray]:
    """Subtract each column's mean. Returns (centered matrix, mean vector)."""
    m = as_matrix(m)
    mean = m.mean(axis=0)
    return m - mean, mean


def covariance(m) -> np.ndarray:
    """Empirical second-moment matrix C = (1/n) sum_i x_i x_i^T.

    The input is expected to be centered already; ``fit`` composes
    ``center_columns`` with this. Normalization is 1/n, not 1/(n-1).
    """
    m = as_matrix(m)
    c = m.T @ m / m.shape[0]
    # roundoff can leave m.T @ m asymmetric in the last bits
    return (c + c.T) / 2.0


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip eigenvector columns so the largest-magnitude entry is positive.

    Ties in magnitude are broken by the lowest row index (np.argmax takes the
    first maximum).
    """
    idx = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[idx, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def sym_eigh(c) -> Spectrum:
    """Eigendecomposition of a symmetric matrix, eigenvalues descending.

    Raises ValidationError for non-symmetric input and NumericError if the
    LAPACK solver fails to converge.
    """
    c = check_symmetric(c)
    try:
        w, v = np.linalg.eigh(c)
    except np.linalg.LinAlgError as exc:
        scale = float(np.max(np.abs(c)))
        raise NumericError(
            f"symmetric eigendecomposition failed for a {c.shape[0]}x{c.shape[0]} "
            f"matrix (max |entry| = {scale:.3e}): {exc}"
        ) from exc
    order = np.arange(len(w) - 1, -1, -1)  # eigh returns ascending
    return Spectrum(eigenvalues=w[order], eigenvectors=_fix_signs(v[:, order]))


def top_subspace(spectrum: Spectrum, k: int) -> Subspace:
    """Subspace spanned by the k leading eigenvectors."""
    d = spectrum.eigenvectors.shape[0]
    if not 1 <= k <= d:
        raise ValidationError(f"k must be in [1, {d}], got {k}")
    return Subspace(basis=spectrum.eigenvectors[:, :k].copy())


def project(m, subspace: Subspace, mean) -> np.ndarray:
    """Project rows of ``m`` onto the subspace after subtracting ``mean``."""
    m = as_matrix(m)
    mean = np.asarray(mean, dtype=np.float64)
    if mean.ndim != 1 or mean.shape[0] != m.shape[1]:
        raise ValidationError(
            f"mean length {mean.shape} does not match data with {m.shape[1]} columns"
        )
    if subspace.dim != m.shape[1]:
        raise ValidationError(
            f"data has {m.shape[1]} features but subspace lives in R^{subspace.dim}"
        )
    return (m - mean) @ subspace.basis
