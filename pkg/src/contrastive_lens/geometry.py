"""Variance-pair geometry: the contrastiveness partial order, the
most-contrastive boundary, the simultaneously-diagonalizable closed form,
and empirical certificates for the sweep's optimality.

A direction v has the variance pair (v^T C_X v, v^T C_Y v). A direction is
"more contrastive" than another when it has at least as much target variance
and at most as much background variance, strictly better in one. The top
contrastive components swept over alpha should populate exactly the
non-dominated (lower-right) boundary of the variance-pair cloud; the
certificate below checks the forward inclusion against a sampled cloud.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import cpca
from .alpha_select import validate_grid
from .errors import ValidationError
from .linalg import check_symmetric, sym_eigh

DEFAULT_EPS = 1e-6
DEFAULT_SAMPLES = 100_000


class VariancePair(NamedTuple):
    target_var: float
    background_var: float


@dataclass(frozen=True)
class BoundarySample:
    """A unit direction together with its variance pair."""

    direction: np.ndarray
    pair: VariancePair


def sample_unit_sphere(d: int, n: int, seed: int = 0) -> np.ndarray:
    """n rows of uniformly distributed unit vectors in R^d (normalized
    standard-normal draws). Deterministic per seed."""
    if d < 1 or n < 1:
        raise ValidationError(f"need d >= 1 and n >= 1, got d={d}, n={n}")
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((n, d))
    norms = np.linalg.norm(v, axis=1, keepdims=True)
    return v / norms


def variance_pairs_of(directions: np.ndarray, cx: np.ndarray, cy: np.ndarray) -> np.ndarray:
    """(v^T C_X v, v^T C_Y v) for each row of ``directions``; shape (n, 2)."""
    px = np.einsum("ij,jk,ik->i", directions, cx, directions)
    py = np.einsum("ij,jk,ik->i", directions, cy, directions)
    return np.column_stack([px, py])


def more_contrastive(p1, p2) -> bool:
    """Strict partial order on variance pairs (exact comparisons, no tolerance)."""
    x1, y1 = p1
    x2, y2 = p2
    return (x1 >= x2 and y1 < y2) or (x1 > x2 and y1 <= y2)


def _dominated_mask(points: np.ndarray, eps: float) -> np.ndarray:
    """True where a point is eps-dominated by some other point.

    A point (x, y) is dropped when another point (x', y') satisfies
    x' >= x - eps and y' <= y + eps, with x' > x + eps or y' < y - eps.
    Sort-and-scan with prefix minima; O(n log n).
    """
    x, y = points[:, 0], points[:, 1]
    order = np.argsort(-x, kind="stable")
    xs, ys = x[order], y[order]
    prefix_min_y = np.minimum.accumulate(ys)
    neg = -xs  # ascending
    # candidates with x' > x + eps form a strict prefix of the sorted order
    hi_strict = np.searchsorted(neg, -(xs + eps), side="left")
    # candidates with x' >= x - eps form a wider prefix
    hi_wide = np.searchsorted(neg, -(xs - eps), side="right")
    dominated_sorted = np.zeros(len(xs), dtype=bool)
    has_strict = hi_strict > 0
    dominated_sorted[has_strict] = (
        prefix_min_y[hi_strict[has_strict] - 1] <= ys[has_strict] + eps
    )
    has_wide = hi_wide > 0
    dominated_sorted[has_wide] |= (
        prefix_min_y[hi_wide[has_wide] - 1] < ys[has_wide] - eps
    )
    dominated = np.zeros(len(xs), dtype=bool)
    dominated[order] = dominated_sorted
    return dominated


def boundary(samples: list[BoundarySample], eps: float = DEFAULT_EPS) -> list[BoundarySample]:
    """Samples not eps-dominated by any other, sorted by ascending target variance."""
    if eps < 0:
        raise ValidationError(f"eps must be >= 0, got {eps}")
    if not samples:
        return []
    points = np.array([[s.pair.target_var, s.pair.background_var] for s in samples])
    keep = ~_dominated_mask(points, eps)
    kept = [s for s, flag in zip(samples, keep) if flag]
    kept.sort(key=lambda s: (s.pair.target_var, s.pair.background_var))
    return kept


def simdiag_boundary(lambdas_x, lambdas_y) -> list[VariancePair]:
    """Vertices of the lower-right convex-hull boundary of eigenvalue pairs.

    For simultaneously diagonalizable covariances the variance-pair cloud is
    the convex hull of the per-eigenvector pairs (lambda_X,i, lambda_Y,i);
    the most-contrastive pairs are the hull's lower-right boundary. Returns
    the boundary's vertices in ascending lambda_X; points interior to a
    boundary segment are convex combinations and are not enumerated.
    """
    lx = np.asarray(lambdas_x, dtype=np.float64)
    ly = np.asarray(lambdas_y, dtype=np.float64)
    if lx.shape != ly.shape or lx.ndim != 1 or lx.size == 0:
        raise ValidationError("eigenvalue lists must be equal-length non-empty vectors")
    pts = np.unique(np.column_stack([lx, ly]), axis=0)  # sorted by (x, y), deduplicated
    # Pareto filter (maximize x, minimize y), exact comparisons
    undominated = pts[~_dominated_mask(pts, 0.0)]
    if len(undominated) <= 2:
        return [VariancePair(float(p[0]), float(p[1])) for p in undominated]
    # monotone-chain lower hull; collinear interior points are dropped
    hull: list[np.ndarray] = []
    for p in undominated:
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            cross = (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0])
            if cross <= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return [VariancePair(float(p[0]), float(p[1])) for p in hull]


def _swept_top_components(cx, cy, grid) -> tuple[np.ndarray, np.ndarray]:
    """Top contrastive component and its variance pair per grid alpha."""
    directions = []
    pairs = []
    for alpha in grid:
        spectrum = sym_eigh(cpca.contrastive_matrix(cx, cy, float(alpha)))
        v = spectrum.eigenvectors[:, 0]
        directions.append(v)
        pairs.append([float(v @ cx @ v), float(v @ cy @ v)])
    return np.array(directions), np.array(pairs)


@dataclass(frozen=True)
class TheoremViolation:
    alpha: float
    direction: np.ndarray
    sample_pair: VariancePair
    swept_pair: VariancePair
    margin: float


@dataclass(frozen=True)
class TheoremCertificate:
    """Empirical check that swept variance pairs are not dominated.

    ``max_margin`` is the largest min(target excess, background deficit) any
    sampled direction achieves over any swept pair; the certificate passes
    when it does not exceed eps.
    """

    passed: bool
    max_margin: float
    eps: float
    alphas: np.ndarray
    swept_pairs: np.ndarray
    cloud_pairs: np.ndarray
    violations: list[TheoremViolation]
    n_samples: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "passed": bool(self.passed),
            "max_margin": float(self.max_margin),
            "eps": float(self.eps),
            "n_samples": int(self.n_samples),
            "seed": int(self.seed),
            "alphas": [float(a) for a in self.alphas],
            "swept_pairs": [[float(x), float(y)] for x, y in self.swept_pairs],
            "violations": [
                {
                    "alpha": float(v.alpha),
                    "direction": [float(c) for c in v.direction],
                    "sample_pair": [float(v.sample_pair.target_var), float(v.sample_pair.background_var)],
                    "swept_pair": [float(v.swept_pair.target_var), float(v.swept_pair.background_var)],
                    "margin": float(v.margin),
                }
                for v in self.violations
            ],
        }


def certify_theorem1(
    cx,
    cy,
    grid,
    n_samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    eps: float = DEFAULT_EPS,
) -> TheoremCertificate:
    """Check that no sampled direction dominates any swept top component.

    For every grid alpha the top contrastive component's variance pair is
    compared against a sampled direction cloud; a sample violates the
    certificate when its target variance exceeds the swept pair's by more
    than eps while its background variance is lower by more than eps.
    """
    cx = check_symmetric(cx, "target covariance")
    cy = check_symmetric(cy, "background covariance")
    grid = validate_grid(grid)
    directions = sample_unit_sphere(cx.shape[0], n_samples, seed)
    cloud = variance_pairs_of(directions, cx, cy)
    swept_dirs, swept_pairs = _swept_top_components(cx, cy, grid)
    violations: list[TheoremViolation] = []
    max_margin = -np.inf
    for alpha, pair in zip(grid, swept_pairs):
        margins = np.minimum(cloud[:, 0] - pair[0], pair[1] - cloud[:, 1])
        worst = int(np.argmax(margins))
        max_margin = max(max_margin, float(margins[worst]))
        if margins[worst] > eps:
            violations.append(
                TheoremViolation(
                    alpha=float(alpha),
                    direction=directions[worst].copy(),
                    sample_pair=VariancePair(*cloud[worst]),
                    swept_pair=VariancePair(*pair),
                    margin=float(margins[worst]),
                )
            )
    return TheoremCertificate(
        passed=not violations,
        max_margin=float(max_margin),
        eps=float(eps),
        alphas=grid,
        swept_pairs=swept_pairs,
        cloud_pairs=cloud,
        violations=violations,
        n_samples=int(n_samples),
        seed=int(seed),
    )


@dataclass(frozen=True)
class TangencySegment:
    alpha_lo: float
    alpha_hi: float
    slope: float
    lower_bound: float
    upper_bound: float
    ok: bool


@dataclass(frozen=True)
class TangencyReport:
    """Secant slopes between consecutive distinct swept pairs, each expected
    inside [1/alpha_hi - tol, 1/alpha_lo + tol] with tol = 0.05/alpha_hi."""

    passed: bool
    segments: list[TangencySegment]
    skipped: int
    alphas: np.ndarray
    swept_pairs: np.ndarray

    def to_dict(self) -> dict:
        return {
            "passed": bool(self.passed),
            "skipped": int(self.skipped),
            "segments": [
                {
                    "alpha_lo": s.alpha_lo,
                    "alpha_hi": s.alpha_hi,
                    "slope": s.slope,
                    "lower_bound": s.lower_bound,
                    "upper_bound": s.upper_bound,
                    "ok": s.ok,
                }
                for s in self.segments
            ],
        }


def tangency_check(cx, cy, grid, pair_tol: float = 1e-9) -> TangencyReport:
    """Bracket the secant slope of the swept variance-pair trace by 1/alpha.

    The variance pair selected at alpha is the tangency point of the
    boundary with a slope-1/alpha line, so the secant between the pairs of
    consecutive grid alphas must lie between the two reciprocal alphas.
    Consecutive pairs closer than ``pair_tol`` in both coordinates are
    skipped. Report-only: no exception on violation.
    """
    cx = check_symmetric(cx, "target covariance")
    cy = check_symmetric(cy, "background covariance")
    grid = validate_grid(grid)
    if grid.size < 3:
        raise ValidationError("tangency check needs a grid of at least 3 alphas")
    _, pairs = _swept_top_components(cx, cy, grid)
    segments: list[TangencySegment] = []
    skipped = 0
    for i in range(len(grid) - 1):
        a_lo, a_hi = float(grid[i]), float(grid[i + 1])
        dx = pairs[i, 0] - pairs[i + 1, 0]
        dy = pairs[i, 1] - pairs[i + 1, 1]
        if abs(dx) < pair_tol and abs(dy) < pair_tol:
            skipped += 1
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            slope = float(dy / dx)
        tol = 0.05 / a_hi
        lower, upper = 1.0 / a_hi - tol, 1.0 / a_lo + tol
        segments.append(
            TangencySegment(
                alpha_lo=a_lo,
                alpha_hi=a_hi,
                slope=slope,
                lower_bound=lower,
                upper_bound=upper,
                ok=bool(np.isfinite(slope) and lower <= slope <= upper),
            )
        )
    return TangencyReport(
        passed=all(s.ok for s in segments),
        segments=segments,
        skipped=skipped,
        alphas=grid,
        swept_pairs=pairs,
    )
