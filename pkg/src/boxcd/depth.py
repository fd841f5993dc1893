"""Depth surface estimation from accepted parameter draws.

Accepted draws are distributed with density proportional to the
box-acceptance depth, so a kernel density estimate of the accepted sample
is (up to the normalizing constant, which cancels in every threshold rule)
an estimate of the depth function.  The estimator is a product of
univariate Gaussian kernels with a single bandwidth multiplier chosen by
leave-one-out cross-validated log-likelihood; coordinates are standardized
by their sample standard deviation first so one multiplier serves
parameters on different scales.

Prediction at arbitrary points comes in two flavours: exact KDE evaluation
(`eval_depth`) and 1-nearest-neighbour lookup of the cached depth of the
closest accepted draw (`knn_depth`), with distances measured in the
standardized coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

__all__ = [
    "BandwidthSelection",
    "DepthSurface",
    "select_bandwidth",
    "fit_depth_surface",
    "eval_depth",
    "knn_depth",
    "depth_max",
]

MIN_FIT_SIZE = 10
# Pairwise-distance work in the LOO score is O(m^2); above this many points
# the CV uses an evenly strided deterministic subset.
MAX_CV_POINTS = 3000

_GRID_LOW, _GRID_HIGH, _GRID_SIZE = 0.1, 10.0, 20


def reference_bandwidth(m: int, p: int) -> float:
    """Normal-reference bandwidth for a unit-variance coordinate (1.06 m^{-1/(p+4)})."""
    return 1.06 * m ** (-1.0 / (p + 4))


def _standardize(points: np.ndarray):
    # anchoring at the first point (rather than the mean) keeps the deviations
    # bit-identical when the whole sample is shifted by a representable
    # constant, which makes nearest-neighbour queries exactly shift-invariant
    center = points[0].astype(float).copy()
    deviations = points - center
    scale = deviations.std(axis=0)
    scale = np.where(scale > 0, scale, 1.0)
    return deviations / scale, center, scale


@dataclass(frozen=True)
class BandwidthSelection:
    """Cross-validation trace: candidate bandwidths, their scores, the winner."""

    grid: np.ndarray
    scores: np.ndarray
    chosen: float

    def __post_init__(self):
        if self.grid.size == 0 or np.any(self.grid <= 0):
            raise ValueError("bandwidth grid must be non-empty and positive")


def select_bandwidth(sample) -> BandwidthSelection:
    """Choose the KDE bandwidth by leave-one-out log-likelihood.

    Candidates are a 20-point geometric grid of multipliers in [0.1, 10]
    of the normal-reference bandwidth, applied in standardized coordinates.
    Deterministic given the sample; raises for samples smaller than
    ``MIN_FIT_SIZE`` since the score is meaningless there.
    """
    pts = np.asarray(sample, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    m, p = pts.shape
    if m < MIN_FIT_SIZE:
        raise ValueError(
            f"need at least {MIN_FIT_SIZE} accepted draws to select a bandwidth "
            f"(got {m}); increase the number of proposals")
    z, _, _ = _standardize(pts)
    if m > MAX_CV_POINTS:
        idx = np.linspace(0, m - 1, MAX_CV_POINTS).astype(int)
        z = z[idx]
        m = z.shape[0]

    d2 = _pairwise_sq(z, z)
    # leave out the point itself AND any exact duplicate: with ties in the
    # sample a zero-distance neighbour would otherwise drive the score to
    # the smallest candidate bandwidth
    d2[d2 == 0.0] = np.inf

    h_ref = reference_bandwidth(m, p)
    grid = h_ref * np.geomspace(_GRID_LOW, _GRID_HIGH, _GRID_SIZE)
    scores = np.empty(grid.size)
    for i, h in enumerate(grid):
        log_kernel = logsumexp(-0.5 * d2 / (h * h), axis=1)
        scores[i] = np.sum(log_kernel) - m * (
            math.log(m - 1) + p * (math.log(h) + 0.5 * math.log(2.0 * math.pi)))
    chosen = float(grid[int(np.argmax(scores))])
    return BandwidthSelection(grid=grid, scores=scores, chosen=chosen)


@dataclass
class DepthSurface:
    """Fitted depth estimate over parameter space.

    ``bandwidth`` is the shared multiplier in standardized coordinates;
    ``bandwidths`` are the per-coordinate kernel widths on the original
    scale.  ``cached_depths`` holds the KDE value at every accepted draw
    (in trial order), ``theta_hat`` / ``m_hat`` the polished maximizer and
    maximum.
    """

    points: np.ndarray
    center: np.ndarray
    scale: np.ndarray
    bandwidth: float
    cached_depths: np.ndarray
    theta_hat: np.ndarray
    m_hat: float
    support: np.ndarray | None = None
    selection: BandwidthSelection | None = None

    @property
    def param_dim(self) -> int:
        return self.points.shape[1]

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def bandwidths(self) -> np.ndarray:
        return self.bandwidth * self.scale

    def eval(self, theta):
        return eval_depth(self, theta)

    def knn(self, theta):
        return knn_depth(self, theta)


def _pairwise_sq(a: np.ndarray, b: np.ndarray, chunk: int = 256) -> np.ndarray:
    """Squared distances computed from explicit differences.

    Slightly slower than the inner-product expansion but free of its
    cancellation error: jointly shifting both inputs by an exactly
    representable constant reproduces the distances bit for bit.
    """
    out = np.empty((a.shape[0], b.shape[0]))
    for start in range(0, a.shape[0], chunk):
        diff = a[start:start + chunk, None, :] - b[None, :, :]
        out[start:start + chunk] = np.einsum("ijk,ijk->ij", diff, diff)
    return out


def _kde_batch(z_points: np.ndarray, z_query: np.ndarray, h: float, norm: float,
               chunk: int = 256) -> np.ndarray:
    """KDE values (already multiplied by ``norm``) at standardized queries."""
    out = np.empty(z_query.shape[0])
    inv = -0.5 / (h * h)
    for start in range(0, z_query.shape[0], chunk):
        d2 = _pairwise_sq(z_query[start:start + chunk], z_points)
        out[start:start + chunk] = norm * np.exp(logsumexp(inv * d2, axis=1))
    return out


def fit_depth_surface(points, bandwidth: float | None = None, support=None) -> DepthSurface:
    """Fit the KDE depth surface to the accepted draws.

    With ``bandwidth=None`` the multiplier comes from
    :func:`select_bandwidth` (needs >= ``MIN_FIT_SIZE`` points, and the
    kernel width per coordinate is bandwidth * coordinate std).  An explicit
    ``bandwidth`` is taken as the kernel width on the original scale and
    works for any sample size >= 1.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise ValueError("points must be a non-empty (m, p) array")
    if not np.all(np.isfinite(pts)):
        raise ValueError("accepted draws must be finite")
    m, p = pts.shape

    selection = None
    if bandwidth is None:
        selection = select_bandwidth(pts)
        z, center, scale = _standardize(pts)
        h = selection.chosen
    else:
        if bandwidth <= 0:
            raise ValueError("bandwidth must be positive")
        # explicit width on the raw scale: identity standardization
        center = np.zeros(p)
        scale = np.ones(p)
        z = pts.copy()
        h = float(bandwidth)

    norm = 1.0 / (m * (h * math.sqrt(2.0 * math.pi)) ** p * float(np.prod(scale)))
    cached = _kde_batch(z, z, h, norm)

    surface = DepthSurface(points=pts, center=center, scale=scale, bandwidth=h,
                           cached_depths=cached, theta_hat=pts[int(np.argmax(cached))],
                           m_hat=float(np.max(cached)), support=None if support is None
                           else np.asarray(support, dtype=float), selection=selection)
    theta_hat, m_hat = _polish_maximum(surface)
    surface.theta_hat = theta_hat
    surface.m_hat = m_hat
    return surface


def eval_depth(surface: DepthSurface, theta) -> float | np.ndarray:
    """Exact KDE evaluation at one point (p,) or a batch (k, p)."""
    q = np.asarray(theta, dtype=float)
    single = q.ndim <= 1
    q = np.atleast_2d(q)
    if q.shape[1] != surface.param_dim:
        raise ValueError(f"query dimension {q.shape[1]} != surface dimension {surface.param_dim}")
    zq = (q - surface.center) / surface.scale
    zp = (surface.points - surface.center) / surface.scale
    m, p = surface.points.shape
    norm = 1.0 / (m * (surface.bandwidth * math.sqrt(2.0 * math.pi)) ** p
                  * float(np.prod(surface.scale)))
    vals = _kde_batch(zp, zq, surface.bandwidth, norm)
    return float(vals[0]) if single else vals


def knn_depth(surface: DepthSurface, theta) -> float | np.ndarray:
    """Cached depth of the nearest accepted draw (standardized Euclidean).

    Exact ties go to the draw with the lowest trial index, i.e. the first
    occurrence in the stored sample.
    """
    q = np.asarray(theta, dtype=float)
    single = q.ndim <= 1
    q = np.atleast_2d(q)
    if q.shape[1] != surface.param_dim:
        raise ValueError(f"query dimension {q.shape[1]} != surface dimension {surface.param_dim}")
    zq = (q - surface.center) / surface.scale
    zp = (surface.points - surface.center) / surface.scale
    out = np.empty(q.shape[0])
    chunk = 512
    for start in range(0, q.shape[0], chunk):
        d2 = _pairwise_sq(zq[start:start + chunk], zp)
        # argmin returns the first minimizer, which is the lowest trial index
        out[start:start + chunk] = surface.cached_depths[np.argmin(d2, axis=1)]
    return float(out[0]) if single else out


def depth_max(surface: DepthSurface) -> tuple[np.ndarray, float]:
    """Maximizer and maximum of the fitted surface (computed at fit time)."""
    return surface.theta_hat, surface.m_hat


def _polish_maximum(surface: DepthSurface, iterations: int = 200):
    """Derivative-free coordinate search from the best accepted draw.

    Steps start at one kernel width per coordinate and shrink after sweeps
    with no improvement; moves are clipped to the support when one is
    attached.  Only improvements are accepted, so the refined maximum can
    never fall below the best cached depth.
    """
    best_idx = int(np.argmax(surface.cached_depths))
    x = surface.points[best_idx].astype(float).copy()
    f = float(surface.cached_depths[best_idx])
    steps = surface.bandwidths.astype(float).copy()
    steps[steps <= 0] = 1e-3
    lo = hi = None
    if surface.support is not None:
        lo, hi = surface.support[:, 0], surface.support[:, 1]
    p = x.size
    for _ in range(iterations):
        moved = False
        for j in range(p):
            for sign in (1.0, -1.0):
                cand = x.copy()
                cand[j] += sign * steps[j]
                if lo is not None:
                    cand[j] = min(max(cand[j], lo[j]), hi[j])
                val = eval_depth(surface, cand)
                if val > f:
                    x, f = cand, float(val)
                    moved = True
        if not moved:
            steps *= 0.5
            if np.all(steps < 1e-10):
                break
    return x, f
