"""Confidence regions and intervals from a fitted depth surface.

A region at level 1 - alpha is a super-level set of the depth estimate,
``{theta : depth(theta) >= c}``.  Two threshold rules are available:

* ``level-set-alphaM``: ``c = alpha * M_hat``, the direct level-set rule.
* ``scalar-exact-equitail``: ``c = (1 - (1 - alpha)^2) * M_hat``.  For a
  scalar parameter with a continuous scalar summary, the normalized depth
  at the true parameter is distributed as ``4 U (1 - U)`` with U uniform,
  whose alpha-quantile is ``1 - (1 - alpha)^2``; the resulting set is the
  equi-tailed region ``{alpha/2 <= F <= 1 - alpha/2}``, exactly calibrated.
* ``depth-quantile``: ``c`` is the empirical alpha-quantile of the depth
  values of the accepted draws themselves.  This is the general-dimension
  operational reading of thresholding the depth at its own lower
  alpha-quantile; the two fraction-of-maximum rules are closed forms of it
  in special cases.

The rules genuinely differ (``1 - (1 - a)^2 > a`` on (0,1), so the alphaM
region always contains the equi-tailed one) and the replication studies
report all of them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .depth import DepthSurface, eval_depth, knn_depth

__all__ = [
    "LEVEL_SET_ALPHA_M",
    "SCALAR_EXACT_EQUITAIL",
    "DEPTH_QUANTILE",
    "RULE_KINDS",
    "QUERY_MODES",
    "RegionRule",
    "ConfidenceRegion",
    "ScalarInterval",
    "region_threshold",
    "surface_threshold",
    "build_region",
    "member",
    "scalar_interval",
    "export_region_grid",
]

LEVEL_SET_ALPHA_M = "level-set-alphaM"
SCALAR_EXACT_EQUITAIL = "scalar-exact-equitail"
DEPTH_QUANTILE = "depth-quantile"
RULE_KINDS = (LEVEL_SET_ALPHA_M, SCALAR_EXACT_EQUITAIL, DEPTH_QUANTILE)
QUERY_MODES = ("kde", "knn")

SCALAR_INTERVAL_GRID = 512


@dataclass(frozen=True)
class RegionRule:
    """Threshold rule: which fraction of the depth maximum bounds the region."""

    kind: str
    alpha: float

    def __post_init__(self):
        if self.kind not in RULE_KINDS:
            raise ValueError(f"rule kind must be one of {RULE_KINDS}, got {self.kind!r}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie strictly inside (0, 1)")

    def fraction(self) -> float:
        if self.kind == LEVEL_SET_ALPHA_M:
            return self.alpha
        if self.kind == SCALAR_EXACT_EQUITAIL:
            return 1.0 - (1.0 - self.alpha) ** 2
        raise ValueError(f"{self.kind}: no fixed fraction of the maximum; "
                         "the threshold comes from the fitted surface")


def region_threshold(m_hat: float, rule: RegionRule) -> float:
    """Depth cutoff for the fraction-of-maximum rules."""
    if m_hat <= 0:
        raise ValueError("depth maximum must be positive")
    return rule.fraction() * m_hat


def surface_threshold(surface: DepthSurface, rule: RegionRule) -> float:
    """Depth cutoff for any rule, taken from the fitted surface."""
    if rule.kind == DEPTH_QUANTILE:
        return float(np.quantile(surface.cached_depths, rule.alpha))
    return region_threshold(surface.m_hat, rule)


@dataclass
class ConfidenceRegion:
    """Super-level set of a depth surface at a fixed threshold."""

    surface: DepthSurface
    rule: RegionRule
    threshold: float

    def member(self, theta, query_mode: str = "kde") -> bool | np.ndarray:
        return member(self, theta, query_mode)


def build_region(surface: DepthSurface, rule: RegionRule) -> ConfidenceRegion:
    return ConfidenceRegion(surface=surface, rule=rule,
                            threshold=surface_threshold(surface, rule))


def member(region: ConfidenceRegion, theta, query_mode: str = "kde"):
    """True where the queried depth reaches the region threshold."""
    if query_mode not in QUERY_MODES:
        raise ValueError(f"query_mode must be one of {QUERY_MODES}")
    depth_fn = eval_depth if query_mode == "kde" else knn_depth
    vals = depth_fn(region.surface, theta)
    if np.isscalar(vals) or getattr(vals, "ndim", 0) == 0:
        return bool(vals >= region.threshold)
    return np.asarray(vals) >= region.threshold


@dataclass(frozen=True)
class ScalarInterval:
    lo: float
    hi: float
    alpha: float
    threshold: float
    multimodal: bool

    @property
    def length(self) -> float:
        return self.hi - self.lo


def scalar_interval(surface: DepthSurface, alpha: float,
                    grid_size: int = SCALAR_INTERVAL_GRID,
                    rule_kind: str = SCALAR_EXACT_EQUITAIL) -> ScalarInterval:
    """Depth interval for a scalar parameter on a fixed grid over the support.

    Returns the outermost grid points whose KDE depth reaches the threshold.
    If the super-level set on the grid is disconnected the connected hull is
    returned with ``multimodal=True``.
    """
    if surface.param_dim != 1:
        raise ValueError("scalar_interval requires a one-dimensional parameter")
    if surface.support is None:
        raise ValueError("surface must carry the proposal support to grid an interval")
    rule = RegionRule(rule_kind, alpha)
    c = surface_threshold(surface, rule)
    grid = np.linspace(surface.support[0, 0], surface.support[0, 1], grid_size)
    depths = eval_depth(surface, grid[:, None])
    inside = depths >= c
    idx = np.flatnonzero(inside)
    if idx.size == 0:
        # threshold sits above every grid value (peak between grid points)
        theta = float(surface.theta_hat[0])
        return ScalarInterval(theta, theta, alpha, c, False)
    lo, hi = float(grid[idx[0]]), float(grid[idx[-1]])
    multimodal = bool(np.any(~inside[idx[0]:idx[-1] + 1]))
    return ScalarInterval(lo, hi, alpha, c, multimodal)


def export_region_grid(region: ConfidenceRegion, lattice,
                       query_mode: str = "kde") -> dict:
    """Evaluate the region on a rectangular lattice for contour plotting.

    ``lattice`` is a sequence of per-coordinate 1-D arrays (or an int per
    coordinate, meaning that many equispaced points across the support).
    Only parameter dimensions up to 3 are supported; above that, the subset
    of accepted draws with depth above the threshold is the practical
    representation.  Lattice points must lie inside the support when the
    surface carries one.

    Returns a dict with ``columns`` (names) and ``rows`` (ndarray, one row
    per lattice point: coordinates, depth, in_region flag).
    """
    p = region.surface.param_dim
    if p > 3:
        raise ValueError(
            "lattice export supports at most 3 parameter dimensions; use the "
            "accepted-draw subset representation for higher dimensions")
    if np.isscalar(lattice):
        lattice = [lattice] * p
    if len(lattice) != p:
        raise ValueError(f"lattice must specify {p} axes")
    support = region.surface.support
    axes = []
    for j, spec in enumerate(lattice):
        if np.isscalar(spec):
            if support is None:
                raise ValueError("integer lattice specs need a surface support")
            axes.append(np.linspace(support[j, 0], support[j, 1], int(spec)))
        else:
            axes.append(np.asarray(spec, dtype=float))
    if support is not None:
        for j, ax in enumerate(axes):
            if ax.min() < support[j, 0] or ax.max() > support[j, 1]:
                raise ValueError(
                    f"lattice axis {j} extends outside the proposal support "
                    f"[{support[j, 0]}, {support[j, 1]}]")
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.column_stack([m.ravel() for m in mesh])
    depth_fn = eval_depth if query_mode == "kde" else knn_depth
    depths = np.atleast_1d(depth_fn(region.surface, points))
    flags = depths >= region.threshold
    rows = np.column_stack([points, depths, flags.astype(float)])
    columns = [f"theta_{j + 1}" for j in range(p)] + ["depth", "in_region"]
    return {"columns": columns, "rows": rows, "threshold": region.threshold,
            "alpha": region.rule.alpha, "rule": region.rule.kind}
