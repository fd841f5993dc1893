"""Box-acceptance rejection sampler.

Each trial proposes a parameter uniformly on a bounded support, simulates
``S`` pseudo-datasets, forms the axis-aligned box spanned per coordinate by
the extreme order statistics of their summaries, and accepts the proposal
when the observed summary falls inside the box.  Accepted parameters are
draws from a density proportional to the box-acceptance depth; for a scalar
continuous summary with CDF ``F`` at the observed value the acceptance
probability is ``1 - F**S - (1 - F)**S`` (``2 F (1 - F)`` for S = 2).

The membership test is half-open per coordinate, ``lower <= t < upper``:
the two disjoint orderings that make up the S = 2 acceptance event stay
exhaustive and integer-valued summaries carry no double-counted ties.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .models import Model

__all__ = [
    "BoxRegion",
    "SamplerConfig",
    "SamplerOutput",
    "SupportDiagnostic",
    "TrialSimulationError",
    "propose",
    "build_box",
    "box_contains",
    "run_sampler",
    "scalar_acceptance_oracle",
    "support_diagnostic",
]


class TrialSimulationError(RuntimeError):
    """Model simulation failed inside the sampler; carries the trial index."""

    def __init__(self, trial_index: int, message: str):
        super().__init__(f"trial {trial_index}: {message}")
        self.trial_index = trial_index


def _check_support(support) -> np.ndarray:
    support = np.asarray(support, dtype=float)
    if support.ndim != 2 or support.shape[1] != 2:
        raise ValueError("support must have shape (p, 2)")
    if not np.all(np.isfinite(support)):
        raise ValueError("support bounds must be finite")
    if not np.all(support[:, 0] < support[:, 1]):
        raise ValueError("support lower bounds must be strictly below upper bounds")
    return support


@dataclass(frozen=True)
class BoxRegion:
    """Axis-aligned hyper-rectangle in summary space."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ValueError("box edges must be 1-D vectors of equal length")
        if np.any(lower > upper):
            raise ValueError("box lower edges must not exceed upper edges")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def dim(self) -> int:
        return self.lower.size

    def contains(self, t_obs) -> bool:
        return box_contains(self, t_obs)


def propose(support, rng: np.random.Generator) -> np.ndarray:
    """One parameter drawn uniformly on the hyper-rectangle ``support``."""
    support = _check_support(support)
    u = rng.random(support.shape[0])
    return support[:, 0] + u * (support[:, 1] - support[:, 0])


def build_box(summaries) -> BoxRegion:
    """Coordinate-wise min/max box of a stack of summary vectors.

    ``summaries`` is an (S, d) array or a sequence of S length-d vectors,
    S >= 2.  For S = 2 this is the box spanned by the two draws; for larger
    S the edges are the extreme order statistics per coordinate.
    """
    arr = np.asarray(summaries, dtype=float)
    if arr.ndim != 2:
        raise ValueError("summaries must form a 2-D (S, d) array")
    if arr.shape[0] < 2:
        raise ValueError("need at least two summary vectors to build a box")
    return BoxRegion(arr.min(axis=0), arr.max(axis=0))


def box_contains(box: BoxRegion, t_obs) -> bool:
    """Half-open membership: lower_j <= t_j < upper_j for every coordinate."""
    t = np.atleast_1d(np.asarray(t_obs, dtype=float))
    if t.shape != box.lower.shape:
        raise ValueError(f"observed summary has dimension {t.size}, box has {box.dim}")
    return bool(np.all((box.lower <= t) & (t < box.upper)))


def scalar_acceptance_oracle(F: float, S: int) -> float:
    """Exact acceptance probability for a scalar continuous summary.

    ``F`` is the summary CDF at the observed value under the proposal; the
    box of S draws contains the observation with probability
    ``1 - F**S - (1 - F)**S``.
    """
    if not 0.0 <= F <= 1.0:
        raise ValueError("F must lie in [0, 1]")
    if S < 2 or S % 2 != 0:
        raise ValueError("S must be an even integer >= 2")
    return 1.0 - F**S - (1.0 - F) ** S


@dataclass(frozen=True)
class SamplerConfig:
    """Sampler settings: R proposals, S pseudo-samples each, master seed."""

    r: int
    s: int = 2
    seed: int = 0
    support: np.ndarray | None = None
    store_summaries: bool = False

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("R must be >= 1")
        if self.s < 2 or self.s % 2 != 0:
            raise ValueError("S must be an even integer >= 2")
        if self.support is not None:
            object.__setattr__(self, "support", _check_support(self.support))


@dataclass(frozen=True)
class SupportDiagnostic:
    """Fraction of accepted mass in the outer edge bands of each coordinate."""

    band: float
    threshold: float
    low_fraction: np.ndarray
    high_fraction: np.ndarray
    low_flag: np.ndarray
    high_flag: np.ndarray

    @property
    def flagged(self) -> bool:
        return bool(np.any(self.low_flag) or np.any(self.high_flag))


@dataclass
class SamplerOutput:
    """Result of one sampler run; accepted draws are in trial order."""

    accepted: np.ndarray
    trial_indices: np.ndarray
    n_proposed: int
    support: np.ndarray
    t_obs: np.ndarray
    seed: int
    s: int
    boundary_diagnostic: SupportDiagnostic | None = None
    proposals: np.ndarray | None = None
    summaries: np.ndarray | None = None
    accepted_mask: np.ndarray | None = None

    @property
    def n_accepted(self) -> int:
        return int(self.accepted.shape[0])

    @property
    def acceptance_rate(self) -> float:
        return self.n_accepted / self.n_proposed


def run_sampler(model: Model, t_obs, config: SamplerConfig) -> SamplerOutput:
    """Run R independent propose/simulate/box/test trials.

    The j-th trial consumes a random stream derived solely from
    ``(config.seed, j)``, so the output is bit-identical however trials are
    scheduled.  With ``store_summaries`` the proposals, the (R, S, d)
    summary stack, and the per-trial acceptance mask are retained for
    diagnostics; by default only accepted parameters are kept.
    """
    t_obs = np.atleast_1d(np.asarray(t_obs, dtype=float))
    if t_obs.shape != (model.summary_dim,):
        raise ValueError(
            f"observed summary must have length {model.summary_dim}, got {t_obs.shape}")
    support = config.support if config.support is not None else model.default_support
    support = _check_support(support)
    if support.shape[0] != model.param_dim:
        raise ValueError("support dimension does not match the model parameter dimension")

    lo = support[:, 0]
    width = support[:, 1] - support[:, 0]
    p, d, s = model.param_dim, model.summary_dim, config.s

    accepted = []
    trial_indices = []
    store = config.store_summaries
    proposals = np.empty((config.r, p)) if store else None
    all_summaries = np.empty((config.r, s, d)) if store else None
    mask = np.zeros(config.r, dtype=bool) if store else None

    for j in range(config.r):
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(config.seed, spawn_key=(j,))))
        theta = lo + rng.random(p) * width
        try:
            summaries = model.simulate_summaries(theta, s, rng)
        except Exception as exc:
            raise TrialSimulationError(j, str(exc)) from exc
        box_lo = summaries.min(axis=0)
        box_hi = summaries.max(axis=0)
        ok = bool(np.all((box_lo <= t_obs) & (t_obs < box_hi)))
        if ok:
            accepted.append(theta)
            trial_indices.append(j)
        if store:
            proposals[j] = theta
            all_summaries[j] = summaries
            mask[j] = ok

    accepted_arr = np.array(accepted, dtype=float).reshape(len(accepted), p)
    output = SamplerOutput(
        accepted=accepted_arr,
        trial_indices=np.array(trial_indices, dtype=np.int64),
        n_proposed=config.r,
        support=support,
        t_obs=t_obs,
        seed=config.seed,
        s=s,
        proposals=proposals,
        summaries=all_summaries,
        accepted_mask=mask,
    )
    output.boundary_diagnostic = support_diagnostic(output, support)
    return output


def support_diagnostic(output: SamplerOutput, support, band: float = 0.01,
                       threshold: float = 0.05) -> SupportDiagnostic:
    """Flag proposal-support edges that carry non-negligible accepted mass.

    For each parameter coordinate, computes the fraction of accepted draws
    that fall within the outer ``band`` fraction of the support range on
    each side; a side is flagged when that fraction reaches ``threshold``,
    a sign the support may truncate depth mass.
    """
    if not 0.0 < band < 0.5:
        raise ValueError("band must lie in (0, 0.5)")
    support = _check_support(support)
    p = support.shape[0]
    width = support[:, 1] - support[:, 0]
    if output.n_accepted == 0:
        zeros = np.zeros(p)
        flags = np.zeros(p, dtype=bool)
        return SupportDiagnostic(band, threshold, zeros, zeros.copy(),
                                 flags, flags.copy())
    pts = output.accepted
    low = (pts <= support[:, 0] + band * width).mean(axis=0)
    high = (pts >= support[:, 1] - band * width).mean(axis=0)
    return SupportDiagnostic(band, threshold, low, high,
                             low >= threshold, high >= threshold)
