"""Generative models: simulate data at a parameter, reduce to summary statistics.

Each model is immutable after construction and exposes the contract used by
the box-acceptance sampler:

* ``param_dim`` / ``summary_dim`` -- dimensions of the parameter vector and
  of the summary statistic,
* ``default_support`` -- a ``(param_dim, 2)`` array of finite per-coordinate
  proposal bounds,
* ``simulate(theta, rng)`` -- one dataset drawn at ``theta``,
* ``summarize(data)`` -- the summary vector of a dataset,
* ``log_likelihood(theta, data)`` -- exact log-likelihood where tractable
  (``has_likelihood`` says whether it is).

All randomness flows through the explicit ``rng`` argument, so identical
``(model, theta, seed)`` triples reproduce datasets bit for bit and models
can be shared freely across worker processes.
"""

from __future__ import annotations

import abc
import math

import numpy as np

__all__ = [
    "CapabilityError",
    "Model",
    "GaussianLocationModel",
    "LogisticRegressionModel",
    "MultivariateTModel",
    "MixtureModel",
    "RickerModel",
    "build_model",
    "MODEL_NAMES",
]

_LOG_2PI = math.log(2.0 * math.pi)


class CapabilityError(RuntimeError):
    """Requested an operation the model does not support (e.g. an intractable likelihood)."""


def _as_support(bounds, param_dim: int) -> np.ndarray:
    """Normalize proposal bounds to a float array of shape (param_dim, 2)."""
    arr = np.asarray(bounds, dtype=float)
    if arr.ndim == 1 and arr.shape == (2,):
        arr = np.tile(arr, (param_dim, 1))
    if arr.shape != (param_dim, 2):
        raise ValueError(f"support must have shape ({param_dim}, 2), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("support bounds must be finite")
    if not np.all(arr[:, 0] < arr[:, 1]):
        raise ValueError("support lower bounds must be strictly below upper bounds")
    return arr


class Model(abc.ABC):
    """Behavioral contract shared by all generative models."""

    name: str = "model"
    has_likelihood: bool = False

    param_dim: int
    summary_dim: int
    default_support: np.ndarray

    def check_theta(self, theta) -> np.ndarray:
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        if theta.shape != (self.param_dim,):
            raise ValueError(
                f"{self.name}: parameter must have length {self.param_dim}, got shape {theta.shape}"
            )
        if not np.all(np.isfinite(theta)):
            raise ValueError(f"{self.name}: parameter entries must be finite")
        return theta

    @abc.abstractmethod
    def simulate(self, theta, rng: np.random.Generator) -> np.ndarray:
        """Draw one dataset at ``theta``."""

    @abc.abstractmethod
    def summarize(self, data) -> np.ndarray:
        """Reduce a dataset to the summary vector (length ``summary_dim``)."""

    def simulate_summaries(self, theta, size: int, rng: np.random.Generator) -> np.ndarray:
        """Summaries of ``size`` independent pseudo-datasets, shape (size, summary_dim).

        Subclasses may vectorize; the result must stay a deterministic
        function of ``(theta, size, rng state)``.
        """
        theta = self.check_theta(theta)
        out = np.empty((size, self.summary_dim))
        for i in range(size):
            out[i] = self.summarize(self.simulate(theta, rng))
        return out

    def log_likelihood(self, theta, data) -> float:
        raise CapabilityError(f"{self.name}: log-likelihood is not available")

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"<{type(self).__name__} p={self.param_dim} d={self.summary_dim}>"


class GaussianLocationModel(Model):
    """``n`` i.i.d. N(theta, 1) observations summarized by their mean.

    The summary CDF is available in closed form, which makes this the
    reference model for calibration checks: the acceptance probability of a
    two-draw box at ``theta`` is ``2 F (1 - F)`` with
    ``F = Phi(sqrt(n) (t_obs - theta))``.
    """

    name = "gaussian"
    has_likelihood = True

    def __init__(self, n: int = 1, support=(-6.0, 6.0)):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = int(n)
        self.param_dim = 1
        self.summary_dim = 1
        self.default_support = _as_support(support, 1)

    def simulate(self, theta, rng):
        theta = self.check_theta(theta)
        return theta[0] + rng.standard_normal(self.n)

    def summarize(self, data):
        data = np.asarray(data, dtype=float)
        return np.array([data.mean()])

    def simulate_summaries(self, theta, size, rng):
        theta = self.check_theta(theta)
        draws = theta[0] + rng.standard_normal((size, self.n))
        return draws.mean(axis=1, keepdims=True)

    def summary_cdf(self, theta, t) -> float:
        """Exact CDF of the summary at value ``t`` under ``theta``."""
        from scipy.stats import norm

        theta = self.check_theta(theta)
        return float(norm.cdf((float(t) - theta[0]) * math.sqrt(self.n)))

    def log_likelihood(self, theta, data):
        theta = self.check_theta(theta)
        data = np.asarray(data, dtype=float)
        resid = data - theta[0]
        return float(-0.5 * data.size * _LOG_2PI - 0.5 * np.dot(resid, resid))


class LogisticRegressionModel(Model):
    """Bernoulli responses with logistic link on a fixed design matrix.

    The summary is the sufficient statistic ``X.T @ y`` (dimension p), so
    it is integer valued; the half-open box test in the sampler handles the
    resulting ties without double counting.
    """

    name = "logistic"
    has_likelihood = True

    def __init__(self, design, support=(-6.0, 6.0)):
        design = np.asarray(design, dtype=float)
        if design.ndim != 2:
            raise ValueError("design must be a 2-D array")
        self.design = design
        self.design.setflags(write=False)
        self.n, self.param_dim = design.shape
        self.summary_dim = self.param_dim
        self.default_support = _as_support(support, self.param_dim)

    @classmethod
    def with_random_design(cls, n: int = 20, p: int = 3, design_seed: int = 0,
                           support=(-6.0, 6.0)) -> "LogisticRegressionModel":
        """Standard-normal design drawn once from ``design_seed`` and frozen."""
        rng = np.random.default_rng(np.random.SeedSequence(design_seed))
        return cls(rng.standard_normal((n, p)), support=support)

    def success_probabilities(self, theta) -> np.ndarray:
        theta = self.check_theta(theta)
        eta = self.design @ theta
        return 1.0 / (1.0 + np.exp(-eta))

    def simulate(self, theta, rng):
        probs = self.success_probabilities(theta)
        return (rng.random(self.n) < probs).astype(np.int8)

    def summarize(self, data):
        data = np.asarray(data, dtype=float)
        if data.shape != (self.n,):
            raise ValueError(f"logistic dataset must have length {self.n}")
        return self.design.T @ data

    def simulate_summaries(self, theta, size, rng):
        probs = self.success_probabilities(theta)
        ys = rng.random((size, self.n)) < probs
        return ys.astype(float) @ self.design

    def log_likelihood(self, theta, data):
        theta = self.check_theta(theta)
        data = np.asarray(data, dtype=float)
        eta = self.design @ theta
        # log sigma(eta)*y + log(1-sigma(eta))*(1-y), stably via logaddexp
        return float(np.sum(data * eta - np.logaddexp(0.0, eta)))


class MultivariateTModel(Model):
    """i.i.d. multivariate Student-t draws with unknown location.

    Scale matrix and degrees of freedom are fixed and known; the summary is
    the vector of component-wise sample medians.  Sampling uses the
    scale-mixture representation (Gaussian over sqrt(chi-square / nu)) with
    a Cholesky factor computed once.
    """

    name = "mvt"
    has_likelihood = True

    def __init__(self, sigma, nu: float = 10.0, n: int = 10, support=(-5.0, 5.0)):
        sigma = np.asarray(sigma, dtype=float)
        if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
            raise ValueError("sigma must be a square matrix")
        if not np.allclose(sigma, sigma.T):
            raise ValueError("sigma must be symmetric")
        try:
            self._chol = np.linalg.cholesky(sigma)
        except np.linalg.LinAlgError as exc:
            raise ValueError("sigma must be positive definite") from exc
        if nu <= 0:
            raise ValueError("nu must be positive")
        self.sigma = sigma
        self.sigma.setflags(write=False)
        self.nu = float(nu)
        self.n = int(n)
        self.param_dim = sigma.shape[0]
        self.summary_dim = self.param_dim
        self.default_support = _as_support(support, self.param_dim)
        sign, logdet = np.linalg.slogdet(sigma)
        self._logdet = float(logdet)
        self._sigma_inv = np.linalg.inv(sigma)

    def simulate(self, theta, rng):
        theta = self.check_theta(theta)
        z = rng.standard_normal((self.n, self.param_dim)) @ self._chol.T
        w = rng.chisquare(self.nu, self.n)
        return theta + z / np.sqrt(w / self.nu)[:, None]

    def summarize(self, data):
        data = np.asarray(data, dtype=float)
        if data.shape != (self.n, self.param_dim):
            raise ValueError(f"dataset must have shape ({self.n}, {self.param_dim})")
        return np.median(data, axis=0)

    def simulate_summaries(self, theta, size, rng):
        theta = self.check_theta(theta)
        z = rng.standard_normal((size, self.n, self.param_dim)) @ self._chol.T
        w = rng.chisquare(self.nu, (size, self.n))
        draws = theta + z / np.sqrt(w / self.nu)[:, :, None]
        return np.median(draws, axis=1)

    def log_likelihood(self, theta, data):
        theta = self.check_theta(theta)
        data = np.asarray(data, dtype=float)
        d = self.param_dim
        resid = data - theta
        maha = np.einsum("ij,jk,ik->i", resid, self._sigma_inv, resid)
        const = (
            math.lgamma((self.nu + d) / 2.0)
            - math.lgamma(self.nu / 2.0)
            - 0.5 * d * math.log(self.nu * math.pi)
            - 0.5 * self._logdet
        )
        terms = const - 0.5 * (self.nu + d) * np.log1p(maha / self.nu)
        return float(terms.sum())


class MixtureModel(Model):
    """Symmetric two-component normal mixture 0.5 N(-theta,1) + 0.5 N(theta,1).

    The summary is the full ordered sample (ascending, stable), so the
    summary dimension equals the sample size.
    """

    name = "mixture"
    has_likelihood = True

    def __init__(self, n: int = 10, support=(0.0, 3.0)):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = int(n)
        self.param_dim = 1
        self.summary_dim = self.n
        self.default_support = _as_support(support, 1)

    def simulate(self, theta, rng):
        theta = self.check_theta(theta)
        signs = np.where(rng.random(self.n) < 0.5, -1.0, 1.0)
        return signs * theta[0] + rng.standard_normal(self.n)

    def summarize(self, data):
        data = np.asarray(data, dtype=float)
        if data.shape != (self.n,):
            raise ValueError(f"mixture dataset must have length {self.n}")
        return np.sort(data, kind="stable")

    def simulate_summaries(self, theta, size, rng):
        theta = self.check_theta(theta)
        signs = np.where(rng.random((size, self.n)) < 0.5, -1.0, 1.0)
        draws = signs * theta[0] + rng.standard_normal((size, self.n))
        draws.sort(axis=1)
        return draws

    def log_likelihood(self, theta, data):
        theta = self.check_theta(theta)
        data = np.asarray(data, dtype=float)
        a = -0.5 * (data - theta[0]) ** 2
        b = -0.5 * (data + theta[0]) ** 2
        # log(0.5 e^a + 0.5 e^b) per observation, stably
        return float(np.sum(np.logaddexp(a, b) - math.log(2.0) - 0.5 * _LOG_2PI))


class RickerModel(Model):
    """Stochastic Ricker population dynamics observed through Poisson counts.

    Latent recursion ``log N_t = log r + log N_{t-1} - N_{t-1} + sigma e_t``
    with ``N_0`` fixed, observed counts ``y_t ~ Poisson(phi N_t)`` for
    t = 1..T.  Two inference variants:

    * growth-rate only (``infer_noise=False``): parameter is ``log r`` with
      the innovation variance held at ``sigma2``; summary is the quartile
      triple (q25, median, q75) of the counts.
    * growth rate and noise (``infer_noise=True``): parameter is
      ``(log r, sigma^2)``; summary is the raw series without the first
      observation (dimension T - 1).

    The likelihood is intractable (latent states are never observed).
    """

    name = "ricker"
    has_likelihood = False

    SUMMARY_KINDS = ("quantiles", "series")

    def __init__(self, *, series_length: int = 50, phi: float = 10.0, n0: float = 1.0,
                 infer_noise: bool = False, sigma2: float | None = None,
                 summary: str = "quantiles", support=None):
        if phi <= 0:
            raise ValueError("phi must be positive")
        if n0 <= 0:
            raise ValueError("initial population must be positive")
        if series_length < 2:
            raise ValueError("series length must be >= 2")
        if summary not in self.SUMMARY_KINDS:
            raise ValueError(f"summary must be one of {self.SUMMARY_KINDS}")
        self.series_length = int(series_length)
        self.phi = float(phi)
        self.n0 = float(n0)
        self.infer_noise = bool(infer_noise)
        if infer_noise:
            if sigma2 is not None:
                raise ValueError("sigma2 is inferred; do not fix it")
            self.sigma2 = None
            self.param_dim = 2
            default = [(0.0, 5.0), (0.0, 5.0)]
        else:
            if sigma2 is None or sigma2 < 0:
                raise ValueError("fixed sigma2 must be a non-negative number")
            self.sigma2 = float(sigma2)
            self.param_dim = 1
            default = [(0.0, 5.0)]
        self.summary = summary
        self.summary_dim = 3 if summary == "quantiles" else self.series_length - 1
        self.default_support = _as_support(support if support is not None else default,
                                           self.param_dim)

    def _unpack(self, theta):
        theta = self.check_theta(theta)
        log_r = theta[0]
        sigma2 = theta[1] if self.infer_noise else self.sigma2
        if sigma2 < 0:
            raise ValueError("sigma2 must be non-negative")
        return log_r, sigma2

    def latent_path(self, theta, rng) -> np.ndarray:
        """Latent populations N_1..N_T; exposed for diagnostics and tests."""
        log_r, sigma2 = self._unpack(theta)
        sigma = math.sqrt(sigma2)
        shocks = sigma * rng.standard_normal(self.series_length)
        log_n = math.log(self.n0)
        path = np.empty(self.series_length)
        for t in range(self.series_length):
            log_n = log_r + log_n - math.exp(log_n) + shocks[t]
            # floor keeps N strictly positive through exp underflow
            if log_n < -700.0:
                log_n = -700.0
            path[t] = math.exp(log_n)
        return path

    def simulate(self, theta, rng):
        path = self.latent_path(theta, rng)
        return rng.poisson(self.phi * path).astype(np.int64)

    def summarize(self, data):
        data = np.asarray(data, dtype=float)
        if data.shape != (self.series_length,):
            raise ValueError(f"count series must have length {self.series_length}")
        if self.summary == "quantiles":
            return np.quantile(data, [0.25, 0.5, 0.75])
        return data[1:]

    def simulate_summaries(self, theta, size, rng):
        log_r, sigma2 = self._unpack(theta)
        sigma = math.sqrt(sigma2)
        T = self.series_length
        shocks = sigma * rng.standard_normal((size, T))
        log_n = np.full(size, math.log(self.n0))
        paths = np.empty((size, T))
        for t in range(T):
            log_n = log_r + log_n - np.exp(log_n) + shocks[:, t]
            np.maximum(log_n, -700.0, out=log_n)
            paths[:, t] = np.exp(log_n)
        counts = rng.poisson(self.phi * paths).astype(float)
        if self.summary == "quantiles":
            return np.quantile(counts, [0.25, 0.5, 0.75], axis=1).T
        return counts[:, 1:]


MODEL_NAMES = ("gaussian", "logistic", "mvt", "mixture", "ricker")

_STUDY_SIGMA = np.array([[2.0, -1.0, 0.4],
                         [-1.0, 1.6, 0.7],
                         [0.4, 0.7, 1.0]])


def build_model(name: str, **params) -> Model:
    """Construct a model by name with study defaults for unspecified settings.

    Recognized names: ``gaussian`` (n), ``logistic`` (n, p, design_seed),
    ``mvt`` (n, nu, sigma), ``mixture`` (n), ``ricker`` (series_length, phi,
    n0, sigma2, infer_noise, summary).  Every model accepts ``support``.
    """
    name = name.lower()
    if name == "gaussian":
        return GaussianLocationModel(n=int(params.pop("n", 1)), **params)
    if name == "logistic":
        return LogisticRegressionModel.with_random_design(
            n=int(params.pop("n", 20)), p=int(params.pop("p", 3)),
            design_seed=int(params.pop("design_seed", 0)), **params)
    if name == "mvt":
        sigma = params.pop("sigma", _STUDY_SIGMA)
        return MultivariateTModel(sigma, nu=float(params.pop("nu", 10.0)),
                                  n=int(params.pop("n", 10)), **params)
    if name == "mixture":
        return MixtureModel(n=int(params.pop("n", 10)), **params)
    if name == "ricker":
        kwargs = dict(
            series_length=int(params.pop("series_length", 50)),
            phi=float(params.pop("phi", 10.0)),
            n0=float(params.pop("n0", 1.0)),
            infer_noise=bool(params.pop("infer_noise", False)),
            summary=str(params.pop("summary", "quantiles")),
        )
        if not kwargs["infer_noise"]:
            kwargs["sigma2"] = float(params.pop("sigma2", 2.0))
        else:
            params.pop("sigma2", None)
        return RickerModel(**kwargs, **params)
    raise ValueError(f"unknown model {name!r}; expected one of {MODEL_NAMES}")
