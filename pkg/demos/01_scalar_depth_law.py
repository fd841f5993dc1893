"""Accepted draws trace the scalar depth law F(1-F).

For a unit-variance Gaussian location model with the sample mean as its
summary, the acceptance probability of a two-draw box at theta is
2 F (1 - F) with F = Phi(t_obs - theta).  The accepted parameters are then
draws from that curve normalized over the proposal support, so their
empirical CDF must match the analytic one.
"""

import numpy as np
from scipy import stats

from boxcd import GaussianLocationModel, SamplerConfig, fit_depth_surface, run_sampler

R = 100_000
model = GaussianLocationModel(n=1, support=(-6.0, 6.0))
t_obs = 0.0

out = run_sampler(model, [t_obs], SamplerConfig(r=R, s=2, seed=20))
print(f"proposals: {R},  accepted: {out.n_accepted} "
      f"(rate {out.acceptance_rate:.4f})")

# analytic target: density proportional to F(1-F) on the support
grid = np.linspace(-6, 6, 2001)
F = stats.norm.cdf(t_obs - grid)
density = F * (1 - F)
cdf = np.cumsum(density)
cdf /= cdf[-1]

# Kolmogorov-Smirnov distance between accepted draws and the target
draws = np.sort(out.accepted[:, 0])
target_at_draws = np.interp(draws, grid, cdf)
ecdf = np.arange(1, draws.size + 1) / draws.size
ks = np.max(np.abs(ecdf - target_at_draws))
print(f"KS distance to the analytic F(1-F) law: {ks:.4f}")

# the depth maximizer estimates the point where F = 1/2, i.e. theta = t_obs
surface = fit_depth_surface(out.accepted, support=out.support)
print(f"depth maximizer: {surface.theta_hat[0]:+.4f}  (analytic median {t_obs:+.4f})")
print(f"estimated maximum depth: {surface.m_hat:.4f}")
