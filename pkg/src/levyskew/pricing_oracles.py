"""Independent price oracles: Merton's Poisson-mixture series and exact terminal-law Monte Carlo."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm, poisson

from .errors import ParameterOutOfRange, WrongFamily
from .levy_models import LevyModel, MarketParams, Merton

MC_BLOCK = 1 << 16


@dataclass(frozen=True)
class McResult:
    estimate: float
    std_error: float
    n_paths: int
    seed: int


def bs_price(s0, strike, r, delta, sigma, t, is_call=True):
    """Black-Scholes-Merton price with continuous dividend yield ``delta``."""
    fwd = s0 * math.exp((r - delta) * t)
    disc = math.exp(-r * t)
    if sigma * math.sqrt(t) == 0:
        intrinsic = fwd - strike if is_call else strike - fwd
        return disc * max(intrinsic, 0.0)
    sd = sigma * math.sqrt(t)
    d1 = (math.log(fwd / strike) + 0.5 * sd * sd) / sd
    d2 = d1 - sd
    if is_call:
        return disc * (fwd * norm.cdf(d1) - strike * norm.cdf(d2))
    return disc * (strike * norm.cdf(-d2) - fwd * norm.cdf(-d1))


def _merton_parts(model: LevyModel):
    if model.jumps is None:
        return 0.0, 0.0, 1.0
    if not isinstance(model.jumps, Merton):
        raise WrongFamily(f"expected Merton jumps, got {model.family}")
    j = model.jumps
    return j.lam, j.mu, j.delta_j


def merton_series(market: MarketParams, model: LevyModel, strike: float, n_terms: int = 40,
                  is_call: bool = True) -> float:
    """Merton price as a Poisson mixture of lognormal prices, n = 0..n_terms.

    Conditional on n jumps, log(S_T/S0) ~ N(aT + n mu, sigma^2 T + n delta_j^2)
    with the model's own drift ``a``; this equals the textbook form with
    lambda' = lambda exp(mu + delta_j^2/2) and shifted rates when the model is
    mean-corrected.
    """
    if n_terms < 1:
        raise ParameterOutOfRange(f"n_terms must be >= 1, got {n_terms}")
    if model.jumps is not None and not isinstance(model.jumps, Merton):
        raise WrongFamily(f"merton_series needs Merton jumps, got {model.family}")
    lam, mu, dj = _merton_parts(model)
    t = market.t
    n = np.arange(n_terms + 1)
    weights = poisson.pmf(n, lam * t) if lam > 0 else (n == 0).astype(float)
    total = 0.0
    for k, w in zip(n, weights):
        if w == 0.0:
            continue
        mean = model.a * t + k * mu
        var = model.sigma**2 * t + k * dj * dj
        # lognormal with E[S_T | n] = s0 exp(mean + var/2)
        fwd = market.s0 * math.exp(mean + 0.5 * var)
        vol = math.sqrt(var / t)
        # undiscounted Black price on the conditional forward
        total += w * math.exp(-market.r * t) * bs_price(fwd, strike, 0.0, 0.0, vol, t, is_call)
    return float(total)


def _simulate_block(market, model, strike, is_call, seed, block, n):
    lam, mu, dj = _merton_parts(model)
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, block])))
    t = market.t
    z = rng.standard_normal(n)
    x = model.a * t + model.sigma * math.sqrt(t) * z
    if lam > 0:
        counts = rng.poisson(lam * t, n)
        x += counts * mu + dj * np.sqrt(counts) * rng.standard_normal(n)
    s_t = market.s0 * np.exp(x)
    payoff = np.maximum(s_t - strike, 0.0) if is_call else np.maximum(strike - s_t, 0.0)
    payoff *= math.exp(-market.r * t)
    mean = float(payoff.mean())
    m2 = float(((payoff - mean) ** 2).sum())
    return n, mean, m2


def _combine(a, b):
    # Chan et al. pairwise update of (count, mean, sum of squared deviations)
    na, ma, sa = a
    nb, mb, sb = b
    n = na + nb
    d = mb - ma
    return n, ma + d * nb / n, sa + sb + d * d * na * nb / n


def _pairwise(stats):
    while len(stats) > 1:
        nxt = [_combine(stats[i], stats[i + 1]) for i in range(0, len(stats) - 1, 2)]
        if len(stats) % 2:
            nxt.append(stats[-1])
        stats = nxt
    return stats[0]


def mc_price(market: MarketParams, model: LevyModel, strike: float, is_call: bool = True,
             n_paths: int = 1_000_000, seed: int = 0, workers: int = 1) -> McResult:
    """Monte Carlo price from the exact law of X_T (no time stepping).

    Paths are generated in fixed blocks, each seeded by (seed, block index),
    and block statistics are merged pairwise in block order, so the result
    does not depend on ``workers``.
    """
    _merton_parts(model)
    if n_paths < 1000:
        raise ParameterOutOfRange(f"n_paths must be >= 1000, got {n_paths}")
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    sizes = [MC_BLOCK] * (n_paths // MC_BLOCK)
    if n_paths % MC_BLOCK:
        sizes.append(n_paths % MC_BLOCK)
    jobs = [(market, model, strike, is_call, seed, b, n) for b, n in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(lambda args: _simulate_block(*args), jobs))
    else:
        stats = [_simulate_block(*args) for args in jobs]
    n, mean, m2 = _pairwise(stats)
    std_error = math.sqrt(m2 / (n - 1) / n) if n > 1 else 0.0
    return McResult(max(mean, 0.0), std_error, n, seed)
