"""Skewness premium, Bates' x% rule, put-call duality and beta scans.

All SK quantities use futures-style inputs: the underlying level is the
future F0 and the dividend rate equals r, so the forward is F0 itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegeneratePut, LevySkewError, TruncationWarning
from .levy_models import LevyModel, MarketParams, dual_triplet, mean_correct, with_beta
from .pricing_fourier import DEFAULT_CONFIG, FourierConfig, euro_call, euro_put

# per-cell failures in scans; TruncationWarning arrives here only when escalated to an error
_CELL_ERRORS = (LevySkewError, TruncationWarning)

PUT_FLOOR = 1e-10
ZERO_TOL = 1e-5


@dataclass(frozen=True)
class SKPoint:
    x: float
    k_call: float
    k_put: float
    sk: float
    excess: float


def sk_strikes(f0: float, x: float):
    """(K_c, K_p) = ((1+x) F0, F0/(1+x)), so that K_c K_p = F0^2."""
    return (1.0 + x) * f0, f0 / (1.0 + x)


def _futures_leg(model, f0, r, t, x, cfg):
    if not x > 0:
        raise ValueError(f"x must be > 0, got {x}")
    market = MarketParams(f0, r, r, t)
    model = mean_correct(model, r, r)
    k_call, k_put = sk_strikes(f0, x)
    call = euro_call(market, model, k_call, cfg)
    put = euro_put(market, model, k_put, cfg)
    return k_call, k_put, call, put


def sk(model: LevyModel, f0: float, r: float, t: float, x: float,
       cfg: FourierConfig = DEFAULT_CONFIG) -> SKPoint:
    """Skewness premium SK(x) = c(K_c)/p(K_p) - 1 and its excess over x.

    The model is mean-corrected for r = delta before pricing.
    """
    k_call, k_put, call, put = _futures_leg(model, f0, r, t, x, cfg)
    if put < PUT_FLOOR:
        raise DegeneratePut(k_put, put)
    value = call / put - 1.0
    return SKPoint(x, k_call, k_put, value, value - x)


def bates_rule_residual(model: LevyModel, f0: float, r: float, t: float, x: float,
                        cfg: FourierConfig = DEFAULT_CONFIG) -> float:
    """c(K_c) - (1+x) p(K_p); zero for symmetric markets."""
    k_call, k_put, call, put = _futures_leg(model, f0, r, t, x, cfg)
    if put < PUT_FLOOR:
        raise DegeneratePut(k_put, put)
    return call - (1.0 + x) * put


def duality_check(model: LevyModel, s0: float, strike: float, r: float, delta: float, t: float,
                  cfg: FourierConfig = DEFAULT_CONFIG) -> float:
    """|c(S0, K, r, delta; psi) - p(K, S0, delta, r; psi~)|."""
    call = euro_call(MarketParams(s0, r, delta, t), model, strike, cfg)
    dual = dual_triplet(model, r, delta)
    put = euro_put(MarketParams(strike, delta, r, t), dual, s0, cfg)
    return abs(call - put)


def _sign(v, tol):
    return 0 if abs(v) <= tol else (1 if v > 0 else -1)


@dataclass(frozen=True)
class SignCell:
    beta: float
    x: float
    excess: float | None
    sign: int | None
    expected: int
    skipped: str | None = None

    @property
    def matches(self) -> bool | None:
        return None if self.sign is None else self.sign == self.expected


def sk_excess_sign_scan(base_model: LevyModel, betas: Sequence[float], xs: Sequence[float],
                        f0: float, r: float, t: float, cfg: FourierConfig = DEFAULT_CONFIG,
                        zero_tol: float = ZERO_TOL) -> list[SignCell]:
    """Sign of SK(x) - x on a (beta, x) grid, in grid order.

    The expected sign is sign(beta + 1/2).  Cells whose model cannot be
    built or priced are kept with ``skipped`` set to the error text.
    """
    cells = []
    base = mean_correct(base_model, r, r)
    for beta in betas:
        expected = _sign(beta + 0.5, 0.0)
        try:
            model = with_beta(base, beta)
        except _CELL_ERRORS as err:
            cells.extend(SignCell(beta, x, None, None, expected, f"{type(err).__name__}: {err}") for x in xs)
            continue
        for x in xs:
            try:
                point = sk(model, f0, r, t, x, cfg)
            except _CELL_ERRORS as err:
                cells.append(SignCell(beta, x, None, None, expected, f"{type(err).__name__}: {err}"))
                continue
            cells.append(SignCell(beta, x, point.excess, _sign(point.excess, zero_tol), expected))
    return cells


@dataclass(frozen=True)
class MonotonicityScan:
    betas: tuple
    prices: tuple  # None marks a skipped cell
    monotone: bool
    direction: str  # "increasing", "decreasing", "constant" or "none"


def monotonicity_scan(base_model: LevyModel, betas: Sequence[float], f0: float, strike: float,
                      r: float, t: float, cfg: FourierConfig = DEFAULT_CONFIG) -> MonotonicityScan:
    """Call prices along beta with the even factor of the jump measure held fixed.

    An empirical probe of price monotonicity in beta; differences within
    ``cfg.abs_tol`` count as ties.
    """
    market = MarketParams(f0, r, r, t)
    base = mean_correct(base_model, r, r)
    prices = []
    for beta in betas:
        try:
            prices.append(euro_call(market, with_beta(base, beta), strike, cfg))
        except _CELL_ERRORS:
            prices.append(None)
    valid = np.array([p for p in prices if p is not None])
    steps = np.diff(valid)
    tol = cfg.abs_tol
    if valid.size < 2 or np.all(np.abs(steps) <= tol):
        direction = "constant"
    elif np.all(steps >= -tol):
        direction = "increasing"
    elif np.all(steps <= tol):
        direction = "decreasing"
    else:
        direction = "none"
    return MonotonicityScan(tuple(float(b) for b in betas), tuple(prices), direction != "none", direction)


def dual_beta_price(base_model: LevyModel, beta: float, f0: float, strike: float, r: float, t: float,
                    cfg: FourierConfig = DEFAULT_CONFIG) -> float:
    """Call price at ``beta`` recomputed as a put in the dual market (beta~ = -beta - 1).

    With r = delta the duality reads c(F0, K; beta) = p(K, F0; -beta - 1).
    """
    model = with_beta(mean_correct(base_model, r, r), beta)
    dual = dual_triplet(model, r, r)
    return euro_put(MarketParams(strike, r, r, t), dual, f0, cfg)


def sk_curve(model: LevyModel, f0: float, r: float, t: float, xs: Sequence[float],
             cfg: FourierConfig = DEFAULT_CONFIG) -> list[SKPoint | DegeneratePut]:
    """SK over an x grid; degenerate puts are returned in place instead of raised."""
    out = []
    for x in xs:
        try:
            out.append(sk(model, f0, r, t, x, cfg))
        except DegeneratePut as err:
            out.append(err)
    return out


def is_symmetric(model: LevyModel, tol: float = 1e-12) -> bool:
    """True when beta = -1/2 (or the model has no jumps)."""
    if model.jumps is None:
        return True
    return math.isclose(model.jumps.beta, -0.5, abs_tol=tol)
