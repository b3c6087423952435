import numpy as np
import pytest

from levyskew.errors import DegeneratePut
from levyskew.levy_models import LevyModel, MarketParams, Merton, beta_of, dual_triplet, mean_correct, with_beta
from levyskew.pricing_fourier import euro_call
from levyskew.skew_analytics import (
    bates_rule_residual,
    dual_beta_price,
    duality_check,
    is_symmetric,
    monotonicity_scan,
    sk,
    sk_curve,
    sk_excess_sign_scan,
    sk_strikes,
)

from conftest import FAMILY_MODELS, SYMMETRIC_MODELS

F0, R, T = 100.0, 0.05, 1.0
BASE = LevyModel(0.0, 0.2, Merton(1.0, -0.1, 0.15))
XS = [0.01 * i for i in range(1, 11)]


def at_beta(beta):
    return with_beta(mean_correct(BASE, R, R), beta)


def test_strike_geometry():
    for x in (0.001, 0.05, 0.3):
        k_c, k_p = sk_strikes(F0, x)
        assert k_p < F0 < k_c
        assert k_c * k_p == pytest.approx(F0**2, rel=1e-15)
    pt = sk(at_beta(1.0), F0, R, T, 0.05)
    assert pt.k_call * pt.k_put == pytest.approx(F0**2, rel=1e-15)
    assert pt.excess == pytest.approx(pt.sk - pt.x, abs=0)


def test_symmetric_models_follow_the_x_rule(family):
    model = SYMMETRIC_MODELS[family]
    assert is_symmetric(model)
    for x in XS:
        assert abs(sk(model, F0, R, T, x).excess) <= 1e-5
        assert abs(bates_rule_residual(model, F0, R, T, x)) <= 2e-7


def test_sk_vanishes_at_the_money_for_symmetric_models():
    model = at_beta(-0.5)
    assert abs(sk(model, F0, R, T, 1e-9).sk) <= 1e-5


def test_sk_positive_beta_example():
    assert sk(at_beta(1.0), F0, R, T, 0.05).sk > 0.05


def test_bates_residual_direction():
    assert bates_rule_residual(at_beta(1.0), F0, R, T, 0.05) > 0
    assert bates_rule_residual(at_beta(-2.0), F0, R, T, 0.05) < 0


def test_sk_rejects_nonpositive_x():
    with pytest.raises(ValueError):
        sk(BASE, F0, R, T, 0.0)


def test_degenerate_put_is_reported():
    model = LevyModel(0.0, 0.2)
    with pytest.raises(DegeneratePut) as err:
        sk(model, F0, R, 0.05, 1.0)
    assert err.value.strike == pytest.approx(50.0)
    curve = sk_curve(model, F0, R, 0.05, [0.01, 1.0])
    assert curve[0].x == 0.01 and isinstance(curve[1], DegeneratePut)


@pytest.mark.parametrize("k_ratio", [0.8, 1.0, 1.2])
def test_duality_check_examples(family, k_ratio):
    model = mean_correct(FAMILY_MODELS[family], 0.05, 0.02)
    assert duality_check(model, 100.0, 100.0 * k_ratio, 0.05, 0.02, 1.0) <= 2e-7


def test_duality_check_pure_diffusion():
    model = mean_correct(LevyModel(0.0, 0.25), 0.05, 0.02)
    for k in (80.0, 100.0, 120.0):
        assert duality_check(model, 100.0, k, 0.05, 0.02, 0.5) <= 2e-7


def test_sign_scan_pattern():
    betas = [-2, -1, -0.5, 0, 1]
    xs = [0.01, 0.05, 0.1]
    cells = sk_excess_sign_scan(BASE, betas, xs, F0, R, T)
    assert [(c.beta, c.x) for c in cells] == [(b, x) for b in betas for x in xs]
    assert all(c.matches for c in cells)
    assert all(abs(c.excess) <= 1e-5 for c in cells if c.beta == -0.5)
    single = sk_excess_sign_scan(BASE, [0.0], [0.05], F0, R, T)
    assert single[0].sign == 1


def test_sign_scan_marks_unbuildable_cells():
    cells = sk_excess_sign_scan(LevyModel(0.0, 0.0, FAMILY_MODELS["cgmy"].jumps), [0.0, 10.0], [0.05], F0, R, T)
    assert cells[0].skipped is None and cells[0].matches
    assert cells[1].skipped.startswith("ParameterOutOfRange") and cells[1].matches is None


def test_monotonicity_scan_constant_betas():
    scan = monotonicity_scan(BASE, [0.3, 0.3, 0.3], F0, 105.0, R, T)
    assert scan.direction == "constant" and scan.monotone
    assert len(set(scan.prices)) == 1


def test_monotonicity_scan_records_verdict():
    betas = np.linspace(-2, 1, 13)
    scan = monotonicity_scan(BASE, betas, F0, 1.05 * F0, R, T)
    assert len(scan.prices) == 13 and all(p is not None for p in scan.prices)
    # the verdict is an empirical finding; it must agree with the recorded prices
    steps = np.diff(scan.prices)
    if scan.direction == "increasing":
        assert np.all(steps >= -1e-7)
    elif scan.direction == "decreasing":
        assert np.all(steps <= 1e-7)
    else:
        assert scan.direction == "none" and steps.max() > 1e-7 and steps.min() < -1e-7


@pytest.mark.parametrize("beta", [-2.0, -0.5, 0.0, 1.0])
def test_dual_beta_price_matches_direct_price(beta):
    model = at_beta(beta)
    direct = euro_call(MarketParams(F0, R, R, T), model, 105.0)
    assert abs(direct - dual_beta_price(BASE, beta, F0, 105.0, R, T)) <= 2e-7
    assert duality_check(model, F0, 105.0, R, R, T) <= 2e-7


def test_dual_beta_price_uses_reflected_beta():
    # the dual of beta is -beta-1, so beta and -beta-1 share put/call roles
    assert beta_of(dual_triplet(at_beta(0.7), R, R)) == pytest.approx(-1.7, abs=1e-12)
