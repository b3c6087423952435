"""Put-call duality and the x% rule across the three jump families.

A call in the original market equals a put in the dual market with spot and
strike swapped and the two rates swapped.  When the jump measure is
symmetric in the beta sense (beta = -1/2) and r = delta, the dual market is
the market itself and an x% OTM call costs exactly (1+x) times its paired put.
"""

from levyskew import (
    CGMY,
    LevyModel,
    MarketParams,
    Meixner,
    Merton,
    beta_of,
    bates_rule_residual,
    dual_triplet,
    euro_call,
    euro_put,
    mean_correct,
    model_to_mapping,
    with_beta,
)

R, DELTA, S0, T = 0.05, 0.02, 100.0, 1.0

models = {
    "merton": LevyModel(0.0, 0.2, Merton(1.0, -0.1, 0.15)),
    "cgmy": LevyModel(0.0, 0.0, CGMY(1.0, 5.0, 10.0, 0.5)),
    "meixner": LevyModel(0.0, 0.0, Meixner(0.3, -0.5, 1.0)),
}

print("duality: c(S0, K, r, delta) vs p(K, S0, delta, r) under the dual model")
for name, raw in models.items():
    model = mean_correct(raw, R, DELTA)
    dual = dual_triplet(model, R, DELTA)
    params = {k: round(v, 6) for k, v in model_to_mapping(dual).items() if k not in ("family", "a")}
    print(f"  {name:8s} beta={beta_of(model):+.4f} -> dual beta={beta_of(dual):+.4f}  dual params {params}")
    for k in (80.0, 100.0, 120.0):
        c = euro_call(MarketParams(S0, R, DELTA, T), model, k)
        p = euro_put(MarketParams(k, DELTA, R, T), dual, S0)
        print(f"    K={k:6.1f}  call={c:.10f}  dual put={p:.10f}  diff={abs(c - p):.1e}")

print()
print("x% rule with r = delta: c((1+x)F) - (1+x) p(F/(1+x))")
f0 = 100.0
for name, raw in models.items():
    model = mean_correct(raw, R, R)
    row = []
    for beta in (-0.5, 0.5):
        tilted = with_beta(model, beta)
        row.append(f"beta={beta:+.1f}: {bates_rule_residual(tilted, f0, R, T, 0.05):+.2e}")
    print(f"  {name:8s} " + "   ".join(row))
print("the residual vanishes only at beta = -1/2; positive beta makes calls rich")
