"""Lévy-market option pricing, put-call duality and skewness-premium diagnostics."""

from .errors import (
    ChainFormatError,
    DegeneratePut,
    EmptyTable,
    ExtrapolationRequest,
    InsufficientPoints,
    LevySkewError,
    NoJumps,
    NotMeanCorrected,
    ParameterOutOfRange,
    PricingError,
    StripViolation,
    TruncationWarning,
    WrongFamily,
)
from .levy_models import (
    CGMY,
    BetaDecomposition,
    ComplexStrip,
    LevyModel,
    MarketParams,
    Meixner,
    Merton,
    beta_of,
    char_exponent,
    decompose,
    dual_triplet,
    mean_correct,
    model_from_mapping,
    model_to_mapping,
    parse_model_spec,
    strip,
    with_beta,
)
from .pricing_fourier import FourierConfig, euro_call, euro_put
from .pricing_oracles import McResult, mc_price, merton_series
from .skew_analytics import (
    SKPoint,
    bates_rule_residual,
    duality_check,
    monotonicity_scan,
    sk,
    sk_excess_sign_scan,
)
from .chain_diagnostics import (
    OptionChain,
    SKReport,
    SKReportRow,
    diagnose,
    spline_fit,
    table_calls_vs_interp_puts,
    table_puts_vs_interp_calls,
)

__version__ = "0.1.0"
