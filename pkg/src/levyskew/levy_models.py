"""Risk-neutral Lévy models as parametric triplets.

A model is the triplet (a, sigma, jumps).  Its characteristic exponent is

    psi(z) = a*z + sigma**2 * z**2 / 2 + kappa(z)

where ``kappa`` is the closed-form jump cumulant of the family.  Each family
uses its own compensation convention for ``kappa``; the difference from the
``h(y) = y 1{|y|<1}`` convention is linear in ``z`` and is absorbed in the
drift, which is always fixed through :func:`mean_correct`.  Every identity
on ``psi`` (martingale condition, duality, symmetry) is therefore
convention-free.

Jump families are parametrised so that the Lévy measure factors as
``exp(beta*y) * p(y) dy`` with ``p`` even.  The market is symmetric iff
``beta == -1/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Union

import numpy as np
from scipy.special import gamma

from .errors import NoJumps, NotMeanCorrected, ParameterOutOfRange, StripViolation

# Y within this distance of 0 or 1 switches CGMY to its limiting formula.
_CGMY_POLE_EPS = 1e-9
MARTINGALE_TOL = 1e-9


def _require(cond, message):
    if not cond:
        raise ParameterOutOfRange(message)


def _finite(*values):
    return all(math.isfinite(v) for v in values)


# ---------------------------------------------------------------------------
# Jump families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Merton:
    """Gaussian log-jumps: lam * N(mu, delta_j**2) density."""

    lam: float
    mu: float
    delta_j: float

    def __post_init__(self):
        _require(_finite(self.lam, self.mu, self.delta_j), "Merton parameters must be finite")
        _require(self.lam >= 0, f"Merton lam must be >= 0, got {self.lam}")
        _require(self.delta_j > 0, f"Merton delta_j must be > 0, got {self.delta_j}")

    def cumulant(self, z):
        return self.lam * np.expm1(self.mu * z + 0.5 * self.delta_j**2 * z * z)

    def strip(self):
        return ComplexStrip(-math.inf, math.inf)

    @property
    def beta(self):
        return self.mu / self.delta_j**2

    def tilted(self, beta_new):
        # Keep the even factor lam*exp(-mu^2/(2 dj^2)) * N(0, dj^2) fixed.
        dj2 = self.delta_j**2
        lam = self.lam * math.exp(0.5 * (beta_new**2 - self.beta**2) * dj2)
        return Merton(lam, beta_new * dj2, self.delta_j)

    def dual(self):
        dj2 = self.delta_j**2
        return Merton(self.lam * math.exp(self.mu + 0.5 * dj2), -(self.mu + dj2), self.delta_j)

    def levy_density(self, y):
        y = np.asarray(y, dtype=float)
        norm = self.lam / (self.delta_j * math.sqrt(2 * math.pi))
        return norm * np.exp(-((y - self.mu) ** 2) / (2 * self.delta_j**2))


@dataclass(frozen=True)
class CGMY:
    """Tempered stable jumps, density C exp(G y)|y|^(-1-Y) (y<0), C exp(-M y) y^(-1-Y) (y>0).

    ``m <= 1`` is a legal Lévy measure but leaves 1 outside the strip, so
    such a model cannot be mean-corrected.
    """

    c: float
    g: float
    m: float
    y_exp: float

    def __post_init__(self):
        _require(_finite(self.c, self.g, self.m, self.y_exp), "CGMY parameters must be finite")
        _require(self.c > 0, f"CGMY c must be > 0, got {self.c}")
        _require(self.g > 0, f"CGMY g must be > 0, got {self.g}")
        _require(self.m > 0, f"CGMY m must be > 0, got {self.m}")
        _require(self.y_exp < 2, f"CGMY y_exp must be < 2, got {self.y_exp}")

    def cumulant(self, z):
        c, g, m, y = self.c, self.g, self.m, self.y_exp
        z = np.asarray(z, dtype=complex)
        if abs(y) < _CGMY_POLE_EPS:
            # variance gamma limit
            return -c * (np.log(1 - z / m) + np.log(1 + z / g))
        if abs(y - 1) < _CGMY_POLE_EPS:
            # limit of the generic branch, which stays finite across Y = 1
            return c * ((m - z) * np.log(m - z) - m * math.log(m) + (g + z) * np.log(g + z) - g * math.log(g))
        return c * gamma(-y) * ((m - z) ** y - m**y + (g + z) ** y - g**y)

    def strip(self):
        return ComplexStrip(-self.g, self.m)

    @property
    def beta(self):
        return 0.5 * (self.g - self.m)

    @property
    def eta(self):
        return 0.5 * (self.g + self.m)

    def tilted(self, beta_new):
        return CGMY(self.c, self.eta + beta_new, self.eta - beta_new, self.y_exp)

    def dual(self):
        return CGMY(self.c, self.m - 1, self.g + 1, self.y_exp)

    def levy_density(self, y):
        y = np.asarray(y, dtype=float)
        ay = np.abs(y)
        rate = np.where(y > 0, self.m, self.g)
        return self.c * np.exp(-rate * ay) * ay ** (-1 - self.y_exp)


def _log_cos(w):
    """Principal log cos(w) for |Re w| < pi/2, stable for large |Im w|."""
    x, y = np.real(w), np.imag(w)
    ay = np.abs(y)
    log_cosh = ay + np.log1p(np.exp(-2 * ay)) - math.log(2)
    return log_cosh + np.log(np.cos(x) - 1j * np.sin(x) * np.tanh(y))


@dataclass(frozen=True)
class Meixner:
    """Meixner jumps, density d_m exp(b_m y / a_m) / (y sinh(pi y / a_m))."""

    a_m: float
    b_m: float
    d_m: float

    def __post_init__(self):
        _require(_finite(self.a_m, self.b_m, self.d_m), "Meixner parameters must be finite")
        _require(self.a_m > 0, f"Meixner a_m must be > 0, got {self.a_m}")
        _require(abs(self.b_m) < math.pi, f"Meixner |b_m| must be < pi, got {self.b_m}")
        _require(self.d_m > 0, f"Meixner d_m must be > 0, got {self.d_m}")

    def cumulant(self, z):
        z = np.asarray(z, dtype=complex)
        return 2 * self.d_m * (math.log(math.cos(self.b_m / 2)) - _log_cos((self.a_m * z + self.b_m) / 2))

    def strip(self):
        return ComplexStrip(-(math.pi + self.b_m) / self.a_m, (math.pi - self.b_m) / self.a_m)

    @property
    def beta(self):
        return self.b_m / self.a_m

    def tilted(self, beta_new):
        return Meixner(self.a_m, beta_new * self.a_m, self.d_m)

    def dual(self):
        return Meixner(self.a_m, -self.b_m - self.a_m, self.d_m)

    def levy_density(self, y):
        y = np.asarray(y, dtype=float)
        return self.d_m * np.exp(self.b_m * y / self.a_m) / (y * np.sinh(np.pi * y / self.a_m))


JumpFamily = Union[Merton, CGMY, Meixner, None]
FAMILY_NAMES = {Merton: "merton", CGMY: "cgmy", Meixner: "meixner", type(None): "none"}


# ---------------------------------------------------------------------------
# Core value types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComplexStrip:
    """Open interval (p_lo, p_hi) of Re(z) where E exp(z X_t) is finite."""

    p_lo: float
    p_hi: float

    def contains(self, p) -> bool:
        p = np.asarray(p, dtype=float)
        return bool(np.all((p > self.p_lo) & (p < self.p_hi)))

    def check(self, z, what="z"):
        p = np.real(np.asarray(z))
        if p.size == 0:
            return
        lo, hi = float(np.min(p)), float(np.max(p))
        if not lo > self.p_lo:
            raise StripViolation(f"Re({what})={lo:.6g} not above strip lower bound {self.p_lo:.6g}", self.p_lo)
        if not hi < self.p_hi:
            raise StripViolation(f"Re({what})={hi:.6g} not below strip upper bound {self.p_hi:.6g}", self.p_hi)


@dataclass(frozen=True)
class LevyModel:
    a: float = 0.0
    sigma: float = 0.0
    jumps: JumpFamily = None

    def __post_init__(self):
        _require(_finite(self.a, self.sigma), "drift and sigma must be finite")
        _require(self.sigma >= 0, f"sigma must be >= 0, got {self.sigma}")

    @property
    def family(self) -> str:
        return FAMILY_NAMES[type(self.jumps)]


@dataclass(frozen=True)
class BetaDecomposition:
    """Jump measure written as exp(beta*y) * Pi_0(dy).

    ``base`` is the same family at beta = 0, i.e. the symmetric measure Pi_0.
    """

    beta: float
    base: Merton | CGMY | Meixner


@dataclass(frozen=True)
class MarketParams:
    s0: float
    r: float
    delta: float
    t: float

    def __post_init__(self):
        _require(_finite(self.s0, self.r, self.delta, self.t), "market parameters must be finite")
        _require(self.s0 > 0, f"s0 must be > 0, got {self.s0}")
        _require(self.r >= 0, f"r must be >= 0, got {self.r}")
        _require(self.delta >= 0, f"delta must be >= 0, got {self.delta}")
        _require(self.t > 0, f"t must be > 0, got {self.t}")

    @property
    def forward(self) -> float:
        return self.s0 * math.exp((self.r - self.delta) * self.t)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def strip(model: LevyModel) -> ComplexStrip:
    if model.jumps is None:
        return ComplexStrip(-math.inf, math.inf)
    return model.jumps.strip()


def char_exponent(model: LevyModel, z):
    """psi(z) with E exp(z X_t) = exp(t psi(z)); accepts scalars or arrays."""
    strip(model).check(z)
    zc = np.asarray(z, dtype=complex)
    out = model.a * zc + 0.5 * model.sigma**2 * zc * zc
    if model.jumps is not None:
        out = out + model.jumps.cumulant(zc)
    if np.ndim(out) == 0:
        return complex(out)
    return out


def _jump_cumulant_at_one(jumps) -> float:
    if jumps is None:
        return 0.0
    return float(np.real(jumps.cumulant(1.0)))


def _drift_for(sigma, jumps, target) -> float:
    if jumps is not None:
        jumps.strip().check(1.0, what="1")
    return target - 0.5 * sigma**2 - _jump_cumulant_at_one(jumps)


def mean_correct(model: LevyModel, r: float, delta: float) -> LevyModel:
    """Replace the drift so that psi(1) = r - delta."""
    return replace(model, a=_drift_for(model.sigma, model.jumps, r - delta))


def is_mean_corrected(model: LevyModel, r: float, delta: float, tol: float = MARTINGALE_TOL) -> bool:
    try:
        return abs(char_exponent(model, 1.0).real - (r - delta)) <= tol
    except StripViolation:
        return False


def require_mean_corrected(model: LevyModel, r: float, delta: float):
    if not is_mean_corrected(model, r, delta):
        raise NotMeanCorrected(f"psi(1) != r - delta = {r - delta:.6g}; call mean_correct first")


def dual_triplet(model: LevyModel, r: float, delta: float) -> LevyModel:
    """Model of the dual market: psi~(z) = psi(1 - z) - psi(1).

    The jump measure is exp(-y) Pi(-dy), sigma is unchanged and the drift is
    corrected with the rates swapped.
    """
    require_mean_corrected(model, r, delta)
    jumps = None if model.jumps is None else model.jumps.dual()
    return LevyModel(_drift_for(model.sigma, jumps, delta - r), model.sigma, jumps)


def beta_of(model: LevyModel) -> float:
    if model.jumps is None:
        raise NoJumps("pure diffusion has no jump measure to decompose")
    return model.jumps.beta


def decompose(model: LevyModel) -> BetaDecomposition:
    beta = beta_of(model)
    return BetaDecomposition(beta, model.jumps.tilted(0.0))


def with_beta(model: LevyModel, beta_new: float) -> LevyModel:
    """Re-tilt the jump measure to exp(beta_new*y) p(y) with the same even p.

    The drift is re-corrected so that psi(1) keeps its current value.
    """
    if model.jumps is None:
        raise NoJumps("pure diffusion has no jump measure to re-tilt")
    target = char_exponent(model, 1.0).real
    jumps = model.jumps.tilted(float(beta_new))
    p_lo, p_hi = jumps.strip().p_lo, jumps.strip().p_hi
    if not (p_lo < 0 and p_hi > 1):
        raise ParameterOutOfRange(
            f"beta={beta_new:.6g} gives strip ({p_lo:.6g}, {p_hi:.6g}) which must contain [0, 1]"
        )
    return LevyModel(_drift_for(model.sigma, jumps, target), model.sigma, jumps)


# ---------------------------------------------------------------------------
# Key-value model specification
# ---------------------------------------------------------------------------

_FAMILY_KEYS = {
    "none": (),
    "merton": ("lambda", "mu", "delta_j"),
    "cgmy": ("c", "g", "m", "y_exp"),
    "meixner": ("a_m", "b_m", "d_m"),
}
_ALIASES = {"lam": "lambda"}


@dataclass(frozen=True)
class ModelSpec:
    """A model together with the rates it is meant to be corrected for."""

    model: LevyModel
    r: float = 0.0
    delta: float = 0.0
    extra: Mapping[str, str] = field(default_factory=dict)


def model_from_mapping(values: Mapping[str, object]) -> ModelSpec:
    """Build a mean-corrected model from flat keys.

    Recognised keys: family, sigma, r, delta and the family parameters
    (merton: lambda, mu, delta_j; cgmy: c, g, m, y_exp; meixner: a_m, b_m, d_m).
    Unknown keys are kept in ``extra``.
    """
    vals = {_ALIASES.get(k.strip().lower(), k.strip().lower()): v for k, v in values.items()}
    family = str(vals.pop("family", "none")).strip().lower()
    if family not in _FAMILY_KEYS:
        raise ParameterOutOfRange(f"unknown family {family!r}; expected one of {sorted(_FAMILY_KEYS)}")

    def num(key, default=None):
        if key not in vals or vals[key] is None or vals[key] == "":
            if default is None:
                raise ParameterOutOfRange(f"family {family} requires parameter {key!r}")
            return default
        raw = vals.pop(key)
        try:
            return float(raw)
        except (TypeError, ValueError):
            raise ParameterOutOfRange(f"parameter {key!r} is not a number: {raw!r}") from None

    sigma = num("sigma", 0.0)
    r = num("r", 0.0)
    delta = num("delta", 0.0)
    params = [num(k) for k in _FAMILY_KEYS[family]]
    jumps = {"none": lambda: None, "merton": lambda: Merton(*params),
             "cgmy": lambda: CGMY(*params), "meixner": lambda: Meixner(*params)}[family]()
    vals.pop("a", None)
    model = mean_correct(LevyModel(0.0, sigma, jumps), r, delta)
    return ModelSpec(model, r, delta, {k: str(v) for k, v in vals.items() if v is not None})


def parse_model_spec(text: str) -> ModelSpec:
    """Parse ``key = value`` lines (``#`` starts a comment)."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            key, sep, value = line.partition(":")
        if not sep or not key.strip():
            raise ParameterOutOfRange(f"line {lineno}: expected key = value, got {raw!r}")
        values[key.strip()] = value.strip()
    return model_from_mapping(values)


def model_to_mapping(model: LevyModel) -> dict:
    out = {"family": model.family, "sigma": model.sigma, "a": model.a}
    j = model.jumps
    if isinstance(j, Merton):
        out.update({"lambda": j.lam, "mu": j.mu, "delta_j": j.delta_j})
    elif isinstance(j, CGMY):
        out.update({"c": j.c, "g": j.g, "m": j.m, "y_exp": j.y_exp})
    elif isinstance(j, Meixner):
        out.update({"a_m": j.a_m, "b_m": j.b_m, "d_m": j.d_m})
    return out
