"""Option-chain ingestion, cubic-spline gap filling and x vs x_obs tables.

Two report layouts are produced from an observed chain with future F:

* calls vs interpolated puts: for each observed call strike K_c, pair it with
  K_p = F^2/K_c and report x = K_c/F - 1, x_obs = c_obs(K_c)/p_int(K_p) - 1;
* puts vs interpolated calls: for each observed put strike K_p, pair it with
  K_c = F^2/K_p and report x = F/K_p - 1, x_obs = c_int(K_c)/p_obs(K_p) - 1.

In both, excess = x - x_obs and a row is out of the money when x > 0.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ChainFormatError, EmptyTable, ExtrapolationRequest, InsufficientPoints, LevySkewError
from .levy_models import LevyModel, MarketParams, mean_correct
from .pricing_fourier import DEFAULT_CONFIG, FourierConfig, euro_call, euro_put

MIN_QUOTES = 4
REPORT_COLUMNS = ("k_primary", "k_paired", "x", "x_obs", "excess")


class NaturalSpline:
    """Natural cubic spline through (strike, price) knots; refuses extrapolation."""

    def __init__(self, strikes, prices):
        strikes = np.asarray(strikes, dtype=float)
        prices = np.asarray(prices, dtype=float)
        if strikes.ndim != 1 or strikes.shape != prices.shape:
            raise InsufficientPoints("strikes and prices must be 1-d and of equal length")
        if strikes.size < MIN_QUOTES:
            raise InsufficientPoints(f"cubic spline needs at least {MIN_QUOTES} points, got {strikes.size}")
        if np.any(np.diff(strikes) <= 0):
            raise InsufficientPoints("spline knots must be strictly increasing")
        self.strikes = strikes
        self.prices = prices
        self._spline = CubicSpline(strikes, prices, bc_type="natural")

    @property
    def lo(self):
        return float(self.strikes[0])

    @property
    def hi(self):
        return float(self.strikes[-1])

    def covers(self, strike) -> bool:
        return self.lo <= strike <= self.hi

    def __call__(self, strike):
        k = np.asarray(strike, dtype=float)
        if np.any(k < self.lo) or np.any(k > self.hi):
            raise ExtrapolationRequest(f"strike outside knot range [{self.lo:g}, {self.hi:g}]")
        out = self._spline(k)
        # knots return the quoted price bit-for-bit
        idx = np.searchsorted(self.strikes, k)
        idx = np.clip(idx, 0, self.strikes.size - 1)
        hit = self.strikes[idx] == k
        out = np.where(hit, self.prices[idx], out)
        return float(out) if out.ndim == 0 else out


def spline_fit(points: Iterable[tuple[float, float]]) -> NaturalSpline:
    pts = list(points)
    if len(pts) < MIN_QUOTES:
        raise InsufficientPoints(f"cubic spline needs at least {MIN_QUOTES} points, got {len(pts)}")
    strikes, prices = zip(*pts)
    return NaturalSpline(strikes, prices)


@dataclass(frozen=True)
class ChainRecord:
    strike: float
    call_mid: Optional[float] = None
    put_mid: Optional[float] = None


@dataclass(frozen=True)
class OptionChain:
    future: float
    records: tuple
    valuation_date: Optional[dt.date] = None
    expiry_date: Optional[dt.date] = None

    def __post_init__(self):
        if not (math.isfinite(self.future) and self.future > 0):
            raise ChainFormatError(f"future price must be positive, got {self.future}")
        object.__setattr__(self, "records", tuple(self.records))
        strikes = [r.strike for r in self.records]
        if any(b <= a for a, b in zip(strikes, strikes[1:])):
            raise ChainFormatError("strikes must be strictly increasing")
        for r in self.records:
            if not (math.isfinite(r.strike) and r.strike > 0):
                raise ChainFormatError(f"invalid strike {r.strike}")
            for p in (r.call_mid, r.put_mid):
                if p is not None and not (math.isfinite(p) and p >= 0):
                    raise ChainFormatError(f"negative or non-finite price at strike {r.strike:g}")
        n_calls = sum(r.call_mid is not None for r in self.records)
        n_puts = sum(r.put_mid is not None for r in self.records)
        if n_calls < MIN_QUOTES or n_puts < MIN_QUOTES:
            raise InsufficientPoints(
                f"chain needs >= {MIN_QUOTES} calls and puts, got {n_calls} calls and {n_puts} puts"
            )

    def calls(self):
        return [(r.strike, r.call_mid) for r in self.records if r.call_mid is not None]

    def puts(self):
        return [(r.strike, r.put_mid) for r in self.records if r.put_mid is not None]


@dataclass(frozen=True)
class SKReportRow:
    k_primary: float
    k_paired: float
    x: float
    x_obs: float
    excess: float

    @property
    def otm(self) -> bool:
        return self.x > 0


@dataclass(frozen=True)
class SKReport:
    kind: str  # "calls_vs_interp_puts" or "puts_vs_interp_calls"
    rows: tuple
    omitted: int = 0
    omitted_strikes: tuple = field(default_factory=tuple)

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)


def paired_strike(future: float, strike: float) -> float:
    return future * future / strike


def table_calls_vs_interp_puts(chain: OptionChain) -> SKReport:
    """Observed calls against spline-interpolated puts at F^2/K_c."""
    f = chain.future
    put_spline = spline_fit(chain.puts())
    rows, dropped = [], []
    for k_c, c_obs in chain.calls():
        k_p = paired_strike(f, k_c)
        try:
            p_int = put_spline(k_p)
            x_obs = c_obs / p_int - 1.0
        except (LevySkewError, ZeroDivisionError):
            dropped.append(k_c)
            continue
        x = k_c / f - 1.0
        rows.append(SKReportRow(k_c, k_p, x, x_obs, x - x_obs))
    return SKReport("calls_vs_interp_puts", tuple(rows), len(dropped), tuple(dropped))


def table_puts_vs_interp_calls(chain: OptionChain) -> SKReport:
    """Observed puts against spline-interpolated calls at F^2/K_p."""
    f = chain.future
    call_spline = spline_fit(chain.calls())
    rows, dropped = [], []
    for k_p, p_obs in chain.puts():
        k_c = paired_strike(f, k_p)
        try:
            c_int = call_spline(k_c)
            x_obs = c_int / p_obs - 1.0
        except (LevySkewError, ZeroDivisionError):
            dropped.append(k_p)
            continue
        x = f / k_p - 1.0
        rows.append(SKReportRow(k_p, k_c, x, x_obs, x - x_obs))
    return SKReport("puts_vs_interp_calls", tuple(rows), len(dropped), tuple(dropped))


@dataclass(frozen=True)
class ChainSummary:
    n_rows: int
    otm_obs_below: int  # x_obs < x
    otm_obs_above: int  # x_obs > x
    itm_obs_below: int
    itm_obs_above: int
    median_otm_excess: float
    verdict: str
    omitted: int = 0

    def as_text(self) -> str:
        lines = [f"{k}={_fmt(v)}" for k, v in self.__dict__.items()]
        return "\n".join(lines) + "\n"


def diagnose(chain: OptionChain, tol: float = 1e-3) -> ChainSummary:
    """Count x_obs vs x across both tables and classify the skew.

    The verdict uses the median of excess = x - x_obs over OTM rows (all
    rows if none are OTM): within ``tol`` of zero is consistent with
    symmetry, negative (calls rich) is call-skew, positive is put-skew.
    """
    t1 = table_calls_vs_interp_puts(chain)
    t2 = table_puts_vs_interp_calls(chain)
    rows = list(t1.rows) + list(t2.rows)
    if not rows:
        raise EmptyTable("no report rows survived the spline range filter")
    otm = [r for r in rows if r.otm]
    itm = [r for r in rows if not r.otm]
    pool = otm or rows
    median = float(np.median([r.excess for r in pool]))
    if abs(median) <= tol:
        verdict = "consistent-with-symmetry"
    elif median < 0:
        verdict = "call-skew"
    else:
        verdict = "put-skew"
    return ChainSummary(
        n_rows=len(rows),
        otm_obs_below=sum(r.x_obs < r.x for r in otm),
        otm_obs_above=sum(r.x_obs > r.x for r in otm),
        itm_obs_below=sum(r.x_obs < r.x for r in itm),
        itm_obs_above=sum(r.x_obs > r.x for r in itm),
        median_otm_excess=median,
        verdict=verdict,
        omitted=t1.omitted + t2.omitted,
    )


def chain_from_model(model: LevyModel, future: float, r: float, t: float, strikes: Sequence[float],
                     cfg: FourierConfig = DEFAULT_CONFIG, valuation_date=None, expiry_date=None) -> OptionChain:
    """Synthetic chain of European mid prices on a futures-style market (delta = r)."""
    market = MarketParams(future, r, r, t)
    model = mean_correct(model, r, r)
    strikes = np.asarray(sorted(strikes), dtype=float)
    calls = euro_call(market, model, strikes, cfg)
    puts = euro_put(market, model, strikes, cfg)
    records = [ChainRecord(float(k), float(c), float(p)) for k, c, p in zip(strikes, calls, puts)]
    return OptionChain(future, tuple(records), valuation_date, expiry_date)


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def _parse_float(text, line, what):
    text = text.strip()
    if text == "":
        return None
    try:
        value = float(text)
    except ValueError:
        raise ChainFormatError(f"{what} is not a number: {text!r}", line) from None
    if not math.isfinite(value):
        raise ChainFormatError(f"{what} is not finite: {text!r}", line)
    return value


def parse_chain_csv(text: str) -> OptionChain:
    """Parse ``#F=``/``#valuation=``/``#expiry=`` metadata then ``strike,call_mid,put_mid`` rows."""
    meta = {}
    records = []
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if sep:
                meta[key.strip().lower()] = (value.strip(), lineno)
            continue
        cells = next(csv.reader([line]))
        if not header_seen:
            header_seen = True
            if [c.strip().lower() for c in cells] != ["strike", "call_mid", "put_mid"]:
                raise ChainFormatError("header must be strike,call_mid,put_mid", lineno)
            continue
        if len(cells) != 3:
            raise ChainFormatError(f"expected 3 columns, got {len(cells)}", lineno)
        strike = _parse_float(cells[0], lineno, "strike")
        if strike is None:
            raise ChainFormatError("missing strike", lineno)
        call = _parse_float(cells[1], lineno, "call_mid")
        put = _parse_float(cells[2], lineno, "put_mid")
        if records and strike <= records[-1][1].strike:
            raise ChainFormatError("strikes must be strictly increasing", lineno)
        records.append((lineno, ChainRecord(strike, call, put)))
    if "f" not in meta:
        raise ChainFormatError("missing #F= metadata line")
    future = _parse_float(meta["f"][0], meta["f"][1], "F")
    if future is None:
        raise ChainFormatError("empty #F= value", meta["f"][1])

    def date(key):
        if key not in meta or not meta[key][0]:
            return None
        try:
            return dt.date.fromisoformat(meta[key][0])
        except ValueError:
            raise ChainFormatError(f"{key} is not an ISO date: {meta[key][0]!r}", meta[key][1]) from None

    try:
        return OptionChain(future, tuple(r for _, r in records), date("valuation"), date("expiry"))
    except InsufficientPoints as err:
        raise ChainFormatError(str(err)) from None


def read_chain_csv(path) -> OptionChain:
    return parse_chain_csv(Path(path).read_text(encoding="utf-8"))


def format_chain_csv(chain: OptionChain) -> str:
    buf = io.StringIO()
    buf.write(f"#F={_fmt(float(chain.future))}\n")
    if chain.valuation_date:
        buf.write(f"#valuation={chain.valuation_date.isoformat()}\n")
    if chain.expiry_date:
        buf.write(f"#expiry={chain.expiry_date.isoformat()}\n")
    buf.write("strike,call_mid,put_mid\n")
    for r in chain.records:
        cells = [_fmt(float(r.strike))] + ["" if p is None else _fmt(float(p)) for p in (r.call_mid, r.put_mid)]
        buf.write(",".join(cells) + "\n")
    return buf.getvalue()


def format_report_csv(report: SKReport) -> str:
    buf = io.StringIO()
    buf.write(",".join(REPORT_COLUMNS) + "\n")
    for row in report.rows:
        buf.write(",".join(_fmt(float(getattr(row, c))) for c in REPORT_COLUMNS) + "\n")
    return buf.getvalue()
