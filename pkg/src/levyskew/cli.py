"""Command-line interface.

Subcommands: price, dual, sk, scan, chain.  Data goes to stdout, diagnostics
to stderr as one JSON object per line.  Exit codes: 0 success, 2 input
error, 3 numerical error, 4 check failed.

Model keys (``--model-file`` with ``key = value`` lines, or flags):
family (none|merton|cgmy|meixner), sigma, r, delta, and per family
merton: lambda, mu, delta_j; cgmy: c, g, m, y_exp; meixner: a_m, b_m, d_m.
Flags override file values.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import chain_diagnostics as chains
from .errors import (
    ChainFormatError,
    DegeneratePut,
    EmptyTable,
    ExtrapolationRequest,
    InsufficientPoints,
    NoJumps,
    NotMeanCorrected,
    ParameterOutOfRange,
    StripViolation,
    TruncationWarning,
    WrongFamily,
)
from .levy_models import MarketParams, dual_triplet, model_from_mapping, model_to_mapping
from .pricing_fourier import FourierConfig, clamp_for_report, euro_call, euro_put
from .pricing_oracles import mc_price, merton_series
from .skew_analytics import duality_check, monotonicity_scan, sk, sk_excess_sign_scan

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_CHECK = 0, 2, 3, 4

INPUT_ERRORS = (ParameterOutOfRange, NoJumps, WrongFamily, NotMeanCorrected, ChainFormatError,
                InsufficientPoints, EmptyTable, OSError, ValueError)
NUMERIC_ERRORS = (StripViolation, TruncationWarning, DegeneratePut, ExtrapolationRequest, ArithmeticError)

_MODEL_FLAGS = {
    "family": str, "sigma": float, "lambda": float, "mu": float, "delta_j": float,
    "c": float, "g": float, "m": float, "y_exp": float, "a_m": float, "b_m": float, "d_m": float,
}


def fmt(value) -> str:
    return f"{value:.10g}"


def _float_list(text):
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("list must not be empty")
    return values


def _add_model_args(p):
    g = p.add_argument_group("model")
    g.add_argument("--model-file", type=Path, help="key = value model specification")
    for key, typ in _MODEL_FLAGS.items():
        names = [f"--{key}"]
        if "_" in key:
            names.append(f"--{key.replace('_', '-')}")
        g.add_argument(*names, dest=f"model_{key}", type=typ, default=None)


def _add_pricer_args(p):
    g = p.add_argument_group("pricer")
    g.add_argument("--alpha", type=float, default=0.75, help="damping parameter")
    g.add_argument("--u-max", "--u_max", dest="u_max", type=float, default=200.0)
    g.add_argument("--n-nodes", "--n_nodes", dest="n_nodes", type=int, default=2048)
    g.add_argument("--tol", type=float, default=1e-7, help="absolute price tolerance")
    g.add_argument("--allow-truncation", action="store_true",
                   help="report TruncationWarning on stderr instead of failing")


def _add_rates(p, spot_name="--s0"):
    p.add_argument(spot_name, dest="s0", type=float, required=True)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--t", type=float, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="levyskew", description=__doc__.split("\n\n")[0], allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("price", help="price a European option")
    _add_model_args(p)
    _add_rates(p)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--type", choices=("call", "put"), default="call")
    p.add_argument("--method", choices=("fourier", "mc", "series"), default="fourier")
    p.add_argument("--paths", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--n-terms", "--n_terms", dest="n_terms", type=int, default=40)
    _add_pricer_args(p)

    p = sub.add_parser("dual", help="dual model parameters and duality residual")
    _add_model_args(p)
    _add_rates(p)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--k", type=float, required=True)
    _add_pricer_args(p)

    p = sub.add_parser("sk", help="skewness premium over an x grid (r = delta)")
    _add_model_args(p)
    _add_rates(p, "--f0")
    p.add_argument("--x", type=_float_list, default=[0.01, 0.02, 0.05, 0.1])
    _add_pricer_args(p)

    p = sub.add_parser("scan", help="sign of SK excess and price monotonicity along beta")
    _add_model_args(p)
    _add_rates(p, "--f0")
    p.add_argument("--betas", type=_float_list, default=[-2, -1, -0.5, 0, 1])
    p.add_argument("--x", type=_float_list, default=[0.01, 0.05, 0.1])
    p.add_argument("--k", type=float, default=None, help="monotonicity strike (default 1.05 F0)")
    p.add_argument("--output-dir", type=Path, default=None)
    _add_pricer_args(p)

    p = sub.add_parser("chain", help="x vs x_obs tables from an observed chain CSV")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--output-dir", type=Path, default=None)
    p.add_argument("--sym-tol", type=float, default=1e-3, help="median |excess| accepted as symmetric")
    return parser


def _model(args, r_default=0.0, delta_default=0.0):
    values = {}
    if args.model_file is not None:
        for line in args.model_file.read_text(encoding="utf-8").splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ParameterOutOfRange(f"{args.model_file}: expected key = value, got {line!r}")
            values[key.strip().lower()] = value.strip()
    for key in _MODEL_FLAGS:
        v = getattr(args, f"model_{key}")
        if v is not None:
            values[key] = v
    if getattr(args, "r", None) is not None:
        values["r"] = args.r
    if getattr(args, "delta", None) is not None:
        values["delta"] = args.delta
    values.setdefault("r", r_default)
    values.setdefault("delta", delta_default)
    return model_from_mapping(values)


def _cfg(args) -> FourierConfig:
    return FourierConfig(args.alpha, args.u_max, args.n_nodes, args.tol)


def cmd_price(args, out):
    spec = _model(args)
    market = MarketParams(args.s0, spec.r, spec.delta, args.t)
    is_call = args.type == "call"
    if args.method == "mc":
        res = mc_price(market, spec.model, args.k, is_call, args.paths, args.seed, args.workers)
        out.write(f"price={fmt(res.estimate)} std_error={fmt(res.std_error)} n_paths={res.n_paths} seed={res.seed}\n")
        return EXIT_OK
    if args.method == "series":
        price = merton_series(market, spec.model, args.k, args.n_terms, is_call)
    else:
        cfg = _cfg(args)
        pricer = euro_call if is_call else euro_put
        price = clamp_for_report(pricer(market, spec.model, args.k, cfg), cfg)
    out.write(f"price={fmt(price)}\n")
    return EXIT_OK


def cmd_dual(args, out):
    spec = _model(args)
    cfg = _cfg(args)
    dual = dual_triplet(spec.model, spec.r, spec.delta)
    for key, value in model_to_mapping(dual).items():
        out.write(f"{key}={value if isinstance(value, str) else fmt(value)}\n")
    out.write(f"r={fmt(spec.delta)}\ndelta={fmt(spec.r)}\n")
    residual = duality_check(spec.model, args.s0, args.k, spec.r, spec.delta, args.t, cfg)
    out.write(f"residual={fmt(residual)}\n")
    return EXIT_OK if residual <= 2 * cfg.abs_tol else EXIT_CHECK


def cmd_sk(args, out):
    r = args.r if args.r is not None else 0.0
    spec = _model(args, r, r)
    cfg = _cfg(args)
    out.write("x,k_call,k_put,sk,excess\n")
    for x in args.x:
        try:
            pt = sk(spec.model, args.s0, r, args.t, x, cfg)
        except DegeneratePut as err:
            _report(err, "flagged")
            k_call, k_put = (1 + x) * args.s0, args.s0 / (1 + x)
            out.write(f"{fmt(x)},{fmt(k_call)},{fmt(k_put)},NA,NA\n")
            continue
        out.write(",".join(fmt(v) for v in (pt.x, pt.k_call, pt.k_put, pt.sk, pt.excess)) + "\n")
    return EXIT_OK


def _sign_csv(cells):
    lines = ["beta,x,excess,sign,expected"]
    for c in cells:
        if c.skipped:
            lines.append(f"{fmt(c.beta)},{fmt(c.x)},NA,NA,{c.expected}")
        else:
            lines.append(f"{fmt(c.beta)},{fmt(c.x)},{fmt(c.excess)},{c.sign},{c.expected}")
    return "\n".join(lines) + "\n"


def _mono_csv(scan):
    lines = ["beta,call_price"]
    for b, p in zip(scan.betas, scan.prices):
        lines.append(f"{fmt(b)},{'NA' if p is None else fmt(p)}")
    return "\n".join(lines) + "\n"


def cmd_scan(args, out):
    r = args.r if args.r is not None else 0.0
    spec = _model(args, r, r)
    cfg = _cfg(args)
    strike = args.k if args.k is not None else 1.05 * args.s0
    cells = sk_excess_sign_scan(spec.model, args.betas, args.x, args.s0, r, args.t, cfg)
    for c in cells:
        if c.skipped:
            _report_text("skipped", c.skipped, beta=c.beta, x=c.x)
    scan = monotonicity_scan(spec.model, args.betas, args.s0, strike, r, args.t, cfg)
    verdict = f"monotone={str(scan.monotone).lower()}\ndirection={scan.direction}\n"
    if args.output_dir is not None:
        args.output_dir.mkdir(parents=True, exist_ok=True)
        (args.output_dir / "sign_scan.csv").write_text(_sign_csv(cells), encoding="utf-8")
        (args.output_dir / "monotonicity.csv").write_text(_mono_csv(scan), encoding="utf-8")
        (args.output_dir / "monotonicity.txt").write_text(verdict, encoding="utf-8")
    else:
        out.write(_sign_csv(cells) + "\n" + _mono_csv(scan) + "\n" + verdict)
    return EXIT_OK


def cmd_chain(args, out):
    chain = chains.read_chain_csv(args.input)
    t1 = chains.table_calls_vs_interp_puts(chain)
    t2 = chains.table_puts_vs_interp_calls(chain)
    summary = chains.diagnose(chain, args.sym_tol)
    csv1, csv2 = chains.format_report_csv(t1), chains.format_report_csv(t2)
    if args.output_dir is not None:
        args.output_dir.mkdir(parents=True, exist_ok=True)
        (args.output_dir / "table_calls_vs_interp_puts.csv").write_text(csv1, encoding="utf-8")
        (args.output_dir / "table_puts_vs_interp_calls.csv").write_text(csv2, encoding="utf-8")
        (args.output_dir / "summary.txt").write_text(summary.as_text(), encoding="utf-8")
    else:
        out.write(csv1 + "\n" + csv2 + "\n" + summary.as_text())
    return EXIT_OK


COMMANDS = {"price": cmd_price, "dual": cmd_dual, "sk": cmd_sk, "scan": cmd_scan, "chain": cmd_chain}


def _report_text(kind, message, **extra):
    sys.stderr.write(json.dumps({"error": kind, "message": message, **extra}) + "\n")


def _report(err, kind=None):
    _report_text(kind or type(err).__name__, str(err), type=type(err).__name__)


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    args = build_parser().parse_args(argv)
    with warnings.catch_warnings():
        if getattr(args, "allow_truncation", False):
            warnings.simplefilter("always", TruncationWarning)
        else:
            warnings.simplefilter("error", TruncationWarning)
        try:
            return COMMANDS[args.command](args, out)
        except NUMERIC_ERRORS as err:
            _report(err)
            return EXIT_NUMERIC
        except INPUT_ERRORS as err:
            _report(err)
            return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
