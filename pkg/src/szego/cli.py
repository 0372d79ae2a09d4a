"""Command-line front end: ``szego <command> [options]``.

Exit codes: 0 when every numerical target is met, 2 when a numerical target
is missed (convergence, quadrature, matching), 3 for usage errors.  Failures
are reported on stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import statistics
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .cauchy import fn_quadrature, fn_residue, side_of, stirling_integral
from .curves import szego_curve
from .errors import DomainError, SzegoError
from .specfun import erfc_zeros
from .zeros import (approximant, match_zeros, newton_solve_all, oracle_zeros,
                    RESIDUAL_TARGET, ZeroEstimate)

EXIT_OK, EXIT_NUMERICAL, EXIT_USAGE = 0, 2, 3

COMMANDS = ("szego-curve", "zeros", "compare", "fn-eval", "stirling", "erfc-zeros")
METHOD_ALIASES = {
    "oracle": "oracle",
    "newton": "newton_solve", "newton_solve": "newton_solve",
    "thm41": "thm41_expansion", "thm41_expansion": "thm41_expansion",
    "thm42": "thm42_expansion", "thm42_expansion": "thm42_expansion",
    "szego": "szego_alpha", "szego_alpha": "szego_alpha",
    "refined": "refined_alpha", "refined_alpha": "refined_alpha",
    "critical": "critical_alpha", "critical_alpha": "critical_alpha",
    "quadrature": "quadrature", "residue": "residue",
}
TOLERANCE_KEYS = {"residual": RESIDUAL_TARGET, "discrepancy": 1e-10}
ZERO_COLUMNS = ("k", "n", "method", "r", "re", "im", "residual", "error_bound")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: tuple[int, ...] = ()
    k_range: tuple[int, int] | None = None
    order_r: int | None = None
    method: str = "oracle"
    against: str = "oracle"
    output_format: str = "json"
    output_path: str | None = None
    tolerances: dict = field(default_factory=dict)
    samples: int = 1000
    count: int = 10
    z: complex | None = None
    match: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.output_format not in ("json", "csv"):
            raise UsageError(f"unknown format {self.output_format!r}")
        unknown = set(self.tolerances) - set(TOLERANCE_KEYS)
        if unknown:
            raise UsageError(f"unknown tolerance key(s): {', '.join(sorted(unknown))}")
        if any(not v > 0 for v in self.tolerances.values()):
            raise UsageError("tolerances must be positive")
        for m in (self.method, self.against):
            if m not in METHOD_ALIASES.values():
                raise UsageError(f"unknown method {m!r}")
        if self.k_range is not None and self.k_range[0] > self.k_range[1]:
            raise UsageError("--k must not exceed --k-max")
        if any(n < 1 for n in self.n):
            raise UsageError("--n must be positive")
        if self.command in ("zeros", "compare") and any(n < 2 for n in self.n):
            raise UsageError("--n must be at least 2 for zero computations")

    def tol(self, key: str) -> float:
        return self.tolerances.get(key, TOLERANCE_KEYS[key])


# -- serialization -------------------------------------------------------------

def _num(x):
    """JSON-safe float: shortest round-trip repr, ``None`` for NaN."""
    if x is None:
        return None
    x = float(x)
    return None if math.isnan(x) else x


def _zero_record(e: ZeroEstimate) -> dict:
    return {"k": e.k, "n": e.n, "method": e.method, "r": e.order_r,
            "re": _num(e.value.real), "im": _num(e.value.imag),
            "residual": _num(e.residual), "error_bound": _num(e.error_bound)}


def _render(records: list[dict], fmt: str, columns=None) -> str:
    if fmt == "json":
        return "".join(json.dumps(r) + "\n" for r in records)
    buf = io.StringIO()
    columns = list(columns or (records[0].keys() if records else []))
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for r in records:
        writer.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in columns})
    return buf.getvalue()


def _emit(text: str, cfg: RunConfig) -> None:
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands --------------------------------------------------------------

def _k_values(cfg: RunConfig, n: int, method: str) -> list[int]:
    if cfg.k_range is not None:
        lo, hi = cfg.k_range
        return list(range(lo, min(hi, n - 1) + 1))
    ks = list(range(1, n))
    if method == "thm41_expansion" and n % 2 == 0:
        ks.remove(n // 2)
    return ks


def _estimates(cfg: RunConfig, n: int, method: str) -> list[ZeroEstimate]:
    if method == "oracle":
        found = oracle_zeros(n)
    elif method == "newton_solve" and cfg.k_range is None:
        found = newton_solve_all(n)
    else:
        return [approximant(n, k, method, cfg.order_r) for k in _k_values(cfg, n, method)]
    keep = set(_k_values(cfg, n, method))
    return [e for e in found if e.k in keep]


def cmd_szego_curve(cfg: RunConfig) -> int:
    if cfg.samples < 2:
        raise UsageError("--samples must be at least 2")
    rows = [{"theta": s.theta, "r": s.r, "re": s.z.real, "im": s.z.imag}
            for s in szego_curve(cfg.samples)]
    _emit(_render(rows, cfg.output_format, ("theta", "r", "re", "im")), cfg)
    return EXIT_OK


def cmd_zeros(cfg: RunConfig) -> int:
    if len(cfg.n) != 1:
        raise UsageError("zeros takes exactly one --n")
    n = cfg.n[0]
    est = _estimates(cfg, n, cfg.method)
    _emit(_render([_zero_record(e) for e in est], cfg.output_format, ZERO_COLUMNS), cfg)
    if cfg.method in ("oracle", "newton_solve"):
        if any(not e.residual <= cfg.tol("residual") for e in est):
            return EXIT_NUMERICAL
    return EXIT_OK


def _slope(xs, ys) -> float | None:
    pts = [(math.log(x), math.log(y)) for x, y in zip(xs, ys) if y > 0]
    if len(pts) < 2:
        return None
    a, b = zip(*pts)
    return float(np.polyfit(a, b, 1)[0])


def cmd_compare(cfg: RunConfig) -> int:
    if not cfg.n:
        raise UsageError("compare needs at least one --n")
    rows, maxima = [], []
    for n in cfg.n:
        a = _estimates(cfg, n, cfg.method)
        b = _estimates(cfg, n, cfg.against)
        if cfg.match:
            pairs = [(a[m.predicted], b[m.oracle]) for m in match_zeros(a, b)]
        else:
            by_k = {e.k: e for e in b}
            pairs = [(e, by_k[e.k]) for e in a if e.k in by_k]
        dist = []
        for ea, eb in pairs:
            d = abs(ea.value - eb.value)
            dist.append(d)
            rows.append({"kind": "row", "n": n, "k": ea.k, "k_against": eb.k, "distance": d,
                         "re": ea.value.real, "im": ea.value.imag,
                         "re_against": eb.value.real, "im_against": eb.value.imag})
        mx = max(dist, default=0.0)
        maxima.append(mx)
        rows.append({"kind": "summary", "n": n, "count": len(dist), "max": mx,
                     "median": statistics.median(dist) if dist else 0.0})
    if len(cfg.n) > 1:
        rows.append({"kind": "fit", "slope": _slope(cfg.n, maxima), "statistic": "max"})
    columns = ("kind", "n", "k", "k_against", "distance", "re", "im", "re_against",
               "im_against", "count", "max", "median", "slope", "statistic")
    _emit(_render(rows, cfg.output_format, columns), cfg)
    return EXIT_OK


def cmd_fn_eval(cfg: RunConfig) -> int:
    if len(cfg.n) != 1 or cfg.z is None:
        raise UsageError("fn-eval needs one --n and --z")
    n, z = cfg.n[0], cfg.z
    side = side_of(z)
    residue = fn_residue(n, z, side)
    if cfg.method == "residue":
        value, check, method, err = residue, None, "residue", None
    else:
        q = fn_quadrature(n, z, full_output=True)
        value, check, method, err = q.value, residue, "quadrature", q.error
    rec = {"n": n, "z_re": z.real, "z_im": z.imag, "side": side, "method": method,
           "value_re": value.real, "value_im": value.imag, "error_estimate": _num(err),
           "check_re": None if check is None else check.real,
           "check_im": None if check is None else check.imag,
           "discrepancy": None if check is None else abs(value - check)}
    _emit(_render([rec], cfg.output_format), cfg)
    if check is not None and not abs(value - check) <= cfg.tol("discrepancy"):
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_stirling(cfg: RunConfig) -> int:
    if not cfg.n:
        raise UsageError("stirling needs --n")
    recs = []
    for n in cfg.n:
        rep = stirling_integral(n)
        recs.append({"n": n, "value_re": rep.value_primary.real, "value_im": rep.value_primary.imag,
                     "check_value": rep.value_check.real, "discrepancy": rep.abs_discrepancy,
                     "error_estimate": _num(rep.error_estimate),
                     "two_term": rep.extras["two_term"]})
    _emit(_render(recs, cfg.output_format), cfg)
    bad = any(r["discrepancy"] > cfg.tol("discrepancy") * max(1.0, r["check_value"]) for r in recs)
    return EXIT_NUMERICAL if bad else EXIT_OK


def cmd_erfc_zeros(cfg: RunConfig) -> int:
    if cfg.count < 1:
        raise UsageError("--count must be positive")
    recs = [{"k": w.index, "re": w.value.real, "im": w.value.imag, "residual": w.residual}
            for w in erfc_zeros(cfg.count)]
    if cfg.output_format == "json":
        _emit(json.dumps(recs) + "\n", cfg)
    else:
        _emit(_render(recs, "csv", ("k", "re", "im", "residual")), cfg)
    return EXIT_OK


HANDLERS = {"szego-curve": cmd_szego_curve, "zeros": cmd_zeros, "compare": cmd_compare,
            "fn-eval": cmd_fn_eval, "stirling": cmd_stirling, "erfc-zeros": cmd_erfc_zeros}


# -- argument parsing -----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _tolerance(text: str) -> tuple[str, float]:
    key, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected KEY=VAL, got {text!r}")
    try:
        return key.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {value!r}") from None


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="szego", description="Zeros of scaled exponential partial sums.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--n", type=int, nargs="+", default=[])
    p.add_argument("--k", type=int, help="first index (default 1)")
    p.add_argument("--k-max", type=int, help="last index (default n-1)")
    p.add_argument("--r", type=int, help="expansion order")
    p.add_argument("--method", default=None)
    p.add_argument("--against", default="oracle", help="second method for compare")
    p.add_argument("--match", action="store_true",
                   help="compare: pair by nearest-neighbour matching instead of index")
    p.add_argument("--format", choices=("json", "csv"), default=None)
    p.add_argument("--out")
    p.add_argument("--tol", type=_tolerance, action="append", default=[], metavar="KEY=VAL")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--z", type=_complex)
    return p


def parse_config(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    default_method = {"fn-eval": "quadrature", "compare": "thm42_expansion"}.get(ns.command, "oracle")
    method = METHOD_ALIASES.get(ns.method or default_method, ns.method)
    against = METHOD_ALIASES.get(ns.against, ns.against)
    k_range = None
    if ns.k is not None or ns.k_max is not None:
        lo = 1 if ns.k is None else ns.k
        hi = ns.k_max if ns.k_max is not None else (ns.k if ns.k is not None else 10 ** 9)
        k_range = (lo, hi)
    fmt = ns.format or ("csv" if ns.command == "szego-curve" else "json")
    return RunConfig(command=ns.command, n=tuple(ns.n), k_range=k_range, order_r=ns.r,
                     method=method, against=against, output_format=fmt, output_path=ns.out,
                     tolerances=dict(ns.tol), samples=ns.samples, count=ns.count, z=ns.z,
                     match=ns.match)


def _fail(kind: str, message: str, **extra) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message, **extra}) + "\n")


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        _fail("UsageError", str(exc))
        return EXIT_USAGE
    try:
        return HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        _fail("UsageError", str(exc))
        return EXIT_USAGE
    except DomainError as exc:
        _fail(type(exc).__name__, str(exc))
        return EXIT_USAGE
    except SzegoError as exc:
        _fail(type(exc).__name__, str(exc), unconverged=getattr(exc, "unconverged", None))
        return EXIT_NUMERICAL
    except OSError as exc:
        _fail("IOError", str(exc))
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
