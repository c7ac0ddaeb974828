"""Batch command line: ``periodize {solve,classify,basin,verify} [key=value ...]``.

Configuration is a flat ``key = value`` file (``--config``) overridden by
``key=value`` arguments. Every command prints a JSON document on stdout
and writes its files under ``--out`` (a path prefix). Exit codes: 0 on
success, 1 when an analysis check fails, 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import __version__
from .catalog import COMPLEX_ODES, KNOWN_IDS, REAL_ODES
from .core import (
    BasinGrid,
    DomainError,
    EquationSpec,
    EXPONENT_NAMES,
    PeriodClassification,
    SingularityError,
    UnsupportedError,
    Verdict,
    as_rational,
)
from .integrate import integrate_adaptive, make_system

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

PARAM_NAMES = frozenset(
    "alpha beta gamma delta eta c a b a1 a2 b1 b2 c1 c2 d1 d2 k A B kappa g3".split()
)
OMEGA_KEYS = ("omega_cap", "omega", "Omega")
DATA_KEYS = frozenset("y0 w0 wd0 wdot0 wdd0 wddot0 x0 v0 u0 ud0 vd0".split())
RUN_KEYS = frozenset(
    "eq family t0 t1 n_samples rtol atol period max_multiple period_tol base "
    "re_min re_max im_min im_max resolution workers extra tol x_min x_max n_x n_t".split()
)


class ConfigError(Exception):
    def __init__(self, field: str, message: str):
        super().__init__(message)
        self.field = field


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------


def parse_config_text(text: str, source: str = "config") -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}", f"expected key = value, got {raw!r}")
        k, v = line.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def parse_overrides(items) -> dict:
    out = {}
    for item in items:
        if "=" not in item:
            raise ConfigError(item, "overrides must look like key=value")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _complex(field: str, text: str) -> complex:
    s = text.strip().replace(" ", "")
    if s.endswith("i") and not s.endswith("inf"):
        s = s[:-1] + "j"
    try:
        return complex(s)
    except ValueError:
        raise ConfigError(field, f"not a number: {text!r}") from None


def _float(field: str, text: str) -> float:
    z = _complex(field, text)
    if z.imag != 0 or not math.isfinite(z.real):
        raise ConfigError(field, f"expected a finite real number, got {text!r}")
    return z.real


def _int(field: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(field, f"expected an integer, got {text!r}") from None


def _time(field: str, text: str, T: float) -> float:
    """A time, optionally in units of T: '2T', '0.5T', 'T', '3.1'."""
    s = text.strip()
    if s.endswith("T"):
        head = s[:-1].rstrip("*")
        mult = 1.0 if head in ("", "+") else _float(field, head)
        return mult * T
    return _float(field, s)


def _bool(field: str, text: str) -> bool:
    s = text.strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ConfigError(field, f"expected a boolean, got {text!r}")


def _list(field: str, text: str) -> list[complex]:
    return [_complex(field, part) for part in text.split(",") if part.strip()]


class Config:
    """Typed view over the flat key-value mapping; remembers which keys were used."""

    def __init__(self, raw: dict):
        self.raw = dict(raw)
        for key in self.raw:
            if key not in PARAM_NAMES and key not in DATA_KEYS and key not in RUN_KEYS and key not in OMEGA_KEYS and key not in EXPONENT_NAMES:
                raise ConfigError(key, f"unknown configuration key {key!r}")
        present = [k for k in OMEGA_KEYS if k in self.raw]
        if len(present) > 1:
            raise ConfigError(present[1], "give Omega only once")
        self.omega_cap = _float(present[0], self.raw[present[0]]) if present else 1.0
        if self.omega_cap == 0:
            raise ConfigError(present[0] if present else "omega_cap", "Omega must be nonzero")

    def has(self, key: str) -> bool:
        return key in self.raw

    def get(self, key: str, conv, default=None):
        if key not in self.raw:
            return default
        return conv(key, self.raw[key])

    def require(self, key: str, conv):
        if key not in self.raw:
            raise ConfigError(key, f"missing required key {key!r}")
        return conv(key, self.raw[key])

    @property
    def T(self) -> float:
        return 2 * math.pi / abs(self.omega_cap)

    def params(self) -> dict:
        return {k: _complex(k, v) for k, v in self.raw.items() if k in PARAM_NAMES}

    def exponents(self) -> dict:
        return {k: _int(k, v) for k, v in self.raw.items() if k in EXPONENT_NAMES}

    def spec(self) -> EquationSpec:
        eq = self.require("eq", lambda f, v: v)
        if eq not in KNOWN_IDS:
            raise ConfigError("eq", f"unknown equation id {eq!r}")
        try:
            return EquationSpec(eq, self.params(), self.omega_cap, self.exponents())
        except DomainError as exc:
            raise ConfigError(_field_of(str(exc)), str(exc)) from None

    def tolerances(self) -> dict:
        rtol = self.get("rtol", _float, 1e-10)
        atol = self.get("atol", _float, 1e-12)
        for name, v in (("rtol", rtol), ("atol", atol)):
            if not 1e-14 < v < 1e-2:
                raise ConfigError(name, "tolerances must lie in (1e-14, 1e-2)")
        return {"rtol": rtol, "atol": atol}


def _field_of(message: str) -> str:
    for name in sorted(PARAM_NAMES | set(EXPONENT_NAMES), key=len, reverse=True):
        if f" {name} " in f" {message} " or message.startswith(name + " "):
            return name
    if "omega" in message.lower():
        return "omega_cap"
    return "eq"


def initial_state(cfg: Config, spec: EquationSpec) -> list[complex]:
    if cfg.has("y0"):
        return cfg.get("y0", _list)
    if spec.id in REAL_ODES:
        order, ncomp = REAL_ODES[spec.id]
        stray = [n for n in ("w0", "wd0", "wdot0", "wdd0", "wddot0") if cfg.has(n)]
        if stray:
            real_names = "x0, v0" if ncomp == 1 else "u0, v0, ud0, vd0"
            raise ConfigError(stray[0], f"{spec.id} is a real system; give {real_names} or y0")
        if ncomp == 1:
            names = ["x0", "v0"][:order]
        else:
            names = ["u0", "v0", "ud0", "vd0"][: 2 * order]
            if order == 3:
                raise ConfigError("y0", f"{spec.id} needs y0 = u, v, u', v', u'', v''")
        return [cfg.get(n, _float, 0.0) for n in names]
    order = COMPLEX_ODES.get(spec.id, 1)
    groups = [("w0",), ("wd0", "wdot0"), ("wdd0", "wddot0")][:order]
    out = []
    for names in groups:
        given = [n for n in names if cfg.has(n)]
        out.append(cfg.get(given[0], _complex) if given else 0j)
    if not cfg.has("w0"):
        raise ConfigError("w0", "missing initial value w0 (or y0)")
    return out


# --------------------------------------------------------------------------
# output helpers
# --------------------------------------------------------------------------


def encode(obj: Any):
    """JSON-ready copy: complex as {re, im}, Fraction as 'n/d', non-finite floats as strings."""
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [encode(v) for v in obj.tolist()]
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": encode(float(obj.real)), "im": encode(float(obj.imag))}
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return obj


def dumps(obj) -> str:
    return json.dumps(encode(obj), indent=2) + "\n"


def manifest(spec, tolerances, status, classification=None, residuals=None) -> dict:
    return {
        "spec": spec,
        "tolerances": tolerances,
        "status": status,
        "classification": classification,
        "residuals": residuals,
    }


def _spec_dict(spec: EquationSpec) -> dict:
    return {
        "id": spec.id,
        "omega_cap": spec.omega_cap,
        "T": spec.T,
        "params": {k: complex(v) for k, v in sorted(spec.params.items())},
        "exponents": dict(sorted(spec.exponents.items())),
    }


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    wr.writerows(rows)
    return buf.getvalue()


def _fmt(x: float) -> str:
    return repr(float(x))


def _classification_dict(c: PeriodClassification, base: Optional[Fraction] = None) -> dict:
    out = {"verdict": c.kind.value, "period": c.period, "k": None, "t_b": c.t_b, "diagnostic": c.diagnostic}
    if c.period is not None and base is not None:
        k = c.period / base
        out["k"] = k.numerator if k.denominator == 1 else k
    return out


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def _first_order_analytic(spec: EquationSpec, w0: complex):
    from .analytic import classify_first_order

    c = classify_first_order(w0, spec, on_tol=1e-9)
    return c, {
        "verdict": c.verdict.value,
        "T1": c.T1,
        "T2": c.T2,
        "predicted_period": c.predicted_period,
        "t_b": c.t_b,
        "margin": c.margin,
    }


def _agree(analytic, measured: PeriodClassification, T: float) -> bool:
    if analytic.predicted_period is None:
        return measured.kind is Verdict.SINGULAR and abs(measured.t_b - analytic.t_b) < 1e-3 * T
    if measured.kind is not Verdict.PERIODIC:
        return False
    return (as_rational(analytic.predicted_period) / measured.period).denominator == 1


def classify_payload(cfg: Config, spec: EquationSpec, y0) -> tuple[dict, Optional[bool]]:
    from .period import detect_minimal_period, natural_base

    base = cfg.get("base", lambda f, v: as_rational(Fraction(v)), natural_base(spec))
    max_multiple = cfg.get("max_multiple", _int, 64)
    tol = cfg.get("period_tol", _float, 1e-6)
    tolerances = cfg.tolerances()
    try:
        measured = detect_minimal_period(
            make_system(spec), y0, base, max_multiple, tol, tolerances["rtol"], tolerances["atol"]
        )
    except DomainError as exc:
        raise ConfigError("max_multiple", str(exc)) from None
    analytic_block, agree = None, None
    if spec.id == "1.1":
        c, analytic_block = _first_order_analytic(spec, complex(y0[0]))
        agree = _agree(c, measured, spec.T)
    return {"analytic": analytic_block, "measured": _classification_dict(measured, base), "agree": agree}, agree


def cmd_solve(cfg: Config, out: Optional[Path]) -> tuple[dict, int]:
    spec = cfg.spec()
    tol = cfg.tolerances()
    y0 = initial_state(cfg, spec)
    T = spec.T
    t0 = cfg.get("t0", lambda f, v: _time(f, v, T), 0.0)
    t1 = cfg.require("t1", lambda f, v: _time(f, v, T))
    if not t1 > t0:
        raise ConfigError("t1", "need t1 > t0")
    n = cfg.get("n_samples", _int, 201)
    if n < 2:
        raise ConfigError("n_samples", "need at least two samples")
    k_max = int(math.floor((t1 - t0) / T + 1e-12))
    returns = [t0 + k * T for k in range(1, min(k_max, 8) + 1)]
    t_eval = np.union1d(np.linspace(t0, t1, n), returns)
    try:
        system = make_system(spec)
        state0 = system.initial(y0, t0)
    except (DomainError, UnsupportedError) as exc:
        raise ConfigError("y0" if "initial" in str(exc) else "eq", str(exc)) from None
    except SingularityError as exc:
        raise ConfigError("y0", str(exc)) from None
    tr = integrate_adaptive(system, state0, t0, t1, tol["rtol"], tol["atol"], t_eval=t_eval)
    dim = system.dimension
    rows = []
    for t, y in zip(tr.t, tr.y):
        row = [_fmt(t)]
        for v in y[:dim]:
            v = complex(v)
            row += [_fmt(v.real), _fmt(v.imag)]
        rows.append(row)
    header = ["t"] + [f"{part}_{i}" for i in range(dim) for part in ("re", "im")]
    residuals = {}
    obs0 = system.observe(np.asarray(state0))
    for k, tk in enumerate(returns, 1):
        hit = np.flatnonzero(tr.t == tk)
        if hit.size:
            state = np.asarray(tr.y[hit[0]], dtype=complex)
            residuals[f"return_at_{k}T"] = float(np.max(np.abs(system.observe(state)[:dim] - obs0[:dim])))
    classification = None
    agree = None
    if spec.id == "1.1" or cfg.get("period", _bool, False):
        classification, agree = classify_payload(cfg, spec, y0)
    status = {"status": tr.status.value, "t_b": tr.t_b, "n_steps": tr.n_steps, "n_rejected": tr.n_rejected, "samples": len(tr.t)}
    doc = manifest(_spec_dict(spec), tol, status, classification, residuals)
    if out is not None:
        _write(out.with_suffix(".csv"), _csv_text(header, rows))
        _write(out.with_suffix(".json"), dumps(doc))
    return doc, EXIT_OK


def cmd_classify(cfg: Config, out: Optional[Path]) -> tuple[dict, int]:
    spec = cfg.spec()
    y0 = initial_state(cfg, spec)
    try:
        payload, agree = classify_payload(cfg, spec, y0)
    except (DomainError, UnsupportedError) as exc:
        raise ConfigError("eq", str(exc)) from None
    doc = manifest(_spec_dict(spec), cfg.tolerances(), {"status": "completed"}, payload, None)
    if out is not None:
        _write(out.with_suffix(".json"), dumps(doc))
    return doc, EXIT_FAIL if agree is False else EXIT_OK


def cmd_basin(cfg: Config, out: Optional[Path], workers_flag: Optional[int] = None) -> tuple[dict, int]:
    from .period import analytic_basin_fractions, basin_fractions, basin_scan, natural_base

    spec = cfg.spec()
    tol = cfg.tolerances()
    res_text = cfg.get("resolution", lambda f, v: v, "64")
    try:
        parts = [int(p) for p in res_text.lower().split("x")]
    except ValueError:
        raise ConfigError("resolution", f"bad resolution {res_text!r}") from None
    n_re, n_im = (parts[0], parts[0]) if len(parts) == 1 else tuple(parts[:2])
    if n_re < 1 or n_im < 1 or len(parts) > 2:
        raise ConfigError("resolution", "resolution must be positive, e.g. 64 or 64x32")
    rr = (cfg.get("re_min", _float, -2.0), cfg.get("re_max", _float, 2.0))
    ii = (cfg.get("im_min", _float, -2.0), cfg.get("im_max", _float, 2.0))
    if not (rr[1] > rr[0] and ii[1] > ii[0]):
        raise ConfigError("re_max" if rr[1] <= rr[0] else "im_max", "ranges must be increasing")
    try:
        grid = BasinGrid(rr, ii, (n_re, n_im))
    except DomainError as exc:
        raise ConfigError("resolution", str(exc)) from None
    workers = workers_flag if workers_flag is not None else cfg.get("workers", _int, 1)
    base = cfg.get("base", lambda f, v: as_rational(Fraction(v)), natural_base(spec))
    max_multiple = cfg.get("max_multiple", _int, 16)
    period_tol = cfg.get("period_tol", _float, 1e-6)
    extra = cfg.get("extra", _list, [])
    try:
        scanned = basin_scan(spec, grid, period_tol, base, max_multiple, extra, workers, tol["rtol"], tol["atol"])
    except (DomainError, UnsupportedError) as exc:
        raise ConfigError("eq", str(exc)) from None
    re_vals, im_vals = grid.centers()
    rows = []
    for j, row in enumerate(scanned.cells):
        for i, cell in enumerate(row):
            num = den = ""
            if cell.period is not None:
                num, den = str(cell.period.numerator), str(cell.period.denominator)
            rows.append([_fmt(re_vals[i]), _fmt(im_vals[j]), cell.kind.value, num, den])
    summary = {
        "grid": {"re_range": rr, "im_range": ii, "resolution": [n_re, n_im], "base": base, "max_multiple": max_multiple},
        "fractions": basin_fractions(scanned),
        "analytic_fractions": analytic_basin_fractions(spec, grid, band=1e-9) if spec.id == "1.1" else None,
    }
    doc = manifest(_spec_dict(spec), {**tol, "period_tol": period_tol}, {"status": "completed", "cells": grid.size}, summary, None)
    if out is not None:
        _write(out.with_suffix(".csv"), _csv_text(["re", "im", "verdict", "period_num", "period_den"], rows))
        _write(out.with_suffix(".json"), dumps(doc))
    return doc, EXIT_OK


def cmd_verify(cfg: Config, out: Optional[Path]) -> tuple[dict, int]:
    from .verify import FAMILIES, resolve_family

    name = cfg.require("family", lambda f, v: v)
    try:
        key = resolve_family(name)
    except KeyError:
        raise ConfigError("family", f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}") from None
    try:
        report = FAMILIES[key](cfg)
    except DomainError as exc:
        raise ConfigError(_field_of(str(exc)), str(exc)) from None
    doc = manifest(
        {"family": key, "omega_cap": cfg.omega_cap, "params": cfg.params()},
        report.pop("tolerances"),
        {"status": "completed", "pass": report["pass"]},
        {k: v for k, v in report.items() if k != "residuals"},
        report.get("residuals"),
    )
    if out is not None:
        _write(out.with_suffix(".json"), dumps(doc))
    return doc, EXIT_OK if report["pass"] else EXIT_FAIL


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


COMMANDS = {"solve": cmd_solve, "classify": cmd_classify, "basin": cmd_basin, "verify": cmd_verify}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="periodize", description="Periodic solutions of the catalog equations.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", type=Path, help="flat key = value file")
        sp.add_argument("--out", type=Path, help="output path prefix (files get .csv / .json)")
        if name == "basin":
            sp.add_argument("--workers", type=int, help="process count for the scan")
        sp.add_argument("overrides", nargs="*", metavar="key=value")
    return ap


def _error(kind: str, field: Optional[str], message: str) -> str:
    return dumps({"error": {"kind": kind, "field": field, "message": message}})


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        raw = {}
        if args.config is not None:
            try:
                raw.update(parse_config_text(args.config.read_text(), str(args.config)))
            except OSError as exc:
                raise ConfigError("config", str(exc)) from None
        raw.update(parse_overrides(args.overrides))
        cfg = Config(raw)
        if args.command == "basin":
            doc, code = cmd_basin(cfg, args.out, args.workers)
        else:
            doc, code = COMMANDS[args.command](cfg, args.out)
    except ConfigError as exc:
        sys.stdout.write(_error("config", exc.field, str(exc)))
        return EXIT_CONFIG
    except DomainError as exc:
        sys.stdout.write(_error("config", None, str(exc)))
        return EXIT_CONFIG
    except (SingularityError, UnsupportedError, ArithmeticError) as exc:
        sys.stdout.write(_error("analysis", None, f"{type(exc).__name__}: {exc}"))
        return EXIT_FAIL
    sys.stdout.write(dumps(doc))
    return code


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
