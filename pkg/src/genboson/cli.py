"""Command-line verification suites.

Every subcommand writes one JSON report (numbers with 17 significant
digits) and exits 0 when all checks pass, 1 when any check fails and 2 on
configuration errors.  A flat ``key=value`` file given with ``--config``
supplies defaults that command-line flags override.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bipartite, coherent, dualalg, duality, fockrep, ualg
from .qspecial import DeformationParams, SeriesDivergence, ck_coefficients, closed_ck

COMMANDS = ("hopf-verify", "structure", "dual-basis", "tmatrix", "coherent", "bipartite")

# key -> (parser, default)
_KEYS = {
    "q": (float, 1.2),
    "alpha": (float, 2.0),
    "beta": (float, 1.0),
    "dim": (int, None),
    "order": (int, None),
    "tol": (float, None),
    "seed": (int, 0),
    "out": (str, None),
    "samples": (int, 50),
    "n_max": (int, 8),
    "zeta": (complex, 0.4),
    "zeta1": (complex, 0.3),
    "zeta2": (complex, 0.3),
    "delta": (float, 0.5),
    "scan": (str, None),
    "csv": (str, None),
    "timings": (lambda s: s.strip().lower() in ("1", "true", "yes"), False),
}


class ConfigError(ValueError):
    pass


# configuration --------------------------------------------------------------------

def read_config(path) -> dict:
    """Parse a flat key=value file; '#' starts a comment."""
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _coerce(key, value):
    if key not in _KEYS:
        raise ConfigError(f"unknown config key {key!r}")
    conv = _KEYS[key][0]
    try:
        return conv(value) if isinstance(value, str) else value
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {value!r}") from exc


def resolve_config(args) -> dict:
    cfg = {k: v[1] for k, v in _KEYS.items()}
    if args.config:
        for k, v in read_config(args.config).items():
            cfg[k] = _coerce(k, v)
    for k in _KEYS:
        v = getattr(args, k, None)
        if v is not None and v is not False:
            cfg[k] = _coerce(k, v)
    return cfg


def _params(cfg, deformed=True) -> DeformationParams:
    try:
        p = DeformationParams(cfg["q"], cfg["alpha"], cfg["beta"])
        if deformed:
            p.require_deformed()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return p


# reporting -----------------------------------------------------------------------

@dataclass
class Report:
    command: str
    config: dict
    checks: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    timings: bool = False

    def check(self, name, residual, tol, note=None, started=None):
        residual = float(residual)
        entry = {"name": name, "status": "pass" if residual <= tol else "fail",
                 "residual": residual, "tolerance": float(tol)}
        if math.isnan(residual):
            entry["status"] = "fail"
        if note:
            entry["note"] = note
        if self.timings and started is not None:
            entry["wall_time_s"] = time.perf_counter() - started
        self.checks.append(entry)

    def failure(self, name, message):
        self.checks.append({"name": name, "status": "fail", "error": message})

    @property
    def all_pass(self):
        return all(c["status"] == "pass" for c in self.checks)

    def to_dict(self):
        return {"command": self.command, "config": self.config, "checks": self.checks,
                "warnings": self.warnings, "data": self.data, "all_pass": self.all_pass}


def _fmt_number(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if math.isnan(x) or math.isinf(x):
        return '"' + repr(x) + '"'
    return format(x, ".17g")


def to_json(obj, indent=0) -> str:
    """JSON text with floats at 17 significant digits; complex as {re, im}."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, (bool, int, float, np.floating, np.integer)):
        return _fmt_number(obj.item() if hasattr(obj, "item") else obj)
    if isinstance(obj, complex):
        return to_json({"re": obj.real, "im": obj.imag}, indent)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {to_json(v, indent + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(pad + to_json(v, indent + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt_number(v) if isinstance(v, float) else v for v in r])
    Path(path).write_text(buf.getvalue(), encoding="utf-8")


def _tol(cfg, default):
    return cfg["tol"] if cfg["tol"] is not None else default


def _max(d):
    return max(d.values()) if d else 0.0


# commands --------------------------------------------------------------------------

def cmd_hopf_verify(cfg, rep: Report):
    p = _params(cfg)
    order = cfg["order"] if cfg["order"] is not None else 4
    if order < 0:
        raise ConfigError("order must be >= 0")
    D = cfg["dim"] or 32
    t = time.perf_counter()
    rep.check("fock defining relations", _max(fockrep.relation_residual(D, p)), _tol(cfg, 1e-12), started=t)
    t = time.perf_counter()
    rep.check("U antipode axiom", _max(ualg.hopf_axioms_U(p)), _tol(cfg, 1e-12), started=t)
    t = time.perf_counter()
    rep.check("U coproduct respects relation", ualg.relation_coproduct_residual(p), _tol(cfg, 1e-12), started=t)
    t = time.perf_counter()
    rep.check("U coassociativity", _max(ualg.coassociativity_U(p)), _tol(cfg, 1e-12), started=t)
    t = time.perf_counter()
    rep.check("closed-form g constants", _max(ualg.g_family_residuals(p)), _tol(cfg, 1e-12), started=t)
    note = "order-0: leading terms only" if order == 0 else None
    dual = [
        ("dual homomorphism", lambda: dualalg.homomorphism_check(p, order)),
        ("dual raw vs simplified coproduct", lambda: dualalg.raw_vs_simplified(p, order)),
        ("dual coassociativity and exp(Dz) factorization", lambda: dualalg.coassociativity_check(p, order)),
        ("dual antipode axiom", lambda: dualalg.antipode_axiom_check(p, order)),
        ("dual antipode anti-homomorphism", lambda: dualalg.antihomomorphism_check(p, order)),
    ]
    for name, fn in dual:
        t = time.perf_counter()
        rep.check(f"{name} (order {order})", _max(fn()), _tol(cfg, 1e-10), note, started=t)
    t = time.perf_counter()
    rep.check("pairing orthonormality (indices <= 4)", duality.orthonormality_residual(p, 4),
              _tol(cfg, 1e-12), started=t)
    t = time.perf_counter()
    rep.check(f"duality axioms ({cfg['samples']} samples)",
              _max(duality.duality_axiom_check(p, cfg["samples"], cfg["seed"])), _tol(cfg, 1e-9), started=t)
    deg = min(order, 6)
    t = time.perf_counter()
    rep.check(f"T matrix closed vs series (degree {deg})", duality.tmatrix_compare(p, deg),
              _tol(cfg, 1e-10), note, started=t)


def cmd_structure(cfg, rep: Report):
    p = _params(cfg)
    bound = cfg["dim"] or 3
    for name, val in ualg.g_family_residuals(p, bound).items():
        rep.check(f"g family {name}", val, _tol(cfg, 1e-12))
    for name, val in ualg.f_family_residuals(p, min(bound, 3)).items():
        rep.check(f"f family {name}", val, _tol(cfg, 1e-12))
    six = ualg.closed_g_six(p)
    rep.data["g_six"] = [{"upper": [list(u1), list(u2)], "klm": list(klm), "value": complex(v)}
                         for (u1, u2), vals in six.items() for klm, v in vals.items()]


def cmd_dual_basis(cfg, rep: Report):
    p = _params(cfg)
    bound = cfg["dim"] or 4
    if not 0 <= bound <= 8:
        raise ConfigError("dim (index bound) must lie in 0..8")
    rep.check(f"pairing orthonormality (indices <= {bound})",
              duality.orthonormality_residual(p, bound), _tol(cfg, 1e-12))
    worst = 0.0
    for k in range(7):
        for l in range(7 - k):
            for m in range(7 - k - l):
                c = dualalg.basis_change(dualalg.dual_basis_e(k, l, m, p), 6)
                worst = max([worst] + [abs(v - (1.0 if key == (k, l, m) else 0.0)) for key, v in c.items()])
    rep.check("basis_change inverts dual_basis_e (k+l+m <= 6)", worst, _tol(cfg, 1e-12))
    for name, val in duality.duality_axiom_check(p, cfg["samples"], cfg["seed"]).items():
        rep.check(f"duality {name}", val, _tol(cfg, 1e-9))


def cmd_tmatrix(cfg, rep: Report):
    p = _params(cfg)
    degree = cfg["order"] if cfg["order"] is not None else 4
    if not 0 <= degree <= 6:
        raise ConfigError("order (T-matrix degree) must lie in 0..6")
    Dfock = cfg["dim"] or 6
    if not 2 <= Dfock <= 8:
        raise ConfigError("dim (Fock truncation) must lie in 2..8")
    rows = []
    for d in range(degree + 1):
        r = duality.tmatrix_compare(p, d)
        rows.append((d, r))
        rep.check(f"T closed vs series (degree {d})", r, _tol(cfg, 1e-10))
    rep.data["compare"] = [{"degree": d, "residual": r} for d, r in rows]
    gdeg = min(degree, Dfock - 1, 3) if degree else 0
    if gdeg >= 1:
        rep.check(f"group-like T (Dfock {Dfock}, degree {gdeg})",
                  duality.grouplike_check(p, Dfock, gdeg), _tol(cfg, 1e-6))


def cmd_coherent(cfg, rep: Report):
    p = _params(cfg, deformed=False)
    D = cfg["dim"] or 8
    n_max = cfg["n_max"]
    tol = _tol(cfg, 1e-5)
    rows = []
    try:
        for n in range(n_max + 1):
            I, _ = coherent.moment_integral(n, p)
            rows.append(coherent.MomentRow(n, I, coherent.box_factorial(n, p)))
    except (coherent.MeasureDivergence, SeriesDivergence) as exc:
        rep.failure("moment integrals", f"divergence: {exc}")
        rep.data["divergence"] = {"n": len(rows), "message": str(exc),
                                  "radius": getattr(exc, "radius", None),
                                  "value": getattr(exc, "value", None),
                                  "peak": getattr(exc, "peak", None)}
    for r in rows:
        rep.check(f"moment I_{r.n} / (n)!", abs(r.ratio - 1), tol)
    rep.data["moments"] = [{"n": r.n, "I_n": r.moment, "factorial": r.factorial, "ratio": r.ratio}
                           for r in rows]
    if len(rows) == n_max + 1:
        try:
            rep.check(f"resolution of unity (D {D})", coherent.resolution_check(p, D), tol)
        except (coherent.MeasureDivergence, SeriesDivergence) as exc:
            rep.failure("resolution of unity", f"divergence: {exc}")
    ck = ck_coefficients(3, p)
    closed = closed_ck(p)
    rep.check("c_1..c_3 recurrence vs closed forms",
              max(abs(u - v) / max(1.0, abs(v)) for u, v in zip(ck, closed)), _tol(cfg, 1e-12))
    vmin, xmin, _ = coherent.positivity_scan(p)
    rep.check("exp_(alpha,beta) > 0 on [-10, 10]", max(0.0, -vmin), 0.0,
              note=f"minimum {vmin:.6g} at x = {xmin:g}")
    return ("n", "I_n", "factorial", "ratio"), [(r.n, r.moment, r.factorial, r.ratio) for r in rows]


def cmd_bipartite(cfg, rep: Report):
    D = cfg["dim"] or 14
    if D < 2:
        raise ConfigError("dim must be >= 2")
    if cfg["scan"]:
        try:
            qs = [float(s) for s in cfg["scan"].split(",") if s.strip()]
        except ValueError as exc:
            raise ConfigError(f"bad scan list {cfg['scan']!r}") from exc
    else:
        qs = [cfg["q"]]
    wide = D < 4
    if wide:
        rep.warnings.append(f"D={D} is below 4: truncation dominates, tolerances widened")
    scale = 1e6 if wide else 1.0
    rows = []
    for q in qs:
        cfg_q = dict(cfg, q=q)
        p = _params(cfg_q, deformed=False)
        try:
            bp = bipartite.BipartiteParams(p, cfg["zeta"], cfg["zeta1"], cfg["zeta2"], cfg["delta"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        st = bipartite.assemble_state(bp, D)
        g = bipartite.g_matrix(bp, D)
        rep.check(f"q={q:g}: g recurrence", bipartite.recurrence_residual(g, bp), _tol(cfg, 1e-12) * scale)
        eig = bipartite.eigen_residual(st)
        rep.check(f"q={q:g}: Δ(a) eigen residual (interior)", eig, _tol(cfg, 1e-8) * scale)
        dbl, single = bipartite.norm_check(st)
        rep.check(f"q={q:g}: norm double vs single sum", abs(dbl - single) / single, _tol(cfg, 1e-8) * scale)
        rows.append((q, bipartite.schmidt_entropy(st), single, eig))
    if len(rows) > 1:
        ordered = sorted(rows, key=lambda r: r[0])
        ents = [r[1] for r in ordered]
        bad = max([0.0] + [ents[i] - ents[i + 1] for i in range(len(ents) - 1)])
        rep.check("entropy increases with q across the scan", bad, 0.0)
    rep.data["rows"] = [{"q": r[0], "schmidt_entropy": r[1], "norm": r[2], "eigen_residual": r[3]}
                        for r in rows]
    return ("q", "schmidt_entropy", "norm", "eigen_residual"), rows


_DISPATCH = {
    "hopf-verify": cmd_hopf_verify,
    "structure": cmd_structure,
    "dual-basis": cmd_dual_basis,
    "tmatrix": cmd_tmatrix,
    "coherent": cmd_coherent,
    "bipartite": cmd_bipartite,
}


def build_parser():
    ap = argparse.ArgumentParser(prog="genboson", description="Verification suites for the generalized boson Hopf algebra.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--q", type=float)
        sp.add_argument("--alpha", type=float)
        sp.add_argument("--beta", type=float)
        sp.add_argument("--dim", type=int)
        sp.add_argument("--order", type=int)
        sp.add_argument("--tol", type=float)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--config")
        sp.add_argument("--out", help="JSON report path (stdout if omitted)")
        sp.add_argument("--csv", help="CSV dataset path (coherent, bipartite)")
        sp.add_argument("--timings", action="store_true", help="add wall times to the report")
        if name == "bipartite":
            sp.add_argument("--scan", help="comma-separated q values")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        rep = Report(args.command, {k: v for k, v in cfg.items() if v is not None and k != "timings"},
                     timings=cfg["timings"])
        started = time.perf_counter()
        result = _DISPATCH[args.command](cfg, rep)
    except ConfigError as exc:
        print(f"genboson: configuration error: {exc}", file=sys.stderr)
        return 2
    if rep.timings:
        rep.data["wall_time_s"] = time.perf_counter() - started
    if result is not None:
        header, rows = result
        csv_path = cfg["csv"] or (str(Path(cfg["out"]).with_suffix(".csv")) if cfg["out"] else None)
        if csv_path:
            write_csv(csv_path, header, rows)
    text = to_json(rep.to_dict()) + "\n"
    if cfg["out"]:
        Path(cfg["out"]).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0 if rep.all_pass else 1


if __name__ == "__main__":
    sys.exit(main())
