"""Acceptance suite: one PASS/FAIL line per criterion.

Each test evaluates every part of its criterion, prints a single summary
line straight to the terminal and then asserts the conjunction.
"""
import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from genboson import bipartite, coherent, dualalg, duality, fockrep, ualg
from genboson.cli import main as cli_main
from genboson.qspecial import DeformationParams, box_factorial, ck_coefficients, closed_ck

P = DeformationParams(1.3, 2.0, 1.0)
MEASURE_P = DeformationParams(1.2, 2.0, 1.0)
CLASSICAL = DeformationParams(1 + 1e-7, 2.0, 1.0)
ROOT = Path(__file__).resolve().parents[1]


@pytest.fixture
def emit(capsys):
    def _emit(number, parts, elapsed, limit=None):
        ok = all(p[1] for p in parts) and (limit is None or elapsed < limit)
        detail = "; ".join(f"{name} {'ok' if good else 'FAILED'} ({info})" for name, good, info in parts)
        timing = f"{elapsed:.2f}s" + (f" < {limit:g}s" if limit is not None else "")
        with capsys.disabled():
            print(f"\n[acceptance] criterion {number}: {'PASS' if ok else 'FAIL'} | {detail} | {timing}")
        return ok
    return _emit


def _part(name, value, tol):
    return name, bool(value < tol), f"{value:.3g} < {tol:g}"


def test_criterion_1_defining_relations(emit):
    t = time.perf_counter()
    res = fockrep.relation_residual(32, P)
    elapsed = time.perf_counter() - t
    parts = [_part(f"D=32 {k}", v, 1e-12) for k, v in res.items()]
    assert emit(1, parts, elapsed, 1.0)


def test_criterion_2_structure_constants(emit):
    t = time.perf_counter()
    six = 0.0
    for (u1, u2), vals in ualg.closed_g_six(P).items():
        for klm, v in vals.items():
            six = max(six, abs(ualg.extract_g(P, klm, 2).get((u1, u2)) - v))
    g = ualg.g_family_residuals(P)
    f = ualg.f_family_residuals(P)
    elapsed = time.perf_counter() - t
    parts = [_part("six low-order g constants", six, 1e-12)]
    parts += [_part(f"g {k}", v, 1e-12) for k, v in g.items()]
    parts += [_part(f"f {k}", v, 1e-12) for k, v in f.items()]
    assert emit(2, parts, elapsed, 10.0)


def test_criterion_3_dual_basis_duality(emit):
    t = time.perf_counter()
    ortho = duality.orthonormality_residual(P, 4)
    axioms = duality.duality_axiom_check(P, samples=50, seed=0)
    elapsed = time.perf_counter() - t
    parts = [_part("orthonormality indices <= 4", ortho, 1e-12)]
    parts += [_part(f"axiom {k}", v, 1e-9) for k, v in axioms.items()]
    assert emit(3, parts, elapsed, 30.0)


def test_criterion_4_dual_hopf_axioms(emit):
    t = time.perf_counter()
    groups = {
        "homomorphism order 6": dualalg.homomorphism_check(P, 6),
        "coassociativity order 5": dualalg.coassociativity_check(P, 5),
        "antipode order 4": dualalg.antipode_axiom_check(P, 4),
        "raw vs simplified order 6": dualalg.raw_vs_simplified(P, 6),
    }
    elapsed = time.perf_counter() - t
    parts = [_part(f"{g}: {k}", v, 1e-10) for g, rep in groups.items() for k, v in rep.items()]
    assert emit(4, parts, elapsed, 60.0)


def test_criterion_5_universal_tmatrix(emit):
    t = time.perf_counter()
    compare = max(duality.tmatrix_compare(P, d) for d in range(5))
    grouplike = duality.grouplike_check(P, 6, 3)
    elapsed = time.perf_counter() - t
    parts = [_part("closed vs series degree <= 4", compare, 1e-10),
             _part("group-like D=6 degree 3", grouplike, 1e-6)]
    assert emit(5, parts, elapsed, 60.0)


def _moment_part(params, label):
    worst = 0.0
    try:
        for n in range(9):
            value, _ = coherent.moment_integral(n, params)
            worst = max(worst, abs(value / box_factorial(n, params) - 1))
    except coherent.MeasureDivergence as exc:
        return f"moments n<=8 {label}", False, f"diverged at n={n}: {exc}"
    return _part(f"moments n<=8 {label}", worst, 1e-5)


def _resolution_part(params, label):
    try:
        return _part(f"resolution D=8 {label}", coherent.resolution_check(params, 8), 1e-5)
    except coherent.MeasureDivergence as exc:
        return f"resolution D=8 {label}", False, f"diverged: {exc}"


def test_criterion_6_completeness(emit):
    t = time.perf_counter()
    glauber = max(abs(coherent.measure_F(r, CLASSICAL) - 2 * math.exp(-r * r)) for r in np.linspace(0, 4, 9))
    parts = [_moment_part(MEASURE_P, "q=1.2"), _moment_part(CLASSICAL, "classical"),
             _part("classical F(rho) vs 2exp(-rho^2)", glauber, 1e-5),
             _resolution_part(MEASURE_P, "q=1.2"), _resolution_part(CLASSICAL, "classical")]
    elapsed = time.perf_counter() - t
    assert emit(6, parts, elapsed, 60.0)


def test_criterion_7_positivity(emit):
    t = time.perf_counter()
    parts = []
    for p in (MEASURE_P, P):
        vmin, xmin, _ = coherent.positivity_scan(p)
        parts.append((f"exp>0 on [-10,10] q={p.q:g}", vmin > 0, f"min {vmin:.4g} at x={xmin:g}"))
    for p in (P, DeformationParams(1.7, 0.5, 2.5), DeformationParams(0.6, 1.5, 0.3)):
        ck, closed = ck_coefficients(3, p), closed_ck(p)
        worst = max(abs(u - v) / max(1.0, abs(v)) for u, v in zip(ck, closed))
        parts.append(_part(f"c1..c3 q={p.q:g}", worst, 1e-12))
    elapsed = time.perf_counter() - t
    assert emit(7, parts, elapsed)


def test_criterion_8_bipartite(emit):
    t = time.perf_counter()
    base = bipartite.BipartiteParams(P)
    rec = bipartite.recurrence_residual(bipartite.g_matrix(base, 16), base)
    state = bipartite.assemble_state(base, 14)
    eig = bipartite.eigen_residual(state)
    dbl, single = bipartite.norm_check(state)
    qs = [1 + 1e-6, 1.001, 1.01, 1.05, 1.2, 1.5]
    rows = bipartite.entropy_scan(qs, base, D=14)
    ents = [r[1] for r in rows]
    elapsed = time.perf_counter() - t
    parts = [_part("g recurrence D=16", rec, 1e-12),
             _part("eigen residual D=14 q=1.3", eig, 1e-8),
             _part("norm double vs single", abs(dbl - single) / single, 1e-8),
             ("entropy q=1.5 > 1e-2", ents[-1] > 1e-2, f"{ents[-1]:.3g}"),
             _part("entropy at classical guard", ents[0], 1e-4),
             ("entropy monotone in q", all(a < b for a, b in zip(ents, ents[1:])),
              ", ".join(f"{e:.2g}" for e in ents))]
    assert emit(8, parts, elapsed, 30.0)


def test_criterion_9_determinism_and_runtime(emit, tmp_path):
    t = time.perf_counter()
    outputs = []
    for i in range(2):
        out = tmp_path / "report.json"
        code = cli_main(["hopf-verify", "--out", str(out)])
        outputs.append((code, out.read_bytes()))
    same = outputs[0] == outputs[1]
    suite = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(ROOT / "tests"),
                            "--ignore", str(ROOT / "tests" / "test_acceptance.py")],
                           capture_output=True, text=True, cwd=ROOT)
    elapsed = time.perf_counter() - t
    summary = suite.stdout.strip().splitlines()[-1] if suite.stdout.strip() else "no output"
    parts = [("byte-identical hopf-verify reports", same, f"exit {outputs[0][0]}"),
             ("unit suite", suite.returncode == 0, summary)]
    # the acceptance criteria above run in well under a minute; the bound covers both
    assert emit(9, parts, elapsed, 540.0)
