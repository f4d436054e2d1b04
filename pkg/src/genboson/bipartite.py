"""Coherent states of Δ(a) on two Fock nodes and their entanglement."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .fockrep import FockSpace, tensor_coproduct_matrix
from .qspecial import (DeformationParams, box_factorial, box_number, deformed_exp,
                       floor_binomial, q_shifted_factorial)


@dataclass(frozen=True)
class BipartiteParams:
    params: DeformationParams
    zeta: complex = 0.4
    zeta1: complex = 0.3
    zeta2: complex = 0.3
    delta: float = 0.5
    d: Optional[Sequence[complex]] = None

    def __post_init__(self):
        if self.zeta == 0:
            raise ValueError("zeta must be nonzero")
        if self.zeta1 == 0:
            raise ValueError("zeta1 must be nonzero (rho1 enters as 1/rho1)")
        if self.d is None and not 0 < self.delta <= 1:
            raise ValueError("delta must lie in (0, 1]")

    @property
    def rho1(self) -> complex:
        p = self.params
        return self.zeta1 / self.zeta * p.q ** (p.beta / 2)

    @property
    def rho2(self) -> complex:
        p = self.params
        return cmath.exp(1j * math.pi * p.beta / p.alpha) * self.zeta2 / self.zeta * p.q ** (-p.beta / 2)

    def boundary(self, m) -> complex:
        if self.d is not None:
            return self.d[m]
        return self.delta ** m


def g_general(n, m, bp: BipartiteParams) -> complex:
    """General solution from the boundary row g_{0,m} = d_m."""
    p = bp.params
    base = p.q ** (-p.alpha)
    total = 0j
    for k in range(n + 1):
        total += ((-1) ** (k * (k + 1) // 2) * floor_binomial(n, k, base) * bp.rho2 ** k
                  * p.q ** (-k * (k - 1) * p.alpha / 2) * bp.boundary(m + k))
    return p.q ** (-n * m * p.alpha / 2) * total / bp.rho1 ** n


def g_geometric(n, m, bp: BipartiteParams) -> complex:
    """Closed form for d_m = δ^m."""
    p = bp.params
    return (p.q ** (-n * m * p.alpha / 2) * bp.delta ** m / bp.rho1 ** n
            * q_shifted_factorial(bp.delta * bp.rho2, -p.q ** (-p.alpha), n))


def g_classical(n, m, bp: BipartiteParams) -> complex:
    """The q -> 1 two-branch form."""
    r = (1 - bp.delta ** 2 * bp.rho2 ** 2) / bp.rho1 ** 2
    l, odd = divmod(n, 2)
    out = bp.delta ** m * r ** l
    if odd:
        out *= (1 - bp.delta * bp.rho2) / bp.rho1
    return out


def g_matrix(bp: BipartiteParams, D, solver=g_geometric) -> np.ndarray:
    return np.array([[solver(n, m, bp) for m in range(D)] for n in range(D)], dtype=complex)


def recurrence_residual(g: np.ndarray, bp: BipartiteParams) -> float:
    """max |ρ1 q^{mα/2} g_{n+1,m} + (-1)^n ρ2 q^{-nα/2} g_{n,m+1} - g_{n,m}| over interior cells."""
    p = bp.params
    D = g.shape[0]
    worst = 0.0
    for n in range(D - 1):
        for m in range(D - 1):
            lhs = (bp.rho1 * p.q ** (m * p.alpha / 2) * g[n + 1, m]
                   + (-1) ** n * bp.rho2 * p.q ** (-n * p.alpha / 2) * g[n, m + 1])
            worst = max(worst, abs(lhs - g[n, m]))
    return worst


def c_recurrence_residual(c: np.ndarray, bp: BipartiteParams) -> float:
    """Residual of the coefficient recurrence implied by Δ(a)|ẑ⟩ = ζ|ẑ⟩."""
    p = bp.params
    D = c.shape[0]
    a, b = p.alpha, p.beta
    worst = 0.0
    for n in range(D - 1):
        for m in range(D - 1):
            lhs = (c[n + 1, m] * math.sqrt(box_number(n + 1, p)) * p.q ** ((m * a + b) / 2)
                   + c[n, m + 1] * cmath.exp(1j * math.pi * (n + b / a))
                   * math.sqrt(box_number(m + 1, p)) * p.q ** (-(n * a + b) / 2))
            worst = max(worst, abs(lhs - bp.zeta * c[n, m]))
    return worst


@dataclass
class BipartiteState:
    coefficients: np.ndarray
    bp: BipartiteParams
    normalized: bool = False

    @property
    def D(self):
        return self.coefficients.shape[0]

    def normalized_copy(self) -> "BipartiteState":
        c = self.coefficients / np.linalg.norm(self.coefficients)
        return BipartiteState(c, self.bp, True)


def assemble_state(bp: BipartiteParams, D, solver=g_geometric) -> BipartiteState:
    """c_{n,m} = ζ1^n ζ2^m g_{n,m} / sqrt((n)!(m)!) on a D x D truncation."""
    FockSpace(D, bp.params)
    if D < 2:
        raise ValueError("D must be >= 2")
    g = g_matrix(bp, D, solver)
    fact = np.array([math.sqrt(box_factorial(n, bp.params)) for n in range(D)])
    pw1 = np.array([bp.zeta1 ** n for n in range(D)])
    pw2 = np.array([bp.zeta2 ** m for m in range(D)])
    c = np.outer(pw1 / fact, pw2 / fact) * g
    if not np.all(np.isfinite(c)):
        raise OverflowError("coefficients overflow at these parameters")
    return BipartiteState(c, bp)


def eigen_residual(state: BipartiteState, interior=True) -> float:
    """‖(Δ(a) - ζ)|ẑ⟩‖, over interior components (n, m <= D-2) by default."""
    D = state.D
    M = tensor_coproduct_matrix("a", D, state.bp.params)
    v = state.coefficients.reshape(-1)
    r = (M @ v - state.bp.zeta * v).reshape(D, D)
    if interior:
        r = r[:D - 1, :D - 1]
    return float(np.linalg.norm(r))


def norm_double(state: BipartiteState) -> float:
    return float(np.sum(np.abs(state.coefficients) ** 2))


def norm_single(bp: BipartiteParams, tol=1e-16, max_terms=400) -> float:
    """Σ_n q^{-nβ}|ζ|^{2n}/(n)! |(δρ2; -q^{-α})_n|² exp(δ²|ζ2|² q^{-nα})."""
    p = bp.params
    total = 0.0
    small = 0
    for n in range(max_terms):
        term = (p.q ** (-n * p.beta) * abs(bp.zeta) ** (2 * n) / box_factorial(n, p)
                * abs(q_shifted_factorial(bp.delta * bp.rho2, -p.q ** (-p.alpha), n)) ** 2
                * deformed_exp(bp.delta ** 2 * abs(bp.zeta2) ** 2 * p.q ** (-n * p.alpha), p))
        total += term
        small = small + 1 if abs(term) < tol * max(total, 1e-300) else 0
        if small == 2:
            return total
    raise ArithmeticError("norm series did not converge")


def norm_check(state: BipartiteState):
    """(double sum over the truncation, single sum)."""
    return norm_double(state), norm_single(state.bp)


def schmidt_entropy(state: BipartiteState) -> float:
    """Entanglement entropy of the normalized coefficient matrix."""
    s = np.linalg.svd(state.coefficients, compute_uv=False)
    p = s ** 2 / np.sum(s ** 2)
    p = p[p > 1e-300]
    return float(-np.sum(p * np.log(p)))


def entropy_scan(qs, base: BipartiteParams, D=14):
    """Schmidt entropy, norm and interior eigen residual across q values."""
    rows = []
    for q in qs:
        p = DeformationParams(q, base.params.alpha, base.params.beta)
        bp = BipartiteParams(p, base.zeta, base.zeta1, base.zeta2, base.delta, base.d)
        st = assemble_state(bp, D)
        rows.append((q, schmidt_entropy(st), norm_single(bp), eigen_residual(st)))
    return rows
