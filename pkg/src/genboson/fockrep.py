"""Truncated Fock representation of the operator algebra."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qspecial import DeformationParams, box_number
from .ualg import UElement, coproduct_U, u_a, u_adag, u_ntilde


@dataclass(frozen=True)
class FockSpace:
    D: int
    params: DeformationParams

    def __post_init__(self):
        if self.D < 2:
            raise ValueError("Fock truncation needs D >= 2")
        bad = [n for n in range(self.D + 1) if box_number(n, self.params) < 0]
        if bad:
            raise ValueError(f"(n)_(alpha,beta) < 0 at n={bad[0]}: representation not unitarizable")

    @property
    def shift(self) -> float:
        return self.params.beta / self.params.alpha

    def ntilde_values(self):
        return np.arange(self.D) + self.shift


@dataclass(frozen=True)
class FockOperator:
    """Matrix valid on the first ``D - margin`` basis states."""

    matrix: np.ndarray
    margin: int

    @property
    def D(self):
        return self.matrix.shape[0]

    def interior(self, extra=0):
        n = max(self.D - self.margin - extra, 0)
        return self.matrix[:n, :n]

    def __matmul__(self, other):
        return FockOperator(self.matrix @ other.matrix, self.margin + other.margin)


def _space(D, params):
    return FockSpace(D, params)


def rep_a(D, params) -> FockOperator:
    _space(D, params)
    m = np.zeros((D, D), dtype=complex)
    for n in range(1, D):
        m[n - 1, n] = math.sqrt(box_number(n, params))
    return FockOperator(m, 0)


def rep_adag(D, params) -> FockOperator:
    return FockOperator(rep_a(D, params).matrix.conj().T, 1)


def rep_N(D, params) -> FockOperator:
    return FockOperator(np.diag(np.arange(D)).astype(complex), 0)


def rep_g(D, params) -> FockOperator:
    sp = _space(D, params)
    return FockOperator(np.diag(np.exp(1j * math.pi * sp.ntilde_values())), 0)


def represent(u: UElement, D) -> FockOperator:
    """Matrix of sum a†^k f(Ñ) a^m with f evaluated at Ñ = n + beta/alpha."""
    sp = _space(D, u.params)
    a = rep_a(D, u.params).matrix
    ad = a.conj().T
    nt = sp.ntilde_values()
    out = np.zeros((D, D), dtype=complex)
    margin = 0
    for (k, m), f in u.items():
        out += (np.linalg.matrix_power(ad, k) @ np.diag(f.eval(nt))
                @ np.linalg.matrix_power(a, m))
        margin = max(margin, k)
    return FockOperator(out, margin)


def tensor_represent(t, D) -> np.ndarray:
    """Kronecker matrix of a rank-2 tensor of operator-algebra atoms."""
    cache: dict = {}

    def leg(atom):
        if atom not in cache:
            cache[atom] = represent(UElement.from_atom(t.params, atom), D).matrix
        return cache[atom]

    out = np.zeros((D * D, D * D), dtype=complex)
    for (a1, a2), c in t.items():
        out += c * np.kron(leg(a1), leg(a2))
    return out


def tensor_coproduct_matrix(gen, D, params) -> np.ndarray:
    """Δ(gen) on C^D ⊗ C^D; gen is 'a', 'adag', 'Ntilde' or a UElement."""
    if isinstance(gen, str):
        gen = {"a": u_a, "adag": u_adag, "Ntilde": u_ntilde}[gen](params)
    return tensor_represent(coproduct_U(gen), D)


def relation_residual(D, params) -> dict:
    """Residuals of the defining relations on interior states."""
    from .qspecial import q_number
    a = rep_a(D, params).matrix
    ad = rep_adag(D, params).matrix
    N = rep_N(D, params).matrix
    n = D - 1
    rhs = np.diag([q_number(params.alpha * j + params.beta, params) for j in range(D)])
    rel = (a @ ad + ad @ a - rhs)[:n, :n]
    c1 = (N @ a - a @ N + a)[:n, :n]
    c2 = (N @ ad - ad @ N - ad)[:n, :n]
    return {"anticommutator": _relative(rel, rhs[:n, :n]),
            "N_a": _relative(c1, (N @ a)[:n, :n]),
            "N_adag": _relative(c2, (N @ ad)[:n, :n])}


def _relative(residual, scale) -> float:
    """Max residual entry over the max entry of the reference (at least 1)."""
    return float(np.abs(residual).max() / max(np.abs(scale).max(), 1.0))


def product_residual(u, v, D) -> float:
    """Scaled discrepancy between represent(u*v) and represent(u) @ represent(v)."""
    pu, pv = represent(u, D), represent(v, D)
    lhs = represent(u * v, D).matrix
    rhs = pu.matrix @ pv.matrix
    # columns j with j + (raising degree of v) < D are exact
    n = max(D - pv.margin, 1)
    return _relative((lhs - rhs)[:, :n], rhs[:, :n])
