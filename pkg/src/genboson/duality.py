"""Pairing between the dual algebra and the operator algebra, and the universal T matrix.

The pairing is fixed by <e^{klm}, E_{k'l'm'}> = δδδ.  On a pair of blocks
x^k p(z) y^m and a†^k f(Ñ) a^m it evaluates to {k}!{m}! [f(d/dz) p](s_km),
which gives a closed form on exponential polynomials; the windowed basis
contraction is kept as an independent second route.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .coeffring import ExpPoly
from .dualalg import (FElement, _curly_fact, antipode_element, basis_change, basis_shift,
                      coproduct_element, counit_F, dual_basis_e, oscillator_rep,
                      coproduct_F)
from .elements import Tensor
from .fockrep import rep_a
from .ualg import (E_coefficients, UElement, antipode_U, basis_E, coproduct_U, counit_U)


class WindowError(ValueError):
    """Both sides of a pairing have support outside the expansion window."""


@dataclass(frozen=True)
class PairingWindow:
    maxK: int = 4
    maxL: int = 4
    maxM: int = 4

    def __post_init__(self):
        for v in (self.maxK, self.maxL, self.maxM):
            if not 0 <= v <= 8:
                raise ValueError("window bounds must lie in 0..8")


# pairing ------------------------------------------------------------------------

def _block_pair(p: ExpPoly, f: ExpPoly, s: complex) -> complex:
    """[f(d/dz) p](s) for exponential polynomials p and f."""
    total = 0j
    for (a, mu), c in p.items():
        for (b, nu), d in f.items():
            w = s + nu
            acc = 0j
            for j in range(min(a, b) + 1):
                acc += (math.comb(a, j) * math.perm(b, j) * mu ** (b - j) * w ** (a - j))
            total += c * d * acc * np.exp(mu * w)
    return total


def pair_exact(f: FElement, u: UElement) -> complex:
    """Closed-form pairing, valid for arbitrary exponential-polynomial blocks."""
    params = f.params
    total = 0j
    for (k, m), p in f.items():
        g = u[(k, m)]
        if g:
            # blocks are centred at s_km
            total += _curly_fact(k, params) * _curly_fact(m, params) * _block_pair(p, g, 0.0)
    return complex(total)


def _fits(poly: ExpPoly, max_l: int) -> bool:
    return poly.is_polynomial() and poly.max_power() <= max_l


def pair(f: FElement, u: UElement, window: PairingWindow = PairingWindow()) -> complex:
    """Windowed contraction of e- and E-coefficients.

    Exact when, in every shared (k, m) block, one side is a polynomial of
    degree <= maxL; otherwise :class:`WindowError` is raised.
    """
    for (k, m), p in f.items():
        g = u[(k, m)]
        if not g:
            continue
        if k > window.maxK or m > window.maxM:
            raise WindowError(f"block ({k},{m}) lies outside the window")
        if not (_fits(p, window.maxL) or _fits(g, window.maxL)):
            raise WindowError(f"block ({k},{m}) has l-support beyond {window.maxL} on both sides")
    ce = basis_change(f, window.maxL)
    cE = E_coefficients(u, window.maxL)
    return complex(sum(c * cE.get(key, 0) for key, c in ce.items()))


def pair_tensor(fs, t: Tensor) -> complex:
    """<f_1 ⊗ ... ⊗ f_r, t> for a tensor of operator-algebra atoms."""
    params = t.params
    cache: dict = {}
    total = 0j
    for key, c in t.items():
        val = c
        for leg, atom in enumerate(key):
            ck = (leg, atom)
            if ck not in cache:
                cache[ck] = pair_exact(fs[leg], UElement.from_atom(params, atom))
            val *= cache[ck]
            if val == 0:
                break
        total += val
    return total


def pair_dual_tensor(t: Tensor, us) -> complex:
    """<t, u_1 ⊗ ... ⊗ u_r> for a tensor of dual-algebra atoms."""
    params = t.params
    cache: dict = {}
    total = 0j
    for key, c in t.items():
        val = c
        for leg, atom in enumerate(key):
            ck = (leg, atom)
            if ck not in cache:
                cache[ck] = pair_exact(FElement.from_atom(params, atom), us[leg])
            val *= cache[ck]
            if val == 0:
                break
        total += val
    return total


# duality axioms -------------------------------------------------------------------

def _random_element(cls, params, rng, n_atoms, lams):
    make = cls.from_z if cls is FElement else cls
    data: dict = {}
    for _ in range(n_atoms):
        k, m = (int(v) for v in rng.integers(0, 3, size=2))
        p = int(rng.integers(0, 3))
        lam = lams[int(rng.integers(0, len(lams)))]
        c = complex(rng.normal(), rng.normal())
        data[(k, m)] = data.get((k, m), ExpPoly()) + ExpPoly.monomial(p, lam, c)
    return make(params, data)


def _rel(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))


def duality_axiom_check(params, samples=50, seed=0) -> dict:
    """Max relative residual of each duality condition over seeded random samples."""
    rng = np.random.default_rng(seed)
    f_lams = [0.0, 1.0, -1.0, 0.5]
    u_lams = [0.0, 0.3, -0.4 + 0.2j, params.alpha * params.ln_q / 2]
    res = {"<ab,u>=<a⊗b,Δu>": 0.0, "<a,uv>=<Δa,u⊗v>": 0.0, "<a,1>=ε(a)": 0.0,
           "<1,u>=ε(u)": 0.0, "<a,S(u)>=<S(a),u>": 0.0}
    one_F = FElement.one(params)
    one_U = UElement.one(params)
    for _ in range(samples):
        a = _random_element(FElement, params, rng, 2, f_lams)
        b = _random_element(FElement, params, rng, 2, f_lams)
        u = _random_element(UElement, params, rng, 2, u_lams)
        v = _random_element(UElement, params, rng, 2, u_lams)
        res["<ab,u>=<a⊗b,Δu>"] = max(res["<ab,u>=<a⊗b,Δu>"],
                                     _rel(pair_exact(a * b, u), pair_tensor((a, b), coproduct_U(u))))
        order = u.degree() + v.degree()
        res["<a,uv>=<Δa,u⊗v>"] = max(res["<a,uv>=<Δa,u⊗v>"],
                                     _rel(pair_exact(a, u * v),
                                          pair_dual_tensor(coproduct_element(a, order), (u, v))))
        res["<a,1>=ε(a)"] = max(res["<a,1>=ε(a)"], _rel(pair_exact(a, one_U), counit_F(a)))
        res["<1,u>=ε(u)"] = max(res["<1,u>=ε(u)"], _rel(pair_exact(one_F, u), counit_U(u)))
        res["<a,S(u)>=<S(a),u>"] = max(res["<a,S(u)>=<S(a),u>"],
                                       _rel(pair_exact(a, antipode_U(u)),
                                            pair_exact(antipode_element(a, u.degree()), u)))
    return res


def orthonormality_residual(params, bound=4) -> float:
    """max |<e^{klm}, E_{k'l'm'}> - δδδ| over all indices <= bound."""
    idx = [(k, l, m) for k in range(bound + 1) for l in range(bound + 1) for m in range(bound + 1)]
    es = {i: dual_basis_e(*i, params) for i in idx}
    Es = {i: basis_E(*i, params) for i in idx}
    worst = 0.0
    for i in idx:
        for j in idx:
            if (i[0], i[2]) != (j[0], j[2]):
                continue  # different blocks pair to zero structurally
            val = pair(es[i], Es[j], PairingWindow(bound, bound, bound))
            worst = max(worst, abs(val - (1.0 if i == j else 0.0)))
    return worst


# universal T matrix -----------------------------------------------------------------

@dataclass
class TMatrixSeries:
    degree: int
    terms: list  # (FElement, UElement)


def tmatrix_series(params, degree: int) -> TMatrixSeries:
    """sum over k + l + m <= degree of e^{klm} ⊗ E_{klm}."""
    _check_degree(degree)
    terms = [(dual_basis_e(k, l, m, params), basis_E(k, l, m, params))
             for k, l, m in _indices(degree)]
    return TMatrixSeries(degree, terms)


def tmatrix_closed(params, degree: int) -> TMatrixSeries:
    """Expansion of the ordered product of Exp(x ⊗ a† q^{-αÑ/2}), exp(z ⊗ Ñ), Exp(y ⊗ (-1)^{-Ñ} q^{αÑ/2} a).

    The ordering marks put x left and y right on the dual side and a† left
    and a right on the operator side; the Ñ-dependent factors are collected
    in the middle without shifts.
    """
    _check_degree(degree)
    phi_x = -params.alpha * params.ln_q / 2
    phi_y = params.alpha * params.ln_q / 2 - 1j * math.pi
    terms = []
    for k, l, m in _indices(degree):
        norm = _curly_fact(k, params) * math.factorial(l) * _curly_fact(m, params)
        fe = FElement.from_z(params, {(k, m): ExpPoly.monomial(l, 0j, 1.0 / norm)})
        ue = UElement(params, {(k, m): ExpPoly.monomial(l, k * phi_x + m * phi_y)})
        terms.append((fe, ue))
    return TMatrixSeries(degree, terms)


def _check_degree(degree):
    if not 0 <= degree <= 6:
        raise ValueError("T-matrix degree must lie in 0..6")


def _indices(degree):
    return [(k, l, m) for k in range(degree + 1) for l in range(degree + 1 - k)
            for m in range(degree + 1 - k - l)]


def tmatrix_coefficients(series: TMatrixSeries) -> dict:
    """Coefficients on e^{klm} ⊗ E_{k'l'm'} inside the total-degree window."""
    d = series.degree
    out: dict = {}
    for fe, ue in series.terms:
        ce = basis_change(fe, d)
        cE = E_coefficients(ue, d)
        for i, a in ce.items():
            if sum(i) > d:
                continue
            for j, b in cE.items():
                if sum(j) > d:
                    continue
                out[(i, j)] = out.get((i, j), 0) + a * b
    return out


def tmatrix_compare(params, degree: int) -> float:
    """Max coefficient discrepancy between the closed form and the defining series."""
    a = tmatrix_coefficients(tmatrix_series(params, degree))
    b = tmatrix_coefficients(tmatrix_closed(params, degree))
    keys = set(a) | set(b)
    return max((abs(a.get(k, 0) - b.get(k, 0)) for k in keys), default=0.0)


# represented T matrix ------------------------------------------------------------------

def _osc_generators(params, Dosc, copies):
    """Matrices for x, y, z on ``copies`` (1 or 2) oscillator copies; 2 means Δ."""
    if copies == 1:
        r = oscillator_rep(Dosc, params)
        return r["x"], r["y"], r["z"]
    one = oscillator_rep(Dosc, params)
    order = 4 * (Dosc - 1) + 1  # every truncated-nonzero term
    mats = []
    for g in "xyz":
        t = coproduct_F(g, params, order)
        M = np.zeros((Dosc ** 4, Dosc ** 4), dtype=complex)
        for (a1, a2), c in t.items():
            M += c * np.kron(_osc_atom(params, a1, Dosc, one), _osc_atom(params, a2, Dosc, one))
        mats.append(M)
    return tuple(mats)


def _osc_atom(params, atom, Dosc, rep):
    k, m, p, lam = atom
    f = ExpPoly.monomial(p, lam)
    w = rep["zdiag"] - basis_shift(k, m, params)
    return (np.linalg.matrix_power(rep["x"], k) @ np.diag(f.eval(w))
            @ np.linalg.matrix_power(rep["y"], m))


def _nonzero_powers(M, cap):
    out = [np.eye(M.shape[0], dtype=complex)]
    while len(out) < cap:
        nxt = out[-1] @ M
        if not np.abs(nxt).max() > 0:
            break
        out.append(nxt)
    return out


def _t_blocks(params, Dfock, X, Y, Z):
    """Fock blocks T[n', n] (operators on the oscillator space).

    The k and m sums run until the oscillator powers vanish, so the result
    is exact in the oscillator factor.
    """
    a = rep_a(Dfock, params).matrix
    ad = a.conj().T
    dim = X.shape[0]
    eye = np.eye(dim)
    shift = params.beta / params.alpha
    Xp = [P / _curly_fact(k, params) for k, P in enumerate(_nonzero_powers(X, Dfock))]
    Yp = [P / _curly_fact(m, params) for m, P in enumerate(_nonzero_powers(Y, Dfock))]
    adp = [np.linalg.matrix_power(ad, k) for k in range(len(Xp))]
    ap = [np.linalg.matrix_power(a, m) for m in range(len(Yp))]
    blocks = np.zeros((Dfock, Dfock, dim, dim), dtype=complex)
    for n in range(Dfock):
        for m in range(min(len(Yp), n + 1)):
            j = n - m
            amp_m = ap[m][j, n]
            for k in range(len(Xp)):
                if j + k >= Dfock:
                    break
                s = basis_shift(k, m, params)
                E = expm((Z - s * eye) * (j + shift))
                blocks[j + k, n] += adp[k][j + k, j] * amp_m * (Xp[k] @ E @ Yp[m])
    return blocks


def _blocks_to_matrix(blocks):
    D, _, d, _ = blocks.shape
    return blocks.transpose(0, 2, 1, 3).reshape(D * d, D * d)


def tmatrix_represented(params, Dfock=6, Dosc=4) -> np.ndarray:
    """T with x, y, z on two oscillator modes and a, a†, Ñ on the Fock module.

    Basis order is (Fock n) ⊗ (oscillator n1, n2).  The z-sum is done
    exactly as exp((Z - s_km) Ñ).
    """
    if not (2 <= Dfock <= 8 and 2 <= Dosc <= 8):
        raise ValueError("dimensions must lie in 2..8")
    X, Y, Z = _osc_generators(params, Dosc, 1)
    return _blocks_to_matrix(_t_blocks(params, Dfock, X, Y, Z))


def grouplike_check(params, Dfock=6, degree=3) -> float:
    """Residual of T_{e,E} T_{e',E} = T_{Δ(e),E} with two oscillator copies.

    The oscillator truncation (degree + 1 levels per mode) is an exact
    representation of the dual algebra; Fock truncation corrupts only input
    states n > Dfock - 1 - degree, which are excluded.
    """
    Dosc = degree + 1
    X, Y, Z = _osc_generators(params, Dosc, 1)
    d1 = X.shape[0]
    I1 = np.eye(d1)
    B = _t_blocks(params, Dfock, X, Y, Z)
    # copy 1 acts on the first oscillator factor, copy 2 on the second
    T13 = np.einsum("abij,kl->abikjl", B, I1).reshape(Dfock, Dfock, d1 * d1, d1 * d1)
    T23 = np.einsum("abij,kl->abkilj", B, I1).reshape(Dfock, Dfock, d1 * d1, d1 * d1)
    lhs = np.einsum("abij,bcjk->acik", T13, T23)
    DX, DY, DZ = _osc_generators(params, Dosc, 2)
    rhs = _t_blocks(params, Dfock, DX, DY, DZ)
    ncol = Dfock - degree
    diff = np.abs(lhs[:, :ncol] - rhs[:, :ncol]).max()
    scale = max(np.abs(rhs[:, :ncol]).max(), 1.0)
    return float(diff / scale)
