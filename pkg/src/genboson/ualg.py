"""Normal-ordering engine for the generalized boson algebra.

Elements are sums ``a†^k f(Ñ) a^m`` with Ñ = N + beta/alpha.  Products are
brought to normal order with

    a a† = [alpha Ñ]_q - a† a,    a f(Ñ) = f(Ñ + 1) a,    f(Ñ) a† = a† f(Ñ + 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .coeffring import ExpPoly
from .elements import NormalOrdered, Tensor
from .qspecial import curly_number, sigma


class UElement(NormalOrdered):
    """Normal-ordered element of U_<q>(h(1))."""

    __slots__ = ()

    def _product_terms(self, k1, m1, f, k2, m2, g):
        for (i, r), h in _lower_raise(self.params, m1, k2).items():
            yield (k1 + i, r + m2), f.shift(i) * h * g.shift(r)


@lru_cache(maxsize=None)
def _c_poly(params, k):
    """c_k(t) with a a†^k = a†^{k-1} c_k(Ñ) + (-1)^k a†^k a."""
    out = ExpPoly()
    a = params.alpha
    for j in range(k):
        out = out + ExpPoly.qbracket(a, a * (k - 1 - j), params) * (-1) ** j
    return out


@lru_cache(maxsize=None)
def _lower_raise(params, m, k):
    """Normal form of a^m a†^k as {(i, r): h}."""
    cur = {(k, 0): ExpPoly.constant(1)}
    for _ in range(m):
        nxt: dict = {}

        def add(key, val):
            nxt[key] = nxt[key] + val if key in nxt else val

        for (kk, r), h in cur.items():
            if kk > 0:
                add((kk - 1, r), _c_poly(params, kk) * h)
            add((kk, r + 1), h.shift(1) * (-1) ** kk)
        cur = {key: v for key, v in nxt.items() if v}
    return cur


# generators ---------------------------------------------------------------

def u_one(params):
    return UElement.one(params)


def u_a(params):
    return UElement(params, {(0, 1): 1})


def u_adag(params):
    return UElement(params, {(1, 0): 1})


def u_ntilde(params):
    return UElement(params, {(0, 0): ExpPoly.t()})


def u_function(params, f: ExpPoly):
    """f(Ñ) as an element."""
    return UElement(params, {(0, 0): f})


def u_grading(params, power=1):
    """g^power = exp(i pi power Ñ)."""
    return u_function(params, ExpPoly.exp(1j * math.pi * power))


def u_multiply(u: UElement, v: UElement) -> UElement:
    return u * v


def basis_E(k, l, m, params) -> UElement:
    """Ordered monomial a†^k Ñ^l a^m."""
    if min(k, l, m) < 0:
        raise ValueError("indices must be nonnegative")
    return UElement(params, {(k, m): ExpPoly.monomial(l)})


# structure constants -------------------------------------------------------

@dataclass
class StructureTable:
    kind: str
    entries: dict

    def get(self, key, default=0j):
        return self.entries.get(key, default)


def E_coefficients(u: UElement, max_l: int) -> dict:
    """Coefficients of u on E_{k l m} for l <= max_l (Taylor in Ñ at 0)."""
    out = {}
    for (k, m), f in u.items():
        for l, c in enumerate(f.taylor_coefficients(max_l)):
            if c != 0:
                out[(k, l, m)] = c
    return out


def extract_f(params, klm, klm2, window: int) -> StructureTable:
    """Coefficients of E_pqr in E_klm * E_klm2 for output Ñ-powers q <= window."""
    prod = basis_E(*klm, params) * basis_E(*klm2, params)
    return StructureTable("f", E_coefficients(prod, window))


# coalgebra -----------------------------------------------------------------

def _phi_plus(params):
    return ExpPoly.exp(params.alpha * params.ln_q / 2)


def _phi_minus(params, sign):
    # exp(sign i pi Ñ) q^{-alpha Ñ/2}
    return ExpPoly.exp(sign * 1j * math.pi - params.alpha * params.ln_q / 2)


@lru_cache(maxsize=None)
def _delta_a(params):
    return (Tensor.outer(u_a(params), u_function(params, _phi_plus(params)))
            + Tensor.outer(u_function(params, _phi_minus(params, 1)), u_a(params)))


@lru_cache(maxsize=None)
def _delta_adag(params):
    return (Tensor.outer(u_adag(params), u_function(params, _phi_plus(params)))
            + Tensor.outer(u_function(params, _phi_minus(params, -1)), u_adag(params)))


@lru_cache(maxsize=None)
def _delta_power(params, which, n):
    if n == 0:
        return Tensor.one(UElement, params, 2)
    base = {"a": _delta_a, "adag": _delta_adag}[which](params)
    return _delta_power(params, which, n - 1) * base


def _delta_function(params, f: ExpPoly) -> Tensor:
    """Δ f(Ñ) = f(Ñ⊗1 + 1⊗Ñ), expanded binomially."""
    data: dict = {}
    for (p, lam), c in f.items():
        for j in range(p + 1):
            key = ((0, 0, j, lam), (0, 0, p - j, lam))
            data[key] = data.get(key, 0) + c * math.comb(p, j)
    return Tensor(UElement, params, 2, data)


@lru_cache(maxsize=None)
def _delta_atom(params, atom):
    k, m, p, lam = atom
    return (_delta_power(params, "adag", k)
            * _delta_function(params, ExpPoly.monomial(p, lam))
            * _delta_power(params, "a", m))


def coproduct_U(x: UElement) -> Tensor:
    """Δ as an algebra map, Δ(a†^k f(Ñ) a^m) = Δ(a†)^k Δ(f(Ñ)) Δ(a)^m."""
    out = Tensor(UElement, x.params, 2)
    for atom, c in x.atoms():
        out = out + _delta_atom(x.params, atom) * c
    return out


def coproduct_U_tensor(t: Tensor, leg: int) -> Tensor:
    """Apply Δ to one leg of a tensor, raising its rank by one."""
    data: dict = {}
    for key, c in t.items():
        d = _delta_atom(t.params, key[leg])
        for dkey, dc in d.items():
            new = key[:leg] + dkey + key[leg + 1:]
            data[new] = data.get(new, 0) + c * dc
    return Tensor(UElement, t.params, t.rank + 1, data)


def counit_U(x: UElement) -> complex:
    """ε(a) = ε(a†) = 0 and ε(Ñ) = 0, so only the (0,0) part at Ñ = 0 survives."""
    return x[(0, 0)].eval(0.0)


@lru_cache(maxsize=None)
def _antipode_a(params):
    # S(a) = -(-1)^{-Ñ} q^{-alpha/2} a
    f = ExpPoly.exp(-1j * math.pi, -params.q ** (-params.alpha / 2))
    return UElement(params, {(0, 1): f})


@lru_cache(maxsize=None)
def _antipode_adag(params):
    # S(a†) = a† (-1)^{Ñ} q^{alpha/2}
    return UElement(params, {(1, 0): ExpPoly.exp(1j * math.pi, params.q ** (params.alpha / 2))})


def antipode_U(x: UElement) -> UElement:
    """Anti-morphism with S(Ñ) = -Ñ, so S(a†^k f(Ñ) a^m) = S(a)^m f(-Ñ) S(a†)^k."""
    params = x.params
    out = UElement.zero(params)
    for (k, m), f in x.items():
        out = out + _antipode_a(params) ** m * u_function(params, f.reflect()) * _antipode_adag(params) ** k
    return out


def multiply_legs(t: Tensor, left=None, right=None) -> UElement:
    """m ∘ (left ⊗ right) applied to a rank-2 tensor."""
    left = left or (lambda e: e)
    right = right or (lambda e: e)
    out = UElement.zero(t.params)
    for (a1, a2), c in t.items():
        e1 = UElement.from_atom(t.params, a1)
        e2 = UElement.from_atom(t.params, a2)
        out = out + left(e1) * right(e2) * c
    return out


def hopf_axioms_U(params, generators=None) -> dict:
    """Residuals of m(S⊗id)Δ - ε and m(id⊗S)Δ - ε on the generators."""
    generators = generators or {"a": u_a(params), "adag": u_adag(params), "Ntilde": u_ntilde(params)}
    report = {}
    for name, g in generators.items():
        d = coproduct_U(g)
        unit = UElement.one(params) * counit_U(g)
        left = multiply_legs(d, left=antipode_U) - unit
        right = multiply_legs(d, right=antipode_U) - unit
        report[name] = max(left.max_abs(), right.max_abs())
    return report


def extract_g(params, klm, window) -> StructureTable:
    """Coefficients of E_pqr ⊗ E_p'q'r' in Δ(E_klm), Ñ-powers up to ``window``."""
    d = coproduct_U(basis_E(*klm, params))
    entries: dict = {}
    for (a1, a2), c in d.items():
        t1 = _atom_taylor(a1, window)
        t2 = _atom_taylor(a2, window)
        for l1, c1 in t1:
            for l2, c2 in t2:
                key = ((a1[0], l1, a1[1]), (a2[0], l2, a2[1]))
                entries[key] = entries.get(key, 0) + c * c1 * c2
    return StructureTable("g", entries)


def _atom_taylor(atom, window):
    k, m, p, lam = atom
    out = []
    for L in range(p, window + 1):
        j = L - p
        if lam == 0:
            if j == 0:
                out.append((L, 1.0))
        else:
            out.append((L, lam ** j / math.factorial(j)))
    return out


# closed-form families ------------------------------------------------------------

def closed_g_six(params):
    """The six low-order coproduct constants, as {(upper pair): {klm: value}}."""
    h = params.alpha * params.ln_q / 2
    ipi = 1j * math.pi
    return {
        ((1, 0, 0), (0, 0, 1)): {(1, 0, 1): 1.0},
        ((0, 0, 1), (1, 0, 0)): {(1, 0, 1): 1.0},
        ((0, 1, 0), (1, 0, 0)): {(1, 1, 0): 1.0, (1, 0, 0): -(h + ipi)},
        ((1, 0, 0), (0, 1, 0)): {(1, 1, 0): 1.0, (1, 0, 0): h},
        ((0, 1, 0), (0, 0, 1)): {(0, 1, 1): 1.0, (0, 0, 1): -(h - ipi)},
        ((0, 0, 1), (0, 1, 0)): {(0, 1, 1): 1.0, (0, 0, 1): h},
    }


def closed_g_raise(params, p, klm):
    """Coefficient of E_100 ⊗ E_p00 in Δ(E_klm)."""
    k, l, m = klm
    if k == p + 1 and l == 0 and m == 0:
        return curly_number(k, params.q ** params.alpha)
    return 0.0


def closed_g_shift(params, upper, klm):
    """Coefficient of E_pr0 ⊗ E_010 in Δ(E_klm)."""
    p, r, _ = upper
    k, l, m = klm
    out = 0.0
    if k == p and m == 0:
        if l == r + 1:
            out += r + 1
        if l == r:
            out += params.alpha * p / 2 * params.ln_q
    return out


def closed_g_lower(params, upper, klm):
    """Coefficient of E_prs ⊗ E_001 in Δ(E_klm)."""
    p, r, s = upper
    k, l, m = klm
    if k != p or m != s + 1 or l > r:
        return 0.0
    j = r - l
    w = -params.alpha / 2 * params.ln_q + 1j * math.pi
    return curly_number(m, params.q ** params.alpha) * w ** j / math.factorial(j)


def closed_f(params, upper, klm, klm2):
    """Closed-form product constants f^{100}, f^{010}, f^{001}."""
    k, l, m = klm
    k2, l2, m2 = klm2
    d = lambda a, b: 1.0 if a == b else 0.0
    if upper == (1, 0, 0):
        return (d(klm, (1, 0, 0)) * d(klm2, (0, 0, 0))
                + sigma(m + 1, params) * d(k, 0) * d(k2, m + 1) * d(l2, 0) * d(m2, 0))
    if upper == (0, 1, 0):
        out = d(k, 0) * d(m, 0) * d(k2, 0) * d(m2, 0) * (d(l, 1) * d(l2, 0) + d(l, 0) * d(l2, 1))
        if m >= 1:
            out += (2 * params.alpha * params.log_ratio() * sigma(m, params)
                    * d(k, 0) * d(l, 0) * d(k2, m) * d(l2, 0) * d(m2, 0))
        return out
    if upper == (0, 0, 1):
        return (d(klm, (0, 0, 0)) * d(klm2, (0, 0, 1))
                + sigma(k2 + 1, params) * d(k, 0) * d(l, 0) * d(m, k2 + 1) * d(m2, 0))
    raise ValueError(f"no closed-form family for upper index {upper}")


# verification helpers ----------------------------------------------------------

def _triples(bound, total):
    return [(k, l, m) for k in range(bound + 1) for l in range(bound + 1) for m in range(bound + 1)
            if k + l + m <= total]


def coassociativity_U(params) -> dict:
    """(id⊗Δ)Δ - (Δ⊗id)Δ on a, a†, Ñ."""
    out = {}
    for name, g in (("a", u_a(params)), ("adag", u_adag(params)), ("Ntilde", u_ntilde(params))):
        d = coproduct_U(g)
        out[name] = (coproduct_U_tensor(d, 1) - coproduct_U_tensor(d, 0)).max_abs()
    return out


def relation_coproduct_residual(params) -> float:
    """Δ(a)Δ(a†) + Δ(a†)Δ(a) - Δ([αÑ]_q)."""
    da, dad = coproduct_U(u_a(params)), coproduct_U(u_adag(params))
    rhs = coproduct_U(u_function(params, ExpPoly.qbracket(params.alpha, 0, params)))
    return (da * dad + dad * da - rhs).max_abs()


def g_family_residuals(params, bound=3, total=4) -> dict:
    """Max deviation of computed coproduct constants from every closed-form family."""
    window = total
    tables = {klm: extract_g(params, klm, window) for klm in _triples(bound + 1, total)}
    res = {"six-entry": 0.0, "raise {k}": 0.0, "shift (r+1)": 0.0, "lower {m}": 0.0}
    for (u1, u2), vals in closed_g_six(params).items():
        for klm, tab in tables.items():
            res["six-entry"] = max(res["six-entry"], abs(tab.get((u1, u2)) - vals.get(klm, 0.0)))
    for klm, tab in tables.items():
        for p in range(bound + 1):
            res["raise {k}"] = max(res["raise {k}"], abs(
                tab.get(((1, 0, 0), (p, 0, 0))) - closed_g_raise(params, p, klm)))
            for r in range(bound + 1):
                res["shift (r+1)"] = max(res["shift (r+1)"], abs(
                    tab.get(((p, r, 0), (0, 1, 0))) - closed_g_shift(params, (p, r, 0), klm)))
                for s in range(bound + 1):
                    res["lower {m}"] = max(res["lower {m}"], abs(
                        tab.get(((p, r, s), (0, 0, 1))) - closed_g_lower(params, (p, r, s), klm)))
    return res


def f_family_residuals(params, bound=3, total=5) -> dict:
    """Max deviation of E_100, E_010, E_001 coefficients of basis products from the closed-form f."""
    triples = _triples(bound + 1, total)
    basis = {t: basis_E(*t, params) for t in triples}
    res = {"f100": 0.0, "f010": 0.0, "f001": 0.0}
    for t1 in triples:
        for t2 in triples:
            coeffs = E_coefficients(basis[t1] * basis[t2], 1)
            for key, upper in (("f100", (1, 0, 0)), ("f010", (0, 1, 0)), ("f001", (0, 0, 1))):
                res[key] = max(res[key], abs(coeffs.get(upper, 0.0) - closed_f(params, upper, t1, t2)))
    return res
