"""Exponential polynomials  sum_j c_j t^{p_j} exp(lam_j t)  in one variable.

This is the coefficient ring of both normal-ordering engines: functions of
N-tilde on the operator side and functions of z on the dual side.
"""
from __future__ import annotations

import cmath
import math
from numbers import Number

import numpy as np

POWER_CAP = 64
ZERO_TOL = 1e-300

_interned: dict = {}


class PowerCapError(OverflowError):
    pass


def intern_exponent(lam) -> complex:
    """Canonical representative for an exponent.

    Exponents within ~1e-12 of each other map to the first value seen, so
    that terms that should merge do merge and dict keys stay hashable.
    """
    lam = complex(lam)
    key = (round(lam.real, 11) + 0.0, round(lam.imag, 11) + 0.0)
    got = _interned.get(key)
    if got is None:
        _interned[key] = lam
        got = lam
    return got


class ExpPoly:
    """Immutable sum of terms ``c * t**p * exp(lam * t)``.

    Terms are stored as ``{(p, lam): c}`` with ``lam`` interned, which is
    already the canonical form: equal (p, lam) pairs are merged and zero
    coefficients dropped.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        acc: dict = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for key, c in items:
                if len(key) != 2:
                    raise ValueError("ExpPoly keys are (power, exponent)")
                p, lam = key
                if p < 0:
                    raise ValueError("negative power")
                if p > POWER_CAP:
                    raise PowerCapError(f"power {p} exceeds cap {POWER_CAP}")
                k = (int(p), intern_exponent(lam))
                acc[k] = acc.get(k, 0) + c
        self._terms = {k: complex(v) for k, v in acc.items() if abs(v) > ZERO_TOL}

    # constructors -------------------------------------------------------
    @classmethod
    def constant(cls, c):
        return cls({(0, 0j): c})

    @classmethod
    def monomial(cls, p=1, lam=0j, c=1.0):
        return cls({(p, lam): c})

    @classmethod
    def t(cls):
        return cls.monomial(1)

    @classmethod
    def exp(cls, lam, c=1.0):
        return cls.monomial(0, lam, c)

    @classmethod
    def poly(cls, coeffs):
        """sum_j coeffs[j] t^j."""
        return cls({(j, 0j): c for j, c in enumerate(coeffs)})

    @classmethod
    def qbracket(cls, a, b, params):
        """[a t + b]_q as a function of t."""
        if params.is_classical:
            return cls({(1, 0j): a, (0, 0j): b})
        h = params.ln_q
        d = 2 * math.sinh(h)
        return cls({(0, a * h): cmath.exp(b * h) / d, (0, -a * h): -cmath.exp(-b * h) / d})

    # basic protocol -----------------------------------------------------
    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self, tol=0.0):
        return all(abs(c) <= tol for c in self._terms.values())

    def __repr__(self):
        if not self._terms:
            return "ExpPoly(0)"
        parts = []
        for (p, lam), c in sorted(self._terms.items(), key=lambda kv: (kv[0][0], kv[0][1].real, kv[0][1].imag)):
            s = f"({c:.6g})"
            if p:
                s += f"*t^{p}"
            if lam != 0:
                s += f"*exp({lam:.6g} t)"
            parts.append(s)
        return "ExpPoly(" + " + ".join(parts) + ")"

    def max_power(self):
        return max((p for p, _ in self._terms), default=0)

    def is_polynomial(self):
        return all(lam == 0 for _, lam in self._terms)

    def max_abs_coeff(self):
        return max((abs(c) for c in self._terms.values()), default=0.0)

    # ring operations ----------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Number):
            other = ExpPoly.constant(other)
        if not isinstance(other, ExpPoly):
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return ExpPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Number):
            return ExpPoly({k: c * other for k, c in self._terms.items()})
        if not isinstance(other, ExpPoly):
            return NotImplemented
        out: dict = {}
        for (p1, l1), c1 in self._terms.items():
            for (p2, l2), c2 in other._terms.items():
                p = p1 + p2
                if p > POWER_CAP:
                    raise PowerCapError(f"power {p} exceeds cap {POWER_CAP}")
                k = (p, intern_exponent(l1 + l2))
                out[k] = out.get(k, 0) + c1 * c2
        return ExpPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = ExpPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Number):
            other = ExpPoly.constant(other)
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return (self - other).is_zero(1e-12)

    __hash__ = None

    def allclose(self, other, tol=1e-12):
        return (self - other).is_zero(tol)

    # analytic operations ------------------------------------------------
    def shift(self, s):
        """p(t) -> p(t + s), re-expanded exactly."""
        out: dict = {}
        for (p, lam), c in self._terms.items():
            base = c * cmath.exp(lam * s)
            for j in range(p + 1):
                k = (j, lam)
                out[k] = out.get(k, 0) + base * math.comb(p, j) * s ** (p - j)
        return ExpPoly(out)

    def reflect(self):
        """p(t) -> p(-t)."""
        return ExpPoly({(p, -lam): c * (-1) ** p for (p, lam), c in self._terms.items()})

    def derivative(self):
        out: dict = {}
        for (p, lam), c in self._terms.items():
            if p:
                out[(p - 1, lam)] = out.get((p - 1, lam), 0) + c * p
            if lam != 0:
                out[(p, lam)] = out.get((p, lam), 0) + c * lam
        return ExpPoly(out)

    def integrate(self, tol=1e-14):
        """Antiderivative vanishing at t = 0."""
        out: dict = {}

        def add(k, v):
            out[k] = out.get(k, 0) + v

        for (p, lam), c in self._terms.items():
            if abs(lam) < tol:
                add((p + 1, 0j), c / (p + 1))
                continue
            # e^{lam t} sum_j (-1)^j p!/(p-j)! t^{p-j} / lam^{j+1}
            for j in range(p + 1):
                add((p - j, lam), c * (-1) ** j * math.perm(p, j) / lam ** (j + 1))
            add((0, 0j), -c * (-1) ** p * math.factorial(p) / lam ** (p + 1))
        return ExpPoly(out)

    def taylor_coefficients(self, up_to: int):
        """Coefficients of t^0 .. t^up_to of the entire function."""
        if up_to < 0:
            raise ValueError("up_to must be >= 0")
        out = [0j] * (up_to + 1)
        for (p, lam), c in self._terms.items():
            for L in range(p, up_to + 1):
                j = L - p
                if lam == 0:
                    if j == 0:
                        out[L] += c
                else:
                    out[L] += c * lam ** j / math.factorial(j)
        return out

    def eval(self, t):
        """Evaluate at a scalar or numpy array."""
        if isinstance(t, np.ndarray):
            t = t.astype(complex)
            out = np.zeros_like(t)
            for (p, lam), c in self._terms.items():
                out += c * t ** p * np.exp(lam * t)
            return out
        return sum((c * t ** p * cmath.exp(lam * t) for (p, lam), c in self._terms.items()), 0j)

    __call__ = eval
