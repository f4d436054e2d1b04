"""Deformed numbers, factorials, exponentials and Gamma-function pole data.

Everything here is a pure function of its arguments.  The deformation
triple ``(q, alpha, beta)`` travels in a :class:`DeformationParams`.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from functools import lru_cache


class SeriesDivergence(ArithmeticError):
    """A series did not meet its tail tolerance within the term budget."""

    def __init__(self, message, partial_sum=None, last_term=None):
        super().__init__(message)
        self.partial_sum = partial_sum
        self.last_term = last_term


@dataclass(frozen=True)
class DeformationParams:
    q: float
    alpha: float
    beta: float
    classical_guard: float = 1e-6

    def __post_init__(self):
        if not self.q > 0:
            raise ValueError(f"q must be positive, got {self.q}")
        if self.alpha == 0:
            raise ValueError("alpha must be nonzero")
        if not 0 < self.classical_guard < 1e-4:
            raise ValueError("classical_guard must lie in (0, 1e-4)")

    @property
    def ln_q(self) -> float:
        return math.log(self.q)

    @property
    def is_classical(self) -> bool:
        return abs(self.q - 1.0) <= self.classical_guard

    @property
    def ratio(self) -> float:
        """beta / alpha, the shift between N and N-tilde."""
        return self.beta / self.alpha

    @property
    def varpi(self) -> float:
        return math.pi / (self.q ** (self.alpha / 2) + self.q ** (-self.alpha / 2))

    def double_bracket(self, x) -> float:
        """(q^x + q^-x) / (q^{alpha/2} + q^{-alpha/2})."""
        return (self.q ** x + self.q ** (-x)) / (
            self.q ** (self.alpha / 2) + self.q ** (-self.alpha / 2))

    def log_ratio(self) -> float:
        """ln q / (q - 1/q), finite through q = 1."""
        h = self.ln_q
        if abs(h) < 1e-300 or self.is_classical:
            return 0.5
        return h / (2.0 * math.sinh(h))

    def reflected(self) -> "DeformationParams":
        """Parameters (-alpha, beta - alpha)."""
        return replace(self, alpha=-self.alpha, beta=self.beta - self.alpha)

    def require_deformed(self):
        if self.is_classical:
            raise ValueError(
                f"q={self.q} lies inside the classical guard "
                f"(|q-1| <= {self.classical_guard}); this quantity diverges at q=1")


@dataclass(frozen=True)
class ScalarSeriesBudget:
    max_terms: int = 200
    tail_tolerance: float = 1e-14

    def __post_init__(self):
        if self.max_terms < 1 or not self.tail_tolerance > 0:
            raise ValueError("budget needs max_terms >= 1 and tail_tolerance > 0")


DEFAULT_BUDGET = ScalarSeriesBudget()


def q_number(x, params: DeformationParams):
    """[x]_q = (q^x - q^-x) / (q - q^-1); returns x inside the classical guard."""
    if params.is_classical:
        return x
    h = params.ln_q
    if isinstance(x, complex):
        return cmath.sinh(x * h) / math.sinh(h)
    return math.sinh(x * h) / math.sinh(h)


def curly_number(n: int, base: float) -> float:
    if base <= 0:
        raise ValueError("base must be positive")
    h = math.log(base)
    if n % 2 == 0:
        return math.sinh(n * h / 2) / math.cosh(h / 2)
    return math.cosh(n * h / 2) / math.cosh(h / 2)


def curly_factorial(n: int, base: float) -> float:
    out = 1.0
    for k in range(1, n + 1):
        out *= curly_number(k, base)
    return out


def box_number(n: int, params: DeformationParams) -> float:
    """(n)_{alpha,beta}; negative n uses (-n)_{alpha,beta} = (n)_{-alpha,beta-alpha}."""
    if n < 0:
        return box_number(-n, params.reflected())
    a, b = params.alpha, params.beta
    num = q_number(n * a + b - a / 2, params) + (-1) ** (n + 1) * q_number(b - a / 2, params)
    return num / (params.q ** (a / 2) + params.q ** (-a / 2))


def box_factorial(n: int, params: DeformationParams) -> float:
    if n < 0:
        raise ValueError("box_factorial needs n >= 0")
    out = 1.0
    for k in range(1, n + 1):
        out *= box_number(k, params)
    return out


def sigma(m: int, params: DeformationParams) -> float:
    if m < 1:
        raise ValueError("sigma is defined for m >= 1")
    out = 1.0
    for k in range(1, m):
        out *= sum((-1) ** l * q_number((k - l) * params.alpha, params) for l in range(k))
    return out


def floor_bracket(n: int, base: float) -> float:
    return (1.0 - (-1) ** n * base ** n) / (1.0 + base)


def floor_factorial(n: int, base: float) -> float:
    out = 1.0
    for k in range(1, n + 1):
        out *= floor_bracket(k, base)
    return out


@lru_cache(maxsize=4096)
def floor_binomial(n: int, k: int, base: float) -> float:
    """Binomial built from floor brackets.

    These are Gaussian binomials in the variable ``-base``, so the Pascal rule
    is used instead of the factorial ratio; this stays finite at ``base = 1``
    where individual factorials vanish.
    """
    if k < 0 or k > n:
        raise ValueError(f"floor_binomial needs 0 <= k <= n, got n={n}, k={k}")
    if k == 0 or k == n:
        return 1.0
    Q = -base
    return floor_binomial(n - 1, k - 1, base) + Q ** k * floor_binomial(n - 1, k, base)


def q_shifted_factorial(a, base: float, n: int):
    out = 1.0 + 0j if isinstance(a, complex) else 1.0
    for l in range(1, n + 1):
        out *= 1 - a * base ** (l - 1)
    return out


def _sum_series(x, denominators, budget: ScalarSeriesBudget, what: str):
    total = 0j
    term = 1.0 + 0j
    small = 0
    for n in range(budget.max_terms):
        if n > 0:
            d = denominators(n)
            if d == 0:
                raise ZeroDivisionError(f"{what}: vanishing factor at n={n}")
            term = term * x / d
        total += term
        if abs(term) < budget.tail_tolerance:
            small += 1
            if small == 2:
                return total
        else:
            small = 0
    raise SeriesDivergence(
        f"{what}({x}) did not converge in {budget.max_terms} terms; "
        f"partial sum {total}, last term magnitude {abs(term):.3e}",
        partial_sum=total, last_term=abs(term))


def _real_if(x, value):
    return value.real if not isinstance(x, complex) else value


def deformed_exp(x, params: DeformationParams, budget: ScalarSeriesBudget = DEFAULT_BUDGET):
    """exp_{alpha,beta}(x) = sum_n x^n / (n)_{alpha,beta}!."""
    value = _sum_series(x, lambda n: box_number(n, params), budget, "exp_{alpha,beta}")
    return _real_if(x, value)


def cal_exp(x, base: float, budget: ScalarSeriesBudget = DEFAULT_BUDGET):
    """Series sum_n x^n / {n}_base!."""
    value = _sum_series(x, lambda n: curly_number(n, base), budget, "Exp_base")
    return _real_if(x, value)


def ck_coefficients(K: int, params: DeformationParams) -> list:
    """Coefficients c_1..c_K with exp_{alpha,beta}(x) = exp(sum_k c_k x^k)."""
    if K < 1:
        raise ValueError("K must be >= 1")
    inv_fact = [1.0 / box_factorial(k, params) for k in range(K + 1)]
    c = [0.0] * (K + 1)
    for k in range(1, K + 1):
        acc = sum(l * c[l] * inv_fact[k - l] for l in range(1, k))
        c[k] = inv_fact[k] - acc / k
    return c[1:]


def box_number_analytic(z, sign: int, params: DeformationParams):
    """Continuation of (n)_{alpha,beta} with (-1)^n -> exp(sign * i pi z)."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    a, b = params.alpha, params.beta
    z = complex(z)
    num = q_number(z * a + b - a / 2, params) - cmath.exp(sign * 1j * math.pi * z) * q_number(
        b - a / 2, params)
    return num / (params.q ** (a / 2) + params.q ** (-a / 2))


def _pole_parts(params):
    a, b = params.alpha, params.beta
    re = a * params.double_bracket(b - a / 2) * params.log_ratio()
    im = params.varpi * q_number(b - a / 2, params)
    return re, im


def pole_weight(params: DeformationParams) -> float:
    """Residue weight of the symmetrised deformed Gamma function at its poles."""
    re, im = _pole_parts(params)
    return re / (re * re + im * im)


def epsilon_limit_check(eps: float, params: DeformationParams):
    """Exact ((eps)^(+), (eps)^(-)) for comparison with the first-order form."""
    if eps == 0:
        raise ValueError("eps must be nonzero")
    return box_number_analytic(eps, 1, params), box_number_analytic(eps, -1, params)


def epsilon_limit_first_order(eps: float, params: DeformationParams):
    re, im = _pole_parts(params)
    return eps * (re - 1j * im), eps * (re + 1j * im)


def gamma_residue(n: int, params: DeformationParams) -> float:
    """Residue of the symmetrised Gamma at z = -n: P / (n)_{-alpha,beta-alpha}!."""
    if n < 0:
        raise ValueError("n must be >= 0")
    denom = 1.0
    for i in range(1, n + 1):
        denom *= box_number(-i, params)
    return pole_weight(params) / denom


def gamma_residue_from_iteration(n: int, eps: float, params: DeformationParams) -> float:
    """eps * Gamma^sym(-n + eps) from the iterated functional relation at finite eps."""
    out = 0.0
    for sign in (1, -1):
        denom = 1.0 + 0j
        for j in range(n + 1):
            denom *= box_number_analytic(-n + eps + j, sign, params)
        out += (eps / denom).real / 2
    return out


def closed_ck(params: DeformationParams) -> list:
    """Closed forms of c_1, c_2, c_3 written with q-numbers and double brackets."""
    a, b = params.alpha, params.beta
    qa, qb, qab = (q_number(v, params) for v in (a, b, a + b))
    bb = params.double_bracket(b + a / 2)
    c1 = 1.0 / qb
    c2 = 1.0 / (qa * qb * bb) - 1.0 / (2 * qb ** 2)
    c3 = (1.0 / (qa * qb * qab * params.double_bracket(3 * a / 2) * bb)
          - 1.0 / (qa * qb ** 2 * bb) + 1.0 / (3 * qb ** 3))
    return [c1, c2, c3]
