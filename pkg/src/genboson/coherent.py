"""Single-node coherent states, the radial measure and the resolution of unity."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
import numpy as np
from scipy import integrate

from .fockrep import FockSpace, rep_a
from .qspecial import (DEFAULT_BUDGET, DeformationParams, box_factorial, box_number,
                       deformed_exp, pole_weight)


class MeasureDivergence(ArithmeticError):
    """The moment integrand does not decay before the radial cap."""

    def __init__(self, message, radius=None, value=None, peak=None):
        super().__init__(message)
        self.radius = radius
        self.value = value
        self.peak = peak


# states -----------------------------------------------------------------------

@dataclass
class CoherentState:
    zeta: complex
    D: int
    coefficients: np.ndarray
    normalized: bool
    tail_mass: float

    @property
    def tail_bound(self) -> float:
        """‖(a - ζ)|ζ⟩‖ of the truncated state: |ζ| |c_{D-1}|."""
        return abs(self.zeta) * abs(self.coefficients[-1])


def _unnormalized(zeta, D, params):
    FockSpace(D, params)
    c = np.empty(D, dtype=complex)
    c[0] = 1.0
    for n in range(1, D):
        c[n] = c[n - 1] * zeta / math.sqrt(box_number(n, params))
    return c


def build_coherent(zeta, D, params: DeformationParams, budget=DEFAULT_BUDGET) -> CoherentState:
    """Truncated |ζ⟩ = exp(|ζ|²)^{-1/2} Σ ζ^n / sqrt((n)!) |n⟩."""
    zeta = complex(zeta)
    c = _unnormalized(zeta, D, params)
    norm2 = deformed_exp(abs(zeta) ** 2, params, budget)
    c = c / math.sqrt(norm2)
    tail = max(0.0, 1.0 - float(np.vdot(c, c).real))
    return CoherentState(zeta, D, c, True, tail)


def eigen_residual(state: CoherentState, params) -> float:
    a = rep_a(state.D, params).matrix
    return float(np.linalg.norm(a @ state.coefficients - state.zeta * state.coefficients))


def overlap(z1, z2, D, params) -> complex:
    """⟨z1|z2⟩ from truncated states."""
    s1 = build_coherent(z1, D, params)
    s2 = build_coherent(z2, D, params)
    return complex(np.vdot(s1.coefficients, s2.coefficients))


def overlap_closed(z1, z2, params) -> complex:
    """exp(conj(z1) z2) / sqrt(exp(|z1|²) exp(|z2|²)) with the deformed exponential."""
    num = deformed_exp(complex(np.conj(z1) * z2), params)
    return num / math.sqrt(deformed_exp(abs(z1) ** 2, params) * deformed_exp(abs(z2) ** 2, params))


# measure ------------------------------------------------------------------------

@dataclass
class RadialMeasure:
    params: DeformationParams
    prefactor: float = field(init=False)

    def __post_init__(self):
        self.prefactor = 2 * pole_weight(self.params)

    def F(self, rho):
        return measure_F(rho, self.params)

    def density(self, rho):
        return measure_density(rho, self.params)


@lru_cache(maxsize=None)
def _mp_inverse_factorials(params, n_terms, dps):
    """1/(n)! for the given parameters, in mpmath at ``dps`` digits."""
    with mpmath.workdps(dps):
        q = mpmath.mpf(params.q)
        a, b = mpmath.mpf(params.alpha), mpmath.mpf(params.beta)

        def qn(x):
            if params.is_classical:
                return x
            return (q ** x - q ** (-x)) / (q - 1 / q)

        den = q ** (a / 2) + q ** (-a / 2)
        out = [mpmath.mpf(1)]
        for n in range(1, n_terms):
            box = (qn(n * a + b - a / 2) + (-1) ** (n + 1) * qn(b - a / 2)) / den
            out.append(out[-1] / box)
        return tuple(out)


@lru_cache(maxsize=None)
def _log_inverse_factorials(params, n_terms):
    out = [0.0]
    for n in range(1, n_terms):
        out.append(out[-1] - math.log(abs(box_number(n, params))))
    return np.array(out)


def deformed_exp_accurate(x: float, params: DeformationParams, max_terms=None) -> float:
    """exp_{alpha,beta}(x) for real x, summed in extended precision.

    The working precision is set from the largest term, so alternating
    series (the reflected exponential at large argument) keep full double
    accuracy in the result.
    """
    return _deformed_exp_accurate(float(x), params, max_terms)


@lru_cache(maxsize=65536)
def _deformed_exp_accurate(x, params, max_terms):
    if max_terms is None:
        max_terms = 50 * (int(3 * abs(x)) // 50 + 5)
    if x == 0:
        return 1.0
    logs = _log_inverse_factorials(params, max_terms) + np.arange(max_terms) * math.log(abs(x))
    digits = max(0.0, float(logs.max()) / math.log(10))
    dps = int(math.ceil((30 + digits) / 10.0) * 10)
    inv = _mp_inverse_factorials(params, max_terms, dps)
    with mpmath.workdps(dps):
        xm = mpmath.mpf(x)
        total = mpmath.mpf(0)
        term_x = mpmath.mpf(1)
        small = 0
        for n in range(max_terms):
            t = term_x * inv[n]
            total += t
            if abs(t) <= mpmath.mpf(10) ** (-20) * abs(total):
                small += 1
                if small == 2:
                    return float(total)
            else:
                small = 0
            term_x *= xm
    raise ArithmeticError(f"exp series at x={x} did not converge in {max_terms} terms")


def measure_F(rho, params: DeformationParams) -> float:
    """F(ρ) = 2 P exp_{-alpha,beta-alpha}(ρ²)."""
    return 2 * pole_weight(params) * deformed_exp_accurate(rho * rho, params.reflected())


def measure_density(rho, params: DeformationParams) -> float:
    """Density of dμ with respect to d²ζ = ρ dρ dθ / (2π)."""
    return measure_F(rho, params) * deformed_exp_accurate(rho * rho, params)


@dataclass(frozen=True)
class QuadratureConfig:
    epsabs: float = 1e-9
    epsrel: float = 1e-12
    limit: int = 400
    r_start: float = 2.0
    r_max: float = 12.0
    decay: float = 1e-16


def _radial_cap(f, cfg: QuadratureConfig):
    """Smallest grid radius past the peak where |f| < decay * peak."""
    grid = np.linspace(0.0, cfg.r_max, 241)[1:]
    try:
        vals = np.array([f(r) for r in grid])
    except OverflowError as exc:
        raise MeasureDivergence(f"moment integrand overflows before rho={cfg.r_max}: {exc}",
                                radius=cfg.r_max) from exc
    peak = float(np.abs(vals).max())
    ipk = int(np.abs(vals).argmax())
    for r, v in zip(grid[ipk:], vals[ipk:]):
        if r >= cfg.r_start and abs(v) < cfg.decay * peak:
            return float(r), peak
    raise MeasureDivergence(
        f"moment integrand has not decayed at rho={cfg.r_max}: value {vals[-1]:.3e}, peak {peak:.3e}",
        radius=cfg.r_max, value=float(vals[-1]), peak=peak)


def moment_integral(n: int, params: DeformationParams, cfg: QuadratureConfig = QuadratureConfig()):
    """I_n = ∫_0^∞ ρ^{2n+1} F(ρ) dρ by adaptive quadrature on [0, R]."""
    if n < 0:
        raise ValueError("n must be >= 0")
    f = lambda r: r ** (2 * n + 1) * measure_F(r, params)
    R, peak = _radial_cap(f, cfg)
    value, err = integrate.quad(f, 0.0, R, epsabs=cfg.epsabs, epsrel=cfg.epsrel, limit=cfg.limit)
    return value, err


@dataclass
class MomentRow:
    n: int
    moment: float
    factorial: float

    @property
    def ratio(self) -> float:
        return self.moment / self.factorial


def moment_table(params, n_max=8, cfg=QuadratureConfig()):
    return [MomentRow(n, moment_integral(n, params, cfg)[0], box_factorial(n, params))
            for n in range(n_max + 1)]


def resolution_check(params, D=8, cfg=QuadratureConfig()) -> float:
    """‖∫dμ |ζ⟩⟨ζ| - 1‖ on the first D - 2 Fock states.

    Angular integration is done analytically, leaving a diagonal matrix
    with entries I_n / (n)!; off-diagonal entries vanish exactly.
    """
    FockSpace(D, params)
    diag = np.array([moment_integral(n, params, cfg)[0] / box_factorial(n, params)
                     for n in range(D - 2)])
    M = np.diag(diag)
    return float(np.abs(M - np.eye(D - 2)).max())


def positivity_scan(params, xs=None):
    """exp_{alpha,beta}(x) on a grid; returns (min value, argmin, values)."""
    xs = np.linspace(-10, 10, 201) if xs is None else np.asarray(xs)
    vals = np.array([deformed_exp_accurate(x, params) for x in xs])
    i = int(vals.argmin())
    return float(vals[i]), float(xs[i]), vals
