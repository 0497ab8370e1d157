"""Weak-damping analytic solution of the population dynamics.

The kernel expanded to first order in the damping is resummed into
harmonics of the shifted oscillator frequency; the argument of that
Bessel resummation is small in the validated regime, so the series is
truncated after the first harmonic.  The truncated kernel has an
elementary Laplace transform, which gives the oscillation frequencies
from the undamped pole equation and the decay rates from a complex
Newton search on the damped one.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import i0

from .correlation import WdaCoefficients, wda_coefficients
from .errors import (
    ComplexFrequencyError,
    NoConvergenceError,
    RegimeWarning,
    RootSwapError,
    TruncationInvalidError,
)
from .params import DerivedScales, SystemParams, derived_scales

__all__ = [
    "EffectiveTunneling",
    "WdaSpectrum",
    "effective_tunneling",
    "pole_frequencies",
    "kernel_laplace",
    "decay_rates",
    "build_wda_spectrum",
    "wda_population",
    "bloch_siegert_shift",
    "resonance_analysis",
    "truncation_ratio_n2",
]

_NEWTON_MAX_ITER = 100
_NEWTON_TOL = 1e-12


@dataclass(frozen=True)
class EffectiveTunneling:
    """Dressed tunneling amplitudes of the harmonic-resummed kernel."""

    u0: complex
    delta0c: float
    delta1c: float
    delta1s: float


@dataclass(frozen=True)
class WdaSpectrum:
    """Everything needed to evaluate the analytic population trace."""

    u0: complex
    delta0c: float
    delta1c: float
    delta1s: float
    omega1: float
    gamma: float
    lambda2_plus: float
    lambda2_minus: float
    omega_plus: float
    omega_minus: float
    kappa_plus: float
    kappa_minus: float
    weight_plus: float
    weight_minus: float


def _sinh_half(x: float) -> float:
    return math.inf if x > 1400.0 else math.sinh(0.5 * x)


def effective_tunneling(
    coeffs: WdaCoefficients,
    scales: DerivedScales,
    delta: float,
    beta: float,
    strict: bool = False,
) -> EffectiveTunneling:
    """u0 and the dressed amplitudes Delta_{0,c}, Delta_{1,c}, Delta_{1,s}.

    |u0| = W/sinh(beta*Omega1/2) is used as the authoritative branch of
    sqrt(Y**2 - W**2); a raw negative Y**2 - W**2 only triggers a warning.
    Outside the truncation regime |u0| < 1 a warning is emitted (an error
    under strict=True).
    """
    big = beta * scales.Omega1
    u0_abs = coeffs.W / _sinh_half(big)
    raw = coeffs.Y**2 - coeffs.W**2
    if raw < 0.0:
        warnings.warn(
            "Y^2 - W^2 < 0; using the simplified resummation argument",
            RegimeWarning,
            stacklevel=2,
        )
    if u0_abs >= 1.0:
        if strict:
            raise TruncationInvalidError(f"|u0| = {u0_abs:.3g} >= 1")
        warnings.warn(
            f"kernel truncation unreliable: |u0| = {u0_abs:.3g} >= 1",
            RegimeWarning,
            stacklevel=2,
        )
    exp_y = math.exp(coeffs.Y)
    delta0c_sq = delta**2 * exp_y * i0(u0_abs)
    # first harmonic linearized in u0; |u0|*cosh(beta*Omega1/2) equals
    # W*coth(beta*Omega1/2) = -Y, which stays finite at any temperature
    delta1c_sq = delta**2 * exp_y * (-coeffs.Y)
    delta1s_sq = delta**2 * exp_y * coeffs.W
    return EffectiveTunneling(
        u0=1j * u0_abs,
        delta0c=math.sqrt(delta0c_sq),
        delta1c=math.sqrt(delta1c_sq),
        delta1s=math.sqrt(delta1s_sq),
    )


def pole_frequencies(delta0c: float, delta1c: float, omega1: float) -> tuple[float, float]:
    """Oscillation frequencies (Omega_plus, Omega_minus) of the undamped poles.

    Roots of lambda**4 + (d0^2 + d1^2 + Om1^2)*lambda**2 + d0^2*Om1^2 = 0,
    written with the radicand grouped as
    ((d0^2 - Om1^2)/2)^2 + (d1^2/2)*(d0^2 + d1^2/2 + Om1^2) so it is
    manifestly nonnegative.  Omega_minus > Omega_plus.
    """
    d0_sq = delta0c**2
    d1_sq = delta1c**2
    half_sum = 0.5 * (d0_sq + d1_sq + omega1**2)
    radicand = (0.5 * (d0_sq - omega1**2)) ** 2 + 0.5 * d1_sq * (d0_sq + 0.5 * d1_sq + omega1**2)
    root = math.sqrt(radicand)
    lam2_plus = -half_sum + root
    lam2_minus = -half_sum - root
    if lam2_plus >= 0.0 or lam2_minus >= 0.0:
        raise ComplexFrequencyError(
            f"pole equation gives non-oscillatory roots: lambda^2 = {lam2_plus:.3g}, {lam2_minus:.3g}"
        )
    return math.sqrt(-lam2_plus), math.sqrt(-lam2_minus)


def _kernel_terms(tun: EffectiveTunneling, coeffs: WdaCoefficients, omega1: float):
    """Elementary pieces (coef, tau_power, kind, frequency) of the kernel.

    The kernel is d0c^2*(1 - S1) + d1c^2*cos(w1 t)*(1 - S1)
    - d1s^2*sin(w1 t)*R1 with products reduced to single harmonics.
    """
    d0 = tun.delta0c**2
    d1c = tun.delta1c**2
    d1s = tun.delta1s**2
    a, b, c, v = coeffs.A, coeffs.B, coeffs.C, coeffs.V
    w1 = omega1
    w2 = 2.0 * omega1
    return [
        (d0, 0, "cos", 0.0),
        (-d0 * a, 1, "cos", w1),
        (-d0 * b, 1, "cos", 0.0),
        (-d0 * c, 0, "sin", w1),
        (d1c, 0, "cos", w1),
        (-0.5 * d1c * a, 1, "cos", 0.0),
        (-0.5 * d1c * a, 1, "cos", w2),
        (-d1c * b, 1, "cos", w1),
        (-0.5 * d1c * c, 0, "sin", w2),
        (-d1s * v, 0, "sin", w1),
        (0.5 * d1s * v, 0, "sin", w2),
        (0.25 * d1s * v * w1, 1, "cos", 0.0),
        (-0.25 * d1s * v * w1, 1, "cos", w2),
    ]


def _elementary_transform(tau_power: int, kind: str, freq: float, lam: complex) -> complex:
    den = lam * lam + freq * freq
    if kind == "cos":
        if tau_power == 0:
            return lam / den
        if tau_power == 1:
            return (lam * lam - freq * freq) / den**2
        return 2.0 * lam * (lam * lam - 3.0 * freq * freq) / den**3
    if tau_power == 0:
        return freq / den
    if tau_power == 1:
        return 2.0 * freq * lam / den**2
    return 2.0 * freq * (3.0 * lam * lam - freq * freq) / den**3


def kernel_laplace(lam: complex, tun: EffectiveTunneling, coeffs: WdaCoefficients, omega1: float):
    """Closed-form Laplace transform of the truncated kernel and its derivative.

    The derivative uses d/d.lam L[f] = -L[tau*f], which only bumps the
    tau power of each elementary piece.
    """
    value = 0.0 + 0.0j
    deriv = 0.0 + 0.0j
    for coef, tau_power, kind, freq in _kernel_terms(tun, coeffs, omega1):
        value += coef * _elementary_transform(tau_power, kind, freq, lam)
        deriv -= coef * _elementary_transform(tau_power + 1, kind, freq, lam)
    return value, deriv


def decay_rates(
    tun: EffectiveTunneling,
    coeffs: WdaCoefficients,
    omega1: float,
    omega_plus: float,
    omega_minus: float,
    gamma: float,
    delta: float,
    Omega: float,
) -> tuple[float, float, complex, complex]:
    """Dimensionless decay coefficients kappa_pm (rates are gamma*kappa_pm).

    Complex Newton iteration on lambda + K(lambda) = 0 seeded at the
    undamped poles i*Omega_pm.  Also returns the converged roots so the
    imaginary parts can be checked against Omega_pm.
    """
    if gamma == 0.0:
        return 0.0, 0.0, 1j * omega_plus, 1j * omega_minus

    tol = _NEWTON_TOL * delta**2 / Omega
    roots = []
    seeds = (1j * omega_plus, 1j * omega_minus)
    for which, seed in enumerate(seeds):
        lam = seed
        for _ in range(_NEWTON_MAX_ITER):
            value, deriv = kernel_laplace(lam, tun, coeffs, omega1)
            residual = lam + value
            if abs(residual) < tol:
                break
            lam = lam - residual / (1.0 + deriv)
        else:
            raise NoConvergenceError(
                f"pole search from seed {seed:.6g} stalled at |residual| = {abs(residual):.3e}"
            )
        own = abs(lam - seeds[which])
        other = abs(lam - seeds[1 - which])
        if other < own:
            raise RootSwapError(f"root {lam:.6g} is nearer the other seed")
        roots.append(lam)

    kappa_plus = -roots[0].real / gamma
    kappa_minus = -roots[1].real / gamma
    return kappa_plus, kappa_minus, roots[0], roots[1]


def build_wda_spectrum(
    p: SystemParams, scales: DerivedScales | None = None, strict: bool = False
) -> WdaSpectrum:
    """Wire coefficients -> tunneling -> poles -> rates into one object."""
    if scales is None:
        scales = derived_scales(p)
    coeffs = wda_coefficients(p, scales)
    tun = effective_tunneling(coeffs, scales, p.Delta, p.beta, strict=strict)
    omega_plus, omega_minus = pole_frequencies(tun.delta0c, tun.delta1c, scales.Omega1)
    kappa_plus, kappa_minus, _, _ = decay_rates(
        tun, coeffs, scales.Omega1, omega_plus, omega_minus, p.gamma, p.Delta, p.Omega
    )
    lam2_plus = -omega_plus**2
    lam2_minus = -omega_minus**2
    if lam2_plus == lam2_minus:
        # poles coincide only for a decoupled qubit exactly at the shifted
        # frequency; the second pole then carries no amplitude
        weight_plus = 1.0
    else:
        weight_plus = (lam2_plus + scales.Omega1**2) / (lam2_plus - lam2_minus)
    weight_minus = 1.0 - weight_plus  # exact complement by construction
    return WdaSpectrum(
        u0=tun.u0,
        delta0c=tun.delta0c,
        delta1c=tun.delta1c,
        delta1s=tun.delta1s,
        omega1=scales.Omega1,
        gamma=p.gamma,
        lambda2_plus=lam2_plus,
        lambda2_minus=lam2_minus,
        omega_plus=omega_plus,
        omega_minus=omega_minus,
        kappa_plus=kappa_plus,
        kappa_minus=kappa_minus,
        weight_plus=weight_plus,
        weight_minus=weight_minus,
    )


def wda_population(t, spectrum: WdaSpectrum):
    """Analytic population trace P(t); P(0) = 1 exactly (weights sum to 1)."""
    time = np.asarray(t, dtype=float)
    result = np.zeros_like(time)
    for weight, omega, kappa in (
        (spectrum.weight_plus, spectrum.omega_plus, spectrum.kappa_plus),
        (spectrum.weight_minus, spectrum.omega_minus, spectrum.kappa_minus),
    ):
        rate = spectrum.gamma * kappa
        result += weight * np.exp(-rate * time) * (
            np.cos(omega * time) - (rate / omega) * np.sin(omega * time)
        )
    return result


def bloch_siegert_shift(p: SystemParams) -> float:
    """Lowest-order splitting 2*g*(1 - 3*alpha/(2*Omega)) of the two peaks."""
    return 2.0 * p.g * (1.0 - 1.5 * p.alpha / p.Omega)


def resonance_analysis(
    p: SystemParams,
    scales: DerivedScales | None = None,
    condition: str = "delta_eq_omega",
) -> dict:
    """Transition frequencies at resonance and their expansion values.

    ``condition`` picks the resonance: "delta_eq_omega" (comparison point
    of the composite-system treatment) or "omega1_eq_delta0c" (dressed
    resonance, exact splitting Delta_{1,c}).  The expansion branch is
    chosen by the relative size of coupling and nonlinearity.
    """
    if scales is None:
        scales = derived_scales(p)
    coeffs = wda_coefficients(p, scales)
    tun = effective_tunneling(coeffs, scales, p.Delta, p.beta)
    om, om1, g, alpha = p.Omega, scales.Omega1, p.g, p.alpha

    if condition == "delta_eq_omega":
        delta_used = p.Delta
        if g < alpha:  # coupling far below nonlinearity: frequencies collapse
            branch = "nonlinearity-dominated"
            omega_plus_exp, omega_minus_exp = om, om1
        else:
            branch = "coupling-dominated"
            split = g * (1.0 - 1.5 * alpha / om)
            omega_plus_exp = om + 1.5 * alpha - split
            omega_minus_exp = om + 1.5 * alpha + split
        tun_used = effective_tunneling(coeffs, scales, delta_used, p.beta)
    elif condition == "omega1_eq_delta0c":
        # solve Delta so that the dressed zeroth amplitude hits Omega1
        dressing = tun.delta0c / p.Delta if p.Delta > 0 else 1.0
        delta_used = om1 / dressing
        tun_used = effective_tunneling(coeffs, scales, delta_used, p.beta)
        branch = "dressed-resonance"
        omega_plus_exp = om1 - 0.5 * tun_used.delta1c
        omega_minus_exp = om1 + 0.5 * tun_used.delta1c
    else:
        raise ValueError(f"unknown resonance condition {condition!r}")

    omega_plus_exact, omega_minus_exact = pole_frequencies(
        tun_used.delta0c, tun_used.delta1c, om1
    )
    return {
        "condition": condition,
        "branch": branch,
        "delta_used": delta_used,
        "omega_plus": omega_plus_exp,
        "omega_minus": omega_minus_exp,
        "omega_plus_exact": omega_plus_exact,
        "omega_minus_exact": omega_minus_exact,
        "bs_shift": bloch_siegert_shift(p),
    }


def truncation_ratio_n2(tun: EffectiveTunneling, coeffs: WdaCoefficients, beta: float, omega1: float) -> float:
    """Size of the first dropped harmonic relative to the retained one.

    Uses the small-argument second harmonic
    |u0|^2*cosh(beta*Omega1)/8 = W^2*(2 + 1/sinh^2(beta*Omega1/2))/8,
    which stays finite at any temperature.  Diagnostic only.
    """
    if tun.delta1c == 0.0:
        return 0.0
    inv_sinh_sq = 0.0 if beta * omega1 > 1400.0 else 1.0 / math.sinh(0.5 * beta * omega1) ** 2
    delta2c_sq = 0.25 * (tun.delta0c**2 / i0(abs(tun.u0))) * coeffs.W**2 * (2.0 + inv_sinh_sq)
    return delta2c_sq / tun.delta1c**2
