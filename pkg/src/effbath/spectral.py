"""Spectral densities of the bare, linear-effective and nonlinear-effective baths.

The nonlinear effective density is implemented twice on purpose: once
directly (``nonlinear_effective_density``) and once through the oscillator
susceptibility (``susceptibility_imag``).  The two routes are algebraically
identical and are cross-checked permanently in the test suite; their
agreement is the core mapping statement of the model.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ZeroDriveError
from .params import DerivedScales, SystemParams, convert_couplings

__all__ = [
    "ohmic_density",
    "linear_effective_density",
    "susceptibility_imag",
    "nonlinear_effective_density",
    "geff",
    "effective_damping",
    "susceptibility_from_response",
    "density_peak",
]


def ohmic_density(omega, eta):
    """Strictly Ohmic density J = eta*omega (odd in omega)."""
    return eta * np.asarray(omega, dtype=float)


def linear_effective_density(omega, gbar, gamma, Omega, M):
    """Peaked effective density of an intermediate harmonic oscillator.

    J = gbar**2*gamma*omega / (M*(Omega**2 - omega**2)**2 + M*gamma**2*omega**2),
    Ohmic at low frequency with slope gbar**2*gamma/(M*Omega**4).
    """
    w = np.asarray(omega, dtype=float)
    den = M * (Omega**2 - w**2) ** 2 + M * gamma**2 * w**2
    return gbar**2 * gamma * w / den


def susceptibility_imag(omega_ex, p: SystemParams, scales: DerivedScales):
    """Imaginary part of the nonlinear oscillator's linear susceptibility.

    Zero-drive limit of the driven steady-state response around the
    one-photon resonance Omega1; negative for positive frequencies.  The
    Ohmic density M*gamma*omega enters the numerator with the bare (odd)
    frequency and everywhere else through |omega_ex|.
    """
    w = np.asarray(omega_ex, dtype=float)
    y04 = scales.y0**4
    n14 = scales.n1_pow4
    om1 = scales.Omega1
    weight = 2.0 * om1 / (np.abs(w) + om1)
    j_at_peak = p.M * p.gamma * om1
    num = y04 * (p.M * p.gamma * w) * n14 * weight
    den = y04 * j_at_peak**2 * n14 * (2.0 * scales.nth + 1.0) ** 2 + 4.0 * (np.abs(w) - om1) ** 2
    return -num / den


def nonlinear_effective_density(omega_ex, p: SystemParams, scales: DerivedScales):
    """Effective spectral density seen by the qubit, direct closed form.

    Peaked at the shifted frequency Omega1, Ohmic at low frequency and odd
    in omega_ex.  Must coincide with -gbar**2 * susceptibility_imag to
    machine precision.
    """
    w = np.asarray(omega_ex, dtype=float)
    gbar, _ = convert_couplings(p)
    n14 = scales.n1_pow4
    om1 = scales.Omega1
    weight = 2.0 * om1 / (np.abs(w) + om1)
    num = gbar**2 * p.gamma * w * n14 * weight
    den = (
        p.M * p.gamma**2 * om1**2 * (2.0 * scales.nth + 1.0) ** 2 * n14
        + 4.0 * p.M * p.Omega**2 * (np.abs(w) - om1) ** 2
    )
    return num / den


def geff(omega, p: SystemParams, scales: DerivedScales):
    """Coupling-weighted spectral function entering the bath correlation.

    G = 2*varsigma*Omega**2 * omega * (2*Omega1/(|omega|+Omega1))
        / (gammabar**2 + (|omega|-Omega1)**2).
    Equals q0**2*J_eff/(pi*hbar) up to the first-order-in-alpha reduction
    Omega1*n1**2 ~ Omega; independent of q0.
    """
    w = np.asarray(omega, dtype=float)
    om1 = scales.Omega1
    weight = 2.0 * om1 / (np.abs(w) + om1)
    den = scales.gammabar**2 + (np.abs(w) - om1) ** 2
    return 2.0 * scales.varsigma * p.Omega**2 * w * weight / den


def effective_damping(omega, density, mu):
    """Frequency-resolved damping density(omega)/(mu*omega).

    ``density`` is a callable J(omega).  Raises ZeroDivisionError at
    omega = 0; the caller must use the low-frequency slope there.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(w == 0.0):
        raise ZeroDivisionError("effective damping undefined at omega = 0; use the slope limit")
    return np.asarray(density(w), dtype=float) / (mu * w)


def susceptibility_from_response(amplitude, phase, drive):
    """Complex susceptibility (A/F)*exp(-i*phase) of a steady-state response."""
    if drive <= 0.0:
        raise ZeroDriveError("drive amplitude must be positive")
    return (amplitude / drive) * np.exp(-1j * phase)


def density_peak(density, lo=0.0, hi=None, coarse_step=None, Omega=1.0):
    """Location and height of the (unimodal) maximum of ``density``.

    Coarse scan with step Omega/2000 over (lo, hi], then golden-section
    refinement around the best grid point.
    """
    if hi is None:
        hi = 2.0 * Omega
    if coarse_step is None:
        coarse_step = Omega / 2000.0
    grid = np.arange(lo + coarse_step, hi + 0.5 * coarse_step, coarse_step)
    values = np.asarray(density(grid), dtype=float)
    i = int(np.argmax(values))
    if 0 < i < grid.size - 1:
        bracket = (grid[i - 1], grid[i], grid[i + 1])
        res = minimize_scalar(
            lambda w: -float(density(w)), bracket=bracket, method="golden",
            options={"xtol": 1e-12},
        )
        loc = float(res.x)
        return loc, float(density(loc))
    return float(grid[i]), float(values[i])
