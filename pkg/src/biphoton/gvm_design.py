"""Factorizability analysis and group-velocity-matched source design.

Within the Gaussian model the joint amplitude separates exactly when

    (1)  4/sigma^2 + gamma tau_s tau_i = 0      (magnitude mixed term)
    (2)  2 beta_t + beta_p / 2 = 0              (phase mixed term)

Condition (1) fixes the pump bandwidth whenever the two group-velocity
mismatches straddle the pump (tau_s tau_i < 0); condition (2) fixes the pump
chirp beta_t* = -beta_p/4. The solvers below locate wavelengths where these
become available and quantify how factorable the result is.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .constants import GAMMA_SINC, omega_from_lambda, sigma_from_fwhm_nm
from .errors import NoPhasematch, NotAsymmetric
from .jsa import (
    PumpConfig,
    angle_matched_crystal,
    marginal_sigmas,
    qpm_matched_crystal,
    taylor_coefficients,
)
from .materials import (
    DEFAULT_ROLES,
    RaySpec,
    inverse_group_velocity,
    phasematching_angle,
)


@dataclass(frozen=True)
class FactorizabilityReport:
    """How close a pump/crystal pair is to emitting a separable state.

    cond1_residual is (4/sigma^2 + gamma tau_s tau_i) normalized by 4/sigma^2;
    required_sigma is the bandwidth closing condition (1), None when the
    mismatch signs forbid it; beta_t_star closes condition (2). Widths are the
    Gaussian-model marginals, aspect_ratio_r = max/min >= 1, theta_II_deg is
    the phasematching ridge angle, gvm_residual = tau_s + tau_i (ps).
    """

    cond1_residual: float
    required_sigma: float
    beta_t_star: float
    sigma_s: float
    sigma_i: float
    aspect_ratio_r: float
    theta_II_deg: float
    gvm_residual: float


def factorizability_report(pump, coeffs):
    g = GAMMA_SINC
    ts, ti = coeffs.tau_s, coeffs.tau_i
    base = 4.0 / pump.sigma**2
    cond1 = (base + g * ts * ti) / base
    required = 2.0 / np.sqrt(-g * ts * ti) if ts * ti < 0 else None
    sig_s, sig_i = marginal_sigmas(pump, coeffs)
    r = max(sig_s / sig_i, sig_i / sig_s)
    if ti != 0.0:
        theta = np.degrees(np.arctan(-ts / ti))
    else:
        theta = 90.0
    return FactorizabilityReport(
        cond1_residual=float(cond1),
        required_sigma=required if required is None else float(required),
        beta_t_star=float(-coeffs.beta_p / 4.0),
        sigma_s=float(sig_s),
        sigma_i=float(sig_i),
        aspect_ratio_r=float(r),
        theta_II_deg=float(theta),
        gvm_residual=float(ts + ti),
    )


def solve_pump_bandwidth(crystal):
    """Pump sigma (rad/ps) that makes the Gaussian-model magnitude separable.

    None when tau_s tau_i >= 0, i.e. the pump group velocity does not lie
    between the two photon group velocities.
    """
    coeffs = taylor_coefficients(crystal)
    prod = coeffs.tau_s * coeffs.tau_i
    if prod >= 0:
        return None
    return float(2.0 / np.sqrt(-GAMMA_SINC * prod))


def _mismatch_curves(material, scheme, roles, lambdas):
    """Per-unit-length group-velocity mismatches g_mu = k_mu' - k_p' on a scan.

    Entries are NaN where no phasematching angle exists.
    """
    gs = np.full(lambdas.shape, np.nan)
    gi = np.full(lambdas.shape, np.nan)
    for j, lam in enumerate(lambdas):
        try:
            theta = (
                phasematching_angle(material, lam, roles)
                if scheme == "angle"
                else np.pi / 2
            )
        except NoPhasematch:
            continue
        w0 = omega_from_lambda(lam)
        kp1 = inverse_group_velocity(material, RaySpec(roles.pump, theta), 2 * w0)
        gs[j] = inverse_group_velocity(material, RaySpec(roles.signal, theta), w0) - kp1
        gi[j] = inverse_group_velocity(material, RaySpec(roles.idler, theta), w0) - kp1
    return gs, gi


def _scan_window(material, window):
    lo, hi = material.valid_range
    lo = max(2.0 * lo * 1.02, lo * 1.02)
    hi = hi * 0.98
    if window is not None:
        lo, hi = max(lo, window[0]), min(hi, window[1])
    return lo, hi


def _refine_root(material, scheme, roles, fn, a, b):
    def f(lam):
        gs, gi = _mismatch_curves(material, scheme, roles, np.array([lam]))
        return fn(gs[0], gi[0])

    return brentq(f, a, b, xtol=1e-12)


def gvm_wavelength_search(material, scheme="angle", roles=DEFAULT_ROLES, window=None, npts=64):
    """Degenerate wavelength where the pair group velocities straddle the
    pump symmetrically: k_s' + k_i' = 2 k_p'. None when no root exists."""
    lo, hi = _scan_window(material, window)
    lambdas = np.linspace(lo, hi, npts)
    gs, gi = _mismatch_curves(material, scheme, roles, lambdas)
    s = gs + gi
    for j in range(npts - 1):
        if np.isnan(s[j]) or np.isnan(s[j + 1]):
            continue
        if s[j] == 0.0:
            return float(lambdas[j])
        if s[j] * s[j + 1] < 0:
            return float(
                _refine_root(
                    material, scheme, roles, lambda a, b: a + b, lambdas[j], lambdas[j + 1]
                )
            )
    return None


def decorrelation_range(material, scheme="angle", roles=DEFAULT_ROLES, window=None, npts=64):
    """Wavelength interval with tau_s tau_i < 0 (asymmetric factorability).

    Endpoints are the zeros of the individual mismatches. Returns the widest
    such interval inside the scan window, or None.
    """
    lo, hi = _scan_window(material, window)
    lambdas = np.linspace(lo, hi, npts)
    gs, gi = _mismatch_curves(material, scheme, roles, lambdas)
    prod = gs * gi
    best = None
    j = 0
    while j < npts:
        if not (np.isfinite(prod[j]) and prod[j] < 0):
            j += 1
            continue
        start = j
        while j < npts and np.isfinite(prod[j]) and prod[j] < 0:
            j += 1
        end = j - 1
        a = lambdas[start]
        b = lambdas[end]
        # refine each endpoint on whichever curve crosses zero there
        if start > 0 and np.isfinite(prod[start - 1]):
            which = (lambda x, y: x) if gs[start - 1] * gs[start] < 0 else (lambda x, y: y)
            a = _refine_root(material, scheme, roles, which, lambdas[start - 1], lambdas[start])
        if end < npts - 1 and np.isfinite(prod[end + 1]):
            which = (lambda x, y: x) if gs[end] * gs[end + 1] < 0 else (lambda x, y: y)
            b = _refine_root(material, scheme, roles, which, lambdas[end], lambdas[end + 1])
        if best is None or (b - a) > (best[1] - best[0]):
            best = (float(a), float(b))
    return best


def asymmetric_design(material, lambda_um, length_um, pump, scheme="angle", roles=DEFAULT_ROLES):
    """Factorizability report in the asymmetric (one tau near zero) regime.

    pump may be a PumpConfig or a pump intensity FWHM in nm. Returns
    (report, long_crystal_regime); raises NotAsymmetric unless one mismatch
    is below 5% of the other.
    """
    if scheme == "angle":
        crystal = angle_matched_crystal(material, lambda_um, length_um, roles)
    else:
        crystal = qpm_matched_crystal(material, lambda_um, length_um, roles)
    if not hasattr(pump, "sigma"):
        sigma = sigma_from_fwhm_nm(float(pump), lambda_um / 2.0)
        pump = PumpConfig(omega_p0=2.0 * crystal.omega0, sigma=sigma)
    coeffs = taylor_coefficients(crystal)
    lo = min(abs(coeffs.tau_s), abs(coeffs.tau_i))
    hi = max(abs(coeffs.tau_s), abs(coeffs.tau_i))
    if hi == 0.0 or lo / hi >= 0.05:
        raise NotAsymmetric(
            f"|tau| ratio {lo / hi if hi else np.nan:.3f} is not below 0.05"
        )
    report = factorizability_report(pump, coeffs)
    long_crystal = bool(pump.sigma * hi > 10.0)
    return report, long_crystal


@dataclass(frozen=True)
class TemporalReport:
    """Joint temporal intensity widths and correlation of the Gaussian model.

    dt_mu are the width parameters (ps) of the JTI exponent
    exp(-2 t_mu^2 / dt_mu^2), so dt_mu = 2/sigma_mu when all betas vanish;
    sigma_M_sq is the mixed-term coefficient (ps^-2) of the same exponent.
    sigma_M_sq_asymptotic is the long-crystal estimate, which decays as 1/L^2.
    """

    dt_s: float
    dt_i: float
    sigma_M_sq: float
    sigma_M_sq_asymptotic: float


def temporal_report(pump, coeffs):
    """Exact Gaussian-model temporal metrics via the complex covariance.

    Valid in the magnitude-separable regime (condition (1) satisfied), where
    the spectral exponent is -nu^T M nu with
    M = [[1/sig_s^2 - i c_s, -i c_mix/2], [-i c_mix/2, 1/sig_i^2 - i c_i]],
    c_s = beta_t + beta_s/2, c_i = beta_t + beta_i/2, c_mix = 2 beta_t + beta_p/2.
    Fourier transforming, the JTI is exp(-t^T R t / 2) with R = Re(M^{-1}),
    so dt_mu = 2 / sqrt(R_mumu) and sigma_M^2 = R_01 / 2.
    """
    sig_s, sig_i = marginal_sigmas(pump, coeffs)
    c_s = pump.beta_t + 0.5 * coeffs.beta_s
    c_i = pump.beta_t + 0.5 * coeffs.beta_i
    c_mix = 2.0 * pump.beta_t + 0.5 * coeffs.beta_p
    M = np.array(
        [
            [1.0 / sig_s**2 - 1j * c_s, -0.5j * c_mix],
            [-0.5j * c_mix, 1.0 / sig_i**2 - 1j * c_i],
        ]
    )
    R = np.linalg.inv(M).real
    dt_s = 2.0 / np.sqrt(R[0, 0])
    dt_i = 2.0 / np.sqrt(R[1, 1])
    sigma_m_sq = 0.5 * R[0, 1]
    # long-crystal estimate: broad photon keeps the pump width, narrow one
    # collapses; expanding R in 1/sig_narrow^2 gives the leading mixed term
    if sig_s >= sig_i:
        sig_b, sig_n, c_b = sig_s, sig_i, c_s
    else:
        sig_b, sig_n, c_b = sig_i, sig_s, c_i
    asym = -c_mix * c_b * sig_n**2 * sig_b**4 / (4.0 * (1.0 + sig_b**4 * c_b**2))
    return TemporalReport(
        dt_s=float(dt_s),
        dt_i=float(dt_i),
        sigma_M_sq=float(sigma_m_sq),
        sigma_M_sq_asymptotic=float(asym),
    )
