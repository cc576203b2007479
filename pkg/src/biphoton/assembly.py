"""Segmented sources: N identical crystals separated by N-1 compensating spacers.

Each crystal-plus-spacer period adds the pair phase Phi = L D_c + h D_sp with
D = k_s + k_i - k_p evaluated in the respective medium, so the N-crystal
phasematching function is the single-crystal complex sinc times the exact
geometric sum over periods:

    phi_N = exp(i (N-1) Phi / 2) sin(N Phi / 2) / sin(Phi / 2) * phi_1

The spacer is chosen so that its carrier mismatch rewinds an integer number of
2 pi turns (h = m h_min) while its group-velocity mismatch cancels the
crystal's, which symmetrizes the central ridge and steers its slope to +1.
"""

from dataclasses import dataclass

import numpy as np

from . import _backend
from .constants import C_UM_PS, GAMMA_SINC2, omega_from_lambda
from .errors import ConfigError, NoOppositeSign, ZeroMismatch
from .jsa import CrystalConfig, FrequencyGrid, _normalized, pump_envelope
from .materials import (
    DEFAULT_ROLES,
    RaySpec,
    inverse_group_velocity,
    phasematching_angle,
    wavenumber,
)


def upsilon(n_crystals, x):
    """Normalized Dirichlet kernel sin(N x) / (N sin x), array-capable.

    The removable singularities at x = k pi evaluate to (-1)^{k (N-1)}, so the
    peak values are exactly +-1.
    """
    n = int(n_crystals)
    if n < 1:
        raise ConfigError("n_crystals must be at least 1")
    xa = np.asarray(x, dtype=float)
    s = np.sin(xa)
    near = np.abs(s) < 1e-9
    k = np.rint(xa / np.pi)
    limit = np.where(((n - 1) * k.astype(np.int64)) % 2 == 0, 1.0, -1.0)
    safe = np.where(near, 1.0, s)
    out = np.where(near, limit, np.sin(n * xa) / (n * safe))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class AssemblyConfig:
    """A crystal stack: crystal config, spacer medium, and geometry."""

    crystal: CrystalConfig
    spacer_material: object
    spacer_h_um: float
    n_crystals: int
    spacer_theta: float = np.pi / 2
    spacer_roles: object = None

    def __post_init__(self):
        if self.n_crystals < 1:
            raise ConfigError("n_crystals must be at least 1")
        if self.spacer_h_um < 0:
            raise ConfigError("spacer thickness must be nonnegative")

    def roles_in_spacer(self):
        return self.spacer_roles if self.spacer_roles is not None else self.crystal.roles


def _forward_mismatch(material, theta, roles, omega0, nu_s, nu_i):
    """D = k_s + k_i - k_p at the given detunings."""
    ks = wavenumber(material, RaySpec(roles.signal, theta), omega0 + nu_s)
    ki = wavenumber(material, RaySpec(roles.idler, theta), omega0 + nu_i)
    kp = wavenumber(material, RaySpec(roles.pump, theta), 2 * omega0 + nu_s + nu_i)
    return ks + ki - kp


def assembly_phasematching(cfg, nu_s, nu_i):
    """Complex N-crystal phasematching at arbitrary detunings, full dispersion."""
    cr = cfg.crystal
    vs = np.asarray(nu_s, dtype=float)
    vi = np.asarray(nu_i, dtype=float)
    dc = _forward_mismatch(cr.material, cr.theta, cr.roles, cr.omega0, vs, vi)
    x = 0.5 * cr.length_um * dc
    single = np.sinc(x / np.pi) * np.exp(1j * x)
    if cfg.n_crystals == 1:
        return single
    dsp = _forward_mismatch(
        cfg.spacer_material, cfg.spacer_theta, cfg.roles_in_spacer(), cr.omega0, vs, vi
    )
    phi = cr.length_um * dc + cfg.spacer_h_um * dsp
    geom = cfg.n_crystals * upsilon(cfg.n_crystals, 0.5 * phi)
    return geom * np.exp(0.5j * (cfg.n_crystals - 1) * phi) * single


def assembly_jsa_grid(pump, cfg, grid):
    """Normalized assembly joint amplitude on a square grid (kernel path)."""
    cr = cfg.crystal
    if abs(pump.omega_p0 - 2.0 * cr.omega0) > 1e-9 * pump.omega_p0:
        raise ConfigError("pump carrier must be twice the downconversion carrier")
    nu = grid.axis()
    n = grid.n
    w0 = cr.omega0
    nu_sum = (np.arange(2 * n - 1) - n) * grid.spacing
    ks = wavenumber(cr.material, RaySpec(cr.roles.signal, cr.theta), w0 + nu)
    ki = wavenumber(cr.material, RaySpec(cr.roles.idler, cr.theta), w0 + nu)
    kp = wavenumber(cr.material, RaySpec(cr.roles.pump, cr.theta), 2 * w0 + nu_sum)
    sr = cfg.roles_in_spacer()
    qs = wavenumber(cfg.spacer_material, RaySpec(sr.signal, cfg.spacer_theta), w0 + nu)
    qi = wavenumber(cfg.spacer_material, RaySpec(sr.idler, cfg.spacer_theta), w0 + nu)
    qp = wavenumber(cfg.spacer_material, RaySpec(sr.pump, cfg.spacer_theta), 2 * w0 + nu_sum)
    phi = _backend.assembly_kernel(
        kp, ks, ki, qp, qs, qi, cr.length_um, cfg.spacer_h_um, cfg.n_crystals
    )
    values = phi * pump_envelope(pump, nu[:, None] + nu[None, :])
    return _normalized(grid, values)


def _unit_mismatch_sums(material, theta, roles, omega0):
    """(k_s' + k_i' - 2 k_p', k_p' - k_s', k_p' - k_i') per unit length."""
    kp1 = inverse_group_velocity(material, RaySpec(roles.pump, theta), 2 * omega0)
    ks1 = inverse_group_velocity(material, RaySpec(roles.signal, theta), omega0)
    ki1 = inverse_group_velocity(material, RaySpec(roles.idler, theta), omega0)
    return ks1 + ki1 - 2 * kp1, kp1 - ks1, kp1 - ki1


def generalized_gvm_ratio(
    crystal_material,
    spacer_material,
    lambda_um,
    theta_crystal,
    theta_spacer=np.pi / 2,
    roles=DEFAULT_ROLES,
    spacer_roles=None,
):
    """h/L nulling the period-averaged group-velocity mismatch, or None.

    Solves (k_s' + k_i' - 2 k_p') L + (kappa_s' + kappa_i' - 2 kappa_p') h = 0;
    a positive solution needs opposite signs in crystal and spacer.
    """
    w0 = omega_from_lambda(lambda_um)
    mc, _, _ = _unit_mismatch_sums(crystal_material, theta_crystal, roles, w0)
    msp, _, _ = _unit_mismatch_sums(
        spacer_material, theta_spacer, spacer_roles or roles, w0
    )
    if mc == 0.0 or msp == 0.0 or np.sign(mc) == np.sign(msp):
        return None
    return float(-mc / msp)


def quantize_spacer(spacer_material, lambda_um, m_integer, theta=np.pi / 2, roles=DEFAULT_ROLES):
    """(h_min, h): thicknesses whose carrier phase is an exact 2 pi multiple.

    h_min = 2 pi / |delta_kappa0|; h = m h_min keeps every crystal's central
    peak aligned while leaving room to satisfy the h/L ratio.
    """
    if int(m_integer) < 1:
        raise ConfigError("m must be a positive integer")
    w0 = omega_from_lambda(lambda_um)
    dk0 = -_forward_mismatch(spacer_material, theta, roles, w0, 0.0, 0.0)
    if abs(dk0) < 1e-9:
        raise ZeroMismatch("spacer carrier mismatch vanishes; nothing to quantize")
    h_min = 2.0 * np.pi / abs(dk0)
    return float(h_min), float(int(m_integer) * h_min)


@dataclass(frozen=True)
class AssemblyDesign:
    """Solved stack geometry and the ridge/pump numbers that follow from it.

    T_s, T_i are the per-period group delays (ps) of signal and idler relative
    to the pump; T_minus = (T_i - T_s)/2 sets the ridge geometry. The mismatch
    sums are d(delta k)/d nu per unit length along the symmetric detuning,
    2 k_p' - k_s' - k_i', in the k_p - k_s - k_i mismatch convention; opposite
    signs between crystal and spacer are what make compensation possible.
    Wavelength figures are quoted at the degenerate carrier.
    """

    crystal_material_id: str
    spacer_material_id: str
    lambda0_um: float
    theta_c_rad: float
    n_crystals: int
    m_integer: int
    ratio_h_over_l: float
    h_min_um: float
    h_um: float
    length_um: float
    t_s_ps: float
    t_i_ps: float
    t_minus_ps: float
    mismatch_sum_crystal_ps_um: float
    mismatch_sum_spacer_ps_um: float
    delta_lambda_ridge_spacing_nm: float
    delta_lambda_ridge_fwhm_nm: float
    sigma_pump_rad_ps: float
    gen_gvm_residual_ps: float


def design_assembly(
    crystal_material,
    spacer_material,
    lambda_um,
    n_crystals,
    m_integer,
    roles=DEFAULT_ROLES,
    spacer_theta=np.pi / 2,
    spacer_roles=None,
):
    """Solve a crystal/spacer stack for a separable central ridge.

    The crystal is cut at its collinear phasematching angle; the spacer
    thickness is quantized to h = m h_min and the crystal length follows from
    the generalized group-velocity-matching ratio.
    """
    n_crystals = int(n_crystals)
    m_integer = int(m_integer)
    if n_crystals < 1:
        raise ConfigError("n_crystals must be at least 1")
    theta_c = phasematching_angle(crystal_material, lambda_um, roles)
    ratio = generalized_gvm_ratio(
        crystal_material, spacer_material, lambda_um, theta_c, spacer_theta, roles, spacer_roles
    )
    if ratio is None or ratio <= 0:
        raise NoOppositeSign(
            "crystal and spacer group-velocity mismatches do not compensate"
        )
    h_min, h = quantize_spacer(
        spacer_material, lambda_um, m_integer, spacer_theta, spacer_roles or roles
    )
    length = h / ratio
    w0 = omega_from_lambda(lambda_um)
    m_c, ps_c, pi_c = _unit_mismatch_sums(crystal_material, theta_c, roles, w0)
    m_sp, ps_sp, pi_sp = _unit_mismatch_sums(
        spacer_material, spacer_theta, spacer_roles or roles, w0
    )
    t_s = ps_c * length + ps_sp * h
    t_i = pi_c * length + pi_sp * h
    t_minus = 0.5 * (t_i - t_s)
    residual = t_s + t_i
    tm = abs(t_minus)
    lam2 = lambda_um**2
    spacing_um = lam2 / (np.sqrt(2.0) * C_UM_PS * tm)
    fwhm_um = np.sqrt(2.0) * lam2 * GAMMA_SINC2 / (np.pi * C_UM_PS * n_crystals * tm)
    sigma_pump = 2.0 * GAMMA_SINC2 / (np.sqrt(np.log(2.0)) * n_crystals * tm)
    return AssemblyDesign(
        crystal_material_id=crystal_material.material_id,
        spacer_material_id=spacer_material.material_id,
        lambda0_um=float(lambda_um),
        theta_c_rad=float(theta_c),
        n_crystals=n_crystals,
        m_integer=m_integer,
        ratio_h_over_l=float(ratio),
        h_min_um=h_min,
        h_um=h,
        length_um=float(length),
        t_s_ps=float(t_s),
        t_i_ps=float(t_i),
        t_minus_ps=float(t_minus),
        mismatch_sum_crystal_ps_um=float(-m_c),
        mismatch_sum_spacer_ps_um=float(-m_sp),
        delta_lambda_ridge_spacing_nm=float(spacing_um * 1e3),
        delta_lambda_ridge_fwhm_nm=float(fwhm_um * 1e3),
        sigma_pump_rad_ps=float(sigma_pump),
        gen_gvm_residual_ps=float(residual),
    )


def assembly_config_from_design(design, crystal_material, spacer_material, roles=DEFAULT_ROLES):
    """Materialize the evaluation config for a solved design."""
    crystal = CrystalConfig(
        material=crystal_material,
        length_um=design.length_um,
        theta=design.theta_c_rad,
        omega0=omega_from_lambda(design.lambda0_um),
        roles=roles,
    )
    return AssemblyConfig(
        crystal=crystal,
        spacer_material=spacer_material,
        spacer_h_um=design.h_um,
        n_crystals=design.n_crystals,
    )


def central_ridge_grid(design, n=256):
    """Square grid covering the central ridge: half-span Delta-lambda/(2 sqrt 2)
    per axis, converted to angular frequency at the carrier."""
    lam = design.lambda0_um
    spacing_um = design.delta_lambda_ridge_spacing_nm * 1e-3
    half_span = 2.0 * np.pi * C_UM_PS / lam**2 * spacing_um / (2.0 * np.sqrt(2.0))
    return FrequencyGrid(omega0=omega_from_lambda(lam), half_span=half_span, n=n)


def ridge_slope(ja):
    """Slope d nu_i / d nu_s of the dominant intensity crest.

    For every signal row whose crest carries at least a quarter of the global
    peak intensity, the idler-axis crest position is refined by a three-point
    parabola around the row maximum; an intensity-weighted least-squares line
    through the crest track gives the slope.  Feed it a pump-free
    phasematching grid to read off the ridge orientation; a pumped amplitude
    reports the crest of the pump-weighted product instead.
    """
    inten = np.abs(ja.values) ** 2
    x = ja.grid.axis()
    d = ja.grid.spacing
    peak = inten.max()
    if peak <= 0.0:
        raise ConfigError("amplitude is identically zero")
    xs, ys, ws = [], [], []
    for j in range(inten.shape[0]):
        row = inten[j]
        k = int(np.argmax(row))
        if row[k] < 0.25 * peak or k == 0 or k == row.size - 1:
            continue
        denom = row[k - 1] - 2.0 * row[k] + row[k + 1]
        frac = 0.0 if denom == 0.0 else 0.5 * (row[k - 1] - row[k + 1]) / denom
        xs.append(x[j])
        ys.append(x[k] + frac * d)
        ws.append(row[k])
    if len(xs) < 3:
        raise ConfigError("fewer than three usable crest rows")
    xs, ys, ws = np.array(xs), np.array(ys), np.array(ws)
    wsum = ws.sum()
    mx = np.dot(ws, xs) / wsum
    my = np.dot(ws, ys) / wsum
    vxx = np.dot(ws, (xs - mx) ** 2)
    if vxx == 0.0:
        return float("inf")
    return float(np.dot(ws, (xs - mx) * (ys - my)) / vxx)


def isolate_central_ridge(ja, design, half_width_nm=None):
    """Restrict a sampled amplitude to its central interference ridge.

    Applies a rectangular window of +-half_width_nm per frequency axis
    (default: the ridge spacing over 2 sqrt 2) and zeroes everything beyond
    the first transverse nulls of the N-crystal interference factor, at
    |nu_s - nu_i| = 2 pi / (N |T_minus|).  The transverse cut is what
    actually isolates the ridge: the sideband ridges kept by a plain box
    window act as extra Schmidt modes and pin the cooperativity near 1.24
    regardless of the box size.  Returns a renormalized amplitude.
    """
    if half_width_nm is None:
        half_width_nm = design.delta_lambda_ridge_spacing_nm / (2.0 * np.sqrt(2.0))
    lam = design.lambda0_um
    half_w = 2.0 * np.pi * C_UM_PS / lam**2 * (half_width_nm * 1e-3)
    t_minus = abs(design.t_minus_ps)
    if t_minus == 0.0:
        raise ConfigError("design has zero transverse period T_minus")
    nu_cut = 2.0 * np.pi / (design.n_crystals * t_minus)
    nu = ja.grid.axis()
    keep = (
        (np.abs(nu)[:, None] <= half_w)
        & (np.abs(nu)[None, :] <= half_w)
        & (np.abs(nu[:, None] - nu[None, :]) < nu_cut)
    )
    vals = np.where(keep, ja.values, 0.0)
    return _normalized(ja.grid, vals, ja.domain)
