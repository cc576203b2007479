"""Birefringent dispersion models and phasematching solvers.

Crystals are treated as uniaxial: ordinary rays see n_o, extraordinary rays
see the angle-tuned index 1/n^2 = cos^2(theta)/n_o^2 + sin^2(theta)/n_e^2.
Biaxial KTP is mapped onto this form for the usual collinear x-cut geometry
(n_e := n_y, n_o := n_z, theta = 90 deg); see the bundled database notes.

The carrier phase mismatch reported everywhere is delta_k = k_p - k_s - k_i.
"""

import enum
import json
import os
from dataclasses import dataclass
from importlib import resources

import numpy as np
from scipy.optimize import brentq

from .constants import C_UM_PS, lambda_from_omega
from .errors import (
    AlreadyMatched,
    ConfigError,
    NoPhasematch,
    NumericalFailure,
    OutOfRange,
)

ENV_MATERIALS_PATH = "BIPHOTON_MATERIALS_PATH"

#: relative frequency step for dispersion derivatives
DERIV_REL_STEP = 1e-4


class Pol(str, enum.Enum):
    ORDINARY = "o"
    EXTRAORDINARY = "e"


@dataclass(frozen=True)
class Sellmeier:
    """n^2(lambda) = c0 + sum_j (A_j + B_j L2)/(L2 - D_j) + lambda_sq L2."""

    c0: float
    terms: tuple
    lambda_sq: float = 0.0

    def n_squared(self, lambda_um):
        L2 = np.asarray(lambda_um, dtype=float) ** 2
        acc = self.c0 + self.lambda_sq * L2
        for a, b, d in self.terms:
            acc = acc + (a + b * L2) / (L2 - d)
        return acc


@dataclass(frozen=True)
class DispersionModel:
    material_id: str
    sellmeier_o: Sellmeier
    sellmeier_e: Sellmeier
    valid_range: tuple
    source: str = ""


@dataclass(frozen=True)
class RaySpec:
    polarization: Pol
    theta: float = np.pi / 2

    def __post_init__(self):
        if not (0.0 <= self.theta <= np.pi / 2 + 1e-12):
            raise ConfigError(f"theta {self.theta} outside [0, pi/2]")


@dataclass(frozen=True)
class PolarizationRoles:
    """Which principal index each wave sees. Explicit, never inferred."""

    pump: Pol = Pol.EXTRAORDINARY
    signal: Pol = Pol.EXTRAORDINARY
    idler: Pol = Pol.ORDINARY


DEFAULT_ROLES = PolarizationRoles()


def _parse_sellmeier(node):
    return Sellmeier(
        c0=float(node["c0"]),
        terms=tuple(tuple(float(x) for x in t) for t in node["terms"]),
        lambda_sq=float(node.get("lambda_sq", 0.0)),
    )


def load_database(path=None):
    """Load the materials database; env var overrides the bundled file."""
    if path is None:
        path = os.environ.get(ENV_MATERIALS_PATH)
    if path is None:
        text = resources.files("biphoton.data").joinpath("materials.json").read_text()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    raw = json.loads(text)
    if "materials" not in raw:
        raise ConfigError("materials database missing 'materials' key")
    db = {}
    for name, node in raw["materials"].items():
        lo, hi = node["valid_range"]
        db[name.upper()] = DispersionModel(
            material_id=name.upper(),
            sellmeier_o=_parse_sellmeier(node["sellmeier_o"]),
            sellmeier_e=_parse_sellmeier(node["sellmeier_e"]),
            valid_range=(float(lo), float(hi)),
            source=str(node.get("source", "")),
        )
    return db


def get_material(name, db=None):
    if db is None:
        db = load_database()
    key = str(name).upper()
    if key not in db:
        raise ConfigError(f"unknown material {name!r}; have {sorted(db)}")
    return db[key]


def _check_range(model, lambda_um):
    lam = np.asarray(lambda_um, dtype=float)
    lo, hi = model.valid_range
    if np.any(lam < lo) or np.any(lam > hi):
        raise OutOfRange(
            f"{model.material_id}: wavelength outside validity range [{lo}, {hi}] um"
        )


def refractive_index(model, ray, lambda_um):
    """Index seen by the ray at vacuum wavelength lambda_um (um)."""
    _check_range(model, lambda_um)
    no2 = model.sellmeier_o.n_squared(lambda_um)
    if ray.polarization is Pol.ORDINARY:
        return np.sqrt(no2)
    ne2 = model.sellmeier_e.n_squared(lambda_um)
    s2 = np.sin(ray.theta) ** 2
    return 1.0 / np.sqrt((1.0 - s2) / no2 + s2 / ne2)


def wavenumber(model, ray, omega):
    """k = n(omega) omega / c in rad/um; omega in rad/ps."""
    lam = lambda_from_omega(np.asarray(omega, dtype=float))
    return refractive_index(model, ray, lam) * np.asarray(omega, dtype=float) / C_UM_PS


def inverse_group_velocity(model, ray, omega, rel_step=DERIV_REL_STEP):
    """dk/domega (ps/um) by Richardson-extrapolated central differences."""
    h = rel_step * omega

    def diff(hh):
        return (wavenumber(model, ray, omega + hh) - wavenumber(model, ray, omega - hh)) / (2 * hh)

    return (4.0 * diff(h / 2) - diff(h)) / 3.0


def gvd(model, ray, omega, rel_step=DERIV_REL_STEP):
    """d2k/domega2 (ps^2/um), same stencil strategy as the first derivative."""
    h = rel_step * omega
    k0 = wavenumber(model, ray, omega)

    def diff2(hh):
        return (
            wavenumber(model, ray, omega + hh) - 2.0 * k0 + wavenumber(model, ray, omega - hh)
        ) / hh**2

    return (4.0 * diff2(h / 2) - diff2(h)) / 3.0


def walkoff_angle(model, theta, lambda_um):
    """Poynting walkoff magnitude of the extraordinary ray, in degrees."""
    _check_range(model, lambda_um)
    no2 = model.sellmeier_o.n_squared(lambda_um)
    ne2 = model.sellmeier_e.n_squared(lambda_um)
    neff = refractive_index(model, RaySpec(Pol.EXTRAORDINARY, theta), lambda_um)
    rho = np.arctan(0.5 * neff**2 * np.abs(1.0 / ne2 - 1.0 / no2) * np.abs(np.sin(2.0 * theta)))
    return np.degrees(rho)


def carrier_mismatch(model, theta, lambda_pdc_um, roles=DEFAULT_ROLES, qpm_period=None):
    """delta_k = k_p - k_s - k_i at degeneracy, minus the grating vector if poled."""
    w0 = 2.0 * np.pi * C_UM_PS / lambda_pdc_um
    kp = wavenumber(model, RaySpec(roles.pump, theta), 2.0 * w0)
    ks = wavenumber(model, RaySpec(roles.signal, theta), w0)
    ki = wavenumber(model, RaySpec(roles.idler, theta), w0)
    dk = kp - ks - ki
    if qpm_period is not None:
        dk = dk - np.sign(dk) * 2.0 * np.pi / qpm_period
    return dk


def phasematching_angle(model, lambda_pdc_um, roles=DEFAULT_ROLES):
    """Collinear degenerate phasematching angle (rad) by bracketed bisection."""

    def f(theta):
        return carrier_mismatch(model, theta, lambda_pdc_um, roles)

    thetas = np.linspace(np.radians(0.5), np.radians(89.99), 61)
    vals = np.array([f(t) for t in thetas])
    sign = np.sign(vals)
    idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    if len(idx) == 0:
        raise NoPhasematch(
            f"{model.material_id}: no collinear phasematching angle at {lambda_pdc_um} um"
        )
    a, b = thetas[idx[0]], thetas[idx[0] + 1]
    theta_c = brentq(f, a, b, xtol=1e-15, rtol=8.9e-16)
    if abs(f(theta_c)) > 1e-10:
        raise NumericalFailure("phasematching residual above 1e-10 rad/um")
    return theta_c


def qpm_period(model, lambda_pdc_um, theta=np.pi / 2, roles=DEFAULT_ROLES):
    """First-order poling period Lambda = 2 pi / |delta_k| (um)."""
    dk = carrier_mismatch(model, theta, lambda_pdc_um, roles)
    if abs(dk) < 1e-12:
        raise AlreadyMatched("carrier mismatch already below 1e-12 rad/um")
    return 2.0 * np.pi / abs(dk)
