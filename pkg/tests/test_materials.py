from __future__ import annotations

import json

import numpy as np
import pytest

import biphoton as bp
from biphoton.materials import (
    DispersionModel,
    Pol,
    RaySpec,
    Sellmeier,
)

FLAT_N = 1.7
FLAT = DispersionModel(
    material_id="FLAT",
    sellmeier_o=Sellmeier(c0=FLAT_N**2, terms=()),
    sellmeier_e=Sellmeier(c0=FLAT_N**2, terms=()),
    valid_range=(0.1, 10.0),
)


def _ray(pol, theta=np.pi / 2):
    return RaySpec(pol, theta)


def test_ordinary_index_ignores_angle(db):
    bbo = db["BBO"]
    n0 = bp.refractive_index(bbo, _ray(Pol.ORDINARY, 0.1), 0.8)
    n1 = bp.refractive_index(bbo, _ray(Pol.ORDINARY, 1.2), 0.8)
    assert n0 == n1


def test_extraordinary_index_at_zero_angle_equals_ordinary(db):
    bbo = db["BBO"]
    ne0 = bp.refractive_index(bbo, _ray(Pol.EXTRAORDINARY, 0.0), 0.8)
    no = bp.refractive_index(bbo, _ray(Pol.ORDINARY, 0.0), 0.8)
    assert abs(ne0 - no) < 1e-14


def test_extraordinary_index_at_ninety_is_principal(db):
    bbo = db["BBO"]
    ne = bp.refractive_index(bbo, _ray(Pol.EXTRAORDINARY, np.pi / 2), 0.8)
    assert abs(ne - np.sqrt(bbo.sellmeier_e.n_squared(0.8))) < 1e-14


def test_angle_tuned_index_monotone_for_negative_uniaxial(db):
    bbo = db["BBO"]
    thetas = np.linspace(0.0, np.pi / 2, 30)
    n = np.array([bp.refractive_index(bbo, _ray(Pol.EXTRAORDINARY, t), 0.8) for t in thetas])
    assert np.all(np.diff(n) < 0)
    no = bp.refractive_index(bbo, _ray(Pol.ORDINARY), 0.8)
    assert np.all(n <= no + 1e-14)


def test_wavenumber_monotone_in_frequency(db):
    kdp = db["KDP"]
    omega = np.linspace(bp.omega_from_lambda(1.4), bp.omega_from_lambda(0.4), 200)
    k = bp.wavenumber(kdp, _ray(Pol.ORDINARY), omega)
    assert np.all(np.diff(k) > 0)


def test_out_of_range_rejected(db):
    kdp = db["KDP"]
    with pytest.raises(bp.OutOfRange):
        bp.refractive_index(kdp, _ray(Pol.ORDINARY), 10.0)
    with pytest.raises(bp.OutOfRange):
        bp.wavenumber(kdp, _ray(Pol.ORDINARY), bp.omega_from_lambda(0.1))


def test_flat_material_group_velocity_and_gvd():
    w = bp.omega_from_lambda(0.8)
    ivg = bp.inverse_group_velocity(FLAT, _ray(Pol.ORDINARY), w)
    assert abs(ivg - FLAT_N / bp.C_UM_PS) < 1e-12
    assert abs(bp.gvd(FLAT, _ray(Pol.ORDINARY), w)) < 1e-12


def test_group_velocity_against_analytic_dispersion():
    # n^2 = c0 + E lam^2 gives dk/domega = c0 / (n c) exactly
    c0, e2 = 2.4, -0.01
    model = DispersionModel(
        material_id="DISP",
        sellmeier_o=Sellmeier(c0=c0, terms=(), lambda_sq=e2),
        sellmeier_e=Sellmeier(c0=c0, terms=(), lambda_sq=e2),
        valid_range=(0.1, 10.0),
    )
    for lam in (0.4, 0.8, 1.6):
        n = np.sqrt(c0 + e2 * lam * lam)
        ivg = bp.inverse_group_velocity(model, _ray(Pol.ORDINARY), bp.omega_from_lambda(lam))
        assert abs(ivg - c0 / (n * bp.C_UM_PS)) < 1e-10


def test_derivative_step_converged(db):
    kdp = db["KDP"]
    w = bp.omega_from_lambda(0.83)
    ray = _ray(Pol.EXTRAORDINARY, 1.0)
    a = bp.inverse_group_velocity(kdp, ray, w)
    b = bp.inverse_group_velocity(kdp, ray, w, rel_step=5e-5)
    assert abs(a - b) / abs(a) < 1e-9
    ga = bp.gvd(kdp, ray, w)
    gb = bp.gvd(kdp, ray, w, rel_step=5e-5)
    # the e-ray GVD is ~3e-8 ps^2/um here, close to the FP noise floor of the
    # second difference, so convergence needs an absolute term as well
    assert abs(ga - gb) < 1e-6 * abs(ga) + 5e-12


def test_walkoff_vanishes_on_axes(db):
    bbo = db["BBO"]
    assert bp.walkoff_angle(bbo, 0.0, 0.4) == 0.0
    assert bp.walkoff_angle(bbo, np.pi / 2, 0.4) < 1e-12
    assert bp.walkoff_angle(bbo, np.pi / 4, 0.4) > 1.0


def test_phasematching_angle_kdp(db):
    theta = bp.phasematching_angle(db["KDP"], 0.83)
    assert abs(np.degrees(theta) - 67.77) < 0.5
    assert abs(bp.carrier_mismatch(db["KDP"], theta, 0.83)) < 1e-10


def test_phasematching_angle_bbo(db):
    theta = bp.phasematching_angle(db["BBO"], 0.8)
    assert abs(np.degrees(theta) - 42.35) < 0.5
    assert abs(bp.carrier_mismatch(db["BBO"], theta, 0.8)) < 1e-10


def test_no_phasematching_angle_in_band(db):
    with pytest.raises(bp.NoPhasematch):
        bp.phasematching_angle(db["KDP"], 0.45)


def test_qpm_period_cancels_mismatch(db):
    ktp = db["KTP"]
    period = bp.qpm_period(ktp, 1.568)
    assert period > 0
    residual = bp.carrier_mismatch(ktp, np.pi / 2, 1.568, qpm_period=period)
    assert abs(residual) < 1e-12


def test_qpm_period_scales_inversely_with_mismatch():
    lam = 0.8
    base = bp.carrier_mismatch(FLAT, np.pi / 2, lam)
    assert abs(base) < 1e-15
    with pytest.raises(bp.AlreadyMatched):
        bp.qpm_period(FLAT, lam)
    # a dispersive flat-angle material: doubling lambda_sq doubles delta_k
    def poled(e2):
        return DispersionModel(
            material_id="POLED",
            sellmeier_o=Sellmeier(c0=2.4, terms=(), lambda_sq=e2),
            sellmeier_e=Sellmeier(c0=2.4, terms=(), lambda_sq=e2),
            valid_range=(0.1, 10.0),
        )

    p1 = bp.qpm_period(poled(-0.004), lam)
    p2 = bp.qpm_period(poled(-0.008), lam)
    assert abs(p1 / p2 - 2.0) < 1e-3


def test_database_env_override(tmp_path, monkeypatch):
    doc = {
        "materials": {
            "toy": {
                "sellmeier_o": {"c0": 2.25, "terms": []},
                "sellmeier_e": {"c0": 2.25, "terms": []},
                "valid_range": [0.2, 2.0],
            }
        }
    }
    path = tmp_path / "mats.json"
    path.write_text(json.dumps(doc, sort_keys=True))
    monkeypatch.setenv("BIPHOTON_MATERIALS_PATH", str(path))
    db = bp.load_database()
    assert sorted(db) == ["TOY"]
    assert abs(bp.refractive_index(db["TOY"], _ray(Pol.ORDINARY), 0.8) - 1.5) < 1e-14


def test_database_requires_materials_key(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{}")
    with pytest.raises(bp.ConfigError):
        bp.load_database(str(path))


def test_unknown_material_rejected(db):
    with pytest.raises(bp.ConfigError):
        bp.get_material("unobtainium", db)
    assert bp.get_material("bbo", db) is db["BBO"]
