"""Material constants, field geometry, presets."""

import math

import pytest

from fmrbound.params import (
    GAMMA_PER_G,
    PRESET_COUNT,
    FieldDirection,
    MaterialParams,
    load_preset,
)

# closed-form anchors for the default material, computed independently
# and frozen: gamma = 2.00 * 8.79410e6, m_s = 6400 / (4*pi),
# omega/gamma = 2*pi*9.243e9 / gamma
GAMMA_DEFAULT = 17588200.0
MS_DEFAULT = 509.29581789406507
OMEGA_OVER_GAMMA = 3301.9570959086727


def test_default_material_frozen_constants():
    p = MaterialParams()
    assert p.gamma == GAMMA_DEFAULT
    assert p.m_s == MS_DEFAULT
    assert p.target_sq == OMEGA_OVER_GAMMA * OMEGA_OVER_GAMMA
    assert math.isclose(math.sqrt(p.target_sq), OMEGA_OVER_GAMMA, rel_tol=1e-15)


def test_aniso_a_folds_shape_and_uniaxial_terms():
    p = MaterialParams(k_u=1000.0)
    assert math.isclose(
        p.aniso_a, math.pi * MS_DEFAULT**2 + 1000.0, rel_tol=1e-15
    )
    off = MaterialParams(k_u=1000.0, demag_factor=0.0)
    assert off.aniso_a == 1000.0


def test_gamma_scales_with_g():
    assert MaterialParams(g=1.5).gamma == 1.5 * GAMMA_PER_G


@pytest.mark.parametrize(
    "kwargs",
    [
        {"g": 0.0},
        {"g": -2.0},
        {"g": math.inf},
        {"four_pi_ms": 0.0},
        {"four_pi_ms": -1.0},
        {"omega_exp": 0.0},
        {"demag_factor": -0.1},
        {"demag_factor": 1.1},
        {"k_u": math.nan},
        {"k_4": math.inf},
    ],
)
def test_material_validation(kwargs):
    with pytest.raises(ValueError):
        MaterialParams(**kwargs)


def test_direction_angles_validated():
    with pytest.raises(ValueError):
        FieldDirection(-0.1)
    with pytest.raises(ValueError):
        FieldDirection(math.pi + 0.1)
    with pytest.raises(ValueError):
        FieldDirection(1.0, 2.0 * math.pi)
    FieldDirection(0.0)
    FieldDirection(math.pi, 0.0)


def test_direction_unit_vectors():
    assert FieldDirection(0.0).unit() == (0.0, 0.0, 1.0)
    hx, hy, hz = FieldDirection(0.5 * math.pi, 0.0).unit()
    assert hx == 1.0 and hy == 0.0 and abs(hz) < 1e-16
    hx, hy, hz = FieldDirection(0.5 * math.pi, 0.5 * math.pi).unit()
    assert abs(hx) < 1e-16 and hy == 1.0


def test_direction_unit_norm(rng):
    for _ in range(100):
        d = FieldDirection(rng.uniform(0.0, math.pi), rng.uniform(0.0, 6.28))
        assert math.isclose(sum(c * c for c in d.unit()), 1.0, rel_tol=1e-14)


def test_presets_load_and_first_matches_defaults():
    assert PRESET_COUNT == 12
    base = MaterialParams()
    one = load_preset(1)
    assert one.k_u == base.k_u == 0.0 and one.k_4 == base.k_4 == 0.0
    assert one.g == base.g and one.four_pi_ms == base.four_pi_ms
    for i in range(1, PRESET_COUNT + 1):
        p = load_preset(i)
        assert p.g == 2.00 and p.four_pi_ms == 6400.0


def test_preset_overrides_win():
    p = load_preset(4, k_4=0.0)
    assert p.k_4 == 0.0 and p.k_u == load_preset(4).k_u


def test_unknown_preset_raises():
    with pytest.raises(KeyError):
        load_preset(0)
    with pytest.raises(KeyError):
        load_preset(13)
