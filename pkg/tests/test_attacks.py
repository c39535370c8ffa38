import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from dqzw import synthetic
from dqzw.attacks import KINDS, AttackSpec, apply_attack, default_suite, load_suite
from dqzw.errors import BadParameters


@pytest.fixture
def img():
    return synthetic.carrier(32, 1)


def test_pixel_edit_changes_one_byte(img):
    out = apply_attack(img, AttackSpec("pixel_edit"))
    diff = np.argwhere(out != img)
    assert diff.tolist() == [[0, 0, 0]]
    assert abs(int(out[0, 0, 0]) - int(img[0, 0, 0])) == 1


def test_pixel_edit_flips_at_range_edge():
    white = np.full((4, 4, 3), 255, np.uint8)
    out = apply_attack(white, AttackSpec("pixel", {"delta": 1}))
    assert out[0, 0, 0] == 254
    out = apply_attack(white, AttackSpec("pixel", {"x": 2, "y": 1, "channel": 2, "value": 7}))
    assert out[2, 1, 2] == 7 and np.count_nonzero(out != white) == 1
    with pytest.raises(BadParameters):
        apply_attack(white, AttackSpec("pixel", {"x": 9}))


def test_zero_variance_noise_is_identity(img):
    out = apply_attack(img, AttackSpec("gaussian_noise", {"variance": 0.0}))
    np.testing.assert_array_equal(out, img)


def test_noise_seeding(img):
    a = apply_attack(img, AttackSpec("gaussian", seed=3))
    b = apply_attack(img, AttackSpec("gaussian", seed=3))
    c = apply_attack(img, AttackSpec("gaussian", seed=4))
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_crop_zeroes_centre(img):
    out = apply_attack(img, AttackSpec("center_crop", {"fraction": 0.25}))
    assert np.all(out[8:24, 8:24] == 0)
    np.testing.assert_array_equal(out[:8], img[:8])


def test_brighten_saturates():
    x = np.array([[[0, 240, 100]]], np.uint8)
    np.testing.assert_array_equal(apply_attack(x, AttackSpec("brighten")), [[[30, 255, 130]]])


def test_rotate_and_jpeg_change_image(img):
    for kind in ("rotate", "jpeg_compress"):
        out = apply_attack(img, AttackSpec(kind))
        assert out.shape == img.shape and out.dtype == np.uint8
        assert not np.array_equal(out, img)


@given(st.sampled_from(KINDS), st.integers(0, 1000))
def test_attacks_preserve_shape_and_range(kind, seed):
    img = synthetic.carrier(16, seed % 7)
    out = apply_attack(img, AttackSpec(kind, seed=seed))
    assert out.shape == img.shape and out.dtype == np.uint8


def test_spec_validation_and_round_trip():
    with pytest.raises(BadParameters):
        AttackSpec("blur")
    with pytest.raises(BadParameters):
        AttackSpec("jpeg", {"angle": 3})
    s = AttackSpec("rotate", {"angle": 5.0}, seed=2, name="rot5")
    assert AttackSpec.from_dict(s.to_dict()) == s
    assert s.label == "rot5"
    assert [a.kind for a in default_suite()] == list(KINDS[1:])


def test_load_suite(tmp_path):
    p = tmp_path / "suite.json"
    p.write_text(json.dumps({"attacks": [{"kind": "jpeg", "params": {"quality": 50}}, {"kind": "pixel"}]}))
    suite = load_suite(p)
    assert [a.kind for a in suite] == ["jpeg_compress", "pixel_edit"]
    p.write_text(json.dumps([{"kind": "none"}]))
    assert load_suite(p)[0].kind == "none"
    p.write_text(json.dumps([{"params": {}}]))
    with pytest.raises(BadParameters):
        load_suite(p)


@pytest.mark.parametrize(
    "spec",
    [
        AttackSpec("jpeg", {"quality": 0}),
        AttackSpec("crop", {"fraction": 1.0}),
        AttackSpec("gaussian", {"variance": -1.0}),
        AttackSpec("brighten", {"delta": 1.5}),
        AttackSpec("pixel", {"delta": 0}),
    ],
)
def test_bad_parameters(img, spec):
    with pytest.raises(BadParameters):
        apply_attack(img, spec)
