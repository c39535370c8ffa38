import json
import math

import numpy as np
import pytest

from dqzw import synthetic
from dqzw.attacks import AttackSpec, default_suite
from dqzw.errors import DimensionMismatch, MethodError, NotSquare
from dqzw.factor import dqlu, dqqr, dqsvd, relative_residuals
from dqzw.formats import KeyFile, deserialize_zw, serialize_zw
from dqzw.imaging import encode_pair, fft_feature
from dqzw.arnold import ArnoldKey, arnold_scramble
from dqzw.pipeline import (
    GenerateConfig,
    generate,
    normalize_method,
    recover_watermark,
    run_experiment,
    summarize,
    verify,
    write_report,
)

METHODS = ("DQLU", "DQQR", "DQSVD")


@pytest.fixture(scope="module")
def pair():
    return synthetic.carrier(32, 2), synthetic.watermark(32)


@pytest.mark.parametrize("method", METHODS)
def test_no_attack_recovery_is_exact(pair, method):
    carrier, wm = pair
    zw, key = generate(carrier, wm, method)
    rep = verify(carrier, zw, key, wm)
    assert rep.authentic and rep.ber == 0.0 and rep.nc == 1.0 and rep.ssim == 1.0 and math.isinf(rep.psnr)
    rec = recover_watermark(carrier, zw, key)
    np.testing.assert_array_equal(rec.watermark, wm)
    assert rec.real_residual < 1e-6


@pytest.mark.parametrize("method", METHODS)
def test_survives_serialization(pair, method):
    carrier, wm = pair
    zw, key = generate(carrier, wm, method)
    zw2 = deserialize_zw(serialize_zw(zw))
    key2 = KeyFile.loads(key.dumps())
    assert verify(carrier, zw2, key2, wm).ber == 0.0


@pytest.mark.parametrize("method", METHODS)
def test_single_pixel_edit_is_detected(pair, method):
    carrier, wm = pair
    zw, key = generate(carrier, wm, method)
    edited = carrier.copy()
    edited[5, 7, 1] ^= 1
    assert not verify(edited, zw, key, wm).authentic


def test_black_watermark_gives_zero_payload(pair):
    carrier, _ = pair
    black = np.zeros_like(carrier)
    zw, _ = generate(carrier, black, "lu")
    assert zw.factors["L_i"].fro_norm() == 0.0
    assert zw.factors["U_i"].fro_norm() == 0.0


def test_factor_identities_on_16():
    carrier = synthetic.carrier(16, 5)
    wm = synthetic.watermark(16)
    A = encode_pair(fft_feature(carrier), arnold_scramble(wm, ArnoldKey(k=10, N=16)))
    for fn in (dqlu, dqqr, dqsvd):
        s, i = relative_residuals(A, fn(A).reconstruct())
        assert s <= 1e-8 and i <= 1e-8


def test_resize_is_recorded_and_applied():
    carrier = synthetic.carrier(40, 1)
    wm = synthetic.watermark(24)
    zw, key = generate(carrier, wm, "qr", GenerateConfig(size=32))
    assert key.dims == (32, 32) and key.resize["carrier_original"] == [40, 40]
    assert verify(carrier, zw, key, wm).ber == 0.0


def test_errors(pair):
    carrier, wm = pair
    with pytest.raises(NotSquare):
        generate(carrier[:, :30], wm, "lu")
    with pytest.raises(ValueError):
        normalize_method("cholesky")
    zw, key = generate(carrier, wm, "lu")
    with pytest.raises(DimensionMismatch):
        verify(carrier[:16, :16], zw, key, wm)
    other = generate(carrier, wm, "qr")[1]
    with pytest.raises(DimensionMismatch):
        verify(carrier, zw, other, wm)
    with pytest.raises(MethodError) as exc:
        generate(np.zeros_like(carrier), wm, "lu")
    assert exc.value.method == "DQLU"


def test_svd_key_carries_rank(pair):
    carrier, wm = pair
    _, key = generate(carrier, wm, "svd")
    assert key.rank == 32 and key.W1 is None and key.W2 is None


def test_similar_image_is_rejected(pair):
    carrier, wm = pair
    zw, key = generate(carrier, wm, "lu")
    other = synthetic.carrier(32, 9)
    assert not verify(other, zw, key, wm).authentic


def test_experiment_counts_and_order(tmp_path):
    corpus = [("a", synthetic.carrier(16, 0)), ("b", synthetic.carrier(16, 1))]
    wm = synthetic.watermark(16)
    rows = run_experiment(corpus, wm, default_suite(), METHODS)
    assert len(rows) == 2 * 3 * 6
    assert [(r["image"], r["method"], r["attack"]) for r in rows[:7]] == [
        ("a", "DQLU", a.kind) for a in default_suite()
    ] + [("a", "DQQR", "gaussian_noise")]
    parallel = run_experiment(corpus, wm, default_suite(), METHODS, workers=4)
    assert [json.dumps(r, sort_keys=True) for r in parallel] == [json.dumps(r, sort_keys=True) for r in rows]
    csv_path, json_path = write_report(rows, tmp_path)
    assert len(csv_path.read_text().strip().splitlines()) == 1 + 36
    assert len(json.loads(json_path.read_text())) == 36
    assert "pixel_edit" in summarize(rows)


def test_empty_suite_gives_identity_rows():
    corpus = {"a": synthetic.carrier(16, 0)}
    rows = run_experiment(corpus, synthetic.watermark(16), [], METHODS)
    assert len(rows) == 3
    for r in rows:
        assert r["attack"] == "none" and r["ber"] == 0.0 and r["psnr"] == "inf" and r["authentic"]


def test_experiment_records_cell_errors():
    corpus = [("zero", np.zeros((16, 16, 3), np.uint8)), ("ok", synthetic.carrier(16, 0))]
    rows = run_experiment(corpus, synthetic.watermark(16), [AttackSpec("none")], ["lu"])
    assert rows[0]["error"] and rows[0]["ber"] is None
    assert rows[1]["error"] == "" and rows[1]["ber"] == 0.0
    assert "error" in summarize(rows)
