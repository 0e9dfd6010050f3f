import math

import numpy as np
import pytest

import semcodec


def test_scene_is_deterministic():
    img_a, lab_a = semcodec.generate_scene(3, 0, 16, 32, 4)
    img_b, lab_b = semcodec.generate_scene(3, 0, 16, 32, 4)
    assert img_a.shape == (3, 16, 32)
    assert lab_a.shape == (16, 32)
    assert np.array_equal(img_a, img_b)
    assert lab_a.min() >= 1 and lab_a.max() <= 4


def test_encode_decode_round_trip():
    sys = semcodec.System.create(16, 32, 4, 4, 2)
    img, lab = semcodec.generate_scene(2, 1, 16, 32, 4)
    data = sys.encode(img, lab, [3, 3, 3, 3])
    r = semcodec.rate(data)
    assert r["payload_bits"] + r["label_bits"] + r["overhead_bits"] == 8 * len(data)
    assert r["psi"] == pytest.approx((r["payload_bits"] + r["label_bits"]) / (16 * 32))
    out, labels, corrupted = sys.decode(data)
    assert out.shape == img.shape
    assert np.array_equal(labels, lab)
    assert not corrupted
    assert 0.0 <= out.min() and out.max() <= 1.0
    noisy, _, _ = sys.decode(data, channel="awgn:60")
    assert np.array_equal(noisy, out)


def test_learned_levels_default(tmp_path):
    sys = semcodec.System.create(16, 32, 4, 4, 5)
    img, lab = semcodec.generate_scene(5, 0, 16, 32, 4)
    levels = sys.greedy_levels(img, lab)
    assert len(levels) == 4
    assert sys.encode(img, lab) == sys.encode(img, lab, levels)
    path = str(tmp_path / "sys.ck")
    sys.save(path)
    back = semcodec.System.load(path)
    assert back.stage == sys.stage
    assert back.encode(img, lab, levels) == sys.encode(img, lab, levels)


def test_metrics():
    img, lab = semcodec.generate_scene(7, 0, 16, 32, 4)
    assert semcodec.mean_iou(lab, lab, 4) == 1.0
    assert semcodec.psnr(img, img) == 99.0
    assert semcodec.ssim(img, img) == pytest.approx(1.0)
    assert semcodec.composite_loss(0.1, 0.2, 0.03) == pytest.approx(0.6)
    assert semcodec.bpsk_bit_error_rate(9.0) == pytest.approx(
        0.5 * math.erfc(math.sqrt(10 ** 0.9)))


def test_bd_metric():
    a = [(0.1, 0.30), (0.2, 0.42), (0.4, 0.51), (0.8, 0.58)]
    b = [(2 * r, q) for r, q in a]
    assert semcodec.bd_metric(a, b, "rate") == pytest.approx(100.0, abs=0.1)
    c = [(r, q + 0.05) for r, q in a]
    assert semcodec.bd_metric(a, c) == pytest.approx(0.05, abs=1e-6)
    with pytest.raises(ValueError):
        semcodec.bd_metric(a, b, "bogus")


def test_errors_surface_as_exceptions():
    sys = semcodec.System.create(16, 32, 4, 4, 2)
    with pytest.raises(RuntimeError):
        semcodec.rate(b"RLSC")
    img, lab = semcodec.generate_scene(2, 1, 16, 32, 4)
    with pytest.raises(ValueError):
        sys.encode(img[0], lab)
