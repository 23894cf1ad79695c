import numpy as np
import pytest

imrec = pytest.importorskip("imrec")


def test_noise_and_metrics():
    clean = imrec.phantom("blocks", 64)
    assert clean.shape == (64, 64)
    noisy = imrec.add_noise(clean, 10.0, seed=3)
    again = imrec.add_noise(clean, 10.0, seed=3)
    assert np.array_equal(noisy, again)
    sigma = imrec.noise_sigma(clean, 10.0)
    assert 0.8 * sigma < imrec.misfit(noisy, clean) < 1.2 * sigma
    assert np.isinf(imrec.psnr(clean, clean))


def test_psf_unsharp_alpha_zero():
    k = imrec.psf("unsharp:0")
    assert np.allclose(k, [[0, -1, 0], [-1, 5, -1], [0, -1, 0]])


def test_denoise_improves_psnr():
    clean = imrec.phantom("blocks", 64)
    noisy = imrec.add_noise(clean, 10.0, seed=1)
    report = imrec.denoise(noisy, policy="lsd", tol=1e-3)
    assert report["stages"][0]["name"] == "denoise"
    assert report["iterations"] == len(report["stages"][0]["tau"])
    assert imrec.psnr(report["output"], clean) > imrec.psnr(noisy, clean) + 3.0


def test_hybrid_and_restore_report_stages():
    clean = imrec.phantom("blocks", 64)
    noisy = imrec.add_noise(clean, 10.0, seed=2)
    hybrid = imrec.denoise_hybrid(noisy)
    assert [s["name"] for s in hybrid["stages"]] == ["denoise", "irls"]
    assert hybrid["beta"] > 0.0
    blurred = imrec.add_noise(imrec.blur(clean, "gaussian:7:1"), 5.0, seed=2)
    split = imrec.restore(blurred, "gaussian:7:1", 5e-4)
    assert [s["name"] for s in split["stages"]] == ["denoise", "deblur", "sharpen"]
    assert split["stages"][2]["iterations"] == 10


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        imrec.denoise(np.zeros((4, 5)))
    with pytest.raises(ValueError):
        imrec.deblur(imrec.phantom("blocks", 32), "motion:5:0", -1.0)
    with pytest.raises(ValueError):
        imrec.psf("box:3")


def test_image_round_trip(tmp_path):
    m = np.arange(16, dtype=float).reshape(4, 4) * 10
    path = str(tmp_path / "x.pgm")
    imrec.write_image(m, path)
    assert np.array_equal(imrec.read_image(path), m)
