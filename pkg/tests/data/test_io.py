import numpy as np
import pytest

from dehazer.exceptions import (
    DimensionError,
    ImageDepthError,
    ImageFormatError,
    ImageHeaderError,
    ImagePayloadError,
)
from dehazer.data import decode_ppm, encode_ppm, load_image, load_map, save_image, save_map


_TWO_BY_TWO = b"P6\n# written by hand\n2 2\n255\n" + bytes(
    [255, 0, 0, 0, 255, 0, 0, 0, 255, 255, 255, 255]
)


def test_decode_hand_written_ppm():
    img = decode_ppm(_TWO_BY_TWO)

    assert img.shape == (2, 2, 3)
    assert img.dtype == np.float32
    np.testing.assert_array_equal(img[0, 0], [1.0, 0.0, 0.0])
    np.testing.assert_array_equal(img[0, 1], [0.0, 1.0, 0.0])
    np.testing.assert_array_equal(img[1, 0], [0.0, 0.0, 1.0])
    np.testing.assert_array_equal(img[1, 1], [1.0, 1.0, 1.0])


def test_encode_matches_the_header_layout():
    data = encode_ppm(decode_ppm(_TWO_BY_TWO))

    assert data.startswith(b"P6\n2 2\n255\n")
    assert data[len(b"P6\n2 2\n255\n") :] == _TWO_BY_TWO[-12:]


def test_decode_scales_by_maxval():
    img = decode_ppm(b"P6 1 1 15\n" + bytes([15, 5, 0]))

    np.testing.assert_allclose(img[0, 0], [1.0, 1 / 3, 0.0], atol=1e-7)


@pytest.mark.parametrize(
    "data",
    [
        b"P3\n1 1\n255\n" + bytes(3),
        b"P6\nx 1\n255\n" + bytes(3),
        b"P6\n0 1\n255\n",
        b"P6\n1 1\n0\n" + bytes(3),
        b"P6\n1 1\n255",
    ],
)
def test_decode_rejects_bad_headers(data: bytes):
    with pytest.raises(ImageHeaderError):
        decode_ppm(data)


def test_decode_rejects_sixteen_bit():
    with pytest.raises(ImageDepthError):
        decode_ppm(b"P6\n1 1\n65535\n" + bytes(6))


def test_decode_rejects_truncated_payload():
    with pytest.raises(ImagePayloadError):
        decode_ppm(_TWO_BY_TWO[:-1])


def test_save_then_load_within_quantization(tmp_path):
    img = np.random.default_rng(0).random((5, 7, 3)).astype(np.float32)
    path = tmp_path / "image.ppm"

    save_image(img, path)
    loaded = load_image(path)

    assert loaded.shape == (5, 7, 3)
    assert np.max(np.abs(loaded - img)) <= 0.5 / 255 + 1e-7


def test_save_clamps_out_of_range_values(tmp_path):
    path = tmp_path / "image.ppm"

    save_image(np.array([[[-0.5, 0.5, 1.5]]]), path)

    np.testing.assert_allclose(load_image(path)[0, 0], [0.0, 128 / 255, 1.0], atol=1e-7)


def test_map_round_trip(tmp_path):
    t = np.linspace(0.0, 1.0, 12).reshape(3, 4)
    path = tmp_path / "t.ppm"

    save_map(t, path)

    np.testing.assert_allclose(load_map(path), t, atol=0.5 / 255 + 1e-6)


def test_save_map_rejects_images(tmp_path):
    with pytest.raises(DimensionError):
        save_map(np.zeros((2, 2, 3)), tmp_path / "t.ppm")


@pytest.mark.parametrize("name", ["image.jpg", "image.bmp", "image"])
def test_unknown_suffix(tmp_path, name: str):
    with pytest.raises(ImageFormatError):
        save_image(np.zeros((1, 1, 3)), tmp_path / name)
    with pytest.raises(ImageFormatError):
        load_image(tmp_path / name)


def test_missing_file(tmp_path):
    with pytest.raises(ImageFormatError):
        load_image(tmp_path / "absent.ppm")
