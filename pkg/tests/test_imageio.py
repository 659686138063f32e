import numpy as np
import pytest
from PIL import Image

from labyrinth import read_image, read_pgm, to_grayscale, write_image, write_pgm
from labyrinth.errors import (
    InputFormatError,
    MalformedHeaderError,
    PGMError,
    TruncatedPayloadError,
    UnsupportedMaxvalError,
    UsageError,
)


def test_decode_minimal():
    img = read_pgm(b"P5 2 2 255\n" + bytes([0, 128, 255, 7]))
    assert img.dtype == np.uint8
    assert img.tolist() == [[0, 128], [255, 7]]


def test_canonical_header_size():
    data = write_pgm(np.zeros((1, 1), np.uint8))
    assert data[:-1] == b"P5\n1 1\n255\n"
    assert len(b"P5\n1 1\n255\n") == 11
    assert len(data) == 11 + 1 and data[-1] == 0


def test_canonical_bytes_roundtrip():
    img = np.arange(12, dtype=np.uint8).reshape(3, 4)
    data = write_pgm(img)
    assert data == b"P5\n4 3\n255\n" + bytes(range(12))
    assert write_pgm(read_pgm(data)) == data


def test_format_locality():
    a = np.zeros((5, 7), np.uint8)
    b = a.copy()
    b[3, 4] = 9
    da, db = write_pgm(a), write_pgm(b)
    diff = [i for i, (p, q) in enumerate(zip(da, db)) if p != q]
    assert len(da) == len(db) and diff == [len(b"P5\n7 5\n255\n") + 3 * 7 + 4]


def test_fuzzed_roundtrip():
    rng = np.random.default_rng(1)
    shapes = [(1, 1), (1, 257), (131, 1), (131, 257), (2, 2)] + [
        (int(rng.integers(1, 132)), int(rng.integers(1, 258))) for _ in range(40)
    ]
    for shape in shapes:
        img = rng.integers(0, 256, shape, dtype=np.uint8)
        assert (read_pgm(write_pgm(img)) == img).all()


def test_header_comments_and_whitespace():
    data = b"P5\n# made by hand\n  3\t# width\n2\r\n# maxval next\n255\n" + bytes(range(6))
    assert read_pgm(data).tolist() == [[0, 1, 2], [3, 4, 5]]


def test_trailing_bytes_ignored():
    assert read_pgm(b"P5 1 1 255 \x05extra").tolist() == [[5]]


@pytest.mark.parametrize("data,exc,offset", [
    (b"P2 1 1 255\n\x00", MalformedHeaderError, 0),
    (b"", MalformedHeaderError, 0),
    (b"P5x 1 1 255\n\x00", MalformedHeaderError, 2),
    (b"P5 a 1 255\n\x00", MalformedHeaderError, 3),
    (b"P5 0 1 255\n", MalformedHeaderError, 3),
    (b"P5 1 0 255\n", MalformedHeaderError, 5),
    (b"P5 1 1", MalformedHeaderError, 6),
    (b"P5 1 1 65535\n\x00\x00", UnsupportedMaxvalError, 7),
    (b"P5 1 1 15\n\x00", UnsupportedMaxvalError, 7),
    (b"P5 1 1 255", TruncatedPayloadError, 10),
    (b"P5 1 1 255x\x00", MalformedHeaderError, 10),
    (b"P5 2 2 255\n\x00\x01\x02", TruncatedPayloadError, 14),
])
def test_decode_errors(data, exc, offset):
    with pytest.raises(exc) as info:
        read_pgm(data)
    assert info.value.offset == offset
    assert isinstance(info.value, PGMError) and isinstance(info.value, InputFormatError)
    assert f"offset {offset}" in str(info.value)


@pytest.mark.parametrize("rgb,gray", [((255, 255, 255), 255), ((0, 0, 0), 0), ((255, 0, 0), 76),
                                      ((0, 0, 255), 29), ((0, 255, 0), 150), ((10, 20, 30), 18)])
def test_to_grayscale(rgb, gray):
    r, g, b = rgb
    assert round(0.299 * r + 0.587 * g + 0.114 * b) == gray
    assert to_grayscale(np.array([[rgb]], np.uint8)).tolist() == [[gray]]


def test_to_grayscale_rejects_non_rgb():
    with pytest.raises(UsageError):
        to_grayscale(np.zeros((2, 2, 4), np.uint8))


def test_pgm_file_roundtrip(tmp_path):
    img = np.random.default_rng(3).integers(0, 256, (17, 23), dtype=np.uint8)
    path = tmp_path / "a.pgm"
    write_image(path, img)
    assert path.read_bytes() == write_pgm(img)
    assert (read_image(path) == img).all()


def test_png_gray_roundtrip(tmp_path):
    img = np.random.default_rng(4).integers(0, 256, (9, 31), dtype=np.uint8)
    path = tmp_path / "a.png"
    write_image(path, img)
    assert (read_image(path) == img).all()


def test_png_rgb_is_converted(tmp_path):
    rgb = np.zeros((2, 3, 3), np.uint8)
    rgb[0, 0] = (255, 0, 0)
    rgb[1, 2] = (0, 0, 255)
    path = tmp_path / "c.png"
    Image.fromarray(rgb).save(path)
    gray = read_image(path)
    assert gray[0, 0] == 76 and gray[1, 2] == 29 and gray[0, 1] == 0


def test_png_16bit_rejected(tmp_path):
    path = tmp_path / "deep.png"
    Image.fromarray(np.full((2, 2), 40000, np.uint16)).save(path)
    with pytest.raises(InputFormatError):
        read_image(path)


def test_corrupt_png(tmp_path):
    path = tmp_path / "bad.png"
    path.write_bytes(b"\x89PNG\r\n\x1a\nnot really")
    with pytest.raises(InputFormatError):
        read_image(path)


def test_unknown_extension(tmp_path):
    with pytest.raises(UsageError):
        write_image(tmp_path / "a.jpg", np.zeros((2, 2), np.uint8))
    with pytest.raises(UsageError):
        read_image(tmp_path / "a.bmp")
