import numpy as np
import pytest

from pba import PgmError, quantize, read_pgm, write_pgm


class TestQuantize:
    def test_round_half_to_even(self):
        img = np.array([[0.5, 1.5, 2.5, 3.5]])
        np.testing.assert_array_equal(quantize(img), [[0, 2, 2, 4]])

    def test_clipping(self):
        img = np.array([[-10.0, 300.0]])
        np.testing.assert_array_equal(quantize(img), [[0, 255]])


class TestBinary:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(0)
        img = rng.integers(0, 256, (13, 7)).astype(float)
        path = tmp_path / "img.pgm"
        write_pgm(path, img)
        loaded = read_pgm(path)
        np.testing.assert_array_equal(loaded, img)
        assert path.read_bytes().startswith(b"P5\n7 13\n255\n")

    def test_deterministic_bytes(self, tmp_path):
        img = np.random.default_rng(1).integers(0, 256, (9, 9)).astype(float)
        a, b = tmp_path / "a.pgm", tmp_path / "b.pgm"
        write_pgm(a, img)
        write_pgm(b, img)
        assert a.read_bytes() == b.read_bytes()

    def test_truncated_raster(self, tmp_path):
        path = tmp_path / "short.pgm"
        path.write_bytes(b"P5\n4 4\n255\n" + bytes(5))
        with pytest.raises(PgmError):
            read_pgm(path)


class TestPlain:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(2)
        img = rng.integers(0, 256, (6, 19)).astype(float)
        path = tmp_path / "img.pgm"
        write_pgm(path, img, binary=False)
        np.testing.assert_array_equal(read_pgm(path), img)
        assert path.read_text().startswith("P2\n19 6\n255\n")

    def test_line_length_limit(self, tmp_path):
        img = np.full((40, 40), 255.0)
        path = tmp_path / "img.pgm"
        write_pgm(path, img, binary=False)
        assert max(len(line) for line in path.read_text().splitlines()) <= 70

    def test_comments_and_whitespace(self, tmp_path):
        path = tmp_path / "odd.pgm"
        path.write_text("P2 # magic\n# a comment line\n 3\t2 #dims\n255\n1 2 3\n4 5 6\n")
        np.testing.assert_array_equal(read_pgm(path), [[1, 2, 3], [4, 5, 6]])

    def test_sample_overflow_rejected(self, tmp_path):
        path = tmp_path / "bad.pgm"
        path.write_text("P2\n2 1\n255\n12 300\n")
        with pytest.raises(PgmError):
            read_pgm(path)


class TestErrors:
    def test_wrong_magic(self, tmp_path):
        path = tmp_path / "p6.pgm"
        path.write_bytes(b"P6\n2 2\n255\n" + bytes(12))
        with pytest.raises(PgmError):
            read_pgm(path)

    def test_sixteen_bit_rejected(self, tmp_path):
        path = tmp_path / "deep.pgm"
        path.write_bytes(b"P5\n2 2\n65535\n" + bytes(8))
        with pytest.raises(PgmError):
            read_pgm(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            read_pgm(tmp_path / "nope.pgm")
