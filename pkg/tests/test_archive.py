import numpy as np
import pytest

from helpers import rand_points
from temporal_alpha import boxtree
from temporal_alpha.archive import read_archive, write_archive
from temporal_alpha.staircase import temporal_alpha_shape


@pytest.fixture(scope="module")
def shape():
    return temporal_alpha_shape(rand_points(25, 200))


class TestRoundTrip:
    def test_arrays_bit_exact(self, shape, tmp_path):
        tree = boxtree.build(shape)
        path = tmp_path / "a.tash"
        write_archive(path, "demo", shape, tree, stride=5)
        arc = read_archive(path)
        assert arc.name == "demo"
        assert arc.stride == 5
        assert arc.n == shape.n
        assert arc.cuboids.record_count == shape.record_count
        for col in shape.COLUMNS:
            assert np.array_equal(getattr(arc.cuboids, col), getattr(shape, col))
        assert np.array_equal(arc.cuboids.xs, shape.xs)
        assert np.array_equal(arc.cuboids.ys, shape.ys)

    def test_stab_results_bit_exact(self, shape, tmp_path):
        tree = boxtree.build(shape)
        path = tmp_path / "b.tash"
        write_archive(path, "demo", shape, tree)
        arc = read_archive(path)
        rng = np.random.default_rng(7)
        for _ in range(100):
            i = int(rng.integers(1, shape.n))
            j = int(rng.integers(i + 1, shape.n + 1))
            alpha = float(rng.uniform(0.01, 3.0))
            assert arc.tree.stab(i, j, alpha).tolist() == tree.stab(i, j, alpha).tolist()

    def test_without_index(self, shape, tmp_path):
        path = tmp_path / "c.tash"
        write_archive(path, "noidx", shape)
        arc = read_archive(path)
        assert arc.tree is None
        assert len(arc.cuboids) == len(shape)


class TestIntegrity:
    def test_bad_magic_rejected(self, tmp_path):
        p = tmp_path / "x.tash"
        p.write_bytes(b"NOPE" + b"\x00" * 64)
        with pytest.raises(ValueError, match="not a temporal alpha-shape archive"):
            read_archive(p)

    def test_corrupt_payload_rejected(self, shape, tmp_path):
        p = tmp_path / "d.tash"
        write_archive(p, "demo", shape)
        raw = bytearray(p.read_bytes())
        raw[-3] ^= 0xFF
        p.write_bytes(bytes(raw))
        with pytest.raises(ValueError, match="checksum"):
            read_archive(p)

    def test_wrong_version_rejected(self, shape, tmp_path):
        p = tmp_path / "e.tash"
        write_archive(p, "demo", shape)
        raw = bytearray(p.read_bytes())
        raw[4] = 99
        p.write_bytes(bytes(raw))
        with pytest.raises(ValueError, match="version"):
            read_archive(p)
