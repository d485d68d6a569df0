import numpy as np
import pytest

from noiseshape import ConfigError, DualFrame, Frame, generate_frame, hinv_dual, TransferOperator
from noiseshape.csvio import (
    format_value,
    read_dual_csv,
    read_frame_csv,
    read_table,
    write_dual_csv,
    write_frame_csv,
    write_table,
)


class TestFormatValue:
    def test_frozen_cases(self):
        assert format_value(0.3) == "0.29999999999999999"
        assert format_value(1.0) == "1"
        assert format_value(True) == "true"
        assert format_value(False) == "false"
        assert format_value(None) == ""
        assert format_value(42) == "42"
        assert format_value("sd") == "sd"

    def test_floats_roundtrip_exactly(self):
        rng = np.random.default_rng(0)
        vals = rng.standard_normal(500) * 10.0 ** rng.integers(-20, 20, size=500)
        for v in vals:
            assert float(format_value(float(v))) == float(v)


class TestTable:
    def test_roundtrip(self, tmp_path):
        path = tmp_path / "t.csv"
        write_table(path, [("format", "x-v1"), ("n", 2)], ["a", "b"],
                    [[1, 2.5], [None, True]])
        meta, header, rows = read_table(path)
        assert meta["format"] == "x-v1"
        assert meta["n"] == "2"
        assert header == ["a", "b"]
        assert rows == [["1", "2.5"], ["", "true"]]

    def test_headerless(self, tmp_path):
        path = tmp_path / "t.csv"
        write_table(path, [], None, [[1.0]])
        meta, header, rows = read_table(path, has_header=False)
        assert header is None
        assert rows == [["1"]]

    def test_newlines_are_unix(self, tmp_path):
        path = tmp_path / "t.csv"
        write_table(path, [("k", "v")], ["c"], [[1]])
        raw = path.read_bytes()
        assert b"\r" not in raw
        assert raw == b"# k=v\nc\n1\n"


class TestFrameCsv:
    def test_roundtrip_exact(self, tmp_path):
        path = tmp_path / "frame.csv"
        frame = generate_frame("gaussian", 6, 2, seed=9)
        write_frame_csv(path, frame)
        first = path.read_text().splitlines()[0]
        assert first == "# frame kind=gaussian m=6 k=2 seed=9"
        back = read_frame_csv(path)
        assert np.array_equal(back.matrix, frame.matrix)
        assert back.kind == "gaussian"
        assert back.seed == 9

    def test_shape_mismatch_rejected(self, tmp_path):
        path = tmp_path / "frame.csv"
        path.write_text("# frame kind=custom m=3 k=2 seed=0\n1,0\n0,1\n")
        with pytest.raises(ConfigError):
            read_frame_csv(path)

    def test_missing_metadata_rejected(self, tmp_path):
        path = tmp_path / "frame.csv"
        path.write_text("1,0\n0,1\n")
        with pytest.raises(ConfigError):
            read_frame_csv(path)

    def test_bad_row_rejected(self, tmp_path):
        path = tmp_path / "frame.csv"
        path.write_text("# frame kind=custom m=2 k=2 seed=0\n1,0\nx,1\n")
        with pytest.raises(ConfigError):
            read_frame_csv(path)


class TestDualCsv:
    def test_roundtrip(self, tmp_path):
        frame = generate_frame("gaussian", 8, 2, seed=3)
        dual = hinv_dual(frame, TransferOperator.sigma_delta(1, 8))
        path = tmp_path / "dual.csv"
        write_dual_csv(path, dual)
        first = path.read_text().splitlines()[0]
        assert first == "# dual kind=hinv:r=1 m=8 k=2"
        back = read_dual_csv(path)
        assert np.array_equal(back.matrix, dual.matrix)
        assert back.kind == "hinv:r=1"

    def test_rows_are_dual_vectors(self, tmp_path):
        dual = DualFrame(matrix=np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]), kind="custom")
        path = tmp_path / "dual.csv"
        write_dual_csv(path, dual)
        lines = path.read_text().splitlines()
        assert lines[1] == "1,4"
        assert lines[2] == "2,5"
        assert lines[3] == "3,6"
