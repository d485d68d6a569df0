import math

import numpy as np
import pytest

from nsplot import InputError, fit_medians, read_table, read_vectors


def write_sweep(path, rows, header="m,scheme,err2,overloaded", meta=None):
    lines = [f"# {k}={v}" for k, v in (meta or {"format": "experiment-v1",
                                                 "kind": "frame-decay"}).items()]
    lines.append(header)
    lines.extend(rows)
    path.write_text("\n".join(lines) + "\n")
    return path


class TestReadTable:
    def test_parses_metadata_header_rows(self, tmp_path):
        p = write_sweep(tmp_path / "t.csv",
                        ["0,sd,0.5,false", "1,sd,0.25,false"],
                        meta={"format": "experiment-v1", "kind": "frame-decay",
                              "grid": "32 64"})
        table = read_table(p)
        assert table.meta == {"format": "experiment-v1", "kind": "frame-decay",
                              "grid": "32 64"}
        assert table.header == ["m", "scheme", "err2", "overloaded"]
        assert table.rows == [["0", "sd", "0.5", "false"],
                              ["1", "sd", "0.25", "false"]]

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError, match="does not exist"):
            read_table(tmp_path / "nope.csv")

    def test_no_metadata_rejected(self, tmp_path):
        p = tmp_path / "raw.csv"
        p.write_text("a,b\n1,2\n")
        with pytest.raises(InputError, match="no metadata"):
            read_table(p)

    def test_header_only_rejected(self, tmp_path):
        p = tmp_path / "h.csv"
        p.write_text("# format=experiment-v1\n")
        with pytest.raises(InputError, match="no header"):
            read_table(p)

    def test_missing_column_names_it(self, tmp_path):
        p = write_sweep(tmp_path / "t.csv", ["32,sd,0.5,false"])
        table = read_table(p)
        with pytest.raises(InputError, match=r"no column 'nosuch'.*columns: m, scheme"):
            table.column("nosuch")

    def test_crlf_tolerated(self, tmp_path):
        p = tmp_path / "t.csv"
        p.write_text("# format=x\r\na,b\r\n1,2\r\n")
        table = read_table(p)
        assert table.rows == [["1", "2"]]


class TestReadVectors:
    def test_frame_file(self, tmp_path):
        p = tmp_path / "f.csv"
        p.write_text("# frame kind=roots-of-unity m=3 k=2 seed=0\n"
                     "1,0\n-0.5,0.25\n0,1\n")
        meta, mat = read_vectors(p, "frame")
        assert meta == {"kind": "roots-of-unity", "m": "3", "k": "2", "seed": "0"}
        assert mat.shape == (3, 2)
        assert mat[1, 1] == 0.25

    def test_dual_header_required(self, tmp_path):
        p = tmp_path / "f.csv"
        p.write_text("# frame kind=custom m=1 k=2 seed=0\n1,0\n")
        with pytest.raises(InputError, match="'# dual ...' metadata line"):
            read_vectors(p, "dual")

    def test_shape_mismatch(self, tmp_path):
        p = tmp_path / "f.csv"
        p.write_text("# frame kind=custom m=3 k=2 seed=0\n1,0\n0,1\n")
        with pytest.raises(InputError, match="claims 3x2"):
            read_vectors(p, "frame")

    def test_bad_numeric_row(self, tmp_path):
        p = tmp_path / "f.csv"
        p.write_text("# frame kind=custom m=1 k=2 seed=0\n1,oops\n")
        with pytest.raises(InputError, match="bad numeric row"):
            read_vectors(p, "frame")

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError, match="does not exist"):
            read_vectors(tmp_path / "gone.csv", "frame")


class TestFitMedians:
    def test_exact_power_law(self, tmp_path):
        rows = [f"{m},sd,{2.0 * m ** -2.0:.17g},false" for m in (8, 16, 32, 64)]
        table = read_table(write_sweep(tmp_path / "t.csv", rows))
        fit = fit_medians(table, "m", "err2")
        assert fit.log_x
        assert abs(fit.slope - (-2.0)) < 1e-12
        assert abs(fit.intercept - math.log10(2.0)) < 1e-12
        assert fit.points[0] == (8.0, 2.0 * 8 ** -2.0)

    def test_linear_x(self, tmp_path):
        rows = [f"{lam},sd,{10.0 ** (3.0 - 0.5 * lam):.17g},false"
                for lam in (2, 4, 6, 8)]
        table = read_table(write_sweep(tmp_path / "t.csv", rows))
        fit = fit_medians(table, "m", "err2", log_x=False)
        assert abs(fit.slope - (-0.5)) < 1e-12
        assert abs(fit.intercept - 3.0) < 1e-12

    def test_median_per_grid_point(self, tmp_path):
        rows = ["8,sd,1.0,false", "8,sd,100.0,false", "8,sd,10.0,false",
                "16,sd,10.0,false"]
        table = read_table(write_sweep(tmp_path / "t.csv", rows))
        fit = fit_medians(table, "m", "err2")
        assert fit.points == ((8.0, 10.0), (16.0, 10.0))
        assert abs(fit.slope) < 1e-12

    def test_overloaded_rows_dropped(self, tmp_path):
        rows = ["8,sd,1.0,false", "8,sd,1e30,true", "16,sd,0.25,false"]
        table = read_table(write_sweep(tmp_path / "t.csv", rows))
        fit = fit_medians(table, "m", "err2")
        assert fit.points == ((8.0, 1.0), (16.0, 0.25))

    def test_where_filter(self, tmp_path):
        rows = ["8,sd,1.0,false", "8,msq,5.0,false",
                "16,sd,0.5,false", "16,msq,5.0,false"]
        table = read_table(write_sweep(tmp_path / "t.csv", rows))
        sd = fit_medians(table, "m", "err2", where={"scheme": "sd"})
        msq = fit_medians(table, "m", "err2", where={"scheme": "msq"})
        assert sd.slope < -0.9
        assert abs(msq.slope) < 1e-12

    def test_empty_cells_skipped(self, tmp_path):
        rows = ["8,sd,1.0,false", "8,sd,,false", "16,sd,0.5,false"]
        table = read_table(write_sweep(tmp_path / "t.csv", rows))
        fit = fit_medians(table, "m", "err2")
        assert fit.points[0] == (8.0, 1.0)

    def test_too_few_grid_points(self, tmp_path):
        table = read_table(write_sweep(tmp_path / "t.csv", ["8,sd,1.0,false"]))
        with pytest.raises(InputError, match="at least 2 grid points"):
            fit_medians(table, "m", "err2")

    def test_missing_column_named(self, tmp_path):
        table = read_table(write_sweep(tmp_path / "t.csv", ["8,sd,1.0,false"]))
        with pytest.raises(InputError, match="no column 'energy'"):
            fit_medians(table, "m", "energy")

    def test_nonpositive_y_rejected(self, tmp_path):
        rows = ["8,sd,0.0,false", "16,sd,1.0,false"]
        table = read_table(write_sweep(tmp_path / "t.csv", rows))
        with pytest.raises(InputError, match="non-positive"):
            fit_medians(table, "m", "err2")

    def test_nonpositive_x_on_log_axis(self, tmp_path):
        rows = ["0,sd,1.0,false", "16,sd,0.5,false"]
        table = read_table(write_sweep(tmp_path / "t.csv", rows))
        with pytest.raises(InputError, match="positive on a log axis"):
            fit_medians(table, "m", "err2")
        fit = fit_medians(table, "m", "err2", log_x=False)
        assert fit.slope < 0

    def test_matches_numpy_reference(self, tmp_path):
        rng = np.random.default_rng(7)
        grid = (8, 16, 32, 64, 128)
        rows, med = [], []
        for m in grid:
            vals = np.exp(rng.normal(size=9)) * m ** -1.5
            rows.extend(f"{m},sd,{v:.17g},false" for v in vals)
            med.append(np.median(vals))
        table = read_table(write_sweep(tmp_path / "t.csv", rows))
        fit = fit_medians(table, "m", "err2")
        ref = np.polyfit(np.log10(grid), np.log10(med), 1)
        assert abs(fit.slope - ref[0]) < 1e-12
        assert abs(fit.intercept - ref[1]) < 1e-12
