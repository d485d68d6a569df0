import shutil
import subprocess

import numpy as np
import pytest

from nsplot.cli import main

from .test_figures import spectrum_lines, unit_circle
from .test_tables import write_sweep

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def write_decay(tmp_path, kind="frame-decay", x="m"):
    rows = [f"{v},sd,{2.0 * v ** -2.0:.17g},false" for v in (8, 16, 32, 64)]
    return write_sweep(tmp_path / "sweep.csv", rows,
                       header=f"{x},scheme,err2,overloaded",
                       meta={"format": "experiment-v1", "kind": kind})


def write_vectors(path, tag, mat, kind="roots-of-unity"):
    lines = [f"# {tag} kind={kind} m={mat.shape[0]} k={mat.shape[1]} seed=0"]
    lines.extend(",".join(f"{v:.17g}" for v in row) for row in mat)
    path.write_text("\n".join(lines) + "\n")
    return path


class TestDecayCommand:
    def test_kind_default_axis(self, tmp_path, capsys):
        src = write_decay(tmp_path)
        out = tmp_path / "d.svg"
        assert main(["decay", "--in", str(src), "--out", str(out)]) == 0
        assert out.exists()
        assert "slope=-2" in capsys.readouterr().out

    def test_rerun_byte_identical(self, tmp_path):
        src = write_decay(tmp_path)
        out = tmp_path / "d.svg"
        main(["decay", "--in", str(src), "--out", str(out)])
        first = out.read_bytes()
        main(["decay", "--in", str(src), "--out", str(out)])
        assert out.read_bytes() == first

    def test_beta_decay_defaults_linear_lam(self, tmp_path):
        src = write_decay(tmp_path, kind="beta-decay", x="lam")
        out = tmp_path / "b.svg"
        assert main(["decay", "--in", str(src), "--out", str(out)]) == 0
        assert "slope =" in out.read_text()

    def test_unknown_kind_needs_x(self, tmp_path, capsys):
        src = write_decay(tmp_path, kind="mystery")
        out = tmp_path / "m.svg"
        assert main(["decay", "--in", str(src), "--out", str(out)]) == 2
        err = capsys.readouterr().err
        assert "error:" in err and "--x" in err
        assert not out.exists()

    def test_explicit_x_on_unknown_kind(self, tmp_path):
        src = write_decay(tmp_path, kind="mystery")
        out = tmp_path / "m.svg"
        assert main(["decay", "--in", str(src), "--out", str(out), "--x", "m"]) == 0

    def test_where_filter(self, tmp_path, capsys):
        rows = [f"{v},sd,{v ** -1.0:.17g},false" for v in (8, 16)]
        rows += [f"{v},msq,1.0,false" for v in (8, 16)]
        src = write_sweep(tmp_path / "s.csv", rows)
        out = tmp_path / "w.svg"
        assert main(["decay", "--in", str(src), "--out", str(out),
                     "--where", "scheme=msq"]) == 0
        printed = capsys.readouterr().out
        slope = float(printed.split("slope=")[1].split()[0].rstrip(","))
        assert abs(slope) < 1e-12

    def test_bad_where_clause(self, tmp_path, capsys):
        src = write_decay(tmp_path)
        assert main(["decay", "--in", str(src), "--out",
                     str(tmp_path / "x.svg"), "--where", "scheme"]) == 2
        assert "column=value" in capsys.readouterr().err

    def test_x_scale_override(self, tmp_path):
        src = write_decay(tmp_path)
        out = tmp_path / "lin.svg"
        assert main(["decay", "--in", str(src), "--out", str(out),
                     "--x-scale", "linear"]) == 0

    def test_missing_column_exits_2(self, tmp_path, capsys):
        src = write_decay(tmp_path)
        out = tmp_path / "d.svg"
        code = main(["decay", "--in", str(src), "--out", str(out), "--y", "energy"])
        assert code == 2
        assert "no column 'energy'" in capsys.readouterr().err
        assert not out.exists()

    def test_missing_input_exits_2(self, tmp_path, capsys):
        code = main(["decay", "--in", str(tmp_path / "gone.csv"),
                     "--out", str(tmp_path / "d.svg")])
        assert code == 2
        assert "does not exist" in capsys.readouterr().err

    def test_png_output(self, tmp_path):
        src = write_decay(tmp_path)
        out = tmp_path / "d.png"
        assert main(["decay", "--in", str(src), "--out", str(out)]) == 0
        assert out.read_bytes()[:8] == PNG_MAGIC

    def test_format_flag_wins_over_suffix(self, tmp_path):
        src = write_decay(tmp_path)
        out = tmp_path / "d.img"
        assert main(["decay", "--in", str(src), "--out", str(out),
                     "--format", "png"]) == 0
        assert out.read_bytes()[:8] == PNG_MAGIC


class TestSpectrumCommand:
    def test_writes_svg(self, tmp_path):
        src = tmp_path / "s.csv"
        src.write_text(spectrum_lines(band=2))
        out = tmp_path / "s.svg"
        assert main(["spectrum", "--in", str(src), "--out", str(out)]) == 0
        assert out.exists()

    def test_rerun_byte_identical(self, tmp_path):
        src = tmp_path / "s.csv"
        src.write_text(spectrum_lines(band=2))
        out = tmp_path / "s.svg"
        main(["spectrum", "--in", str(src), "--out", str(out)])
        first = out.read_bytes()
        main(["spectrum", "--in", str(src), "--out", str(out)])
        assert out.read_bytes() == first

    def test_missing_column_exits_2(self, tmp_path, capsys):
        src = tmp_path / "s.csv"
        src.write_text(spectrum_lines().replace("magnitude_msq", "other"))
        out = tmp_path / "s.svg"
        assert main(["spectrum", "--in", str(src), "--out", str(out)]) == 2
        assert "no column 'magnitude_msq'" in capsys.readouterr().err
        assert not out.exists()


class TestDualsCommand:
    def test_writes_svg_with_scale_note(self, tmp_path):
        frame = unit_circle(6)
        fp = write_vectors(tmp_path / "f.csv", "frame", frame)
        dp = write_vectors(tmp_path / "d.csv", "dual", frame / 3.0)
        out = tmp_path / "fig.svg"
        assert main(["duals", "--in", str(fp), "--dual", str(dp),
                     "--out", str(out), "--scale", "2.5"]) == 0
        assert "dual x2.5" in out.read_text()

    def test_frame_file_required_shape(self, tmp_path, capsys):
        mat = np.ones((4, 3))
        fp = write_vectors(tmp_path / "f.csv", "frame", mat, kind="custom")
        dp = write_vectors(tmp_path / "d.csv", "dual", mat, kind="custom")
        out = tmp_path / "fig.svg"
        assert main(["duals", "--in", str(fp), "--dual", str(dp),
                     "--out", str(out)]) == 2
        assert "m x 2" in capsys.readouterr().err
        assert not out.exists()

    def test_swapped_files_rejected(self, tmp_path, capsys):
        frame = unit_circle(4)
        fp = write_vectors(tmp_path / "f.csv", "frame", frame)
        assert main(["duals", "--in", str(fp), "--dual", str(fp),
                     "--out", str(tmp_path / "fig.svg")]) == 2
        assert "'# dual ...'" in capsys.readouterr().err


class TestConsoleScripts:
    def test_both_entry_points_installed(self):
        assert shutil.which("plot")
        assert shutil.which("nsplot")

    def test_subprocess_run(self, tmp_path):
        src = write_decay(tmp_path)
        out = tmp_path / "d.svg"
        proc = subprocess.run(
            ["nsplot", "decay", "--in", str(src), "--out", str(out)],
            capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        assert out.exists()
        assert "slope=" in proc.stdout
