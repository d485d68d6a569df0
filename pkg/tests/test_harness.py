import math

import numpy as np
import pytest

from noiseshape import (
    ConfigError,
    ExperimentConfig,
    adc_spectrum_table,
    census_pass_rate,
    default_config,
    fit_slope,
    run_experiment,
    singular_value_census,
    splitmix64,
    sub_seed,
)
from noiseshape.csvio import read_table, write_table


class TestSplitmix:
    def test_reference_stream(self):
        # reference outputs of the standard 64-bit mixer for seed 0
        assert splitmix64(0, 0) == 0xE220A8397B1DCDAF
        assert splitmix64(0, 1) == 0x6E789E6AA1B965F4
        assert splitmix64(0, 2) == 0x06C45D188009454F

    def test_masks_to_64_bits(self):
        out = splitmix64((1 << 64) - 1, 12345)
        assert 0 <= out < (1 << 64)

    def test_sub_seed_composition(self):
        assert sub_seed(5, 2, 10, 3) == splitmix64(5, 23)

    def test_negative_index_rejected(self):
        with pytest.raises(ConfigError):
            splitmix64(0, -1)


class TestConfig:
    def test_defaults_exist_for_every_kind(self):
        for kind in ("frame-decay", "beta-decay", "sv-census", "cs-two-stage",
                     "cs-compressible", "adc-decay"):
            cfg = default_config(kind, master_seed=1)
            assert cfg.kind == kind
            assert cfg.trials >= 1

    def test_unknown_kind(self):
        with pytest.raises(ConfigError):
            default_config("nope")

    def test_validation(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(kind="frame-decay", grid=(), trials=5, master_seed=0)
        with pytest.raises(ConfigError):
            ExperimentConfig(kind="frame-decay", grid=(8,), trials=0, master_seed=0)
        with pytest.raises(ConfigError):
            ExperimentConfig(kind="beta-decay", grid=(2,), trials=1, master_seed=0, beta=1.0)
        with pytest.raises(ConfigError):
            ExperimentConfig(kind="cs-compressible", grid=(65,), trials=1, master_seed=0, p=32)
        with pytest.raises(ConfigError):
            ExperimentConfig(kind="adc-decay", grid=(1,), trials=1, master_seed=0)


class TestDeterminism:
    def test_identical_bytes_across_runs(self, tmp_path):
        cfg = default_config("frame-decay", master_seed=42, grid=(32, 64), trials=3)
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        run_experiment(cfg, out_path=p1)
        run_experiment(cfg, out_path=p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_master_seed_changes_rows(self, tmp_path):
        a = run_experiment(default_config("beta-decay", master_seed=1, grid=(3,), trials=2))
        b = run_experiment(default_config("beta-decay", master_seed=2, grid=(3,), trials=2))
        assert a[0].err2 != b[0].err2

    def test_trial_order_independence(self):
        # sub-seeds depend only on (grid index, trial index)
        recs = run_experiment(default_config("beta-decay", master_seed=9, grid=(2, 4), trials=3))
        seeds = {(rec.params["lam"], rec.trial): rec.sub_seed for rec in recs}
        assert seeds[(4, 0)] == sub_seed(9, 1, 3, 0)
        assert seeds[(2, 2)] == sub_seed(9, 0, 3, 2)


class TestRunners:
    def test_frame_decay_records_sound(self):
        recs = run_experiment(default_config("frame-decay", master_seed=3, grid=(32, 64), trials=4))
        assert len(recs) == 2 * 4 * 2
        for rec in recs:
            if rec.overloaded or rec.bound is None:
                continue
            assert rec.err2 <= rec.bound * (1 + 1e-9)

    def test_beta_decay_records_sound(self):
        recs = run_experiment(default_config("beta-decay", master_seed=4, grid=(2, 4, 6), trials=5))
        for rec in recs:
            if rec.overloaded or rec.bound is None:
                continue
            assert rec.err2 <= rec.bound * (1 + 1e-9)

    def test_adc_records_sound(self):
        recs = run_experiment(default_config("adc-decay", master_seed=5, grid=(4, 8), trials=3))
        for rec in recs:
            assert not rec.overloaded
            assert rec.err2 <= rec.bound * (1 + 1e-9)

    def test_census_consistency(self, tmp_path):
        cfg = default_config("sv-census", master_seed=6, grid=(64,), trials=10, k=8)
        path = tmp_path / "census.csv"
        recs = singular_value_census(cfg, out_path=path)
        lam = 64 // 8
        thr = lam ** (cfg.alpha * (cfg.r - 0.5)) * math.sqrt(64)
        for rec in recs:
            assert rec.params["threshold"] == pytest.approx(thr)
            assert rec.params["passed"] == (rec.sigma_min >= thr)
        rate = census_pass_rate(recs)
        assert rate == census_pass_rate(path)
        assert 0.0 <= rate <= 1.0

    def test_census_requires_kind(self):
        with pytest.raises(ConfigError):
            singular_value_census(default_config("frame-decay", master_seed=0))

    def test_two_stage_runner_fields(self):
        recs = run_experiment(default_config("cs-two-stage", master_seed=7, grid=(160,), trials=3))
        for rec in recs:
            assert rec.support_recovered in (True, False)
            assert rec.params["eps_q"] > 0
            assert rec.params["err_coarse"] >= 0

    def test_compressible_runner_fields(self):
        recs = run_experiment(default_config("cs-compressible", master_seed=8, grid=(64,), trials=2))
        for rec in recs:
            assert rec.params["term_quant"] > 0
            assert rec.params["term_tail"] > 0

    def test_median_curve_single_inversion_at_most(self):
        # medians of the sd error over a doubling grid should be essentially
        # monotone; allow at most one inversion
        recs = run_experiment(default_config("frame-decay", master_seed=10,
                                             grid=(32, 64, 128, 256), trials=9))
        med = {}
        for rec in recs:
            if rec.params["scheme"] == "sd":
                med.setdefault(rec.params["m"], []).append(rec.err2)
        ms = sorted(med)
        vals = [float(np.median(med[m])) for m in ms]
        inversions = sum(1 for a, b in zip(vals, vals[1:]) if b > a)
        assert inversions <= 1


class TestFitSlope:
    def _write(self, path, rows, header=("trial", "sub_seed", "m", "err2", "overloaded")):
        write_table(path, [("format", "experiment-v1")], list(header), rows)

    def test_exact_power_law(self, tmp_path):
        path = tmp_path / "r.csv"
        rows = []
        for m in (10, 100, 1000):
            for t in range(3):
                rows.append([t, 0, m, 100.0 * m ** -2.0, False])
        self._write(path, rows)
        res = fit_slope(path, "m", "err2")
        assert res.slope == pytest.approx(-2.0, abs=1e-12)
        assert res.intercept == pytest.approx(2.0, abs=1e-12)
        assert res.r_squared == pytest.approx(1.0)

    def test_linear_x_axis(self, tmp_path):
        path = tmp_path / "r.csv"
        rows = [[0, 0, lam, 10.0 ** (-0.5 * lam), False] for lam in range(2, 8)]
        self._write(path, rows)
        res = fit_slope(path, "m", "err2", log_x=False)
        assert res.slope == pytest.approx(-0.5, abs=1e-12)

    def test_overloaded_rows_dropped(self, tmp_path):
        path = tmp_path / "r.csv"
        rows = [[0, 0, 10, 1.0, False], [1, 0, 10, 500.0, True],
                [0, 0, 100, 0.1, False], [1, 0, 100, 500.0, True]]
        self._write(path, rows)
        res = fit_slope(path, "m", "err2")
        assert res.slope == pytest.approx(-1.0, abs=1e-12)

    def test_where_filter(self, tmp_path):
        path = tmp_path / "r.csv"
        header = ("trial", "sub_seed", "m", "scheme", "err2", "overloaded")
        rows = [[0, 0, 10, "sd", 1.0, False], [0, 0, 10, "msq", 5.0, False],
                [0, 0, 100, "sd", 0.01, False], [0, 0, 100, "msq", 5.0, False]]
        self._write(path, rows, header)
        assert fit_slope(path, "m", "err2", where={"scheme": "sd"}).slope == pytest.approx(-2.0)
        assert fit_slope(path, "m", "err2", where={"scheme": "msq"}).slope == pytest.approx(0.0)

    def test_median_used_per_grid_point(self, tmp_path):
        path = tmp_path / "r.csv"
        rows = [[0, 0, 10, 1.0, False], [1, 0, 10, 100.0, False], [2, 0, 10, 1.0, False],
                [0, 0, 100, 0.1, False], [1, 0, 100, 0.1, False], [2, 0, 100, 90.0, False]]
        self._write(path, rows)
        assert fit_slope(path, "m", "err2").slope == pytest.approx(-1.0, abs=1e-12)

    def test_errors(self, tmp_path):
        path = tmp_path / "r.csv"
        self._write(path, [[0, 0, 10, 1.0, False]])
        with pytest.raises(ConfigError):
            fit_slope(path, "m", "err2")
        with pytest.raises(ConfigError):
            fit_slope(path, "nope", "err2")


class TestSpectrumTable:
    def test_table_shape_and_metadata(self, tmp_path):
        path = tmp_path / "spec.csv"
        meta, header, rows = adc_spectrum_table(2, 8, 3, out_path=path)
        assert header == ["freq_index", "magnitude_msq", "magnitude_sd1",
                          "magnitude_sd2", "signal_magnitude"]
        assert len(rows) == 32
        assert rows[0][0] == -16
        file_meta, file_header, file_rows = read_table(path)
        assert file_meta["band"] == "2"
        assert file_header == header
        assert len(file_rows) == 32

    def test_signal_energy_in_band(self, tmp_path):
        _, header, rows = adc_spectrum_table(2, 8, 1)
        sig = np.array([float(r[4]) for r in rows])
        idx = np.arange(32) - 16
        inband = sig[np.abs(idx) <= 2].sum()
        assert inband / sig.sum() >= 1.0 - 1e-12
