"""Tests for the experiment registry, CSV round-trips, and CLI plumbing."""

import subprocess
import sys

import numpy as np
import pytest

from murmurlab import expcli, validate

# desk-scale overrides per experiment for fast, thread-comparable runs
DESK_SCALE = {
    "fig1_top": dict(X=128, y_max=2.0, y_step=0.25),
    "fig1_bottom": dict(X=500, y_max=1.0, y_step=0.25),
    "fig2": dict(X=512, y_min=0.5, y_max=1.5, y_step=0.5),
    "fig3_sharp": dict(X=512, y_min=0.5, y_max=1.5, y_step=0.5),
    "fig4": dict(X=64),
    "fig5": dict(X=32),
    "fig6": dict(X=128, y_max=2.0, y_step=0.25),
    "fig7": dict(X=500, y_max=1.0, y_step=0.25),
    "fig8": dict(X=512, y_min=0.5, y_max=1.5, y_step=0.5),
}


class TestRegistry:
    def test_required_experiments_present(self):
        required = {
            "fig1_top",
            "fig1_bottom",
            "fig2",
            "fig3_sharp",
            "fig4",
            "fig5",
            "fig6",
            "fig7",
            "fig8",
        }
        assert required <= set(expcli.REGISTRY)

    def test_unknown_experiment_lists_known_names(self):
        with pytest.raises(expcli.ConfigError, match="fig1_top"):
            expcli.build_config("not_an_experiment")

    def test_overlay_presence_matches_registry(self, tmp_path):
        for name, spec in expcli.REGISTRY.items():
            cfg = expcli.build_config(name, **DESK_SCALE[name])
            res = expcli.run_experiment(cfg)
            assert (res.overlay is not None) == spec.has_overlay, name

    def test_row_count_equals_grid(self):
        cfg = expcli.build_config("fig1_top", X=128, y_max=1.0, y_step=0.1)
        res = expcli.run_experiment(cfg)
        assert len(res.x) == len(res.values) == 11

    def test_nan_is_hard_failure(self):
        cfg = expcli.build_config("fig1_top", X=128, y_max=0.5, y_step=0.5)
        res = expcli.run_experiment(cfg)
        bad = res.values.copy()
        bad[0] = complex(np.nan, 0)
        with pytest.raises(ValueError, match="non-finite"):
            expcli.ExperimentResult(
                config=res.config,
                x=res.x,
                values=bad,
                overlay=res.overlay,
                plot_component=res.plot_component,
                wall_time_s=0.0,
            )

    def test_dyadic_p_max_follows_x_override(self):
        assert expcli.build_config("fig4", X=64).p_max == 255
        assert expcli.build_config("fig5", X=32).p_max == 320
        assert expcli.build_config("fig4", X=64, p_max=100).p_max == 100


class TestCsv:
    def test_round_trip_exact(self, tmp_path):
        cfg = expcli.build_config("fig1_top", X=200, y_max=3.0, y_step=0.37)
        res = expcli.run_experiment(cfg)
        path = tmp_path / "out.csv"
        expcli.emit_csv(res, str(path))
        meta, x, values, overlay = expcli.parse_csv(str(path))
        assert meta["experiment"] == "fig1_top"
        assert meta["X"] == "200"
        np.testing.assert_array_equal(x, res.x)
        np.testing.assert_array_equal(values, res.values)
        np.testing.assert_array_equal(overlay, res.overlay)

    def test_metadata_block_lists_config(self, tmp_path):
        cfg = expcli.build_config("fig2", **DESK_SCALE["fig2"])
        res = expcli.run_experiment(cfg)
        path = tmp_path / "fig2.csv"
        expcli.emit_csv(res, str(path))
        text = path.read_text()
        assert "# experiment=fig2" in text
        for key in ("X", "delta", "variant", "weight_kind", "mode", "plot_component"):
            assert f"# {key}=" in text

    def test_overlay_columns_exactly_for_overlay_experiments(self, tmp_path):
        for name in ("fig1_top", "fig4"):
            cfg = expcli.build_config(name, **DESK_SCALE[name])
            res = expcli.run_experiment(cfg)
            path = tmp_path / f"{name}.csv"
            expcli.emit_csv(res, str(path))
            header = [
                ln
                for ln in path.read_text().splitlines()
                if ln and not ln.startswith("#")
            ][0]
            if expcli.REGISTRY[name].has_overlay:
                assert header == "x,value_re,value_im,overlay_re,overlay_im"
            else:
                assert header == "x,value_re,value_im"

    def test_write_error_has_path_context(self):
        cfg = expcli.build_config("fig1_top", X=128, y_max=0.5, y_step=0.5)
        res = expcli.run_experiment(cfg)
        with pytest.raises(OSError, match="no/such/dir"):
            expcli.emit_csv(res, "/no/such/dir/out.csv")

    def test_parse_error_reports_line_number(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("# experiment=x\nx,value_re,value_im\n1,2,zzz\n")
        with pytest.raises(ValueError, match=":3"):
            expcli.parse_csv(str(path))


@pytest.mark.parametrize("name", sorted(DESK_SCALE))
def test_thread_count_invariance(name, tmp_path):
    """Same config at 1 and 3 threads emits byte-identical CSV."""
    from dataclasses import replace

    cfg = expcli.build_config(name, **DESK_SCALE[name])
    paths = []
    for threads in (1, 3):
        res = expcli.run_experiment(replace(cfg, threads=threads))
        p = tmp_path / f"{name}_{threads}.csv"
        expcli.emit_csv(res, str(p))
        paths.append(p)
    assert paths[0].read_bytes() == paths[1].read_bytes()


class TestCli:
    def test_list_exits_zero(self):
        proc = subprocess.run(
            [sys.executable, "-m", "murmurlab.expcli", "list"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert "fig1_top" in proc.stdout

    def test_unknown_experiment_exit_2(self):
        proc = subprocess.run(
            [sys.executable, "-m", "murmurlab.expcli", "nope"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 2
        assert "fig1_top" in proc.stderr  # known names are listed

    def test_run_and_reparse(self, tmp_path):
        out = tmp_path / "cli.csv"
        proc = subprocess.run(
            [
                sys.executable,
                "-m",
                "murmurlab.expcli",
                "fig6",
                "--x",
                "128",
                "--y-max",
                "1",
                "--y-step",
                "0.25",
                "--parity",
                "-",
                "--out",
                str(out),
            ],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0, proc.stderr
        meta, x, values, overlay = expcli.parse_csv(str(out))
        assert meta["parity"] == "-1"
        assert meta["plot_component"] == "imag"
        assert np.allclose(values.real, 0.0, atol=1e-12)

    def test_bad_flag_exit_2(self):
        proc = subprocess.run(
            [sys.executable, "-m", "murmurlab.expcli", "fig1_top", "--parity", "x"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 2


class TestValidatePlumbing:
    def test_exit_codes_follow_check_results(self, monkeypatch, capsys):
        ok = validate.CheckResult("stub-pass", True, "fine")
        bad = validate.CheckResult("stub-fail", False, "broken")
        monkeypatch.setattr(
            validate, "ALL_CHECKS", [("stub-pass", lambda quick: ok)]
        )
        assert expcli.main(["validate"]) == 0
        out = capsys.readouterr().out
        assert "PASS: stub-pass" in out
        monkeypatch.setattr(
            validate,
            "ALL_CHECKS",
            [("stub-pass", lambda quick: ok), ("stub-fail", lambda quick: bad)],
        )
        assert expcli.main(["validate", "--quick"]) == 1
        out = capsys.readouterr().out
        assert "FAIL: stub-fail" in out
