import json

import pytest

from frontfix.cli import main


def run(tmp_path, *argv):
    return main([*argv, "--out", str(tmp_path)])


class TestSolveCommand:
    def test_benchmark_run(self, tmp_path, capsys):
        assert run(tmp_path, "solve", "--J", "80", "--mu", "20") == 0
        meta = json.loads((tmp_path / "meta.json").read_text())
        assert f"{meta['final_sf']:.6f}" == "0.863071"
        assert meta["grid"]["N"] == 320
        assert meta["stability"]["coefficients_nonneg"] is True
        assert (tmp_path / "sf.csv").exists()
        assert (tmp_path / "pfinal.csv").exists()
        assert not (tmp_path / "surface.csv").exists()
        assert "0.863071" in capsys.readouterr().out

    def test_sf_csv_contents(self, tmp_path):
        run(tmp_path, "solve", "--J", "10")
        lines = (tmp_path / "sf.csv").read_text().splitlines()
        assert lines[0].startswith("# frontfix solve config:")
        assert lines[1] == "t_n,sf_n"
        assert len(lines) == 2 + 6  # N=5 time levels plus t=0
        assert lines[2] == "0,1"

    def test_unstable_without_force_exits_2(self, tmp_path, capsys):
        assert run(tmp_path, "solve", "--J", "52", "--mu", "27") == 2
        assert "stability" in capsys.readouterr().err

    def test_forced_unstable_exits_3_with_diagnostics(self, tmp_path, capsys):
        assert run(tmp_path, "solve", "--J", "52", "--mu", "27", "--force") == 3
        err = capsys.readouterr().err
        assert "blow-up at step n=" in err
        assert "sign changes" in err

    def test_minimum_grid(self, tmp_path):
        assert run(tmp_path, "solve", "--J", "3") == 0
        for name in ("sf.csv", "pfinal.csv", "meta.json"):
            assert (tmp_path / name).exists()

    def test_full_history_writes_surface(self, tmp_path):
        assert run(tmp_path, "solve", "--J", "10", "--full-history") == 0
        lines = (tmp_path / "surface.csv").read_text().splitlines()
        assert lines[1] == "t_n,x_j,p_jn"
        assert len(lines) == 2 + 6 * 11

    def test_byte_identical_reruns(self, tmp_path):
        d1, d2 = tmp_path / "a", tmp_path / "b"
        run(d1, "solve", "--J", "40")
        run(d2, "solve", "--J", "40")
        for name in ("sf.csv", "pfinal.csv", "meta.json"):
            assert (d1 / name).read_bytes() == (d2 / name).read_bytes()

    def test_config_file_with_flag_override(self, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "model": {"r": 0.1, "sigma": 0.2, "strike": 1.0, "maturity": 1.0},
            "grid": {"xinf": 1.0, "J": 10, "mu": 20.0},
        }))
        out = tmp_path / "out"
        assert main(["solve", "--config", str(cfg), "--J", "40",
                     "--out", str(out)]) == 0
        meta = json.loads((out / "meta.json").read_text())
        assert meta["grid"]["J"] == 40  # flag beats file
        assert f"{meta['final_sf']:.6f}" == "0.863700"

    def test_bad_parameter_exits_2(self, tmp_path):
        assert run(tmp_path, "solve", "--sigma", "-1") == 2


class TestRefineCommand:
    def test_paper_setup_accepts_expected_level(self, tmp_path, capsys):
        assert run(tmp_path, "refine", "--J", "10", "--epsilon", "0.005") == 0
        report = json.loads((tmp_path / "report.json").read_text())
        accepted = report["levels"][report["accepted_level"]]
        assert (accepted["J"], accepted["N"]) == (80, 320)
        # accepted solution artifacts are also written
        meta = json.loads((tmp_path / "meta.json").read_text())
        assert meta["grid"]["J"] == 80
        for level in range(1, report["accepted_level"] + 1):
            assert (tmp_path / f"errors_level{level}.csv").exists()
        assert "accepted level 3" in capsys.readouterr().out

    def test_loose_tolerance(self, tmp_path):
        assert run(tmp_path, "refine", "--J", "10", "--epsilon", "1") == 0
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["accepted_level"] == 1

    def test_unreachable_exits_4_with_report(self, tmp_path, capsys):
        rc = run(tmp_path, "refine", "--J", "10", "--epsilon", "1e-9",
                 "--max-levels", "2")
        assert rc == 4
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["accepted_level"] is None
        assert len(report["levels"]) == 2
        assert "tolerance" in capsys.readouterr().err

    def test_error_series_columns(self, tmp_path):
        run(tmp_path, "refine", "--J", "10", "--epsilon", "0.005")
        lines = (tmp_path / "errors_level1.csv").read_text().splitlines()
        assert lines[1] == "t_n,err_p_supnorm,err_sf"
        assert len(lines) == 2 + 5  # coarse level has N=5 comparison times


class TestExtrapolateCommand:
    def test_full_ladder_matches_benchmark(self, tmp_path, capsys):
        assert run(tmp_path, "extrapolate",
                   "--J-list", "10,20,40,80,160,320") == 0
        text = (tmp_path / "tableau.txt").read_text()
        assert "0.862762" in text
        assert "0.863560" in text
        assert (tmp_path / "tableau.csv").exists()
        assert "0.862762" in capsys.readouterr().out

    def test_single_value(self, tmp_path):
        assert run(tmp_path, "extrapolate", "--J-list", "10") == 0
        lines = (tmp_path / "tableau.csv").read_text().splitlines()
        assert len(lines) == 3  # config comment, header, one row

    def test_two_values_single_extrapolation(self, tmp_path):
        assert run(tmp_path, "extrapolate", "--J-list", "10,20") == 0
        rows = (tmp_path / "tableau.csv").read_text().splitlines()
        cells = rows[-1].split(",")
        u0, u1, u11 = 0.871621474828556, 0.8655750222427181, float(cells[2])
        assert u11 == pytest.approx(u1 + (u1 - u0) / 3.0, rel=1e-9)

    def test_non_doubling_rejected(self, tmp_path, capsys):
        assert run(tmp_path, "extrapolate", "--J-list", "10,30") == 2
        assert "double" in capsys.readouterr().err

    def test_garbage_list_rejected(self, tmp_path):
        assert run(tmp_path, "extrapolate", "--J-list", "ten,twenty") == 2


class TestValidateCommand:
    def test_accepted_grid_passes(self, tmp_path, capsys):
        assert run(tmp_path, "validate", "--J", "80", "--steps", "10000") == 0
        out = capsys.readouterr().out
        assert out.count("pass") == 5
        assert "FAIL" not in out

    def test_coarse_grid_fails(self, tmp_path, capsys):
        assert run(tmp_path, "validate", "--J", "5", "--steps", "10000") == 5
        assert "FAIL" in capsys.readouterr().out
