import json

import numpy as np
import pytest
from click.testing import CliRunner

from bewitness.cli import main
from bewitness.states import state_from_json
from bewitness.upb import upb_from_json

from conftest import TILES_LAMBDA_GOLDEN


@pytest.fixture()
def runner():
    return CliRunner()


def _invoke(runner, args, **kwargs):
    result = runner.invoke(main, args, catch_exceptions=False, **kwargs)
    return result


def _write_tiles(runner):
    assert _invoke(runner, ["upb", "tiles", "--out", "tiles.json"]).exit_code == 0
    return "tiles.json"


class TestUpbCommands:
    def test_tiles_catalog(self, runner):
        with runner.isolated_filesystem():
            path = _write_tiles(runner)
            catalog = upb_from_json(json.load(open(path)))
            assert catalog.size == 5
            assert catalog.dims.as_list() == [3, 3]
            assert catalog.is_real

    def test_padded_catalog(self, runner):
        with runner.isolated_filesystem():
            result = _invoke(runner, ["upb", "padded", "--dim", "4", "--out", "p.json"])
            assert result.exit_code == 0
            assert upb_from_json(json.load(open("p.json"))).size == 12

    def test_padded_rejects_small_dim(self, runner):
        result = runner.invoke(main, ["upb", "padded", "--dim", "2"])
        assert result.exit_code != 0

    def test_certify(self, runner):
        with runner.isolated_filesystem():
            path = _write_tiles(runner)
            result = _invoke(runner, ["upb", "certify", "--in", path, "--out", "c.json"])
            assert result.exit_code == 0
            cert = json.load(open("c.json"))
            assert cert["is_upb_evidence"] is True
            assert abs(cert["lambda_hat"] - TILES_LAMBDA_GOLDEN) < 1e-6

    def test_certify_rejects_malformed_catalog(self, runner):
        with runner.isolated_filesystem():
            with open("bad.json", "w") as fh:
                fh.write('{"not": "a catalog"}')
            result = runner.invoke(main, ["upb", "certify", "--in", "bad.json"])
            assert result.exit_code != 0
            assert "malformed" in result.output


class TestStateCommands:
    def test_rho_g_reports_rank_and_ppt(self, runner):
        with runner.isolated_filesystem():
            path = _write_tiles(runner)
            result = _invoke(runner, ["state", "rho-g", "--upb", path, "--g", "1",
                                      "--omega", "0.1", "--out", "rho.json"])
            assert result.exit_code == 0
            assert "rank 5" in result.output
            assert "PPT True" in result.output
            rho, provenance = state_from_json(json.load(open("rho.json")))
            assert provenance == {"family": "rho_g", "upb": path, "G": [1], "omega": 0.1}

    def test_zero_weight_equals_rho_be(self, runner):
        with runner.isolated_filesystem():
            path = _write_tiles(runner)
            _invoke(runner, ["state", "rho-g", "--upb", path, "--g", "1",
                             "--omega", "0", "--out", "a.json"])
            _invoke(runner, ["state", "rho-be", "--upb", path, "--out", "b.json"])
            rho_a, _ = state_from_json(json.load(open("a.json")))
            rho_b, _ = state_from_json(json.load(open("b.json")))
            assert np.max(np.abs(rho_a.matrix - rho_b.matrix)) < 1e-15

    def test_padded_full_subset_full_rank(self, runner):
        with runner.isolated_filesystem():
            _invoke(runner, ["upb", "padded", "--dim", "4", "--out", "p.json"])
            g = ",".join(str(i) for i in range(1, 13))
            result = _invoke(runner, ["state", "rho-g", "--upb", "p.json", "--g", g,
                                      "--omega", "0.05", "--out", "rho.json"])
            assert result.exit_code == 0
            assert "rank 16" in result.output

    def test_omega_out_of_range_fails(self, runner):
        with runner.isolated_filesystem():
            path = _write_tiles(runner)
            result = runner.invoke(main, ["state", "rho-g", "--upb", path,
                                          "--g", "1", "--omega", "1.5"])
            assert result.exit_code != 0

    def test_empty_subset_fails(self, runner):
        with runner.isolated_filesystem():
            path = _write_tiles(runner)
            result = runner.invoke(main, ["state", "rho-g", "--upb", path,
                                          "--g", "", "--omega", "0.1"])
            assert result.exit_code != 0


def _make_rho1(runner, omega, out="rho.json"):
    path = _write_tiles(runner)
    _invoke(runner, ["state", "rho-g", "--upb", path, "--g", "1",
                     "--omega", str(omega), "--out", out])
    return path, out


class TestCheckCommands:
    def test_ppt_verdict(self, runner):
        with runner.isolated_filesystem():
            _, state_path = _make_rho1(runner, 0.1)
            result = _invoke(runner, ["check", "ppt", "--in", state_path, "--out", "v.json"])
            assert result.exit_code == 0
            verdict = json.load(open("v.json"))
            assert verdict["is_ppt"] is True
            assert abs(verdict["min_pt_eigenvalue"]) < 1e-10

    def test_witness_value_matches_identity(self, runner):
        with runner.isolated_filesystem():
            upb_path, state_path = _make_rho1(runner, 0.05)
            result = _invoke(runner, ["check", "witness", "--in", state_path,
                                      "--upb", upb_path,
                                      "--lambda", str(TILES_LAMBDA_GOLDEN),
                                      "--out", "w.json"])
            assert result.exit_code == 0
            verdict = json.load(open("w.json"))
            assert abs(verdict["value"] - (0.05 - TILES_LAMBDA_GOLDEN)) < 1e-10
            assert verdict["entanglement_detected"] is False  # 0.05 > lambda

    def test_witness_detects_below_threshold(self, runner):
        with runner.isolated_filesystem():
            upb_path, state_path = _make_rho1(runner, 0.01)
            _invoke(runner, ["check", "witness", "--in", state_path, "--upb", upb_path,
                             "--lambda", str(TILES_LAMBDA_GOLDEN), "--out", "w.json"])
            assert json.load(open("w.json"))["entanglement_detected"] is True

    def test_range_criterion_fails_on_complement_state(self, runner):
        with runner.isolated_filesystem():
            path = _write_tiles(runner)
            _invoke(runner, ["state", "rho-be", "--upb", path, "--out", "rbe.json"])
            result = _invoke(runner, ["check", "range-criterion", "--in", "rbe.json",
                                      "--starts", "300", "--out", "v.json"])
            assert result.exit_code == 0  # a failed criterion is a verdict, not an error
            verdict = json.load(open("v.json"))
            assert verdict["passed"] is False
            assert verdict["product_span_rank"] == 0

    def test_range_criterion_passes_with_findings_file(self, runner):
        with runner.isolated_filesystem():
            _, state_path = _make_rho1(runner, 0.1)
            result = _invoke(runner, ["check", "range-criterion", "--in", state_path,
                                      "--starts", "600", "--out", "v.json",
                                      "--findings-out", "f.json"])
            assert result.exit_code == 0
            assert json.load(open("v.json"))["passed"] is True
            findings = json.load(open("f.json"))
            assert len(findings["clusters"]) == 6
            assert abs(findings["projector_trace"] - 5.0) < 1e-9

    def test_separable_nnls_infeasible(self, runner):
        with runner.isolated_filesystem():
            _, state_path = _make_rho1(runner, 0.1)
            result = _invoke(runner, ["check", "separable-nnls", "--in", state_path,
                                      "--starts", "600", "--out", "v.json"])
            assert result.exit_code == 0
            verdict = json.load(open("v.json"))
            assert verdict["verdict"] == "infeasible"
            assert verdict["residual"] > 1e-3

    def test_separable_nnls_with_pool_file(self, runner):
        with runner.isolated_filesystem():
            _, state_path = _make_rho1(runner, 0.1)
            _invoke(runner, ["check", "range-criterion", "--in", state_path,
                             "--starts", "600", "--out", "v.json",
                             "--findings-out", "pool.json"])
            result = _invoke(runner, ["check", "separable-nnls", "--in", state_path,
                                      "--pool", "pool.json", "--out", "n.json"])
            assert result.exit_code == 0
            assert json.load(open("n.json"))["pool_size"] == 6

    def test_missing_state_file_fails(self, runner):
        result = runner.invoke(main, ["check", "ppt", "--in", "nope.json"])
        assert result.exit_code != 0


class TestScan:
    def test_feasibility_flip_near_boundary(self, runner):
        with runner.isolated_filesystem():
            path = _write_tiles(runner)
            result = _invoke(runner, ["scan", "--upb", path, "--g", "1",
                                      "--omega-from", "0.18", "--omega-to", "0.22",
                                      "--step", "0.005", "--checks", "nnls",
                                      "--starts", "600", "--out", "t.csv"])
            assert result.exit_code == 0
            rows = [line.split(",") for line in open("t.csv").read().splitlines()]
            header, body = rows[0], rows[1:]
            idx = header.index("nnls_feasible")
            flips = {round(float(r[0]), 6): r[idx] == "True" for r in body}
            assert not flips[0.195]
            assert flips[0.2]

    def test_witness_requires_lambda(self, runner):
        with runner.isolated_filesystem():
            path = _write_tiles(runner)
            result = runner.invoke(main, ["scan", "--upb", path, "--g", "1",
                                          "--omega-from", "0", "--omega-to", "0.1",
                                          "--step", "0.05", "--checks", "witness"])
            assert result.exit_code != 0
            assert "--lambda" in result.output

    def test_degenerate_grid_single_row(self, runner):
        with runner.isolated_filesystem():
            path = _write_tiles(runner)
            result = _invoke(runner, ["scan", "--upb", path, "--g", "1",
                                      "--omega-from", "0", "--omega-to", "0.1",
                                      "--step", "0.5", "--checks", "ppt",
                                      "--out", "t.csv"])
            assert result.exit_code == 0
            lines = open("t.csv").read().splitlines()
            assert len(lines) == 2
            assert lines[1].startswith("0.0,")

    def test_reversed_range_fails(self, runner):
        with runner.isolated_filesystem():
            path = _write_tiles(runner)
            result = runner.invoke(main, ["scan", "--upb", path, "--g", "1",
                                          "--omega-from", "0.4", "--omega-to", "0.1",
                                          "--step", "0.05", "--checks", "ppt"])
            assert result.exit_code != 0

    def test_json_format_mirrors_columns(self, runner):
        with runner.isolated_filesystem():
            path = _write_tiles(runner)
            _invoke(runner, ["scan", "--upb", path, "--g", "1",
                             "--omega-from", "0", "--omega-to", "0.05", "--step", "0.05",
                             "--checks", "ppt,witness", "--lambda", "0.028",
                             "--format", "json", "--out", "t.json"])
            table = json.load(open("t.json"))
            assert table["columns"] == ["omega", "witness_value", "min_pt_eig",
                                        "nnls_residual", "nnls_feasible", "rc_passed"]
            assert len(table["rows"]) == 2
            assert table["rows"][0]["nnls_residual"] is None


class TestDeterminism:
    def test_byte_identical_reruns(self, runner):
        with runner.isolated_filesystem():
            path = _write_tiles(runner)
            args = ["upb", "certify", "--in", path]
            first = _invoke(runner, args + ["--out", "a.json"])
            second = _invoke(runner, args + ["--out", "b.json"])
            assert first.exit_code == second.exit_code == 0
            assert open("a.json", "rb").read() == open("b.json", "rb").read()

    def test_scan_with_searches_byte_identical(self, runner):
        with runner.isolated_filesystem():
            path = _write_tiles(runner)
            args = ["scan", "--upb", path, "--g", "1", "--omega-from", "0.1",
                    "--omega-to", "0.2", "--step", "0.05", "--checks", "nnls",
                    "--starts", "300"]
            _invoke(runner, args + ["--out", "a.csv"])
            _invoke(runner, args + ["--out", "b.csv"])
            assert open("a.csv", "rb").read() == open("b.csv", "rb").read()

    def test_seed_env_override_matches_flag(self, runner):
        with runner.isolated_filesystem():
            path = _write_tiles(runner)
            _invoke(runner, ["--seed", "7", "upb", "certify", "--in", path,
                             "--out", "a.json"])
            _invoke(runner, ["upb", "certify", "--in", path, "--out", "b.json"],
                    env={"BEWITNESS_SEED": "7"})
            assert open("a.json").read() == open("b.json").read()

    def test_catalog_roundtrip_through_cli(self, runner):
        with runner.isolated_filesystem():
            _invoke(runner, ["upb", "padded", "--dim", "5", "--out", "p.json"])
            catalog = upb_from_json(json.load(open("p.json")))
            assert catalog.size == 21
