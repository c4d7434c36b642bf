import json

import numpy as np
import pytest

from qdiscord.cli import main
from qdiscord import CorrelationMatrix


def run(tmp_path, *args) -> int:
    """Invoke the CLI from a scratch directory."""
    import os

    old = os.getcwd()
    os.chdir(tmp_path)
    try:
        return main(list(args))
    finally:
        os.chdir(old)


class TestSimulate:
    def test_jones_full_bias(self, tmp_path):
        assert run(tmp_path, "simulate", "--unitary", "jones", "--epsilon", "1") == 0
        out = json.loads((tmp_path / "simulate.json").read_text())
        assert out["re"] == pytest.approx(0.0569, abs=5e-5)
        assert out["im"] == pytest.approx(0.2097, abs=5e-5)
        assert out["n"] == 3
        assert out["config"]["epsilon"] == 1.0

    def test_identity_unitary(self, tmp_path):
        assert run(tmp_path, "simulate", "--unitary", "identity8", "--epsilon", "1") == 0
        out = json.loads((tmp_path / "simulate.json").read_text())
        assert out["re"] == pytest.approx(1.0, abs=1e-10)
        assert out["im"] == pytest.approx(0.0, abs=1e-10)

    def test_zero_bias(self, tmp_path):
        assert run(tmp_path, "simulate", "--unitary", "jones", "--epsilon", "0") == 0
        out = json.loads((tmp_path / "simulate.json").read_text())
        assert abs(out["re"]) < 1e-12 and abs(out["im"]) < 1e-12

    def test_malformed_unitary_file_exits_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"dim": 2, "re": [[1, 0]]}')
        assert run(tmp_path, "simulate", "--unitary", str(bad)) == 2
        assert "error" in capsys.readouterr().err

    def test_missing_unitary_file_exits_2(self, tmp_path):
        assert run(tmp_path, "simulate", "--unitary", "nosuch.json") == 2


class TestDiscordCommand:
    def test_bell(self, tmp_path):
        assert run(tmp_path, "discord", "--state", "bell") == 0
        out = json.loads((tmp_path / "discord.json").read_text())
        assert out["discord"] == pytest.approx(1.0, abs=1e-6)
        assert out["mutual_information"] == pytest.approx(2.0, abs=1e-9)
        assert "theta" in out["argmin"] and "diagnostics" in out

    def test_product_fixture(self, tmp_path):
        assert run(tmp_path, "discord", "--state", "product-fixture") == 0
        out = json.loads((tmp_path / "discord.json").read_text())
        assert out["discord"] < 1e-9

    def test_unknown_state_exits_2(self, tmp_path):
        assert run(tmp_path, "discord", "--state", "nope") == 2

    def test_alpha_without_extrapolate_exits_2(self, tmp_path):
        assert run(tmp_path, "discord", "--dqc1", "jones", "--alpha", "1e-5") == 2

    def test_scaling_failure_exits_3(self, tmp_path, monkeypatch):
        from qdiscord.discord import ScalingFitError

        def boom(*a, **k):
            raise ScalingFitError("exponent out of range")

        monkeypatch.setattr("qdiscord.cli.fit_polarization_scaling", boom)
        code = run(
            tmp_path, "discord", "--dqc1", "jones", "--alpha", "1.4e-5", "--extrapolate"
        )
        assert code == 3

    def test_ensemble_input(self, tmp_path):
        ens = tmp_path / "ens.json"
        ens.write_text(json.dumps({"alpha": 0.5, "pps": "bell"}))
        assert run(tmp_path, "discord", "--ensemble", str(ens)) == 0
        out = json.loads((tmp_path / "discord.json").read_text())
        assert out["discord"] > 0.05


class TestWitnessCommand:
    def test_eq3_fixture_builtin(self, tmp_path):
        code = run(
            tmp_path, "witness", "--matrix", "rtrunc_eq3",
            "--samples", "10000", "--bin", "0.005", "--seed", "1",
        )
        assert code == 0
        out = json.loads((tmp_path / "witness.json").read_text())
        assert out["outcome"] == "DiscordWitnessed"
        assert out["rank_lower_bound"] == 3
        assert out["verdict"]["columns_used"] == ["III", "IZI", "IIZ", "IZZ"]
        for i in (1, 2, 3, 4):
            assert (tmp_path / f"witness_sv{i}.csv").exists()

    def test_eq3_fixture_from_file(self, tmp_path):
        from qdiscord import eq3_fixture

        path = tmp_path / "m.json"
        eq3_fixture().save(path)
        assert run(tmp_path, "witness", "--matrix", str(path), "--seed", "1") == 0
        out = json.loads((tmp_path / "witness.json").read_text())
        assert out["rank_lower_bound"] == 3

    def test_rank_one_zero_sigma_matrix_inconclusive(self, tmp_path):
        corr = CorrelationMatrix(
            ("I", "X", "Y", "Z"),
            ("II", "IZ"),
            np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]),
            np.zeros((4, 2)),
        )
        path = tmp_path / "rank1.json"
        corr.save(path)
        assert run(tmp_path, "witness", "--matrix", str(path)) == 0
        out = json.loads((tmp_path / "witness.json").read_text())
        assert out["outcome"] == "Inconclusive"
        assert out["rank_lower_bound"] == 1

    def test_matrix_without_sigmas_exits_2(self, tmp_path):
        corr = CorrelationMatrix(
            ("I", "X"), ("I", "Z"), np.array([[1.0, 0.2], [0.1, 0.3]])
        )
        path = tmp_path / "nosig.json"
        corr.save(path)
        assert run(tmp_path, "witness", "--matrix", str(path)) == 2

    def test_simulated_final_state_witnessed(self, tmp_path):
        code = run(tmp_path, "witness", "--state", "final-dqc1", "--seed", "2")
        assert code == 0
        out = json.loads((tmp_path / "witness.json").read_text())
        assert out["outcome"] == "DiscordWitnessed"
        assert out["rank_lower_bound"] == 3

    def test_measured_final_state(self, tmp_path):
        code = run(
            tmp_path, "witness", "--state", "final-dqc1",
            "--measure-seed", "5", "--seed", "2",
        )
        assert code == 0
        out = json.loads((tmp_path / "witness.json").read_text())
        assert out["outcome"] in ("DiscordWitnessed", "Inconclusive")

    def test_reproducible_outputs(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        a.mkdir()
        b.mkdir()
        for d in (a, b):
            assert run(d, "witness", "--matrix", "rtrunc_eq3", "--seed", "7") == 0
        assert (a / "witness.json").read_bytes() == (b / "witness.json").read_bytes()
        for i in (1, 2, 3, 4):
            assert (a / f"witness_sv{i}.csv").read_bytes() == (
                b / f"witness_sv{i}.csv"
            ).read_bytes()

    def test_csv_reparse_normalization(self, tmp_path):
        assert run(tmp_path, "witness", "--matrix", "rtrunc_eq3", "--seed", "1") == 0
        out = json.loads((tmp_path / "witness.json").read_text())
        bin_width = out["config"]["bin"]
        for csv_file in out["csv_files"]:
            lines = (tmp_path / csv_file).read_text().strip().splitlines()
            assert lines[0] == "bin_center,relative_occurrence,cumulative"
            body = np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]])
            assert body[:, 1].sum() * bin_width == pytest.approx(1.0, abs=1e-3)
            assert np.all(np.diff(body[:, 2]) >= -1e-12)
            assert body[-1, 2] == pytest.approx(1.0, abs=1e-6)

    def test_config_embedded(self, tmp_path):
        assert run(tmp_path, "witness", "--matrix", "rtrunc_eq3", "--seed", "3") == 0
        out = json.loads((tmp_path / "witness.json").read_text())
        config = out["config"]
        assert config["seed"] == 3
        assert config["samples"] == 10000
        assert config["bin"] == 0.005
        assert config["confidence"] == 0.99


class TestHaarSurveyCommand:
    def test_single_seed_deterministic(self, tmp_path):
        args = (
            "haar-survey", "--seeds", "1", "--dim", "8",
            "--alpha", "1.4e-5", "--start-seed", "11",
        )
        assert run(tmp_path, *args) == 0
        first = json.loads((tmp_path / "haar_survey.json").read_text())
        assert run(tmp_path, *args) == 0
        second = json.loads((tmp_path / "haar_survey.json").read_text())
        assert first["mean"] == second["mean"]
        csv_lines = (tmp_path / "haar_survey.csv").read_text().strip().splitlines()
        assert csv_lines[0] == "seed,discord"
        assert csv_lines[1].startswith("11,")

    def test_quadratic_alpha_scaling(self, tmp_path):
        means = {}
        for alpha in ("1.4e-5", "2.8e-5"):
            assert run(
                tmp_path, "haar-survey", "--seeds", "2", "--dim", "8",
                "--alpha", alpha, "--out", f"s{alpha}.json", "--csv", f"s{alpha}.csv",
            ) == 0
            means[alpha] = json.loads((tmp_path / f"s{alpha}.json").read_text())["mean"]
        ratio = means["2.8e-5"] / means["1.4e-5"]
        assert ratio == pytest.approx(4.0, rel=0.02)
