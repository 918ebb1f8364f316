"""Unit tests for the command line entry point."""

from pathlib import Path

import pytest

from jclass_lab.main import build_parser, main

pytestmark = pytest.mark.unit

Z4_DOUBLING = """
[carrier]
kind = "finite_cyclic"
order = 4

[operator]
a = 1

[weight]
kind = "constant"
value = 2.0

[[target]]
lo = 0
hi = 1

[tolerances]
delta = 0.5
witness_epsilon = 1e-3
"""


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    """Keep a developer's JCLASS_* settings out of the tests."""
    monkeypatch.delenv("JCLASS_OUT", raising=False)
    monkeypatch.delenv("JCLASS_LOG_LEVEL", raising=False)


@pytest.fixture
def z4_config(tmp_path: Path) -> Path:
    path = tmp_path / "z4.toml"
    path.write_text(Z4_DOUBLING, encoding="utf-8")
    return path


class TestParser:
    """Argument parsing."""

    def test_oracle_defaults(self) -> None:
        args = build_parser().parse_args(["oracle"])
        assert (args.gamma, args.trials, args.seed, args.nmax, args.eta) == (4, 200, 0, 500, 1e-3)

    def test_config_is_required(self) -> None:
        with pytest.raises(SystemExit) as excinfo:
            build_parser().parse_args(["check"])
        assert excinfo.value.code == 2

    def test_unknown_example(self) -> None:
        with pytest.raises(SystemExit):
            build_parser().parse_args(["example", "4"])


class TestMain:
    """Exit status and output."""

    def test_describe(self, z4_config: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        out = tmp_path / "out"
        assert main(["describe", "--config", str(z4_config), "--out", str(out)]) == 0
        stdout = capsys.readouterr().out
        assert "torsion_order: 4" in stdout
        assert f"wrote {out / 'weight_profile.csv'}" in stdout

    def test_witness(self, z4_config: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["witness", "--config", str(z4_config), "--out", str(tmp_path)]) == 0
        assert "witness: VALID" in capsys.readouterr().out
        assert (tmp_path / "witness.csv").exists()

    def test_eps_overrides_the_witness_accuracy(self, z4_config: Path, tmp_path: Path) -> None:
        # with ε = 1e-9 no full cycle within n_max = 2 gets small enough
        assert main(["witness", "--config", str(z4_config), "--out", str(tmp_path), "--eps", "1e-9", "--nmax", "2"]) == 1

    def test_out_environment_variable_wins(
        self, z4_config: Path, tmp_path: Path, monkeypatch: pytest.MonkeyPatch
    ) -> None:
        env_out = tmp_path / "from_env"
        monkeypatch.setenv("JCLASS_OUT", str(env_out))
        assert main(["describe", "--config", str(z4_config), "--out", str(tmp_path / "from_flag")]) == 0
        assert (env_out / "weight_profile.csv").exists()
        assert not (tmp_path / "from_flag").exists()

    def test_misaligned_element(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        path = tmp_path / "grid.toml"
        path.write_text(
            '[carrier]\nkind = "real_line_grid"\nstep = 0.2\n[operator]\na = 0.3\n'
            '[weight]\nkind = "constant"\nvalue = 2.0\n[windows]\nprobe = [[0, 1]]\n',
            encoding="utf-8",
        )
        assert main(["check", "--config", str(path), "--out", str(tmp_path)]) == 2
        assert "error: operator.a: 0.3 is not aligned" in capsys.readouterr().err

    def test_missing_config(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["describe", "--config", str(tmp_path / "absent.toml")]) == 2
        assert "config: cannot read" in capsys.readouterr().err

    def test_gamma_out_of_range(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["oracle", "--gamma", "1", "--out", str(tmp_path)]) == 2
        assert "error: gamma:" in capsys.readouterr().err

    def test_oracle(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["oracle", "--trials", "5", "--seed", "3", "--out", str(tmp_path)]) == 0
        assert "agreement: " in capsys.readouterr().out
        assert (tmp_path / "oracle_trials.csv").exists()

    def test_example_three(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["example", "3", "--out", str(tmp_path)]) == 0
        stdout = capsys.readouterr().out
        assert "verdict: JClassWithIndicatorVector(K=[0, 0.25])" in stdout
        assert "witness: VALID" in stdout

    def test_example_parameters_are_checked(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["example", "1", "--alpha", "4", "--beta", "3", "--out", str(tmp_path)]) == 2
        assert "1 < alpha < beta" in capsys.readouterr().err

    def test_bad_target(self, z4_config: Path, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        assert main(["witness", "--config", str(z4_config), "--out", str(tmp_path), "--target", "zero:one"]) == 2
        assert "--target: expected LO:HI" in capsys.readouterr().err
