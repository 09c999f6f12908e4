# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

import csv
import dataclasses
import logging
from pathlib import Path
from typing import Any

import pytest
import tomlkit

from lindquad import APP_NAME_UPPER
from lindquad.__main__ import main
from lindquad.cli import JOBS, run
from lindquad.config import CONFIG_VERSION, JobConfig, get_config
from lindquad.env import get_env
from lindquad.errors import ConfigError
from lindquad.logging import ColoredFormatter, parse_level
from lindquad.options import COMMANDS, get_options
from lindquad.validation import Check, check


def job_config(tmp_path: Path, command: str, **overrides: Any) -> JobConfig:
    config: dict[str, Any] = {
        "version": CONFIG_VERSION,
        "cutoff": 4,
        "max_photons": 1,
        "n_T": [0.0, 0.1],
        "time": {"t_max": 2.0, "steps": 21},
        "output": {"directory": "results", "plot": True, "log_scale": False},
        "qubit": {"theta": 1.0, "phi": 0.5, "theta_steps": 3},
        "ep_scan": {"omega_min": 0.0, "omega_max": 2.0, "steps": 5},
        "spec": {"two_mode": {"omega0": 0.2, "omega": [0.0, 0.0, 0.9], "gamma0": 1.0, "gamma": [0.6, 0.0, 0.0]}},
    }
    config.update(overrides)

    path = tmp_path / "config.toml"
    path.write_text(tomlkit.dumps(config), encoding="utf-8")

    job = get_config(path, command)
    assert job is not None
    return job


def read_csv(path: Path) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))


def test_every_command_has_a_job() -> None:
    assert set(JOBS) == set(COMMANDS)


def test_options() -> None:
    options = get_options(["speed", "-c", "job.toml", "-o", "out", "--seed", "5", "-dd"])

    assert options.command == "speed"
    assert options.debug == 2
    assert options.color
    assert not options.generate_config
    assert options.config_path == Path("job.toml")
    assert options.out_path == Path("out")
    assert options.seed == 5


def test_options_defaults() -> None:
    options = get_options(["--generate-config"], force_no_color=True)

    assert options.command is None
    assert options.generate_config
    assert not options.color
    assert options.config_path.name == "config.toml"
    assert options.out_path is None
    assert options.seed is None


@pytest.mark.parametrize("args", [[], ["unknown"]])
def test_options_need_a_known_command(args: list[str]) -> None:
    with pytest.raises(SystemExit):
        get_options(args)


def test_unknown_command(tmp_path: Path) -> None:
    job = job_config(tmp_path, "spectrum")

    with pytest.raises(ConfigError):
        run(dataclasses.replace(job, command="plot"))


def test_spectrum_job(tmp_path: Path) -> None:
    job = job_config(tmp_path, "spectrum")

    assert run(job) == 0

    rows = read_csv(tmp_path / "results" / "spectrum.csv")
    assert len(rows) == 9
    assert rows[0]["m"] == "0 0"
    assert float(rows[0]["re"]) == 0.0
    assert max(float(row["oracle_distance"]) for row in rows) < 1e-8


def test_steady_state_job(tmp_path: Path) -> None:
    job = job_config(tmp_path, "steady-state")

    assert run(job) == 0

    rows = read_csv(tmp_path / "results" / "steady_state.csv")
    assert [(row["ket"], row["bra"]) for row in rows] == [("0 0", "0 0")]
    assert float(rows[0]["re"]) == pytest.approx(1.0)


def test_evolve_job(tmp_path: Path) -> None:
    job = job_config(tmp_path, "evolve")

    assert run(job) == 0

    rows = read_csv(tmp_path / "results" / "evolution.csv")
    assert len(rows) == 21
    assert list(rows[0]) == ["t", "p(0 0)", "p(0 1)", "p(1 0)", "trace", "oracle_deviation"]
    assert max(float(row["oracle_deviation"]) for row in rows) < 1e-8
    assert (tmp_path / "results" / "evolution.svg").is_file()


def test_evolve_job_at_the_exceptional_point(tmp_path: Path, caplog: pytest.LogCaptureFixture) -> None:
    spec = {"two_mode": {"omega0": 0.0, "omega": [0.0, 0.0, 0.9], "gamma0": 1.0, "gamma": [0.9, 0.0, 0.0]}}
    job = job_config(tmp_path, "evolve", spec=spec)

    assert run(job) == 0

    rows = read_csv(tmp_path / "results" / "evolution.csv")
    assert max(float(row["oracle_deviation"]) for row in rows) < 1e-8
    assert "photon propagator" in caplog.text


def test_speed_job(tmp_path: Path) -> None:
    job = job_config(tmp_path, "speed")

    assert run(job) == 0

    speed = read_csv(tmp_path / "results" / "speed.csv")
    assert list(speed[0]) == ["t", "v0", "v(n_T=0)", "v(n_T=0.1)"]
    assert len(speed) == 21
    assert speed[0]["v0"] == speed[0]["v(n_T=0)"]

    fidelity = read_csv(tmp_path / "results" / "fidelity.csv")
    assert float(fidelity[0]["F(n_T=0.1)"]) == pytest.approx(1.0)

    surface = read_csv(tmp_path / "results" / "speed_surface.csv")
    assert len(surface) == 3 * 21
    assert (tmp_path / "results" / "speed.svg").is_file()


def test_speed_job_needs_a_two_mode_channel(tmp_path: Path) -> None:
    spec = {"thermal": {"omega": [[1.0]], "gamma": [[0.5]], "n_T": 0.1}}
    job = job_config(tmp_path, "speed", spec=spec)

    with pytest.raises(ConfigError):
        run(job)


def test_ep_scan_job(tmp_path: Path) -> None:
    job = job_config(tmp_path, "ep-scan")

    assert run(job) == 0

    rows = read_csv(tmp_path / "results" / "ep_scan.csv")
    assert [float(row["omega"]) for row in rows] == pytest.approx([0.0, 0.3, 0.6, 0.9, 1.2])
    assert [row["regime"] for row in rows[:2]] == ["exponential"] * 2
    assert rows[2]["regime"] == "exceptional-point"
    assert [row["regime"] for row in rows[3:]] == ["oscillatory"] * 2
    assert (tmp_path / "results" / "ep_scan.svg").is_file()


def test_validate_job_of_the_cli(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr("lindquad.jobs.validate.run_suites", fake_suites)
    job = job_config(tmp_path, "validate")

    assert run(job) == 0
    assert len(read_csv(tmp_path / "results" / "validate.csv")) == 1


def fake_suites(rng: Any, samples: int) -> list[Check]:
    return [check("fake", "always holds", 0.0, 1e-12)]


def test_main_generates_a_config(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    path = tmp_path / "config.toml"
    monkeypatch.setattr("sys.argv", ["lindquad", "--generate-config", "-c", str(path), "--no-color"])

    assert main() == 0
    assert path.is_file()


def test_main_exit_status_without_a_config(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr("sys.argv", ["lindquad", "spectrum", "-c", str(tmp_path / "absent.toml"), "--no-color"])

    assert main() == ConfigError.exit_status


def test_main_exit_status_of_a_job_error(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    path = tmp_path / "config.toml"
    job_config(tmp_path, "spectrum", spec={"thermal": {"omega": [[1.0]], "gamma": [[0.5]], "n_T": 0.1}})
    monkeypatch.setattr("sys.argv", ["lindquad", "speed", "-c", str(path), "--no-color"])

    assert main() == ConfigError.exit_status


def test_parse_level() -> None:
    assert parse_level("debug") == logging.DEBUG
    assert parse_level(" Warning ") == logging.WARNING
    assert parse_level("15") == 15
    assert parse_level("loud") is None


def test_colored_formatter() -> None:
    record = logging.LogRecord("lindquad.test", 15, __file__, 1, "between levels", None, None)

    plain = ColoredFormatter(False).format(record)
    colored = ColoredFormatter(True).format(record)

    assert " - DEBUG - lindquad.test: between levels" in plain
    assert "\x1b[" not in plain
    assert "\x1b[" in colored


def test_env(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.delenv("NO_COLOR", raising=False)
    monkeypatch.delenv(f"{APP_NAME_UPPER}_NO_COLOR", raising=False)
    monkeypatch.setenv("TERM", "xterm")
    monkeypatch.setenv(f"{APP_NAME_UPPER}_LOG_LEVEL", "warning")

    env = get_env()

    assert not env.no_color
    assert env.log_level == logging.WARNING

    monkeypatch.setenv("TERM", "dumb")
    monkeypatch.setenv(f"{APP_NAME_UPPER}_LOG_LEVEL", "loud")

    env = get_env()

    assert env.no_color
    assert env.log_level is None
