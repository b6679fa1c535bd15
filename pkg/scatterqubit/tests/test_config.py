import json
import math

import pytest
from filelock import FileLock

from scatterqubit.cli.run_config import RunConfig, apply_override, load_run_config
from scatterqubit.utils.config import AppConfig
from scatterqubit.utils.constants import LogLevel, SequenceKind
from scatterqubit.utils.exceptions import ConfigError, OutputError
from scatterqubit.utils.file_loader import FileLoaderError, load_json_config, load_timeseries_csv
from scatterqubit.utils.logger import LoggerFactory
from scatterqubit.utils.output_writer import OutputWriter, compute_config_hash, format_cell


# === Application settings ===

def test_yaml_settings_are_read(tmp_path):
    settings = tmp_path / "config.yaml"
    settings.write_text("LOG_LEVEL: debug\nMAX_PARALLEL_PROCESSES: 4\nSHOW_PROGRESS: true\n")
    cfg = AppConfig(settings)
    assert cfg.log_level == "DEBUG"
    assert cfg.max_parallel_processes == 4
    assert cfg.show_progress is True


def test_environment_overrides_yaml(tmp_path, monkeypatch):
    settings = tmp_path / "config.yaml"
    settings.write_text("MAX_PARALLEL_PROCESSES: 4\n")
    monkeypatch.setenv("SCATTERQUBIT_MAX_PARALLEL_PROCESSES", "2")
    monkeypatch.setenv("SCATTERQUBIT_OUTPUT_DIR", str(tmp_path / "results"))
    cfg = AppConfig(settings)
    assert cfg.max_parallel_processes == 2
    assert cfg.as_dict()["output_dir"] == str(tmp_path / "results")


def test_missing_settings_file_falls_back_to_defaults(tmp_path, monkeypatch):
    monkeypatch.delenv("SCATTERQUBIT_MAX_PARALLEL_PROCESSES", raising=False)
    cfg = AppConfig(tmp_path / "absent.yaml")
    assert cfg.max_parallel_processes == 1
    assert cfg.log_to_file is False


@pytest.mark.parametrize("value", ["0", "many"])
def test_bad_process_count_is_rejected(tmp_path, monkeypatch, value):
    monkeypatch.setenv("SCATTERQUBIT_MAX_PARALLEL_PROCESSES", value)
    with pytest.raises(ConfigError):
        AppConfig(tmp_path / "absent.yaml")


def test_success_level_is_registered():
    logger = LoggerFactory.get_logger("scatterqubit.test")
    assert LoggerFactory.get_logger("scatterqubit.test") is logger
    assert hasattr(logger, "success")
    assert int(LogLevel.SUCCESS) == 25


# === Run configuration ===

def test_packaged_default_matches_the_model_defaults():
    assert load_run_config().config_hash == RunConfig().config_hash


def test_overrides_reach_nested_settings():
    cfg = load_run_config(overrides=[
        "laser.polarization_angle_deg=30",
        "sequence.kind=ramsey",
        "physical.level_overrides.P32_+1/2=1e15",
    ], seed=9)
    assert cfg.laser.polarization_angle_deg == 30.0
    assert cfg.sequence.kind is SequenceKind.RAMSEY
    assert cfg.physical.level_overrides == {"P32_+1/2": 1e15}
    assert cfg.seed == 9


def test_sweep_inherits_the_top_level_laser():
    cfg = load_run_config(overrides=["laser.rabi=1000.0"])
    assert cfg.sweep_spec().laser.rabi == 1000.0


def test_hash_tracks_content():
    base = load_run_config()
    assert load_run_config().config_hash == base.config_hash
    assert load_run_config(overrides=["sweep.n_points=101"]).config_hash != base.config_hash
    assert len(base.config_hash) == 16


def test_override_into_a_scalar_is_refused():
    document = {"laser": {"rabi": 1.0}}
    with pytest.raises(ConfigError):
        apply_override(document, "laser.rabi.value=2")


def test_unknown_keys_are_reported_with_their_path():
    with pytest.raises(ConfigError, match="sweep.bogus"):
        load_run_config(overrides=["sweep.bogus=1"])


def test_custom_sequence_from_steps():
    cfg = load_run_config(overrides=[
        "sequence.kind=custom",
        'sequence.steps=[{"type": "rotate", "theta_deg": 90}, {"type": "wait", "duration": 0.001}]',
    ])
    seq = cfg.sequence.build()
    assert len(seq) == 2
    assert seq.light_time == pytest.approx(0.001)
    assert seq.segments[0].theta == pytest.approx(math.pi / 2)
    with pytest.raises(ConfigError):
        load_run_config(overrides=["sequence.kind=custom"])


def test_run_config_must_be_json(tmp_path):
    path = tmp_path / "run.yaml"
    path.write_text("laser: {}\n")
    with pytest.raises(FileLoaderError):
        load_json_config(path)
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    with pytest.raises(FileLoaderError):
        load_json_config(broken)


# === Data files ===

def test_timeseries_with_header_and_sigma(tmp_path):
    path = tmp_path / "series.csv"
    path.write_text("time,population,sigma\n0.0,0.0,0.01\n0.1,0.2,0.01\n\n0.2,0.3,0.02\n")
    times, values, sigma = load_timeseries_csv(path)
    assert times.tolist() == [0.0, 0.1, 0.2]
    assert values.tolist() == [0.0, 0.2, 0.3]
    assert sigma.tolist() == [0.01, 0.01, 0.02]


@pytest.mark.parametrize(
    "content",
    ["0.0,0.1\n", "0.0\n0.1\n", "0.0,0.1\n0.1,abc\n", "0.0,0.1\n0.1,0.2,0.3\n"],
)
def test_malformed_timeseries_are_refused(tmp_path, content):
    path = tmp_path / "bad.csv"
    path.write_text(content)
    with pytest.raises(FileLoaderError):
        load_timeseries_csv(path)


# === Output ===

def test_cells_are_locale_independent():
    assert format_cell(0.1 + 0.2) == "0.3"
    assert format_cell(float("nan")) == ""
    assert format_cell(True) == "true"
    assert format_cell(7) == "7"


def test_config_hash_ignores_key_order():
    assert compute_config_hash({"a": 1, "b": [1, 2]}) == compute_config_hash({"b": [1, 2], "a": 1})


def test_csv_writer_adds_a_meta_sidecar(tmp_path):
    writer = OutputWriter()
    target = writer.write_csv(tmp_path / "out" / "table.csv", ("x", "y"), [[1.0, 2.5]], meta={"seed": 1})
    assert target.read_bytes() == b"x,y\n1,2.5\n"
    assert json.loads(OutputWriter.meta_path(target).read_text(encoding="utf-8")) == {"seed": 1}


def test_timed_out_writer_leaves_the_held_lock_alone(tmp_path):
    target = tmp_path / "table.csv"
    OutputWriter().write_text(target, "x\n")
    lock_path = tmp_path / "table.csv.lock"
    with FileLock(str(lock_path), timeout=0):
        with pytest.raises(OutputError, match="Timed out"):
            OutputWriter(lock_timeout=0.05).write_text(target, "y\n")
        assert lock_path.exists()
    assert target.read_text(encoding="utf-8") == "x\n"
