import math
import os

import numpy as np
import pytest

from scalablemax import harness
from scalablemax.harness import (
    CSV_HEADER,
    ExperimentConfig,
    ExperimentRecord,
    default_max_iterations,
    load_config_file,
    run_experiment,
    sweep,
)


def small_config(**kw):
    defaults = dict(agents=30, m=8, runs=50, base_seed=7, max_iterations=200)
    defaults.update(kw)
    return ExperimentConfig(**defaults)


# ---------------------------------------------------------------- config


def test_default_max_iterations():
    assert default_max_iterations(1000) == 900
    assert default_max_iterations(2) == 450
    assert default_max_iterations(1) == 450
    assert default_max_iterations(1024) == 900
    assert default_max_iterations(1025) == 950


def test_config_defaults():
    config = ExperimentConfig()
    assert config.agents == 1000
    assert config.m == 8
    assert config.scheme == "scalablemax"
    assert config.noise_db == -math.inf
    assert config.runs == 10_000
    assert config.base_seed == 1
    assert config.iteration_cap == 900


def test_noise_variance_property():
    assert small_config().noise_variance == 0.0
    assert small_config(noise_db=0.0).noise_variance == pytest.approx(1.0)
    assert small_config(noise_db=10.0).noise_variance == pytest.approx(10.0)


def test_config_validation():
    with pytest.raises(ValueError):
        small_config(m=3)
    with pytest.raises(ValueError):
        small_config(m=0)
    with pytest.raises(ValueError):
        small_config(runs=0)
    with pytest.raises(ValueError):
        small_config(scheme="scalablemax-ec")  # tau missing
    with pytest.raises(ValueError):
        small_config(tau=2)  # tau with the plain scheme
    with pytest.raises(ValueError):
        small_config(scheme="multi-coordinator")  # topology missing
    with pytest.raises(ValueError):
        small_config(initial_estimate="012")
    with pytest.raises(ValueError):
        small_config(scheme="bogus")
    with pytest.raises(ValueError):
        small_config(prefix_length=-1)


def test_grid_expansion_order():
    config = small_config(
        scheme="scalablemax-ec",
        agents=[10, 20],
        noise_db=[0.0, 5.0],
        tau=[1, 2],
    )
    points = list(config.grid_points())
    assert len(points) == 8
    combos = [(p.agents, p.noise_db, p.tau) for p in points]
    assert combos == [
        (10, 0.0, 1), (10, 0.0, 2), (10, 5.0, 1), (10, 5.0, 2),
        (20, 0.0, 1), (20, 0.0, 2), (20, 5.0, 1), (20, 5.0, 2),
    ]
    for p in points:
        assert not p.is_grid()


def test_grid_scalar_guard():
    config = small_config(agents=[10, 20])
    assert config.is_grid()
    with pytest.raises(ValueError):
        config.require_scalar()
    with pytest.raises(ValueError):
        _ = config.n


def test_empty_grid_axis():
    config = small_config(noise_db=[])
    with pytest.raises(ValueError):
        list(config.grid_points())


# -------------------------------------------------------------- records


def test_csv_header_text():
    assert CSV_HEADER == (
        "agents,m,noise_power,correction,termination_parameter,runs,"
        "success_rate,average_iterations_in_successful_runs,"
        "average_survivor_count,timeout_rate,base_seed"
    )


def test_csv_row_matches_header():
    record = ExperimentRecord(
        agents=100, m=8, noise_power=-math.inf, correction=False,
        termination_parameter=None, runs=10, success_rate=1.0,
        average_iterations_in_successful_runs=9.5,
        average_survivor_count=2.0, timeout_rate=0.0, base_seed=3,
    )
    cells = record.csv_row().split(",")
    header = CSV_HEADER.split(",")
    assert len(cells) == len(header)
    named = dict(zip(header, cells))
    assert named["agents"] == "100"
    assert named["noise_power"] == "-inf"
    assert named["correction"] == "False"
    assert named["termination_parameter"] == ""
    assert named["success_rate"] == "1.0"
    assert named["base_seed"] == "3"


def test_csv_row_with_correction():
    record = ExperimentRecord(
        agents=50, m=4, noise_power=2.5, correction=True,
        termination_parameter=6, runs=5, success_rate=0.8,
        average_iterations_in_successful_runs=12.25,
        average_survivor_count=1.5, timeout_rate=0.2, base_seed=1,
    )
    named = dict(zip(CSV_HEADER.split(","), record.csv_row().split(",")))
    assert named["correction"] == "True"
    assert named["termination_parameter"] == "6"
    assert named["noise_power"] == "2.5"


# ------------------------------------------------------------ experiments


def test_run_experiment_deterministic():
    config = small_config(noise_db=4.0)
    first = run_experiment(config)
    second = run_experiment(config)
    assert first == second


def test_run_experiment_zero_noise_succeeds():
    record = run_experiment(small_config())
    assert record.success_rate == 1.0
    assert record.timeout_rate == 0.0
    assert record.correction is False
    assert record.termination_parameter is None
    assert record.noise_power == -math.inf
    assert 1.0 <= record.average_survivor_count <= 8.0


def test_record_reconstruction_from_runs():
    config = small_config(noise_db=6.0, runs=80)
    results = list(harness.iterate_runs(config))
    record = run_experiment(config)
    successes = [r for r in results if r.success]
    assert record.success_rate == pytest.approx(len(successes) / 80)
    assert record.timeout_rate == pytest.approx(
        sum(r.timeout for r in results) / 80
    )
    assert record.average_iterations_in_successful_runs == pytest.approx(
        np.mean([r.iterations for r in successes])
    )
    assert record.average_survivor_count == pytest.approx(
        np.mean([r.survivor_count for r in successes])
    )


def test_all_timeout_records_nan():
    # one iteration is never enough to reach the counter threshold
    config = small_config(
        scheme="scalablemax-ec", tau=5, noise_db=0.0, runs=20,
        max_iterations=1,
    )
    record = run_experiment(config)
    assert record.timeout_rate == 1.0
    assert record.success_rate == 0.0
    assert math.isnan(record.average_iterations_in_successful_runs)
    assert math.isnan(record.average_survivor_count)


def test_ec_record_flags():
    record = run_experiment(small_config(scheme="scalablemax-ec", tau=3))
    assert record.correction is True
    assert record.termination_parameter == 3


def test_rb_record_conventions():
    record = run_experiment(small_config(scheme="rb", agents=12, runs=60))
    assert record.success_rate == 1.0
    assert record.average_survivor_count == 1.0
    assert record.timeout_rate == 0.0
    assert record.correction is False
    # complete graph on 12 nodes: expected spreading time is n * H-ish;
    # just require a sane positive mean
    assert record.average_iterations_in_successful_runs > 0


def test_rp_record_conventions():
    record = run_experiment(small_config(scheme="rp", agents=10, runs=60))
    assert record.success_rate == 1.0
    assert record.average_survivor_count == 1.0
    assert record.average_iterations_in_successful_runs > 0


def test_sweep_writes_csv(tmp_path):
    out = tmp_path / "out.csv"
    config = small_config(noise_db=[0.0, 5.0], runs=20)
    records = sweep(config, str(out))
    assert len(records) == 2
    lines = out.read_text().strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 3
    assert lines[1] == records[0].csv_row()
    assert lines[2] == records[1].csv_row()
    # the atomic write must not leave temp files behind
    assert [p.name for p in tmp_path.iterdir()] == ["out.csv"]


def test_sweep_requires_grid(tmp_path):
    out = tmp_path / "single.csv"
    with pytest.raises(ValueError):
        sweep(small_config(), str(out))
    assert not out.exists()


# --------------------------------------------------------------- seeding


def test_streams_are_independent():
    a = harness.agent_seed_array(1, 0, 8)
    b = harness.agent_seed_array(1, 1, 8)
    assert not np.array_equal(a, b)
    n0 = harness.noise_rng(1, 0).standard_normal(4)
    n1 = harness.noise_rng(1, 0).standard_normal(4)
    np.testing.assert_array_equal(n0, n1)
    v = harness.values_rng(1, 0).standard_normal(4)
    assert not np.array_equal(n0, v)


def test_build_agents_prefixes():
    config = small_config(agents=6, prefix_length=4)
    agents = harness.build_agents(config, 0)
    assert all(len(a.prefix) == 4 for a in agents)
    assert all(set(a.prefix) <= {0, 1} for a in agents)
    again = harness.build_agents(config, 0)
    assert [a.prefix for a in agents] == [a.prefix for a in again]
    assert [a.tail_seed for a in agents] == [a.tail_seed for a in again]


# ----------------------------------------------------------- config files


def test_load_config_file_equals_syntax(tmp_path):
    path = tmp_path / "exp.cfg"
    path.write_text(
        "# an experiment\n"
        "scheme = scalablemax-ec\n"
        "agents=500\n"
        "noise-db = 3.5\n"
        "tau 4\n"
        "\n"
        "runs 100  # trailing comment\n"
    )
    options = load_config_file(str(path))
    assert options == {
        "scheme": "scalablemax-ec",
        "agents": "500",
        "noise_db": "3.5",
        "tau": "4",
        "runs": "100",
    }


def test_load_config_file_rejects_garbage(tmp_path):
    path = tmp_path / "bad.cfg"
    path.write_text("justonetoken\n")
    with pytest.raises(ValueError):
        load_config_file(str(path))
