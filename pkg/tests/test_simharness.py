import numpy as np
import pytest

from agqec.agcode import build_one_point_code
from agqec.channel import NoiseModel
from agqec.curve import CurveSpec
from agqec.dqn import QNetwork, TrainConfig, train
from agqec.gf import build_field
from agqec.simharness import (
    SweepRow,
    estimate_failure_rate,
    paired_eval,
    read_csv,
    run_trial,
    sweep,
    trial_rng,
    wilson_interval,
    write_csv,
    write_svg,
)
from agqec.stabilizer import StabilizerCode


@pytest.fixture(scope="module")
def flagship():
    f9 = build_field(3, 2)
    return StabilizerCode.from_hermitian_code(build_one_point_code(CurveSpec(3, 4), f9, 7))


@pytest.fixture(scope="module")
def tiny_net(flagship):
    return train(flagship, NoiseModel("xz3", 0.05), TrainConfig(episodes=2000, seed=31))


def test_wilson_interval_basics():
    lo, hi = wilson_interval(0, 1000)
    assert lo == 0.0 and hi < 0.005
    lo, hi = wilson_interval(500, 1000)
    assert lo < 0.5 < hi
    lo, hi = wilson_interval(1000, 1000)
    assert hi == 1.0 and lo > 0.99


def test_p_zero_always_succeeds(flagship):
    noise = NoiseModel("xz3", 0.0)
    for t in range(200):
        out = run_trial(flagship, "greedy", noise, None, trial_rng(5, t))
        assert out.result == "success" and out.error_weight == 0
    row = estimate_failure_rate(flagship, "greedy", noise, 500, seed=5)
    assert row.failures == 0 and row.rate == 0.0 and row.ci_low == 0.0


def test_run_trial_validation(flagship):
    with pytest.raises(ValueError):
        run_trial(flagship, "rl_on_greedy", NoiseModel("xz3", 0.01), None, trial_rng(0, 0))
    with pytest.raises(ValueError):
        run_trial(flagship, "magic", NoiseModel("xz3", 0.01), None, trial_rng(0, 0))


def test_outcome_consistency(flagship, tiny_net):
    # for every trial the classification is consistent with the syndrome
    noise = NoiseModel("xz3", 0.08)
    for t in range(300):
        out = run_trial(flagship, "rl_on_greedy", noise, tiny_net, trial_rng(9, t))
        assert out.result in ("success", "logical_failure", "unresolved")


def test_paired_runs_share_error_samples(flagship, tiny_net):
    noise = NoiseModel("xz3", 0.05)
    row_g = estimate_failure_rate(flagship, "greedy", noise, 400, seed=77)
    row_r = estimate_failure_rate(flagship, "rl_on_greedy", noise, 400, seed=77, net=tiny_net)
    stats = paired_eval(flagship, noise, 400, 77, tiny_net)
    assert stats.greedy == row_g
    assert stats.rl == row_r
    assert stats.greedy.failures >= stats.rl.failures - stats.rl_only_failures


def test_determinism_across_worker_counts(flagship):
    noise = NoiseModel("xz3", 0.05)
    one = paired_eval(flagship, noise, 300, 13, None, workers=1)
    two = paired_eval(flagship, noise, 300, 13, None, workers=2)
    assert one.greedy == two.greedy
    assert one.residual_trials == two.residual_trials


def test_sweep_rows_and_files(tmp_path, flagship, tiny_net):
    p_list = [0.005, 0.01, 0.02, 0.05]
    csv_path = tmp_path / "rates.csv"
    svg_path = tmp_path / "rates.svg"
    rows = sweep(
        flagship,
        ["greedy", "rl_on_greedy"],
        p_list,
        trials=300,
        seed=3,
        net=tiny_net,
        csv_path=csv_path,
        svg_path=svg_path,
    )
    assert len(rows) == 8
    for row in rows:
        assert row.ci_low <= row.rate <= row.ci_high
        assert row.rate == row.failures / row.trials

    parsed = read_csv(csv_path)
    assert parsed == rows  # exact round trip

    svg = svg_path.read_text()
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert 'width="800" height="600"' in svg
    assert svg.count("<polyline") == 2
    assert "physical error rate" in svg and "logical failure rate" in svg


def test_sweep_validates_inputs(flagship):
    with pytest.raises(ValueError):
        sweep(flagship, ["greedy"], [], trials=10, seed=0)
    with pytest.raises(ValueError):
        sweep(flagship, ["espresso"], [0.01], trials=10, seed=0)


def test_csv_write_failure_leaves_no_partial(tmp_path, flagship):
    rows = [SweepRow(0.01, "greedy", 10, 1, 0.1, 0.0, 0.3)]
    bad = tmp_path / "missing_dir" / "out.csv"
    with pytest.raises(OSError):
        write_csv(rows, bad)
    assert not bad.exists()


def test_seed_changes_results(flagship):
    noise = NoiseModel("xz3", 0.05)
    a = estimate_failure_rate(flagship, "greedy", noise, 500, seed=1)
    b = estimate_failure_rate(flagship, "greedy", noise, 500, seed=2)
    c = estimate_failure_rate(flagship, "greedy", noise, 500, seed=1)
    assert a == c
    assert a != b
