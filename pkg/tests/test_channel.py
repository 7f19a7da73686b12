import numpy as np
import pytest

from agqec.channel import NoiseModel, sample_error


def test_model_validation():
    with pytest.raises(ValueError):
        NoiseModel("gaussian", 0.1)
    with pytest.raises(ValueError):
        NoiseModel("xz3", 1.5)


def test_p_zero_and_one():
    rng = np.random.default_rng(0)
    assert not np.any(sample_error(NoiseModel("uniform_pauli", 0.0), 3, 27, rng))
    e = sample_error(NoiseModel("uniform_pauli", 1.0), 3, 27, rng)
    assert np.all(e[:27] | e[27:])  # every qudit hit


def test_uniform_pauli_statistics():
    rng = np.random.default_rng(42)
    model = NoiseModel("uniform_pauli", 0.05)
    trials, n = 100_000, 27
    weights = np.empty(trials)
    for t in range(trials):
        e = sample_error(model, 3, n, rng)
        weights[t] = np.count_nonzero(e[:n] | e[n:])
    mean = weights.mean()
    sigma = np.sqrt(n * 0.05 * 0.95 / trials)
    assert abs(mean - n * 0.05) < 4 * sigma
    # per-qudit marginal pooled over all slots
    phat = weights.sum() / (trials * n)
    sig_marg = np.sqrt(0.05 * 0.95 / (trials * n))
    assert abs(phat - 0.05) < 4 * sig_marg


def test_uniform_pauli_value_distribution():
    # conditioned on a hit, the 8 nonzero (a, b) pairs are uniform
    rng = np.random.default_rng(7)
    model = NoiseModel("uniform_pauli", 1.0)
    counts = np.zeros(9)
    for _ in range(2000):
        e = sample_error(model, 3, 27, rng)
        vals = e[:27] + 3 * e[27:]
        for v in vals:
            counts[v] += 1
    total = counts[1:].sum()
    assert counts[0] == 0
    expected = total / 8
    sigma = np.sqrt(total * (1 / 8) * (7 / 8))
    assert np.all(np.abs(counts[1:] - expected) < 5 * sigma)


def test_xz3_type_frequencies():
    rng = np.random.default_rng(3)
    model = NoiseModel("xz3", 0.05)
    trials, n = 100_000, 27
    type_counts = {"x": 0, "z": 0, "xz": 0}
    for _ in range(trials):
        e = sample_error(model, 3, n, rng)
        x, z = e[:n] != 0, e[n:] != 0
        type_counts["x"] += int(np.count_nonzero(x & ~z))
        type_counts["z"] += int(np.count_nonzero(z & ~x))
        type_counts["xz"] += int(np.count_nonzero(x & z))
    slots = trials * n
    sigma = np.sqrt((0.05 / 3) * (1 - 0.05 / 3) / slots)
    for name, c in type_counts.items():
        assert abs(c / slots - 0.05 / 3) < 4 * sigma, name


def test_xz3_exponents_nonzero_and_in_range():
    rng = np.random.default_rng(9)
    e = sample_error(NoiseModel("xz3", 1.0), 5, 50, rng)
    hit = (e[:50] != 0) | (e[50:] != 0)
    assert np.all(hit)
    assert np.all(e < 5)


def test_same_seed_same_stream():
    model = NoiseModel("xz3", 0.05)
    a = [sample_error(model, 3, 27, np.random.default_rng(1234)) for _ in range(1)]
    b = [sample_error(model, 3, 27, np.random.default_rng(1234)) for _ in range(1)]
    assert np.array_equal(a[0], b[0])
    rng1, rng2 = np.random.default_rng(77), np.random.default_rng(77)
    for _ in range(50):
        assert np.array_equal(sample_error(model, 3, 27, rng1), sample_error(model, 3, 27, rng2))
