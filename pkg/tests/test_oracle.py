import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import logsumexp

from smmi import options
from smmi.core import (
    ChannelRealization,
    Constellation,
    angle_parametrized_channel,
    make_constellation,
    sample_rayleigh_channel,
    supersymbols,
)
from smmi.exceptions import InvalidInputError
from smmi.oracle import MiEstimate, capacity_gaussian, complex_normal, mi_finite, mi_finite_batch
from smmi.util import derive_seed

H_2X2 = np.array([[0.3 + 0.8j, -1.1 + 0.2j], [0.5 - 0.4j, 0.7 + 0.9j]])
NAMES = ["QPSK", "8PSK", "16QAM"]


def reference_mi(channel, constellation, n_draws, seed):
    """Loop over every supersymbol and noise draw of the same noise stream."""
    points = supersymbols(channel.H, constellation)
    noise = complex_normal(seed, (n_draws, channel.nr))
    root_gamma = math.sqrt(channel.gamma)
    total = 0.0
    for x_a in points:
        for w in noise:
            exponents = [
                -np.sum(np.abs(root_gamma * (x_a - x_b) + w) ** 2) + np.sum(np.abs(w) ** 2)
                for x_b in points
            ]
            total += logsumexp(exponents)
    mean = total / (len(points) * n_draws)
    return (math.log(len(points)) - mean) / math.log(2)


@pytest.mark.parametrize(("name", "gamma_db"), [("QPSK", 0.0), ("8PSK", 7.0), ("16QAM", -3.0)])
def test_matches_reference_loop(name, gamma_db):
    channel = ChannelRealization.from_snr_db(H_2X2, gamma_db)
    constellation = make_constellation(name)
    estimate = mi_finite(channel, constellation, 40, 11)
    assert estimate.value == pytest.approx(reference_mi(channel, constellation, 40, 11), rel=1e-9)
    assert estimate.n_noise_draws == 40
    assert estimate.max_bits == constellation.max_bits(2)


def test_chunking_does_not_change_result(monkeypatch):
    channel = ChannelRealization.from_snr_db(H_2X2, 5.0)
    constellation = make_constellation("16QAM")
    whole = mi_finite(channel, constellation, 100, 3)
    monkeypatch.setattr("smmi.oracle._monte_carlo._CHUNK_ELEMENTS", 1000)
    chunked = mi_finite(channel, constellation, 100, 3)
    assert chunked.value == pytest.approx(whole.value, rel=1e-12, abs=1e-12)
    assert chunked.std_error == pytest.approx(whole.std_error, rel=1e-9)


@pytest.mark.parametrize("name", NAMES)
def test_zero_snr(name):
    estimate = mi_finite(ChannelRealization(H_2X2, 0.0), make_constellation(name), 50, 0)
    assert estimate.value == 0.0
    assert estimate.std_error == 0.0


@pytest.mark.parametrize(("name", "bits"), [("QPSK", 3.0), ("8PSK", 4.0), ("16QAM", 5.0)])
def test_high_snr_saturates(name, bits):
    channel = ChannelRealization.from_snr_db(np.eye(2), 40.0)
    estimate = mi_finite(channel, make_constellation(name), 200, 1)
    assert estimate.value == pytest.approx(bits, abs=0.02)
    assert estimate.clamped <= bits


def test_reproducible_seeds():
    channel = ChannelRealization.from_snr_db(H_2X2, 3.0)
    constellation = make_constellation("QPSK")
    first = mi_finite(channel, constellation, 100, 9)
    assert mi_finite(channel, constellation, 100, 9) == first
    assert mi_finite(channel, constellation, 100, 10).value != first.value


def test_draw_count():
    channel = ChannelRealization.from_snr_db(H_2X2, 3.0)
    constellation = make_constellation("QPSK")
    with pytest.raises(InvalidInputError):
        mi_finite(channel, constellation, 0, 0)
    assert mi_finite(channel, constellation, 1, 0).std_error == math.inf


@settings(max_examples=30, deadline=None)
@given(
    seed=st.integers(0, 2**32),
    gamma_db=st.floats(-20.0, 20.0),
    name=st.sampled_from(NAMES),
)
def test_estimate_within_feasible_range(seed, gamma_db, name):
    channel = ChannelRealization.from_snr_db(sample_rayleigh_channel(seed, 2), gamma_db)
    constellation = make_constellation(name)
    estimate = mi_finite(channel, constellation, 200, derive_seed(seed, 1))
    slack = 3.0 * estimate.std_error
    assert -slack <= estimate.value <= constellation.max_bits(2) + slack


def test_estimate_helpers():
    estimate = MiEstimate(3.01, 100, 0.005, 3.0)
    assert estimate.clamped == 3.0
    assert MiEstimate(-0.01, 100, 0.005, 3.0).clamped == 0.0
    assert estimate.within(3.0)
    assert not estimate.within(2.9)


def test_batch_matches_sequential_calls():
    channels = [
        ChannelRealization.from_snr_db(sample_rayleigh_channel(seed, 2), 2.0 * seed)
        for seed in range(3)
    ]
    constellations = [make_constellation(name) for name in NAMES]
    batch = mi_finite_batch(channels, constellations, 30, 77)
    assert len(batch) == 3
    for i, channel in enumerate(channels):
        for j, constellation in enumerate(constellations):
            expected = mi_finite(channel, constellation, 30, derive_seed(77, i, j))
            assert batch[i][j] == expected


def test_batch_independent_of_workers(monkeypatch):
    channels = [
        ChannelRealization.from_snr_db(sample_rayleigh_channel(seed, 2), 0.0) for seed in range(4)
    ]
    constellations = [make_constellation("QPSK"), make_constellation("8PSK")]
    serial = mi_finite_batch(channels, constellations, 20, 5)
    monkeypatch.setattr(options, "max_workers", 3)
    assert mi_finite_batch(channels, constellations, 20, 5) == serial


def test_batch_rejects_empty():
    with pytest.raises(InvalidInputError):
        mi_finite_batch([], [make_constellation("QPSK")], 10, 0)


def test_capacity_zero_snr():
    assert capacity_gaussian(ChannelRealization(H_2X2, 0.0), 100, 0).value == 0.0


def test_capacity_exceeds_symbol_rate_at_high_snr():
    # Knowing the antenna, a Gaussian symbol alone carries log2(1 + γ) bits
    channel = ChannelRealization.from_snr_db(np.eye(2), 20.0)
    estimate = capacity_gaussian(channel, 2000, 4)
    assert estimate.value > 6.0
    assert estimate.max_bits == math.inf


def test_capacity_vanishes_at_low_snr():
    channel = ChannelRealization.from_snr_db(H_2X2, -20.0)
    estimate = capacity_gaussian(channel, 20000, 4)
    assert abs(estimate.value) < 0.1


def test_capacity_grows_with_snr():
    values = [
        capacity_gaussian(ChannelRealization.from_snr_db(H_2X2, snr), 1000, 2).value
        for snr in [-10.0, 0.0, 10.0, 20.0]
    ]
    assert values == sorted(values)


def brute_force_mi(H, gamma, symbols, n_draws, seed, chunk=20_000):
    """Finite-alphabet MI from noise drawn outside the package, in chunks."""
    points = np.array([H[:, l] * s for l in range(H.shape[1]) for s in symbols])
    n_points, nr = points.shape
    generator = np.random.default_rng(seed)
    integrand = []
    for start in range(0, n_draws, chunk):
        size = min(chunk, n_draws - start)
        w = (generator.standard_normal((size, nr)) + 1j * generator.standard_normal((size, nr)))
        w /= math.sqrt(2.0)
        y = math.sqrt(gamma) * points[:, None, :] + w[None, :, :]
        # distance[a, n, b] = ‖y_an - √γ x_b‖²
        distance = np.sum(np.abs(y[:, :, None, :] - math.sqrt(gamma) * points) ** 2, axis=-1)
        own = np.sum(np.abs(w) ** 2, axis=-1)[None, :]
        integrand.append(np.mean(logsumexp(own[..., None] - distance, axis=-1), axis=0))
    values = np.concatenate(integrand)
    mean = (math.log(n_points) - np.mean(values)) / math.log(2)
    return mean, np.std(values, ddof=1) / math.sqrt(n_draws) / math.log(2)


def brute_force_capacity(H, gamma, n_draws, seed):
    """Gaussian-codebook SM capacity from explicit covariances and their inverses."""
    nr, nt = H.shape
    generator = np.random.default_rng(seed)
    covariances = [gamma * np.outer(H[:, l], H[:, l].conj()) + np.eye(nr) for l in range(nt)]
    inverses = [np.linalg.inv(c) for c in covariances]
    log_dets = [math.log(np.linalg.det(c).real) for c in covariances]

    entropies = []
    for l in range(nt):
        z = generator.standard_normal((n_draws, nr))
        z = z + 1j * generator.standard_normal((n_draws, nr))
        y = (z / math.sqrt(2.0)) @ np.linalg.cholesky(covariances[l]).T
        log_components = np.stack(
            [
                -nr * math.log(math.pi)
                - log_dets[m]
                - np.einsum("ni,ij,nj->n", y.conj(), inverses[m], y).real
                for m in range(nt)
            ],
            axis=-1,
        )
        entropies.append(math.log(nt) - logsumexp(log_components, axis=-1))
    values = np.mean(entropies, axis=0) - nr * (math.log(math.pi) + 1.0)
    return np.mean(values) / math.log(2), np.std(values, ddof=1) / math.sqrt(n_draws) / math.log(2)


def test_orthogonal_channel_against_brute_force():
    H = angle_parametrized_channel(math.pi / 2, 0.0)
    qpsk = make_constellation("QPSK")
    reference, reference_error = brute_force_mi(H, 2.0, qpsk.symbols, 1_000_000, 2024)
    estimate = mi_finite(ChannelRealization(H, 2.0), qpsk, 5000, 1)
    tolerance = 4.0 * math.hypot(estimate.std_error, reference_error)
    assert abs(estimate.value - reference) <= tolerance


def test_capacity_against_brute_force():
    reference, reference_error = brute_force_capacity(np.eye(2), 10.0, 1_000_000, 2025)
    estimate = capacity_gaussian(ChannelRealization(np.eye(2), 10.0), 5000, 1)
    tolerance = 4.0 * math.hypot(estimate.std_error, reference_error)
    assert abs(estimate.value - reference) <= tolerance


def test_capacity_bounds_qpsk():
    qpsk = make_constellation("QPSK")
    for seed in range(6):
        H = sample_rayleigh_channel(derive_seed(30, seed), 2)
        for gamma_db in [-10.0, 0.0, 10.0, 20.0]:
            channel = ChannelRealization.from_snr_db(H, gamma_db)
            capacity = capacity_gaussian(channel, 2000, derive_seed(31, seed))
            finite = mi_finite(channel, qpsk, 2000, derive_seed(32, seed))
            slack = 4.0 * math.hypot(capacity.std_error, finite.std_error)
            assert capacity.value >= finite.value - slack


def test_nondecreasing_in_snr_statistically():
    qpsk = make_constellation("QPSK")
    generator = np.random.default_rng(33)
    for index in range(200):
        H = sample_rayleigh_channel(derive_seed(34, index), 2)
        low_db = generator.uniform(-15.0, 12.0)
        low = mi_finite(
            ChannelRealization.from_snr_db(H, low_db), qpsk, 300, derive_seed(35, index)
        )
        high = mi_finite(
            ChannelRealization.from_snr_db(H, low_db + 3.0), qpsk, 300, derive_seed(36, index)
        )
        assert low.value <= high.value + 4.0 * math.hypot(low.std_error, high.std_error)


@pytest.mark.parametrize("name", NAMES)
def test_column_swap_invariant_statistically(name):
    constellation = make_constellation(name)
    H = sample_rayleigh_channel(37, 2)
    original = mi_finite(ChannelRealization(H, 3.0), constellation, 2000, 38)
    swapped = mi_finite(ChannelRealization(H[:, ::-1], 3.0), constellation, 2000, 39)
    slack = 4.0 * math.hypot(original.std_error, swapped.std_error)
    assert abs(original.value - swapped.value) <= slack


@pytest.mark.parametrize("name", NAMES)
def test_constellation_rotation_invariant_statistically(name):
    constellation = make_constellation(name)
    rotated = Constellation(constellation.kind, constellation.symbols * np.exp(0.7j))
    channel = ChannelRealization(sample_rayleigh_channel(40, 2), 3.0)
    original = mi_finite(channel, constellation, 2000, 41)
    turned = mi_finite(channel, rotated, 2000, 42)
    assert abs(original.value - turned.value) <= 4.0 * math.hypot(
        original.std_error, turned.std_error
    )


def test_std_error_halves_with_four_times_the_draws():
    channel = ChannelRealization.from_snr_db(H_2X2, 2.0)
    constellation = make_constellation("8PSK")
    few = mi_finite(channel, constellation, 1000, 43)
    many = mi_finite(channel, constellation, 4000, 44)
    ratio = few.std_error / many.std_error
    assert 2.0 / 1.5 <= ratio <= 2.0 * 1.5
