import math

import numpy as np
import pytest

from smmi.approx import difference_set, jensen_mi, jensen_mi_all, jensen_mi_batch
from smmi.core import (
    ChannelRealization,
    Constellation,
    make_constellation,
    sample_rayleigh_channel,
)
from smmi.exceptions import InvalidInputError

H_2X2 = np.array([[1.0 + 0.0j, 0.3j], [0.2 + 0.0j, 1.0 + 0.0j]])
NAMES = ["QPSK", "8PSK", "16QAM"]


def reference_jensen(channel, constellation):
    deltas = difference_set(channel, constellation).deltas
    total = np.sum(np.exp(-0.5 * np.sum(np.abs(deltas) ** 2, axis=-1)))
    return math.log2(len(deltas)) - math.log2(total)


@pytest.mark.parametrize("name", NAMES)
def test_zero_snr_exact(name):
    assert jensen_mi(ChannelRealization(H_2X2, 0.0), make_constellation(name)) == 0.0


@pytest.mark.parametrize(("name", "bits"), [("QPSK", 3.0), ("8PSK", 4.0), ("16QAM", 5.0)])
def test_high_snr_limit(name, bits):
    channel = ChannelRealization(H_2X2, 1e8)
    assert jensen_mi(channel, make_constellation(name)) == pytest.approx(bits, abs=1e-3)


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("gamma_db", [-15.0, 0.0, 6.0, 18.0])
def test_matches_difference_sum(name, gamma_db):
    channel = ChannelRealization.from_snr_db(sample_rayleigh_channel(8, 2), gamma_db)
    constellation = make_constellation(name)
    assert jensen_mi(channel, constellation) == pytest.approx(
        reference_jensen(channel, constellation), rel=1e-10, abs=1e-12
    )


def test_difference_set_size():
    channel = ChannelRealization(H_2X2, 2.0)
    differences = difference_set(channel, make_constellation("8PSK"))
    assert len(differences) == 256
    assert differences.deltas.shape == (256, 2)
    assert np.all(differences.deltas[:: 16 + 1] == 0.0)


def test_nondecreasing_in_snr():
    H = sample_rayleigh_channel(4, 2)
    for name in NAMES:
        constellation = make_constellation(name)
        values = [
            jensen_mi(ChannelRealization.from_snr_db(H, snr), constellation)
            for snr in np.arange(-20.0, 30.0, 2.5)
        ]
        assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
        assert all(0.0 <= value <= constellation.max_bits(2) for value in values)


def test_column_order_invariant():
    H = sample_rayleigh_channel(2, 2)
    for name in NAMES:
        constellation = make_constellation(name)
        first = jensen_mi(ChannelRealization(H, 3.0), constellation)
        second = jensen_mi(ChannelRealization(H[:, ::-1], 3.0), constellation)
        assert second == pytest.approx(first, rel=1e-12)


def test_all_and_single_agree():
    channel = ChannelRealization.from_snr_db(sample_rayleigh_channel(1, 2), 5.0)
    constellations = [make_constellation(name) for name in NAMES]
    values = jensen_mi_all(channel, constellations)
    assert values == [jensen_mi(channel, constellation) for constellation in constellations]


def test_batch_rows_match_single_channels(monkeypatch):
    monkeypatch.setattr("smmi.approx._jensen._CHUNK_ELEMENTS", 3000)
    matrices = np.array([sample_rayleigh_channel(seed, 2) for seed in range(7)])
    gammas = 10.0 ** (np.linspace(-20.0, 20.0, 7) / 10.0)
    constellations = [make_constellation(name) for name in NAMES]

    batch = jensen_mi_batch(gammas, matrices, constellations)
    assert batch.shape == (7, 3)
    for row, (gamma, H) in enumerate(zip(gammas, matrices)):
        expected = jensen_mi_all(ChannelRealization(H, gamma), constellations)
        assert batch[row] == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_larger_arrays():
    channel = ChannelRealization.from_snr_db(sample_rayleigh_channel(0, 4), 10.0)
    constellation = make_constellation("QPSK")
    value = jensen_mi(channel, constellation)
    assert 0.0 < value <= constellation.max_bits(4)
    assert value == pytest.approx(reference_jensen(channel, constellation), rel=1e-10)


def test_batch_rejects_bad_shapes():
    with pytest.raises(InvalidInputError):
        jensen_mi_batch(np.ones(3), np.ones((2, 2, 2)), [make_constellation("QPSK")])
    with pytest.raises(InvalidInputError):
        jensen_mi_batch(np.array([-1.0]), np.ones((1, 2, 2)), [make_constellation("QPSK")])


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("gamma", [1e4, 1e8, 1e12, 1e16])
def test_never_exceeds_max_bits(name, gamma):
    constellation = make_constellation(name)
    value = jensen_mi(ChannelRealization(sample_rayleigh_channel(4, 2), gamma), constellation)
    assert value <= constellation.max_bits(2)
    assert value == pytest.approx(constellation.max_bits(2), abs=1e-6)


def test_self_differences_vanish_in_batch():
    # Equal columns make distinct supersymbols coincide, the rest stay apart
    H = np.array([[1.0 + 0.5j, 1.0 + 0.5j], [0.3 - 1.0j, 0.3 - 1.0j]])
    value = jensen_mi(ChannelRealization(H, 1e16), make_constellation("QPSK"))
    assert value == pytest.approx(2.0, abs=1e-9)


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("alpha", [0.3, 1.0, -2.2])
def test_constellation_rotation_invariant(name, alpha):
    constellation = make_constellation(name)
    rotated = Constellation(constellation.kind, constellation.symbols * np.exp(1j * alpha))
    channel = ChannelRealization.from_snr_db(sample_rayleigh_channel(6, 2), 4.0)
    assert jensen_mi(channel, rotated) == pytest.approx(
        jensen_mi(channel, constellation), rel=1e-12, abs=1e-12
    )
