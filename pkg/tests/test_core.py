import math

import numpy as np
import pytest

from smmi.core import (
    ChannelRealization,
    ConstellationKind,
    angle_parametrized_channel,
    column_energies,
    distance_set,
    gram,
    hermitian_angles,
    make_constellation,
    pair_angles,
    sample_rayleigh_channel,
    sample_snr_db,
    supersymbols,
)
from smmi.exceptions import InvalidInputError
from smmi.util import derive_seed

H_2X2 = np.array([[0.3 + 0.8j, -1.1 + 0.2j], [0.5 - 0.4j, 0.7 + 0.9j]])


@pytest.mark.parametrize("name", ["BPSK", "QPSK", "8PSK", "16QAM"])
def test_unit_average_power(name):
    constellation = make_constellation(name)
    assert np.mean(np.abs(constellation.symbols) ** 2) == pytest.approx(1.0)
    assert len(np.unique(np.round(constellation.symbols, 12))) == constellation.order


@pytest.mark.parametrize(
    ("name", "order", "bits"),
    [("BPSK", 2, 2.0), ("QPSK", 4, 3.0), ("8PSK", 8, 4.0), ("16QAM", 16, 5.0)],
)
def test_orders_and_max_bits(name, order, bits):
    constellation = make_constellation(name)
    assert constellation.order == order
    assert constellation.bits_per_symbol == int(math.log2(order))
    assert constellation.max_bits(2) == bits


def test_qpsk_symbols_exact():
    symbols = make_constellation("QPSK").symbols
    assert symbols.tolist() == [1 + 0j, 1j, -1 + 0j, -1j]


def test_16qam_grid():
    symbols = make_constellation(ConstellationKind.QAM16).symbols * math.sqrt(10)
    assert sorted(set(np.round(symbols.real, 9))) == [-3.0, -1.0, 1.0, 3.0]
    assert sorted(set(np.round(symbols.imag, 9))) == [-3.0, -1.0, 1.0, 3.0]


def test_constellation_names():
    assert make_constellation("qpsk").kind is ConstellationKind.QPSK
    assert make_constellation("16qam").kind is ConstellationKind.QAM16
    assert str(make_constellation("8PSK")) == "8PSK"


def test_unknown_constellation():
    with pytest.raises(InvalidInputError, match="Unknown constellation"):
        make_constellation("64QAM")


def test_symbols_read_only():
    symbols = make_constellation("QPSK").symbols
    with pytest.raises(ValueError, match="read-only"):
        symbols[0] = 0.0


def test_channel_realization():
    channel = ChannelRealization.from_snr_db(H_2X2, 10.0)
    assert channel.gamma == pytest.approx(10.0)
    assert channel.gamma_db == pytest.approx(10.0)
    assert channel.nt == 2
    assert channel.nr == 2
    assert ChannelRealization(H_2X2, 0.0).gamma_db == -math.inf


@pytest.mark.parametrize(
    ("H", "gamma"),
    [
        (np.ones((2, 3)), 1.0),
        (np.ones((3, 3)), 1.0),
        (np.ones(4), 1.0),
        (np.array([[1.0, np.nan], [0.0, 1.0]]), 1.0),
        (np.eye(2), -1.0),
        (np.eye(2), math.inf),
    ],
)
def test_invalid_channel_realization(H, gamma):
    with pytest.raises(InvalidInputError):
        ChannelRealization(H, gamma)


def test_rayleigh_reproducible():
    assert np.array_equal(sample_rayleigh_channel(5, 2), sample_rayleigh_channel(5, 2))
    assert not np.array_equal(sample_rayleigh_channel(5, 2), sample_rayleigh_channel(6, 2))
    assert sample_rayleigh_channel(0, 8).shape == (8, 8)


def test_rayleigh_statistics():
    entries = np.concatenate([sample_rayleigh_channel(seed, 4).ravel() for seed in range(500)])
    assert np.mean(np.abs(entries) ** 2) == pytest.approx(1.0, abs=0.05)
    assert np.var(entries.real) == pytest.approx(0.5, abs=0.03)
    assert np.abs(np.mean(entries)) < 0.05


def test_rayleigh_rejects_antennas():
    with pytest.raises(InvalidInputError):
        sample_rayleigh_channel(0, 3)


def test_snr_sampling():
    values = [sample_snr_db(seed, -20.0, 20.0) for seed in range(200)]
    assert all(-20.0 <= value <= 20.0 for value in values)
    assert sample_snr_db(3, -5.0, 5.0) == sample_snr_db(3, -5.0, 5.0)
    with pytest.raises(InvalidInputError):
        sample_snr_db(0, 5.0, 5.0)


@pytest.mark.parametrize(
    ("theta_h", "phi"), [(0.3, 0.0), (1.0, 2.5), (0.7, -1.2), (1.4, math.pi), (0.01, -3.0)]
)
def test_angle_channel_round_trip(theta_h, phi):
    H = angle_parametrized_channel(theta_h, phi)
    assert column_energies(H) == pytest.approx([1.0, 1.0])
    angles = hermitian_angles(H[:, 0], H[:, 1])
    assert angles.theta_h == pytest.approx(theta_h)
    assert angles.phi == pytest.approx(phi)


def test_angle_channel_domain():
    with pytest.raises(InvalidInputError):
        angle_parametrized_channel(-0.1, 0.0)
    with pytest.raises(InvalidInputError):
        angle_parametrized_channel(0.5, -math.pi)


def test_orthogonal_columns():
    angles = hermitian_angles(np.array([1.0, 0.0]), np.array([0.0, 1j]))
    assert angles.theta_h == pytest.approx(math.pi / 2)
    assert angles.phi == 0.0


def test_pseudo_angle_folds_onto_pi():
    theta_h, phi = pair_angles(np.array([-1.0 + 0.0j]), np.array([1.0]), np.array([1.0]))
    assert theta_h[0] == 0.0
    assert phi[0] == math.pi


def test_zero_vector_angles():
    with pytest.raises(InvalidInputError, match="zero-norm"):
        hermitian_angles(np.zeros(2), np.ones(2))


def test_gram_of_stack():
    stack = np.stack([H_2X2, 2.0 * H_2X2])
    grams = gram(stack)
    assert grams.shape == (2, 2, 2)
    assert np.allclose(grams[0], H_2X2.conj().T @ H_2X2)
    assert np.allclose(grams[1], 4.0 * grams[0])
    assert np.allclose(column_energies(stack)[0], np.diag(grams[0]).real)


def test_supersymbol_order():
    constellation = make_constellation("QPSK")
    points = supersymbols(H_2X2, constellation)
    assert points.shape == (8, 2)
    for antenna in range(2):
        for k, symbol in enumerate(constellation.symbols):
            assert np.allclose(points[antenna * 4 + k], H_2X2[:, antenna] * symbol)


@pytest.mark.parametrize("name", ["QPSK", "8PSK", "16QAM"])
def test_distance_set_matches_pairwise(name):
    constellation = make_constellation(name)
    points = supersymbols(H_2X2, constellation)
    pairwise = np.sum(np.abs(points[:, None, :] - points[None, :, :]) ** 2, axis=-1)

    distances = distance_set(H_2X2, constellation)
    m = constellation.order
    assert distances.D.shape == (2 * m, 2 * m)
    assert np.allclose(distances.D, pairwise)
    assert np.linalg.matrix_rank(distances.D_L) <= 4


def test_distance_set_two_antennas_only():
    with pytest.raises(InvalidInputError):
        distance_set(np.eye(4), make_constellation("QPSK"))


def random_unitary(seed, n):
    generator = np.random.default_rng(seed)
    z = generator.normal(size=(n, n)) + 1j * generator.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.mark.parametrize("name", ["BPSK", "QPSK", "8PSK", "16QAM"])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_distance_set_unitary_invariant(name, seed):
    constellation = make_constellation(name)
    H = sample_rayleigh_channel(seed, 2)
    U = random_unitary(seed + 10, 2)
    assert np.allclose(U.conj().T @ U, np.eye(2))
    rotated = distance_set(U @ H, constellation)
    original = distance_set(H, constellation)
    assert np.allclose(rotated.D, original.D, rtol=0.0, atol=1e-10)
    assert np.allclose(rotated.D_L, original.D_L, rtol=0.0, atol=1e-10)


@pytest.mark.parametrize("alpha", [0.4, -1.3, math.pi])
def test_angles_global_phase_invariant(alpha):
    H = sample_rayleigh_channel(3, 4)
    phase = np.exp(1j * alpha)
    for i in range(4):
        for j in range(i + 1, 4):
            original = hermitian_angles(H[:, i], H[:, j])
            rotated = hermitian_angles(phase * H[:, i], phase * H[:, j])
            assert rotated.theta_h == pytest.approx(original.theta_h, abs=1e-12)
            assert rotated.phi == pytest.approx(original.phi, abs=1e-12)


@pytest.mark.parametrize("name", ["QPSK", "8PSK", "16QAM"])
def test_column_swap_permutes_blocks(name):
    constellation = make_constellation(name)
    m = constellation.order
    original = distance_set(H_2X2, constellation)
    swapped = distance_set(H_2X2[:, ::-1], constellation)

    order = np.concatenate([np.arange(m, 2 * m), np.arange(m)])
    assert np.allclose(swapped.D, original.D[np.ix_(order, order)], rtol=0.0, atol=1e-12)
    assert np.allclose(swapped.D_L, original.D_L.T, rtol=0.0, atol=1e-12)
    assert np.array_equal(swapped.D_S, original.D_S)


def test_distance_set_structure():
    distances = distance_set(H_2X2, make_constellation("16QAM"))
    assert np.allclose(distances.D, distances.D.T)
    assert np.all(np.diag(distances.D) == 0.0)
    assert np.all(distances.D >= 0.0)


def test_identity_bpsk_distances():
    distances = distance_set(np.eye(2), make_constellation("BPSK"))
    assert np.allclose(distances.D_S, [[0.0, 4.0], [4.0, 0.0]])
    assert np.allclose(distances.D_L, 2.0)


def test_cross_distance_rank_over_random_draws():
    names = ["QPSK", "8PSK", "16QAM"]
    constellations = [make_constellation(name) for name in names]
    for draw in range(1000):
        H = sample_rayleigh_channel(derive_seed(42, draw), 2)
        D_L = distance_set(H, constellations[draw % 3]).D_L
        singular = np.linalg.svd(D_L, compute_uv=False)
        assert np.count_nonzero(singular > 1e-9 * singular[0]) <= 4
