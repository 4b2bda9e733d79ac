import math

import numpy as np
import pytest

from smmi.exceptions import InvalidInputError
from smmi.features import FeatureOption
from smmi.harness import (
    JensenPredictor,
    angle_sweep,
    default_angle_grids,
    ergodic_curve,
    feature_ablation,
    feature_histograms,
    format_table,
    gen_dataset,
    multi_antenna_experiment,
    option_for_antennas,
    received_cloud,
    write_table,
)
from smmi.training import TrainConfig


def small_dataset(path, nt, n_samples, constellations=("QPSK", "8PSK")):
    return gen_dataset(
        nt=nt,
        n_samples=n_samples,
        n_noise_draws=30,
        snr_range_db=(-10.0, 15.0),
        constellations=constellations,
        split_fractions=(0.6, 0.2, 0.2),
        seed=5,
        out_path=path,
        progress=False,
    )


@pytest.fixture(scope="module")
def dataset(tmp_path_factory):
    return small_dataset(tmp_path_factory.mktemp("data") / "data.csv", 2, 40)


def test_ergodic_curve_records():
    records = ergodic_curve(
        [-20.0, 20.0],
        n_channels=5,
        n_noise_draws=200,
        predictors=[JensenPredictor(["QPSK"])],
        seed=1,
        constellations=["QPSK"],
        quiet=True,
    )
    assert [(record["snr_db"], record["method"]) for record in records] == [
        (-20.0, "oracle"),
        (-20.0, "jensen"),
        (20.0, "oracle"),
        (20.0, "jensen"),
    ]
    assert all(record["constellation"] == "QPSK" for record in records)
    assert all(record["mean_mi"] <= 0.1 for record in records[:2])
    assert records[2]["mean_mi"] >= 2.8
    assert records[2]["std_error"] >= 0.0


def test_ergodic_curve_capacity_and_reproducibility():
    arguments = {
        "snr_grid_db": [0.0],
        "n_channels": 3,
        "n_noise_draws": 100,
        "predictors": [],
        "seed": 2,
        "constellations": ["QPSK", "16QAM"],
        "capacity": True,
        "quiet": True,
    }
    records = ergodic_curve(**arguments)
    assert [(record["method"], record["constellation"]) for record in records] == [
        ("oracle", "QPSK"),
        ("oracle", "16QAM"),
        ("capacity", "gaussian"),
    ]
    # Gaussian symbols carry at least as much as 16QAM at 0 dB
    assert records[2]["mean_mi"] >= records[1]["mean_mi"] - 0.1
    assert ergodic_curve(**arguments) == records


def test_ergodic_curve_needs_grid():
    with pytest.raises(InvalidInputError):
        ergodic_curve([], 3, 10, [], 0, quiet=True)


def test_default_angle_grids():
    theta, phi = default_angle_grids(5)
    assert theta[0] == 0.0
    assert theta[-1] == pytest.approx(math.pi / 2)
    assert len(phi) == 5
    assert phi[-1] == pytest.approx(math.pi)
    assert phi[0] > -math.pi
    with pytest.raises(InvalidInputError):
        default_angle_grids(1)


def test_angle_sweep_layout():
    theta = [0.0, math.pi / 2]
    phi = [-math.pi / 2, 0.0, math.pi]
    records = angle_sweep(2.0, theta, phi, "QPSK", 300, seed=4, quiet=True)
    assert [(record["theta_h"], record["phi"]) for record in records] == [
        (t, p) for t in theta for p in phi
    ]
    orthogonal = [record["mi"] for record in records[3:]]
    # Orthogonal columns make the pseudo-angle irrelevant and every point shares its noise
    assert orthogonal == pytest.approx([orthogonal[0]] * 3, abs=1e-9)
    assert min(orthogonal) > max(record["mi"] for record in records[:3])


def test_angle_sweep_rejects_domain():
    with pytest.raises(InvalidInputError):
        angle_sweep(2.0, [2.0], [0.0], "QPSK", 10, seed=0, quiet=True)
    with pytest.raises(InvalidInputError):
        angle_sweep(2.0, [], [0.0], "QPSK", 10, seed=0, quiet=True)


def test_feature_ablation_cells(dataset):
    config = TrainConfig(max_epochs=5, seed=1)
    cells = feature_ablation(dataset, ["i", "v"], [2, 3], restarts=1, config=config)
    assert [(cell.option, cell.n_hidden) for cell in cells] == [
        (FeatureOption.I, 2),
        (FeatureOption.I, 3),
        (FeatureOption.V, 2),
        (FeatureOption.V, 3),
    ]
    assert [cell.n_features for cell in cells] == [4, 4, 8, 8]
    record = cells[0].record()
    assert list(record) == [
        "option", "n_hidden", "n_features", "val_mse", "test_mse", "noise_floor"
    ]
    assert record["test_mse"] == cells[0].test.global_mse
    assert cells[0].test.n_samples == len(dataset.subset("test"))


def test_option_for_antennas():
    assert option_for_antennas(2) is FeatureOption.V
    assert option_for_antennas(4) is FeatureOption.MULTI4
    assert option_for_antennas(8) is FeatureOption.QUANT8
    with pytest.raises(InvalidInputError):
        option_for_antennas(3)


def test_multi_antenna_experiment(tmp_path):
    dataset = small_dataset(tmp_path / "four.csv", 4, 40, constellations=("QPSK",))
    config = TrainConfig(n_hidden=3, max_epochs=3, restarts=1)
    result = multi_antenna_experiment(dataset, config=config)
    assert result.option is FeatureOption.MULTI4
    assert result.n_features == 16
    assert result.test.n_samples == len(dataset.subset("test"))
    assert np.isfinite(result.test.global_mse)


def test_feature_histograms(dataset):
    records = list(feature_histograms(dataset, "v", bins=4))
    assert len(records) == 8 * 4
    features = [record["feature"] for record in records[::4]]
    assert features[0] == "energy_1"
    assert features[-1] == "phi_12"
    for name in features:
        rows = [record for record in records if record["feature"] == name]
        assert sum(record["count"] for record in rows) == len(dataset)
    units = {record["feature"]: record["unit"] for record in records}
    assert units["distance_3"] == "dB"
    assert units["theta_12"] == "rad"

    with pytest.raises(InvalidInputError):
        list(feature_histograms(dataset, "v", bins=0))


def test_received_cloud():
    H = np.array([[1.0, 0.5], [0.2, -0.7]])
    records = list(received_cloud(H, 10.0, "BPSK", 6, seed=3))
    assert len(records) == 2 * 2 * 6
    assert set(records[0]) == {"antenna", "symbol", "re_1", "im_1", "re_2", "im_2"}
    assert all(record["im_1"] == record["im_2"] == 0.0 for record in records)
    assert records[-1]["antenna"] == 2
    assert records[-1]["symbol"] == 2

    complex_records = list(received_cloud(H * 1j, 10.0, "QPSK", 2, seed=3))
    assert len(complex_records) == 2 * 4 * 2
    assert any(record["im_1"] != 0.0 for record in complex_records)


def test_tables(tmp_path):
    records = [{"a": 1, "b": 0.5}, {"a": 2, "b": "x"}]
    assert format_table(records) == "a,b\n1,0.5\n2,x\n"
    path = tmp_path / "table.csv"
    assert write_table(iter(records), path) == 2
    assert path.read_text() == "a,b\n1,0.5\n2,x\n"
    assert format_table([]) == ""
