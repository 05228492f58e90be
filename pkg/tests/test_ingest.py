import json

import numpy as np
import pytest

from arraycal import (
    SceneConfig,
    TimingKind,
    generate_scene,
    inject_offsets,
    load_dataset,
    load_toa_csv,
    map_timing,
    save_toa_csv,
    synth_tdoa,
    synth_toa,
    tdoa_from_toa,
)
from arraycal.ingest import write_audit_json


def test_load_small_matrix(tmp_path):
    path = tmp_path / "toa.csv"
    path.write_text("0.2,0.8\n1.7,1.71421356\n")
    toa = load_toa_csv(path)
    assert toa.kind is TimingKind.TOA
    assert np.array_equal(toa.values, np.array([[0.2, 0.8], [1.7, 1.71421356]]))


def test_load_ragged_names_row(tmp_path):
    path = tmp_path / "ragged.csv"
    path.write_text("1,2,3\n4,5\n")
    with pytest.raises(ValueError, match="row 2"):
        load_toa_csv(path)


def test_load_non_numeric_names_cell(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("1,2\n3,oops\n")
    with pytest.raises(ValueError, match="row 2, column 2"):
        load_toa_csv(path)


def test_load_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_toa_csv(tmp_path / "nope.csv")


def test_load_empty_file(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("")
    with pytest.raises(ValueError, match="no data"):
        load_toa_csv(path)


def test_load_header_and_scale(tmp_path):
    path = tmp_path / "ms.csv"
    path.write_text("mic_a,mic_b\n200.0,800.0\n1700.0,1714.21356\n")
    toa = load_toa_csv(path, scale=1e-3, skip_header=True)
    assert np.abs(toa.values - np.array([[0.2, 0.8], [1.7, 1.71421356]])).max() < 1e-12


def test_load_tolerates_trailing_newlines(tmp_path):
    path = tmp_path / "trail.csv"
    path.write_text("1,2\n3,4\n\n")
    assert load_toa_csv(path).values.shape == (2, 2)


def test_save_load_roundtrip(tmp_path):
    toa = synth_toa(generate_scene(SceneConfig(num_mics=5, num_srcs=7, seed=50)))
    path = tmp_path / "round.csv"
    save_toa_csv(toa, path)
    assert np.array_equal(load_toa_csv(path).values, toa.values)


def test_load_dataset_carries_path(tmp_path):
    path = tmp_path / "toa.csv"
    path.write_text("0.1,0.2\n0.3,0.4\n")
    dataset = load_dataset(path)
    assert dataset.source_path == str(path)
    assert dataset.toa.values.shape == (2, 2)


def test_inject_zero_range_is_identity():
    toa = synth_toa(generate_scene(SceneConfig(num_mics=4, num_srcs=6, seed=51)))
    out, delta, eta = inject_offsets(toa, 0.0, seed=1)
    assert np.array_equal(out.values, toa.values)
    assert np.all(delta == 0.0)
    assert np.all(eta == 0.0)


def test_inject_draws_within_range_and_is_deterministic():
    toa = synth_toa(generate_scene(SceneConfig(num_mics=6, num_srcs=9, seed=52)))
    out1, delta1, eta1 = inject_offsets(toa, 0.75, seed=9)
    out2, delta2, eta2 = inject_offsets(toa, 0.75, seed=9)
    assert np.array_equal(out1.values, out2.values)
    assert np.array_equal(delta1, delta2) and np.array_equal(eta1, eta2)
    assert np.all(np.abs(delta1) <= 0.75) and np.all(np.abs(eta1) <= 0.75)
    assert delta1.shape == (6,) and eta1.shape == (9,)
    expected = toa.values + eta1[None, :] - delta1[:, None]
    assert np.array_equal(out1.values, expected)


def test_injection_is_invisible_to_the_mapping():
    # the core claim applied to file-style data: offsets cancel in the map
    toa = synth_toa(generate_scene(SceneConfig(num_mics=8, num_srcs=7, seed=53)))
    injected, _, _ = inject_offsets(toa, 1.0, seed=13)
    assert np.abs(map_timing(injected).values - map_timing(toa).values).max() < 1e-12


def test_two_injection_seeds_map_identically():
    toa = synth_toa(generate_scene(SceneConfig(num_mics=8, num_srcs=7, seed=54)))
    a, _, _ = inject_offsets(toa, 1.0, seed=100)
    b, _, _ = inject_offsets(toa, 1.0, seed=200)
    assert np.abs(map_timing(a).values - map_timing(b).values).max() < 1e-12


def test_injected_identity_between_routes():
    toa = synth_toa(generate_scene(SceneConfig(num_mics=8, num_srcs=7, seed=55)))
    injected, _, _ = inject_offsets(toa, 1.0, seed=3)
    mapped_toa = map_timing(injected)
    mapped_tdoa = map_timing(tdoa_from_toa(injected, 0))
    assert np.abs(mapped_toa.values - mapped_tdoa.values).max() < 1e-12


def test_inject_rejects_tdoa_and_negative_range():
    scene = generate_scene(SceneConfig(num_mics=3, num_srcs=3, seed=56))
    with pytest.raises(TypeError):
        inject_offsets(synth_tdoa(scene, 0), 1.0, seed=0)
    with pytest.raises(ValueError):
        inject_offsets(synth_toa(scene), -0.1, seed=0)


def test_audit_json_contents(tmp_path):
    path = tmp_path / "audit.json"
    write_audit_json(path, np.array([0.1, -0.2]), np.array([0.3]), seed=77)
    data = json.loads(path.read_text())
    assert data == {"delta": [0.1, -0.2], "eta": [0.3], "seed": 77}
