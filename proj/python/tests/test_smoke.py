import json
import os
from pathlib import Path

import numpy as np
import pytest

import camtamper as ct

SCENARIOS = Path(os.environ.get("CAMTAMPER_SCENARIO_DIR", Path(__file__).parents[2] / "scenarios"))


def test_frame_round_trip(tmp_path):
    pixels = np.arange(12 * 7, dtype=np.uint8).reshape(7, 12)
    frame = ct.Frame(pixels, 3)
    assert (frame.width, frame.height, frame.index) == (12, 7, 3)
    np.testing.assert_array_equal(frame.to_numpy(), pixels)
    ct.save_pgm(tmp_path / "f.pgm", frame)
    np.testing.assert_array_equal(ct.load_pgm(tmp_path / "f.pgm").to_numpy(), pixels)


def test_entropy_and_histogram():
    assert ct.entropy(ct.Frame(np.full((8, 8), 40, np.uint8))) == 0.0
    ramp = ct.Frame(np.tile(np.arange(256, dtype=np.uint8), (4, 1)))
    assert ct.entropy(ramp) == pytest.approx(8.0, abs=1e-12)
    assert sum(ct.histogram(ramp)) == 1024


def test_dct_preserves_energy():
    rng = np.random.default_rng(3)
    pixels = rng.integers(0, 256, (16, 24), dtype=np.uint8)
    coeffs = ct.dct2(ct.Frame(pixels))
    assert coeffs.shape == (16, 24)
    assert np.sum(coeffs**2) == pytest.approx(np.sum(pixels.astype(float) ** 2), rel=1e-12)


def test_config_and_errors():
    cfg = ct.DetectorConfig(persistence=3)
    assert cfg["persistence"] == 3
    assert set(cfg.to_dict()) == set(ct.DetectorConfig.field_names())
    with pytest.raises(ct.ConfigError):
        cfg["no_such_field"] = 1.0
    with pytest.raises(ct.ConfigError):
        ct.make_detector("alg9")
    with pytest.raises(ct.Error):
        ct.load_pgm("/nonexistent/frame.pgm")


def test_occlusion_scenario_end_to_end():
    clip = ct.render_scenario((SCENARIOS / "occlusion_example.json").read_text())
    assert len(clip.frames) == 300
    truth = json.loads(clip.truth_json)
    assert truth["events"][0]["start"] == 100
    events = ct.run_detector("combined", clip.frames)
    assert [e.kind for e in events] == [ct.TamperKind.Occlusion]
    assert 100 <= events[0].frame_index <= 110
    match = ct.match_events(events, clip.intervals)
    assert (match["TP"], match["FP"], match["FN"]) == (1, 0, 0)


def test_config_dict_and_object_agree():
    clip = ct.render_scenario((SCENARIOS / "occlusion_example.json").read_text())
    from_dict = ct.run_detector("combined", clip.frames, {"persistence": 3})
    from_obj = ct.run_detector("combined", clip.frames, ct.DetectorConfig(persistence=3))
    assert from_dict == from_obj
    assert ct.match_events(from_dict, clip.intervals)["latencies"] == [2]


def test_streaming_detector_matches_batch():
    clip = ct.render_scenario((SCENARIOS / "mixed_example.json").read_text())
    det = ct.make_detector("alg5")
    streamed = [e for e in (det.step(f) for f in clip.frames) if e is not None]
    assert streamed == ct.run_detector("alg5", clip.frames)


def test_numpy_frames_accepted():
    frames = [np.full((30, 40), 120, np.uint8)] * 10 + [np.zeros((30, 40), np.uint8)] * 5
    events = ct.run_detector("motion", frames)
    assert events and events[0].frame_index == 10


def test_selftest():
    results = ct.selftest()
    assert results and all(results.values())
