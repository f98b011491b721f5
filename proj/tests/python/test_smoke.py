import json

import pytest

import homesense


def test_label_intervals_worked_example():
    assert homesense.label_intervals([0, 1, 1, 1, 0, 0, 1, 1, 0]) == [(1, 3), (6, 7)]


def test_denoise_keeps_runs_at_threshold():
    y = [1] * 3 + [0] + [1] * 28 + [0] + [1] * 5
    out = homesense.denoise(y, 28)
    assert out == [0] * 3 + [0] + [1] * 28 + [0] + [0] * 5


def test_theta_arithmetic():
    assert homesense.theta_for(8.02, 1.15, 0.10) == pytest.approx(8.135, abs=1e-12)
    assert homesense.theta_for(3.95, 2.12, 1.80, "below") == pytest.approx(0.134, abs=1e-12)


def test_score_counts_overlaps():
    truth = [0, 1, 1, 0, 0, 0, 1, 0, 0, 0]
    pred = [0, 0, 1, 0, 1, 0, 0, 0, 0, 0]
    r = homesense.score(truth, pred, days=2.0)
    assert r["sensitivity"] == pytest.approx(0.5)
    assert r["far_per_day"] == pytest.approx(0.5)
    assert r["true_intervals"] == 2
    assert r["predicted_intervals"] == 2


def test_config_round_trip_and_hash():
    cfg = homesense.default_config()
    assert cfg["horizon_days"] == 3240
    json.dumps(cfg)
    h = homesense.config_hash(cfg)
    cfg["seed"] = cfg["seed"] + 1
    assert homesense.config_hash(cfg) != h


def test_simulate_is_deterministic():
    a = homesense.simulate(seed=5, days=5)
    b = homesense.simulate(seed=5, days=5)
    c = homesense.simulate(seed=6, days=5)
    assert a.event_count > 0
    assert a.events_csv() == b.events_csv()
    assert a.events_csv() != c.events_csv()
    assert a.events_csv().startswith(b"time_s,sensor_id,state\n")


def test_train_and_detect_forgetting():
    cfg = homesense.default_config()
    cfg["anomalies"]["rate_scale"] = 3.0
    sim = homesense.simulate(cfg, seed=2, days=60)
    obs = homesense.Observations(sim)
    daily = obs.daily()
    assert len(daily["sleep_hours"]) == 60
    model = homesense.train("forgetting", "DT", obs, sim)
    assert model.method == "DT"
    pred = homesense.detect(model, obs)
    assert pred["unit_seconds"] == 7200
    again = homesense.Model.from_json(model.to_json())
    assert homesense.detect(again, obs) == pred


def test_invalid_pairing_raises():
    sim = homesense.simulate(seed=1, days=3)
    obs = homesense.Observations(sim)
    with pytest.raises(ValueError):
        homesense.train("forgetting", "HMM", obs, sim)


def test_score_accepts_label_tracks():
    cfg = homesense.default_config()
    cfg["anomalies"]["rate_scale"] = 3.0
    sim = homesense.simulate(cfg, seed=2, days=60)
    obs = homesense.Observations(sim)
    model = homesense.train("forgetting", "DT", obs, sim)
    truth = sim.labels()["forgetting"]
    r = homesense.score(truth, homesense.detect(model, obs), days=60)
    assert r["true_intervals"] == len(truth["intervals"])
    assert 0.0 <= r["sensitivity"] <= 1.0
    with pytest.raises(ValueError):
        homesense.score(truth, sim.labels()["wandering"], days=60)
