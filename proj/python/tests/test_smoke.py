import math

import numpy as np
import pytest

import deepcoda as dc


def test_closure_and_clr():
    c = dc.closure([4.0, 10.0, 6.0])
    np.testing.assert_allclose(c, [0.2, 0.5, 0.3], rtol=0, atol=1e-15)
    z = dc.clr(np.array([[1.0, 2.0, 4.0], [3.0, 3.0, 3.0]]))
    np.testing.assert_allclose(z.sum(axis=1), 0.0, atol=1e-12)
    np.testing.assert_allclose(z[0], np.log([1, 2, 4]) - np.log([1, 2, 4]).mean(), atol=1e-15)
    with pytest.raises(ValueError):
        dc.closure([0.0, 0.0])


def test_replace_zeros_and_log_contrast():
    r = dc.replace_zeros(np.array([[0.0, 2.0, 2.0]]), 0.5)
    assert r[0, 0] == 1.0
    assert r.sum() == pytest.approx(4.0)
    beta = np.array([0.5, 0.5, -1.0])
    a = dc.log_contrast([4.0, 10.0, 6.0], beta)
    b = dc.log_contrast([0.2, 0.5, 0.3], beta)
    assert a == pytest.approx(b, abs=1e-12)


def test_generators_are_deterministic():
    a = dc.gen_toy(100, 3)
    b = dc.gen_toy(100, 3)
    np.testing.assert_array_equal(a["relative"], b["relative"])
    assert a["absolute"].shape == (100, 4)
    assert np.all(a["absolute"][:, 0] == 100.0)
    assert dc.gen_cmyc(50, 1)["relative"].shape == (50, 10)


def test_train_predict_explain(tmp_path):
    ds = dc.gen_toy(200, 4)
    cfg = dc.TrainConfig()
    cfg.epochs = 300
    cfg.n_bottlenecks = 3
    out = dc.train(ds["relative"], ds["labels"], cfg)
    model = out["model"]
    hist = out["loss_history"]
    assert len(hist) == 300
    assert hist[-1] < hist[0]
    probs = model.predict_proba(ds["relative"])
    assert dc.auc(probs, ds["labels"]) > 0.9

    e = dc.explain_sample(model, ds["relative"][0])
    assert 1.0 / (1.0 + math.exp(-e["products"].sum())) == pytest.approx(probs[0], abs=1e-12)
    assert e["decision"] == int(e["products"].sum() > 0)

    path = tmp_path / "m.model"
    model.save(str(path))
    assert dc.Model.load(str(path)) == model

    again = dc.train(ds["relative"], ds["labels"], cfg)["model"]
    assert again == model


def test_linear_head_has_no_sample_explanation():
    ds = dc.gen_toy(40, 0)
    cfg = dc.TrainConfig()
    cfg.epochs = 5
    cfg.head = "linear"
    model = dc.train(ds["relative"], ds["labels"], cfg)["model"]
    assert model.head == "linear"
    with pytest.raises(ValueError):
        dc.explain_sample(model, ds["relative"][0])
    with pytest.raises(ValueError):
        cfg.head = "tree"


def test_auc_and_decision_rule():
    assert dc.auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]) == 0.75
    assert dc.decide([2.0, -15.6, -3.6, -1.1, 1.8]) == 0
    assert dc.decide([0.5, -7.3, 8.8, 7.4, 0.1]) == 1


def test_lasso_coefficient_swap():
    ds = dc.gen_toy(1000, 1)
    rel = dc.lasso_baseline(ds["relative"], ds["labels"])
    ab = dc.lasso_baseline(ds["absolute"], ds["labels"])
    assert rel["scaled_magnitudes"][0] == 1.0
    assert ab["scaled_magnitudes"][0] < 0.05
    fit = dc.lasso_fit(ds["relative"], ds["labels"], 1e6)
    assert np.all(fit["coef"] == 0.0)


def test_weight_contrast_correlation():
    rng = np.random.default_rng(0)
    w = rng.normal(size=(50, 2))
    z = w @ np.array([[1.0, 0.5], [-0.3, 2.0]])
    c = dc.weight_contrast_correlation(w, z)
    np.testing.assert_allclose(c["canonical"], 1.0, atol=1e-6)
    assert c["pearson"].shape == (2, 2)
    with pytest.raises(ValueError):
        dc.weight_contrast_correlation(w[:2], z[:2])


def test_divergence_raises():
    ds = dc.gen_toy(40, 2)
    cfg = dc.TrainConfig()
    cfg.learning_rate = 1e300
    cfg.epochs = 50
    with pytest.raises(dc.TrainingDiverged):
        dc.train(ds["absolute"], ds["labels"], cfg)
