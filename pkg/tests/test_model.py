import math

import numpy as np
import pytest

from weylopt.data import Dataset
from weylopt.model import (
    DivergenceError,
    LogisticModel,
    LossTrace,
    bce_gradient,
    bce_loss,
    predict_proba,
    train,
)
from weylopt.optim import ClassicalGD, WeylConfig, WeylOptimizer, classical_step


def make_data(n, d, seed):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, d))
    y = (X @ rng.standard_normal(d) + 0.5 * rng.standard_normal(n) > 0).astype(int)
    if y.min() == y.max():
        y[0] = 1 - y[0]
    return Dataset(X, y, tuple(f"f{j}" for j in range(d)))


def fd_gradient(model, X, y, h=1e-6):
    theta = model.params()
    out = np.empty_like(theta)
    for k in range(theta.shape[0]):
        up, dn = theta.copy(), theta.copy()
        up[k] += h
        dn[k] -= h
        out[k] = (bce_loss(LogisticModel.from_params(up), X, y) - bce_loss(LogisticModel.from_params(dn), X, y)) / (2 * h)
    return out


def test_predict_zero_model():
    m = LogisticModel.zeros(3)
    assert predict_proba(m, [5.0, -2.0, 1.0]) == 0.5


def test_predict_saturation_without_overflow():
    m = LogisticModel(np.array([1.0]), 0.0)
    with np.errstate(over="raise"):
        assert predict_proba(m, [50.0]) >= 1 - 1e-20
        assert 0.0 <= predict_proba(m, [-800.0]) < 1e-300
        assert predict_proba(m, [800.0]) == 1.0


def test_predict_value():
    m = LogisticModel(np.array([1.0, -1.0]), 0.5)
    expected = 1.0 / (1.0 + math.exp(-1.5))
    assert predict_proba(m, [2.0, 1.0]) == pytest.approx(expected, rel=1e-15)
    assert expected == pytest.approx(0.81757, abs=1e-5)


def test_predict_dimension_mismatch():
    with pytest.raises(ValueError):
        predict_proba(LogisticModel.zeros(2), [1.0, 2.0, 3.0])


def test_loss_zero_model_is_ln2():
    ds = make_data(17, 4, 0)
    assert bce_loss(LogisticModel.zeros(4), ds.X, ds.y) == pytest.approx(math.log(2), rel=1e-15)


def test_loss_saturated_separated():
    X = np.array([[-1.0], [1.0]])
    y = np.array([0, 1])
    assert bce_loss(LogisticModel(np.array([200.0]), 0.0), X, y) <= 1e-10


def test_loss_single_sample():
    # w*x = ln 4  gives p = 0.8
    m = LogisticModel(np.array([math.log(4.0)]), 0.0)
    assert bce_loss(m, [[1.0]], [1]) == pytest.approx(-math.log(0.8), rel=1e-12)
    assert -math.log(0.8) == pytest.approx(0.22314, abs=1e-5)


@pytest.mark.parametrize(
    "X, y",
    [(np.zeros((0, 2)), np.zeros(0)), (np.ones((2, 2)), np.array([0, 2])), (np.ones((2, 2)), np.array([0.5, 1]))],
)
def test_loss_bad_inputs(X, y):
    with pytest.raises(ValueError):
        bce_loss(LogisticModel.zeros(2), X, y)


def test_gradient_zero_when_predictions_match():
    # |w*x| = 1200 drives p to exactly 0.0 / 1.0
    X = np.array([[30.0], [-30.0]])
    m = LogisticModel(np.array([40.0]), 0.0)
    np.testing.assert_array_equal(predict_proba(m, X), [1.0, 0.0])
    gw, gb = bce_gradient(m, X, np.array([1, 0]))
    assert gw[0] == 0.0 and gb == 0.0


def test_gradient_bias_zero_for_balanced_symmetric():
    X = np.array([[1.0, 2.0], [-1.0, -2.0], [0.5, 0.0], [-0.5, 0.0]])
    y = np.array([1, 0, 1, 0])
    _, gb = bce_gradient(LogisticModel.zeros(2), X, y)
    assert gb == 0.0


@pytest.mark.parametrize("seed", range(50))
def test_gradient_finite_differences(seed):
    rng = np.random.default_rng(1000 + seed)
    n, d = int(rng.integers(2, 21)), int(rng.integers(1, 6))
    X = rng.standard_normal((n, d))
    y = rng.integers(0, 2, n)
    m = LogisticModel(rng.standard_normal(d), float(rng.standard_normal()))
    gw, gb = bce_gradient(m, X, y)
    analytic = np.append(gw, gb)
    numeric = fd_gradient(m, X, y)
    err = np.abs(analytic - numeric) / np.maximum(np.abs(numeric), 1e-9)
    assert np.all((err <= 1e-6) | (np.abs(analytic - numeric) <= 1e-9))


def test_train_one_classical_epoch():
    ds = make_data(30, 3, 1)
    m0 = LogisticModel.zeros(3)
    m1, trace = train(m0, ds, ClassicalGD(0.3), 1)
    gw, gb = bce_gradient(m0, ds.X, ds.y)
    np.testing.assert_array_equal(m1.params(), classical_step(m0.params(), np.append(gw, gb), 0.3))
    assert trace.steps == [1]
    assert np.all(m0.params() == 0)  # input untouched


def test_train_zero_gradient_data_keeps_model():
    X = np.array([[50.0], [-50.0]])
    y = np.array([1, 0])
    m0 = LogisticModel(np.array([40.0]), 0.0)
    m1, _ = train(m0, Dataset(X, y, ("x",)), ClassicalGD(0.1), 10)
    np.testing.assert_array_equal(m1.params(), m0.params())


def test_train_weyl_window_one_matches_classical():
    ds = make_data(60, 4, 2)
    _, a = train(LogisticModel.zeros(4), ds, ClassicalGD(0.5), 200)
    _, b = train(LogisticModel.zeros(4), ds, WeylOptimizer(WeylConfig(alpha=0.3, window=1, learning_rate=0.5)), 200)
    assert np.max(np.abs(np.array(a.train) - np.array(b.train))) <= 1e-12


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_small_step_loss_monotone(seed):
    ds = make_data(80, 5, seed)
    Xb = np.hstack([ds.X, np.ones((ds.n, 1))])
    lam = np.linalg.eigvalsh(Xb.T @ Xb / ds.n).max()
    _, trace = train(LogisticModel.zeros(5), ds, ClassicalGD(1.0 / (4.0 * lam)), 300)
    assert np.all(np.diff(trace.train) <= 0)


def test_train_deterministic():
    ds = make_data(50, 3, 4)
    runs = [
        train(LogisticModel.zeros(3), ds, WeylOptimizer(WeylConfig(window=8)), 100, val=ds, grad_noise=0.1, noise_seed=9)[1]
        for _ in range(2)
    ]
    assert runs[0].train == runs[1].train and runs[0].val == runs[1].val


def test_train_records_validation_and_trace_invariants():
    ds = make_data(40, 2, 5)
    _, trace = train(LogisticModel.zeros(2), ds, ClassicalGD(0.1), 25, val=ds)
    assert trace.steps == list(range(1, 26))
    assert trace.val == trace.train
    assert all(math.isfinite(v) and v >= 0 for v in trace.train)


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_train_divergence():
    X = np.array([[1e300], [-1e300]])
    ds = Dataset(X, np.array([0, 1]), ("x",))
    with pytest.raises(DivergenceError) as info:
        train(LogisticModel.zeros(1), ds, ClassicalGD(1e10), 5)
    assert info.value.step == 1


def test_train_rejects_bad_epochs():
    with pytest.raises(ValueError):
        train(LogisticModel.zeros(2), make_data(10, 2, 0), ClassicalGD(0.1), 0)


def test_loss_trace_csv(tmp_path):
    t = LossTrace()
    t.append(1, 0.5, 0.6)
    t.append(2, 0.25, 0.3)
    with pytest.raises(ValueError):
        t.append(2, 0.1)
    t.to_csv(tmp_path / "t.csv")
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines == ["step,train_loss,val_loss", "1,0.5,0.6", "2,0.25,0.3"]
