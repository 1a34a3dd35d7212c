import warnings

import numpy as np
import pytest

from conftest import qdist, rand_quat
from quatgrad import (ConvergenceRecord, ExperimentConfig, FilterState,
                      LengthMismatch, ONE, QI, QJ, QK, Quaternion,
                      SamplePair, StabilityWarning, ZERO, cost_gradient,
                      error_signal, jet_const, jet_seed, left_from_real,
                      predict, read_record_csv, real_valued_reduce,
                      run_system_identification, update_step,
                      write_record_csv)


def _state(weights, mu=0.1):
    return FilterState(tuple(weights), mu)


# -- prediction and error ------------------------------------------------------

def test_predict_examples():
    assert predict(_state([ONE]), (QI,)) == QI
    # order matters: w x, not x w
    assert predict(_state([QI]), (QJ,)) == QK
    assert predict(_state([ONE, QK]), (QJ, QJ)) == QJ - QI


def test_predict_length_mismatch():
    with pytest.raises(LengthMismatch):
        predict(_state([ONE, QI]), (ONE,))


def test_error_signal_basics(rng):
    x = tuple(rand_quat(rng) for _ in range(3))
    w = tuple(rand_quat(rng) for _ in range(3))
    state = _state(w)
    d = predict(state, x)
    assert qdist(error_signal(state, SamplePair(x, d)), ZERO) == 0.0
    zero_state = _state([ZERO, ZERO, ZERO])
    assert error_signal(zero_state, SamplePair(x, d)) == d


def test_error_conjugate_identity(rng):
    # e* = d* - x^H w* = d* - sum x_m* w_m*
    for _ in range(50):
        x = tuple(rand_quat(rng) for _ in range(4))
        w = tuple(rand_quat(rng) for _ in range(4))
        d = rand_quat(rng)
        e = error_signal(_state(w), SamplePair(x, d))
        rhs = d.conjugate()
        for xm, wm in zip(x, w):
            rhs = rhs - xm.conjugate() * wm.conjugate()
        assert qdist(e.conjugate(), rhs) <= 1e-13


# -- cost gradient -------------------------------------------------------------

def test_cost_gradient_at_optimum(rng):
    x = tuple(rand_quat(rng) for _ in range(3))
    w = tuple(rand_quat(rng) for _ in range(3))
    state = _state(w)
    d = predict(state, x)
    grad = cost_gradient(state, SamplePair(x, d))
    assert all(qdist(g, ZERO) <= 1e-13 for g in grad)


def test_cost_gradient_single_tap_value():
    # M=1, x=1, d=1, w=0: e=1, gradient -1/2
    state = _state([ZERO])
    grad = cost_gradient(state, SamplePair((ONE,), ONE))
    assert grad == (Quaternion(-0.5),)


def test_cost_gradient_matches_jet_oracle(rng):
    for _ in range(100):
        m = 3
        w = tuple(rand_quat(rng) for _ in range(m))
        x = tuple(rand_quat(rng) for _ in range(m))
        d = rand_quat(rng)
        state = _state(w)
        sample = SamplePair(x, d)
        grad = cost_gradient(state, sample)
        for tap in range(m):
            # J = e e* as a jet in tap w_tap alone
            e_jet = jet_const(d)
            for l in range(m):
                if l == tap:
                    e_jet = e_jet - jet_seed(w[l]) * jet_const(x[l])
                else:
                    e_jet = e_jet - jet_const(w[l] * x[l])
            cost_jet = e_jet * e_jet.conjugate()
            assert abs(cost_jet.value.imag_norm()) <= 1e-13
            d1 = real_valued_reduce(left_from_real(cost_jet.grad))
            assert qdist(grad[tap], d1) <= 1e-10


def test_cost_is_real(rng):
    for _ in range(200):
        w = tuple(rand_quat(rng) for _ in range(2))
        x = tuple(rand_quat(rng) for _ in range(2))
        d = rand_quat(rng)
        e = error_signal(_state(w), SamplePair(x, d))
        cost = e * e.conjugate()
        assert cost.imag_norm() <= 1e-13 * max(1.0, cost.a)


# -- update step ---------------------------------------------------------------

def test_update_no_error_keeps_weights(rng):
    x = tuple(rand_quat(rng) for _ in range(3))
    w = tuple(rand_quat(rng) for _ in range(3))
    state = _state(w)
    d = predict(state, x)
    new = update_step(state, SamplePair(x, d))
    assert all(qdist(a, b) == 0.0 for a, b in zip(new.weights, w))
    assert new.iteration == state.iteration + 1


def test_update_single_tap_value():
    state = _state([ZERO], mu=0.5)
    new = update_step(state, SamplePair((ONE,), ONE))
    assert new.weights == (Quaternion(0.5),)


def test_update_product_order():
    # e = i, x = j: the step is mu * i * (-j) = -mu k, not x* e = +mu k
    state = _state([ZERO], mu=0.25)
    new = update_step(state, SamplePair((QJ,), QI))
    assert new.weights == (QK * -0.25,)


def test_update_is_conjugate_gradient_step(rng):
    # w' - w == -(2 mu) * (cost gradient)*
    w = tuple(rand_quat(rng) for _ in range(3))
    x = tuple(rand_quat(rng) for _ in range(3))
    d = rand_quat(rng)
    mu = 0.07
    state = _state(w, mu=mu)
    sample = SamplePair(x, d)
    new = update_step(state, sample)
    grad = cost_gradient(state, sample)
    for wm, wm_new, gm in zip(w, new.weights, grad):
        assert qdist(wm_new - wm, gm.conjugate() * (-2.0 * mu)) <= 1e-13


def test_one_step_never_increases_weight_error(rng):
    # noiseless, mu below the stability threshold
    for _ in range(1000):
        m = int(rng.integers(1, 6))
        w_true = tuple(rand_quat(rng) for _ in range(m))
        w = tuple(rand_quat(rng) for _ in range(m))
        x = tuple(rand_quat(rng) for _ in range(m))
        mu = 1.0 / (16.0 * m)
        state = _state(w, mu=mu)
        d = ZERO
        for wt, xm in zip(w_true, x):
            d = d + wt * xm
        new = update_step(state, SamplePair(x, d))
        before = sum((a - b).norm_sq() for a, b in zip(w, w_true))
        after = sum((a - b).norm_sq() for a, b in zip(new.weights, w_true))
        assert after <= before + 1e-12


def test_backtracking_descent(rng):
    # at least one of mu, mu/2, mu/4 decreases the instantaneous cost
    for _ in range(200):
        m = 3
        w = tuple(rand_quat(rng) for _ in range(m))
        x = tuple(rand_quat(rng) for _ in range(m))
        d = rand_quat(rng)
        sample = SamplePair(x, d)
        base_cost = error_signal(_state(w), sample).norm_sq()
        if base_cost < 1e-20:
            continue
        decreased = False
        for mu in (0.05, 0.025, 0.0125):
            new = update_step(_state(w, mu=mu), sample)
            if error_signal(new, sample).norm_sq() < base_cost:
                decreased = True
                break
        assert decreased


# -- harness -------------------------------------------------------------------

def _config(**kw):
    defaults = dict(
        filter_length=4,
        true_weights=(ONE, QI, QJ, QK),
        noise_power=0.0,
        step_size=0.05,
        iterations=2000,
        rng_seed=42,
    )
    defaults.update(kw)
    return ExperimentConfig(**defaults)


def test_config_validation():
    with pytest.raises(ValueError):
        _config(filter_length=0)
    with pytest.raises(ValueError):
        _config(iterations=0)
    with pytest.raises(ValueError):
        _config(noise_power=-1.0)
    with pytest.raises(ValueError):
        _config(true_weights=(ONE,))


def test_noiseless_identification_converges():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", StabilityWarning)
        record = run_system_identification(_config())
    assert not record.diverged
    assert len(record.squared_error) == 2000
    initial = record.weight_error_sq[0]
    final = sum((w - wt).norm_sq()
                for w, wt in zip(record.final_weights, (ONE, QI, QJ, QK)))
    assert (final / initial) ** 0.5 <= 1e-6


def test_zero_step_size_freezes_weights():
    with pytest.raises(ValueError):
        _config(step_size=-0.1)
    state = _state([QI, QJ], mu=0.0)
    sample = SamplePair((ONE, QK), Quaternion(2, 1, 0, -1))
    assert update_step(state, sample).weights == state.weights
    record = run_system_identification(_config(step_size=0.0, iterations=5))
    assert all(w == ZERO for w in record.final_weights)
    assert record.weight_error_sq[0] == record.weight_error_sq[-1]


def test_same_seed_bit_identical():
    cfg = _config(iterations=300, noise_power=0.3, step_size=0.01)
    r1 = run_system_identification(cfg)
    r2 = run_system_identification(cfg)
    assert r1.squared_error == r2.squared_error
    assert r1.weight_error_sq == r2.weight_error_sq
    assert r1.final_weights == r2.final_weights


def test_different_seed_differs():
    cfg1 = _config(iterations=50, step_size=0.01)
    cfg2 = _config(iterations=50, step_size=0.01, rng_seed=43)
    assert run_system_identification(cfg1).squared_error != \
        run_system_identification(cfg2).squared_error


def test_divergence_flag_and_truncation():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", StabilityWarning)
        record = run_system_identification(_config(step_size=5.0, iterations=500))
    assert record.diverged
    assert len(record.squared_error) < 500
    assert len(record.squared_error) == len(record.weight_error_sq)


def test_stability_warning_fires():
    with pytest.warns(StabilityWarning):
        run_system_identification(_config(iterations=20))


def test_no_warning_below_guard():
    with warnings.catch_warnings():
        warnings.simplefilter("error", StabilityWarning)
        run_system_identification(_config(step_size=0.01, iterations=20))


def test_noise_floor_visible():
    noisy = run_system_identification(
        _config(step_size=0.01, noise_power=0.1, iterations=3000))
    tail = noisy.squared_error[-500:]
    # steady-state squared error hovers at the injected noise power
    assert 0.01 < float(np.median(tail)) < 1.0


# -- csv round trip ------------------------------------------------------------

def test_csv_roundtrip(tmp_path):
    record = ConvergenceRecord(
        squared_error=[1.5, 0.25, 1e-300, 123.456789012345678],
        weight_error_sq=[2.0, 1.0, 0.5, 0.125],
        final_weights=(ONE,),
    )
    path = tmp_path / "record.csv"
    write_record_csv(record, path)
    text = path.read_text().splitlines()
    assert text[0] == "iteration,squared_error,weight_error_norm"
    se, we = read_record_csv(path)
    assert se == record.squared_error
    assert we == record.weight_error_sq


def test_csv_rejects_foreign_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_record_csv(path)
