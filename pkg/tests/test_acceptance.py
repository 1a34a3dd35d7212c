"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with `pytest -s tests/test_acceptance.py` to see the per-criterion
report; every tolerance is pinned here.
"""

from fractions import Fraction

import numpy as np
import pytest

from conftest import qdist, rand_pure_unit, rand_quat, rand_quat_in_shell, tanh_safe
from quatgrad import (AxisUnit, Elementary, FDConfig, JACOBIAN, ONE, QI, QJ,
                      QK, Quaternion, Side, ZERO,
                      chain_matrix_involutions, cost_gradient, default_step,
                      error_signal, exp_derivative, exp_series,
                      hr_gradient_fd, jet_const, jet_seed,
                      left_from_real, power_derivative,
                      power_derivative_oracle, PowerSeriesFn,
                      qmat_conj_transpose, qmat_from_real, qmat_mul,
                      qmat_scale, real_axis_limit_check, real_jacobian,
                      real_valued_reduce, right_from_real,
                      run_system_identification, ExperimentConfig,
                      FilterState, SamplePair, StabilityWarning,
                      tanh_derivative, tanh_series)


def _report(number: int, description: str) -> None:
    print(f"[criterion {number:02d}] PASS - {description}")


def _rng(criterion: int) -> np.random.Generator:
    return np.random.default_rng(1_000_000 + criterion)


def test_criterion_01_jacobian_identities():
    # exact rational arithmetic
    def fmul(p, q):
        a1, b1, c1, d1 = p
        a2, b2, c2, d2 = q
        return (a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)

    q4 = Fraction(1, 4)
    j_exact = [
        [(q4, 0, 0, 0), (0, q4, 0, 0), (0, 0, q4, 0), (0, 0, 0, q4)],
        [(q4, 0, 0, 0), (0, q4, 0, 0), (0, 0, -q4, 0), (0, 0, 0, -q4)],
        [(q4, 0, 0, 0), (0, -q4, 0, 0), (0, 0, q4, 0), (0, 0, 0, -q4)],
        [(q4, 0, 0, 0), (0, -q4, 0, 0), (0, 0, -q4, 0), (0, 0, 0, q4)],
    ]
    jh_exact = [[(j_exact[r][c][0], -j_exact[r][c][1], -j_exact[r][c][2],
                  -j_exact[r][c][3]) for r in range(4)] for c in range(4)]
    for left, right in ((j_exact, jh_exact), (jh_exact, j_exact)):
        for i in range(4):
            for j in range(4):
                acc = (Fraction(0),) * 4
                for k in range(4):
                    acc = tuple(x + y for x, y in
                                zip(acc, fmul(left[i][k], right[k][j])))
                want = ((q4 if i == j else Fraction(0)), 0, 0, 0)
                assert acc == want  # componentwise error 0, exact arithmetic

    # numeric double arithmetic
    jh = qmat_conj_transpose(JACOBIAN)
    for product in (qmat_mul(JACOBIAN, jh), qmat_mul(jh, JACOBIAN)):
        for i in range(4):
            for j in range(4):
                want = Quaternion(0.25) if i == j else ZERO
                assert qdist(product[i][j], want) <= 1e-15
    _report(1, "J J^H = J^H J = I/4 exactly (rational) and <= 1e-15 (double)")


def test_criterion_02_basic_derivatives_exact():
    rng = _rng(2)
    for _ in range(20):
        q = rand_quat(rng)
        assert left_from_real(jet_seed(q).grad).d1 == ONE
        assert left_from_real(jet_seed(q).conjugate().grad).d1 == Quaternion(-0.5)
        for axis in (AxisUnit.I, AxisUnit.J, AxisUnit.K):
            u = axis.unit
            involution_jet = (-u) * jet_seed(q) * u
            assert involution_jet.value == q.involution(axis)
            assert left_from_real(involution_jet.grad).d1 == ZERO
    _report(2, "left d1 of {q, q^nu, q*} = {1, 0, -1/2} exactly from jets")


def test_criterion_03_power_derivative_vs_oracle():
    rng = _rng(3)
    worst_rel, worst_lr = 0.0, 0.0
    for n in range(-8, 9):
        for _ in range(100):
            center = rand_quat(rng, 0.3)
            q = center + rand_quat_in_shell(rng, 0.5, 2.0)
            closed = power_derivative(q, center, n, Side.LEFT)
            oracle = power_derivative_oracle(q, center, n)
            worst_rel = max(worst_rel,
                            qdist(closed, oracle) / max(1.0, abs(oracle)))
            worst_lr = max(worst_lr,
                           qdist(closed, power_derivative(q, center, n,
                                                          Side.RIGHT)))
    assert worst_rel <= 1e-11
    assert worst_lr <= 1e-13
    _report(3, f"power derivative vs oracle on n in [-8,8]: rel "
               f"{worst_rel:.2e} <= 1e-11, left==right {worst_lr:.2e} <= 1e-13")


def test_criterion_04_square_involution_partials():
    rng = _rng(4)
    worst = 0.0
    for _ in range(100):
        q = rand_quat(rng)
        h = left_from_real((jet_seed(q) * jet_seed(q)).grad)
        worst = max(worst, qdist(h.dI, QI * q.b), qdist(h.dJ, QJ * q.c),
                    qdist(h.dK, QK * q.d))
    assert worst <= 1e-12
    _report(4, f"(dI,dJ,dK) of q^2 = (q_b i, q_c j, q_d k): worst {worst:.2e}")


def test_criterion_05_closed_forms_vs_finite_differences():
    rng = _rng(5)
    cases = (
        ("exp", Elementary.exp(), lambda q: abs(q) < 2.0),
        ("ln", Elementary.ln(), lambda q: q.a > 0.3 and q.imag_norm() > 0.1),
        ("tanh", Elementary.tanh(), lambda q: tanh_safe(q)),
    )
    worst = 0.0
    for _, fn, safe in cases:
        done = 0
        while done < 200:
            q = rand_quat(rng)
            if not safe(q):
                continue
            done += 1
            cfg = FDConfig(default_step(q), scheme="central", richardson=True)
            fd_d1 = hr_gradient_fd(fn.value, q, cfg).d1
            closed = fn.hr_derivative(q)
            worst = max(worst, qdist(fd_d1, closed) / max(1.0, abs(closed)))
    assert worst <= 1e-6
    _report(5, f"exp/ln/tanh derivatives vs Richardson central fd at 200 "
               f"safe points each: worst rel {worst:.2e} <= 1e-6")


def test_criterion_06_series_vs_closed_forms():
    rng = _rng(6)
    exp_fn = exp_series(40)
    tanh_fn = tanh_series(61)
    worst = 0.0
    done = 0
    while done < 100:
        q = rand_quat(rng, 0.45)
        if abs(q) > 1.0:
            continue
        done += 1
        worst = max(worst, qdist(exp_fn.derivative(q), exp_derivative(q)),
                    qdist(tanh_fn.derivative(q), tanh_derivative(q)))
    assert worst <= 1e-8
    _report(6, f"truncated exp/tanh series derivatives vs closed forms "
               f"inside |q| <= 1: worst {worst:.2e} <= 1e-8")


def test_criterion_07_real_axis_consistency():
    rng = _rng(7)
    v_sequence = [10.0 ** (-p) for p in range(1, 7)]
    cases = (
        (Elementary.exp(), (0.5, 1.5)),
        (Elementary.ln(), (0.5, 2.5)),
        (Elementary.tanh(), (0.3, 1.2)),
        (Elementary.power(3), (0.5, 2.0)),
    )
    for fn, (lo, hi) in cases:
        for _ in range(10):
            q_a = float(rng.uniform(lo, hi))
            axis = rand_pure_unit(rng)
            errors = real_axis_limit_check(fn, q_a, v_sequence, axis)
            assert all(b < a for a, b in zip(errors, errors[1:])), \
                (fn.kind, q_a, errors)
    _report(7, "HR-derivative error vs f'(q_a) decreases monotonically over "
               "v in {1e-1..1e-6} for exp, ln, tanh, power(3)")


def test_criterion_08_real_coefficient_series_sides():
    rng = _rng(8)
    worst = 0.0
    for _ in range(100):
        coeffs = {n: Quaternion(float(rng.standard_normal()))
                  for n in range(-4, 8)}
        left = PowerSeriesFn(ZERO, coeffs, Side.LEFT, (0.1, 3.0))
        right = PowerSeriesFn(ZERO, coeffs, Side.RIGHT, (0.1, 3.0))
        q = rand_quat_in_shell(rng, 0.5, 2.0)
        worst = max(worst, qdist(left.derivative(q), right.derivative(q)))
    assert worst <= 1e-12
    _report(8, f"real coefficients: left vs right series derivative "
               f"worst {worst:.2e} <= 1e-12")


def test_criterion_09_real_valued_identities_and_increment():
    rng = _rng(9)
    worst_sym = 0.0
    for _ in range(100):
        q, c, d = rand_quat(rng), rand_quat(rng), rand_quat(rng)
        e_jet = jet_const(d) - jet_const(c) * jet_seed(q)
        for jet in (jet_seed(q) * jet_seed(q).conjugate(),
                    e_jet * e_jet.conjugate()):
            hl = left_from_real(jet.grad)
            hrr = right_from_real(jet.grad)
            worst_sym = max(worst_sym,
                            max(qdist(a, b) for a, b in
                                zip(hl.as_tuple(), hrr.as_tuple())))
            for axis, part in zip((AxisUnit.I, AxisUnit.J, AxisUnit.K),
                                  (hl.dI, hl.dJ, hl.dK)):
                worst_sym = max(worst_sym,
                                qdist(part, hl.d1.involution(axis)))
    assert worst_sym <= 1e-12

    # df = 4 R(d1 dq) matches the direct increment to second order
    for _ in range(20):
        q, c, d = rand_quat(rng), rand_quat(rng), rand_quat(rng)

        def cost(z):
            e = d - c * z
            return (e * e.conjugate()).a

        e_jet = jet_const(d) - jet_const(c) * jet_seed(q)
        d1 = real_valued_reduce(left_from_real((e_jet * e_jet.conjugate()).grad))
        delta = rand_quat(rng) * 0.05
        errors = []
        for _ in range(4):
            direct = cost(q + delta) - cost(q)
            errors.append(abs(direct - 4.0 * (d1 * delta).a))
            delta = delta * 0.5
        for bigger, smaller in zip(errors, errors[1:]):
            assert 3.5 <= bigger / smaller <= 4.5
    _report(9, f"real-valued f: d^nu = (d1)^nu and left == right "
               f"(worst {worst_sym:.2e} <= 1e-12); df = 4R(d1 dq) is "
               f"second-order accurate (halving ratio in [3.5, 4.5])")


def test_criterion_10_qlms_gradient_and_identification():
    rng = _rng(10)
    worst = 0.0
    for _ in range(100):
        m = int(rng.integers(1, 6))
        w = tuple(rand_quat(rng) for _ in range(m))
        x = tuple(rand_quat(rng) for _ in range(m))
        d = rand_quat(rng)
        state = FilterState(w, 0.01)
        sample = SamplePair(x, d)
        grad = cost_gradient(state, sample)
        e_conj = error_signal(state, sample).conjugate()
        for tap in range(m):
            assert qdist(grad[tap], (x[tap] * e_conj) * -0.5) == 0.0
            e_jet = jet_const(d)
            for l in range(m):
                if l == tap:
                    e_jet = e_jet - jet_seed(w[l]) * jet_const(x[l])
                else:
                    e_jet = e_jet - jet_const(w[l] * x[l])
            cost_jet = e_jet * e_jet.conjugate()
            d1 = real_valued_reduce(left_from_real(cost_jet.grad))
            worst = max(worst, qdist(grad[tap], d1))
    assert worst <= 1e-10

    cfg = ExperimentConfig(
        filter_length=4,
        true_weights=(Quaternion(0.7, -0.2, 0.5, 0.1),
                      Quaternion(-0.3, 0.8, 0.0, -0.6),
                      Quaternion(0.1, 0.4, -0.9, 0.2),
                      Quaternion(0.5, 0.5, 0.5, -0.5)),
        noise_power=0.0,
        step_size=0.05,
        iterations=2000,
        rng_seed=77,
    )
    with pytest.warns(StabilityWarning):
        first = run_system_identification(cfg)
        second = run_system_identification(cfg)
    assert not first.diverged
    initial = first.weight_error_sq[0]
    final = sum((w - wt).norm_sq()
                for w, wt in zip(first.final_weights, cfg.true_weights))
    ratio = (final / initial) ** 0.5
    assert ratio <= 1e-6
    assert first.squared_error == second.squared_error
    assert first.weight_error_sq == second.weight_error_sq
    assert first.final_weights == second.final_weights
    _report(10, f"-x e*/2 vs jet cost gradient worst {worst:.2e} <= 1e-10; "
                f"noiseless id(M=4, mu=0.05, N=2000) weight-error ratio "
                f"{ratio:.2e} <= 1e-6, bit-reproducible per seed")


def test_criterion_11_chain_matrix_identity():
    rng = _rng(11)
    jh = qmat_conj_transpose(JACOBIAN)
    worst = 0.0
    for _ in range(50):
        q = rand_quat(rng)
        a, b, c, d, e = (rand_quat(rng) for _ in range(5))
        g_jet = a * jet_seed(q) * b + c * jet_seed(q).conjugate() * d \
            + e * jet_seed(q) * jet_seed(q)
        m = chain_matrix_involutions(g_jet.grad)
        p = qmat_from_real(real_jacobian(g_jet.grad))
        m_via_p = qmat_scale(qmat_mul(qmat_mul(JACOBIAN, p), jh), 4.0)
        worst = max(worst, max(qdist(m[i][j], m_via_p[i][j])
                               for i in range(4) for j in range(4)))
    assert worst <= 1e-12
    _report(11, f"4 J P J^H = M over 50 random smooth inner functions: "
                f"worst entry {worst:.2e} <= 1e-12")
