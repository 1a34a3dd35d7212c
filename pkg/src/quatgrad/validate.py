"""Self-check suites behind the `validate` CLI command.

Each suite re-runs the library's mathematical invariants on seeded random
data and reports pass/fail counts with the worst observed error.  The
suites mirror what the pytest suite asserts, packaged for scripted use.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import fd, hr, regular
from .quaternion import (ONE, QI, QJ, QK, ZERO, AxisUnit, IMAGINARY_AXES,
                         Quaternion, components_from_involutions, exp_q,
                         ln_q, polar, tanh_q)

SUITE_NAMES = ("algebra", "rules", "series", "consistency", "fd")


@dataclass
class CheckResult:
    name: str
    passed: int
    failed: int
    worst_error: float
    lines: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0


@dataclass
class SuiteReport:
    suite: str
    checks: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def worst_error(self) -> float:
        return max((c.worst_error for c in self.checks), default=0.0)


def random_quaternion(rng: np.random.Generator, scale: float = 1.0) -> Quaternion:
    return Quaternion(*(float(x) for x in rng.standard_normal(4) * scale))


def random_pure_unit(rng: np.random.Generator) -> Quaternion:
    while True:
        v = rng.standard_normal(3)
        n = float(np.linalg.norm(v))
        if n > 1e-3:
            return Quaternion(0.0, *(float(x) / n for x in v))


def _tally(name: str, errors, tol: float, lines=None) -> CheckResult:
    errors = list(errors)
    failed = sum(1 for e in errors if not e <= tol)
    worst = max(errors, default=0.0)
    return CheckResult(name, len(errors) - failed, failed, worst, lines or [])


def _dist(p: Quaternion, q: Quaternion) -> float:
    return abs(p - q)


# ---------------------------------------------------------------------------
# algebra
# ---------------------------------------------------------------------------

_TABLE = {
    ("1", "1"): "1", ("1", "i"): "i", ("1", "j"): "j", ("1", "k"): "k",
    ("i", "1"): "i", ("i", "i"): "-1", ("i", "j"): "k", ("i", "k"): "-j",
    ("j", "1"): "j", ("j", "i"): "-k", ("j", "j"): "-1", ("j", "k"): "i",
    ("k", "1"): "k", ("k", "i"): "j", ("k", "j"): "-i", ("k", "k"): "-1",
}
_UNITS = {"1": ONE, "i": QI, "j": QJ, "k": QK,
          "-1": -ONE, "-i": -QI, "-j": -QJ, "-k": -QK}


def suite_algebra(rng: np.random.Generator) -> SuiteReport:
    checks = []

    errors = [_dist(_UNITS[x] * _UNITS[y], _UNITS[want])
              for (x, y), want in _TABLE.items()]
    checks.append(_tally("multiplication table (exact)", errors, 0.0))

    errors = []
    for _ in range(1000):
        q = random_quaternion(rng)
        n2 = q.norm_sq()
        errors.append(abs((q * q.conjugate()).a - n2) / max(1.0, n2))
        errors.append((q * q.conjugate()).imag_norm() / max(1.0, n2))
        if n2 > 1e-6:
            errors.append(_dist(q * q.inverse(), ONE))
    checks.append(_tally("q q* = |q|^2 and q q^-1 = 1", errors, 1e-13))

    errors = []
    for _ in range(1000):
        q = random_quaternion(rng)
        quad = tuple(q.involution(axis) for axis in
                     (AxisUnit.ONE, AxisUnit.I, AxisUnit.J, AxisUnit.K))
        rec = components_from_involutions(*quad)
        errors.append(max(abs(x - y) for x, y in
                          zip(rec, (q.a, q.b, q.c, q.d))))
        total = quad[0] + quad[1] + quad[2] + quad[3]
        errors.append(_dist(total, Quaternion(4.0 * q.a)))
        errors.append(_dist(quad[1] + quad[2] + quad[3] - q,
                            q.conjugate() * 2.0))
    checks.append(_tally("involution recovery and relations", errors, 1e-13))

    errors = []
    for _ in range(500):
        q = random_quaternion(rng)
        p = polar(q)
        if p.imag_axis is not None:
            errors.append(_dist(p.imag_axis * p.imag_axis, -ONE))
            errors.append(_dist(Quaternion(p.real_part) + p.imag_axis * p.imag_norm, q))
        else:
            errors.append(_dist(Quaternion(p.real_part), q))
    checks.append(_tally("polar reconstruction, vhat^2 = -1", errors, 1e-13))

    errors = []
    count = 0
    while count < 1000:
        q = random_quaternion(rng)
        if q.imag_norm() >= math.pi - 0.1:
            continue
        count += 1
        back = ln_q(exp_q(q))
        errors.append(max(abs(x) for x in ((back.a - q.a), (back.b - q.b),
                                           (back.c - q.c), (back.d - q.d))))
    checks.append(_tally("ln(exp(q)) = q for v < pi - 0.1", errors, 1e-10))

    errors = []
    for _ in range(200):
        q = random_quaternion(rng, 0.7)
        if math.sinh(q.a) ** 2 + math.cos(q.imag_norm()) ** 2 < 0.1:
            continue
        e_pos, e_neg = exp_q(q), exp_q(-q)
        quotient = (e_pos - e_neg) * (e_pos + e_neg).inverse()
        errors.append(_dist(quotient, tanh_q(q)))
    checks.append(_tally("tanh quotient form vs closed form", errors, 1e-12))

    return SuiteReport("algebra", checks)


# ---------------------------------------------------------------------------
# rules
# ---------------------------------------------------------------------------

def _jet_library(rng: np.random.Generator):
    """Sample (description, jet builder) pairs over {q, q*, q^2, const*q}."""
    c = random_quaternion(rng)
    return [
        ("q", lambda q: hr.jet_seed(q)),
        ("q*", lambda q: hr.jet_seed(q).conjugate()),
        ("q^2", lambda q: hr.jet_seed(q) * hr.jet_seed(q)),
        ("cq", lambda q, c=c: c * hr.jet_seed(q)),
    ]


def suite_rules(rng: np.random.Generator) -> SuiteReport:
    checks = []

    jh = hr.qmat_conj_transpose(hr.JACOBIAN)
    errors = []
    for product in (hr.qmat_mul(hr.JACOBIAN, jh), hr.qmat_mul(jh, hr.JACOBIAN)):
        for i in range(4):
            for j in range(4):
                want = Quaternion(0.25) if i == j else ZERO
                errors.append(_dist(product[i][j], want))
    checks.append(_tally("J J^H = J^H J = I/4 (exact)", errors, 0.0))

    errors = []
    for _ in range(1000):
        g = hr.RealGradient(*(random_quaternion(rng) for _ in range(4)))
        back = hr.real_from_left(hr.left_from_real(g))
        errors.append(max(_dist(a, b) for a, b in
                          zip(g.as_tuple(), back.as_tuple())))
    checks.append(_tally("real_from_left . left_from_real = id", errors, 1e-13))

    q = random_quaternion(rng)
    errors = []
    h_id = hr.left_from_real(hr.jet_seed(q).grad)
    errors.extend(_dist(a, b) for a, b in
                  zip(h_id.as_tuple(), (ONE, ZERO, ZERO, ZERO)))
    h_conj = hr.left_from_real(hr.jet_seed(q).conjugate().grad)
    errors.append(_dist(h_conj.d1, Quaternion(-0.5)))
    for axis in IMAGINARY_AXES:
        u = axis.unit
        jet = (-u) * hr.jet_seed(q) * u
        errors.append(_dist(hr.left_from_real(jet.grad).d1, ZERO))
    c = random_quaternion(rng)
    jet_cq = c * hr.jet_seed(q)
    errors.append(_dist(hr.left_from_real(jet_cq.grad).d1, c))
    errors.append(_dist(hr.right_from_real(jet_cq.grad).d1, Quaternion(c.a)))
    checks.append(_tally("basic derivatives (q, q*, q^nu, cq)", errors, 0.0))

    errors = []
    for _ in range(100):
        q = random_quaternion(rng)
        h2 = hr.left_from_real((hr.jet_seed(q) * hr.jet_seed(q)).grad)
        errors.append(_dist(h2.d1, q + q.a))
        errors.append(_dist(h2.dI, QI * q.b))
        errors.append(_dist(h2.dJ, QJ * q.c))
        errors.append(_dist(h2.dK, QK * q.d))
    checks.append(_tally("non-independence of q^2 (involution slots)", errors, 1e-12))

    errors = []
    builders = [
        ("q^2", lambda s: s * s),
        ("q^3", lambda s: s * s * s),
        ("q*q", lambda s: s.conjugate() * s),
        ("exp", hr.jet_exp),
    ]
    for _, build in builders:
        q = random_quaternion(rng)
        jet = build(hr.jet_seed(q))
        h = hr.left_from_real(jet.grad)
        delta = random_quaternion(rng, 1.0) * 0.02
        prev = None
        for _ in range(4):
            direct = build(hr.jet_seed(q + delta)).value - jet.value
            err = abs(direct - hr.differential(h, delta))
            if prev is not None:
                ratio = prev / err if err > 0 else 4.0
                errors.append(abs(ratio - 4.0))  # tolerance 0.5 on the ratio
            prev = err
            delta = delta * 0.5
    checks.append(_tally("differential reconstruction is 2nd order", errors, 0.5))

    errors = []
    witness_ok = 0
    for _ in range(100):
        q = random_quaternion(rng)
        alpha, beta = random_quaternion(rng), random_quaternion(rng)
        f_jet = hr.jet_seed(q) * hr.jet_seed(q)
        g_jet = hr.jet_seed(q).conjugate()
        lhs = hr.left_from_real((alpha * f_jet + beta * g_jet).grad)
        hf = hr.left_from_real(f_jet.grad)
        hg = hr.left_from_real(g_jet.grad)
        for n in range(4):
            errors.append(_dist(lhs.as_tuple()[n],
                                alpha * hf.as_tuple()[n] + beta * hg.as_tuple()[n]))
    q = Quaternion(0.3, -0.7, 1.1, 0.4)
    d_right = hr.left_from_real((hr.jet_seed(q) * QI).grad).d1
    if _dist(d_right, ONE * QI) > 0.5:
        witness_ok = 1
    checks.append(_tally("left-linearity", errors, 1e-12))
    checks.append(CheckResult("right-multiplication linearity fails (witness)",
                              witness_ok, 1 - witness_ok, 0.0))

    errors = []
    lib = _jet_library(rng)
    for _ in range(200):
        q = random_quaternion(rng)
        _, bf = lib[rng.integers(len(lib))]
        _, bg = lib[rng.integers(len(lib))]
        f_jet, g_jet = bf(q), bg(q)
        direct = hr.left_from_real((f_jet * g_jet).grad)
        via = hr.product_rule_first(f_jet.value, f_jet.grad, g_jet.value,
                                    hr.left_from_real(g_jet.grad))
        errors.append(max(_dist(a, b) for a, b in
                          zip(direct.as_tuple(), via.as_tuple())))
        direct_r = hr.right_from_real((f_jet * g_jet).grad)
        via_r = hr.product_rule_first_right(hr.right_from_real(f_jet.grad),
                                            g_jet.value, f_jet.value, g_jet.grad)
        errors.append(max(_dist(a, b) for a, b in
                          zip(direct_r.as_tuple(), via_r.as_tuple())))
    checks.append(_tally("first product rule (left and right) vs jets",
                         errors, 1e-11))

    errors = []
    matrix_errors = []
    for _ in range(50):
        q = random_quaternion(rng)
        a1, b1, c1 = (random_quaternion(rng) for _ in range(3))
        g_jet = a1 * hr.jet_seed(q) * b1 + c1 * hr.jet_seed(q) * hr.jet_seed(q)
        f_of = lambda jet: jet * jet
        direct = hr.left_from_real(f_of(g_jet).grad)
        outer = hr.left_from_real(f_of(hr.jet_seed(g_jet.value)).grad)
        m = hr.chain_matrix_involutions(g_jet.grad)
        via1 = hr.chain_rule_first(outer, m)
        outer_real = f_of(hr.jet_seed(g_jet.value)).grad
        o = hr.chain_matrix_components(g_jet.grad)
        via2 = hr.chain_rule_second(outer_real, o)
        for via in (via1, via2):
            errors.append(max(_dist(a, b) for a, b in
                              zip(direct.as_tuple(), via.as_tuple())))
        m2 = hr.qmat_scale(hr.qmat_mul(hr.qmat_mul(
            hr.JACOBIAN, hr.qmat_from_real(hr.real_jacobian(g_jet.grad))), jh), 4.0)
        matrix_errors.append(max(_dist(m[i][j], m2[i][j])
                            for i in range(4) for j in range(4)))
    checks.append(_tally("chain rules 1 and 2 vs jet composition", errors, 1e-11))
    checks.append(_tally("4 J P J^H = M", matrix_errors, 1e-12))

    errors = []
    for _ in range(100):
        q = random_quaternion(rng)
        c = random_quaternion(rng)
        d = random_quaternion(rng)
        seeds = [
            hr.jet_seed(q) * hr.jet_seed(q).conjugate(),          # |q|^2
            (c * hr.jet_seed(q) + (c * hr.jet_seed(q)).conjugate()) * 0.5,  # R(cq)
        ]
        e_jet = d - c * hr.jet_seed(q)
        seeds.append(e_jet * e_jet.conjugate())                   # e e*
        for jet in seeds:
            hl = hr.left_from_real(jet.grad)
            hrr = hr.right_from_real(jet.grad)
            errors.append(max(_dist(a, b) for a, b in
                              zip(hl.as_tuple(), hrr.as_tuple())))
            for axis, part in zip(IMAGINARY_AXES, (hl.dI, hl.dJ, hl.dK)):
                errors.append(_dist(part, hl.d1.involution(axis)))
        errors.append(_dist(hr.real_valued_reduce(
            hr.left_from_real(seeds[0].grad)), q.conjugate() * 0.5))
    checks.append(_tally("real-valued gradient identities", errors, 1e-12))

    return SuiteReport("rules", checks)


# ---------------------------------------------------------------------------
# series
# ---------------------------------------------------------------------------

def _safe_radius_quat(rng, lo=0.4, hi=2.0) -> Quaternion:
    while True:
        q = random_quaternion(rng)
        if lo <= abs(q) <= hi:
            return q


def suite_series(rng: np.random.Generator) -> SuiteReport:
    checks = []

    errors, lr = [], []
    for n in range(-8, 9):
        for _ in range(100):
            q = _safe_radius_quat(rng)
            closed = regular.power_derivative(q, ZERO, n)
            oracle = regular.power_derivative_oracle(q, ZERO, n)
            errors.append(_dist(closed, oracle) / max(1.0, abs(oracle)))
            lr.append(_dist(closed,
                            regular.power_derivative(q, ZERO, n, hr.Side.RIGHT)))
    checks.append(_tally("power derivative vs induction/recurrence oracle, n in [-8,8]",
                         errors, 1e-11))
    checks.append(_tally("left power derivative == right", lr, 1e-13))

    errors = []
    for n in range(-8, 9):
        if n == 0:
            continue
        for _ in range(20):
            q = _safe_radius_quat(rng)
            jet = hr.jet_pow(hr.jet_seed(q), n)
            errors.append(_dist(regular.power_derivative(q, ZERO, n),
                                hr.left_from_real(jet.grad).d1)
                          / max(1.0, abs(regular.power_derivative(q, ZERO, n))))
    checks.append(_tally("power derivative vs jet pipeline", errors, 1e-10))

    errors = []
    for _ in range(200):
        q = _safe_radius_quat(rng)
        n = int(rng.integers(-6, 7))
        if n == 0:
            continue
        literal = (q ** n - q.conjugate() ** n) * (q - q.conjugate()).inverse() \
            if q.imag_norm() > 0.05 else None
        s = regular.symmetric_ratio(q, n)
        if literal is not None:
            errors.append(literal.imag_norm() / max(1.0, abs(literal)))
            errors.append(_dist(literal, Quaternion(s)) / max(1.0, abs(s)))
    checks.append(_tally("symmetric ratio is real = literal quotient", errors, 1e-13))

    errors = []
    exp_fn = regular.exp_series(40)
    tanh_fn = regular.tanh_series(61)
    for _ in range(100):
        q = random_quaternion(rng, 0.5)
        if abs(q) > 1.0:
            continue
        errors.append(_dist(exp_fn.derivative(q), regular.exp_derivative(q)))
        errors.append(_dist(tanh_fn.derivative(q), regular.tanh_derivative(q)))
    checks.append(_tally("series derivatives vs closed forms (|q| <= 1)",
                         errors, 1e-8))

    errors = []
    for _ in range(100):
        q = _safe_radius_quat(rng, 0.4, 1.5)
        coeffs = {n: Quaternion(float(rng.standard_normal()))
                  for n in range(-3, 6)}
        left = regular.PowerSeriesFn(ZERO, coeffs, hr.Side.LEFT, (0.1, 2.0))
        right = regular.PowerSeriesFn(ZERO, coeffs, hr.Side.RIGHT, (0.1, 2.0))
        errors.append(_dist(left.derivative(q), right.derivative(q)))
    checks.append(_tally("real coefficients: left series == right", errors, 1e-12))

    return SuiteReport("series", checks)


# ---------------------------------------------------------------------------
# consistency (real-axis limits)
# ---------------------------------------------------------------------------

def suite_consistency() -> SuiteReport:
    rng = np.random.default_rng(2024)
    v_sequence = [10.0 ** (-p) for p in range(1, 7)]
    cases = [
        ("exp", regular.Elementary.exp(), (0.5, 1.5)),
        ("ln", regular.Elementary.ln(), (0.5, 2.5)),
        ("tanh", regular.Elementary.tanh(), (0.3, 1.2)),
        ("power(-2)", regular.Elementary.power(-2), (0.8, 2.0)),
        ("power(-1)", regular.Elementary.power(-1), (0.8, 2.0)),
        ("power(1)", regular.Elementary.power(1), (0.5, 2.0)),
        ("power(2)", regular.Elementary.power(2), (0.5, 2.0)),
        ("power(3)", regular.Elementary.power(3), (0.5, 2.0)),
    ]
    checks = []
    for label, fn, (lo, hi) in cases:
        monotone_failures = 0
        lines = []
        worst = 0.0
        for _ in range(10):
            q_a = float(rng.uniform(lo, hi))
            axis = random_pure_unit(rng)
            errs = regular.real_axis_limit_check(fn, q_a, v_sequence, axis)
            # pairs already at the rounding floor cannot keep decreasing
            floor = 1e-13
            if any(b >= a and not (a <= floor and b <= floor)
                   for a, b in zip(errs, errs[1:])):
                monotone_failures += 1
            worst = max(worst, errs[-1])
            lines.append(f"    {label} at q_a={q_a:.3f}: " +
                         " > ".join(f"{e:.2e}" for e in errs))
        checks.append(CheckResult(f"real-axis limit monotone: {label}",
                                  10 - monotone_failures, monotone_failures,
                                  worst, lines))
    return SuiteReport("consistency", checks)


# ---------------------------------------------------------------------------
# fd
# ---------------------------------------------------------------------------

def suite_fd(rng: np.random.Generator) -> SuiteReport:
    checks = []

    cases = [
        ("q^2", lambda q: q * q, lambda s: s * s, None),
        ("q^3", lambda q: q ** 3, lambda s: s * s * s, None),
        ("q^-1", lambda q: q.inverse(), lambda s: s.inverse(),
         lambda q: abs(q) > 0.4),
        ("q*q", lambda q: q.conjugate() * q, lambda s: s.conjugate() * s, None),
        ("exp", exp_q, hr.jet_exp, lambda q: abs(q) < 2.5),
        ("tanh", tanh_q, hr.jet_tanh,
         lambda q: math.sinh(q.a) ** 2 + math.cos(q.imag_norm()) ** 2 > 0.1),
    ]
    errors = []
    for label, f, jet_of, safe in cases:
        done = 0
        while done < 100:
            q = random_quaternion(rng)
            if safe is not None and not safe(q):
                continue
            done += 1
            cfg = fd.FDConfig(fd.default_step(q))
            est = fd.real_partials_fd(f, q, cfg)
            ref = jet_of(hr.jet_seed(q)).grad
            errors.append(fd.gradient_error(est, ref))
    checks.append(_tally("central fd vs jet gradient (6 functions)", errors, 1e-6))

    improvements = []
    for _ in range(100):
        q = random_quaternion(rng)
        ref = hr.jet_pow(hr.jet_seed(q), 3).grad
        plain = fd.gradient_error(
            fd.real_partials_fd(lambda z: z ** 3, q, fd.FDConfig(1e-3)), ref)
        rich = fd.gradient_error(
            fd.real_partials_fd(lambda z: z ** 3, q,
                                fd.FDConfig(1e-3, richardson=True)), ref)
        improvements.append(rich < plain)
    median_improves = sorted(improvements)[len(improvements) // 2]
    checks.append(CheckResult("Richardson beats plain central on q^3 (median)",
                              int(median_improves), int(not median_improves),
                              0.0))

    lines = []
    slope_failures = 0
    steps = [1e-2 / 2 ** i for i in range(5)]
    for label, f, jet_of, point in (
            ("q^3 central", lambda q: q ** 3,
             lambda s: hr.jet_pow(s, 3), Quaternion(0.4, 0.3, -0.2, 0.6)),
            ("exp central", exp_q, hr.jet_exp, Quaternion(0.2, 0.5, -0.3, 0.1))):
        ref = jet_of(hr.jet_seed(point)).grad
        slope = fd.convergence_order(f, point, steps, ref, "central")
        lines.append(f"    {label}: slope {slope:.3f}")
        if not 1.8 <= slope <= 2.2:
            slope_failures += 1
    ref = hr.jet_exp(hr.jet_seed(Quaternion(0.2, 0.5, -0.3, 0.1))).grad
    slope = fd.convergence_order(exp_q, Quaternion(0.2, 0.5, -0.3, 0.1),
                                 steps, ref, "forward")
    lines.append(f"    exp forward: slope {slope:.3f}")
    if not 0.8 <= slope <= 1.2:
        slope_failures += 1
    checks.append(CheckResult("convergence orders (central ~2, forward ~1)",
                              3 - slope_failures, slope_failures, 0.0, lines))

    errors = []
    for fn, safe in ((regular.Elementary.exp(), lambda q: abs(q) < 2.0),
                     (regular.Elementary.ln(),
                      lambda q: q.a > 0.3 and q.imag_norm() > 0.1),
                     (regular.Elementary.tanh(),
                      lambda q: math.sinh(q.a) ** 2
                      + math.cos(q.imag_norm()) ** 2 > 0.1)):
        done = 0
        while done < 200:
            q = random_quaternion(rng)
            if not safe(q):
                continue
            done += 1
            cfg = fd.FDConfig(fd.default_step(q), richardson=True)
            est = fd.hr_gradient_fd(fn.value, q, cfg)
            closed = fn.hr_derivative(q)
            errors.append(fd.rel_error(est.d1, closed))
    checks.append(_tally("closed-form derivatives vs Richardson fd", errors, 1e-6))

    return SuiteReport("fd", checks)


def run_suites(names, seed: int = 20_240_601) -> list[SuiteReport]:
    reports = []
    for name in names:
        rng = np.random.default_rng(seed)
        if name == "algebra":
            reports.append(suite_algebra(rng))
        elif name == "rules":
            reports.append(suite_rules(rng))
        elif name == "series":
            reports.append(suite_series(rng))
        elif name == "consistency":
            reports.append(suite_consistency())
        elif name == "fd":
            reports.append(suite_fd(rng))
        else:
            raise ValueError(f"unknown suite {name!r}")
    return reports
