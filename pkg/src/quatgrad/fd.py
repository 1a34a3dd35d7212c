"""Finite-difference estimation of the four real partials.

This is the numerical ground truth against which every closed form and
rule in the package is checked, so it deliberately shares no code with the
jet machinery.
"""

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .hr import HRGradient, RealGradient, Side, left_from_real, right_from_real
from .quaternion import ONE, QI, QJ, QK, Quaternion

_AXES = (ONE, QI, QJ, QK)

QuatFn = Callable[[Quaternion], Quaternion]


@dataclass(frozen=True, slots=True)
class FDConfig:
    step: float
    scheme: str = "central"
    richardson: bool = False

    def __post_init__(self):
        if not 0.0 < self.step < 0.1:
            raise ValueError(f"step must lie in (0, 0.1), got {self.step}")
        if self.scheme not in ("central", "forward"):
            raise ValueError(f"unknown scheme {self.scheme!r}")


def default_step(q: Quaternion) -> float:
    """h = 1e-5 * max(1, |q|): the truncation/rounding balance for central
    differences."""
    return 1e-5 * max(1.0, abs(q))


def _estimate(f: QuatFn, q: Quaternion, h: float, scheme: str):
    if scheme == "central":
        return [(f(q + u * h) - f(q - u * h)) * (0.5 / h) for u in _AXES]
    f0 = f(q)
    return [(f(q + u * h) - f0) * (1.0 / h) for u in _AXES]


def real_partials_fd(f: QuatFn, q: Quaternion, cfg: FDConfig) -> RealGradient:
    """Estimate (df/dq_a, .., df/dq_d) by finite differences.

    Richardson extrapolation combines the h and h/2 estimates with the
    weights matching the scheme order: (4 E_{h/2} - E_h)/3 for the
    second-order central scheme, 2 E_{h/2} - E_h for the first-order
    forward scheme.  Errors raised by f propagate unchanged.
    """
    coarse = _estimate(f, q, cfg.step, cfg.scheme)
    if not cfg.richardson:
        return RealGradient(*coarse)
    fine = _estimate(f, q, cfg.step / 2.0, cfg.scheme)
    if cfg.scheme == "central":
        combined = [(e2 * 4.0 - e1) * (1.0 / 3.0) for e1, e2 in zip(coarse, fine)]
    else:
        combined = [e2 * 2.0 - e1 for e1, e2 in zip(coarse, fine)]
    return RealGradient(*combined)


def hr_gradient_fd(f: QuatFn, q: Quaternion, cfg: FDConfig,
                   side: Side = Side.LEFT) -> HRGradient:
    """Finite-difference HR gradient: real partials composed with the
    left/right conversion."""
    g = real_partials_fd(f, q, cfg)
    return left_from_real(g) if side is Side.LEFT else right_from_real(g)


def rel_error(x: Quaternion, y: Quaternion) -> float:
    """|x - y| / max(1, |y|): the error metric used throughout the checks."""
    return abs(x - y) / max(1.0, abs(y))


def gradient_error(g: RealGradient, reference: RealGradient) -> float:
    """Aggregate relative distance between two real gradients."""
    num = math.sqrt(sum((a - b).norm_sq()
                        for a, b in zip(g.as_tuple(), reference.as_tuple())))
    den = max(1.0, math.sqrt(sum(b.norm_sq() for b in reference.as_tuple())))
    return num / den


def convergence_order(f: QuatFn, q: Quaternion, steps: Sequence[float],
                      reference: RealGradient, scheme: str = "central") -> float:
    """Least-squares slope of log(error) against log(h).

    The reference gradient is the analytic (jet) truth.  Steps whose error
    sits at the rounding floor (< 1e-12) are excluded; if fewer than two
    remain the order cannot be estimated and NaN is returned.  Central
    differences yield a slope near 2 on smooth functions, forward
    differences near 1.
    """
    if len(steps) < 3:
        raise ValueError("need at least 3 steps in a geometric sequence")
    points = []
    for h in steps:
        err = gradient_error(real_partials_fd(f, q, FDConfig(h, scheme)),
                             reference)
        if err >= 1e-12:
            points.append((math.log(h), math.log(err)))
    if len(points) < 2:
        return math.nan
    xs, ys = zip(*points)
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)
