"""Quaternion LMS adaptive filter.

Prediction is y[n] = w^T[n] x[n] (plain transpose: quaternion products in
the order w*x), the error is e[n] = d[n] - y[n], and the real cost
J[n] = e e* has gradient -x e*/2 per tap.  Following the steepest descent
direction -(grad J)* with the 1/2 absorbed into the step size gives the
update

    w[n+1] = w[n] + mu * e[n] x*[n]      (per tap: w_m + mu * e * x_m*),

i.e. the exposed mu equals twice the step applied to the raw gradient.
The product order e * x* matters; x* * e is wrong for quaternions.
"""

import csv
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import LengthMismatch
from .quaternion import ZERO, Quaternion

#: Weight-vector norm beyond which a run is declared divergent.
DIVERGENCE_LIMIT = 1e12


class StabilityWarning(UserWarning):
    """Step size exceeds the heuristic stability guard 1/(2 M E|x|^2)."""


@dataclass(frozen=True, slots=True)
class FilterState:
    """Immutable snapshot of the adaptive filter: weights, step size,
    iteration counter."""

    weights: tuple[Quaternion, ...]
    step_size: float
    iteration: int = 0

    def __post_init__(self):
        if len(self.weights) < 1:
            raise ValueError("filter needs at least one tap")
        # mu = 0 is admitted so that "zero step leaves weights unchanged"
        # is expressible; negative steps are rejected
        if self.step_size < 0.0:
            raise ValueError(f"step size must be nonnegative, got {self.step_size}")


@dataclass(frozen=True, slots=True)
class SamplePair:
    """One input vector x[n] and the desired output d[n]."""

    input: tuple[Quaternion, ...]
    desired: Quaternion


def _check_length(state: FilterState, x: Sequence[Quaternion]) -> None:
    if len(x) != len(state.weights):
        raise LengthMismatch(
            f"input length {len(x)} != filter length {len(state.weights)}")


def predict(state: FilterState, x: Sequence[Quaternion]) -> Quaternion:
    """y = sum_m w_m x_m, products in the order w*x."""
    _check_length(state, x)
    acc = ZERO
    for w, xm in zip(state.weights, x):
        acc = acc + w * xm
    return acc


def error_signal(state: FilterState, sample: SamplePair) -> Quaternion:
    """e = d - w^T x; its conjugate is e* = d* - x^H w*."""
    return sample.desired - predict(state, sample.input)


def cost_gradient(state: FilterState, sample: SamplePair) -> tuple[Quaternion, ...]:
    """Per-tap gradient of J = e e*: -x_m e* / 2.

    Matches the jet-propagated d1 gradient of the cost with respect to
    each tap.
    """
    e_conj = error_signal(state, sample).conjugate()
    return tuple((xm * e_conj) * -0.5 for xm in sample.input)


def update_step(state: FilterState, sample: SamplePair) -> FilterState:
    """One QLMS update: w_m <- w_m + mu * e * x_m* (and bump the counter)."""
    e = error_signal(state, sample)
    mu = state.step_size
    new_weights = tuple(w + (e * xm.conjugate()) * mu
                        for w, xm in zip(state.weights, sample.input))
    return FilterState(new_weights, mu, state.iteration + 1)


# ---------------------------------------------------------------------------
# Synthetic system-identification harness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    """Configuration for a noisy system-identification run.

    Attributes:
        filter_length: number of taps M.
        true_weights: the target weight vector (length M).
        noise_power: total noise power; each of the four axes gets
            variance noise_power/4.
        step_size: the QLMS mu.
        iterations: number of update steps N.
        rng_seed: seed for the input/noise generator; runs are
            bit-reproducible per seed.
    """

    filter_length: int
    true_weights: tuple[Quaternion, ...]
    noise_power: float
    step_size: float
    iterations: int
    rng_seed: int

    def __post_init__(self):
        if self.filter_length < 1:
            raise ValueError("filter_length must be >= 1")
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.noise_power < 0.0:
            raise ValueError("noise_power must be nonnegative")
        if self.step_size < 0.0:
            raise ValueError("step_size must be nonnegative")
        if len(self.true_weights) != self.filter_length:
            raise ValueError(
                f"true_weights has length {len(self.true_weights)}, "
                f"expected {self.filter_length}")


@dataclass
class ConvergenceRecord:
    """Per-iteration |e[n]|^2 and |w[n] - w_true|^2 plus the final weights.

    weight_error_sq[n] is taken before the n-th update, so entry 0 is the
    initial error; the post-run error comes from final_weights.  Lists are
    truncated at the point of divergence when the run is cut short.
    """

    squared_error: list[float] = field(default_factory=list)
    weight_error_sq: list[float] = field(default_factory=list)
    final_weights: tuple[Quaternion, ...] = ()
    diverged: bool = False


def run_system_identification(cfg: ExperimentConfig) -> ConvergenceRecord:
    """Run the QLMS filter against a synthetic linear system.

    Inputs have independent standard-normal components on all four axes
    per tap; the desired signal is d[n] = w_true^T x[n] + noise with
    per-axis noise variance noise_power/4.  Weights start at zero.  A
    StabilityWarning is emitted when mu exceeds the heuristic guard
    1/(2 M E|x|^2) with E|x|^2 estimated from the generated signal.  The
    run stops early (diverged=True) if the weight norm passes
    DIVERGENCE_LIMIT.
    """
    m = cfg.filter_length
    n_iter = cfg.iterations
    rng = np.random.default_rng(cfg.rng_seed)
    xs = rng.standard_normal((n_iter, m, 4))
    noise = rng.standard_normal((n_iter, 4)) * np.sqrt(cfg.noise_power / 4.0)

    mean_power = float(np.mean(np.sum(xs * xs, axis=2)))
    guard = 1.0 / (2.0 * m * mean_power)
    if cfg.step_size > guard:
        warnings.warn(
            f"step size {cfg.step_size:.4g} exceeds the stability guard "
            f"{guard:.4g} = 1/(2 M E|x|^2); the run may diverge",
            StabilityWarning, stacklevel=2)

    state = FilterState((ZERO,) * m, cfg.step_size)
    record = ConvergenceRecord()
    for n in range(n_iter):
        x = tuple(Quaternion(*(float(v) for v in xs[n, tap]))
                  for tap in range(m))
        d = ZERO
        for wt, xm in zip(cfg.true_weights, x):
            d = d + wt * xm
        d = d + Quaternion(*(float(v) for v in noise[n]))
        sample = SamplePair(x, d)

        e = error_signal(state, sample)
        record.squared_error.append(e.norm_sq())
        record.weight_error_sq.append(
            sum((w - wt).norm_sq()
                for w, wt in zip(state.weights, cfg.true_weights)))

        state = update_step(state, sample)
        if sum(w.norm_sq() for w in state.weights) > DIVERGENCE_LIMIT ** 2:
            record.diverged = True
            break

    record.final_weights = state.weights
    return record


def write_record_csv(record: ConvergenceRecord, path) -> None:
    """CSV columns: iteration, squared_error, weight_error_norm (the
    recorded squared norms), full round-trip precision."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "squared_error", "weight_error_norm"])
        for n, (se, we) in enumerate(zip(record.squared_error,
                                         record.weight_error_sq)):
            writer.writerow([n, repr(se), repr(we)])


def read_record_csv(path) -> tuple[list[float], list[float]]:
    """Parse a CSV written by write_record_csv back into the two series."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["iteration", "squared_error", "weight_error_norm"]:
            raise ValueError(f"unexpected CSV header in {Path(path).name}: {header}")
        squared_error, weight_error = [], []
        for row in reader:
            squared_error.append(float(row[1]))
            weight_error.append(float(row[2]))
    return squared_error, weight_error
