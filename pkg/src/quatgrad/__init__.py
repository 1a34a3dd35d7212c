"""quatgrad: quaternion calculus with left/right restricted HR gradients.

The package provides exact quaternion arithmetic with involutions and
polar form, the left and right restricted HR gradient operators with their
product and chain rules, forward-mode jets for composing real gradients,
closed-form derivatives of power-series (regular) functions, a
finite-difference verification oracle, and a QLMS adaptive filter with a
system-identification harness.
"""

from .errors import (DomainError, InconsistentQuadruple, LengthMismatch,
                     NotRealValued, OutsideAnnulus, PoleError, QuatGradError,
                     SideMismatch)
from .fd import (FDConfig, convergence_order, default_step, gradient_error,
                 hr_gradient_fd, real_partials_fd, rel_error)
from .hr import (HRGradient, IDENTITY_GRADIENT, JACOBIAN, QJet, RealGradient,
                 Side, chain_matrix_components, chain_matrix_involutions,
                 chain_rule_first, chain_rule_second, chain_rule_third,
                 differential, jet_const, jet_exp, jet_pow, jet_seed,
                 jet_tanh, left_from_real, product_rule_first,
                 product_rule_first_right, qmat_conj_transpose,
                 qmat_from_real, qmat_mul, qmat_scale, real_from_left,
                 real_from_right, real_jacobian, real_valued_reduce,
                 right_from_real)
from .qlms import (ConvergenceRecord, DIVERGENCE_LIMIT, ExperimentConfig,
                   FilterState, SamplePair, StabilityWarning, cost_gradient,
                   error_signal, predict, read_record_csv,
                   run_system_identification, update_step, write_record_csv)
from .quaternion import (AxisUnit, IMAGINARY_AXES, ONE, PolarForm, QI, QJ, QK,
                         Quaternion, ZERO, components_from_involutions,
                         exp_q, isclose, ln_q, polar, tanh_q)
from .regular import (Elementary, PowerSeriesFn, exp_derivative, exp_series,
                      ln_derivative, ln_real_gradient, power_derivative,
                      power_derivative_oracle, real_axis_limit_check,
                      symmetric_ratio, tanh_derivative, tanh_series)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
