"""Scalar quaternion arithmetic.

A quaternion q = a + b i + c j + d k is stored as four doubles in the fixed
component order (a, b, c, d).  The imaginary units satisfy

    i^2 = j^2 = k^2 = -1,   ij = k,  jk = i,  ki = j,
    ij = -ji,  ki = -ik,  kj = -jk,

so multiplication is non-commutative, but real factors always commute.
Besides the Hamilton product the module provides the axis involutions
q^nu = -nu q nu, recovery of the real components from an involution
quadruple, the polar decomposition q = a + v*vhat, the elementary
transcendental functions exp/ln/tanh in closed form, and a text form
"a+bi+cj+dk" used by the CLI and test fixtures.
"""

import math
import re
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError, InconsistentQuadruple, PoleError

_QUADRUPLE_TOL = 1e-10
_TANH_POLE_TOL = 1e-12


@dataclass(frozen=True, slots=True)
class Quaternion:
    """An immutable quaternion with components (a, b, c, d).

    All arithmetic returns new instances; values are safe to share across
    threads.  Public construction rejects NaN and infinity.
    """

    a: float
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            x = getattr(self, name)
            if not isinstance(x, float):
                x = float(x)
                object.__setattr__(self, name, x)
            if not math.isfinite(x):
                raise ValueError(f"non-finite quaternion component: {x!r}")

    # -- basic structure ------------------------------------------------

    def real(self) -> float:
        """The real part R(q)."""
        return self.a

    def imag(self) -> "Quaternion":
        """The imaginary part I(q) as a pure quaternion."""
        return Quaternion(0.0, self.b, self.c, self.d)

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.a, -self.b, -self.c, -self.d)

    def norm_sq(self) -> float:
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def norm(self) -> float:
        return math.hypot(self.a, self.b, self.c, self.d)

    def imag_norm(self) -> float:
        """v = |I(q)|."""
        return math.hypot(self.b, self.c, self.d)

    def __abs__(self) -> float:
        return self.norm()

    def inverse(self) -> "Quaternion":
        """q^-1 = q* / |q|^2."""
        n2 = self.norm_sq()
        if n2 == 0.0:
            raise ZeroDivisionError("inverse of the zero quaternion")
        return Quaternion(self.a / n2, -self.b / n2, -self.c / n2, -self.d / n2)

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self.a + other.a, self.b + other.b,
                              self.c + other.c, self.d + other.d)
        if isinstance(other, (int, float)):
            return Quaternion(self.a + other, self.b, self.c, self.d)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Quaternion):
            return Quaternion(self.a - other.a, self.b - other.b,
                              self.c - other.c, self.d - other.d)
        if isinstance(other, (int, float)):
            return Quaternion(self.a - other, self.b, self.c, self.d)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(other - self.a, -self.b, -self.c, -self.d)
        return NotImplemented

    def __neg__(self):
        return Quaternion(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other):
        """Hamilton product; reals commute with everything."""
        if isinstance(other, Quaternion):
            a1, b1, c1, d1 = self.a, self.b, self.c, self.d
            a2, b2, c2, d2 = other.a, other.b, other.c, other.d
            return Quaternion(
                a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
            )
        if isinstance(other, (int, float)):
            return Quaternion(self.a * other, self.b * other,
                              self.c * other, self.d * other)
        return NotImplemented

    def __rmul__(self, other):
        # only reached for real scalars; quaternion*quaternion uses __mul__
        if isinstance(other, (int, float)):
            return Quaternion(self.a * other, self.b * other,
                              self.c * other, self.d * other)
        return NotImplemented

    def __truediv__(self, other):
        # division by a quaternion is ambiguous (left vs right); use inverse()
        if isinstance(other, (int, float)):
            return Quaternion(self.a / other, self.b / other,
                              self.c / other, self.d / other)
        return NotImplemented

    def __pow__(self, n):
        """Integer power, negative exponents via the inverse."""
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- involutions -----------------------------------------------------

    def involution(self, axis: "AxisUnit") -> "Quaternion":
        """q^nu = -nu q nu: flips the two imaginary axes other than nu."""
        if axis is AxisUnit.ONE:
            return self
        if axis is AxisUnit.I:
            return Quaternion(self.a, self.b, -self.c, -self.d)
        if axis is AxisUnit.J:
            return Quaternion(self.a, -self.b, self.c, -self.d)
        return Quaternion(self.a, -self.b, -self.c, self.d)

    # -- text form ---------------------------------------------------------

    def __str__(self) -> str:
        parts = [repr(self.a)]
        for value, suffix in ((self.b, "i"), (self.c, "j"), (self.d, "k")):
            sign = "-" if math.copysign(1.0, value) < 0 else "+"
            parts.append(f"{sign}{abs(value)!r}{suffix}")
        return "".join(parts)

    @classmethod
    def from_string(cls, text: str) -> "Quaternion":
        """Parse the 'a+bi+cj+dk' form; all four components are mandatory."""
        m = _QUATERNION_RE.match(text)
        if m is None:
            raise ValueError(f"not a quaternion string: {text!r} "
                             "(expected a+bi+cj+dk with all four components)")
        return cls(float(m.group(1)), float(m.group(2)),
                   float(m.group(3)), float(m.group(4)))


_FLOAT = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_QUATERNION_RE = re.compile(
    rf"^\s*([+-]?{_FLOAT})([+-]{_FLOAT})i([+-]{_FLOAT})j([+-]{_FLOAT})k\s*$"
)

ZERO = Quaternion(0.0)
ONE = Quaternion(1.0)
QI = Quaternion(0.0, 1.0)
QJ = Quaternion(0.0, 0.0, 1.0)
QK = Quaternion(0.0, 0.0, 0.0, 1.0)


class AxisUnit(Enum):
    """The involution index nu: 1 denotes the identity involution q^1 = q."""

    ONE = "1"
    I = "i"  # noqa: E741 - the mathematical name
    J = "j"
    K = "k"

    @property
    def unit(self) -> Quaternion:
        return _AXIS_UNITS[self]


_AXIS_UNITS = {AxisUnit.ONE: ONE, AxisUnit.I: QI, AxisUnit.J: QJ, AxisUnit.K: QK}

IMAGINARY_AXES = (AxisUnit.I, AxisUnit.J, AxisUnit.K)


def isclose(p: Quaternion, q: Quaternion, *, rel_tol: float = 1e-12,
            abs_tol: float = 0.0) -> bool:
    """Componentwise-aggregate closeness: |p-q| against scaled tolerance."""
    return abs(p - q) <= max(abs_tol, rel_tol * max(abs(p), abs(q)))


def components_from_involutions(q: Quaternion, qi: Quaternion, qj: Quaternion,
                                qk: Quaternion) -> tuple[float, float, float, float]:
    """Recover (q_a, q_b, q_c, q_d) from the involution quadruple.

        q_a = (q + q^i + q^j + q^k)/4        q_b = (q + q^i - q^j - q^k)/(4i)
        q_c = (q - q^i + q^j - q^k)/(4j)     q_d = (q - q^i - q^j + q^k)/(4k)

    Each recovered value must be real up to rounding; a residue above
    1e-10 * max(1, |q|) signals a malformed quadruple and raises
    InconsistentQuadruple.
    """
    recovered = (
        (q + qi + qj + qk) * 0.25,
        (QI * (q + qi - qj - qk)) * -0.25,
        (QJ * (q - qi + qj - qk)) * -0.25,
        (QK * (q - qi - qj + qk)) * -0.25,
    )
    tol = _QUADRUPLE_TOL * max(1.0, abs(q))
    for name, value in zip("abcd", recovered):
        if value.imag_norm() > tol:
            raise InconsistentQuadruple(
                f"recovered q_{name} has imaginary residue "
                f"{value.imag_norm():.3e} (tolerance {tol:.3e})")
    return tuple(value.a for value in recovered)


@dataclass(frozen=True, slots=True)
class PolarForm:
    """q = real_part + imag_norm * imag_axis, with argument in [0, pi].

    When the imaginary part vanishes there is no distinguished axis:
    imag_axis is None and the argument is 0 or pi by the sign of the real
    part.  Consumers must branch on imag_norm before touching imag_axis.
    """

    real_part: float
    imag_norm: float
    imag_axis: Quaternion | None
    argument: float


def polar(q: Quaternion) -> PolarForm:
    """Polar decomposition q = q_a + v*vhat with vhat^2 = -1 (when v > 0)."""
    v = q.imag_norm()
    theta = math.atan2(v, q.a)
    if v == 0.0:
        return PolarForm(q.a, 0.0, None, theta)
    axis = Quaternion(0.0, q.b / v, q.c / v, q.d / v)
    return PolarForm(q.a, v, axis, theta)


def exp_q(q: Quaternion) -> Quaternion:
    """exp(q) = e^{q_a} (cos v + vhat sin v); reduces to the real exp at v=0."""
    ea = math.exp(q.a)
    v = q.imag_norm()
    if v == 0.0:
        return Quaternion(ea)
    f = ea * math.sin(v) / v
    return Quaternion(ea * math.cos(v), f * q.b, f * q.c, f * q.d)


def ln_q(q: Quaternion) -> Quaternion:
    """Principal logarithm ln(q) = ln|q| + vhat * arccos(q_a/|q|).

    Defined for all q with nonzero imaginary part and on the positive real
    axis.  On the real axis with q_a <= 0 there is no axis to carry the
    imaginary term, so the branch point is rejected.
    """
    r = q.norm()
    if r == 0.0:
        raise DomainError("ln is undefined at q = 0")
    v = q.imag_norm()
    if v == 0.0:
        if q.a < 0.0:
            raise DomainError("ln branch point: q is real with q_a <= 0")
        return Quaternion(math.log(q.a))
    # atan2(v, q_a) equals arccos(q_a/|q|) for v >= 0 and is stable near
    # the real axis
    f = math.atan2(v, q.a) / v
    return Quaternion(math.log(r), f * q.b, f * q.c, f * q.d)


def tanh_q(q: Quaternion) -> Quaternion:
    """tanh(q) = (sinh 2q_a + vhat sin 2v) / (2 (sinh^2 q_a + cos^2 v)).

    Agrees with (e^q - e^-q)(e^q + e^-q)^-1 wherever both are defined.  The
    denominator equals |cosh q|^2, so the poles are exactly the zeros of
    cosh q (q_a = 0, v = pi/2 + n*pi).
    """
    v = q.imag_norm()
    den = math.sinh(q.a) ** 2 + math.cos(v) ** 2
    if den < _TANH_POLE_TOL:
        raise PoleError(f"tanh pole: |cosh q|^2 = {den:.3e} at q = {q}")
    re = 0.5 * math.sinh(2.0 * q.a) / den
    if v == 0.0:
        return Quaternion(re)
    f = 0.5 * math.sin(2.0 * v) / (v * den)
    return Quaternion(re, f * q.b, f * q.c, f * q.d)
