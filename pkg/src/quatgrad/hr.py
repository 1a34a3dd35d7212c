"""The left and right restricted HR gradient operators.

A quaternion function f(q) has four quaternion-valued real partials
df/dq_a .. df/dq_d (the RealGradient).  The restricted HR gradient is the
quadruple of partials with respect to q and its involutions q^i, q^j, q^k,
obtained by combining the real partials with the imaginary units:

    left:   df/dq     = (df/dq_a - (df/dq_b) i - (df/dq_c) j - (df/dq_d) k) / 4
    right:  dR f/dq   = (df/dq_a - i (df/dq_b) - j (df/dq_c) - k (df/dq_d)) / 4

(and the analogous sign patterns for the q^i, q^j, q^k slots).  The two
versions differ because quaternion products do not commute; they coincide
for real-valued functions.  The same combination is the row-vector product
with the Hermitian transpose of the Jacobian matrix J, which satisfies
J J^H = J^H J = (1/4) Identity.

The QJet type is a forward-mode carrier (value, RealGradient) propagated
through arithmetic by the ordinary product rule, which remains valid for
differentiation with respect to the real components.  Jets are the
workhorse oracle: any composition of +, *, conjugation and inversion
yields exact real partials, converted to HR form at the end.
"""

from dataclasses import dataclass
from enum import Enum

from .errors import NotRealValued, SideMismatch
from .quaternion import ONE, QI, QJ, QK, ZERO, AxisUnit, Quaternion

_REAL_VALUED_TOL = 1e-10


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True, slots=True)
class RealGradient:
    """The four quaternion partials (df/dq_a, df/dq_b, df/dq_c, df/dq_d)."""

    dA: Quaternion
    dB: Quaternion
    dC: Quaternion
    dD: Quaternion

    def as_tuple(self) -> tuple[Quaternion, Quaternion, Quaternion, Quaternion]:
        return (self.dA, self.dB, self.dC, self.dD)

    def involution(self, axis: AxisUnit) -> "RealGradient":
        """Apply the axis involution to every partial."""
        return RealGradient(*(p.involution(axis) for p in self.as_tuple()))


#: Real gradient of the identity function f(q) = q.
IDENTITY_GRADIENT = RealGradient(ONE, QI, QJ, QK)
#: Real gradient of any constant.
ZERO_GRADIENT = RealGradient(ZERO, ZERO, ZERO, ZERO)


@dataclass(frozen=True, slots=True)
class HRGradient:
    """Partials with respect to (q, q^i, q^j, q^k), tagged left or right.

    Mixing sides is a hard error everywhere in this module: left and right
    gradients differ already for linear functions.
    """

    d1: Quaternion
    dI: Quaternion
    dJ: Quaternion
    dK: Quaternion
    side: Side

    def as_tuple(self) -> tuple[Quaternion, Quaternion, Quaternion, Quaternion]:
        return (self.d1, self.dI, self.dJ, self.dK)


def _require_side(h: HRGradient, side: Side, what: str) -> None:
    if h.side is not side:
        raise SideMismatch(f"{what} requires a {side.value} gradient, "
                           f"got {h.side.value}")


# ---------------------------------------------------------------------------
# Conversions between real and HR gradients
# ---------------------------------------------------------------------------

def left_from_real(g: RealGradient) -> HRGradient:
    """Left restricted HR gradient: units multiply each partial from the right."""
    dA, dB, dC, dD = g.as_tuple()
    bi, cj, dk = dB * QI, dC * QJ, dD * QK
    return HRGradient(
        (dA - bi - cj - dk) * 0.25,
        (dA - bi + cj + dk) * 0.25,
        (dA + bi - cj + dk) * 0.25,
        (dA + bi + cj - dk) * 0.25,
        Side.LEFT,
    )


def right_from_real(g: RealGradient) -> HRGradient:
    """Right restricted HR gradient: units multiply each partial from the left."""
    dA, dB, dC, dD = g.as_tuple()
    bi, cj, dk = QI * dB, QJ * dC, QK * dD
    return HRGradient(
        (dA - bi - cj - dk) * 0.25,
        (dA - bi + cj + dk) * 0.25,
        (dA + bi - cj + dk) * 0.25,
        (dA + bi + cj - dk) * 0.25,
        Side.RIGHT,
    )


def real_from_left(h: HRGradient) -> RealGradient:
    """Invert left_from_real via the identity (grad_q f) J = (1/4) grad_r f."""
    _require_side(h, Side.LEFT, "real_from_left")
    d1, dI, dJ, dK = h.as_tuple()
    return RealGradient(
        d1 + dI + dJ + dK,
        (d1 + dI - dJ - dK) * QI,
        (d1 - dI + dJ - dK) * QJ,
        (d1 - dI - dJ + dK) * QK,
    )


def real_from_right(h: HRGradient) -> RealGradient:
    """Inverse of right_from_real; units multiply from the left."""
    _require_side(h, Side.RIGHT, "real_from_right")
    d1, dI, dJ, dK = h.as_tuple()
    return RealGradient(
        d1 + dI + dJ + dK,
        QI * (d1 + dI - dJ - dK),
        QJ * (d1 - dI + dJ - dK),
        QK * (d1 - dI - dJ + dK),
    )


def differential(h: HRGradient, dq: Quaternion) -> Quaternion:
    """First-order increment df for the step dq.

    Left side:  df = d1*dq + dI*dq^i + dJ*dq^j + dK*dq^k  (partials on the
    left); right side places the involved steps on the left instead.  Both
    sides of the same function produce the same increment.
    """
    steps = (dq, dq.involution(AxisUnit.I), dq.involution(AxisUnit.J),
             dq.involution(AxisUnit.K))
    total = ZERO
    if h.side is Side.LEFT:
        for partial, step in zip(h.as_tuple(), steps):
            total = total + partial * step
    else:
        for partial, step in zip(h.as_tuple(), steps):
            total = total + step * partial
    return total


# ---------------------------------------------------------------------------
# The Jacobian matrix and small quaternion-matrix helpers
# ---------------------------------------------------------------------------

QMatrix = tuple[tuple[Quaternion, ...], ...]


def _qmat(rows) -> QMatrix:
    return tuple(tuple(row) for row in rows)


#: J = (1/4) [[1, i, j, k], [1, i, -j, -k], [1, -i, j, -k], [1, -i, -j, k]].
#: All entries are exact dyadic floats, so J J^H = J^H J = (1/4) Identity
#: holds exactly even in double arithmetic.
JACOBIAN = _qmat(
    (u * 0.25 for u in row)
    for row in (
        (ONE, QI, QJ, QK),
        (ONE, QI, -QJ, -QK),
        (ONE, -QI, QJ, -QK),
        (ONE, -QI, -QJ, QK),
    )
)


def qmat_conj_transpose(m: QMatrix) -> QMatrix:
    return _qmat((m[j][i].conjugate() for j in range(4)) for i in range(4))


def qmat_mul(x: QMatrix, y: QMatrix) -> QMatrix:
    out = []
    for i in range(4):
        row = []
        for j in range(4):
            acc = ZERO
            for k in range(4):
                acc = acc + x[i][k] * y[k][j]
            row.append(acc)
        out.append(row)
    return _qmat(out)


def qmat_scale(m: QMatrix, s: float) -> QMatrix:
    return _qmat((e * s for e in row) for row in m)


def qmat_from_real(p) -> QMatrix:
    """Embed a 4x4 real matrix as a quaternion matrix."""
    return _qmat((Quaternion(float(e)) for e in row) for row in p)


# ---------------------------------------------------------------------------
# Forward-mode jets
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class QJet:
    """A function value together with its RealGradient at the base point.

    Arithmetic follows the ordinary order-preserving product rule on the
    real partials, so jets compose through any expression built from +, -,
    *, conjugate() and inverse().
    """

    value: Quaternion
    grad: RealGradient

    def __add__(self, other):
        other = _as_jet(other)
        if other is None:
            return NotImplemented
        return QJet(self.value + other.value,
                    RealGradient(*(a + b for a, b in
                                   zip(self.grad.as_tuple(), other.grad.as_tuple()))))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_jet(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_jet(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __neg__(self):
        return QJet(-self.value, RealGradient(*(-p for p in self.grad.as_tuple())))

    def __mul__(self, other):
        other = _as_jet(other)
        if other is None:
            return NotImplemented
        value = self.value * other.value
        parts = tuple(
            df * other.value + self.value * dg
            for df, dg in zip(self.grad.as_tuple(), other.grad.as_tuple())
        )
        return QJet(value, RealGradient(*parts))

    def __rmul__(self, other):
        # reached for constants on the left: other * self
        other = _as_jet(other)
        if other is None:
            return NotImplemented
        return other * self

    def conjugate(self) -> "QJet":
        """Conjugation commutes with the real partials."""
        return QJet(self.value.conjugate(),
                    RealGradient(*(p.conjugate() for p in self.grad.as_tuple())))

    def inverse(self) -> "QJet":
        """d(f^-1)/dq_phi = -f^-1 (df/dq_phi) f^-1."""
        v = self.value.inverse()
        parts = tuple(-(v * (p * v)) for p in self.grad.as_tuple())
        return QJet(v, RealGradient(*parts))


def _as_jet(x):
    if isinstance(x, QJet):
        return x
    if isinstance(x, Quaternion):
        return jet_const(x)
    if isinstance(x, (int, float)):
        return jet_const(Quaternion(float(x)))
    return None


def jet_seed(q: Quaternion) -> QJet:
    """The identity function at base point q: gradient (1, i, j, k)."""
    return QJet(q, IDENTITY_GRADIENT)


def jet_const(c: Quaternion) -> QJet:
    return QJet(c, ZERO_GRADIENT)


def jet_pow(x: QJet, n: int) -> QJet:
    """Integer power of a jet."""
    if n < 0:
        return jet_pow(x.inverse(), -n)
    result = jet_const(ONE)
    for _ in range(n):
        result = result * x
    return result


def jet_exp(x: QJet, *, max_terms: int = 200) -> QJet:
    """exp of a jet by scaled power series plus repeated squaring.

    The argument is halved until its norm is below 1/2, the series is summed
    until terms fall below 1e-16 of the partial sum, and the result is
    squared back up.  Accuracy is machine-level for moderate arguments.
    """
    halvings = 0
    scale = x.value.norm()
    while scale > 0.5:
        scale *= 0.5
        halvings += 1
    h = x * (0.5 ** halvings)
    acc = jet_const(ONE)
    term = jet_const(ONE)
    for n in range(1, max_terms + 1):
        term = term * h * (1.0 / n)
        acc = acc + term
        if term.value.norm() <= 1e-16 * max(1.0, acc.value.norm()):
            break
    for _ in range(halvings):
        acc = acc * acc
    return acc


def jet_tanh(x: QJet) -> QJet:
    """tanh of a jet via tanh q = (e^{2q} - 1)(e^{2q} + 1)^-1.

    Numerator and denominator commute (both are power series in q), so the
    quotient order is immaterial.  Raises ZeroDivisionError at the poles of
    tanh where e^{2q} + 1 vanishes.
    """
    e2 = jet_exp(x * 2.0)
    return (e2 - ONE) * (e2 + ONE).inverse()


# ---------------------------------------------------------------------------
# Product rules
# ---------------------------------------------------------------------------

def product_rule_first(f_val: Quaternion, f_grad: RealGradient,
                       g_val: Quaternion, g_left: HRGradient) -> HRGradient:
    """Left HR gradient of the product fg.

        grad_q(fg) = f grad_q g + [(grad_r f) g] J^H

    The correction row has components (df/dq_phi) g, combined exactly like
    left_from_real.  Matches the jet-propagated gradient of fg.
    """
    _require_side(g_left, Side.LEFT, "product_rule_first")
    corr = left_from_real(
        RealGradient(*(p * g_val for p in f_grad.as_tuple())))
    parts = tuple(f_val * gn + cn
                  for gn, cn in zip(g_left.as_tuple(), corr.as_tuple()))
    return HRGradient(*parts, Side.LEFT)


def product_rule_first_right(f_right: HRGradient, g_val: Quaternion,
                             f_val: Quaternion, g_grad: RealGradient) -> HRGradient:
    """Right HR gradient of the product fg (mirror of product_rule_first).

        [grad^R_q(fg)]^T = [(grad^R_q f) g]^T + J* [f (grad_r g)^T]
    """
    _require_side(f_right, Side.RIGHT, "product_rule_first_right")
    corr = right_from_real(
        RealGradient(*(f_val * p for p in g_grad.as_tuple())))
    parts = tuple(fn * g_val + cn
                  for fn, cn in zip(f_right.as_tuple(), corr.as_tuple()))
    return HRGradient(*parts, Side.RIGHT)


# ---------------------------------------------------------------------------
# Chain rules
# ---------------------------------------------------------------------------

def chain_matrix_involutions(g_grad: RealGradient) -> QMatrix:
    """M with M[mu][nu] = d(g^mu)/d(q^nu), assembled from involutions of
    the real partials of g (involution is R-linear, so the partials of
    g^mu are the mu-involutions of the partials of g)."""
    rows = []
    for axis in (AxisUnit.ONE, AxisUnit.I, AxisUnit.J, AxisUnit.K):
        rows.append(left_from_real(g_grad.involution(axis)).as_tuple())
    return _qmat(rows)


def chain_matrix_components(g_grad: RealGradient) -> QMatrix:
    """O with O[phi][nu] = d(g_phi)/d(q^nu): HR partials of the four real
    components of g."""
    rows = []
    for phi in range(4):
        component_grad = RealGradient(
            *(Quaternion(_component(p, phi)) for p in g_grad.as_tuple()))
        rows.append(left_from_real(component_grad).as_tuple())
    return _qmat(rows)


def real_jacobian(g_grad: RealGradient):
    """P with P[phi][beta] = d(g_phi)/d(q_beta) as a plain 4x4 float matrix.

    Satisfies 4 J P J^H = chain_matrix_involutions(g_grad).
    """
    cols = [(p.a, p.b, p.c, p.d) for p in g_grad.as_tuple()]
    return [[cols[beta][phi] for beta in range(4)] for phi in range(4)]


def _component(q: Quaternion, idx: int) -> float:
    return (q.a, q.b, q.c, q.d)[idx]


def chain_rule_first(outer: HRGradient, m: QMatrix) -> HRGradient:
    """Compose: df/dq^nu = sum_mu (df/dg^mu) (dg^mu/dq^nu).

    For a left outer gradient the matrix entries multiply from the right;
    for a right outer gradient from the left ((grad^R_q f)^T = M^T
    (grad^{gR}_q f)^T).
    """
    outer_parts = outer.as_tuple()
    parts = []
    for nu in range(4):
        acc = ZERO
        for mu in range(4):
            if outer.side is Side.LEFT:
                acc = acc + outer_parts[mu] * m[mu][nu]
            else:
                acc = acc + m[mu][nu] * outer_parts[mu]
        parts.append(acc)
    return HRGradient(*parts, outer.side)


def chain_rule_second(outer_real: RealGradient, o: QMatrix,
                      side: Side = Side.LEFT) -> HRGradient:
    """Compose through the real components of the intermediate function:
    df/dq^nu = sum_phi (df/dg_phi) (dg_phi/dq^nu)."""
    outer_parts = outer_real.as_tuple()
    parts = []
    for nu in range(4):
        acc = ZERO
        for phi in range(4):
            if side is Side.LEFT:
                acc = acc + outer_parts[phi] * o[phi][nu]
            else:
                acc = acc + o[phi][nu] * outer_parts[phi]
        parts.append(acc)
    return HRGradient(*parts, side)


def _check_real_valued(h: HRGradient, what: str) -> None:
    tol = _REAL_VALUED_TOL * max(1.0, abs(h.d1))
    for axis, partial in zip((AxisUnit.I, AxisUnit.J, AxisUnit.K),
                             (h.dI, h.dJ, h.dK)):
        residue = abs(partial - h.d1.involution(axis))
        if residue > tol:
            raise NotRealValued(
                f"{what}: gradient fails the real-valued symmetry test "
                f"(residue {residue:.3e} on the {axis.value} slot, "
                f"tolerance {tol:.3e})")


def chain_rule_third(dfdg: Quaternion, g_hr: HRGradient) -> HRGradient:
    """Chain rule for a real-valued intermediate function g.

    Left: df/dq^nu = (df/dg)(dg/dq^nu); right: factors in opposite order.
    Requires g's gradient to satisfy the real-valued symmetry
    d^nu = (d1)^nu.
    """
    _check_real_valued(g_hr, "chain_rule_third")
    if g_hr.side is Side.LEFT:
        parts = tuple(dfdg * p for p in g_hr.as_tuple())
    else:
        parts = tuple(p * dfdg for p in g_hr.as_tuple())
    return HRGradient(*parts, g_hr.side)


def real_valued_reduce(h: HRGradient) -> Quaternion:
    """Collapse the gradient of a real-valued function to its d1 slot.

    For real-valued f the four HR partials obey d^nu = (d1)^nu, so d1 is
    the only independent one; the increment is df = 4 R(d1 dq) and the
    steepest descent direction is -(d1)*.
    """
    _check_real_valued(h, "real_valued_reduce")
    return h.d1
