"""The 2x2 step engine: walking one rotation to another by conjugates.

Everything here happens in SU(2), where the conjugacy class of a rotation
diag(e^{ia}, e^{-ia}) is determined by the class angle |a| in [0, pi].  One
multiplication by a conjugate of the generator moves the class angle within
an explicitly computable interval, so a walk is planned by iterating interval
arithmetic forward (which step counts can reach the target?), backtracking
waypoints, and then realizing each step with an explicit partial-step matrix
whose off-diagonal entry spends exactly the right amount of the generator's
angle.  The final frame correction makes the product land on the reference
rotation exactly, not just up to conjugacy.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import (
    BudgetInfeasibleError,
    DegenerateInputError,
    DomainError,
    NumericalDegeneracyError,
    PreconditionError,
)
from .spectral import canon_angle, unitarity_defect

_SWAP = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)


def reference_rotation(angle):
    """diag(e^{ia}, e^{-ia})."""
    return np.diag([np.exp(1j * angle), np.exp(-1j * angle)])


def rotation_class_angle(u):
    """Class angle in [0, pi] of an SU(2) element, from the real trace."""
    u = np.asarray(u, dtype=complex)
    c = float(np.real(np.trace(u))) / 2.0
    return math.acos(min(1.0, max(-1.0, c)))


@dataclass(frozen=True)
class Su2Step:
    """One conjugate in a walk: contributes conjugator @ v^exponent @ conjugator*."""

    conjugator: np.ndarray
    exponent: int

    def __post_init__(self):
        g = np.asarray(self.conjugator, dtype=complex)
        if g.shape != (2, 2):
            raise DomainError("step conjugator must be 2x2")
        if unitarity_defect(g) > 1e-9:
            raise DomainError("step conjugator must be unitary")
        if self.exponent not in (1, -1):
            raise DomainError("step exponent must be +1 or -1")
        g = g.copy()
        g.setflags(write=False)
        object.__setattr__(self, "conjugator", g)


def su2_step_matrix(theta, theta1):
    """Partial step: conjugate of diag(e^{i theta}, e^{-i theta}) that spends
    only theta1 of the rotation diagonally, the rest going off-diagonal."""
    st = math.sin(theta)
    s1 = math.sin(theta1)
    gap = st * st - s1 * s1
    if gap < -1e-12:
        raise DomainError(
            f"step angle {theta1:.6f} exceeds the generator angle {theta:.6f}"
        )
    b = math.sqrt(max(gap, 0.0))
    c = math.cos(theta)
    return np.array([[c + 1j * s1, b], [-b, c - 1j * s1]], dtype=complex)


def conjugator_to_reference(vprime, theta):
    """Unitary g with g @ reference_rotation(theta) @ g* = vprime.

    Closed-form 2x2 eigenvector extraction; the phase is fixed by making the
    largest-modulus entry of the first column real positive.
    """
    v = np.asarray(vprime, dtype=complex)
    if v.shape != (2, 2):
        raise DomainError("need a 2x2 matrix")
    want = 2.0 * math.cos(theta)
    got = float(np.real(np.trace(v)))
    if abs(got - want) > 1e-9 or abs(float(np.imag(np.trace(v)))) > 1e-9:
        raise PreconditionError(
            f"trace {got:.3e} does not match the class of angle {theta:.6f}"
        )
    # central classes: anything commutes, the identity frame works
    if math.sin(theta) <= 1e-12:
        return np.eye(2, dtype=complex)
    # columns of v - e^{-i theta} I span the e^{+i theta} eigenvector
    m = v - np.exp(-1j * theta) * np.eye(2)
    col = m[:, 0] if np.linalg.norm(m[:, 0]) >= np.linalg.norm(m[:, 1]) else m[:, 1]
    nrm = np.linalg.norm(col)
    if nrm < 1e-14:
        raise NumericalDegeneracyError("eigenvector extraction collapsed")
    x = col / nrm
    k = int(np.argmax(np.abs(x)))
    ph = x[k] / abs(x[k])
    x = x * ph.conjugate()
    y = np.array([-np.conj(x[1]), np.conj(x[0])], dtype=complex)
    return np.column_stack([x, y])


def _reach(alpha, theta):
    """Interval of class angles reachable from alpha by one theta-conjugate."""
    lo = abs(alpha - theta)
    hi = min(alpha + theta, 2.0 * math.pi - alpha - theta)
    return lo, hi


def _reach_interval(lo, hi, theta):
    if lo <= theta <= hi:
        new_lo = 0.0
    else:
        new_lo = min(abs(lo - theta), abs(hi - theta))
    astar = min(max(math.pi - theta, lo), hi)
    new_hi = min(astar + theta, 2.0 * math.pi - astar - theta)
    return new_lo, new_hi


def _plan_waypoints(target, theta, m):
    """Class-angle waypoints alpha_1..alpha_m with alpha_m = target, each
    consecutive pair one conjugate apart.  None if m steps cannot land."""
    los = [theta]
    his = [theta]
    for _ in range(m - 1):
        lo, hi = _reach_interval(los[-1], his[-1], theta)
        los.append(lo)
        his.append(hi)
    if not (los[-1] - 1e-12 <= target <= his[-1] + 1e-12):
        return None
    alphas = [min(max(target, los[-1]), his[-1])]
    for k in range(m - 2, -1, -1):
        r_lo, r_hi = _reach(alphas[-1], theta)
        lo = max(los[k], r_lo)
        hi = min(his[k], r_hi)
        if lo > hi:
            if lo - hi > 1e-9:
                raise NumericalDegeneracyError("waypoint backtracking failed")
            lo = hi = 0.5 * (lo + hi)
        alphas.append(min(max(alphas[-1], lo), hi))
    alphas.reverse()
    return alphas


def _step_to(alpha, beta, theta):
    """Partial step v' with D(alpha) @ v' in the class of beta.

    The diagonal share sin(theta1) solves cos(beta) = cos(alpha)cos(theta)
    - sin(alpha)sin(theta1).  Both sin(theta) -+ sin(theta1) are computed in
    product form so a step landing on the reach boundary (a full step) comes
    out exactly diagonal instead of picking up a sqrt(eps) off-diagonal.
    """
    sa = math.sin(alpha)
    if abs(sa) <= 1e-12:
        # from a central point the only reachable class is theta away
        return su2_step_matrix(theta, theta)
    d_hi = max(0.0, alpha + theta - beta)
    d_lo = max(0.0, beta - (alpha - theta))
    f_hi = max(0.0, 2.0 * math.sin(0.5 * (alpha + theta + beta))
               * math.sin(0.5 * d_hi) / sa)
    f_lo = max(0.0, 2.0 * math.sin(0.5 * (alpha - theta + beta))
               * math.sin(0.5 * d_lo) / sa)
    s1 = 0.5 * (f_lo - f_hi)
    cap = abs(math.sin(theta))
    if abs(s1) > cap:
        if abs(s1) > cap + 1e-9:
            raise NumericalDegeneracyError("step angle out of range")
        s1 = math.copysign(cap, s1)
    b = math.sqrt(f_hi * f_lo)
    c = math.cos(theta)
    return np.array([[c + 1j * s1, b], [-b, c - 1j * s1]], dtype=complex)


def _walk_positive(target, theta, m):
    """Exact walk: m conjugators c_k with prod c_k D(theta) c_k* = D(target)."""
    alphas = _plan_waypoints(target, theta, m)
    if alphas is None:
        return None
    frame = np.eye(2, dtype=complex)
    conjugators = []
    prev = 0.0
    for alpha in alphas:
        vp = _step_to(prev, alpha, theta)
        q = conjugator_to_reference(vp, theta)
        conjugators.append(frame @ q)
        mstep = reference_rotation(prev) @ vp
        r = conjugator_to_reference(mstep, alpha)
        frame = frame @ r
        prev = alpha
    # pull the whole walk back so the product is exactly D(target)
    back = frame.conj().T
    return [back @ g for g in conjugators]


def su2_walk(phi, theta, m):
    """Steps writing diag(e^{i phi}, e^{-i phi}) as m conjugates of the
    generator rotation diag(e^{i theta}, e^{-i theta}), up to global sign.

    Needs |phi| <= m|theta| (canonical branch moduli) and even m; with
    opposite signs of phi and theta, the exponents flip.  The product of
    conjugator @ generator^exponent @ conjugator* over the returned steps
    equals the target up to a global factor of -1.
    """
    if not isinstance(m, (int, np.integer)) or m <= 0 or m % 2 != 0:
        raise DomainError(f"step budget must be a positive even integer, got {m}")
    phi = canon_angle(float(phi))
    theta = canon_angle(float(theta))
    ph = abs(phi)
    th = abs(theta)

    central_target = min(ph, math.pi - ph) <= 1e-12
    if th <= 1e-12 or math.pi - th <= 1e-12:
        # the generator is projectively central: only central targets work
        if not central_target:
            raise DegenerateInputError(
                f"generator angle {theta:.6f} is central, cannot reach {phi:.6f}"
            )
        eye = np.eye(2, dtype=complex)
        return [Su2Step(eye, 1) for _ in range(m)]
    if ph > m * th + 1e-12:
        raise BudgetInfeasibleError(
            f"|phi| = {ph:.6f} exceeds budget {m} * |theta| = {m * th:.6f}"
        )

    conjugators = _walk_positive(ph, th, m)
    if conjugators is None:
        # same projective target through the mirrored class angle
        conjugators = _walk_positive(math.pi - ph, th, m)
        if conjugators is None:
            raise BudgetInfeasibleError(
                f"no {m}-step walk reaches class {ph:.6f} with angle {th:.6f}"
            )
        conjugators = [_SWAP @ g for g in conjugators]

    exponent = 1 if (phi >= 0.0) == (theta >= 0.0) else -1
    if phi < 0.0:
        conjugators.reverse()
    return [Su2Step(g, exponent) for g in conjugators]
