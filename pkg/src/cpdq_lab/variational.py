"""Trajectory variations and stationarity diagnostics.

The central object is the special variation delta_q = eps/p.  Along an
actual trajectory it leaves the Lagrangian stationary at every instant and
makes the action variation between *any* two instants vanish, because the
boundary term p*delta_q is the same constant eps at both ends.  The
operations here measure how well sampled trajectories realize that.

All time derivatives of sampled series are 2nd-order central differences
(one-sided 2nd-order at the ends) so the residual tolerances compose with
the O(dt^2) integrator in `dynamics`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import NATURAL, Constants, DofState, GapError, Potential, eval_potential


def _tderiv(y: np.ndarray, dt: float) -> np.ndarray:
    return np.gradient(y, dt, edge_order=2)


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled (t, q, p) history in a static potential."""

    t: np.ndarray
    q: np.ndarray
    p: np.ndarray
    dt: float
    pot: Potential
    consts: Constants = NATURAL

    def __post_init__(self):
        n = len(self.t)
        if n < 5:
            raise ValueError("need at least 5 samples for central stencils")
        if not (len(self.q) == len(self.p) == n):
            raise ValueError("t, q, p must have equal length")
        steps = np.diff(self.t)
        if np.any(steps <= 0):
            raise ValueError("t must be strictly increasing")
        if np.max(np.abs(steps - self.dt)) > 1e-12 * max(abs(self.dt), 1.0):
            raise ValueError("sampling must be uniform within 1e-12 relative")

    def __len__(self) -> int:
        return len(self.t)

    @property
    def qdot(self) -> np.ndarray:
        return self.p / self.consts.mass

    def state_at(self, i: int) -> DofState:
        return DofState.from_phase(float(self.t[i]), float(self.q[i]),
                                   float(self.p[i]), self.consts)

    @classmethod
    def from_samples(cls, t, q, p, pot: Potential,
                     consts: Constants = NATURAL) -> "Trajectory":
        t = np.asarray(t, float)
        return cls(t=t, q=np.asarray(q, float), p=np.asarray(p, float),
                   dt=float(t[1] - t[0]), pot=pot, consts=consts)


@dataclass(frozen=True)
class VariationSeries:
    """A path variation (delta_q, delta_qdot) aligned with a trajectory.

    For source "special", delta_q = epsilon/p pointwise, so
    p[i]*delta_q[i] == epsilon wherever the gap mask is clear.
    delta_qdot is always the discrete time derivative of delta_q;
    NaNs mark flagged gaps (|p| at or below the momentum floor) and
    propagate one stencil width into delta_qdot.
    """

    epsilon: float
    delta_q: np.ndarray
    delta_qdot: np.ndarray
    source: str
    gap_mask: np.ndarray


def lagrangian_eval(q, qdot, pot: Potential,
                    consts: Constants = NATURAL):
    """L = m*qdot^2/2 - V(q) and the conjugate momentum p = m*qdot."""
    v, _, _ = eval_potential(pot, q)
    lagr = 0.5 * consts.mass * np.asarray(qdot, float) ** 2 - v
    p = consts.mass * np.asarray(qdot, float)
    if np.ndim(q) == 0 and np.ndim(qdot) == 0:
        return float(lagr), float(p)
    return lagr, p


def special_variation(traj: Trajectory, epsilon: float) -> VariationSeries:
    """The variation delta_q = epsilon/p, with gaps where |p| <= p_floor."""
    gap = np.abs(traj.p) <= traj.consts.p_floor
    with np.errstate(divide="ignore"):
        dq = np.where(gap, np.nan, epsilon / traj.p)
    dqdot = _tderiv(dq, traj.dt)
    return VariationSeries(epsilon=float(epsilon), delta_q=dq,
                           delta_qdot=dqdot, source="special", gap_mask=gap)


def custom_variation(traj: Trajectory, delta_q, epsilon: float) -> VariationSeries:
    """Wrap a caller-supplied delta_q series; epsilon is its nominal scale."""
    dq = np.asarray(delta_q, dtype=float)
    if len(dq) != len(traj):
        raise ValueError("variation length must match trajectory")
    dqdot = _tderiv(dq, traj.dt)
    return VariationSeries(epsilon=float(epsilon), delta_q=dq,
                           delta_qdot=dqdot, source="custom",
                           gap_mask=np.zeros(len(dq), dtype=bool))


def first_order_dL(traj: Trajectory, var: VariationSeries) -> np.ndarray:
    """First-order Lagrangian change (dL/dq)*delta_q + (dL/dqdot)*delta_qdot.

    The partials are analytic: dL/dq = -V'(q), dL/dqdot = p.  NaNs from
    flagged gaps pass through.
    """
    if len(var.delta_q) != len(traj):
        raise ValueError("variation not aligned with trajectory")
    _, dv, _ = eval_potential(traj.pot, traj.q)
    return (-dv) * var.delta_q + traj.p * var.delta_qdot


def lagrange_residual(traj: Trajectory) -> np.ndarray:
    """Equation-of-motion defect d(p)/dt + V'(q), zero on actual trajectories."""
    _, dv, _ = eval_potential(traj.pot, traj.q)
    return _tderiv(traj.p, traj.dt) + dv


def action_and_variation(traj: Trajectory, var: VariationSeries,
                         i1: int, i2: int):
    """Action on [i1, i2] and its first-order variation, three ways.

    Returns (A, dA_boundary, dA_bulk, dA_direct):
      A           trapezoidal action integral of L
      dA_boundary p*delta_q at i2 minus at i1
      dA_bulk     integral of (dL/dq - d/dt dL/dqdot)*delta_q
      dA_direct   A evaluated on the displaced path (q+delta_q, qdot+delta_qdot)
                  minus A, an independent finite-difference route

    Integration by parts makes dA_direct = dA_boundary + dA_bulk up to
    quadrature error and O(epsilon^2).
    """
    if not (0 <= i1 < i2 < len(traj)):
        raise IndexError("need 0 <= i1 < i2 < len(traj)")
    sl = slice(i1, i2 + 1)
    dq = var.delta_q[sl]
    dqdot = var.delta_qdot[sl]
    if np.any(~np.isfinite(dq)) or np.any(~np.isfinite(dqdot)):
        raise GapError("interval [i1, i2] touches a flagged turning-point gap")

    q, p = traj.q[sl], traj.p[sl]
    qdot = traj.qdot[sl]
    lagr, _ = lagrangian_eval(q, qdot, traj.pot, traj.consts)
    action = np.trapezoid(lagr, dx=traj.dt)

    d_boundary = p[-1] * dq[-1] - p[0] * dq[0]

    _, dv, _ = eval_potential(traj.pot, q)
    pdot = _tderiv(traj.p, traj.dt)[sl]
    d_bulk = np.trapezoid((-dv - pdot) * dq, dx=traj.dt)

    lagr_var, _ = lagrangian_eval(q + dq, qdot + dqdot, traj.pot, traj.consts)
    d_direct = np.trapezoid(lagr_var, dx=traj.dt) - action

    return float(action), float(d_boundary), float(d_bulk), float(d_direct)
