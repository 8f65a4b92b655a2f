"""Hamiltonian flow on the corner of compactified phase space, model symbol.

The corner component of the model symbol generates the flow

    d/dt omega = -c omega + theta,   d/dt theta = -omega + c theta,

on S^{d-1} x S^{d-1}, where c = <omega, theta> is a constant of motion.
The system decouples into d planar linear systems with matrix
[[-c, 1], [-1, c]] of eigenvalues +- i sqrt(1 - c^2), so every
non-degenerate orbit is periodic with period 2 pi / sqrt(1 - c^2) and the
degenerate parallel states (c = +-1) are fixed points.  Both the exact
matrix-exponential flow and an adaptive Runge-Kutta integration of the
same vector field are provided; the numeric route never renormalizes, so
unit norms and c act as genuine conservation checks.

Only the model flow is implemented: general symbols would require a
numerical Hamiltonian on the sphere product, which nothing downstream
needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import NonConvergenceError, ValidationError

#: states with 1 - c^2 below this are treated as the parallel fixed points
DEGENERATE_EPS = 1e-14

#: default local error tolerance per unit time for the numeric flow;
#: the system is linear, so steps are cheap and a tight value costs little
DEFAULT_FLOW_TOL = 1e-9


@dataclass(frozen=True)
class CornerState:
    """A point (omega, theta) on S^{d-1} x S^{d-1}.

    omega is the position direction x/|x|, theta the momentum direction
    xi/|xi|.  Both must be unit vectors to within 1e-12; use
    :meth:`from_vectors` to build a state from unnormalized data.
    """

    omega: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        omega = np.atleast_1d(np.asarray(self.omega, dtype=float))
        theta = np.atleast_1d(np.asarray(self.theta, dtype=float))
        if omega.ndim != 1 or theta.ndim != 1 or omega.shape != theta.shape:
            raise ValidationError("omega and theta must be vectors of equal dimension")
        for name, v in (("omega", omega), ("theta", theta)):
            if abs(float(np.dot(v, v)) - 1.0) > 2e-12:
                raise ValidationError(f"{name} is not a unit vector: |{name}|^2 = {np.dot(v, v)!r}")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "theta", theta)

    @classmethod
    def from_vectors(cls, omega, theta) -> "CornerState":
        """Build a state from arbitrary nonzero vectors by normalizing."""
        omega = np.atleast_1d(np.asarray(omega, dtype=float))
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        no = np.linalg.norm(omega)
        nt = np.linalg.norm(theta)
        if no == 0.0 or nt == 0.0:
            raise ValidationError("cannot normalize a zero vector onto the sphere")
        return cls(omega / no, theta / nt)

    @property
    def dimension(self) -> int:
        return self.omega.shape[0]


def _state_unchecked(omega: np.ndarray, theta: np.ndarray) -> CornerState:
    """CornerState without the unit-norm gate.

    Reserved for integrator output, where norm drift is intentional and
    must stay observable to the conservation checks instead of being
    rejected or silently renormalized.
    """
    z = object.__new__(CornerState)
    object.__setattr__(z, "omega", np.asarray(omega, dtype=float))
    object.__setattr__(z, "theta", np.asarray(theta, dtype=float))
    return z


def conserved_angle(z: CornerState) -> float:
    """The flow invariant c = <omega, theta>, clamped to [-1, 1]."""
    return float(np.clip(np.dot(z.omega, z.theta), -1.0, 1.0))


def is_fixed_point(z: CornerState) -> bool:
    """True for the degenerate parallel states c = +-1 (stationary flow)."""
    c = conserved_angle(z)
    return 1.0 - c * c <= DEGENERATE_EPS


def hamiltonian_rhs(z: CornerState) -> tuple[np.ndarray, np.ndarray]:
    """Right-hand side (-c omega + theta, -omega + c theta)."""
    c = conserved_angle(z)
    return -c * z.omega + z.theta, -z.omega + c * z.theta


def flow_closed(z: CornerState, t: float) -> CornerState:
    """Exact flow by the planar matrix exponential, applied componentwise.

    For c^2 < 1 the propagator is cos(mu t) I + sin(mu t)/mu A with
    mu = sqrt(1 - c^2); at the degenerate states A is nilpotent and the
    propagator is I + t A (which fixes the state).
    """
    c = conserved_angle(z)
    mu2 = 1.0 - c * c
    if mu2 <= DEGENERATE_EPS:
        a, b = 1.0 - c * t, t
        g, e = -t, 1.0 + c * t
    else:
        mu = math.sqrt(mu2)
        cs, sn = math.cos(mu * t), math.sin(mu * t) / mu
        a, b = cs - c * sn, sn
        g, e = -sn, cs + c * sn
    return CornerState(a * z.omega + b * z.theta, g * z.omega + e * z.theta)


def flow_numeric(z: CornerState, t: float, tol: float = DEFAULT_FLOW_TOL) -> CornerState:
    """Adaptive Runge-Kutta integration of the corner vector field.

    The invariant c is re-evaluated along the trajectory (not frozen), and
    no renormalization is applied, so drift of |omega|, |theta| and c
    measures the true integration error.  ``tol`` bounds the local error
    per unit time.
    """
    if tol <= 0:
        raise ValidationError("tol must be positive")
    if t == 0.0:
        return z
    d = z.dimension

    def rhs(_t, y):
        omega, theta = y[:d], y[d:]
        no = math.sqrt(float(np.dot(omega, omega)))
        nt = math.sqrt(float(np.dot(theta, theta)))
        c = float(np.clip(np.dot(omega, theta) / (no * nt), -1.0, 1.0))
        return np.concatenate([-c * omega + theta, -omega + c * theta])

    y0 = np.concatenate([z.omega, z.theta])
    sol = solve_ivp(
        rhs,
        (0.0, t),
        y0,
        method="DOP853",
        rtol=tol,
        atol=tol,
        dense_output=False,
    )
    if not sol.success:
        raise NonConvergenceError(f"adaptive integration failed: {sol.message}")
    y = sol.y[:, -1]
    # no renormalization: norm and angle drift are the error observables
    return _state_unchecked(y[:d], y[d:])


def return_time(z: CornerState) -> float:
    """Minimal period 2 pi / sqrt(1 - c^2); 0 at the degenerate states.

    The zero at c = +-1 follows the convention that fixed points carry
    return time zero; use :func:`is_fixed_point` to tell them apart from
    genuinely periodic states.
    """
    c = conserved_angle(z)
    mu2 = 1.0 - c * c
    if mu2 <= DEGENERATE_EPS:
        return 0.0
    return 2.0 * math.pi / math.sqrt(mu2)


def state_distance(z1: CornerState, z2: CornerState) -> float:
    """max of the Euclidean distances between the omega and theta parts."""
    return max(
        float(np.linalg.norm(z1.omega - z2.omega)),
        float(np.linalg.norm(z1.theta - z2.theta)),
    )


def sample_states(d: int, seed: int, n: int) -> list[CornerState]:
    """n uniform states on S^{d-1} x S^{d-1} from a seeded generator.

    Uniformity comes from normalized standard Gaussian vectors, so the
    sample is reproducible across platforms for a fixed seed.
    """
    if d < 1 or n < 1:
        raise ValidationError("need d >= 1 and n >= 1")
    rng = np.random.default_rng(seed)
    states = []
    for _ in range(n):
        states.append(CornerState.from_vectors(rng.standard_normal(d), rng.standard_normal(d)))
    return states


def periodic_measure_estimate(
    d: int,
    sampler_seed: int,
    n_samples: int,
    t_max: float = math.inf,
    tol: float = 1e-9,
) -> float:
    """Monte Carlo fraction of periodic initial states of the corner flow.

    Draws ``n_samples`` uniform states, classifies each as periodic when the
    closed-form flow returns within ``tol`` of the start at some time
    <= ``t_max`` (the candidate time being the closed-form period; fixed
    points return at time 0 by convention), and returns the sample
    fraction.  For the model flow every state is periodic, so the estimate
    is 1.0 whenever ``t_max`` dominates the sampled periods -- the
    hypothesis of the refined three-term asymptotics fails for this
    operator.
    """
    if n_samples < 1:
        raise ValidationError("n_samples must be >= 1")
    hits = 0
    for z in sample_states(d, sampler_seed, n_samples):
        period = return_time(z)
        if period > t_max:
            continue
        if state_distance(flow_closed(z, period), z) <= tol:
            hits += 1
    return hits / n_samples
