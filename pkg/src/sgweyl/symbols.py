"""Principal symbol triples of SG-classical operators, evaluated pointwise.

An SG symbol of order ``(m_psi, m_e)`` on R^d has three boundary components
on the doubly compactified phase space: a fiber-infinity component ``p_psi``,
a base-infinity component ``p_e`` and a corner component ``p_psie``.  This
module represents the triple as plain numpy-vectorized callables together
with the order pair; downstream quadrature and flow code only ever needs
pointwise values.

The fully explicit model symbol ``<x><xi>`` (with ``<z> = sqrt(1+|z|^2)``)
is provided, together with the coefficients of its corner expansion into
powers ``|x|^(1-2j) |xi|^(1-2k)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import binom

from .errors import ValidationError

# A component maps (u, v) with trailing axis of length d (batched, mutually
# broadcastable) to an array of values with the broadcast batch shape.
Component = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True)
class PrincipalSymbolTriple:
    """The three principal-symbol components of an SG-classical symbol.

    Attributes
    ----------
    dimension : int
        Space dimension d >= 1.
    p_psi : callable
        Fiber-infinity component, evaluated at unit covariable:
        ``p_psi(x, theta)`` with ``x`` in R^d and ``theta`` on S^{d-1}.
    p_e : callable
        Base-infinity component, evaluated at unit variable:
        ``p_e(omega, xi)`` with ``omega`` on S^{d-1} and ``xi`` in R^d.
    p_psie : callable
        Corner component ``p_psie(omega, theta)`` on S^{d-1} x S^{d-1}.
    orders : (float, float)
        The order pair (m_psi, m_e), both positive.

    All components must be strictly positive (ellipticity) and accept
    batched inputs with shape ``(..., d)``.  Instances are immutable and
    the components are expected to be pure, so evaluation is safe from
    concurrent workers.
    """

    dimension: int
    p_psi: Component
    p_e: Component
    p_psie: Component
    orders: tuple[float, float]

    def __post_init__(self):
        if int(self.dimension) < 1:
            raise ValidationError(f"dimension must be >= 1, got {self.dimension}")
        m_psi, m_e = self.orders
        if not (m_psi > 0 and m_e > 0):
            raise ValidationError(f"orders must be positive, got {self.orders}")
        self._spot_check_positivity()

    def _spot_check_positivity(self):
        # classicality is not decidable from pointwise values, but ellipticity
        # (strict positivity) can at least be sampled at construction
        d = int(self.dimension)
        rng = np.random.default_rng(1234 + d)
        units = rng.standard_normal((8, d))
        units /= np.sqrt(np.sum(units * units, axis=-1, keepdims=True))
        vectors = rng.standard_normal((8, d)) * np.array([0.5, 1, 2, 5, 10, 30, 100, 1000])[:, None]
        checks = (
            self.p_psi(vectors, units),
            self.p_e(units, vectors),
            self.p_psie(units, units[::-1]),
        )
        for name, vals in zip(("p_psi", "p_e", "p_psie"), checks):
            if not np.all(np.asarray(vals) > 0):
                raise ValidationError(f"{name} is not strictly positive (ellipticity spot check)")


def model_symbol(d: int) -> PrincipalSymbolTriple:
    """Principal symbol triple of the model operator with symbol <x><xi>.

    The components restrict to ``p_psi(x, theta) = <x>`` (unit covariable),
    ``p_e(omega, xi) = <xi>`` (unit variable) and ``p_psie = 1`` on
    S^{d-1} x S^{d-1}; the order pair is (1, 1).
    """
    if int(d) < 1:
        raise ValidationError(f"model symbol requires d >= 1, got {d}")
    d = int(d)

    def p_psi(x, theta):
        x = np.asarray(x, dtype=float)
        return np.sqrt(1.0 + np.sum(x * x, axis=-1))

    def p_e(omega, xi):
        xi = np.asarray(xi, dtype=float)
        return np.sqrt(1.0 + np.sum(xi * xi, axis=-1))

    def p_psie(omega, theta):
        omega = np.asarray(omega, dtype=float)
        theta = np.asarray(theta, dtype=float)
        shape = np.broadcast_shapes(omega.shape[:-1], theta.shape[:-1])
        return np.ones(shape)

    return PrincipalSymbolTriple(d, p_psi, p_e, p_psie, (1.0, 1.0))


def constant_corner_symbol(d: int, value: float) -> PrincipalSymbolTriple:
    """Symbol triple whose corner component is a positive constant.

    The psi/e components are the model ones scaled by ``value``; mainly a
    fixture for quadrature scaling and log-trace checks.
    """
    if value <= 0:
        raise ValidationError("corner value must be positive (ellipticity)")
    base = model_symbol(d)

    def p_psi(x, theta):
        return value * base.p_psi(x, theta)

    def p_e(omega, xi):
        return value * base.p_e(omega, xi)

    def p_psie(omega, theta):
        return value * base.p_psie(omega, theta)

    return PrincipalSymbolTriple(int(d), p_psi, p_e, p_psie, (1.0, 1.0))


def symbol_power(sym: PrincipalSymbolTriple, alpha: float) -> PrincipalSymbolTriple:
    """Pointwise power of a symbol triple: components ``p**alpha``.

    The orders scale by ``alpha``; for positive elliptic symbols this is the
    principal symbol of the corresponding complex power.  Requires
    ``alpha > 0`` so the result stays an elliptic triple of positive order.
    """
    if alpha <= 0:
        raise ValidationError(f"power must be positive, got {alpha}")
    m_psi, m_e = sym.orders
    return PrincipalSymbolTriple(
        sym.dimension,
        lambda x, theta: sym.p_psi(x, theta) ** alpha,
        lambda omega, xi: sym.p_e(omega, xi) ** alpha,
        lambda omega, theta: sym.p_psie(omega, theta) ** alpha,
        (alpha * m_psi, alpha * m_e),
    )


def swap_roles(sym: PrincipalSymbolTriple) -> PrincipalSymbolTriple:
    """Exchange the roles of variable and covariable.

    Under the swap the psi and e components trade places (with their
    argument slots exchanged) and the corner component has its sphere
    arguments transposed.  Used to compute x-side divergent traces from the
    xi-side implementation.
    """
    m_psi, m_e = sym.orders
    return PrincipalSymbolTriple(
        sym.dimension,
        lambda x, theta: sym.p_e(theta, x),
        lambda omega, xi: sym.p_psi(xi, omega),
        lambda omega, theta: sym.p_psie(theta, omega),
        (m_e, m_psi),
    )


def corner_expansion_coeff(j: int, k: int) -> float:
    """Coefficient of |x|^(1-2j) |xi|^(1-2k) in the corner expansion of <x><xi>.

    Writing <x><xi> = |x| |xi| (1 + 1/|x|^2)^(1/2) (1 + 1/|xi|^2)^(1/2) and
    expanding both square roots binomially gives the coefficient
    ``C(1/2, j) * C(1/2, k)`` with C the generalized binomial coefficient.
    The alternation in sign for j, k >= 2 comes from C(1/2, .) itself.
    """
    if j < 0 or k < 0 or j != int(j) or k != int(k):
        raise ValidationError("expansion indices must be nonnegative integers")
    return float(binom(0.5, int(j)) * binom(0.5, int(k)))


def corner_expansion_value(x_radius: float, xi_radius: float, terms: int) -> float:
    """Truncated corner expansion of <x><xi> with ``terms`` x ``terms`` terms.

    Valid for |x|, |xi| > 1; converges rapidly once both radii exceed ~2.
    """
    if x_radius <= 1.0 or xi_radius <= 1.0:
        raise ValidationError("corner expansion requires |x|, |xi| > 1")
    j = np.arange(terms)
    cx = binom(0.5, j) * x_radius ** (1.0 - 2.0 * j)
    cxi = binom(0.5, j) * xi_radius ** (1.0 - 2.0 * j)
    return float(np.sum(cx) * np.sum(cxi))


def normalized(v: np.ndarray) -> np.ndarray:
    """Renormalize vectors along the last axis onto the unit sphere."""
    v = np.asarray(v, dtype=float)
    norm = np.sqrt(np.sum(v * v, axis=-1, keepdims=True))
    if np.any(norm == 0.0):
        raise ValidationError("cannot normalize a zero vector")
    return v / norm
