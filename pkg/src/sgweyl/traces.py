"""Regularized traces and the closed-form two-term Weyl coefficients.

For an elliptic symbol triple of order (1, 1) the corner trace is a plain
sphere-product integral of ``p_psie**(-s)``; the divergent x- and xi-side
traces are defined through log-subtracted truncated integrals whose
``tau -> inf`` limits are recovered here by Richardson extrapolation in
``1/tau^2``.  For the model symbol everything is known in closed form via
the digamma function, which gives the oracle values used throughout the
test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergenceError, ValidationError
from .quadrature import corner_integral, richardson_limit, sphere_rule
from .symbols import PrincipalSymbolTriple, swap_roles, symbol_power

# Euler-Mascheroni constant, 20 significant digits.
EULER_GAMMA = 0.57721566490153286061

#: default truncation radii 2^4 .. 2^10 for the divergent-trace extrapolation
DEFAULT_TAUS = tuple(float(2**k) for k in range(4, 11))


@dataclass(frozen=True)
class TraceValue:
    """A computed trace with an error estimate.

    ``method`` records whether the number came from a closed form or from
    quadrature; quadrature values keep the largest truncation radius used.
    """

    value: float
    estimated_error: float
    method: str = "quadrature"
    truncation: float | None = None

    def __post_init__(self):
        if self.estimated_error < 0:
            raise ValidationError("estimated_error must be nonnegative")
        if self.method not in ("closed_form", "quadrature"):
            raise ValidationError(f"unknown method tag {self.method!r}")


def sphere_volume(d: int) -> float:
    """Surface measure of S^{d-1}: 2 pi^(d/2) / Gamma(d/2)."""
    if d < 1:
        raise ValidationError(f"sphere_volume requires d >= 1, got {d}")
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def digamma(x: float) -> float:
    """Digamma function Psi(x) = d/dx log Gamma(x) for x > 0.

    Uses the upward recurrence Psi(x+1) = Psi(x) + 1/x to push the argument
    above 12 and then the de Moivre asymptotic series; absolute error is
    below 1e-13 on (0, inf).
    """
    if not (x > 0):
        raise ValidationError(f"digamma requires x > 0, got {x}")
    value = 0.0
    while x < 12.0:
        value -= 1.0 / x
        x += 1.0
    r = 1.0 / (x * x)
    # asymptotic series: log x - 1/(2x) - sum B_2n / (2n x^2n)
    series = (
        r
        * (
            1.0 / 12.0
            - r
            * (
                1.0 / 120.0
                - r
                * (
                    1.0 / 252.0
                    - r * (1.0 / 240.0 - r * (1.0 / 132.0 - r * 691.0 / 32760.0))
                )
            )
        )
    )
    return value + math.log(x) - 0.5 / x - series


def gamma2_closed(d: int) -> float:
    """Closed-form leading Weyl coefficient of the model operator.

    gamma_2 = vol(S^{d-1})^2 / (2 pi)^d * 1/d.
    """
    if d < 1:
        raise ValidationError(f"gamma2_closed requires d >= 1, got {d}")
    v = sphere_volume(d)
    return v * v / (2.0 * math.pi) ** d / d


def gamma1_closed(d: int) -> float:
    """Closed-form second Weyl coefficient of the model operator.

    gamma_1 = vol(S^{d-1})^2 / (2 pi)^d * (Psi(d/2) + gamma_E - 1/d^2).
    """
    if d < 1:
        raise ValidationError(f"gamma1_closed requires d >= 1, got {d}")
    v = sphere_volume(d)
    pref = v * v / (2.0 * math.pi) ** d
    return pref * (digamma(d / 2.0) + EULER_GAMMA - 1.0 / d**2)


def gamma1_finite_sum(d: int) -> float:
    """gamma_1 via the parity-split finite sums (cross-check form).

    Equivalent to :func:`gamma1_closed` through the half-integer /
    integer digamma evaluations:

    * d odd:  -pref * (2 log 2 + 1/d^2 - 2 sum_{k=1}^{(d-1)/2} 1/(2k-1))
    * d even: -pref * (1/d^2 - sum_{k=1}^{d/2-1} 1/k)
    """
    if d < 1:
        raise ValidationError(f"gamma1_finite_sum requires d >= 1, got {d}")
    v = sphere_volume(d)
    pref = v * v / (2.0 * math.pi) ** d
    if d % 2 == 1:
        s = sum(1.0 / (2 * k - 1) for k in range(1, (d - 1) // 2 + 1))
        return -pref * (2.0 * math.log(2.0) + 1.0 / d**2 - 2.0 * s)
    s = sum(1.0 / k for k in range(1, d // 2))
    return -pref * (1.0 / d**2 - s)


def tr_corner(sym: PrincipalSymbolTriple, s: float, tol: float = 1e-10) -> TraceValue:
    """Corner trace (2 pi)^-d * integral of p_psie^(-s) over S^{d-1} x S^{d-1}.

    Raises NonConvergenceError if the sphere-product quadrature does not
    settle to ``tol`` at the maximum refinement.
    """
    d = sym.dimension
    pref = (2.0 * math.pi) ** (-d)

    def f(omega, theta):
        return sym.p_psie(omega, theta) ** (-s)

    val, err = corner_integral(f, d, tol=tol)
    return TraceValue(pref * val, pref * err, "quadrature", None)


def wtr_theta(sym: PrincipalSymbolTriple, d: int, tol: float = 1e-10) -> TraceValue:
    """Corner log-trace (2 pi)^-d * integral of p_psie^(-d) log(p_psie^(-d))."""
    pref = (2.0 * math.pi) ** (-sym.dimension)

    def f(omega, theta):
        p = sym.p_psie(omega, theta) ** (-float(d))
        return p * np.log(p)

    val, err = corner_integral(f, sym.dimension, tol=tol)
    return TraceValue(pref * val, pref * err, "quadrature", None)


def _e_side_truncated(
    sym: PrincipalSymbolTriple,
    d: int,
    taus: np.ndarray,
    resolution: int,
    gauss_order: int,
) -> np.ndarray:
    """Truncated integrals int_{S} int_{|xi|<=tau} p_e(theta, xi)^-d for each tau."""
    from scipy.special import roots_legendre

    dim = sym.dimension
    th_pts, th_w = sphere_rule(dim, resolution)
    eta_pts, eta_w = sphere_rule(dim, resolution)
    nodes, gw = roots_legendre(gauss_order)

    # dyadic panels [0, tau_0], then one panel per consecutive tau pair
    first = [taus[0]]
    while first[-1] > 1.0:
        first.append(first[-1] / 2.0)
    edges = np.concatenate([[0.0], np.array(first[::-1]), taus[1:]])

    out = np.empty(len(taus))
    acc = 0.0
    k = 0
    for a, b in zip(edges[:-1], edges[1:]):
        r = 0.5 * (b - a) * nodes + 0.5 * (a + b)
        w = 0.5 * (b - a) * gw * r ** (dim - 1)
        xi = eta_pts[:, None, :] * r[None, :, None]  # (Ne, m, d)
        vals = sym.p_e(th_pts[:, None, None, :], xi[None, :, :, :]) ** (-float(d))
        acc += float(np.einsum("i,j,m,ijm->", th_w, eta_w, w, vals))
        while k < len(taus) and b >= taus[k] * (1.0 - 1e-12):
            out[k] = acc
            k += 1
    return out


def wtr_e(
    sym: PrincipalSymbolTriple,
    d: int,
    tau_sequence=DEFAULT_TAUS,
    tol: float = 1e-8,
) -> TraceValue:
    """xi-side divergent trace, log-subtracted and extrapolated to tau -> inf.

    Computes (2 pi)^-d [ int_S int_{|xi|<=tau} p_e^{-d} - log(tau) * C ]
    with C the corner integral of p_psie^{-d}, at every tau of the
    increasing ``tau_sequence``, then Richardson-extrapolates in 1/tau^2.
    Raises NonConvergenceError when successive extrapolants still differ by
    more than ``tol`` (e.g. when the integrand decays too slowly for the
    log subtraction to regularize).
    """
    taus = np.asarray(tau_sequence, dtype=float)
    if taus.ndim != 1 or len(taus) < 2 or np.any(np.diff(taus) <= 0):
        raise ValidationError("tau_sequence must be increasing with >= 2 entries")
    dim = sym.dimension
    pref = (2.0 * math.pi) ** (-dim)

    corner, corner_err = corner_integral(
        lambda om, th: sym.p_psie(om, th) ** (-float(d)), dim, tol=1e-12
    )

    prev = None
    for resolution, gauss_order in ((4, 20), (8, 28), (16, 36)):
        truncated = _e_side_truncated(sym, d, taus, resolution, gauss_order)
        g = truncated - np.log(taus) * corner
        limit, rich_err = richardson_limit(taus ** -2.0, g)
        if not np.isfinite(limit) or rich_err > tol * max(1.0, abs(limit)):
            raise NonConvergenceError(
                "log-subtracted trace did not converge under truncation "
                f"extrapolation (residual {rich_err:.3g}); the symbol may not "
                "decay fast enough for log subtraction"
            )
        if prev is not None and abs(limit - prev) <= tol * max(1.0, abs(limit)):
            err = abs(limit - prev) + rich_err + corner_err * abs(np.log(taus[-1]))
            return TraceValue(pref * limit, pref * err, "quadrature", float(taus[-1]))
        prev = limit
    raise NonConvergenceError(
        f"angular quadrature for the divergent trace did not settle to tol={tol:g}"
    )


def wtr_psi(
    sym: PrincipalSymbolTriple,
    d: int,
    tau_sequence=DEFAULT_TAUS,
    tol: float = 1e-8,
) -> TraceValue:
    """x-side divergent trace: the xi-side trace of the role-swapped triple."""
    return wtr_e(swap_roles(sym), d, tau_sequence, tol)


def gamma_coeffs_general(
    sym: PrincipalSymbolTriple,
    d: int,
    m: float,
    tau_sequence=DEFAULT_TAUS,
) -> tuple[TraceValue, TraceValue]:
    """Two-term Weyl coefficients (gamma_2, gamma_1) by quadrature.

    Requires m_psi = m_e = m.  The symbol is first reduced to order (1, 1)
    by the pointwise 1/m power (the principal symbol of the m-th root), so
    that the trace integrands carry exponent -d; then

        gamma_2 = TR / (m d),
        gamma_1 = wTR_theta - wTR_psi - wTR_e - TR / d^2.

    Returns TraceValues whose error estimates combine the quadrature and
    extrapolation increments of every ingredient.
    """
    m_psi, m_e = sym.orders
    if not math.isclose(m_psi, m, rel_tol=1e-12) or not math.isclose(m_e, m, rel_tol=1e-12):
        raise ValidationError(
            f"gamma coefficients need order (m, m) = ({m}, {m}); symbol has {sym.orders}"
        )
    root = sym if m == 1.0 else symbol_power(sym, 1.0 / m)

    tr = tr_corner(root, float(d))
    th = wtr_theta(root, d)
    we = wtr_e(root, d, tau_sequence)
    wp = wtr_psi(root, d, tau_sequence)

    g2 = TraceValue(
        tr.value / (m * d),
        tr.estimated_error / (m * d),
        "quadrature",
        None,
    )
    g1 = TraceValue(
        th.value - wp.value - we.value - tr.value / d**2,
        th.estimated_error
        + wp.estimated_error
        + we.estimated_error
        + tr.estimated_error / d**2,
        "quadrature",
        we.truncation,
    )
    return g2, g1
