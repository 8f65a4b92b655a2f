"""Log-polyhomogeneous Weyl fits, partial zeta sums, and the Laurent dictionary.

A counting function with a double-pole zeta function grows like

    N(lambda) = w_10 lambda^a log(lambda) + w_00 lambda^a + (level-1 terms),

and the Laurent data of zeta at the corresponding pole is an exact linear
function of the w coefficients.  This module fits the w's from (lambda, N)
samples by column-scaled linear least squares, evaluates eigenvalue-side
partial zeta sums with a closed-form tail correction from a fit, and
applies the coefficient dictionary

    A2_k = (d - k) w_1k,     A1_k = w_1k + (d - k) w_0k.

Nothing here performs a true meromorphic continuation; the partial-sum
route plus the dictionary is the trusted path, and the direct numerical
Laurent extraction is shipped only as a diagnostic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import RankDeficientFitError, ValidationError
from .spectrum import SpectralData

#: basis tags (k, j): coefficient of lambda^(exponent - k*level_step) * log(lambda)^j
LEVEL_TAGS = {1: ((0, 1), (0, 0)), 2: ((0, 1), (0, 0), (1, 1), (1, 0))}

#: minimum sample count per fitted coefficient
POINTS_PER_COEFF = 4

#: scaled designs with sigma_min/sigma_max below this are rank deficient;
#: usable windows sit far above (>= ~5e-5) and collapsed ones far below
RANK_RTOL = 1e-7


@dataclass(frozen=True)
class WeylFit:
    """Result of a least-squares fit against the logarithmic Weyl basis.

    ``coefficients`` maps basis tags (k, j) to the fitted coefficient of
    lambda^(exponent - k*level_step) * log(lambda)^j.  ``condition`` is the
    condition number of the column-scaled design matrix; the near
    collinearity of the lambda^a log(lambda) and lambda^a columns over
    short windows makes this the quantity to watch.
    """

    exponent: float
    coefficients: dict[tuple[int, int], float]
    fit_window: tuple[float, float]
    residual_sup: float
    n_points: int
    condition: float
    level_step: float = 1.0

    def __post_init__(self):
        lo, hi = self.fit_window
        if not (lo < hi):
            raise ValidationError("fit_window must satisfy lambda_min < lambda_max")
        if self.residual_sup < 0:
            raise ValidationError("residual_sup must be nonnegative")

    def basis_exponent(self, k: int) -> float:
        return self.exponent - k * self.level_step

    def predict(self, lam) -> np.ndarray:
        """Evaluate the fitted counting model."""
        lam = np.asarray(lam, dtype=float)
        out = np.zeros_like(lam)
        for (k, j), w in self.coefficients.items():
            out = out + w * lam ** self.basis_exponent(k) * np.log(lam) ** j
        return out

    def to_dict(self) -> dict:
        return {
            "exponent": float(self.exponent),
            "level_step": float(self.level_step),
            "coefficients": {f"w_{j}_{k}": float(w) for (k, j), w in self.coefficients.items()},
            "window_min": float(self.fit_window[0]),
            "window_max": float(self.fit_window[1]),
            "residual_sup": float(self.residual_sup),
            "n_points": int(self.n_points),
            "condition": float(self.condition),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "WeylFit":
        coeffs = {}
        for key, w in data["coefficients"].items():
            _, j, k = key.split("_")
            coeffs[(int(k), int(j))] = float(w)
        return cls(
            exponent=float(data["exponent"]),
            coefficients=coeffs,
            fit_window=(float(data["window_min"]), float(data["window_max"])),
            residual_sup=float(data["residual_sup"]),
            n_points=int(data["n_points"]),
            condition=float(data["condition"]),
            level_step=float(data.get("level_step", 1.0)),
        )


@dataclass(frozen=True)
class LaurentData:
    """Order-2 and order-1 Laurent coefficients of zeta at s = d - k."""

    k: int
    A2: float
    A1: float


def fit_log_weyl(
    points,
    d_over_m: float,
    n_levels: int = 1,
    level_step: float = 1.0,
    tags: Sequence[tuple[int, int]] | None = None,
    weights=None,
) -> WeylFit:
    """Weighted least squares against {lambda^(a-k*step) log(lambda)^j}.

    ``points`` is a sequence of (lambda, N(lambda)) samples with
    lambda_min > 1 (so the log column is positive and the scaled basis is
    well conditioned).  ``n_levels`` selects the standard tag sets; pass
    ``tags`` explicitly for non-standard bases such as the leading-term-only
    fit.  Columns are scaled to unit sup-norm before solving and a
    rank-deficient scaled design (window too narrow) raises
    RankDeficientFitError.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValidationError("points must be a sequence of (lambda, N) pairs")
    if d_over_m <= 0:
        raise ValidationError("exponent d/m must be positive")
    if tags is None:
        if n_levels not in LEVEL_TAGS:
            raise ValidationError(f"n_levels must be 1 or 2, got {n_levels}")
        tags = LEVEL_TAGS[n_levels]
    tags = [(int(k), int(j)) for k, j in tags]
    lam = pts[:, 0]
    target = pts[:, 1]
    if np.any(lam <= 1.0):
        raise ValidationError("fit requires lambda_min > 1")
    if len(pts) < POINTS_PER_COEFF * len(tags):
        raise ValidationError(
            f"need at least {POINTS_PER_COEFF} points per coefficient "
            f"({POINTS_PER_COEFF * len(tags)} total), got {len(pts)}"
        )
    if weights is None:
        w = np.ones_like(lam)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != lam.shape or np.any(w <= 0):
            raise ValidationError("weights must be positive and match the points")

    log_lam = np.log(lam)
    design = np.column_stack(
        [lam ** (d_over_m - k * level_step) * log_lam**j for k, j in tags]
    )
    scale = np.abs(design).max(axis=0)
    if np.any(scale == 0.0):
        raise RankDeficientFitError("a basis column vanishes on the window")
    scaled = (design / scale) * w[:, None]
    sv = np.linalg.svd(scaled, compute_uv=False)
    if sv[-1] <= RANK_RTOL * sv[0]:
        raise RankDeficientFitError(
            f"fit basis is numerically rank deficient on this window "
            f"(condition ~ {sv[0] / max(sv[-1], 1e-300):.2e}); widen the window"
        )
    coef, *_ = np.linalg.lstsq(scaled, target * w, rcond=None)
    coef = coef / scale
    resid = float(np.abs(design @ coef - target).max())
    return WeylFit(
        exponent=float(d_over_m),
        coefficients={tag: float(c) for tag, c in zip(tags, coef)},
        fit_window=(float(lam.min()), float(lam.max())),
        residual_sup=resid,
        n_points=len(pts),
        condition=float(sv[0] / sv[-1]),
        level_step=float(level_step),
    )


def counting_samples(
    spec: SpectralData,
    sqrt_transform: bool = False,
    window_fraction: float = 2.0 / 3.0,
) -> np.ndarray:
    """(lambda, N) samples at midpoints between consecutive trusted eigenvalues.

    Midpoints dodge the strict-inequality jump ambiguity at the
    eigenvalues themselves; by default the samples cover the upper
    ``window_fraction`` of the trusted spectrum.  ``sqrt_transform``
    converts order-(2,2) eigenvalues to first-order normalization before
    sampling (N is invariant under the monotone change of variable).
    """
    if spec.trusted_count < 3:
        raise ValidationError("need at least 3 trusted eigenvalues to sample N")
    lam = spec.trusted
    if sqrt_transform:
        lam = np.sqrt(lam)
    start = max(0, int(math.floor(spec.trusted_count * (1.0 - window_fraction))))
    mids, counts = [], []
    for idx in range(start, spec.trusted_count - 1):
        a, b = lam[idx], lam[idx + 1]
        if b - a <= 1e-12 * max(1.0, b):
            continue  # degenerate gap: N is ambiguous there
        mids.append(0.5 * (a + b))
        counts.append(float(idx + 1))
    return np.column_stack([mids, counts])


def zeta_partial(
    spec: SpectralData,
    s: float,
    tail: WeylFit | None = None,
    abscissa: float | None = None,
) -> float:
    """Partial sum of lambda_j^(-s) over the trusted spectrum, plus a tail.

    With a fitted counting model, the remainder past the last trusted
    eigenvalue is added in closed form as int_T^inf lambda^-s dN_fit.  The
    sum only converges for s beyond the abscissa d/m; the check uses
    ``abscissa`` when given, else the tail's exponent, else is skipped
    (finite synthetic spectra).
    """
    limit = abscissa if abscissa is not None else (tail.exponent if tail is not None else None)
    if limit is not None and s <= limit:
        raise ValidationError(
            f"s = {s:g} is at or below the convergence abscissa {limit:g}"
        )
    lam = spec.trusted
    total = float(np.sum(lam ** (-float(s)))) if len(lam) else 0.0
    if tail is None or len(lam) == 0:
        return total
    big_l = float(lam[-1])
    log_l = math.log(big_l)
    for (k, j), w in tail.coefficients.items():
        a = tail.basis_exponent(k)
        u = s - a
        if u <= 0:
            raise ValidationError(
                f"tail term with exponent {a:g} does not converge at s = {s:g}"
            )
        j0 = big_l ** (-u) / u
        j1 = big_l ** (-u) * (u * log_l + 1.0) / u**2
        if j == 0:
            total += w * a * j0
        else:
            total += w * (a * j1 + j0)
    return total


def laurent_from_weyl(fit: WeylFit, d: int, k: int) -> LaurentData:
    """Laurent coefficients of zeta at s = d - k from fitted w's.

    The dictionary is exact: A2 = (d-k) w_1k and A1 = w_1k + (d-k) w_0k.
    """
    if (k, 1) not in fit.coefficients or (k, 0) not in fit.coefficients:
        raise ValidationError(f"fit does not contain level-{k} coefficients")
    w1 = fit.coefficients[(k, 1)]
    w0 = fit.coefficients[(k, 0)]
    return LaurentData(k=k, A2=(d - k) * w1, A1=w1 + (d - k) * w0)


def pole_locations(
    d: int, m_psi: float, m_e: float, count: int
) -> list[tuple[float, int]]:
    """Candidate zeta poles (descending) with their maximal orders.

    The candidates are (d-j)/m_psi and (d-k)/m_e for nonnegative integers
    j, k; a pole can be of order two exactly when some pair coincides.
    Coincidence is decided up to a 1e-12 relative tolerance since the
    orders are floating-point data.
    """
    if count < 1:
        raise ValidationError("count must be >= 1")
    if m_psi <= 0 or m_e <= 0:
        raise ValidationError("orders must be positive")
    fam_psi = [(d - j) / m_psi for j in range(count)]
    fam_e = [(d - k) / m_e for k in range(count)]

    def near(x: float, family) -> bool:
        return any(abs(x - y) <= 1e-12 * max(1.0, abs(x), abs(y)) for y in family)

    merged: list[float] = []
    for x in sorted(fam_psi + fam_e, reverse=True):
        if not merged or abs(merged[-1] - x) > 1e-12 * max(1.0, abs(x), abs(merged[-1])):
            merged.append(x)
    out = []
    for x in merged[:count]:
        order = 2 if (near(x, fam_psi) and near(x, fam_e)) else 1
        out.append((x, order))
    return out


def laurent_diagnostic(
    zeta_fn: Callable[[float], float],
    d: float,
    offsets: Sequence[float] = (0.32, 0.16, 0.08, 0.04, 0.02),
) -> LaurentData:
    """Estimate (A2, A1) at s = d by fitting (s-d)^2 zeta(s) near the pole.

    Diagnostic only: partial-sum zeta values cannot be continued reliably
    past the abscissa, so this must never gate an acceptance decision; the
    dictionary route through :func:`laurent_from_weyl` is the trusted path.
    """
    offs = np.asarray(offsets, dtype=float)
    if np.any(offs <= 0) or len(offs) < 3:
        raise ValidationError("need >= 3 positive offsets to the right of the pole")
    vals = np.array([(eps**2) * zeta_fn(d + eps) for eps in offs])
    design = np.column_stack([np.ones_like(offs), offs, offs**2])
    coef, *_ = np.linalg.lstsq(design, vals, rcond=None)
    return LaurentData(k=0, A2=float(coef[0]), A1=float(coef[1]))
