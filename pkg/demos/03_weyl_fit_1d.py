#!/usr/bin/env python3
"""Fitting the logarithmic Weyl law to a computed d=1 spectrum.

Discretizes Q = (1+x^2)(1 - d^2/dx^2) on a Dirichlet interval, certifies
eigenvalues by grid refinement, converts them to first-order normalization
(square roots), samples the counting function at midpoints, and fits

    N(lambda) ~ w_10 lambda log(lambda) + w_00 lambda.

The fitted leading coefficient reproduces the closed-form gamma2 = 2/pi to
a few percent at this desk scale.  The fitted lambda-coefficient w_00 is a
property of the finite spectral window and is reported alongside the
closed-form gamma1 for comparison; the sup-residual of the two-term fit is
compared against the leading-term-only fit to show the second basis
function is genuinely needed.

Takes about ten seconds.
"""

import math
import time

import numpy as np

from sgweyl import (
    DiscretizationConfig,
    compute_spectrum,
    counting_samples,
    fit_log_weyl,
    gamma1_closed,
    gamma2_closed,
)

def main():
    t0 = time.time()
    cfg = DiscretizationConfig(
        dimension=1,
        half_width=82.0,
        grid_points=8192,
        scheme_order=4,
        operator="model",
        lambda_max_target=41.0,
    )
    spec = compute_spectrum(cfg, 110)
    print(
        f"computed {len(spec)} eigenvalues, {spec.trusted_count} trusted "
        f"({time.time() - t0:.1f}s); lambda_Q in [{spec.eigenvalues[0]:.3f}, {spec.eigenvalues[-1]:.1f}]"
    )

    pts = counting_samples(spec, sqrt_transform=True)
    two = fit_log_weyl(pts, d_over_m=1.0, n_levels=1)
    one = fit_log_weyl(pts, d_over_m=1.0, tags=[(0, 1)])

    g2_hat = two.coefficients[(0, 1)]
    g1_hat = two.coefficients[(0, 0)]
    print(f"\nfit window lambda in [{two.fit_window[0]:.1f}, {two.fit_window[1]:.1f}], "
          f"{two.n_points} midpoint samples, condition {two.condition:.1e}")
    print(f"  leading coefficient  w_10 = {g2_hat:+.5f}   closed form 2/pi = {gamma2_closed(1):+.5f} "
          f"({100 * (g2_hat - gamma2_closed(1)) / gamma2_closed(1):+.1f}%)")
    print(f"  plain-term coefficient w_00 = {g1_hat:+.5f}   closed-form gamma1 = {gamma1_closed(1):+.5f}")
    print("  (w_00 reflects the finite window; only the leading coefficient is")
    print("   expected to match at desk scale)")
    print(f"  sup-residual: two-term {two.residual_sup:.3f} vs leading-only {one.residual_sup:.3f}")

    # honesty check: the same fit on a 1.5x shifted window
    lo, hi = two.fit_window
    mask = (pts[:, 0] >= 1.2 * lo) & (pts[:, 0] <= hi)
    shifted = fit_log_weyl(pts[mask], d_over_m=1.0, n_levels=1)
    print(f"  window shift changes w_10 by {abs(shifted.coefficients[(0,1)] - g2_hat):.2e}")


if __name__ == "__main__":
    main()
