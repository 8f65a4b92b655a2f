#!/usr/bin/env python3
"""Two-term Weyl coefficients of the model operator, two independent ways.

The counting function of the model operator grows like

    N(lambda) = gamma2 * lambda^d log(lambda) + gamma1 * lambda^d + ...

and both coefficients are computable in closed form (sphere volumes plus a
digamma evaluation) as well as by quadrature of regularized traces of the
principal symbol (a corner integral for gamma2; log-subtracted truncated
integrals, extrapolated in the truncation radius, for gamma1).  This demo
prints both routes side by side for d = 1, 2, 3 together with the
quadrature's own error estimates.
"""

import math

from sgweyl import (
    EULER_GAMMA,
    digamma,
    gamma1_closed,
    gamma2_closed,
    gamma_coeffs_general,
    model_symbol,
    sphere_volume,
)


def main():
    print("special-function ingredients")
    print(f"  Euler-Mascheroni gamma = {EULER_GAMMA:.18f}")
    print(f"  Psi(1)   = {digamma(1.0):+.15f}   (= -gamma)")
    print(f"  Psi(1/2) = {digamma(0.5):+.15f}   (= -gamma - 2 log 2)")
    for d in (1, 2, 3):
        print(f"  vol(S^{d-1}) = {sphere_volume(d):.15f}")
    print()

    header = f"{'d':>2} {'gamma2 closed':>18} {'gamma2 quad':>18} {'gamma1 closed':>18} {'gamma1 quad':>18} {'max err est':>12}"
    print(header)
    print("-" * len(header))
    for d in (1, 2, 3):
        g2, g1 = gamma_coeffs_general(model_symbol(d), d, 1.0)
        err = max(g2.estimated_error, g1.estimated_error)
        print(
            f"{d:>2} {gamma2_closed(d):>18.12f} {g2.value:>18.12f} "
            f"{gamma1_closed(d):>18.12f} {g1.value:>18.12f} {err:>12.2e}"
        )
    print()
    print("d=1 sanity: gamma1 = -(2/pi)(2 log 2 + 1) =", -(2 / math.pi) * (2 * math.log(2) + 1))
    print("d=2 sanity: gamma1 = -1/4")


if __name__ == "__main__":
    main()
