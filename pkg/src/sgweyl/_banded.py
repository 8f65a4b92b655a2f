"""Eigenvalues of symmetric penta-/tridiagonal matrices by Sturm bisection.

The d=1 discretizations are banded with at most two subdiagonals.  Their
lowest eigenvalues are found by bisection on the inertia count of the
shifted matrix: an unpivoted banded LDL^T factorization of A - sigma I
counts the eigenvalues below sigma in O(n) time and O(1) memory, so every
eigenvalue is located by its index with no Lanczos basis to store.  This
scales to n of order 10^6 on a single core, far beyond the dense or
band-reduction LAPACK paths.

Breakdown of the unpivoted factorization (a zero or non-finite pivot) is
handled by jittering the shift; bisection tolerates the rare miscount a
near-breakdown could produce because every interval update re-counts from
scratch.
"""

from __future__ import annotations

import numpy as np
from numba import config as _numba_config
from numba import njit, prange

from .errors import NonConvergenceError, ValidationError

# the portable threading layer; avoids probing optional TBB/OpenMP backends
_numba_config.THREADING_LAYER = "workqueue"


@njit(cache=True, parallel=True)
def _count_below_batch(diag, sub1, sub2, sigmas):  # pragma: no cover - jitted
    n = diag.shape[0]
    m = sigmas.shape[0]
    out = np.empty(m, dtype=np.int64)
    for s in prange(m):
        sig = sigmas[s]
        neg = 0
        d1 = 0.0
        d2 = 0.0
        l1 = 0.0  # L_{j, j-1}
        l2a = 0.0  # L_{j+1, j-1}
        l2b = 0.0  # L_{j, j-2}
        ok = True
        for j in range(n):
            dj = diag[j] - sig - l1 * l1 * d1 - l2b * l2b * d2
            if dj == 0.0 or not np.isfinite(dj):
                ok = False
                break
            if dj < 0.0:
                neg += 1
            ej = sub1[j] - l1 * l2a * d1 if j < n - 1 else 0.0
            fj = sub2[j] if j < n - 2 else 0.0
            nl1 = ej / dj
            nl2 = fj / dj
            d2 = d1
            d1 = dj
            l2b = l2a
            l2a = nl2
            l1 = nl1
        out[s] = neg if ok else -1
    return out


def count_below(diag, sub1, sub2, sigmas: np.ndarray) -> np.ndarray:
    """Number of eigenvalues strictly below each shift in ``sigmas``.

    ``diag``, ``sub1``, ``sub2`` are the main diagonal and first/second
    subdiagonals, each of length n (trailing entries of the subdiagonals
    are ignored).  Shifts that break the factorization are retried with a
    relative jitter.
    """
    sigmas = np.atleast_1d(np.asarray(sigmas, dtype=float))
    counts = _count_below_batch(diag, sub1, sub2, sigmas)
    bad = counts < 0
    scale = max(1.0, float(np.max(np.abs(diag))))
    jitter = 1e-13 * scale
    tries = 0
    while bad.any():
        tries += 1
        if tries > 6:
            raise NonConvergenceError("banded inertia count kept breaking down")
        retry = sigmas[bad] + jitter
        counts[bad] = _count_below_batch(diag, sub1, sub2, retry)
        bad = counts < 0
        jitter *= 10.0
    return counts


def lowest_eigenvalues(
    diag: np.ndarray,
    sub1: np.ndarray,
    sub2: np.ndarray,
    count: int,
    rtol: float = 1e-11,
    max_iter: int = 120,
) -> np.ndarray:
    """The ``count`` smallest eigenvalues, each bisected to relative ``rtol``.

    All brackets advance level-synchronously and duplicate midpoints are
    evaluated once, so the shared early bisection levels cost a single
    factorization each.
    """
    n = len(diag)
    if not (1 <= count <= n):
        raise ValidationError(f"count must be in [1, {n}], got {count}")
    sub1 = np.ascontiguousarray(sub1, dtype=float)
    sub2 = np.ascontiguousarray(sub2, dtype=float)
    diag = np.ascontiguousarray(diag, dtype=float)

    # Gershgorin bounds from the symmetric band
    row_r = np.abs(sub1) + np.abs(sub2)
    row_r[1:] += np.abs(sub1[:-1])
    row_r[2:] += np.abs(sub2[:-2])
    glo = float(np.min(diag - row_r))
    ghi = float(np.max(diag + row_r)) * (1.0 + 1e-12) + 1e-300

    lo = np.full(count, glo)
    hi = np.full(count, ghi)
    idx = np.arange(count)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        active = (hi - lo) > rtol * np.maximum(1.0, np.abs(mid))
        if not active.any():
            break
        sig, inverse = np.unique(mid[active], return_inverse=True)
        cnt = count_below(diag, sub1, sub2, sig)[inverse]
        below = cnt > idx[active]  # count_below(mid) >= j+1  <=>  lambda_j < mid
        hi_a = hi[active]
        lo_a = lo[active]
        mid_a = mid[active]
        hi_a[below] = mid_a[below]
        lo_a[~below] = mid_a[~below]
        hi[active] = hi_a
        lo[active] = lo_a
    else:
        raise NonConvergenceError("eigenvalue bisection did not reach tolerance")
    return 0.5 * (lo + hi)
