"""Batched submatrix rank kernels.

The exhaustive oracles (circuit enumeration, maximal well-constrained part
search) spend nearly all their time computing ranks of many row/column
subsets of one matrix. Two interchangeable backends are provided:

* ``numba``: an ``@njit(parallel=True)`` loop over the batch;
* ``numpy``: SVDs stacked by submatrix shape.

Set ``GCSA_DISABLE_NUMBA=1`` to force the numpy path. Both apply the same
tolerance rule, so they return identical ranks.
"""
import os

import numpy as np

EPS = np.finfo(float).eps

# the TBB layer shipped with some numba wheels is too old; workqueue always works
os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")

try:
    import numba
except ImportError:  # pragma: no cover - numba is optional
    numba = None

HAVE_NUMBA = numba is not None
USE_NUMBA = HAVE_NUMBA and os.environ.get("GCSA_DISABLE_NUMBA", "").strip() not in ("1", "true", "yes")


def _ranks_numpy(A, row_masks, col_masks, abs_tol):
    B = row_masks.shape[0]
    out = np.zeros(B, dtype=np.int64)
    r_counts = row_masks.sum(axis=1)
    c_counts = col_masks.sum(axis=1)
    groups = {}
    for b in range(B):
        if r_counts[b] and c_counts[b]:
            groups.setdefault((r_counts[b], c_counts[b]), []).append(b)
    for (r, c), idx in groups.items():
        stack = np.empty((len(idx), r, c))
        for k, b in enumerate(idx):
            stack[k] = A[np.ix_(row_masks[b], col_masks[b])]
        s = np.linalg.svd(stack, compute_uv=False)
        if abs_tol > 0:
            tol = np.full(len(idx), abs_tol)
        else:
            tol = max(r, c) * EPS * s[:, 0]
        out[idx] = np.sum(s > tol[:, None], axis=1)
    return out


if HAVE_NUMBA:

    @numba.njit(cache=True, parallel=True)
    def _ranks_numba(A, row_masks, col_masks, abs_tol):
        B = row_masks.shape[0]
        out = np.zeros(B, dtype=np.int64)
        for b in numba.prange(B):
            rows = np.nonzero(row_masks[b])[0]
            cols = np.nonzero(col_masks[b])[0]
            r = rows.shape[0]
            c = cols.shape[0]
            if r == 0 or c == 0:
                continue
            sub = np.empty((r, c))
            for i in range(r):
                for j in range(c):
                    sub[i, j] = A[rows[i], cols[j]]
            s = np.linalg.svd(sub)[1]
            if abs_tol > 0:
                tol = abs_tol
            else:
                tol = max(r, c) * 2.220446049250313e-16 * s[0]
            k = 0
            for v in s:
                if v > tol:
                    k += 1
            out[b] = k
        return out

else:  # pragma: no cover
    _ranks_numba = None


def submatrix_ranks(A, row_masks, col_masks=None, abs_tol=None, backend=None):
    """Rank of ``A[rows_b][:, cols_b]`` for every mask pair ``b``.

    ``abs_tol=None`` applies the spectral default per submatrix:
    ``max(r, c) * eps * sigma_max``.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    row_masks = np.ascontiguousarray(np.atleast_2d(row_masks), dtype=np.bool_)
    if col_masks is None:
        col_masks = np.ones((row_masks.shape[0], A.shape[1]), dtype=np.bool_)
    col_masks = np.ascontiguousarray(np.atleast_2d(col_masks), dtype=np.bool_)
    if col_masks.shape[0] == 1 and row_masks.shape[0] > 1:
        col_masks = np.ascontiguousarray(np.repeat(col_masks, row_masks.shape[0], axis=0))
    tol = -1.0 if abs_tol is None else float(abs_tol)
    if backend is None:
        backend = "numba" if USE_NUMBA else "numpy"
    if row_masks.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is not installed")
        return _ranks_numba(A, row_masks, col_masks, tol)
    return _ranks_numpy(A, row_masks, col_masks, tol)
