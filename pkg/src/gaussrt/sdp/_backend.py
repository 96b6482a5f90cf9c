"""Kernel backend selection.

The compiled extension is used when importable; ``GAUSSRT_PURE_PYTHON=1``
forces the numpy fallback.
"""
import os

import numpy as np

from . import _kernels_py

try:
    if os.environ.get("GAUSSRT_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-python backend forced")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"
DENSE_FRACTION = 0.25


class BlockData:
    """Real symmetric coefficient stack of one block, dense and CSR-like."""

    def __init__(self, F0, F):
        self.F0 = np.ascontiguousarray(F0, dtype=float)
        self.F = np.ascontiguousarray(F, dtype=float)
        m = self.F.shape[0]
        idx = [np.nonzero(self.F[i]) for i in range(m)]
        counts = np.array([len(r) for r, _ in idx], dtype=np.int64)
        self.ptr = np.zeros(m + 1, dtype=np.int64)
        np.cumsum(counts, out=self.ptr[1:])
        if m:
            self.rows = np.concatenate([r for r, _ in idx]).astype(np.int64)
            self.cols = np.concatenate([c for _, c in idx]).astype(np.int64)
            self.vals = np.concatenate([self.F[i][r, c] for i, (r, c) in enumerate(idx)])
        else:
            self.rows = np.zeros(0, dtype=np.int64)
            self.cols = np.zeros(0, dtype=np.int64)
            self.vals = np.zeros(0)
        self.rows = np.ascontiguousarray(self.rows)
        self.cols = np.ascontiguousarray(self.cols)
        self.vals = np.ascontiguousarray(self.vals, dtype=float)
        # dense stacks (the preconditioned main block) go to BLAS even on the
        # compiled backend: the sparse loop costs nnz * d^2 per column of the
        # Schur matrix against d^3 for two matrix products
        d = self.F0.shape[0]
        self.dense = m > 0 and len(self.vals) > DENSE_FRACTION * m * d * d

    @property
    def dim(self):
        return self.F0.shape[0]

    @property
    def m(self):
        return self.F.shape[0]


def schur_accumulate(winv, blk, out, backend=None):
    backend = backend or BACKEND
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        if blk.dense:
            _kernels_py.schur_accumulate_dense(winv, blk.F, out)
            return
        _compiled.schur_accumulate(
            np.ascontiguousarray(winv), blk.ptr, blk.rows, blk.cols, blk.vals, out
        )
    else:
        _kernels_py.schur_accumulate_dense(winv, blk.F, out)


def inner_products(X, blk, out, backend=None):
    backend = backend or BACKEND
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        _compiled.inner_products(
            np.ascontiguousarray(X), blk.ptr, blk.rows, blk.cols, blk.vals, out
        )
    else:
        _kernels_py.inner_products_dense(X, blk.F, out)
