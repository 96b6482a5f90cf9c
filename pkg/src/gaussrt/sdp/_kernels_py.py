"""Pure numpy fallback for the compiled kernels in ``_kernels.pyx``.

Same signatures; the dense coefficient stack is rebuilt from the sparse
layout once per block and cached by the caller (see ``_backend``).
"""
import numpy as np


def schur_accumulate_dense(winv, F, out):
    G = winv @ F @ winv
    m = F.shape[0]
    out += F.reshape(m, -1) @ np.swapaxes(G, 1, 2).reshape(m, -1).T


def inner_products_dense(X, F, out):
    out += np.tensordot(F, X, axes=([1, 2], [1, 0]))
