"""Dense row reduction over F_p with numpy int64 (p <= 2^31 keeps products < 2^62)."""
from __future__ import annotations

import numpy as np


def rref(M: np.ndarray, p: int, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of M mod p, pivoting only in the first ``ncols`` columns."""
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    limit = cols if ncols is None else ncols
    pivots: list[int] = []
    r = 0
    for c in range(limit):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            A[[r, k]] = A[[k, r]]
        inv = pow(int(A[r, c]), -1, p)
        if inv != 1:
            A[r] = A[r] * inv % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            A[hit] = (A[hit] - np.outer(col[hit], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def left_kernel(M: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of {c : c @ M == 0 mod p}."""
    rows, cols = M.shape
    if rows == 0:
        return np.zeros((0, 0), dtype=np.int64)
    aug = np.concatenate([np.asarray(M, dtype=np.int64) % p, np.eye(rows, dtype=np.int64)], axis=1)
    R, pivots = rref(aug, p, ncols=cols)
    rank = len(pivots)
    return R[rank:, cols:]


def rank(M: np.ndarray, p: int) -> int:
    if M.size == 0:
        return 0
    return len(rref(M, p)[1])
