"""Dense Hermitian linear-algebra helpers shared across the toolkit."""

from __future__ import annotations

import numpy as np

__all__ = [
    "NotHermitianError",
    "NotPositiveSemidefiniteError",
    "hermitian_gap",
    "require_hermitian",
    "pivoted_cholesky",
]


class NotHermitianError(ValueError):
    """A matrix expected to be Hermitian is not."""


class NotPositiveSemidefiniteError(ValueError):
    """A matrix expected to be PSD has a significantly negative direction."""


def hermitian_gap(matrix) -> float:
    """Largest entrywise deviation between a matrix and its conjugate transpose."""
    a = np.asarray(matrix)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - a.conj().T)))


def require_hermitian(matrix, rel_tol: float = 1e-12, what: str = "matrix") -> np.ndarray:
    """Validate Hermitian symmetry and return the exactly symmetrized copy."""
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{what} must be square, got shape {a.shape}")
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    gap = hermitian_gap(a)
    if gap > rel_tol * max(scale, 1.0):
        raise NotHermitianError(f"{what} is not Hermitian (gap {gap:.3e})")
    return 0.5 * (a + a.conj().T)


def pivoted_cholesky(matrix, rel_tol: float = 1e-12, neg_tol: float | None = None):
    """Diagonally pivoted Cholesky factorization of a Hermitian PSD matrix.

    Returns ``(factor, pivots, rank)`` with ``factor @ factor.conj().T``
    reproducing the input.  Rows of ``factor`` follow the original ordering
    (so the factor is triangular up to the pivot permutation) and columns from
    ``rank`` on are zero, which is how rank deficiency shows up.
    ``pivots[:rank]`` lists the retained indices in elimination order.

    ``rel_tol`` is the relative cutoff below which a residual diagonal entry is
    treated as zero; ``neg_tol`` (default ``100 * rel_tol``) is how negative a
    residual diagonal may go before the matrix is declared indefinite.
    """
    a = np.array(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    n = a.shape[0]
    if neg_tol is None:
        neg_tol = 100.0 * rel_tol
    diag = np.real(np.diag(a))
    scale = float(np.max(diag)) if n else 0.0
    cutoff = rel_tol * max(scale, 0.0)
    neg_cut = neg_tol * max(scale, 1.0)
    if n and float(np.min(diag)) < -neg_cut:
        raise NotPositiveSemidefiniteError(
            f"diagonal entry {float(np.min(diag)):.3e} is negative"
        )

    factor = np.zeros((n, n), dtype=complex)
    piv = np.arange(n)
    rank = n
    for k in range(n):
        resid = np.real(np.diag(a))
        j = k + int(np.argmax(resid[k:]))
        if float(np.min(resid[k:])) < -neg_cut:
            raise NotPositiveSemidefiniteError(
                f"residual diagonal {float(np.min(resid[k:])):.3e} is negative"
            )
        if resid[j] <= cutoff:
            rank = k
            break
        if j != k:
            a[[k, j], :] = a[[j, k], :]
            a[:, [k, j]] = a[:, [j, k]]
            factor[[k, j], :k] = factor[[j, k], :k]
            piv[[k, j]] = piv[[j, k]]
        root = np.sqrt(np.real(a[k, k]))
        factor[k, k] = root
        if k + 1 < n:
            col = a[k + 1:, k] / root
            factor[k + 1:, k] = col
            a[k + 1:, k + 1:] -= np.outer(col, np.conj(col))

    out = np.zeros_like(factor)
    out[piv] = factor
    return out, piv[:rank].copy(), rank
