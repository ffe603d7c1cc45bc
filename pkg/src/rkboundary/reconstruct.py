"""Sampling and reconstruction: cardinal-series interpolation on the line and
the exponential basis of the quarter-Cantor measure."""

from __future__ import annotations

from typing import Mapping

import numpy as np

from .measures import cantor4_fourier, cantor_ifs

__all__ = [
    "MAX_LAMBDA_LEVEL",
    "lambda4_set",
    "in_lambda4",
    "shannon_reconstruct",
    "cantor_coefficients",
    "parseval_defect",
    "parseval_table",
]

MAX_LAMBDA_LEVEL = 20
MAX_PARSEVAL_LEVEL = 14


def lambda4_set(level: int) -> np.ndarray:
    """All integers below 4**level whose base-4 digits are 0 or 1, sorted.

    These are the frequencies whose exponentials e^{2 pi i lambda x} form an
    orthonormal family in L2 of the quarter-Cantor measure; there are exactly
    2**level of them.
    """
    if not 1 <= level <= MAX_LAMBDA_LEVEL:
        raise ValueError(f"level must be in 1..{MAX_LAMBDA_LEVEL} (int64 overflow guard)")
    m = np.arange(2 ** level, dtype=np.int64)
    lam = np.zeros_like(m)
    for i in range(level):
        lam += ((m >> i) & 1) * np.int64(4) ** i
    return lam


def in_lambda4(n) -> bool:
    """True when every base-4 digit of n is 0 or 1."""
    m = int(n)
    if m < 0:
        return False
    while m:
        if m & 3 > 1:
            return False
        m >>= 2
    return True


def shannon_reconstruct(samples: Mapping[int, complex], t):
    """Truncated cardinal series sum_n f(n) sinc(t - n) over the stored support.

    ``samples`` maps integers to sample values.  At integers inside the
    support the stored sample is returned exactly (sinc is 1 at zero and
    vanishes at the other integers); elsewhere the truncation error is the
    usual tail of the full bilateral series.
    """
    tt = np.asarray(t, dtype=float)
    scalar = tt.ndim == 0
    pts = np.atleast_1d(tt)
    if not samples:
        out = np.zeros(pts.shape, dtype=complex)
        return complex(out[0]) if scalar else out
    support = sorted(int(n) for n in samples)
    if any(int(n) != n for n in samples):
        raise ValueError("sample support must consist of integers")
    ns = np.asarray(support, dtype=float)
    vals = np.asarray([samples[n] for n in support], dtype=complex)
    out = np.sinc(pts[:, None] - ns[None, :]) @ vals
    nearest = np.rint(pts)
    for idx in np.nonzero(pts == nearest)[0]:
        n = int(nearest[idx])
        if n in samples:
            out[idx] = complex(samples[n])
    return complex(out[0]) if scalar else out


def cantor_coefficients(f, lambdas, depth: int = 16) -> np.ndarray:
    """Coefficients int f(x) e^{-2 pi i lambda x} dmu(x) against the quarter-Cantor measure.

    A mapping ``{frequency: coefficient}`` is treated as a trigonometric
    polynomial and integrated exactly through :func:`cantor4_fourier`; a
    callable is integrated by the depth-``depth`` IFS refinement.
    """
    lam = np.asarray(lambdas, dtype=float)
    if isinstance(f, Mapping):
        out = np.zeros(lam.shape, dtype=complex)
        for freq in sorted(f):
            out += complex(f[freq]) * cantor4_fourier(float(freq) - lam)
        return out
    mu = cantor_ifs(depth)
    base = np.asarray(f(mu.nodes), dtype=complex)
    phases = np.exp(-2j * np.pi * lam[:, None] * mu.nodes[None, :])
    return phases @ (mu.weights * base)


def parseval_defect(k: int, level: int) -> float:
    """Unit-norm deficit of e_k against the level-L family: 1 - sum |mu_hat(k - lambda)|^2.

    Nonnegative up to rounding (a Bessel sum) and nonincreasing in the level;
    it tends to zero exactly when the exponential family spans e_k.
    """
    if not 1 <= level <= MAX_PARSEVAL_LEVEL:
        raise ValueError(f"level must be in 1..{MAX_PARSEVAL_LEVEL}")
    lam = lambda4_set(level)
    amp = cantor4_fourier(float(k) - lam.astype(float))
    return float(1.0 - np.sum(np.abs(amp) ** 2))


def parseval_table(k: int, max_level: int, min_level: int = 1) -> list[tuple[int, float]]:
    """Defect per level, accumulated incrementally so the sequence is exactly monotone.

    Each level only adds nonnegative terms to the running Bessel sum, so the
    returned defects never increase even at the rounding level.
    """
    if not 1 <= min_level <= max_level <= MAX_PARSEVAL_LEVEL:
        raise ValueError(f"levels must satisfy 1 <= min <= max <= {MAX_PARSEVAL_LEVEL}")
    rows: list[tuple[int, float]] = []
    total = 0.0
    previous = 0
    for level in range(1, max_level + 1):
        lam = lambda4_set(level)
        fresh = lam[previous:]
        previous = lam.shape[0]
        amp = cantor4_fourier(float(k) - fresh.astype(float))
        total += float(np.sum(np.abs(amp) ** 2))
        if level >= min_level:
            rows.append((level, 1.0 - total))
    return rows
