"""The Toeplitz operator system of n x n matrices constant along diagonals.

Objects of length 2n - 1 (coefficients, columns of ``delta``, rows and
columns of map matrices) are indexed by the diagonal ``k = -n+1 .. n-1``,
stored at array position ``k + n - 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import DEFAULT_TOL, Tol, as_cmat, vec

__all__ = [
    "ToeplitzSystem",
    "ToeplitzCoeffs",
    "tau",
    "embed",
    "project",
    "toeplitz_residual",
    "is_member",
    "delta",
    "truncate",
    "fourier_from_samples",
]


@dataclass(frozen=True)
class ToeplitzSystem:
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")

    @property
    def dim(self) -> int:
        return 2 * self.n - 1

    @property
    def offsets(self) -> range:
        return range(-self.n + 1, self.n)

    def basis(self):
        return [tau(self.n, k) for k in self.offsets]


@dataclass(frozen=True)
class ToeplitzCoeffs:
    """Values on each diagonal, ``diag[k + n - 1]`` for diagonal ``k``."""

    n: int
    diag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=np.complex128).ravel()
        if d.size != 2 * self.n - 1:
            raise ValueError(f"need {2 * self.n - 1} coefficients for n={self.n}, got {d.size}")
        object.__setattr__(self, "diag", d)

    def __getitem__(self, k: int) -> complex:
        if abs(k) >= self.n:
            raise IndexError(f"diagonal {k} out of range for n={self.n}")
        return complex(self.diag[k + self.n - 1])

    def matrix(self) -> np.ndarray:
        return embed(self)


def _check_n(n) -> int:
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return int(n)


def tau(n: int, k: int) -> np.ndarray:
    """Basis element with ones on diagonal ``k`` (k > 0 above the main diagonal)."""
    n = _check_n(n)
    if abs(k) >= n:
        raise ValueError(f"diagonal {k} out of range for n={n}")
    return np.eye(n, k=k, dtype=np.complex128)


def embed(coeffs: ToeplitzCoeffs) -> np.ndarray:
    n = coeffs.n
    out = np.zeros((n, n), dtype=np.complex128)
    for k in range(-n + 1, n):
        out += coeffs.diag[k + n - 1] * np.eye(n, k=k)
    return out


def _as_square(t, n: int) -> np.ndarray:
    t = as_cmat(t, "t")
    if t.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got {t.shape}")
    return t


def project(t, sys: ToeplitzSystem) -> ToeplitzCoeffs:
    """Diagonal averages of ``t``; the Frobenius-nearest Toeplitz matrix."""
    t = _as_square(t, sys.n)
    diag = [np.diagonal(t, offset=k).mean() for k in sys.offsets]
    return ToeplitzCoeffs(sys.n, np.array(diag))


def toeplitz_residual(t, sys: ToeplitzSystem) -> float:
    """Frobenius distance from ``t`` to the Toeplitz system."""
    t = _as_square(t, sys.n)
    return float(np.linalg.norm(t - embed(project(t, sys))))


def is_member(t, sys: ToeplitzSystem, tol: Tol = DEFAULT_TOL) -> bool:
    t = _as_square(t, sys.n)
    return toeplitz_residual(t, sys) <= tol.threshold(float(np.linalg.norm(t)))


def delta(n: int) -> np.ndarray:
    """The n^2 x (2n-1) matrix whose columns are vec(tau_k), k = -n+1 .. n-1."""
    n = _check_n(n)
    return np.hstack([vec(tau(n, k)) for k in range(-n + 1, n)])


def truncate(coeffs: Sequence[complex], n: int) -> np.ndarray:
    """Toeplitz matrix with entry (i, j) equal to ``a_{i-j}``.

    ``coeffs`` holds ``a_{-K} .. a_K`` (odd length 2K + 1). Coefficients
    with ``|k| >= n`` do not fit and are dropped.
    """
    n = _check_n(n)
    a = np.asarray(coeffs, dtype=np.complex128).ravel()
    if a.size % 2 != 1:
        raise ValueError("coefficients must have odd length 2K+1 (indices -K..K)")
    big_k = a.size // 2
    out = np.zeros((n, n), dtype=np.complex128)
    for k in range(-big_k, big_k + 1):
        if abs(k) < n:
            # a_k sits where i - j = k, i.e. on tau_{-k}
            out += a[k + big_k] * np.eye(n, k=-k)
    return out


def fourier_from_samples(samples: Sequence[complex], K: int) -> np.ndarray:
    """Fourier coefficients ``a_{-K} .. a_K`` from equispaced samples.

    ``samples[m]`` is f(2 pi m / M); uses the direct O(M K) sum
    ``a_k = (1/M) sum_m samples[m] exp(-2 pi i k m / M)``.
    """
    f = np.asarray(samples, dtype=np.complex128).ravel()
    m_count = f.size
    if K < 0 or m_count < 2 * K + 1:
        raise ValueError(f"need at least {2 * K + 1} samples for K={K}, got {m_count}")
    m = np.arange(m_count)
    ks = np.arange(-K, K + 1)
    kernel = np.exp(-2j * np.pi * np.outer(ks, m) / m_count)
    return kernel @ f / m_count
