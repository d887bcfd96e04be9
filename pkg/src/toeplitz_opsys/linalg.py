"""Dense complex linear algebra for n x n and n^2 x n^2 matrices.

All matrices are plain ``numpy`` complex arrays (row-major storage).
Vectorization follows the column-stacking convention, so that

    vec(A @ X @ B.T) == kron(B, A) @ vec(X)

Eigenvalues are computed by a cyclic complex Jacobi method; nothing here
calls a LAPACK eigensolver.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np

__all__ = [
    "Tol",
    "DEFAULT_TOL",
    "NumericalError",
    "as_cmat",
    "kron",
    "vec",
    "unvec",
    "schur",
    "gamma",
    "hermitian_defect",
    "eigh",
    "hermitian_eigvals",
    "is_psd",
    "singular_values",
    "operator_norm",
    "matrix_rank",
    "lstsq",
]

# Off-diagonal Frobenius mass, relative to ||H||_F, at which Jacobi stops.
JACOBI_EPS = 1e-12
JACOBI_MAX_SWEEPS = 100


class NumericalError(ArithmeticError):
    """A residual exceeded its tolerance, or an iteration failed to converge."""


@dataclass(frozen=True)
class Tol:
    """Comparison policy shared by every predicate in the package.

    ``abs`` and ``rel`` combine into a threshold ``abs + rel * scale`` for
    residual norms; ``psd_slack`` is the relative slack allowed below zero
    for the smallest eigenvalue in :func:`is_psd`.
    """

    abs: float = 1e-9
    rel: float = 1e-9
    psd_slack: float = 1e-8

    def __post_init__(self):
        for name in ("abs", "rel", "psd_slack"):
            value = getattr(self, name)
            if not (value >= 0 and math.isfinite(value)):
                raise ValueError(f"tolerance {name} must be finite and >= 0, got {value!r}")

    def threshold(self, scale: float = 0.0) -> float:
        return self.abs + self.rel * scale


DEFAULT_TOL = Tol()


def as_cmat(m, name: str = "matrix") -> np.ndarray:
    """Return ``m`` as a finite 2-D complex128 array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def kron(a, b) -> np.ndarray:
    """Kronecker product; block ``(i, j)`` of the result is ``a[i, j] * b``."""
    return np.kron(as_cmat(a, "a"), as_cmat(b, "b"))


def vec(t) -> np.ndarray:
    """Stack the columns of ``t`` into a column vector of length rows*cols.

    >>> vec([[1, 2], [3, 4]]).ravel().real
    array([1., 3., 2., 4.])
    """
    t = as_cmat(t, "t")
    return t.T.reshape(-1, 1).copy()


def unvec(v, rows: int, cols: int) -> np.ndarray:
    """Inverse of :func:`vec` for a ``rows x cols`` matrix."""
    v = np.asarray(v, dtype=np.complex128)
    if rows < 1 or cols < 1 or v.size != rows * cols:
        raise ValueError(f"cannot unvec {v.size} entries into {rows}x{cols}")
    return v.reshape(cols, rows).T.copy()


def schur(a, b) -> np.ndarray:
    """Elementwise (Schur/Hadamard) product."""
    a = as_cmat(a, "a")
    b = as_cmat(b, "b")
    if a.shape != b.shape:
        raise ValueError(f"schur product needs equal shapes, got {a.shape} and {b.shape}")
    return a * b


def _square_side(t: np.ndarray) -> int:
    rows, cols = t.shape
    if rows != cols:
        raise ValueError(f"expected a square matrix, got {t.shape}")
    n = math.isqrt(rows)
    if n * n != rows:
        raise ValueError(f"side length {rows} is not a perfect square")
    return n


def gamma(t) -> np.ndarray:
    """Block rearrangement of an n^2 x n^2 matrix.

    With 1-based multi-indices ``[i, j] = (i - 1) n + j``, block ``(i, j)``
    of the result has entry ``(r, s)`` equal to ``t[[i, j], [r, s]]``. In
    words, row ``[i, j]`` of ``t`` is folded into the n x n block ``(i, j)``.
    The map is a linear involution.
    """
    t = as_cmat(t, "t")
    n = _square_side(t)
    # t4[i, j, r, s] = t[[i,j],[r,s]];  out[[i,r],[j,s]] = t4[i, j, r, s]
    return t.reshape(n, n, n, n).transpose(0, 2, 1, 3).reshape(n * n, n * n).copy()


def hermitian_defect(h) -> float:
    """Frobenius norm of ``h - h^*``."""
    h = as_cmat(h, "h")
    return float(np.linalg.norm(h - h.conj().T))


@lru_cache(maxsize=64)
def _round_robin(size: int) -> Tuple[Tuple[np.ndarray, np.ndarray], ...]:
    """Disjoint index pairs for each round of a cyclic sweep (circle method)."""
    m = size + (size % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < size and q < size]
        p = np.array([pq[0] for pq in pairs], dtype=np.intp)
        q = np.array([pq[1] for pq in pairs], dtype=np.intp)
        rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _jacobi(h: np.ndarray, want_vectors: bool) -> Tuple[np.ndarray, np.ndarray | None]:
    a = 0.5 * (h + h.conj().T)
    size = a.shape[0]
    vecs = np.eye(size, dtype=np.complex128) if want_vectors else None
    scale = float(np.linalg.norm(a))
    if size == 1 or scale == 0.0:
        return np.real(np.diag(a)).copy(), vecs
    target = JACOBI_EPS * scale
    rounds = _round_robin(size)
    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_norm(a) <= target:
            break
        for p, q in rounds:
            apq = a[p, q]
            r = np.abs(apq)
            active = r > 0.0
            safe_r = np.where(active, r, 1.0)
            phase = np.where(active, apq / safe_r, 1.0)
            app = a[p, p].real
            aqq = a[q, q].real
            tau = (aqq - app) / (2.0 * safe_r)
            sign = np.where(tau >= 0.0, 1.0, -1.0)
            t = np.where(active, sign / (np.abs(tau) + np.sqrt(1.0 + tau * tau)), 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # G = diag(1, conj(phase)) @ [[c, s], [-s, c]]
            g00 = c
            g01 = s
            g10 = -s * np.conj(phase)
            g11 = c * np.conj(phase)
            cp = a[:, p].copy()
            cq = a[:, q]
            a[:, p] = cp * g00 + cq * g10
            a[:, q] = cp * g01 + cq * g11
            rp = a[p, :].copy()
            rq = a[q, :]
            a[p, :] = np.conj(g00)[:, None] * rp + np.conj(g10)[:, None] * rq
            a[q, :] = np.conj(g01)[:, None] * rp + np.conj(g11)[:, None] * rq
            a[p, q] = 0.0
            a[q, p] = 0.0
            if vecs is not None:
                vp = vecs[:, p].copy()
                vq = vecs[:, q]
                vecs[:, p] = vp * g00 + vq * g10
                vecs[:, q] = vp * g01 + vq * g11
    else:
        if _off_norm(a) > target:
            raise NumericalError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    return np.real(np.diag(a)).copy(), vecs


def _check_hermitian(h: np.ndarray, tol: Tol) -> None:
    if h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got {h.shape}")
    defect = hermitian_defect(h)
    if defect > tol.threshold(float(np.linalg.norm(h))):
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")


def _sorted_eigh(h: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    w, q = _jacobi(h, want_vectors=True)
    order = np.argsort(w, kind="stable")
    return w[order], q[:, order]


def eigh(h, tol: Tol = DEFAULT_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and unitary eigenvectors of a Hermitian matrix.

    Returns ``(w, q)`` with ``h ~= q @ diag(w) @ q^*``.
    """
    h = as_cmat(h, "h")
    _check_hermitian(h, tol)
    return _sorted_eigh(h)


def hermitian_eigvals(h, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted ascending."""
    h = as_cmat(h, "h")
    _check_hermitian(h, tol)
    w, _ = _jacobi(h, want_vectors=False)
    return np.sort(w)


def is_psd(h, tol: Tol = DEFAULT_TOL) -> bool:
    """True iff ``h`` is Hermitian (within tol) with no eigenvalue below
    ``-tol.psd_slack * max(1, ||h||)``."""
    h = as_cmat(h, "h")
    if h.shape[0] != h.shape[1]:
        return False
    try:
        w = hermitian_eigvals(h, tol)
    except ValueError:
        return False
    norm = float(np.max(np.abs(w)))
    return bool(w[0] >= -tol.psd_slack * max(1.0, norm))


def singular_values(m) -> np.ndarray:
    """Singular values in descending order, via eigenvalues of the smaller Gram matrix."""
    m = as_cmat(m, "m")
    gram = m.conj().T @ m if m.shape[1] <= m.shape[0] else m @ m.conj().T
    w = np.sort(_jacobi(gram, want_vectors=False)[0])
    return np.sqrt(np.clip(w, 0.0, None))[::-1]


def operator_norm(m) -> float:
    """Spectral norm (largest singular value)."""
    return float(singular_values(m)[0])


def matrix_rank(m, tol: Tol = DEFAULT_TOL) -> int:
    """Number of singular values above ``max(tol.rel, sqrt(eps)) * sigma_max``.

    Singular values come from a Gram matrix, so anything below roughly
    ``sqrt(eps) * sigma_max`` is round-off.
    """
    s = singular_values(m)
    if s[0] == 0.0:
        return 0
    cutoff = max(tol.rel, math.sqrt(np.finfo(float).eps)) * s[0]
    return int(np.count_nonzero(s > cutoff))


def lstsq(a, b, tol: Tol = DEFAULT_TOL) -> Tuple[np.ndarray, float]:
    """Minimum-norm least-squares solution of ``a @ x = b``.

    Solved through the normal equations with a truncated pseudo-inverse.
    Returns ``(x, residual)`` where residual is ``||a x - b||_F``.
    """
    a = as_cmat(a, "a")
    b = as_cmat(b, "b")
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"row mismatch: a is {a.shape}, b is {b.shape}")
    w, q = _sorted_eigh(a.conj().T @ a)
    lam_max = max(float(w[-1]), 0.0)
    if lam_max == 0.0:
        x = np.zeros((a.shape[1], b.shape[1]), dtype=np.complex128)
    else:
        floor = a.shape[1] * np.finfo(float).eps * lam_max
        keep = w > max((tol.rel ** 2) * lam_max, floor)
        qk = q[:, keep]
        x = qk @ ((qk.conj().T @ (a.conj().T @ b)) / w[keep][:, None])
    residual = float(np.linalg.norm(a @ x - b))
    return x, residual
