"""Norm diagnostics for perturbation elements.

The Haagerup norm is an infimum over all representations and is not
computed exactly. Reports bracket it: the operator norm of the Kronecker
matrix sits below it, the value of a given representation above it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .linalg import DEFAULT_TOL, Tol, gamma, hermitian_defect, is_psd, operator_norm
from .pert import (
    KrausFamily,
    MapMatrixW,
    PertElement,
    apply_map,
    elementary_family,
    family_from_hermitian_choi,
)
from .toeplitz import delta

__all__ = [
    "UcpCondition",
    "NormReport",
    "haagerup_upper",
    "min_norm",
    "cb_exact_cp",
    "amplify",
    "cb_witnesses",
    "cb_lower",
    "ucp_condition",
    "norm_report",
]


@dataclass(frozen=True)
class UcpCondition:
    lhs: float
    rhs: float
    holds: bool


@dataclass
class NormReport:
    min_norm: float
    haagerup_upper: float
    cb_lower: float
    ucp_condition: Optional[UcpCondition]
    cb_exact: Optional[float] = None
    flags: List[str] = field(default_factory=list)


def haagerup_upper(f: KrausFamily) -> float:
    """``||sum a a^*||^(1/2) ||sum b^* b||^(1/2)`` for this representation."""
    left = sum(a @ a.conj().T for a, _ in f.pairs)
    right = sum(b.conj().T @ b for _, b in f.pairs)
    return float(np.sqrt(operator_norm(left)) * np.sqrt(operator_norm(right)))


def min_norm(p: PertElement) -> float:
    """Operator norm of the n^2 x n^2 Kronecker matrix."""
    return operator_norm(p.omega)


def cb_exact_cp(p: PertElement, tol: Tol = DEFAULT_TOL) -> float:
    """cb norm of a completely positive induced map, ``||phi(I)||``.

    Requires gamma(omega) to be positive semidefinite; unitality is not
    required.
    """
    if not is_psd(gamma(p.omega), tol):
        raise ValueError("cb_exact_cp needs a completely positive element (gamma(omega) PSD)")
    return operator_norm(apply_map(p, np.eye(p.n)))


def amplify(p: PertElement, x: np.ndarray) -> np.ndarray:
    """(phi (x) id_k)(x) for a kn x kn input, applying phi to each n x n block."""
    n = p.n
    size = x.shape[0]
    if x.shape != (size, size) or size % n:
        raise ValueError(f"input side {x.shape} is not a multiple of n={n}")
    k = size // n
    out = np.empty_like(x, dtype=np.complex128)
    for i in range(k):
        for j in range(k):
            out[i * n:(i + 1) * n, j * n:(j + 1) * n] = apply_map(p, x[i * n:(i + 1) * n, j * n:(j + 1) * n])
    return out


def cb_witnesses(n: int, level: int) -> List[np.ndarray]:
    """Deterministic test inputs at one amplification level.

    The identity, and for ``m = min(n, level)`` the two matrix-unit
    patterns with block (i, j) equal to E_ij (the entangled projector,
    scaled by m) and to E_ji (the flip, operator norm 1). The flip is the
    one that exposes the transpose: its image under transpose (x) id is
    the entangled projector, of norm m.
    """
    size = level * n
    m = min(n, level)
    straight = np.zeros((size, size), dtype=np.complex128)
    flip = np.zeros((size, size), dtype=np.complex128)
    for i in range(m):
        for j in range(m):
            straight[i * n + i, j * n + j] = 1.0
            flip[i * n + j, j * n + i] = 1.0
    return [np.eye(size, dtype=np.complex128), straight, flip]


def cb_lower(p: PertElement, level: int = 2, trials: int = 32, seed: int = 0) -> float:
    """Lower bound on the cb norm from sampled amplifications.

    Maximizes ``||(phi (x) id_k)(X)|| / ||X||`` over the witnesses of
    :func:`cb_witnesses` and ``trials`` Gaussian inputs for each level
    ``k = 1 .. level``. Level k draws from its own stream of ``seed``, so
    raising ``level`` only adds samples and the bound never decreases.
    """
    if level < 1:
        raise ValueError(f"level must be >= 1, got {level}")
    best = 0.0
    for k in range(1, level + 1):
        rng = np.random.default_rng([seed, k])
        size = k * p.n
        samples = cb_witnesses(p.n, k)
        for _ in range(trials):
            x = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
            samples.append(x / operator_norm(x))
        for x in samples:
            denom = operator_norm(x)
            if denom > 0:
                best = max(best, operator_norm(amplify(p, x)) / denom)
    return best


def ucp_condition(w: MapMatrixW, tol: Tol = DEFAULT_TOL) -> UcpCondition:
    """Necessary condition for a UCP map: ``||delta conj(W)|| <= ||delta||``."""
    d = delta(w.n)
    lhs = operator_norm(d @ w.w.conj())
    rhs = operator_norm(d)
    return UcpCondition(lhs=lhs, rhs=rhs, holds=lhs <= rhs + tol.threshold(rhs))


def norm_report(
    p: PertElement,
    tol: Tol = DEFAULT_TOL,
    level: Optional[int] = None,
    trials: int = 32,
    seed: int = 0,
    w: Optional[MapMatrixW] = None,
) -> NormReport:
    """All norm diagnostics for one element.

    Without an attached family, the Haagerup bound uses the eigenvector
    family of a Hermitian gamma(omega), or else the matrix-unit expansion.
    A gap between ``min_norm`` and ``haagerup_upper`` is flagged, never
    treated as an error.
    """
    family = p.family
    if family is None:
        g = gamma(p.omega)
        if hermitian_defect(g) <= tol.threshold(float(np.linalg.norm(g))):
            family = family_from_hermitian_choi(g, tol)
        else:
            family = elementary_family(p.omega)
    report = NormReport(
        min_norm=min_norm(p),
        haagerup_upper=haagerup_upper(family),
        cb_lower=cb_lower(p, level or p.n, trials, seed),
        ucp_condition=ucp_condition(w, tol) if w is not None else None,
    )
    if is_psd(gamma(p.omega), tol):
        report.cb_exact = cb_exact_cp(p, tol)
    if report.haagerup_upper - report.min_norm > tol.threshold(report.min_norm):
        report.flags.append("min_norm_below_haagerup_upper")
    return report
