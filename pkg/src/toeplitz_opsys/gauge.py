"""Gauge group of the Toeplitz system: unitaries u with u^* Toep_n u = Toep_n.

Every such unitary is diagonal, ``U(alpha, beta)``, or anti-diagonal,
``V @ U(alpha, beta)``, where

    U(alpha, beta) = diag(alpha, beta, conj(alpha) beta^2, ..., conj(alpha)^(n-2) beta^(n-1))

and V is the flip (anti-identity). On Toeplitz input the conjugation
action reduces to a Schur product with the phase mask ``Omega_w``,
``w = alpha * conj(beta)``:

    U^* T U       = Omega_w * T
    U^* V^* T V U = Omega_w * T.T
    V^* U^* T U V = Omega_conj(w) * T.T
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import List

import numpy as np

from .linalg import DEFAULT_TOL, Tol, as_cmat, schur
from .toeplitz import ToeplitzSystem, is_member, tau, toeplitz_residual

__all__ = [
    "Kind",
    "GaugeElement",
    "OmegaMultiplier",
    "ClassificationError",
    "UNIMODULAR_TOL",
    "u_alpha_beta",
    "v_flip",
    "unitarity_defect",
    "gauge_residual",
    "is_gauge",
    "classify",
    "act",
    "act_schur",
    "random_unimodular",
    "random_gauge",
    "random_toeplitz",
    "CheckResult",
    "GroupCheckReport",
    "group_checks",
]

UNIMODULAR_TOL = 1e-12


class ClassificationError(ValueError):
    """The matrix is neither of the form U(alpha, beta) nor V U(alpha, beta)."""


class Kind(str, enum.Enum):
    DIAGONAL = "Diagonal"
    ANTIDIAGONAL = "AntiDiagonal"


def _unimodular(z, name: str) -> complex:
    z = complex(z)
    if abs(abs(z) - 1.0) > UNIMODULAR_TOL:
        raise ValueError(f"{name} must have modulus 1, got |{name}| = {abs(z)!r}")
    return z / abs(z)


def u_alpha_beta(n: int, alpha: complex, beta: complex) -> np.ndarray:
    a = _unimodular(alpha, "alpha")
    b = _unimodular(beta, "beta")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    # entry i (1-based) is conj(a)^(i-2) b^(i-1) = a (conj(a) b)^(i-1)
    step = a.conjugate() * b
    return np.diag([a * step**i for i in range(n)]).astype(np.complex128)


def v_flip(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return np.fliplr(np.eye(n, dtype=np.complex128)).copy()


@dataclass(frozen=True)
class OmegaMultiplier:
    """Phase mask with entry (i, j) = omega^(i-j), negative powers conjugated."""

    n: int
    omega: complex

    def __post_init__(self):
        object.__setattr__(self, "omega", _unimodular(self.omega, "omega"))

    def matrix(self) -> np.ndarray:
        idx = np.arange(self.n)
        d = idx[:, None] - idx[None, :]
        w = self.omega
        return np.where(d >= 0, w ** np.abs(d), np.conj(w) ** np.abs(d)).astype(np.complex128)


@dataclass(frozen=True)
class GaugeElement:
    n: int
    kind: Kind
    alpha: complex
    beta: complex

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "alpha", _unimodular(self.alpha, "alpha"))
        object.__setattr__(self, "beta", _unimodular(self.beta, "beta"))

    @property
    def omega(self) -> complex:
        return self.alpha * self.beta.conjugate()

    def matrix(self) -> np.ndarray:
        u = u_alpha_beta(self.n, self.alpha, self.beta)
        if self.kind is Kind.ANTIDIAGONAL:
            return v_flip(self.n) @ u
        return u

    def __matmul__(self, other: "GaugeElement") -> "GaugeElement":
        if not isinstance(other, GaugeElement):
            return NotImplemented
        if other.n != self.n:
            raise ValueError("gauge elements of different size")
        return classify(self.matrix() @ other.matrix())


def unitarity_defect(u) -> float:
    u = as_cmat(u, "u")
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[0])))


def gauge_residual(u, sys: ToeplitzSystem) -> float:
    """Largest Toeplitz residual of u^* tau_k u over the basis."""
    u = as_cmat(u, "u")
    if u.shape != (sys.n, sys.n):
        raise ValueError(f"expected a {sys.n}x{sys.n} matrix, got {u.shape}")
    uh = u.conj().T
    return max(toeplitz_residual(uh @ tau(sys.n, k) @ u, sys) for k in sys.offsets)


def is_gauge(u, sys: ToeplitzSystem, tol: Tol = DEFAULT_TOL) -> bool:
    u = as_cmat(u, "u")
    if u.shape != (sys.n, sys.n):
        raise ValueError(f"expected a {sys.n}x{sys.n} matrix, got {u.shape}")
    scale = float(np.sqrt(sys.n))
    if unitarity_defect(u) > tol.threshold(scale):
        return False
    # conjugation preserves Frobenius norms, so ||u^* tau_k u||_F <= sqrt(n)
    return gauge_residual(u, sys) <= tol.threshold(scale)


def _diagonal_params(d: np.ndarray, tol: Tol):
    n = d.shape[0]
    scale = float(np.sqrt(n))
    if np.linalg.norm(d - np.diag(np.diag(d))) > tol.threshold(scale):
        return None
    entries = np.diag(d)
    if np.any(np.abs(entries) == 0):
        return None
    alpha = entries[0] / abs(entries[0])
    beta = entries[1] / abs(entries[1]) if n > 1 else 1.0 + 0j
    if np.linalg.norm(u_alpha_beta(n, alpha, beta) - d) > tol.threshold(scale):
        return None
    return complex(alpha), complex(beta)


def classify(u, tol: Tol = DEFAULT_TOL) -> GaugeElement:
    """Identify u as ``U(alpha, beta)`` or ``V U(alpha, beta)``.

    alpha and beta are read from fixed entries, then the whole phase chain
    is checked; a mismatch raises :class:`ClassificationError`.
    """
    u = as_cmat(u, "u")
    n = u.shape[0]
    if u.shape != (n, n):
        raise ValueError(f"expected a square matrix, got {u.shape}")
    params = _diagonal_params(u, tol)
    if params is not None:
        return GaugeElement(n, Kind.DIAGONAL, *params)
    params = _diagonal_params(v_flip(n) @ u, tol)
    if params is not None:
        return GaugeElement(n, Kind.ANTIDIAGONAL, *params)
    raise ClassificationError("matrix is neither U(alpha, beta) nor V U(alpha, beta)")


def _check_toeplitz(t, n: int, tol: Tol) -> np.ndarray:
    t = as_cmat(t, "t")
    if t.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got {t.shape}")
    if not is_member(t, ToeplitzSystem(n), tol):
        raise ValueError("input is not a Toeplitz matrix")
    return t


def act(g: GaugeElement, t, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """Conjugation action ``u^* t u`` with ``u = g.matrix()``."""
    t = _check_toeplitz(t, g.n, tol)
    u = g.matrix()
    return u.conj().T @ t @ u


def act_schur(g: GaugeElement, t, tol: Tol = DEFAULT_TOL) -> np.ndarray:
    """The same action as :func:`act`, computed as a Schur product with Omega."""
    t = _check_toeplitz(t, g.n, tol)
    mask = OmegaMultiplier(g.n, g.omega).matrix()
    if g.kind is Kind.ANTIDIAGONAL:
        return schur(mask, t.T)
    return schur(mask, t)


def random_unimodular(rng: np.random.Generator) -> complex:
    return complex(np.exp(2j * np.pi * rng.random()))


def random_gauge(n: int, rng: np.random.Generator) -> GaugeElement:
    kind = Kind.ANTIDIAGONAL if rng.random() < 0.5 else Kind.DIAGONAL
    return GaugeElement(n, kind, random_unimodular(rng), random_unimodular(rng))


def random_toeplitz(n: int, rng: np.random.Generator) -> np.ndarray:
    c = rng.normal(size=2 * n - 1) + 1j * rng.normal(size=2 * n - 1)
    return sum(c[k + n - 1] * np.eye(n, k=k) for k in range(-n + 1, n)).astype(np.complex128)


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float


@dataclass
class GroupCheckReport:
    n: int
    trials: int
    seed: int
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def group_checks(n: int, trials: int = 100, seed: int = 0, tol: Tol = DEFAULT_TOL) -> GroupCheckReport:
    """Randomized check of the generator relations of G(Toep_n).

    Checks: closure of generator words, the kernel ``U(a, a)`` acting
    trivially, ``transpose . Omega_w . transpose = Omega_conj(w)`` as
    actions, and agreement of conjugation with the Schur-product formulas.
    Each trial draws from its own child seed, so reports do not depend on
    evaluation order.
    """
    if n < 2:
        raise ValueError("group checks need n >= 2")
    sys = ToeplitzSystem(n)
    children = np.random.SeedSequence(seed).spawn(trials)
    closure = kernel = semidirect = schur_eq = homomorphism = 0.0
    closure_ok = True
    for child in children:
        rng = np.random.default_rng(child)
        t = random_toeplitz(n, rng)
        scale = float(np.linalg.norm(t))

        word = [random_gauge(n, rng) for _ in range(int(rng.integers(1, 7)))]
        u = np.eye(n, dtype=np.complex128)
        for g in word:
            u = u @ g.matrix()
        if not is_gauge(u, sys, tol):
            closure_ok = False
        try:
            closure = max(closure, float(np.linalg.norm(classify(u, tol).matrix() - u)))
        except ClassificationError:
            closure_ok = False

        a = random_unimodular(rng)
        kernel = max(kernel, float(np.linalg.norm(act(GaugeElement(n, Kind.DIAGONAL, a, a), t, tol) - t)) / scale)

        w = OmegaMultiplier(n, random_unimodular(rng))
        lhs = schur(w.matrix(), t.T).T
        rhs = schur(OmegaMultiplier(n, np.conj(w.omega)).matrix(), t)
        semidirect = max(semidirect, float(np.linalg.norm(lhs - rhs)) / scale)

        g = random_gauge(n, rng)
        schur_eq = max(schur_eq, float(np.linalg.norm(act(g, t, tol) - act_schur(g, t, tol))) / scale)

        g2 = random_gauge(n, rng)
        u1, u2 = g.matrix(), g2.matrix()
        both = (u1 @ u2).conj().T @ t @ (u1 @ u2)
        nested = u2.conj().T @ (u1.conj().T @ t @ u1) @ u2
        homomorphism = max(homomorphism, float(np.linalg.norm(both - nested)) / scale)

    limit = tol.threshold(1.0)
    report = GroupCheckReport(n=n, trials=trials, seed=seed)
    report.checks = [
        CheckResult("closure", closure_ok and closure <= tol.threshold(np.sqrt(n)), closure),
        CheckResult("kernel", kernel <= limit, kernel),
        CheckResult("semidirect", semidirect <= limit, semidirect),
        CheckResult("schur_action", schur_eq <= limit, schur_eq),
        CheckResult("homomorphism", homomorphism <= limit, homomorphism),
    ]
    return report
