"""Perturbation semigroup elements over the Toeplitz system.

An element ``sum_i a_i (x) b_i^o`` is stored as its Kronecker matrix
``omega = sum_i kron(a_i, b_i.T)`` (the opposite algebra is realized by
transposition), optionally together with the family ``{(a_i, b_i)}``.
It induces the elementary operator ``phi(x) = sum_i a_i x b_i``.

The Kronecker matrix acts on vectorized input as

    omega @ vec(y) = vec(sum_i b_i.T y a_i.T) = vec(phi(y.T).T)

so with only ``omega`` at hand, ``phi(x) = unvec(omega @ vec(x.T)).T``.
Applied to the columns vec(tau_j) of ``delta`` this gives
``omega @ delta = delta @ conj(W)`` for the map matrix ``W`` of a
Hermitian phi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .gauge import GaugeElement, random_gauge
from .linalg import (
    DEFAULT_TOL,
    NumericalError,
    Tol,
    as_cmat,
    eigh,
    gamma,
    hermitian_defect,
    is_psd,
    lstsq,
    unvec,
    vec,
)
from .toeplitz import ToeplitzSystem, delta, project, tau, toeplitz_residual

__all__ = [
    "KrausFamily",
    "PertElement",
    "MapMatrixW",
    "Conditions",
    "NotInvariantError",
    "omega_from_family",
    "apply_map",
    "apply_map_omega",
    "check_conditions",
    "is_pert",
    "is_pert_plus",
    "w_from_map",
    "w_from_omega_solve",
    "kraus_from_choi",
    "family_from_hermitian_choi",
    "elementary_family",
    "toep2_parametrized",
    "gauge_pert",
    "transpose_pert",
    "diagonal_compression",
    "random_pert_plus",
    "random_pert",
]

# Stored omega must match its family to this relative accuracy.
_FAMILY_MATCH = 1e-12


class NotInvariantError(NumericalError):
    """The induced map sends some Toeplitz matrix outside the Toeplitz system."""


@dataclass(frozen=True)
class KrausFamily:
    n: int
    pairs: Tuple[Tuple[np.ndarray, np.ndarray], ...]

    def __post_init__(self):
        pairs = tuple((as_cmat(a, "a"), as_cmat(b, "b")) for a, b in self.pairs)
        if not pairs:
            raise ValueError("a Kraus family needs at least one pair")
        for a, b in pairs:
            if a.shape != (self.n, self.n) or b.shape != (self.n, self.n):
                raise ValueError(f"family entries must be {self.n}x{self.n}, got {a.shape} and {b.shape}")
        object.__setattr__(self, "pairs", pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def omega(self) -> np.ndarray:
        return sum(np.kron(a, b.T) for a, b in self.pairs)

    def adjoint_pairs(self) -> "KrausFamily":
        """The family ``{(b_i^*, a_i^*)}``; equal omega means symmetric."""
        return KrausFamily(self.n, tuple((b.conj().T, a.conj().T) for a, b in self.pairs))


@dataclass(frozen=True)
class PertElement:
    n: int
    omega: np.ndarray
    family: Optional[KrausFamily] = None

    def __post_init__(self):
        omega = as_cmat(self.omega, "omega")
        if omega.shape != (self.n**2, self.n**2):
            raise ValueError(f"omega must be {self.n**2}x{self.n**2}, got {omega.shape}")
        if self.family is not None:
            if self.family.n != self.n:
                raise ValueError("family size does not match n")
            mismatch = np.linalg.norm(self.family.omega() - omega)
            if mismatch > _FAMILY_MATCH * max(1.0, float(np.linalg.norm(omega))):
                raise ValueError(f"omega does not match its family (mismatch {mismatch:.3e})")
        object.__setattr__(self, "omega", omega)

    @classmethod
    def from_omega(cls, omega) -> "PertElement":
        omega = as_cmat(omega, "omega")
        n = math.isqrt(omega.shape[0])
        return cls(n, omega)

    def __matmul__(self, other: "PertElement") -> "PertElement":
        """Semigroup product; the induced map is ``phi_self . phi_other``."""
        if not isinstance(other, PertElement):
            return NotImplemented
        if other.n != self.n:
            raise ValueError("elements of different size")
        family = None
        if self.family is not None and other.family is not None:
            family = KrausFamily(
                self.n,
                tuple((a @ a2, b2 @ b) for a, b in self.family.pairs for a2, b2 in other.family.pairs),
            )
        return PertElement(self.n, self.omega @ other.omega, family)


@dataclass(frozen=True)
class MapMatrixW:
    """Matrix of a map on Toep_n in the tau basis: phi(tau_j) = sum_i w[i, j] tau_i.

    Rows and columns run over k = -n+1 .. n-1 (array index k + n - 1).
    No invariants are enforced at construction; see :meth:`is_unital` and
    :meth:`is_hermitian_symmetric`.
    """

    n: int
    w: np.ndarray

    def __post_init__(self):
        w = as_cmat(self.w, "w")
        if w.shape != (2 * self.n - 1, 2 * self.n - 1):
            raise ValueError(f"W must be {2 * self.n - 1}x{2 * self.n - 1}, got {w.shape}")
        object.__setattr__(self, "w", w)

    def entry(self, i: int, j: int) -> complex:
        return complex(self.w[i + self.n - 1, j + self.n - 1])

    def unital_residual(self) -> float:
        e0 = np.zeros(2 * self.n - 1)
        e0[self.n - 1] = 1.0
        return float(np.linalg.norm(self.w[:, self.n - 1] - e0))

    def hermitian_residual(self) -> float:
        # w[i, j] == conj(w[-i, -j])  <=>  W == conj(F W F), F the flip
        flipped = self.w[::-1, ::-1].conj()
        return float(np.linalg.norm(self.w - flipped))

    def is_unital(self, tol: Tol = DEFAULT_TOL) -> bool:
        return self.unital_residual() <= tol.threshold(1.0)

    def is_hermitian_symmetric(self, tol: Tol = DEFAULT_TOL) -> bool:
        return self.hermitian_residual() <= tol.threshold(float(np.linalg.norm(self.w)))


@dataclass(frozen=True)
class Conditions:
    unital: bool
    invariant: bool
    symmetric: bool
    unital_residual: float
    invariant_residual: float
    symmetric_residual: float

    def __bool__(self) -> bool:
        return self.unital and self.invariant and self.symmetric


def omega_from_family(f: KrausFamily) -> PertElement:
    return PertElement(f.n, f.omega(), f)


def _check_input(x, n: int) -> np.ndarray:
    x = as_cmat(x, "x")
    if x.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got {x.shape}")
    return x


def apply_map_omega(p: PertElement, x) -> np.ndarray:
    """phi(x) computed from the Kronecker matrix alone."""
    x = _check_input(x, p.n)
    return unvec(p.omega @ vec(x.T), p.n, p.n).T


def apply_map(p: PertElement, x) -> np.ndarray:
    """phi(x) = sum_i a_i x b_i, from the family when one is attached."""
    x = _check_input(x, p.n)
    if p.family is None:
        return apply_map_omega(p, x)
    return sum(a @ x @ b for a, b in p.family.pairs)


def check_conditions(p: PertElement, tol: Tol = DEFAULT_TOL) -> Conditions:
    """Evaluate the three membership conditions.

    unital: phi(I) = I. invariant: phi(tau_k) is Toeplitz for every k.
    symmetric: gamma(omega) is Hermitian, the matrix form of
    ``sum a_i (x) b_i^o = sum b_i^* (x) a_i^*o``.
    """
    n = p.n
    sys = ToeplitzSystem(n)
    eye = np.eye(n, dtype=np.complex128)
    unital_res = float(np.linalg.norm(apply_map(p, eye) - eye))
    invariant_res = 0.0
    invariant_ok = True
    for k in sys.offsets:
        image = apply_map(p, tau(n, k))
        res = toeplitz_residual(image, sys)
        invariant_res = max(invariant_res, res)
        invariant_ok &= res <= tol.threshold(float(np.linalg.norm(image)))
    g = gamma(p.omega)
    sym_res = hermitian_defect(g)
    return Conditions(
        unital=unital_res <= tol.threshold(math.sqrt(n)),
        invariant=bool(invariant_ok),
        symmetric=sym_res <= tol.threshold(float(np.linalg.norm(g))),
        unital_residual=unital_res,
        invariant_residual=invariant_res,
        symmetric_residual=sym_res,
    )


def is_pert(p: PertElement, tol: Tol = DEFAULT_TOL) -> bool:
    return bool(check_conditions(p, tol))


def is_pert_plus(p: PertElement, tol: Tol = DEFAULT_TOL) -> bool:
    return is_pert(p, tol) and is_psd(gamma(p.omega), tol)


def w_from_map(p: PertElement, tol: Tol = DEFAULT_TOL) -> MapMatrixW:
    """Map matrix from the images phi(tau_j), projected onto the tau basis."""
    n = p.n
    sys = ToeplitzSystem(n)
    cols = []
    for j in sys.offsets:
        image = apply_map(p, tau(n, j))
        res = toeplitz_residual(image, sys)
        if res > tol.threshold(float(np.linalg.norm(image))):
            raise NotInvariantError(f"phi(tau_{j}) is not Toeplitz (residual {res:.3e})")
        cols.append(project(image, sys).diag)
    return MapMatrixW(n, np.column_stack(cols))


def w_from_omega_solve(p: PertElement, tol: Tol = DEFAULT_TOL) -> MapMatrixW:
    """Map matrix from ``omega @ delta = delta @ conj(W)`` by least squares."""
    d = delta(p.n)
    rhs = p.omega @ d
    x, residual = lstsq(d, rhs, tol)
    if residual > tol.threshold(float(np.linalg.norm(rhs))):
        raise NotInvariantError(f"omega does not preserve span(delta) (residual {residual:.3e})")
    return MapMatrixW(p.n, x.conj())


def _row_matrix(v: np.ndarray, n: int) -> np.ndarray:
    # gamma(kron(A, conj(A))) = r r^* with r = A.ravel() (row-major)
    return v.reshape(n, n)


def family_from_hermitian_choi(c, tol: Tol = DEFAULT_TOL) -> KrausFamily:
    """Signed family ``{(s_v A_v, +-s_v A_v^*)}`` from the eigenvectors of a
    Hermitian ``c = gamma(omega)``. Eigenvalues with modulus at most
    ``tol.psd_slack * max(1, ||c||)`` are dropped."""
    c = as_cmat(c, "c")
    n = math.isqrt(c.shape[0])
    if n * n != c.shape[0] or c.shape[0] != c.shape[1]:
        raise ValueError(f"expected an n^2 x n^2 matrix, got {c.shape}")
    w, q = eigh(c, tol)
    cutoff = tol.psd_slack * max(1.0, float(np.max(np.abs(w))))
    pairs = []
    for lam, v in zip(w[::-1], q[:, ::-1].T):
        if abs(lam) <= cutoff:
            continue
        a = math.sqrt(abs(lam)) * _row_matrix(v, n)
        pairs.append((a, math.copysign(1.0, lam) * a.conj().T))
    if not pairs:
        pairs.append((np.zeros((n, n)), np.zeros((n, n))))
    return KrausFamily(n, tuple(pairs))


def kraus_from_choi(c, tol: Tol = DEFAULT_TOL) -> KrausFamily:
    """Kraus family ``{(A_v, A_v^*)}`` with ``gamma(sum kron(A_v, conj(A_v))) = c``.

    ``c`` must be positive semidefinite. Each eigenpair ``(lam, v)`` with
    ``lam`` above the slack gives ``A_v = sqrt(lam) * v`` reshaped row-major
    (equivalently ``unvec(sqrt(lam) v).T``).
    """
    c = as_cmat(c, "c")
    if not is_psd(c, tol):
        raise ValueError("Choi input is not positive semidefinite")
    return family_from_hermitian_choi(c, tol)


def elementary_family(omega) -> KrausFamily:
    """Matrix-unit expansion ``omega = sum t kron(E_ir, E_js)``, valid for any omega."""
    omega = as_cmat(omega, "omega")
    n = math.isqrt(omega.shape[0])
    t = omega.reshape(n, n, n, n)  # t[i, j, r, s] = omega[[i,j],[r,s]]
    pairs = []
    for i, j, r, s in zip(*np.nonzero(t)):
        a = np.zeros((n, n), dtype=np.complex128)
        b = np.zeros((n, n), dtype=np.complex128)
        a[i, r] = t[i, j, r, s]
        b[s, j] = 1.0  # kron(a, b.T) needs b.T = E_js
        pairs.append((a, b))
    if not pairs:
        pairs.append((np.zeros((n, n)), np.zeros((n, n))))
    return KrausFamily(n, tuple(pairs))


def toep2_parametrized(a, b, c, z1, z2, z4, z3=None) -> PertElement:
    """The general element of Pert(Toep_2) with map matrix
    ``W = [[a, 0, conj(c)], [b, 1, conj(b)], [c, 0, conj(a)]]``.

    Symmetric exactly when z2, z4 are real and ``z3 == conj(z1)``, which is
    the default; pass ``z3`` explicitly to build a raw, possibly invalid,
    matrix.
    """
    a, b, c, z1, z2, z4 = (complex(v) for v in (a, b, c, z1, z2, z4))
    z3 = np.conj(z1) if z3 is None else complex(z3)
    omega = np.array(
        [
            [1 - z2, np.conj(b), b, z2],
            [-z1, np.conj(a), c, z1],
            [-z3, np.conj(c), a, z3],
            [1 - z2 - z4, np.conj(b), b, z2 + z4],
        ],
        dtype=np.complex128,
    )
    return PertElement(2, omega)


def gauge_pert(g: GaugeElement) -> PertElement:
    """``u^* (x) u^o`` for a gauge unitary u; induces x -> u^* x u."""
    u = g.matrix()
    return omega_from_family(KrausFamily(g.n, ((u.conj().T, u),)))


def transpose_pert(n: int) -> PertElement:
    """``sum_ij E_ij (x) E_ij^o``: the transpose on all of M_n."""
    pairs = []
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n), dtype=np.complex128)
            e[i, j] = 1.0
            pairs.append((e, e))
    return omega_from_family(KrausFamily(n, tuple(pairs)))


def diagonal_compression(n: int) -> PertElement:
    """``sum_i E_ii (x) E_ii^o``: keeps the main diagonal, which maps Toep_n into C I."""
    pairs = []
    for i in range(n):
        e = np.zeros((n, n), dtype=np.complex128)
        e[i, i] = 1.0
        pairs.append((e, e))
    return omega_from_family(KrausFamily(n, tuple(pairs)))


def _mixture(n: int, weights: Sequence[float], parts: Sequence[PertElement]) -> PertElement:
    pairs = []
    for wgt, part in zip(weights, parts):
        # pair (s a, sign s b) scales the term by wgt while keeping (b^*, a^*) symmetry
        s = math.sqrt(abs(wgt))
        sign = math.copysign(1.0, wgt)
        pairs.extend((s * a, sign * s * b) for a, b in part.family.pairs)
    return omega_from_family(KrausFamily(n, tuple(pairs)))


def _random_parts(n: int, rng: np.random.Generator, terms: int):
    parts = [gauge_pert(random_gauge(n, rng)) for _ in range(terms)]
    if n > 1 and rng.random() < 0.3:
        parts.append(diagonal_compression(n))
    return parts


def random_pert_plus(n: int, rng: np.random.Generator, terms: int = 3) -> PertElement:
    """Convex combination of gauge conjugations (sometimes with the diagonal
    compression): a unital completely positive element."""
    parts = _random_parts(n, rng, terms)
    weights = rng.dirichlet(np.ones(len(parts)))
    return _mixture(n, weights, parts)


def random_pert(n: int, rng: np.random.Generator, terms: int = 3) -> PertElement:
    """Real affine combination (weights sum to 1, signs mixed) of gauge
    conjugations and the full transpose: symmetric, unital and invariant,
    but in general not completely positive."""
    parts = _random_parts(n, rng, terms)
    if rng.random() < 0.5:
        parts.append(transpose_pert(n))
    weights = rng.normal(size=len(parts))
    weights[0] += 1.0 - weights.sum()
    return _mixture(n, weights, parts)
