"""Published worked examples for the Toeplitz system, as executable checks.

Each check returns a residual (0 when exact); :func:`run_all` compares
it against the check's limit.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List

import numpy as np

from .gauge import GaugeElement, Kind, act, classify, is_gauge, random_toeplitz, u_alpha_beta, v_flip
from .linalg import gamma, is_psd, kron, matrix_rank, unvec, vec
from .norms import cb_exact_cp, cb_lower, haagerup_upper, min_norm, ucp_condition
from .pert import (
    KrausFamily,
    PertElement,
    apply_map,
    check_conditions,
    diagonal_compression,
    gauge_pert,
    is_pert,
    is_pert_plus,
    kraus_from_choi,
    omega_from_family,
    random_pert_plus,
    toep2_parametrized,
    transpose_pert,
    w_from_map,
    w_from_omega_solve,
)
from .toeplitz import ToeplitzSystem, delta, tau, truncate

__all__ = ["ExampleResult", "EXAMPLES", "run_all"]


@dataclass
class ExampleResult:
    name: str
    passed: bool
    residual: float


def _unit(n, i, j):
    e = np.zeros((n, n), dtype=np.complex128)
    e[i, j] = 1.0
    return e


def _flip2():
    return _unit(2, 0, 1) + _unit(2, 1, 0)


def _omega1():
    return transpose_pert(2)


def _omega2():
    x = _flip2()
    return omega_from_family(KrausFamily(2, ((x, x),)))


def _err(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))))


def vec_3x3_order():
    t = np.arange(1, 10).reshape(3, 3)
    expected = [t[0, 0], t[1, 0], t[2, 0], t[0, 1], t[1, 1], t[2, 1], t[0, 2], t[1, 2], t[2, 2]]
    return _err(vec(t).ravel(), expected)


def vec_kron_identity():
    rng = np.random.default_rng(11)
    a, b, x = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(3))
    return _err(unvec(kron(b, a) @ vec(x), 2, 2), a @ x @ b.T)


def gamma_n2_display():
    t = np.arange(1, 17).reshape(4, 4)
    s = lambda i, j: t[i - 1, j - 1]  # noqa: E731
    expected = [
        [s(1, 1), s(1, 2), s(2, 1), s(2, 2)],
        [s(1, 3), s(1, 4), s(2, 3), s(2, 4)],
        [s(3, 1), s(3, 2), s(4, 1), s(4, 2)],
        [s(3, 3), s(3, 4), s(4, 3), s(4, 4)],
    ]
    return _err(gamma(t), expected)


def tau_3_1():
    return _err(tau(3, 1), _unit(3, 0, 1) + _unit(3, 1, 2))


def delta_2_display():
    return _err(delta(2), [[0, 1, 0], [1, 0, 0], [0, 0, 1], [0, 1, 0]])


def delta_rank():
    return float(max(abs(matrix_rank(delta(n)) - (2 * n - 1)) for n in range(1, 9)))


def truncate_orientation():
    # a_1 sits on the first subdiagonal
    return _err(truncate([0, 0, 1], 4), tau(4, -1))


def u_alpha_beta_3():
    a, b = np.exp(0.7j), np.exp(-1.9j)
    return _err(u_alpha_beta(3, a, b), np.diag([a, b, np.conj(a) * b**2]))


def v_flip_transposes_toeplitz():
    rng = np.random.default_rng(12)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 7))
        t = random_toeplitz(n, rng)
        v = v_flip(n)
        worst = max(worst, _err(v.conj().T @ t @ v, t.T))
    return worst


def v_flip_not_transpose_general():
    m = np.arange(9).reshape(3, 3).astype(complex)
    v = v_flip(3)
    gap = _err(v.conj().T @ m @ v, m.T)
    return 0.0 if gap > 1e-3 else 1.0


def generators_are_gauge():
    sys = ToeplitzSystem(4)
    ok = is_gauge(u_alpha_beta(4, 1j, np.exp(1j * np.pi / 3)), sys) and is_gauge(v_flip(4), sys)
    return 0.0 if ok else 1.0


def classify_v_flip():
    g = classify(v_flip(5))
    return 0.0 if g.kind is Kind.ANTIDIAGONAL else 1.0 + abs(g.alpha - 1) + abs(g.beta - 1)


def act_antidiagonal_transpose():
    t = random_toeplitz(4, np.random.default_rng(13))
    return _err(act(GaugeElement(4, Kind.ANTIDIAGONAL, 1, 1), t), t.T)


def kernel_acts_trivially():
    rng = np.random.default_rng(14)
    t = random_toeplitz(5, rng)
    a = np.exp(2j * np.pi * rng.random())
    return _err(act(GaugeElement(5, Kind.DIAGONAL, a, a), t), t)


def omega2_is_kron_flip():
    x = _flip2()
    return _err(_omega2().omega, np.kron(x, x))


def omega1_omega2_are_pert():
    return 0.0 if is_pert(_omega1()) and is_pert(_omega2()) else 1.0


def omega1_omega2_transpose():
    t = np.array([[1.5, 2 - 1j], [0.5j, 1.5]])
    return max(_err(apply_map(_omega1(), t), t.T), _err(apply_map(_omega2(), t), t.T))


def transpose_w_anti_identity():
    anti = np.fliplr(np.eye(3))
    worst = 0.0
    for p in (_omega1(), _omega2()):
        worst = max(worst, _err(w_from_map(p).w, anti), _err(w_from_omega_solve(p).w, anti))
    return worst


def omega1_haagerup_two():
    return abs(haagerup_upper(_omega1().family) - 2.0)


def omega1_cb_lower_two():
    return abs(cb_lower(_omega1(), level=2, trials=4, seed=0) - 2.0)


def omega2_cb_one():
    return abs(cb_lower(_omega2(), level=1, trials=8, seed=0) - 1.0) + abs(cb_exact_cp(_omega2()) - 1.0)


def omega1_min_norm_one():
    return abs(min_norm(_omega1()) - 1.0)


def compressions_agree_on_toep2():
    e = lambda i, j: _unit(2, i, j)  # noqa: E731
    p = diagonal_compression(2)
    q = omega_from_family(KrausFamily(2, ((e(0, 1), e(0, 1).T), (e(1, 0), e(1, 0).T))))
    t = np.array([[0.3 + 1j, -2.0], [4j, 0.3 + 1j]])
    expected = t[0, 0] * np.eye(2)
    return max(_err(apply_map(p, t), expected), _err(apply_map(q, t), expected))


def gauge_element_in_pert_plus():
    g = GaugeElement(3, Kind.ANTIDIAGONAL, np.exp(0.4j), np.exp(2.1j))
    return 0.0 if is_pert_plus(gauge_pert(g)) else 1.0


def toep2_family_is_pert():
    values = (0, 1, 1j)
    bad = 0
    for a, b, c in itertools.product(values, repeat=3):
        for z1, z2, z4 in itertools.product((0, 1 + 1j), (-0.5, 0, 0.7), (-0.5, 0, 0.7)):
            bad += not is_pert(toep2_parametrized(a, b, c, z1, z2, z4))
            bad += check_conditions(toep2_parametrized(a, b, c, z1, z2, z4, z3=z1 + 1)).symmetric
    return float(bad)


def toep2_positive_display():
    z1, z2, z4 = 0.1 + 0.2j, 0.3, 0.4
    expected = [
        [1 - z2, 0, -z1, 1],
        [0, z2, 0, z1],
        [-np.conj(z1), 0, 1 - z2 - z4, 0],
        [1, np.conj(z1), 0, z2 + z4],
    ]
    return _err(gamma(toep2_parametrized(1, 0, 0, z1, z2, z4).omega), expected)


def pert_plus_norms_are_one():
    rng = np.random.default_rng(15)
    worst = 0.0
    for n in (2, 3, 4):
        p = random_pert_plus(n, rng)
        canonical = omega_from_family(kraus_from_choi(gamma(p.omega)))
        worst = max(worst, abs(cb_exact_cp(canonical) - 1), abs(haagerup_upper(canonical.family) - 1))
    return worst


def ucp_condition_on_pert_plus():
    rng = np.random.default_rng(16)
    for n in (2, 3, 4, 5):
        if not ucp_condition(w_from_map(random_pert_plus(n, rng))).holds:
            return 1.0
    return 0.0


def homomorphism():
    rng = np.random.default_rng(17)
    p, q = random_pert_plus(3, rng), random_pert_plus(3, rng)
    x = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    pq = p @ q
    nested = apply_map(p, apply_map(q, x))
    return max(_err(apply_map(pq, x), nested), _err(apply_map(PertElement(3, pq.omega), x), nested))


def gamma_of_transpose_not_psd():
    return 0.0 if not is_psd(gamma(_omega1().omega)) else 1.0


EXAMPLES: List[tuple] = [
    ("vec_3x3_order", vec_3x3_order, 0.0),
    ("vec_kron_identity", vec_kron_identity, 1e-12),
    ("gamma_n2_display", gamma_n2_display, 0.0),
    ("tau_3_1", tau_3_1, 0.0),
    ("delta_2_display", delta_2_display, 0.0),
    ("delta_rank", delta_rank, 0.0),
    ("truncate_orientation", truncate_orientation, 0.0),
    ("u_alpha_beta_3", u_alpha_beta_3, 1e-12),
    ("v_flip_transposes_toeplitz", v_flip_transposes_toeplitz, 1e-12),
    ("v_flip_not_transpose_general", v_flip_not_transpose_general, 0.0),
    ("generators_are_gauge", generators_are_gauge, 0.0),
    ("classify_v_flip", classify_v_flip, 0.0),
    ("act_antidiagonal_transpose", act_antidiagonal_transpose, 1e-12),
    ("kernel_acts_trivially", kernel_acts_trivially, 1e-10),
    ("omega2_is_kron_flip", omega2_is_kron_flip, 0.0),
    ("omega1_omega2_are_pert", omega1_omega2_are_pert, 0.0),
    ("omega1_omega2_transpose", omega1_omega2_transpose, 0.0),
    ("transpose_w_anti_identity", transpose_w_anti_identity, 1e-10),
    ("omega1_haagerup_two", omega1_haagerup_two, 1e-12),
    ("omega1_cb_lower_two", omega1_cb_lower_two, 1e-9),
    ("omega1_min_norm_one", omega1_min_norm_one, 1e-9),
    ("omega2_cb_one", omega2_cb_one, 1e-9),
    ("transpose_gamma_not_psd", gamma_of_transpose_not_psd, 0.0),
    ("compressions_agree_on_toep2", compressions_agree_on_toep2, 0.0),
    ("gauge_element_in_pert_plus", gauge_element_in_pert_plus, 0.0),
    ("toep2_family_is_pert", toep2_family_is_pert, 0.0),
    ("toep2_positive_display", toep2_positive_display, 0.0),
    ("pert_plus_norms_are_one", pert_plus_norms_are_one, 1e-9),
    ("ucp_condition_on_pert_plus", ucp_condition_on_pert_plus, 0.0),
    ("homomorphism", homomorphism, 1e-12),
]


def run_all() -> List[ExampleResult]:
    results = []
    for name, fn, limit in EXAMPLES:
        residual = float(fn())
        results.append(ExampleResult(name, residual <= limit, residual))
    return results
